use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use toruscauchy_core::diophantine::{best_rational_approximations, integer_gap, surd_convergents, torus_gap};
use toruscauchy_core::QuadraticReal;

/// Continued fraction of `p/q` by the Euclidean algorithm.
fn euclid(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while q != 0 {
        let a = p.div_euclid(q);
        out.push(a);
        (p, q) = (q, p - a * q);
    }
    out
}

fn convergents_of(terms: &[i64]) -> Vec<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, terms[0], 1i64);
    let mut out = vec![(p1, q1)];
    for &a in &terms[1..] {
        (p0, q0, p1, q1) = (p1, q1, a * p1 + p0, a * q1 + q0);
        out.push((p1, q1));
    }
    out
}

proptest! {
    #[test]
    fn rational_convergents_follow_euclid(p in -5000i64..5000, q in 1i64..5000) {
        let x = BigRational::new(BigInt::from(p), BigInt::from(q));
        let got: Vec<(i64, i64)> = best_rational_approximations(&x, 64)
            .iter()
            .map(|c| (c.p.to_string().parse().unwrap(), c.q.to_string().parse().unwrap()))
            .collect();
        let g = num_integer::gcd(p, q);
        let want = convergents_of(&euclid(p / g, q / g));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn gap_matches_brute_force(re in -50.0f64..50.0, im in -2.0f64..2.0) {
        let z = Complex64::new(re, im);
        let g = integer_gap(z);
        let brute = (re.floor() as i64 - 1..=re.ceil() as i64 + 1)
            .map(|k| (z - k as f64).norm())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((g.distance - brute).abs() <= 1e-12);
    }

    #[test]
    fn torus_gap_is_periodic_and_even(x in -0.5f64..0.5, k in -20i64..20) {
        let a = torus_gap(Complex64::new(x, 0.0));
        let b = torus_gap(Complex64::new(x + k as f64, 0.0));
        let c = torus_gap(Complex64::new(-x, 0.0));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        prop_assert!((a - c).abs() <= 1e-12 * (1.0 + a));
        // closed form on the real line
        prop_assert!((a - 2.0 * (std::f64::consts::PI * x).sin().abs()).abs() <= 1e-12);
    }
}

#[test]
fn sqrt3_convergents_satisfy_pell() {
    // √3 = [1; 1, 2, 1, 2, ...]; convergents alternate p² − 3q² = −2, 1
    let x: QuadraticReal = "sqrt(3)".parse().unwrap();
    let cs = surd_convergents(&x, 30);
    assert_eq!(cs.len(), 30);
    for (n, c) in cs.iter().enumerate() {
        let v = &c.p * &c.p - BigInt::from(3) * &c.q * &c.q;
        let want = if n % 2 == 0 { -2 } else { 1 };
        assert_eq!(v, BigInt::from(want), "convergent {n}");
    }
}

#[test]
fn surd_gap_equals_pell_oracle() {
    // (p + q√2)(p − q√2) = ±1 for the convergents of √2
    let (mut p, mut q) = (1u64, 1u64);
    while q < 1 << 40 {
        let x = QuadraticReal::new(
            BigRational::from_integer(BigInt::from(q)),
            BigRational::from_integer(BigInt::from(2)),
        );
        let g = x.integer_gap();
        assert_eq!(g.tau, BigInt::from(p));
        let oracle = 1.0 / (p as f64 + q as f64 * 2f64.sqrt());
        assert!((g.value / oracle - 1.0).abs() < 1e-13, "q={q}");
        (p, q) = (p + 2 * q, p + q);
    }
}
