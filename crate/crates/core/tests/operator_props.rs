use num_complex::Complex64;
use proptest::prelude::*;
use toruscauchy_core::operators::{apply_factor, apply_product, permute};
use toruscauchy_core::{CauchyFactor, LatticeWindow, PeriodicCoefficient, ProductOperator, SpectralField, ToroidalSymbol};

const N_T: usize = 32;

fn factor(a: f64, b: f64, s: usize) -> CauchyFactor {
    let c = PeriodicCoefficient::from_fn(N_T, |t| Complex64::new(a + b * t.cos(), 0.1 * b * t.sin())).unwrap();
    let symbol = match s {
        0 => ToroidalSymbol::coordinate(1),
        1 => ToroidalSymbol::sqrt_laplacian(),
        _ => ToroidalSymbol::laplacian(),
    };
    CauchyFactor::new(c, symbol)
}

fn field(seed: u64) -> SpectralField {
    SpectralField::random_bandlimited(LatticeWindow::new(1, 6).unwrap(), N_T, 5, seed, false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_is_linear(a in -2.0f64..2.0, b in -1.0f64..1.0, s in 0usize..3, k in -3.0f64..3.0, seeds in (0u64..1000, 0u64..1000)) {
        let f = factor(a, b, s);
        let (u, v) = (field(seeds.0), field(seeds.1));
        let k = Complex64::new(k, 0.5);
        let lhs = apply_factor(&f, &u.scale(k).add(&v).unwrap()).unwrap();
        let rhs = apply_factor(&f, &u).unwrap().scale(k).add(&apply_factor(&f, &v).unwrap()).unwrap();
        prop_assert!(lhs.relative_distance(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn product_applies_right_to_left(a in -2.0f64..2.0, b in -1.0f64..1.0, seed in 0u64..1000) {
        let (f1, f2) = (factor(a, b, 0), factor(b, a, 2));
        let u = field(seed);
        let l = ProductOperator::new(vec![f1.clone(), f2.clone()]);
        let direct = apply_factor(&f1, &apply_factor(&f2, &u).unwrap()).unwrap();
        prop_assert!(apply_product(&l, &u).unwrap().relative_distance(&direct).unwrap() <= 1e-14);
        let swapped = permute(&l, &[2, 1]).unwrap();
        let reverse = apply_factor(&f2, &apply_factor(&f1, &u).unwrap()).unwrap();
        prop_assert!(apply_product(&swapped, &u).unwrap().relative_distance(&reverse).unwrap() <= 1e-14);
    }
}

#[test]
fn d_t_differentiates_exactly() {
    // D_t e^{ikt} = k e^{ikt}
    let w = LatticeWindow::new(1, 2).unwrap();
    let u = SpectralField::from_fn(w, N_T, |xi, t| Complex64::new(0.0, (xi.coords()[0] + 3) as f64 * t).exp()).unwrap();
    let du = apply_factor(&CauchyFactor::d_t(N_T).unwrap(), &u).unwrap();
    for (xi, m) in du.modes() {
        let k = (xi.coords()[0] + 3) as f64;
        let want = u.mode_at(xi).unwrap().iter().map(|v| v * k);
        for (a, b) in m.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
