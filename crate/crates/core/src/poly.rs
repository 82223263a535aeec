//! Roots of monic complex polynomials `τ^m + a_1 τ^{m-1} + … + a_m`.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Evaluate `τ^m + Σ a_j τ^{m-j}` by Horner's rule.
pub fn eval_monic(coeffs: &[Complex64], tau: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * tau + a)
}

fn eval_monic_derivative(coeffs: &[Complex64], tau: Complex64) -> Complex64 {
    let m = coeffs.len();
    let mut acc = Complex64::new(m as f64, 0.0);
    for (j, &a) in coeffs.iter().enumerate().take(m.saturating_sub(1)) {
        acc = acc * tau + a * (m - 1 - j) as f64;
    }
    acc
}

/// Coefficients `[a_1, …, a_m]` of `∏ (τ - r_j)`.
pub fn expand(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        poly = next;
    }
    poly.remove(0);
    poly
}

/// All `m` roots, repeated by multiplicity. For `m = 2` the order is the
/// `+√D` branch followed by the `−√D` branch of the quadratic formula.
pub fn monic_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    match coeffs {
        [] => Vec::new(),
        [a] => vec![-a],
        [b, c] => quadratic(*b, *c),
        _ => companion(coeffs),
    }
}

fn quadratic(b: Complex64, c: Complex64) -> Vec<Complex64> {
    let sqrt_d = (b * b - 4.0 * c).sqrt();
    let plus = -b + sqrt_d;
    let minus = -b - sqrt_d;
    // one branch is computed directly, the other from the product of roots
    if plus.norm() >= minus.norm() {
        let r_plus = plus / 2.0;
        let r_minus = if r_plus.norm() > 0.0 { c / r_plus } else { minus / 2.0 };
        vec![r_plus, r_minus]
    } else {
        let r_minus = minus / 2.0;
        let r_plus = if r_minus.norm() > 0.0 { c / r_minus } else { plus / 2.0 };
        vec![r_plus, r_minus]
    }
}

fn companion(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len();
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        mat[(0, j)] = -coeffs[j];
    }
    for i in 1..m {
        mat[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let mut roots: Vec<Complex64> = mat
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default();
    if roots.len() != m {
        roots = durand_kerner(coeffs);
    }
    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    roots
}

fn polish(coeffs: &[Complex64], mut r: Complex64) -> Complex64 {
    for _ in 0..8 {
        let d = eval_monic_derivative(coeffs, r);
        if d.norm() == 0.0 {
            break;
        }
        let step = eval_monic(coeffs, r) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let next = r - step;
        if eval_monic(coeffs, next).norm() >= eval_monic(coeffs, r).norm() {
            break;
        }
        r = next;
    }
    r
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..m).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let prev = roots.clone();
        for i in 0..m {
            let denom: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| roots[i] - roots[j])
                .product();
            if denom.norm() > 0.0 {
                let step = eval_monic(coeffs, roots[i]) / denom;
                roots[i] -= step;
            }
        }
        let moved = roots
            .iter()
            .zip(&prev)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        if moved < 1e-15 {
            break;
        }
    }
    roots
}
