use std::f64::consts::PI;

use num_complex::Complex64;

/// Nearest integer `τ*` to `z` and the distance `d = min_{τ∈Z} |τ − z|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegerGap {
    pub tau: i64,
    pub distance: f64,
}

/// `τ* = round(Re z)` with ties to even; `d = √(dist(Re z, Z)² + (Im z)²)`.
pub fn integer_gap(z: Complex64) -> IntegerGap {
    let tau = z.re.round_ties_even();
    IntegerGap {
        tau: tau as i64,
        distance: (z.re - tau).hypot(z.im),
    }
}

/// `e^{2πiz} − 1`, evaluated without cancellation near the integers.
pub fn torus_denominator(z: Complex64) -> Complex64 {
    let x = 2.0 * PI * (z.re - z.re.round_ties_even());
    let y = -2.0 * PI * z.im;
    // e^{y+ix} − 1 = expm1(y)cos x − 2sin²(x/2) + i e^y sin x
    let half = (0.5 * x).sin();
    Complex64::new(y.exp_m1() * x.cos() - 2.0 * half * half, y.exp() * x.sin())
}

/// `|1 − e^{2πiz}|`.
pub fn torus_gap(z: Complex64) -> f64 {
    torus_denominator(z).norm()
}
