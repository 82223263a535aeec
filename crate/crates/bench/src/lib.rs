//! Shared fixtures for the criterion benches.

use num_complex::Complex64;
use toruscauchy_core::{CauchyFactor, LatticeWindow, PeriodicCoefficient, ProductOperator, SpectralField, ToroidalSymbol};

/// `D_t + (√2 + cos t) D_x`.
pub fn variable_factor(n_t: usize) -> CauchyFactor {
    let c = PeriodicCoefficient::from_fn(n_t, |t| Complex64::new(2f64.sqrt() + t.cos(), 0.0)).unwrap();
    CauchyFactor::new(c, ToroidalSymbol::coordinate(1))
}

/// `D_t + (√2 + i·0.3 sin t) |D_x|`, whose phase has a large dynamic range.
pub fn damped_factor(n_t: usize) -> CauchyFactor {
    let c = PeriodicCoefficient::from_fn(n_t, |t| Complex64::new(2f64.sqrt(), 0.3 * t.sin())).unwrap();
    CauchyFactor::new(c, ToroidalSymbol::sqrt_laplacian())
}

/// `√2 D_x` as a constant factor with an exact mean declaration.
pub fn exact_sqrt2(n_t: usize) -> CauchyFactor {
    let c = PeriodicCoefficient::constant(n_t, Complex64::new(2f64.sqrt(), 0.0))
        .unwrap()
        .with_exact_mean("sqrt(2)".parse().unwrap())
        .unwrap();
    CauchyFactor::new(c, ToroidalSymbol::coordinate(1))
}

pub fn two_factor_product(n_t: usize) -> ProductOperator {
    ProductOperator::new(vec![variable_factor(n_t), damped_factor(n_t)])
}

pub fn random_field(dimension: usize, radius: i64, n_t: usize) -> SpectralField {
    let w = LatticeWindow::new(dimension, radius).unwrap();
    SpectralField::random_bandlimited(w, n_t, (n_t / 8) as i64, 42, true).unwrap()
}
