//! Cauchy factors `D_t + c(t)P(D_x)`, their ordered products, and their action
//! on spectral fields.
//!
//! Physically `D_t = −i∂_t`, so on the mode `ξ` a factor acts as
//! `û ↦ −i∂_t û + M(t,ξ)û` with `M(t,ξ) = c(t)p(ξ)`. Constant-coefficient
//! symbols are reported in the convention `τ − c₀p(ξ)`; the physical symbol is
//! `τ + c₀p(ξ)`. The two agree under `τ ↦ −τ`, which leaves every gap over
//! `τ ∈ Z` unchanged.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coefficient::{Antiderivative, PeriodicCoefficient};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier;
use crate::poly;
use crate::symbols::{ExactComplex, LatticePoint, ToroidalSymbol};

/// One factor `D_t + c(t)P(D_x)`.
#[derive(Clone, Debug)]
pub struct CauchyFactor {
    coefficient: PeriodicCoefficient,
    symbol: ToroidalSymbol,
    antiderivative: Antiderivative,
    /// `Φ_c(t) − c₀t` on the grid.
    phase_periodic: Vec<Complex64>,
    assume_hormander: bool,
}

impl CauchyFactor {
    pub fn new(coefficient: PeriodicCoefficient, symbol: ToroidalSymbol) -> Self {
        let antiderivative = coefficient.antiderivative();
        let phase_periodic = antiderivative.periodic_part();
        Self {
            coefficient,
            symbol,
            antiderivative,
            phase_periodic,
            assume_hormander: false,
        }
    }

    /// `D_t + value·P(D_x)` on an `n_t`-point grid.
    pub fn constant(n_t: usize, value: Complex64, symbol: ToroidalSymbol) -> Result<Self> {
        Ok(Self::new(PeriodicCoefficient::constant(n_t, value)?, symbol))
    }

    /// The bare `D_t`.
    pub fn d_t(n_t: usize) -> Result<Self> {
        Self::constant(n_t, Complex64::new(0.0, 0.0), ToroidalSymbol::coordinate(1))
    }

    /// Declare the lower bound `Im M(t,ξ) >= −η` as a hypothesis on this factor.
    pub fn with_hormander(mut self, declared: bool) -> Self {
        self.assume_hormander = declared;
        self
    }

    pub fn assumes_hormander(&self) -> bool {
        self.assume_hormander
    }

    pub fn coefficient(&self) -> &PeriodicCoefficient {
        &self.coefficient
    }

    pub fn symbol(&self) -> &ToroidalSymbol {
        &self.symbol
    }

    pub fn n_t(&self) -> usize {
        self.coefficient.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coefficient.is_constant()
    }

    pub fn antiderivative(&self) -> &Antiderivative {
        &self.antiderivative
    }

    pub fn symbol_at(&self, xi: &LatticePoint) -> Result<Complex64> {
        self.symbol.eval(xi)
    }

    /// `M(t_i, ξ)` on the grid.
    pub fn multiplier(&self, xi: &LatticePoint) -> Result<Vec<Complex64>> {
        let p = self.symbol.eval(xi)?;
        Ok(self.coefficient.samples().iter().map(|c| c * p).collect())
    }

    /// `M₀(ξ) = c₀ p(ξ)`.
    pub fn mean_multiplier(&self, xi: &LatticePoint) -> Result<Complex64> {
        Ok(self.coefficient.mean() * self.symbol.eval(xi)?)
    }

    /// Exact `M₀(ξ)`; needs an exact mean declaration and an exact symbol.
    pub fn exact_mean_multiplier(&self, xi: &LatticePoint) -> Result<ExactComplex> {
        let c0 = self.coefficient.exact_mean().ok_or_else(|| {
            Error::NotExact("coefficient mean has no exact declaration".to_string())
        })?;
        if !self.coefficient.is_constant() && self.coefficient.mean().im != 0.0 {
            return Err(Error::NotExact("complex coefficient mean".to_string()));
        }
        Ok(self.symbol.eval_exact(xi)?.scale_real(c0))
    }

    pub fn has_exact_data(&self) -> bool {
        self.coefficient.exact_mean().is_some() && self.symbol.has_exact_form()
    }

    /// Periodic part of the phase, `p(ξ)(Φ_c(t) − c₀t)`, on the grid.
    pub fn phase_periodic(&self, xi: &LatticePoint) -> Result<Vec<Complex64>> {
        let p = self.symbol.eval(xi)?;
        Ok(self.phase_periodic.iter().map(|v| v * p).collect())
    }

    /// `Φ(t_i, ξ) = p(ξ)Φ_c(t_i)`, the antiderivative of `M(·,ξ)` vanishing at 0.
    pub fn phase(&self, xi: &LatticePoint) -> Result<Vec<Complex64>> {
        let p = self.symbol.eval(xi)?;
        let c0 = self.coefficient.mean();
        Ok(self
            .phase_periodic
            .iter()
            .zip(fourier::grid(self.n_t()))
            .map(|(v, t)| (v + c0 * t) * p)
            .collect())
    }

    /// The normal-form factor `D_t + c₀P(D_x)`.
    pub fn freeze_mean(&self) -> Self {
        let mut out = Self::new(self.coefficient.frozen(), self.symbol.clone());
        out.assume_hormander = self.assume_hormander;
        out
    }

    /// `−i∂_t û + M(t,ξ)û` for one mode.
    pub fn apply_mode(&self, xi: &LatticePoint, u: &[Complex64]) -> Result<Vec<Complex64>> {
        if u.len() != self.n_t() {
            return Err(Error::GridMismatch(format!(
                "mode of length {} against a {}-point factor",
                u.len(),
                self.n_t()
            )));
        }
        let p = self.symbol.eval(xi)?;
        let du = fourier::derivative(u);
        Ok(du
            .iter()
            .zip(u)
            .zip(self.coefficient.samples())
            .map(|((d, v), c)| Complex64::new(d.im, -d.re) + c * p * v)
            .collect())
    }
}

pub fn apply_factor(factor: &CauchyFactor, u: &SpectralField) -> Result<SpectralField> {
    if u.n_t() != factor.n_t() {
        return Err(Error::GridMismatch(format!(
            "field on {} points, factor on {}",
            u.n_t(),
            factor.n_t()
        )));
    }
    let modes = u
        .window()
        .points()
        .par_iter()
        .enumerate()
        .map(|(m, xi)| factor.apply_mode(xi, u.mode(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralField::from_modes(u.window().clone(), u.n_t(), modes))
}

/// Ordered product `F_1 ∘ F_2 ∘ … ∘ F_m`; `F_m` acts first.
#[derive(Clone, Debug)]
pub struct ProductOperator {
    factors: Vec<CauchyFactor>,
}

impl ProductOperator {
    pub fn new(factors: Vec<CauchyFactor>) -> Self {
        Self { factors }
    }

    /// Factors `D_t + σ_j(D_x)` whose constant symbols multiply to
    /// `τ^m + Σ p_j(ξ)τ^{m−j}` in the `τ − σ_j` convention.
    pub fn from_polynomial(n_t: usize, coefficients: &[ToroidalSymbol]) -> Result<Self> {
        let factors = (0..coefficients.len())
            .map(|j| {
                let root = ToroidalSymbol::poly_root(coefficients.to_vec(), j)?;
                CauchyFactor::constant(n_t, Complex64::new(1.0, 0.0), root)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(factors))
    }

    pub fn factors(&self) -> &[CauchyFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.iter().all(CauchyFactor::is_constant)
    }

    /// `L₀`: every factor replaced by its normal form.
    pub fn normal_form(&self) -> Self {
        Self::new(self.factors.iter().map(CauchyFactor::freeze_mean).collect())
    }
}

pub fn apply_product(operator: &ProductOperator, u: &SpectralField) -> Result<SpectralField> {
    operator
        .factors()
        .iter()
        .rev()
        .try_fold(u.clone(), |acc, f| apply_factor(f, &acc))
}

/// `L_ρ = F_{ρ(1)} ∘ … ∘ F_{ρ(m)}` for a 1-based permutation `ρ`.
pub fn permute(operator: &ProductOperator, rho: &[usize]) -> Result<ProductOperator> {
    let m = operator.len();
    let mut seen = vec![false; m];
    for &r in rho {
        if r == 0 || r > m || seen[r - 1] {
            return Err(Error::InvalidPermutation(rho.to_vec()));
        }
        seen[r - 1] = true;
    }
    if rho.len() != m {
        return Err(Error::InvalidPermutation(rho.to_vec()));
    }
    Ok(ProductOperator::new(
        rho.iter().map(|&r| operator.factors[r - 1].clone()).collect(),
    ))
}

/// `‖(F_j F_k − F_k F_j)u‖_∞ / ‖F_j F_k u‖_∞`.
pub fn commutator_residual(
    first: &CauchyFactor,
    second: &CauchyFactor,
    u: &SpectralField,
) -> Result<f64> {
    if first.n_t() != second.n_t() {
        return Err(Error::GridMismatch("factors on different grids".to_string()));
    }
    let jk = apply_factor(first, &apply_factor(second, u)?)?;
    let kj = apply_factor(second, &apply_factor(first, u)?)?;
    Ok(jk.sub(&kj)?.sup_norm() / jk.sup_norm().max(1e-30))
}

/// `∏_j (τ − c₀,j p_j(ξ))` for a product with t-constant coefficients.
pub fn constant_symbol(operator: &ProductOperator, tau: i64, xi: &LatticePoint) -> Result<Complex64> {
    operator
        .factors()
        .iter()
        .enumerate()
        .try_fold(Complex64::new(1.0, 0.0), |acc, (j, f)| {
            if !f.is_constant() {
                return Err(Error::VariableCoefficient(j + 1));
            }
            Ok(acc * (Complex64::new(tau as f64, 0.0) - f.mean_multiplier(xi)?))
        })
}

/// Roots `σ_j(ξ)` of `τ^m + Σ p_j(ξ)τ^{m−j}`.
pub fn symbol_roots(coefficients: &[ToroidalSymbol], xi: &LatticePoint) -> Result<Vec<Complex64>> {
    let values = coefficients
        .iter()
        .map(|s| s.eval(xi))
        .collect::<Result<Vec<_>>>()?;
    Ok(poly::monic_roots(&values))
}

pub fn freeze_mean(factor: &CauchyFactor) -> CauchyFactor {
    factor.freeze_mean()
}
