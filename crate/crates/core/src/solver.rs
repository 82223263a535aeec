//! Closed-form periodic solutions of `F u = f`, mode by mode, and their
//! chaining through ordered products.
//!
//! On the mode `ξ` the physical equation `−i∂_t û + M û = f̂` is rewritten as
//! `∂_t û + iM û = ĝ` with `ĝ = i f̂`; the per-mode entry points below take `ĝ`.
//! With `Φ(t) = ∫₀^t M` and `e^{iΦ(t)} = e^{iM₀t}ψ(t)`, `ψ` periodic:
//! - off resonance the unique periodic solution is
//!   `û = ψ⁻¹ Σ_k (ψĝ)^(k) e^{ikt} / (i(M₀ + k))`;
//! - at a resonance `M₀ = K ∈ Z` a periodic solution exists iff
//!   `∫₀^{2π} e^{iΦ}ĝ = 0`, and then `û = e^{−iΦ(t)} ∫₀^t e^{iΦ}ĝ`.
//!
//! When `|ψ|` spans many orders of magnitude the product `ψĝ` cannot be
//! resolved in floating point, and the same formulas are evaluated by
//! composite Simpson quadrature marching in the stable time direction.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diophantine::{integer_gap, is_resonant, torus_denominator, torus_gap, ResonanceMode};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier;
use crate::operators::{apply_factor, apply_product, CauchyFactor, ProductOperator};
use crate::symbols::LatticePoint;

pub const DEFAULT_TOL_Z: f64 = 1e-9;
pub const NEAR_RESONANT_GAP: f64 = 1e-6;
pub const DEFAULT_TOL_COMPAT: f64 = 1e-8;
/// Largest spread of `ln |ψ|` handled by the spectral evaluation.
const SPECTRAL_LOG_RANGE: f64 = 8.0;
/// Fine points per grid cell in the quadrature path (four Simpson panels).
const SIMPSON_REFINEMENT: usize = 8;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Integral over `[t, t + 2π]`.
    Forward,
    /// Integral over `[t − 2π, t]`.
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    /// Spectral when `|ψ|` is tame, Simpson otherwise.
    Auto,
    Spectral,
    Simpson,
}

impl Integrator {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Auto => "auto",
            Self::Spectral => "spectral",
            Self::Simpson => "simpson",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Modes with `|1 − e^{2πiM₀}| <= tol_z` take the resonant branch.
    pub tol_z: f64,
    /// Relative threshold for the compatibility integral.
    pub tol_compat: f64,
    pub resonance: ResonanceMode,
    pub integrator: Integrator,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_z: DEFAULT_TOL_Z,
            tol_compat: DEFAULT_TOL_COMPAT,
            resonance: ResonanceMode::default(),
            integrator: Integrator::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeStatus {
    Nonresonant,
    /// Solved off resonance with `torus_gap(M₀) <= 1e-6`.
    NearResonant,
    ResonantOk,
    ResonantIncompatible,
}

impl ModeStatus {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Nonresonant => "NONRESONANT",
            Self::NearResonant => "NEAR_RESONANT",
            Self::ResonantOk => "RESONANT_OK",
            Self::ResonantIncompatible => "RESONANT_INCOMPATIBLE",
        }
    }

    pub fn is_resonant(&self) -> bool {
        matches!(self, Self::ResonantOk | Self::ResonantIncompatible)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSolveOutcome {
    pub xi: LatticePoint,
    pub status: ModeStatus,
    pub solution: Option<Vec<Complex64>>,
    /// `∫₀^{2π} e^{iΦ}ĝ`, resonant modes only.
    pub compatibility: Option<Complex64>,
    /// `e^{2πiM₀} − 1`, nonresonant modes only.
    pub denominator: Option<Complex64>,
    pub integrator: Integrator,
    /// Relative residual of the physical equation, when a solution exists.
    pub residual: Option<f64>,
}

struct ModeSetup {
    m0: Complex64,
    /// Periodic part `Φ(t) − M₀t` on the grid.
    tilde: Vec<Complex64>,
}

impl ModeSetup {
    fn new(factor: &CauchyFactor, xi: &LatticePoint) -> Result<Self> {
        Ok(Self {
            m0: factor.mean_multiplier(xi)?,
            tilde: factor.phase_periodic(xi)?,
        })
    }

    /// `ψ = e^{iΦ̃}`.
    fn psi(&self) -> Vec<Complex64> {
        self.tilde.iter().map(|p| (I * p).exp()).collect()
    }

    fn log_range(&self) -> f64 {
        let (lo, hi) = self
            .tilde
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p.im), hi.max(p.im)));
        hi - lo
    }

    fn pick(&self, integrator: Integrator) -> Integrator {
        match integrator {
            Integrator::Auto if self.log_range() > SPECTRAL_LOG_RANGE => Integrator::Simpson,
            Integrator::Auto => Integrator::Spectral,
            other => other,
        }
    }
}

fn check_len(factor: &CauchyFactor, g: &[Complex64]) -> Result<()> {
    if g.len() != factor.n_t() {
        return Err(Error::GridMismatch(format!(
            "mode of length {} against a {}-point factor",
            g.len(),
            factor.n_t()
        )));
    }
    Ok(())
}

/// `Σ_k ĉ(k) e^{ikt} / (i(z + k))` on the grid; the Nyquist term is split
/// between `±N/2`.
fn divide_spectrum(h: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let n = h.len();
    let mut c = fourier::forward(h);
    for (j, v) in c.iter_mut().enumerate() {
        if 2 * j == n {
            let k = (n / 2) as f64;
            *v *= 0.5 * (1.0 / (I * (z + k)) + 1.0 / (I * (z - k)));
        } else {
            *v /= I * (z + fourier::wavenumber(j, n) as f64);
        }
    }
    fourier::inverse(&c)
}

fn spectral_forward(setup: &ModeSetup, g: &[Complex64]) -> Vec<Complex64> {
    let psi = setup.psi();
    let h: Vec<_> = psi.iter().zip(g).map(|(p, v)| p * v).collect();
    divide_spectrum(&h, setup.m0)
        .iter()
        .zip(&psi)
        .map(|(s, p)| s / p)
        .collect()
}

/// Reverse formula through the cumulative integral
/// `G(t) = ∫₀^t e^{iΦ}ĝ`: `∫_{t−2π}^t e^{iΦ}ĝ = G(t) + E⁻¹(G(2π) − G(t))`.
fn spectral_reverse(setup: &ModeSetup, g: &[Complex64]) -> Vec<Complex64> {
    let n = g.len();
    let psi = setup.psi();
    let h: Vec<_> = psi.iter().zip(g).map(|(p, v)| p * v).collect();
    let s = divide_spectrum(&h, setup.m0);
    // Σ_k ĥ(k)/(i(M₀+k)) = S(0), so G(t) = e^{iM₀t}S(t) − S(0)
    let s0 = s[0];
    let denom = torus_denominator(setup.m0);
    let e = denom + 1.0;
    let total = denom * s0;
    let one_minus_inv = denom / e;
    fourier::grid(n)
        .iter()
        .zip(&s)
        .zip(&psi)
        .map(|((&t, &st), &p)| {
            let lift = (I * setup.m0 * t).exp();
            let g_t = lift * st - s0;
            let integral = g_t + (total - g_t) / e;
            integral / one_minus_inv / (lift * p)
        })
        .collect()
}

struct FineGrid {
    h: f64,
    /// `Φ(s_j)` for `j = 0..=M`.
    phase: Vec<Complex64>,
    /// `ĝ(s_j)` for `j = 0..=M`.
    g: Vec<Complex64>,
}

impl FineGrid {
    fn new(setup: &ModeSetup, g: &[Complex64]) -> Self {
        let m = g.len() * SIMPSON_REFINEMENT;
        let h = 2.0 * PI / m as f64;
        let mut tilde = fourier::upsample(&setup.tilde, SIMPSON_REFINEMENT);
        let mut gf = fourier::upsample(g, SIMPSON_REFINEMENT);
        tilde.push(tilde[0]);
        gf.push(gf[0]);
        let phase = tilde
            .iter()
            .enumerate()
            .map(|(j, p)| setup.m0 * (j as f64 * h) + p)
            .collect();
        Self { h, phase, g: gf }
    }

    fn len(&self) -> usize {
        self.phase.len() - 1
    }

    /// `β_j = −∫_{s_j}^{2π} e^{i(Φ(s) − Φ(s_j))}ĝ(s) ds` at even `j`.
    fn backward_tail(&self) -> Vec<Complex64> {
        let m = self.len();
        let (w, g, h) = (&self.phase, &self.g, self.h);
        let mut beta = vec![ZERO; m + 1];
        for j in (0..m).step_by(2).rev() {
            let e1 = (I * (w[j + 1] - w[j])).exp();
            let e2 = (I * (w[j + 2] - w[j])).exp();
            let panel = h / 3.0 * (g[j] + 4.0 * e1 * g[j + 1] + e2 * g[j + 2]);
            beta[j] = e2 * beta[j + 2] - panel;
        }
        beta
    }

    /// `δ_j = ∫_0^{s_j} e^{−i(Φ(s_j) − Φ(s))}ĝ(s) ds` at even `j`.
    fn forward_head(&self) -> Vec<Complex64> {
        let m = self.len();
        let (w, g, h) = (&self.phase, &self.g, self.h);
        let mut delta = vec![ZERO; m + 1];
        for j in (0..m).step_by(2) {
            let e0 = (-I * (w[j + 2] - w[j])).exp();
            let e1 = (-I * (w[j + 2] - w[j + 1])).exp();
            let panel = h / 3.0 * (e0 * g[j] + 4.0 * e1 * g[j + 1] + g[j + 2]);
            delta[j + 2] = e0 * delta[j] + panel;
        }
        delta
    }
}

fn simpson_forward(setup: &ModeSetup, g: &[Complex64]) -> Vec<Complex64> {
    let fine = FineGrid::new(setup, g);
    let m = fine.len();
    let beta = fine.backward_tail();
    // û(s_j) = e^{i(Φ(2π) − Φ(s_j))}û(0) + β_j with û(2π) = û(0)
    let u0 = -beta[0] / torus_denominator(setup.m0);
    (0..g.len())
        .map(|i| {
            let j = i * SIMPSON_REFINEMENT;
            (I * (fine.phase[m] - fine.phase[j])).exp() * u0 + beta[j]
        })
        .collect()
}

fn simpson_reverse(setup: &ModeSetup, g: &[Complex64]) -> Vec<Complex64> {
    let fine = FineGrid::new(setup, g);
    let m = fine.len();
    let delta = fine.forward_head();
    // û(s_j) = e^{−i(Φ(s_j) − Φ(0))}û(0) + δ_j with û(2π) = û(0)
    let denom = torus_denominator(setup.m0);
    let u0 = delta[m] * (denom + 1.0) / denom;
    (0..g.len())
        .map(|i| {
            let j = i * SIMPSON_REFINEMENT;
            (-I * (fine.phase[j] - fine.phase[0])).exp() * u0 + delta[j]
        })
        .collect()
}

fn ensure_nonresonant(m0: Complex64, xi: &LatticePoint, tol_z: f64) -> Result<()> {
    if torus_gap(m0) <= tol_z {
        return Err(Error::ResonantRouting(xi.coords().to_vec()));
    }
    Ok(())
}

fn nonresonant(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    g: &[Complex64],
    orientation: Orientation,
    options: &SolverOptions,
) -> Result<(Vec<Complex64>, Integrator)> {
    check_len(factor, g)?;
    let setup = ModeSetup::new(factor, xi)?;
    ensure_nonresonant(setup.m0, xi, options.tol_z)?;
    let used = setup.pick(options.integrator);
    let u = match (used, orientation) {
        (Integrator::Simpson, Orientation::Forward) => simpson_forward(&setup, g),
        (Integrator::Simpson, Orientation::Reverse) => simpson_reverse(&setup, g),
        (_, Orientation::Forward) => spectral_forward(&setup, g),
        (_, Orientation::Reverse) => spectral_reverse(&setup, g),
    };
    Ok((u, used))
}

/// Periodic solution of `∂_t û + iMû = ĝ` on a nonresonant mode.
pub fn solve_factor_nonresonant(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    g: &[Complex64],
    options: &SolverOptions,
) -> Result<Vec<Complex64>> {
    nonresonant(factor, xi, g, Orientation::Forward, options).map(|(u, _)| u)
}

struct ResonantPieces {
    compatibility: Complex64,
    /// `e^{iΦ(t)}·û(t)` candidate: `∫₀^t e^{iΦ}ĝ` minus the mean part.
    solution: Vec<Complex64>,
}

fn resonant_pieces(setup: &ModeSetup, g: &[Complex64], used: Integrator) -> ResonantPieces {
    let n = g.len();
    let k = setup.m0.re.round_ties_even();
    match used {
        Integrator::Simpson => {
            let fine = FineGrid::new(setup, g);
            let beta = fine.backward_tail();
            // with a vanishing period integral, ∫₀^t = −∫_t^{2π}
            ResonantPieces {
                compatibility: -beta[0],
                solution: (0..n).map(|i| beta[i * SIMPSON_REFINEMENT]).collect(),
            }
        }
        _ => {
            let psi = setup.psi();
            let grid = fourier::grid(n);
            let lift: Vec<_> = grid.iter().map(|&t| Complex64::from_polar(1.0, k * t)).collect();
            let q: Vec<_> = (0..n).map(|i| lift[i] * psi[i] * g[i]).collect();
            let mean = q.iter().sum::<Complex64>() / n as f64;
            let big_q = fourier::periodic_antiderivative(&q);
            ResonantPieces {
                compatibility: 2.0 * PI * mean,
                solution: (0..n).map(|i| big_q[i] / (lift[i] * psi[i])).collect(),
            }
        }
    }
}

fn require_resonant(m0: Complex64, xi: &LatticePoint, tol_z: f64) -> Result<()> {
    if torus_gap(m0) > tol_z.max(2.0 * PI * crate::diophantine::DEFAULT_RESONANCE_TOL) {
        return Err(Error::NotResonant(xi.coords().to_vec()));
    }
    Ok(())
}

/// `∫₀^{2π} e^{iΦ(t,ξ)} v̂(t) dt` on a resonant mode.
pub fn compatibility_integral(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    v: &[Complex64],
) -> Result<Complex64> {
    check_len(factor, v)?;
    let setup = ModeSetup::new(factor, xi)?;
    require_resonant(setup.m0, xi, DEFAULT_TOL_Z)?;
    let used = setup.pick(Integrator::Auto);
    Ok(resonant_pieces(&setup, v, used).compatibility)
}

/// Resonant-branch solve of `∂_t û + iMû = v̂`.
pub fn solve_factor_resonant(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    v: &[Complex64],
    options: &SolverOptions,
) -> Result<ModeSolveOutcome> {
    check_len(factor, v)?;
    let setup = ModeSetup::new(factor, xi)?;
    require_resonant(setup.m0, xi, options.tol_z)?;
    let used = setup.pick(options.integrator);
    let pieces = resonant_pieces(&setup, v, used);
    let scale = 1.0 + fourier::sup_norm(v);
    let ok = pieces.compatibility.norm() <= options.tol_compat * scale;
    Ok(ModeSolveOutcome {
        xi: xi.clone(),
        status: if ok {
            ModeStatus::ResonantOk
        } else {
            ModeStatus::ResonantIncompatible
        },
        solution: ok.then_some(pieces.solution),
        compatibility: Some(pieces.compatibility),
        denominator: None,
        integrator: used,
        residual: None,
    })
}

fn routes_resonant(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    options: &SolverOptions,
) -> Result<bool> {
    let m0 = factor.mean_multiplier(xi)?;
    Ok(is_resonant(factor, xi, options.resonance)? || torus_gap(m0) <= options.tol_z)
}

fn relative(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    diff / fourier::sup_norm(b).max(1e-30)
}

/// Solve one mode of the physical equation `−i∂_t û + Mû = f̂`.
pub fn solve_mode(
    factor: &CauchyFactor,
    xi: &LatticePoint,
    f: &[Complex64],
    orientation: Orientation,
    options: &SolverOptions,
) -> Result<ModeSolveOutcome> {
    let g: Vec<_> = f.iter().map(|v| I * v).collect();
    let mut outcome = if routes_resonant(factor, xi, options)? {
        solve_factor_resonant(factor, xi, &g, options)?
    } else {
        let m0 = factor.mean_multiplier(xi)?;
        let (u, used) = nonresonant(factor, xi, &g, orientation, options)?;
        let denominator = torus_denominator(m0);
        ModeSolveOutcome {
            xi: xi.clone(),
            status: if denominator.norm() <= NEAR_RESONANT_GAP {
                ModeStatus::NearResonant
            } else {
                ModeStatus::Nonresonant
            },
            solution: Some(u),
            compatibility: None,
            denominator: Some(denominator),
            integrator: used,
            residual: None,
        }
    };
    if let Some(u) = &outcome.solution {
        outcome.residual = Some(relative(&factor.apply_mode(xi, u)?, f));
    }
    Ok(outcome)
}

/// Field-level solve of `F u = f`.
#[derive(Clone, Debug)]
pub struct FactorSolve {
    pub field: SpectralField,
    pub outcomes: Vec<ModeSolveOutcome>,
}

impl FactorSolve {
    pub fn is_partial(&self) -> bool {
        self.field.is_partial()
    }

    pub fn incompatible_modes(&self) -> Vec<LatticePoint> {
        self.outcomes
            .iter()
            .filter(|o| o.status == ModeStatus::ResonantIncompatible)
            .map(|o| o.xi.clone())
            .collect()
    }
}

pub fn solve_factor(
    factor: &CauchyFactor,
    f: &SpectralField,
    orientation: Orientation,
    options: &SolverOptions,
) -> Result<FactorSolve> {
    if f.n_t() != factor.n_t() {
        return Err(Error::GridMismatch(format!(
            "field on {} points, factor on {}",
            f.n_t(),
            factor.n_t()
        )));
    }
    let outcomes = f
        .window()
        .points()
        .par_iter()
        .enumerate()
        .map(|(m, xi)| solve_mode(factor, xi, f.mode(m), orientation, options))
        .collect::<Result<Vec<_>>>()?;
    let modes = outcomes
        .iter()
        .map(|o| o.solution.clone().unwrap_or_else(|| vec![ZERO; f.n_t()]))
        .collect();
    let mut field = SpectralField::from_modes(f.window().clone(), f.n_t(), modes);
    if outcomes.iter().any(|o| o.solution.is_none()) {
        field.mark_partial();
    }
    Ok(FactorSolve { field, outcomes })
}

/// Where a chained solve stopped.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    /// 1-based index of the factor in `L = F_1 ∘ … ∘ F_m`.
    pub factor: usize,
    pub modes: Vec<LatticePoint>,
}

#[derive(Clone, Debug)]
pub struct StageReport {
    /// 1-based factor index.
    pub factor: usize,
    pub outcomes: Vec<ModeSolveOutcome>,
    pub partial: bool,
}

#[derive(Clone, Debug)]
pub struct ProductSolve {
    /// Solution of the last completed stage; partial when the chain stopped.
    pub field: SpectralField,
    pub stages: Vec<StageReport>,
    pub obstruction: Option<Obstruction>,
}

impl ProductSolve {
    pub fn is_partial(&self) -> bool {
        self.obstruction.is_some()
    }
}

/// Solve `L u = f` through `F_1 v_1 = f`, `F_2 v_2 = v_1`, …, `F_m u = v_{m−1}`.
pub fn solve_product(
    operator: &ProductOperator,
    f: &SpectralField,
    orientation: Orientation,
    options: &SolverOptions,
) -> Result<ProductSolve> {
    let mut current = f.clone();
    let mut stages = Vec::with_capacity(operator.len());
    for (j, factor) in operator.factors().iter().enumerate() {
        let solve = solve_factor(factor, &current, orientation, options)?;
        let partial = solve.is_partial();
        let modes = solve.incompatible_modes();
        stages.push(StageReport {
            factor: j + 1,
            outcomes: solve.outcomes,
            partial,
        });
        current = solve.field;
        if partial {
            return Ok(ProductSolve {
                field: current,
                stages,
                obstruction: Some(Obstruction { factor: j + 1, modes }),
            });
        }
    }
    Ok(ProductSolve {
        field: current,
        stages,
        obstruction: None,
    })
}

/// `‖F u − f‖_∞ / max(‖f‖_∞, 1e-30)`.
pub fn factor_residual(factor: &CauchyFactor, u: &SpectralField, f: &SpectralField) -> Result<f64> {
    Ok(apply_factor(factor, u)?.sub(f)?.sup_norm() / f.sup_norm().max(1e-30))
}

/// `‖L u − f‖_∞ / max(‖f‖_∞, 1e-30)`.
pub fn residual(operator: &ProductOperator, u: &SpectralField, f: &SpectralField) -> Result<f64> {
    Ok(apply_product(operator, u)?.sub(f)?.sup_norm() / f.sup_norm().max(1e-30))
}

/// Distance of `M₀(ξ)` to the integers; convenience for reports.
pub fn mean_gap(factor: &CauchyFactor, xi: &LatticePoint) -> Result<f64> {
    Ok(integer_gap(factor.mean_multiplier(xi)?).distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::PeriodicCoefficient;
    use crate::symbols::{LatticeWindow, ToroidalSymbol};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(v: i64) -> LatticePoint {
        LatticePoint::new(vec![v])
    }

    fn constant(n: usize, value: Complex64) -> CauchyFactor {
        CauchyFactor::constant(n, value, ToroidalSymbol::coordinate(1)).unwrap()
    }

    fn variable(n: usize, f: impl Fn(f64) -> Complex64) -> CauchyFactor {
        CauchyFactor::new(PeriodicCoefficient::from_fn(n, f).unwrap(), ToroidalSymbol::coordinate(1))
    }

    fn on_grid(n: usize, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        fourier::grid(n).into_iter().map(f).collect()
    }

    #[test]
    fn constant_mode_law() {
        let opts = SolverOptions::default();
        let ones = vec![c(1.0, 0.0); 32];
        let half = solve_factor_nonresonant(&constant(32, c(0.5, 0.0)), &pt(1), &ones, &opts).unwrap();
        assert!(half.iter().all(|v| (v - c(0.0, -2.0)).norm() < 1e-12));
        let imag = solve_factor_nonresonant(&constant(32, c(0.0, 1.0)), &pt(1), &ones, &opts).unwrap();
        assert!(imag.iter().all(|v| (v - c(-1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn resonant_routing_is_refused() {
        let opts = SolverOptions::default();
        let err = solve_factor_nonresonant(&constant(32, c(0.5, 0.0)), &pt(2), &vec![c(1.0, 0.0); 32], &opts);
        assert_eq!(err, Err(Error::ResonantRouting(vec![2])));
        let f = constant(32, c(2f64.sqrt(), 0.0));
        assert_eq!(compatibility_integral(&f, &pt(3), &vec![c(1.0, 0.0); 32]), Err(Error::NotResonant(vec![3])));
    }

    #[test]
    fn compatibility_examples() {
        let d_t = CauchyFactor::d_t(64).unwrap();
        let e = on_grid(64, |t| Complex64::from_polar(1.0, t));
        assert!(compatibility_integral(&d_t, &pt(1), &e).unwrap().norm() < 1e-14);
        let one = vec![c(1.0, 0.0); 64];
        assert!((compatibility_integral(&d_t, &pt(1), &one).unwrap() - 2.0 * PI).norm() < 1e-13);
        let cos = variable(64, |t| c(t.cos(), 0.0));
        let v = on_grid(64, |t| Complex64::from_polar(1.0, -t.sin()));
        assert!((compatibility_integral(&cos, &pt(1), &v).unwrap() - 2.0 * PI).norm() < 1e-12);
    }

    #[test]
    fn resonant_examples() {
        let opts = SolverOptions::default();
        let d_t = CauchyFactor::d_t(64).unwrap();
        let e = on_grid(64, |t| Complex64::from_polar(1.0, t));
        let out = solve_factor_resonant(&d_t, &pt(1), &e, &opts).unwrap();
        assert_eq!(out.status, ModeStatus::ResonantOk);
        for (u, t) in out.solution.unwrap().iter().zip(fourier::grid(64)) {
            assert!((u - (Complex64::from_polar(1.0, t) - 1.0) / I).norm() < 1e-13);
        }
        let out = solve_factor_resonant(&d_t, &pt(1), &vec![c(1.0, 0.0); 64], &opts).unwrap();
        assert_eq!(out.status, ModeStatus::ResonantIncompatible);
        assert!(out.solution.is_none());
        let cos = variable(64, |t| c(t.cos(), 0.0));
        let v = on_grid(64, |t| I * t.cos() * Complex64::from_polar(1.0, -t.sin()));
        let out = solve_factor_resonant(&cos, &pt(1), &v, &opts).unwrap();
        for (u, t) in out.solution.unwrap().iter().zip(fourier::grid(64)) {
            assert!((u - I * t.sin() * Complex64::from_polar(1.0, -t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn orientations_and_integrators_agree() {
        let f = variable(128, |t| c(2f64.sqrt() + t.cos(), 0.3 * t.sin()));
        let g = on_grid(128, |t| Complex64::from_polar(1.0, 2.0 * t) + c(0.2 * t.cos(), 0.0));
        for xi in [1, 3, -5] {
            let xi = pt(xi);
            let mut results = Vec::new();
            for integrator in [Integrator::Spectral, Integrator::Simpson] {
                for orientation in [Orientation::Forward, Orientation::Reverse] {
                    let opts = SolverOptions { integrator, ..SolverOptions::default() };
                    results.push(nonresonant(&f, &xi, &g, orientation, &opts).unwrap().0);
                }
            }
            assert!(relative(&results[1], &results[0]) < 1e-10);
            assert!(relative(&results[2], &results[0]) < 1e-6);
            assert!(relative(&results[3], &results[0]) < 1e-6);
        }
    }

    #[test]
    fn manufactured_round_trip() {
        let w = LatticeWindow::new(1, 16).unwrap();
        let f = variable(128, |t| c(2f64.sqrt() + t.cos(), 0.0));
        let u = SpectralField::random_bandlimited(w, 128, 4, 11, true).unwrap();
        let rhs = apply_factor(&f, &u).unwrap();
        let opts = SolverOptions::default();
        for orientation in [Orientation::Forward, Orientation::Reverse] {
            let sol = solve_factor(&f, &rhs, orientation, &opts).unwrap();
            assert!(!sol.is_partial());
            assert!(sol.field.relative_distance(&u).unwrap() < 1e-10);
        }
    }

    #[test]
    fn incompatible_rhs_marks_partial() {
        let w = LatticeWindow::new(1, 4).unwrap();
        let f = constant(32, c(-0.5, 0.0));
        let rhs = SpectralField::from_fn(w, 32, |xi, t| {
            if xi.coords()[0] == 2 { Complex64::from_polar(1.0, t) } else { ZERO }
        })
        .unwrap();
        let sol = solve_factor(&f, &rhs, Orientation::Forward, &SolverOptions::default()).unwrap();
        assert!(sol.is_partial());
        assert_eq!(sol.incompatible_modes(), vec![pt(2)]);
        let chain = ProductOperator::new(vec![constant(32, c(2f64.sqrt(), 0.0)), f]);
        let out = solve_product(&chain, &rhs, Orientation::Forward, &SolverOptions::default()).unwrap();
        assert_eq!(out.stages.len(), 2);
        assert!(!out.stages[0].partial);
        assert_eq!(out.obstruction, Some(Obstruction { factor: 2, modes: vec![pt(2)] }));
    }

    #[test]
    fn residual_edge_cases() {
        let w = LatticeWindow::new(1, 2).unwrap();
        let l = ProductOperator::new(vec![constant(16, c(0.5, 0.0))]);
        let zero = SpectralField::zeros(w, 16).unwrap();
        assert_eq!(residual(&l, &zero, &zero).unwrap(), 0.0);
    }
}
