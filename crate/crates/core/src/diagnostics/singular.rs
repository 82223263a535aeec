use num_complex::Complex64;

use super::decay::{decay_classify, DecayOptions, DecayReport};
use crate::diophantine::{resonant_set, ResonanceMode};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::fourier;
use crate::operators::{apply_product, CauchyFactor, ProductOperator};
use crate::solver::{solve_factor, ModeSolveOutcome, Orientation, SolverOptions};
use crate::symbols::{LatticePoint, LatticeWindow};

/// Largest `‖F u‖_∞ / ‖u‖_∞` accepted for a witness mode.
pub const WITNESS_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularOptions {
    /// Required nonzero resonances, as a multiple of `log₂ Ξ`.
    pub sparsity: f64,
    /// Also seed the origin when it is resonant.
    pub include_zero: bool,
    pub n_t: usize,
    pub resonance: ResonanceMode,
}

impl Default for SingularOptions {
    fn default() -> Self {
        Self {
            sparsity: 1.0,
            include_zero: false,
            n_t: crate::coefficient::DEFAULT_GRID,
            resonance: ResonanceMode::default(),
        }
    }
}

fn homogeneous_mode(factor: &CauchyFactor, xi: &LatticePoint) -> Result<Option<Vec<Complex64>>> {
    let u: Vec<Complex64> = factor
        .phase(xi)?
        .iter()
        .map(|p| (-Complex64::new(0.0, 1.0) * p).exp())
        .collect();
    let image = factor.apply_mode(xi, &u)?;
    let ok = fourier::sup_norm(&image) <= WITNESS_RESIDUAL * fourier::sup_norm(&u);
    Ok(ok.then_some(u))
}

/// Unit-amplitude homogeneous solutions `e^{−iΦ(t,ξ)}` on one resonant mode
/// per dyadic shell, zero elsewhere.
///
/// Within a shell the mode of largest norm is preferred; modes whose
/// homogeneous solution is not resolved on the t-grid are skipped.
pub fn singular_solution(
    factor: &CauchyFactor,
    window: &LatticeWindow,
    options: &SingularOptions,
) -> Result<SpectralField> {
    if factor.n_t() != options.n_t {
        return Err(Error::GridMismatch(format!(
            "factor on {} points, witness requested on {}",
            factor.n_t(),
            options.n_t
        )));
    }
    let set = resonant_set(factor, window, options.resonance)?;
    let nonzero: Vec<&LatticePoint> = set.nonzero().collect();
    let needed = options.sparsity * (window.radius() as f64).log2();
    if nonzero.is_empty() || (nonzero.len() as f64) < needed {
        return Err(Error::NoSingularWitness(format!(
            "{} nonzero resonances in a window of radius {}",
            nonzero.len(),
            window.radius()
        )));
    }
    let mut by_shell: std::collections::BTreeMap<u32, Vec<&LatticePoint>> = Default::default();
    for xi in nonzero {
        if let Some(j) = xi.shell() {
            by_shell.entry(j).or_default().push(xi);
        }
    }
    let mut field = SpectralField::zeros(window.clone(), options.n_t)?;
    let mut seeded = 0usize;
    for candidates in by_shell.values_mut() {
        candidates.sort_by(|a, b| b.norm_sq().cmp(&a.norm_sq()).then(b.cmp(a)));
        for xi in candidates.iter() {
            if let Some(u) = homogeneous_mode(factor, xi)? {
                field.set_mode(xi, &u)?;
                seeded += 1;
                break;
            }
        }
    }
    if seeded == 0 {
        return Err(Error::NoSingularWitness(
            "no resonant mode is resolved on the t-grid".to_string(),
        ));
    }
    if options.include_zero {
        let origin = LatticePoint::origin(window.dimension());
        if set.contains(&origin) {
            if let Some(u) = homogeneous_mode(factor, &origin)? {
                field.set_mode(&origin, &u)?;
            }
        }
    }
    Ok(field)
}

/// One stage of a chained witness construction.
#[derive(Clone, Debug)]
pub struct ChainStage {
    /// 1-based factor index.
    pub factor: usize,
    pub outcomes: Vec<ModeSolveOutcome>,
    pub hormander_declared: bool,
}

#[derive(Clone, Debug)]
pub enum ChainOutcome {
    Witness {
        field: SpectralField,
        decay: DecayReport,
        image_decay: DecayReport,
        /// `‖L u‖_∞ / ‖u‖_∞`.
        image_norm: f64,
    },
    /// Compatibility failed at factor `factor` on `modes`.
    Obstruction {
        factor: usize,
        modes: Vec<LatticePoint>,
    },
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    /// 1-based index of the factor carrying the singular seed.
    pub seed_factor: usize,
    pub stages: Vec<ChainStage>,
    pub outcome: ChainOutcome,
}

impl ChainReport {
    /// The construction produced a non-smooth `u` with a smooth image `L u`.
    pub fn succeeded(&self) -> bool {
        match &self.outcome {
            ChainOutcome::Witness {
                decay, image_decay, ..
            } => !decay.classification.is_rapid() && image_decay.classification.is_rapid(),
            ChainOutcome::Obstruction { .. } => false,
        }
    }
}

/// A priori bound `∏_j (N_t/2 + max|M_j|)` on `‖L‖` over grid-resolved fields.
fn operator_scale(operator: &ProductOperator, window: &LatticeWindow) -> Result<f64> {
    let mut scale = 1.0;
    for f in operator.factors() {
        let c = fourier::sup_norm(f.coefficient().samples());
        let mut p = 0.0f64;
        for xi in window.points() {
            p = p.max(f.symbol_at(xi)?.norm());
        }
        scale *= (f.n_t() / 2) as f64 + c * p;
    }
    Ok(scale)
}

/// Seed a singular solution of `F_k` and push it through
/// `F_{k+1}u_{k+1} = u_k, …, F_m u_m = u_{m−1}`.
pub fn chain_singular(
    operator: &ProductOperator,
    k: usize,
    window: &LatticeWindow,
    options: &SingularOptions,
    solver: &SolverOptions,
) -> Result<ChainReport> {
    let m = operator.len();
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!("seed factor {k} outside 1..={m}")));
    }
    let mut u = singular_solution(&operator.factors()[k - 1], window, options)?;
    let mut stages = Vec::new();
    for j in k + 1..=m {
        let factor = &operator.factors()[j - 1];
        let solve = solve_factor(factor, &u, Orientation::Forward, solver)?;
        let modes = solve.incompatible_modes();
        stages.push(ChainStage {
            factor: j,
            outcomes: solve.outcomes,
            hormander_declared: factor.assumes_hormander(),
        });
        if !modes.is_empty() {
            return Ok(ChainReport {
                seed_factor: k,
                stages,
                outcome: ChainOutcome::Obstruction { factor: j, modes },
            });
        }
        u = solve.field;
    }
    let image = apply_product(operator, &u)?;
    let scale = u.sup_norm();
    let reference = scale * operator_scale(operator, window)?;
    let decay = decay_classify(&u, &DecayOptions::default());
    let image_decay = decay_classify(
        &image,
        &DecayOptions {
            reference_scale: Some(reference),
        },
    );
    Ok(ChainReport {
        seed_factor: k,
        stages,
        outcome: ChainOutcome::Witness {
            field: u,
            decay,
            image_decay,
            image_norm: image.sup_norm() / scale.max(1e-30),
        },
    })
}
