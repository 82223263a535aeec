use rayon::prelude::*;

use crate::error::Result;
use crate::operators::CauchyFactor;
use crate::symbols::{LatticePoint, LatticeWindow};

pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResonanceMode {
    /// `|Re M₀ − round(Re M₀)| ≤ tol` and `|Im M₀| ≤ tol`.
    Float { tol: f64 },
    /// Exact integrality of `M₀(ξ)`; needs exact declarations.
    Exact,
}

impl Default for ResonanceMode {
    fn default() -> Self {
        Self::Float {
            tol: DEFAULT_RESONANCE_TOL,
        }
    }
}

/// Lattice points of a window where `M₀(ξ) ∈ Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonantSet {
    pub members: Vec<LatticePoint>,
    pub radius: i64,
    pub mode: ResonanceMode,
}

impl ResonantSet {
    pub fn contains(&self, xi: &LatticePoint) -> bool {
        self.members.binary_search(xi).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members other than the origin.
    pub fn nonzero(&self) -> impl Iterator<Item = &LatticePoint> {
        self.members.iter().filter(|xi| !xi.is_origin())
    }
}

/// Whether a single mode is resonant under `mode`.
pub fn is_resonant(factor: &CauchyFactor, xi: &LatticePoint, mode: ResonanceMode) -> Result<bool> {
    match mode {
        ResonanceMode::Float { tol } => {
            let m0 = factor.mean_multiplier(xi)?;
            Ok((m0.re - m0.re.round_ties_even()).abs() <= tol && m0.im.abs() <= tol)
        }
        ResonanceMode::Exact => Ok(factor.exact_mean_multiplier(xi)?.is_integer()),
    }
}

pub fn resonant_set(
    factor: &CauchyFactor,
    window: &LatticeWindow,
    mode: ResonanceMode,
) -> Result<ResonantSet> {
    let flags = window
        .points()
        .par_iter()
        .map(|xi| is_resonant(factor, xi, mode))
        .collect::<Result<Vec<_>>>()?;
    let members = window
        .points()
        .iter()
        .zip(flags)
        .filter(|(_, hit)| *hit)
        .map(|(xi, _)| xi.clone())
        .collect();
    Ok(ResonantSet {
        members,
        radius: window.radius(),
        mode,
    })
}
