use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::gap::integer_gap;
use super::resonance::DEFAULT_RESONANCE_TOL;
use crate::error::{Error, Result};
use crate::exact::{ExactGap, QuadraticReal};
use crate::operators::CauchyFactor;
use crate::symbols::{dyadic_shell_sq, LatticePoint, LatticeWindow};

/// A lattice point with wide coordinates, for probes far outside any window.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScanPoint(pub Vec<i128>);

impl ScanPoint {
    pub fn coords(&self) -> &[i128] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Dyadic shell `j` with `2^{j−1} < |ξ| ≤ 2^j`; `None` at the origin.
    pub fn shell(&self) -> Option<u32> {
        let mut sq: u128 = 0;
        for &c in &self.0 {
            match c.unsigned_abs().checked_mul(c.unsigned_abs()).and_then(|v| sq.checked_add(v)) {
                Some(v) => sq = v,
                None => return Some(self.norm().log2().ceil() as u32),
            }
        }
        dyadic_shell_sq(sq)
    }

    pub fn to_lattice(&self) -> Option<LatticePoint> {
        self.0
            .iter()
            .map(|&c| i64::try_from(c).ok())
            .collect::<Option<Vec<_>>>()
            .map(LatticePoint::new)
    }
}

impl From<&LatticePoint> for ScanPoint {
    fn from(xi: &LatticePoint) -> Self {
        Self(xi.coords().iter().map(|&c| c as i128).collect())
    }
}

impl fmt::Display for ScanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i128::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub type SequenceMap = Arc<dyn Fn(&LatticePoint) -> Result<Complex64> + Send + Sync>;

/// Where the sequence `ξ ↦ c(ξ)` of a scan comes from.
#[derive(Clone)]
pub enum SequenceSource {
    /// `M₀(ξ) = c₀p(ξ)` in double precision.
    Mean(CauchyFactor),
    /// `M₀(ξ)` from the exact declarations of the factor.
    ExactMean(CauchyFactor),
    /// `λ·ξ₁` with an exact slope; accepts probes beyond the `i64` range.
    Linear(QuadraticReal),
    /// An arbitrary map evaluated in double precision.
    Map(SequenceMap),
}

impl fmt::Debug for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mean(_) => write!(f, "Mean(..)"),
            Self::ExactMean(_) => write!(f, "ExactMean(..)"),
            Self::Linear(l) => write!(f, "Linear({l})"),
            Self::Map(_) => write!(f, "Map(..)"),
        }
    }
}

impl SequenceSource {
    pub fn map(f: impl Fn(&LatticePoint) -> Result<Complex64> + Send + Sync + 'static) -> Self {
        Self::Map(Arc::new(f))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::ExactMean(_) | Self::Linear(_))
    }

    fn lattice(xi: &ScanPoint) -> Result<LatticePoint> {
        xi.to_lattice()
            .ok_or_else(|| Error::InvalidArgument(format!("probe {xi} exceeds the 64-bit range")))
    }

    fn probe(&self, xi: &ScanPoint, tol: f64) -> Result<Probe> {
        match self {
            Self::Mean(f) => Ok(Probe::float(f.mean_multiplier(&Self::lattice(xi)?)?, tol)),
            Self::Map(map) => Ok(Probe::float(map(&Self::lattice(xi)?)?, tol)),
            Self::ExactMean(f) => {
                let m0 = f.exact_mean_multiplier(&Self::lattice(xi)?)?;
                let value = m0.to_complex();
                let re = m0.re.integer_gap();
                if m0.im.is_zero() {
                    Ok(Probe::exact(value, re))
                } else {
                    let d = re.value.hypot(value.im);
                    Ok(Probe {
                        value,
                        tau: to_i128(&re.tau),
                        distance: d,
                        ln_distance: Some(d.ln()),
                    })
                }
            }
            Self::Linear(slope) => {
                let x = *xi.coords().first().ok_or_else(|| {
                    Error::InvalidArgument("probe point has no coordinates".to_string())
                })?;
                let scaled = slope.scale(&BigRational::from_integer(BigInt::from(x)));
                let value = Complex64::new(scaled.to_f64(), 0.0);
                Ok(Probe::exact(value, scaled.integer_gap()))
            }
        }
    }
}

fn to_i128(n: &BigInt) -> i128 {
    n.to_i128().unwrap_or(if n.sign() == num_bigint::Sign::Minus { i128::MIN } else { i128::MAX })
}

struct Probe {
    value: Complex64,
    tau: i128,
    distance: f64,
    ln_distance: Option<f64>,
}

impl Probe {
    fn float(value: Complex64, tol: f64) -> Self {
        let g = integer_gap(value);
        Self {
            value,
            tau: g.tau as i128,
            distance: g.distance,
            ln_distance: (g.distance > tol).then(|| g.distance.ln()),
        }
    }

    fn exact(value: Complex64, gap: ExactGap) -> Self {
        Self {
            value,
            tau: to_i128(&gap.tau),
            distance: gap.value,
            ln_distance: gap.ln,
        }
    }
}

/// One scanned point.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelRecord {
    pub xi: ScanPoint,
    pub value: Complex64,
    pub tau: i128,
    pub distance: f64,
    pub resonant: bool,
    /// `−ln d / ln(|τ*| + |ξ|)`; absent at resonances and when `|τ*| + |ξ| < 2`.
    pub local_exponent: Option<f64>,
    /// Whether the point came from the extra probe list.
    pub probe: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SiegelClass {
    Satisfied(f64),
    LiouvilleSuspect,
    Resonant,
}

impl SiegelClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Satisfied(_) => "SATISFIED",
            Self::LiouvilleSuspect => "LIOUVILLE_SUSPECT",
            Self::Resonant => "RESONANT",
        }
    }

    pub fn is_satisfied(&self) -> bool {
        matches!(self, Self::Satisfied(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiegelReport {
    pub records: Vec<SiegelRecord>,
    /// Running maximum of the local exponents over `|ξ| ≥ 2`.
    pub fitted_exponent: Option<f64>,
    pub classification: SiegelClass,
    pub radius: i64,
    /// Resonant points of the window other than the origin.
    pub nonzero_resonances: usize,
    /// Window shells `j >= 1` carrying a nonzero resonance (shell 0, `|ξ| = 1`,
    /// only counts when it is the whole window).
    pub resonant_shells: Vec<u32>,
    pub shell_count: u32,
    /// `(j, max m)` over nonempty shells, window and probes together.
    pub shell_maxima: Vec<(u32, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    pub extra_points: Vec<ScanPoint>,
    /// Float sources flag `d ≤ tol` as resonant; exact sources need `d = 0`.
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            extra_points: Vec::new(),
            tol: DEFAULT_RESONANCE_TOL,
        }
    }
}

impl ScanOptions {
    pub fn with_extra_points(points: Vec<ScanPoint>) -> Self {
        Self {
            extra_points: points,
            ..Self::default()
        }
    }
}

fn record(source: &SequenceSource, xi: ScanPoint, tol: f64, probe: bool) -> Result<SiegelRecord> {
    let p = source.probe(&xi, tol)?;
    let scale = p.tau.unsigned_abs() as f64 + xi.norm();
    let local_exponent = match p.ln_distance {
        Some(ln) if scale >= 2.0 => Some(-ln / scale.ln()),
        _ => None,
    };
    Ok(SiegelRecord {
        xi,
        value: p.value,
        tau: p.tau,
        distance: p.distance,
        resonant: p.ln_distance.is_none(),
        local_exponent,
        probe,
    })
}

/// Scan `d(ξ) = min_τ |τ − c(ξ)|` over a window plus optional probe points.
///
/// Classification, in priority order:
/// - `RESONANT` when nonzero resonances occur in at least half of the window
///   shells, the outermost shell included;
/// - `LIOUVILLE_SUSPECT` when the shell maxima of `m(ξ)` rise strictly over
///   at least three successive nonempty shells by more than 1 in total;
/// - `SATISFIED(M̂)` otherwise.
pub fn siegel_scan(
    source: &SequenceSource,
    window: &LatticeWindow,
    options: &ScanOptions,
) -> Result<SiegelReport> {
    let tol = options.tol;
    let mut records = window
        .points()
        .par_iter()
        .map(|xi| record(source, ScanPoint::from(xi), tol, false))
        .collect::<Result<Vec<_>>>()?;
    let probes = options
        .extra_points
        .par_iter()
        .map(|xi| record(source, xi.clone(), tol, true))
        .collect::<Result<Vec<_>>>()?;
    records.extend(probes);

    let shell_count = window.shell_count();
    let mut resonant_shells: Vec<u32> = records
        .iter()
        .filter(|r| !r.probe && r.resonant && !r.xi.is_origin())
        .filter_map(|r| r.xi.shell())
        .collect();
    resonant_shells.sort_unstable();
    resonant_shells.dedup();
    let nonzero_resonances = records
        .iter()
        .filter(|r| !r.probe && r.resonant && !r.xi.is_origin())
        .count();

    let mut shell_maxima: Vec<(u32, f64)> = Vec::new();
    let mut fitted: Option<f64> = None;
    let mut by_shell: std::collections::BTreeMap<u32, f64> = Default::default();
    for r in &records {
        if r.xi.norm() < 2.0 {
            continue;
        }
        if let (Some(m), Some(j)) = (r.local_exponent, r.xi.shell()) {
            fitted = Some(fitted.map_or(m, |f: f64| f.max(m)));
            let e = by_shell.entry(j).or_insert(m);
            *e = e.max(m);
        }
    }
    shell_maxima.extend(by_shell);

    let lowest = u32::from(shell_count > 0);
    resonant_shells.retain(|&j| j >= lowest);
    let considered = shell_count + 1 - lowest;
    let resonant = !resonant_shells.is_empty()
        && resonant_shells.len() as u32 * 2 >= considered
        && resonant_shells.contains(&shell_count);
    let classification = if resonant {
        SiegelClass::Resonant
    } else if liouville_run(&shell_maxima) {
        SiegelClass::LiouvilleSuspect
    } else {
        SiegelClass::Satisfied(fitted.unwrap_or(0.0))
    };
    Ok(SiegelReport {
        records,
        fitted_exponent: fitted,
        classification,
        radius: window.radius(),
        nonzero_resonances,
        resonant_shells,
        shell_count,
        shell_maxima,
    })
}

fn liouville_run(maxima: &[(u32, f64)]) -> bool {
    let mut start = 0;
    for i in 1..=maxima.len() {
        let rising = i < maxima.len() && maxima[i].1 > maxima[i - 1].1;
        if !rising {
            if i - start >= 3 && maxima[i - 1].1 - maxima[start].1 > 1.0 {
                return true;
            }
            start = i;
        }
    }
    false
}

/// Verdict of a joint scan: membership in `(GS)∞` on the window.
#[derive(Clone, Debug, PartialEq)]
pub struct SimultaneousVerdict {
    pub in_gs_infinity: bool,
    pub per_source: Vec<SiegelReport>,
}

pub fn simultaneous_scan(
    sources: &[SequenceSource],
    window: &LatticeWindow,
    options: &ScanOptions,
) -> Result<SimultaneousVerdict> {
    let per_source = sources
        .iter()
        .map(|s| siegel_scan(s, window, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimultaneousVerdict {
        in_gs_infinity: per_source.iter().all(|r| r.classification.is_satisfied()),
        per_source,
    })
}
