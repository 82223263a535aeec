use std::fmt;

use super::decay::DecayClass;
use super::hoermander::{hoermander_scan, HoermanderReport};
use super::singular::{chain_singular, singular_solution, ChainOutcome, SingularOptions};
use crate::diophantine::{
    resonant_set, siegel_scan, ResonanceMode, ScanOptions, SequenceSource, SiegelClass,
    SiegelReport,
};
use crate::diagnostics::decay::{decay_classify, DecayOptions};
use crate::error::Result;
use crate::field::SpectralField;
use crate::operators::{commutator_residual, CauchyFactor, ProductOperator};
use crate::solver::SolverOptions;
use crate::symbols::{LatticePoint, LatticeWindow};

/// Largest `|window| · N_t` for which dense witness fields are built.
pub const WITNESS_BUDGET: usize = 1 << 24;
/// Relative commutator residual below which two factors are taken to commute.
pub const COMMUTE_TOL: f64 = 1e-10;
const COMMUTATOR_RADIUS: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Gh,
    NotGh,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gh => "GH",
            Self::NotGh => "NOT_GH",
            Self::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Decision rules the verdict engine can cite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Constant coefficients: GH iff the symbol roots satisfy the
    /// simultaneous generalized Siegel condition.
    ConstantSimultaneousScan,
    /// Hörmander condition on every factor: a GH normal form makes L GH, and
    /// for a single factor the converse holds as well.
    NormalFormScan,
    /// A resonant or Liouville-like mean on the factor applied first.
    RightmostFactorObstruction,
    /// A resonant or Liouville-like mean on a factor of a commuting product.
    CommutingFactorObstruction,
    /// A singular solution of one factor carried through the factors after it.
    ChainedSingularSolution,
    NoApplicableRule,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ConstantSimultaneousScan => "constant-simultaneous-siegel",
            Self::NormalFormScan => "hormander-normal-form",
            Self::RightmostFactorObstruction => "rightmost-factor-obstruction",
            Self::CommutingFactorObstruction => "commuting-factor-obstruction",
            Self::ChainedSingularSolution => "chained-singular-solution",
            Self::NoApplicableRule => "no-applicable-rule",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HormanderEvidence {
    DeclaredScanConsistent,
    DeclaredScanInconsistent,
    /// Not declared; the scan shows no growth of the negative part.
    ScanOnly,
    /// Not declared and the negative part deepens in the outermost shell.
    Unsupported,
}

impl HormanderEvidence {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DeclaredScanConsistent => "declared and scan-consistent",
            Self::DeclaredScanInconsistent => "declared, scan-inconsistent",
            Self::ScanOnly => "scan-only",
            Self::Unsupported => "unsupported",
        }
    }

    pub fn holds(&self) -> bool {
        !matches!(self, Self::Unsupported)
    }
}

#[derive(Clone, Debug)]
pub struct FactorSummary {
    /// 1-based position in the product.
    pub index: usize,
    pub constant: bool,
    pub resonant_count: usize,
    pub nonzero_resonances: usize,
    /// Up to ten smallest-norm nonzero resonances.
    pub resonant_sample: Vec<LatticePoint>,
    pub siegel: SiegelReport,
    pub hoermander: HoermanderReport,
    pub evidence: HormanderEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    ResonantSet { factor: usize, nonzero: usize },
    LiouvilleSuspect { factor: usize, fitted_exponent: Option<f64> },
    SingularSolution { factor: usize, modes: usize, decay: DecayClass },
    ChainedSolution { seed_factor: usize, decay: DecayClass, image_decay: DecayClass },
}

#[derive(Clone, Debug)]
pub struct GhVerdict {
    pub verdict: Verdict,
    pub label: String,
    pub trace: Vec<TraceEntry>,
    pub factors: Vec<FactorSummary>,
    /// `(j, k, relative residual)` for `j < k`, 1-based.
    pub commutators: Vec<(usize, usize, f64)>,
    pub notes: Vec<String>,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug)]
pub struct VerdictOptions {
    pub scan: ScanOptions,
    /// Scan and resonance tests on exact declarations.
    pub exact: bool,
    pub solver: SolverOptions,
    pub sparsity: f64,
    pub seed: u64,
    /// Build singular witness fields when the window fits the budget.
    pub construct_witness: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self {
            scan: ScanOptions::default(),
            exact: false,
            solver: SolverOptions::default(),
            sparsity: 1.0,
            seed: 0,
            construct_witness: true,
        }
    }
}

fn summarize(
    index: usize,
    factor: &CauchyFactor,
    window: &LatticeWindow,
    options: &VerdictOptions,
) -> Result<FactorSummary> {
    let frozen = factor.freeze_mean();
    let (source, mode) = if options.exact {
        (SequenceSource::ExactMean(frozen), ResonanceMode::Exact)
    } else {
        (SequenceSource::Mean(frozen), options.solver.resonance)
    };
    let siegel = siegel_scan(&source, window, &options.scan)?;
    let set = resonant_set(factor, window, mode)?;
    let mut sample: Vec<LatticePoint> = set.nonzero().cloned().collect();
    sample.sort_by_key(|xi| (xi.norm_sq(), xi.clone()));
    sample.truncate(10);
    let hoermander = hoermander_scan(factor, window)?;
    let evidence = match (factor.assumes_hormander(), hoermander.scan_consistent) {
        (true, true) => HormanderEvidence::DeclaredScanConsistent,
        (true, false) => HormanderEvidence::DeclaredScanInconsistent,
        (false, true) => HormanderEvidence::ScanOnly,
        (false, false) => HormanderEvidence::Unsupported,
    };
    Ok(FactorSummary {
        index,
        constant: factor.is_constant(),
        resonant_count: set.len(),
        nonzero_resonances: set.nonzero().count(),
        resonant_sample: sample,
        siegel,
        hoermander,
        evidence,
    })
}

fn commutators(
    operator: &ProductOperator,
    window: &LatticeWindow,
    seed: u64,
) -> Result<Vec<(usize, usize, f64)>> {
    let m = operator.len();
    if m < 2 {
        return Ok(Vec::new());
    }
    let n_t = operator.factors()[0].n_t();
    let small = LatticeWindow::new(window.dimension(), window.radius().min(COMMUTATOR_RADIUS))?;
    let u = SpectralField::random_bandlimited(small, n_t, 4.min(n_t as i64 / 2 - 1), seed, false)?;
    let mut out = Vec::new();
    for j in 0..m {
        for k in j + 1..m {
            let r = commutator_residual(&operator.factors()[j], &operator.factors()[k], &u)?;
            out.push((j + 1, k + 1, r));
        }
    }
    Ok(out)
}

fn scan_witness(summary: &FactorSummary) -> Option<Witness> {
    match summary.siegel.classification {
        SiegelClass::Resonant => Some(Witness::ResonantSet {
            factor: summary.index,
            nonzero: summary.siegel.nonzero_resonances,
        }),
        SiegelClass::LiouvilleSuspect => Some(Witness::LiouvilleSuspect {
            factor: summary.index,
            fitted_exponent: summary.siegel.fitted_exponent,
        }),
        SiegelClass::Satisfied(_) => None,
    }
}

fn fits_budget(window: &LatticeWindow, n_t: usize) -> bool {
    window.len().saturating_mul(n_t) <= WITNESS_BUDGET
}

fn singular_witness(
    factor: &CauchyFactor,
    index: usize,
    window: &LatticeWindow,
    options: &VerdictOptions,
    notes: &mut Vec<String>,
) -> Option<Witness> {
    if !options.construct_witness || !fits_budget(window, factor.n_t()) {
        return None;
    }
    let singular = SingularOptions {
        sparsity: options.sparsity,
        include_zero: false,
        n_t: factor.n_t(),
        resonance: if options.exact { ResonanceMode::Exact } else { options.solver.resonance },
    };
    match singular_solution(factor, window, &singular) {
        Ok(u) => {
            let modes = u.modes().filter(|(_, m)| m.iter().any(|v| v.norm() > 0.0)).count();
            let decay = decay_classify(&u, &DecayOptions::default()).classification;
            Some(Witness::SingularSolution { factor: index, modes, decay })
        }
        Err(e) => {
            notes.push(format!("factor {index}: {e}"));
            None
        }
    }
}

/// Combine the per-factor scans into a verdict with a rule trace.
///
/// Rules are tried in order: constant coefficients; the normal form under
/// the Hörmander condition; obstructions on the rightmost factor or on a
/// commuting product; a chained singular solution. Otherwise the verdict is
/// `INCONCLUSIVE`.
pub fn gh_verdict(
    operator: &ProductOperator,
    window: &LatticeWindow,
    options: &VerdictOptions,
) -> Result<GhVerdict> {
    let m = operator.len();
    let factors = operator
        .factors()
        .iter()
        .enumerate()
        .map(|(j, f)| summarize(j + 1, f, window, options))
        .collect::<Result<Vec<_>>>()?;
    let commutators = commutators(operator, window, options.seed)?;
    let commuting = commutators.iter().all(|c| c.2 <= COMMUTE_TOL);
    let mut notes = Vec::new();
    if m >= 2 {
        notes.push(
            "a GH permutation of the product only implies that at least one normal-form factor is GH; no converse is inferred"
                .to_string(),
        );
    }
    let mut out = GhVerdict {
        verdict: Verdict::Inconclusive,
        label: format!("numerical evidence at window Ξ={}", window.radius()),
        trace: Vec::new(),
        factors,
        commutators,
        notes,
        witnesses: Vec::new(),
    };
    let failing: Vec<usize> = out
        .factors
        .iter()
        .filter(|s| !s.siegel.classification.is_satisfied())
        .map(|s| s.index)
        .collect();
    let describe = |out: &GhVerdict| {
        out.factors
            .iter()
            .map(|s| format!("factor {}: {}", s.index, s.siegel.classification.name()))
            .collect::<Vec<_>>()
            .join(", ")
    };

    if operator.is_constant() {
        let detail = describe(&out);
        out.trace.push(TraceEntry {
            rule: Rule::ConstantSimultaneousScan,
            detail,
        });
        if failing.is_empty() {
            out.verdict = Verdict::Gh;
        } else {
            out.verdict = Verdict::NotGh;
            attach_witnesses(operator, &failing, window, options, &mut out);
        }
        return Ok(out);
    }

    let hormander = out.factors.iter().all(|s| s.evidence.holds());
    if hormander {
        let evidence = out
            .factors
            .iter()
            .map(|s| format!("factor {} Hörmander {}", s.index, s.evidence.name()))
            .collect::<Vec<_>>()
            .join(", ");
        let detail = format!("normal form: {}; {evidence}", describe(&out));
        out.trace.push(TraceEntry {
            rule: Rule::NormalFormScan,
            detail,
        });
        if failing.is_empty() {
            out.verdict = Verdict::Gh;
            return Ok(out);
        }
        if m == 1 {
            out.verdict = Verdict::NotGh;
            attach_witnesses(operator, &failing, window, options, &mut out);
            return Ok(out);
        }
    }

    for &j in failing.iter().rev() {
        if j == m || commuting {
            let rule = if j == m {
                Rule::RightmostFactorObstruction
            } else {
                Rule::CommutingFactorObstruction
            };
            out.trace.push(TraceEntry {
                rule,
                detail: format!(
                    "factor {j}: {}",
                    out.factors[j - 1].siegel.classification.name()
                ),
            });
            out.verdict = Verdict::NotGh;
            attach_witnesses(operator, &[j], window, options, &mut out);
            return Ok(out);
        }
        let n_t = operator.factors()[j - 1].n_t();
        if !options.construct_witness || !fits_budget(window, n_t) {
            out.notes.push(format!("factor {j}: chained witness skipped"));
            continue;
        }
        let singular = SingularOptions {
            sparsity: options.sparsity,
            include_zero: false,
            n_t,
            resonance: options.solver.resonance,
        };
        match chain_singular(operator, j, window, &singular, &options.solver) {
            Ok(report) if report.succeeded() => {
                if let ChainOutcome::Witness {
                    decay, image_decay, ..
                } = &report.outcome
                {
                    out.trace.push(TraceEntry {
                        rule: Rule::ChainedSingularSolution,
                        detail: format!(
                            "seed on factor {j}; u {} and L u {}",
                            decay.classification.name(),
                            image_decay.classification.name()
                        ),
                    });
                    out.witnesses.push(Witness::ChainedSolution {
                        seed_factor: j,
                        decay: decay.classification,
                        image_decay: image_decay.classification,
                    });
                }
                out.verdict = Verdict::NotGh;
                return Ok(out);
            }
            Ok(report) => {
                if let ChainOutcome::Obstruction { factor, modes } = &report.outcome {
                    out.notes.push(format!(
                        "chain from factor {j} obstructed at factor {factor} on {} modes",
                        modes.len()
                    ));
                } else {
                    out.notes.push(format!("chain from factor {j} gave no singular image"));
                }
            }
            Err(e) => out.notes.push(format!("chain from factor {j}: {e}")),
        }
    }

    out.trace.push(TraceEntry {
        rule: Rule::NoApplicableRule,
        detail: if hormander {
            "normal form fails the scan and no obstruction could be exhibited".to_string()
        } else {
            "Hörmander condition unsupported and no obstruction could be exhibited".to_string()
        },
    });
    out.verdict = Verdict::Inconclusive;
    out.witnesses.clear();
    Ok(out)
}

fn attach_witnesses(
    operator: &ProductOperator,
    failing: &[usize],
    window: &LatticeWindow,
    options: &VerdictOptions,
    out: &mut GhVerdict,
) {
    for &j in failing {
        if let Some(w) = scan_witness(&out.factors[j - 1]) {
            out.witnesses.push(w);
        }
        if out.factors[j - 1].nonzero_resonances > 0 {
            let factor = &operator.factors()[j - 1];
            if let Some(w) = singular_witness(factor, j, window, options, &mut out.notes) {
                out.witnesses.push(w);
            }
        }
    }
}
