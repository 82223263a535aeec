//! Hörmander scans, Fourier-decay smoothness tests, singular-solution
//! witnesses and the combined global hypoellipticity verdict.

mod decay;
mod hoermander;
mod singular;
mod verdict;

pub use decay::{decay_classify, DecayClass, DecayOptions, DecayReport, MIN_SHELLS, RAPID_SLOPE};
pub use hoermander::{hoermander_scan, HoermanderReport};
pub use singular::{
    chain_singular, singular_solution, ChainOutcome, ChainReport, ChainStage, SingularOptions,
    WITNESS_RESIDUAL,
};
pub use verdict::{
    gh_verdict, FactorSummary, GhVerdict, HormanderEvidence, Rule, TraceEntry, Verdict,
    VerdictOptions, Witness, COMMUTE_TOL, WITNESS_BUDGET,
};
