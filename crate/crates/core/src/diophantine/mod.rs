//! Small-divisor arithmetic: gaps to the integers, Siegel-type scans over
//! lattice windows, resonant sets, and exact rational approximation oracles.

mod approximation;
mod gap;
mod resonance;
mod siegel;

pub use approximation::{best_rational_approximations, liouville_number, surd_convergents, Convergent};
pub use gap::{integer_gap, torus_denominator, torus_gap, IntegerGap};
pub use resonance::{is_resonant, resonant_set, ResonanceMode, ResonantSet, DEFAULT_RESONANCE_TOL};
pub use siegel::{
    siegel_scan, simultaneous_scan, ScanOptions, ScanPoint, SequenceSource, SiegelClass, SiegelRecord,
    SiegelReport, SimultaneousVerdict,
};
