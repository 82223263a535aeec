use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol undefined at ξ = {0:?}")]
    SymbolUndefined(Vec<i64>),

    #[error("coordinate axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("grid length {0} is not a power of two >= 8")]
    BadGridLength(usize),

    #[error("fourier mode {k} exceeds the band limit {limit}")]
    NotBandlimited { k: i64, limit: i64 },

    #[error("supports must be disjoint: {0}")]
    OverlappingSupports(String),

    #[error("invalid support interval: {0}")]
    BadInterval(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("symbol undefined for variable coefficients (factor {0})")]
    VariableCoefficient(usize),

    #[error("exact mode requested on irrational declared data: {0}")]
    NotExact(String),

    #[error("cannot parse exact value {0:?}")]
    ParseExact(String),

    #[error("liouville depth {0} exceeds the supported maximum of 6")]
    DepthOverflow(u32),

    #[error("resonant mode routed incorrectly at ξ = {0:?}")]
    ResonantRouting(Vec<i64>),

    #[error("compatibility integral requested at nonresonant ξ = {0:?}")]
    NotResonant(Vec<i64>),

    #[error("no singular witness in window: {0}")]
    NoSingularWitness(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
