//! Explicit Fourier-mode solutions and global hypoellipticity diagnostics for
//! periodic Cauchy operators `L = ∏ (D_t + c_j(t) P_j(D_x))` on `T^{n+1}`.

pub mod coefficient;
pub mod diagnostics;
pub mod diophantine;
pub mod error;
pub mod exact;
pub mod field;
pub mod fourier;
pub mod operators;
pub mod poly;
pub mod solver;
pub mod symbols;

pub use coefficient::{bump_pair, Antiderivative, BumpPair, Interval, PeriodicCoefficient};
pub use error::{Error, Result};
pub use exact::QuadraticReal;
pub use field::SpectralField;
pub use operators::{CauchyFactor, ProductOperator};
pub use symbols::{LatticePoint, LatticeWindow, ToroidalSymbol};
