//! Exact construction and verification of logarithm-free and logarithmic
//! series solutions of A-hypergeometric (GKZ) systems.

pub mod ci;
pub mod coefficients;
pub mod error;
pub mod lattice;
pub mod logseries;
pub mod operators;
pub mod polytope;
pub mod rational;
pub mod support;
pub mod system;

pub use error::{Error, Result};
pub use lattice::{IntMatrix, LatticePoint, RelationLattice};
pub use logseries::{LogKey, LogSeries, LogTerm, Truncation};
pub use operators::{BoxOp, CertifiedReport, EulerOp};
pub use rational::Rational;
pub use system::GkzSystem;
