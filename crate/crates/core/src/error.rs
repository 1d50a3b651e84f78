use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `[z]_k` with `k >= -z` for a negative integer `z` would invert a zero factor.
    #[error("bracket [{z}]_{k} is undefined{}", fmt_index(*.index))]
    UndefinedBracket {
        z: Rational,
        k: i64,
        index: Option<usize>,
    },

    #[error("shifted argument z + {shift} vanishes for z = {z}")]
    PoleAtShift { z: Rational, shift: u64 },

    /// A coefficient family was requested outside the support sets where
    /// its closed form is valid.
    #[error("minimality violation: {0}")]
    MinimalityViolation(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent {0} does not lie on the coset v + L")]
    NonLatticeExponent(String),

    #[error("H table is not symmetric at ({0}, {1})")]
    AsymmetricTable(usize, usize),

    #[error("convex hull is not full-dimensional (affine dimension {dim} in ambient {ambient})")]
    DegenerateHull { dim: usize, ambient: usize },

    #[error("no positive grading with coordinates in [-{bound}, {bound}]")]
    NoPositiveFunctional { bound: i64 },

    #[error("radius {radius} does not enclose the grade <= {grade} support (cap {cap})")]
    InsufficientRadius { radius: u32, grade: i64, cap: u32 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn fmt_index(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" at index {i}"),
        None => String::new(),
    }
}
