use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, IntMatrix, RelationLattice};
use crate::logseries::Truncation;
use crate::rational::{fmt_vec, Rational};

/// An A-hypergeometric system `(A, beta)` together with a base exponent `v`
/// satisfying `A v = beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkzSystem {
    matrix: IntMatrix,
    beta: Vec<Rational>,
    v: Vec<Rational>,
    lattice: Arc<RelationLattice>,
}

impl GkzSystem {
    pub fn new(matrix: IntMatrix, beta: Vec<Rational>, v: Vec<Rational>) -> Result<Self> {
        if beta.len() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: beta.len(),
            });
        }
        let av = matrix.mul_rational(&v)?;
        if av != beta {
            return Err(Error::Invalid(format!(
                "A v = {} differs from beta = {}",
                fmt_vec(&av),
                fmt_vec(&beta)
            )));
        }
        let lattice = Arc::new(kernel_basis(&matrix)?);
        Ok(GkzSystem {
            matrix,
            beta,
            v,
            lattice,
        })
    }

    /// Caps the size of every box enumeration performed on this system.
    pub fn with_max_points(mut self, cap: usize) -> Self {
        self.lattice = Arc::new((*self.lattice).clone().with_max_points(cap));
        self
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn lattice(&self) -> &Arc<RelationLattice> {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.matrix.rows()[i]
    }

    /// Truncation at `radius` around the base exponent `v`.
    pub fn truncation(&self, radius: u32) -> Truncation {
        Truncation {
            base: self.v.clone(),
            lattice: Arc::clone(&self.lattice),
            radius,
        }
    }
}
