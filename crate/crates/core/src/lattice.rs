//! Integer relation lattices `L = ker_Z(A)` and bounded enumeration.
//!
//! The kernel is computed by unimodular row reduction of `[A^T | I]`, which
//! yields a saturated basis directly. That basis is then brought into Hermite
//! normal form (echelon, positive pivots, entries above each pivot reduced
//! into `[0, pivot)`), so the basis returned for a given matrix is canonical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_ivec, Rational};

/// Default cap on the number of box points one enumeration may produce.
pub const DEFAULT_MAX_POINTS: usize = 4_000_000;

/// A lattice point in the ambient `Z^N`.
pub type LatticePoint = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || ncols == 0 {
            return Err(Error::Invalid(
                "matrix must have positive dimensions".into(),
            ));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        Ok(IntMatrix { rows, ncols })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x.len())?;
        Ok(self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, xi)| acc + xi * a)
            })
            .collect())
    }

    pub fn mul_int(&self, x: &[i64]) -> Result<Vec<BigInt>> {
        self.check_len(x.len())?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, &xi)| a * xi).sum())
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: len,
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Vec<Vec<BigInt>> {
        (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{}", fmt_ivec(r))?;
        }
        Ok(())
    }
}

/// Reduces the first `ncols` columns of `rows` to echelon form with
/// unimodular row operations applied to whole rows. Returns the pivot columns.
fn echelonize(rows: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(top, best);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[top][col]);
                let (head, tail) = rows.split_at_mut(r);
                for (x, p) in tail[0].iter_mut().zip(&head[top]) {
                    *x -= &q * p;
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && !rows[top][col].is_zero() {
            pivots.push(col);
            top += 1;
        }
    }
    pivots
}

/// Hermite normal form of the row lattice spanned by `rows`; zero rows dropped.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let pivots = echelonize(&mut rows, ncols);
    rows.truncate(pivots.len());
    for (k, &p) in pivots.iter().enumerate() {
        if rows[k][p].is_negative() {
            for x in rows[k].iter_mut() {
                *x = -&*x;
            }
        }
        for above in 0..k {
            let q = rows[above][p].div_floor(&rows[k][p]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(k);
            for (x, y) in head[above].iter_mut().zip(&tail[0]) {
                *x -= &q * y;
            }
        }
    }
    (rows, pivots)
}

/// A saturated integer basis of `ker_Z(A)` in Hermite normal form.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    ambient_dim: usize,
    basis: Vec<LatticePoint>,
    pivots: Vec<usize>,
    max_points: usize,
}

/// One point of a box enumeration: basis coordinates and the lattice point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxPoint {
    pub coords: Vec<i64>,
    pub point: LatticePoint,
}

fn to_i64_rows(rows: Vec<Vec<BigInt>>) -> Result<Vec<LatticePoint>> {
    rows.into_iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| Error::Invalid(format!("lattice entry {x} overflows i64")))
                })
                .collect()
        })
        .collect()
}

pub fn kernel_basis(a: &IntMatrix) -> Result<RelationLattice> {
    let n = a.ncols();
    let m = a.nrows();
    let mut rows: Vec<Vec<BigInt>> = a
        .transpose()
        .into_iter()
        .enumerate()
        .map(|(j, mut r)| {
            r.extend((0..n).map(|k| {
                if k == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = echelonize(&mut rows, m);
    let kernel: Vec<Vec<BigInt>> = rows[pivots.len()..]
        .iter()
        .map(|r| r[m..].to_vec())
        .collect();
    let (basis, pivots) = if kernel.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        hermite_rows(kernel)
    };
    let basis = to_i64_rows(basis)?;
    Ok(RelationLattice {
        ambient_dim: n,
        basis,
        pivots,
        max_points: DEFAULT_MAX_POINTS,
    })
}

impl PartialEq for RelationLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis == other.basis
    }
}

impl Eq for RelationLattice {}

impl RelationLattice {
    /// The lattice spanned by `rows` (not necessarily a full kernel), with
    /// its basis brought into Hermite normal form.
    pub fn from_basis(ambient_dim: usize, rows: &[LatticePoint]) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (basis, pivots) = if big.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            hermite_rows(big)
        };
        let basis = to_i64_rows(basis)?;
        Ok(RelationLattice {
            ambient_dim,
            basis,
            pivots,
            max_points: DEFAULT_MAX_POINTS,
        })
    }

    pub fn with_max_points(mut self, cap: usize) -> Self {
        self.max_points = cap;
        self
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LatticePoint] {
        &self.basis
    }

    /// `sum_k coords[k] * basis[k]`.
    pub fn point(&self, coords: &[i64]) -> LatticePoint {
        let mut out = vec![0i64; self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Basis coordinates of a rational vector, if it lies in `L`.
    pub fn coordinates(&self, x: &[Rational]) -> Option<Vec<i64>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        let mut coords = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            let mut rest = x[p].clone();
            for (j, c) in coords.iter().enumerate() {
                let bj: &LatticePoint = &self.basis[j];
                rest -= Rational::from_integer(BigInt::from(c * bj[p]));
            }
            let q = rest / Rational::from_integer(BigInt::from(self.basis[k][p]));
            if !q.is_integer() {
                return None;
            }
            coords.push(q.to_integer().to_i64()?);
        }
        let back = self.point(&coords);
        back.iter()
            .zip(x)
            .all(|(b, xi)| Rational::from_integer(BigInt::from(*b)) == *xi)
            .then_some(coords)
    }

    pub fn coordinates_int(&self, x: &[i64]) -> Option<Vec<i64>> {
        let xr: Vec<Rational> = x
            .iter()
            .map(|&v| Rational::from_integer(BigInt::from(v)))
            .collect();
        self.coordinates(&xr)
    }

    pub fn box_size(&self, radius: u32) -> Option<usize> {
        let side = 2 * radius as usize + 1;
        (0..self.rank()).try_fold(1usize, |acc, _| acc.checked_mul(side))
    }

    /// All lattice points with basis coordinates in `[-radius, radius]`,
    /// in lexicographic order of the coordinate vector.
    pub fn enumerate_box(&self, radius: u32) -> Result<Vec<BoxPoint>> {
        let count = self
            .box_size(radius)
            .filter(|&c| c <= self.max_points)
            .ok_or_else(|| {
                Error::ResourceLimit(format!(
                    "box of radius {radius} in rank {} exceeds {} points",
                    self.rank(),
                    self.max_points
                ))
            })?;
        let r = radius as i64;
        let mut out = Vec::with_capacity(count);
        let mut coords = vec![-r; self.rank()];
        loop {
            out.push(BoxPoint {
                point: self.point(&coords),
                coords: coords.clone(),
            });
            let mut k = self.rank();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if coords[k] < r {
                    coords[k] += 1;
                    break;
                }
                coords[k] = -r;
            }
        }
    }

    pub fn in_box(coords: &[i64], radius: u32) -> bool {
        coords.iter().all(|c| c.unsigned_abs() <= radius as u64)
    }
}

impl fmt::Display for RelationLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ambient {} rank {}", self.ambient_dim, self.rank())?;
        for b in &self.basis {
            writeln!(f, "{}", fmt_ivec(b))?;
        }
        Ok(())
    }
}
