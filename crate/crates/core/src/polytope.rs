//! Minkowski sums of lattice point sets and their interior lattice points.
//!
//! Everything is exact: facet normals are primitive integer vectors, so
//! membership tests never leave the integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::gcd_all;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Vec<i64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Invalid("point set is empty".into()))?;
        let n = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(PointSet { points })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }
}

/// `normal . x <= offset`, with `normal` primitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Facet {
    fn value(&self, x: &[i64]) -> BigInt {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, &b)| a * BigInt::from(b))
            .sum()
    }

    /// `offset - normal . x`: positive inside, zero on the facet.
    pub fn slack(&self, x: &[i64]) -> BigInt {
        &self.offset - self.value(x)
    }
}

/// A full-dimensional lattice polytope with its exact facet description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn strictly_contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.slack(x).is_positive())
    }
}

/// Fraction-free (Bareiss) rank of a list of integer rows.
fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..ncols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        sign
    } else {
        sign * prev
    }
}

/// Integer vector orthogonal to the `n - 1` rows of `d` (generalized cross
/// product); zero when the rows are dependent.
fn cross(d: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    (0..n)
        .map(|k| {
            let minor: Vec<Vec<BigInt>> = d
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let m = det(minor);
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

fn combinations(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn diff(a: &[i64], b: &[i64]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| BigInt::from(x - y)).collect()
}

/// Convex hull of `points` in `Z^n`.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<Polytope> {
    let set = PointSet::new(points.to_vec())?;
    let n = set.dim();
    let pts: Vec<Vec<i64>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let diffs: Vec<Vec<BigInt>> = pts[1..].iter().map(|p| diff(p, &pts[0])).collect();
    let affine = rank(&diffs);
    if affine < n {
        return Err(Error::DegenerateHull {
            dim: affine,
            ambient: n,
        });
    }
    let mut facets = BTreeSet::new();
    combinations(pts.len(), n, |idx| {
        let d: Vec<Vec<BigInt>> = idx[1..]
            .iter()
            .map(|&i| diff(&pts[i], &pts[idx[0]]))
            .collect();
        let mut normal = cross(&d, n);
        if normal.iter().all(Zero::is_zero) {
            return;
        }
        let g = gcd_all(&normal);
        for x in normal.iter_mut() {
            *x = x.div_floor(&g);
        }
        let mut f = Facet {
            offset: BigInt::zero(),
            normal,
        };
        f.offset = f.value(&pts[idx[0]]);
        let (mut above, mut below) = (false, false);
        for p in &pts {
            let s = f.slack(p);
            above |= s.is_negative();
            below |= s.is_positive();
        }
        if above && below {
            return;
        }
        if above {
            f.normal.iter_mut().for_each(|x| *x = -x.clone());
            f.offset = -f.offset;
        }
        facets.insert(f);
    });
    let facets: Vec<Facet> = facets.into_iter().collect();
    let vertices = pts
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<BigInt>> = facets
                .iter()
                .filter(|f| f.slack(p).is_zero())
                .map(|f| f.normal.clone())
                .collect();
            rank(&tight) == n
        })
        .cloned()
        .collect();
    Ok(Polytope {
        dim: n,
        vertices,
        facets,
    })
}

/// Hull of all sums choosing one point from each set.
pub fn minkowski_hull(sets: &[PointSet]) -> Result<Polytope> {
    let first = sets
        .first()
        .ok_or_else(|| Error::Invalid("no point sets given".into()))?;
    let n = first.dim();
    let mut sums: BTreeSet<Vec<i64>> = BTreeSet::new();
    sums.insert(vec![0; n]);
    for s in sets {
        if s.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.dim(),
            });
        }
        sums = sums
            .iter()
            .flat_map(|a| {
                s.points()
                    .iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
            })
            .collect();
        // Only points on the current hull matter for the next sum.
        if let Ok(p) = convex_hull(&sums.iter().cloned().collect::<Vec<_>>()) {
            sums = p.vertices.into_iter().collect();
        }
    }
    convex_hull(&sums.into_iter().collect::<Vec<_>>())
}

/// Lattice points strictly inside every facet, in lexicographic order.
pub fn interior_lattice_points(p: &Polytope) -> Vec<Vec<i64>> {
    let n = p.dim;
    let lo: Vec<i64> = (0..n)
        .map(|j| p.vertices.iter().map(|v| v[j]).min().unwrap_or(0))
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|j| p.vertices.iter().map(|v| v[j]).max().unwrap_or(0))
        .collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if p.strictly_contains(&x) {
            out.push(x.clone());
        }
        let Some(j) = (0..n).rev().find(|&j| x[j] < hi[j]) else {
            return out;
        };
        x[j] += 1;
        x[j + 1..].copy_from_slice(&lo[j + 1..]);
    }
}

/// True iff `delta` is the unique interior lattice point of the Minkowski
/// sum of the hulls of `sets`.
pub fn check_unique_interior_point(sets: &[PointSet], delta: &[i64]) -> Result<bool> {
    let p = minkowski_hull(sets)?;
    Ok(interior_lattice_points(&p) == [delta.to_vec()])
}
