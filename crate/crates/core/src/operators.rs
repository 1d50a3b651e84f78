//! Symbolic application of box and Euler operators to [`LogSeries`], and the
//! certified vanishing checks that verify every constructed solution.
//!
//! A truncated series agrees with its infinite counterpart on every exponent
//! whose lattice coordinates (relative to the base `v`) lie in the
//! truncation box. The coefficient of `box_l S` at exponent `u` only reads
//! the coefficients of `S` at `u + l+` and `u + l-`, so it is *certified*
//! when both of those lie in the box; certified coefficients of a true
//! solution must vanish exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LatticePoint, RelationLattice};
use crate::logseries::{LogKey, LogSeries, LogTerm, Truncation};
use crate::rational::{fmt_ivec, fmt_vec, int, Rational};

/// `box_l = prod_{l_i > 0} d_i^{l_i} - prod_{l_i < 0} d_i^{-l_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxOp {
    l: LatticePoint,
}

impl BoxOp {
    pub fn new(l: LatticePoint) -> Self {
        BoxOp { l }
    }

    /// Rejects `l` unless `A l = 0`.
    pub fn checked(l: LatticePoint, a: &IntMatrix) -> Result<Self> {
        if !a.mul_int(&l)?.iter().all(Zero::is_zero) {
            return Err(Error::Invalid(format!(
                "{} is not a relation",
                fmt_ivec(&l)
            )));
        }
        Ok(BoxOp { l })
    }

    pub fn l(&self) -> &[i64] {
        &self.l
    }

    pub fn plus(&self) -> Vec<u32> {
        self.l.iter().map(|&x| x.max(0) as u32).collect()
    }

    pub fn minus(&self) -> Vec<u32> {
        self.l.iter().map(|&x| (-x).max(0) as u32).collect()
    }
}

/// `Z_i = sum_j a_ij lambda_j d_j - beta_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerOp {
    pub row: Vec<BigInt>,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertifiedReport {
    pub checked_term_count: usize,
    pub uncertified_term_count: usize,
    pub violations: Vec<LogTerm>,
}

impl CertifiedReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: CertifiedReport) {
        self.checked_term_count += other.checked_term_count;
        self.uncertified_term_count += other.uncertified_term_count;
        self.violations.extend(other.violations);
        self.violations.sort_by(|a, b| a.key.cmp(&b.key));
    }
}

fn differentiate_term(key: &LogKey, coeff: &Rational, j: usize, out: &mut Vec<(LogKey, Rational)>) {
    let mut shifted = key.clone();
    shifted.exponent[j] -= int(1);
    let c = &key.exponent[j];
    if !c.is_zero() {
        out.push((shifted.clone(), coeff * c));
    }
    let e = key.logdeg[j];
    if e > 0 {
        shifted.logdeg[j] -= 1;
        out.push((shifted, coeff * int(e as i64)));
    }
}

/// Term-wise `d/d lambda_j`.
pub fn differentiate(s: &LogSeries, j: usize) -> Result<LogSeries> {
    if j >= s.dim() {
        return Err(Error::Invalid(format!(
            "index {j} out of range 0..{}",
            s.dim()
        )));
    }
    let mut buf = Vec::with_capacity(2 * s.len());
    for (k, c) in s.iter() {
        differentiate_term(k, c, j, &mut buf);
    }
    let mut out = s.restrict(|_| false);
    for (k, c) in buf {
        out.add_term(k, c);
    }
    Ok(out)
}

fn apply_monomial(s: &LogSeries, powers: &[u32]) -> Result<LogSeries> {
    let mut cur = s.clone();
    for (j, &p) in powers.iter().enumerate() {
        for _ in 0..p {
            if cur.is_zero() {
                return Ok(cur);
            }
            cur = differentiate(&cur, j)?;
        }
    }
    Ok(cur)
}

pub fn apply_box(s: &LogSeries, op: &BoxOp) -> Result<LogSeries> {
    if op.l.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: op.l.len(),
        });
    }
    apply_monomial(s, &op.plus())?.sub(&apply_monomial(s, &op.minus())?)
}

pub fn apply_euler(s: &LogSeries, op: &EulerOp) -> Result<LogSeries> {
    if op.row.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: op.row.len(),
        });
    }
    let row: Vec<Rational> = op
        .row
        .iter()
        .map(|a| Rational::from_integer(a.clone()))
        .collect();
    let mut out = s.restrict(|_| false);
    for (k, c) in s.iter() {
        let weight = row
            .iter()
            .zip(&k.exponent)
            .fold(-op.beta.clone(), |acc, (a, e)| acc + a * e);
        out.add_term(k.clone(), c * weight);
        for (j, a) in row.iter().enumerate() {
            if k.logdeg[j] > 0 && !a.is_zero() {
                let mut lower = k.clone();
                lower.logdeg[j] -= 1;
                out.add_term(lower, c * a * int(k.logdeg[j] as i64));
            }
        }
    }
    Ok(out)
}

fn shift(u: &[Rational], by: &[u32]) -> Vec<Rational> {
    u.iter().zip(by).map(|(x, &d)| x + int(d as i64)).collect()
}

fn source_in_box(trunc: &Truncation, u: &[Rational]) -> Result<bool> {
    let coords = trunc
        .coordinates_of(u)
        .ok_or_else(|| Error::NonLatticeExponent(fmt_vec(u)))?;
    Ok(RelationLattice::in_box(&coords, trunc.radius))
}

fn unshift(u: &[Rational], by: &[u32]) -> Vec<Rational> {
    u.iter().zip(by).map(|(x, &d)| x - int(d as i64)).collect()
}

/// Applies `op` and reports every nonzero coefficient in the certified
/// region. `checked_term_count` counts the certified result exponents, i.e.
/// the positions where vanishing was actually established.
pub fn verify_box_annihilation(s: &LogSeries, op: &BoxOp) -> Result<CertifiedReport> {
    let image = apply_box(s, op)?;
    if s.is_zero() {
        return Ok(CertifiedReport::default());
    }
    let trunc = s
        .truncation()
        .ok_or_else(|| Error::Invalid("box verification needs truncation metadata".into()))?;
    let (plus, minus) = (op.plus(), op.minus());
    let mut candidates: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for (k, _) in s.iter() {
        candidates.insert(unshift(&k.exponent, &plus));
        candidates.insert(unshift(&k.exponent, &minus));
    }
    let candidates: Vec<Vec<Rational>> = candidates.into_iter().collect();
    let flags: Vec<bool> = candidates
        .par_iter()
        .map(|u| {
            Ok(source_in_box(trunc, &shift(u, &plus))? && source_in_box(trunc, &shift(u, &minus))?)
        })
        .collect::<Result<_>>()?;
    let certified: BTreeSet<&Vec<Rational>> = candidates
        .iter()
        .zip(&flags)
        .filter_map(|(u, &ok)| ok.then_some(u))
        .collect();
    let mut report = CertifiedReport {
        checked_term_count: certified.len(),
        ..Default::default()
    };
    for t in image.terms() {
        if certified.contains(&t.key.exponent) {
            report.violations.push(t);
        } else {
            report.uncertified_term_count += 1;
        }
    }
    Ok(report)
}

/// Verifies `op` for each lattice vector in `ops`, merging the reports.
pub fn verify_box_all(s: &LogSeries, ops: &[BoxOp]) -> Result<CertifiedReport> {
    let mut report = CertifiedReport::default();
    for op in ops {
        report.merge(verify_box_annihilation(s, op)?);
    }
    Ok(report)
}

/// Every Euler operator must annihilate `s` exactly; no margin is needed
/// because Euler operators do not shift exponents.
pub fn verify_euler_annihilation(
    s: &LogSeries,
    a: &IntMatrix,
    beta: &[Rational],
) -> Result<CertifiedReport> {
    if beta.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: beta.len(),
        });
    }
    let mut report = CertifiedReport::default();
    for (row, b) in a.rows().iter().zip(beta) {
        let op = EulerOp {
            row: row.clone(),
            beta: b.clone(),
        };
        let image = apply_euler(s, &op)?;
        report.checked_term_count += s.len();
        report.violations.extend(image.terms());
    }
    report.violations.sort_by(|x, y| x.key.cmp(&y.key));
    Ok(report)
}
