//! Sparse truncated series in `lambda` with rational exponents and
//! `log lambda_i` factors.
//!
//! A term is `coeff * lambda^e * prod_i log^(d_i) lambda_i`. Terms are keyed by
//! `(e, d)` in a `BTreeMap`, so iteration order is lexicographic on the
//! exponent and then on the log multidegree, and zero coefficients are never
//! stored.
//!
//! # Text format
//!
//! ```text
//! # gkz log-series
//! # dim 5
//! # base (0,0,0,0,1)
//! # radius 3
//! # basis (1,0,1,0,-2)
//! # basis (0,1,0,1,-2)
//! 1 * lambda^(0,0,0,0,1) * log^(0,0,0,0,1)
//! 1/6 * lambda^(-1,0,-1,0,3) * log^(0,0,0,0,0)
//! ```
//!
//! The `base`, `radius` and `basis` lines carry the truncation metadata and
//! are omitted for series built without it.

mod build;

pub use build::*;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, RelationLattice};
use crate::rational::{fmt_ivec, fmt_rational, fmt_vec, int, parse_rational, Rational};

/// Where a series lives: the coset `v + L` and the coefficient box radius
/// used to truncate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub base: Vec<Rational>,
    pub lattice: Arc<RelationLattice>,
    pub radius: u32,
}

impl Truncation {
    pub fn new(base: Vec<Rational>, lattice: Arc<RelationLattice>, radius: u32) -> Result<Self> {
        if base.len() != lattice.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.ambient_dim(),
                found: base.len(),
            });
        }
        Ok(Truncation {
            base,
            lattice,
            radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `v + l` as a rational exponent.
    pub fn exponent(&self, l: &[i64]) -> Vec<Rational> {
        self.base
            .iter()
            .zip(l)
            .map(|(v, &li)| v + int(li))
            .collect()
    }

    /// Basis coordinates of `u - v`, if `u` lies on the coset.
    pub fn coordinates_of(&self, u: &[Rational]) -> Option<Vec<i64>> {
        let diff: Vec<Rational> = u.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        self.lattice.coordinates(&diff)
    }

    /// `u - v` as a lattice point, if `u` lies on the coset.
    pub fn lattice_point_of(&self, u: &[Rational]) -> Option<LatticePoint> {
        self.coordinates_of(u).map(|c| self.lattice.point(&c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogKey {
    pub exponent: Vec<Rational>,
    pub logdeg: Vec<u32>,
}

impl LogKey {
    pub fn new(exponent: Vec<Rational>, logdeg: Vec<u32>) -> Self {
        LogKey { exponent, logdeg }
    }

    pub fn log_free(exponent: Vec<Rational>) -> Self {
        let n = exponent.len();
        LogKey {
            exponent,
            logdeg: vec![0; n],
        }
    }

    pub fn total_logdeg(&self) -> u32 {
        self.logdeg.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogTerm {
    pub key: LogKey,
    pub coeff: Rational,
}

impl fmt::Display for LogTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * lambda^{} * log^{}",
            fmt_rational(&self.coeff),
            fmt_vec(&self.key.exponent),
            fmt_ivec(&self.key.logdeg)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSeries {
    dim: usize,
    terms: BTreeMap<LogKey, Rational>,
    meta: Option<Truncation>,
}

impl LogSeries {
    pub fn zero(dim: usize) -> Self {
        LogSeries {
            dim,
            terms: BTreeMap::new(),
            meta: None,
        }
    }

    pub fn with_truncation(trunc: &Truncation) -> Self {
        LogSeries {
            dim: trunc.dim(),
            terms: BTreeMap::new(),
            meta: Some(trunc.clone()),
        }
    }

    pub fn set_truncation(&mut self, trunc: Option<Truncation>) {
        self.meta = trunc;
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.meta.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, key: &LogKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the log-free monomial `lambda^u`.
    pub fn coeff_at(&self, exponent: &[Rational]) -> Rational {
        self.coeff(&LogKey::log_free(exponent.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LogKey, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = LogTerm> + '_ {
        self.terms.iter().map(|(k, c)| LogTerm {
            key: k.clone(),
            coeff: c.clone(),
        })
    }

    /// Adds `coeff * key` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: LogKey, coeff: Rational) {
        debug_assert_eq!(key.exponent.len(), self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn merged_meta(&self, other: &LogSeries) -> Result<Option<Truncation>> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        match (&self.meta, &other.meta) {
            (Some(a), Some(b)) if a != b => Err(Error::Invalid(
                "series carry different truncation metadata".into(),
            )),
            (Some(a), _) => Ok(Some(a.clone())),
            (None, b) => Ok(b.clone()),
        }
    }

    pub fn add(&self, other: &LogSeries) -> Result<LogSeries> {
        let mut out = self.clone();
        out.meta = self.merged_meta(other)?;
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LogSeries) -> Result<LogSeries> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> LogSeries {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, r: &Rational) -> LogSeries {
        let mut out = LogSeries {
            dim: self.dim,
            terms: BTreeMap::new(),
            meta: self.meta.clone(),
        };
        if r.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect();
        out
    }

    /// Multiplies by `log lambda^w = sum_i w_i log lambda_i`.
    pub fn mul_log_linear(&self, w: &[i64]) -> Result<LogSeries> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        let mut out = LogSeries {
            dim: self.dim,
            terms: BTreeMap::new(),
            meta: self.meta.clone(),
        };
        for (k, c) in &self.terms {
            for (i, &wi) in w.iter().enumerate() {
                if wi == 0 {
                    continue;
                }
                let mut key = k.clone();
                key.logdeg[i] += 1;
                out.add_term(key, c * int(wi));
            }
        }
        Ok(out)
    }

    /// Keeps the terms whose key satisfies `pred`.
    pub fn restrict(&self, pred: impl Fn(&LogKey) -> bool) -> LogSeries {
        LogSeries {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| pred(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
            meta: self.meta.clone(),
        }
    }

    /// Linear combination `sum_i w_i S_i` of series with a common dimension.
    pub fn linear_combination(dim: usize, parts: &[(i64, &LogSeries)]) -> Result<LogSeries> {
        let mut acc = LogSeries::zero(dim);
        for (w, s) in parts {
            if *w != 0 {
                acc = acc.add(&s.scale(&int(*w)))?;
            }
        }
        Ok(acc)
    }

    /// Lattice points `u - v` of all term exponents (requires metadata).
    pub fn support_points(&self) -> Result<Vec<LatticePoint>> {
        let trunc = self
            .meta
            .as_ref()
            .ok_or_else(|| Error::Invalid("series carries no truncation metadata".into()))?;
        let mut pts: Vec<LatticePoint> = self
            .terms
            .keys()
            .map(|k| {
                trunc
                    .lattice_point_of(&k.exponent)
                    .ok_or_else(|| Error::NonLatticeExponent(fmt_vec(&k.exponent)))
            })
            .collect::<Result<_>>()?;
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<LogSeries> {
        let mut dim = None;
        let mut base = None;
        let mut radius = None;
        let mut basis: Vec<LatticePoint> = Vec::new();
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let line_no = idx + 1;
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("dim ") {
                    dim = Some(v.trim().parse::<usize>().map_err(|e| perr(e.to_string()))?);
                } else if let Some(v) = rest.strip_prefix("base ") {
                    base = Some(parse_tuple(v, parse_rational).map_err(|e| perr(e.to_string()))?);
                } else if let Some(v) = rest.strip_prefix("radius ") {
                    radius = Some(v.trim().parse::<u32>().map_err(|e| perr(e.to_string()))?);
                } else if let Some(v) = rest.strip_prefix("basis ") {
                    basis.push(parse_tuple(v, parse_i64).map_err(|e| perr(e.to_string()))?);
                }
                continue;
            }
            let mut parts = line.split(" * ");
            let (Some(c), Some(e), Some(d), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(perr(format!("malformed term {line:?}")));
            };
            let coeff = parse_rational(c).map_err(|e| perr(e.to_string()))?;
            let exponent = e
                .strip_prefix("lambda^")
                .ok_or_else(|| perr("expected lambda^(...)".into()))
                .and_then(|e| parse_tuple(e, parse_rational).map_err(|e| perr(e.to_string())))?;
            let logdeg = d
                .strip_prefix("log^")
                .ok_or_else(|| perr("expected log^(...)".into()))
                .and_then(|d| parse_tuple(d, parse_u32).map_err(|e| perr(e.to_string())))?;
            if exponent.len() != logdeg.len() {
                return Err(perr("exponent and log degree lengths differ".into()));
            }
            terms.push((line_no, LogKey::new(exponent, logdeg), coeff));
        }
        let dim = dim
            .or_else(|| terms.first().map(|(_, k, _)| k.exponent.len()))
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: "missing dimension".into(),
            })?;
        let mut out = LogSeries::zero(dim);
        if let (Some(base), Some(radius)) = (base, radius) {
            let lattice = Arc::new(RelationLattice::from_basis(dim, &basis)?);
            out.meta = Some(Truncation::new(base, lattice, radius)?);
        }
        for (line, key, coeff) in terms {
            if key.exponent.len() != dim {
                return Err(Error::Parse {
                    line,
                    msg: format!("term has dimension {}, expected {dim}", key.exponent.len()),
                });
            }
            out.add_term(key, coeff);
        }
        Ok(out)
    }
}

fn parse_i64(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("not an integer: {s:?}")))
}

fn parse_u32(s: &str) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("not a log degree: {s:?}")))
}

fn parse_tuple<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| Error::Invalid(format!("expected a parenthesised tuple: {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(item).collect()
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# gkz log-series")?;
        writeln!(f, "# dim {}", self.dim)?;
        if let Some(t) = &self.meta {
            writeln!(f, "# base {}", fmt_vec(&t.base))?;
            writeln!(f, "# radius {}", t.radius)?;
            for b in t.lattice.basis() {
                writeln!(f, "# basis {}", fmt_ivec(b))?;
            }
        }
        for (k, c) in &self.terms {
            writeln!(
                f,
                "{} * lambda^{} * log^{}",
                fmt_rational(c),
                fmt_vec(&k.exponent),
                fmt_ivec(&k.logdeg)
            )?;
        }
        Ok(())
    }
}
