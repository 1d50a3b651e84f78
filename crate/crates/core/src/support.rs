//! Negative-support combinatorics and radius-qualified minimality checks.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{BoxPoint, LatticePoint, RelationLattice};
use crate::rational::{int, is_negative_integer, Rational};

/// Outcome of a minimality scan over a finite box of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportVerdict {
    /// No shrinking shift exists among lattice points with coordinates in
    /// `[-R, R]`.
    MinimalWithinRadius(u32),
    /// The first lattice point (in enumeration order) whose shift strictly
    /// shrinks the negative support.
    Counterexample(LatticePoint),
}

impl SupportVerdict {
    pub fn is_minimal(&self) -> bool {
        matches!(self, SupportVerdict::MinimalWithinRadius(_))
    }
}

fn check_excluded(dim: usize, excluded: &[usize]) -> Result<()> {
    if excluded.len() > 2 {
        return Err(Error::Invalid(format!(
            "at most two excluded indices are supported, got {}",
            excluded.len()
        )));
    }
    if let Some(&bad) = excluded.iter().find(|&&i| i >= dim) {
        return Err(Error::Invalid(format!(
            "excluded index {bad} out of range 0..{dim}"
        )));
    }
    if excluded.len() == 2 && excluded[0] == excluded[1] {
        return Err(Error::Invalid("excluded indices must be distinct".into()));
    }
    Ok(())
}

/// Indices outside `excluded` where `z` is a negative integer.
pub fn nsupp(z: &[Rational], excluded: &[usize]) -> Result<BTreeSet<usize>> {
    check_excluded(z.len(), excluded)?;
    Ok(nsupp_unchecked(z, excluded))
}

fn nsupp_unchecked(z: &[Rational], excluded: &[usize]) -> BTreeSet<usize> {
    z.iter()
        .enumerate()
        .filter(|(i, zi)| !excluded.contains(i) && is_negative_integer(zi))
        .map(|(i, _)| i)
        .collect()
}

/// Negative support of `v + l`.
pub fn shifted_nsupp(v: &[Rational], l: &[i64], excluded: &[usize]) -> BTreeSet<usize> {
    v.iter()
        .zip(l)
        .enumerate()
        .filter(|(i, (vi, &li))| !excluded.contains(i) && is_negative_integer(&(*vi + int(li))))
        .map(|(i, _)| i)
        .collect()
}

fn check_dims(v: &[Rational], lat: &RelationLattice) -> Result<()> {
    if v.len() != lat.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: lat.ambient_dim(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Scans the radius-`R` box for a shift `l` with
/// `nsupp(v + l) ⊊ nsupp(v)` (both taken outside `excluded`).
pub fn check_minimal(
    v: &[Rational],
    lat: &RelationLattice,
    radius: u32,
    excluded: &[usize],
) -> Result<SupportVerdict> {
    check_dims(v, lat)?;
    let base = nsupp(v, excluded)?;
    if base.is_empty() {
        return Ok(SupportVerdict::MinimalWithinRadius(radius));
    }
    let pts = lat.enumerate_box(radius)?;
    let hit = pts.par_iter().find_first(|p| {
        let s = shifted_nsupp(v, &p.point, excluded);
        s.len() < base.len() && s.is_subset(&base)
    });
    Ok(match hit {
        Some(p) => SupportVerdict::Counterexample(p.point.clone()),
        None => SupportVerdict::MinimalWithinRadius(radius),
    })
}

/// Box points `l` with `nsupp(v + l) = nsupp(v)` (outside `excluded`), in
/// enumeration order.
pub fn support_set(
    v: &[Rational],
    lat: &RelationLattice,
    radius: u32,
    excluded: &[usize],
) -> Result<Vec<BoxPoint>> {
    check_dims(v, lat)?;
    let base = nsupp(v, excluded)?;
    let pts = lat.enumerate_box(radius)?;
    Ok(pts
        .into_par_iter()
        .filter(|p| shifted_nsupp(v, &p.point, excluded) == base)
        .collect())
}
