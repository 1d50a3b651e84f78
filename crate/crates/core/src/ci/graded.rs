//! Truncated series on a lattice graded by a positive integer functional.
//!
//! Every series here is keyed by lattice coordinates and truncated at a grade
//! bound `D`; products, inverses, `exp` and `log` are computed grade by grade,
//! so the truncation is exact rather than approximate.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// A linear functional on lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading(pub Vec<i64>);

impl Grading {
    pub fn grade(&self, coords: &[i64]) -> i64 {
        self.0.iter().zip(coords).map(|(a, b)| a * b).sum()
    }
}

/// Coefficients keyed by `(grade, coordinates)`, all grades in `0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    grading: Grading,
    bound: i64,
    terms: BTreeMap<(i64, Vec<i64>), Rational>,
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl GradedSeries {
    pub fn zero(grading: Grading, bound: i64) -> Self {
        GradedSeries {
            grading,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(grading: Grading, bound: i64) -> Self {
        let rank = grading.0.len();
        let mut s = Self::zero(grading, bound);
        s.add(vec![0; rank], int(1)).expect("grade 0 is in range");
        s
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Adds `c` at `coords`; terms above the bound are dropped, negative
    /// grades and nonzero grade-0 points are rejected.
    pub fn add(&mut self, coords: Vec<i64>, c: Rational) -> Result<()> {
        let g = self.grading.grade(&coords);
        if g < 0 || (g == 0 && coords.iter().any(|&x| x != 0)) {
            return Err(Error::Invalid(format!(
                "point {coords:?} has grade {g} under {:?}",
                self.grading.0
            )));
        }
        if g > self.bound || c.is_zero() {
            return Ok(());
        }
        let key = (g, coords);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn coeff(&self, coords: &[i64]) -> Rational {
        let g = self.grading.grade(coords);
        self.terms
            .get(&(g, coords.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> Rational {
        self.coeff(&vec![0; self.grading.0.len()])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Vec<i64>, &Rational)> {
        self.terms.iter().map(|((g, p), c)| (*g, p, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn slice(&self, g: i64) -> Vec<(&Vec<i64>, &Rational)> {
        self.terms
            .range((g, Vec::new())..(g + 1, Vec::new()))
            .map(|((_, p), c)| (p, c))
            .collect()
    }

    fn check_compatible(&self, other: &GradedSeries) -> Result<()> {
        if self.grading != other.grading || self.bound != other.bound {
            return Err(Error::Invalid(
                "graded series use different truncations".into(),
            ));
        }
        Ok(())
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (_, p, c) in other.iter() {
            out.add(p.clone(), -c.clone())?;
        }
        Ok(out)
    }

    /// Sum over `q + r = target` restricted to `grade(q) = gq`, for every
    /// target of grade `s`, weighted by `weight(q)`.
    fn convolve_grade(
        &self,
        other: &GradedSeries,
        s: i64,
        grades: impl Iterator<Item = i64>,
        weight: impl Fn(i64) -> Rational + Sync,
    ) -> BTreeMap<Vec<i64>, Rational> {
        let parts: Vec<Vec<(Vec<i64>, Rational)>> = grades
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|gq| {
                let left = self.slice(gq);
                let right = other.slice(s - gq);
                let w = weight(gq);
                let mut out = Vec::with_capacity(left.len() * right.len());
                for (q, a) in &left {
                    let wa = &w * *a;
                    for (r, b) in &right {
                        out.push((add_vec(q, r), &wa * *b));
                    }
                }
                out
            })
            .collect();
        let mut acc: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (p, c) in parts.into_iter().flatten() {
            *acc.entry(p).or_insert_with(Rational::zero) += c;
        }
        acc
    }

    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        let mut out = GradedSeries::zero(self.grading.clone(), self.bound);
        for s in 0..=self.bound {
            for (p, c) in self.convolve_grade(other, s, 0..=s, |_| int(1)) {
                out.add(p, c)?;
            }
        }
        Ok(out)
    }

    /// `self / other`, where `other` has constant term 1.
    pub fn div(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        if other.constant() != int(1) {
            return Err(Error::Invalid("divisor must have constant term 1".into()));
        }
        let mut out = GradedSeries::zero(self.grading.clone(), self.bound);
        for s in 0..=self.bound {
            let mut cur: BTreeMap<Vec<i64>, Rational> = self
                .slice(s)
                .into_iter()
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect();
            for (p, c) in other.convolve_grade(&out, s, 1..=s, |_| int(1)) {
                *cur.entry(p).or_insert_with(Rational::zero) -= c;
            }
            for (p, c) in cur {
                out.add(p, c)?;
            }
        }
        Ok(out)
    }

    /// `exp(self)` for a series without constant term, via
    /// `grade(p) E_p = sum_{q + r = p} grade(q) h_q E_r`.
    pub fn exp(&self) -> Result<GradedSeries> {
        if !self.constant().is_zero() {
            return Err(Error::Invalid(
                "exp needs a series without constant term".into(),
            ));
        }
        let mut out = GradedSeries::one(self.grading.clone(), self.bound);
        for s in 1..=self.bound {
            let inv = Rational::new(1.into(), s.into());
            for (p, c) in self.convolve_grade(&out, s, 1..=s, int) {
                out.add(p, c * &inv)?;
            }
        }
        Ok(out)
    }

    /// `log(self)` for a series with constant term 1, via
    /// `grade(p) L_p = grade(p) E_p - sum_{q + r = p, r != 0} grade(q) L_q E_r`.
    pub fn log(&self) -> Result<GradedSeries> {
        if !self.constant().is_one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        let mut out = GradedSeries::zero(self.grading.clone(), self.bound);
        for s in 1..=self.bound {
            let mut cur: BTreeMap<Vec<i64>, Rational> = self
                .slice(s)
                .into_iter()
                .map(|(p, c)| (p.clone(), c * int(s)))
                .collect();
            for (p, c) in out.convolve_grade(self, s, 1..s, int) {
                *cur.entry(p).or_insert_with(Rational::zero) -= c;
            }
            let inv = Rational::new(1.into(), s.into());
            for (p, c) in cur {
                out.add(p, c * &inv)?;
            }
        }
        Ok(out)
    }
}
