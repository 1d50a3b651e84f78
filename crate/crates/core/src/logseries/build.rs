//! Constructive builders for the log-free solution `F`, the first-order
//! corrections `G_i`, the second-order corrections `H_ij`, and the
//! combinations over lattice vectors that turn quasisolutions into solutions.
//!
//! Each builder sums over a support set `{l : nsupp(v + l) = nsupp(v)}` (with
//! zero, one or two indices ignored) inside the truncation box. The coefficient
//! at `lambda^(v+l)` is a product of one-variable factors: `[v_j]_{l_j}` for
//! ordinary coordinates and the constant term of `f_{v_i}^{(l_i)}` (with one or
//! two powers of `log`) for the distinguished ones.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::coefficients::{bracket, f_coeffs};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::rational::{int, Rational};
use crate::support::{check_minimal, support_set, SupportVerdict};

use super::{LogKey, LogSeries, Truncation};

fn as_minimality(e: Error) -> Error {
    match e {
        Error::UndefinedBracket { z, k, index } => {
            Error::MinimalityViolation(format!("bracket [{z}]_{k} undefined at index {index:?}"))
        }
        other => other,
    }
}

fn ordinary_factor(trunc: &Truncation, l: &[i64], skip: &[usize]) -> Result<Rational> {
    let mut acc = int(1);
    for (m, (v, &lm)) in trunc.base.iter().zip(l).enumerate() {
        if skip.contains(&m) {
            continue;
        }
        acc *= bracket(v, lm).map_err(|e| match e {
            Error::UndefinedBracket { z, k, .. } => Error::UndefinedBracket {
                z,
                k,
                index: Some(m),
            },
            other => other,
        })?;
    }
    Ok(acc)
}

/// Constant term (in `log`) of `f_{v_i}^{(l_i)}` with `m` powers of `log`.
fn log_factor(trunc: &Truncation, l: &[i64], i: usize, m: u32) -> Result<Rational> {
    Ok(f_coeffs(&trunc.base[i], l[i], m)?.coeff(0))
}

fn check_index(trunc: &Truncation, i: usize) -> Result<()> {
    if i >= trunc.dim() {
        return Err(Error::Invalid(format!(
            "index {i} out of range 0..{}",
            trunc.dim()
        )));
    }
    Ok(())
}

fn build_sum(
    trunc: &Truncation,
    excluded: &[usize],
    coeff: impl Fn(&LatticePoint) -> Result<Rational> + Sync,
) -> Result<LogSeries> {
    let pts = support_set(&trunc.base, &trunc.lattice, trunc.radius, excluded)?;
    let coeffs: Vec<Rational> = pts
        .par_iter()
        .map(|p| coeff(&p.point).map_err(as_minimality))
        .collect::<Result<_>>()?;
    let mut out = LogSeries::with_truncation(trunc);
    for (p, c) in pts.iter().zip(coeffs) {
        out.add_term(LogKey::log_free(trunc.exponent(&p.point)), c);
    }
    Ok(out)
}

/// `F = sum_{l in L_v} [v]_l lambda^(v+l)`.
pub fn build_f(trunc: &Truncation) -> Result<LogSeries> {
    build_sum(trunc, &[], |l| ordinary_factor(trunc, l, &[]))
}

/// The log-free part `G_i` of the first-order quasisolution
/// `F log lambda_i + G_i`, summed over `L_{v,i^}`.
pub fn build_g(trunc: &Truncation, i: usize) -> Result<LogSeries> {
    check_index(trunc, i)?;
    build_sum(trunc, &[i], |l| {
        let c = log_factor(trunc, l, i, 1)?;
        if c == int(0) {
            return Ok(c);
        }
        Ok(c * ordinary_factor(trunc, l, &[i])?)
    })
}

/// `H_ii` of the second-order quasisolution
/// `F log^2 lambda_i + 2 G_i log lambda_i + H_ii`.
pub fn build_h_diag(trunc: &Truncation, i: usize) -> Result<LogSeries> {
    check_index(trunc, i)?;
    build_sum(trunc, &[i], |l| {
        let c = log_factor(trunc, l, i, 2)?;
        if c == int(0) {
            return Ok(c);
        }
        Ok(c * ordinary_factor(trunc, l, &[i])?)
    })
}

/// `H_ij` (`i != j`) of the second-order quasisolution
/// `F log lambda_i log lambda_j + G_i log lambda_j + G_j log lambda_i + H_ij`,
/// summed over `L_{v,i^j^}`.
pub fn build_h_off(trunc: &Truncation, i: usize, j: usize) -> Result<LogSeries> {
    check_index(trunc, i)?;
    check_index(trunc, j)?;
    if i == j {
        return build_h_diag(trunc, i);
    }
    build_sum(trunc, &[i, j], |l| {
        let ci = log_factor(trunc, l, i, 1)?;
        let cj = log_factor(trunc, l, j, 1)?;
        if ci == int(0) || cj == int(0) {
            return Ok(int(0));
        }
        Ok(ci * cj * ordinary_factor(trunc, l, &[i, j])?)
    })
}

/// The full product series `sum_l prod_m f_{v_m}^{(l_m)}(lambda_m)` where
/// coordinate `m` carries `log_powers[m]` powers of `log`, summed over the
/// support set that ignores every coordinate with a nonzero power.
///
/// This builds a quasisolution in one pass, logs included, and is used to
/// cross-check the `F`/`G`/`H` decomposition.
pub fn build_product_series(trunc: &Truncation, log_powers: &[u32]) -> Result<LogSeries> {
    if log_powers.len() != trunc.dim() {
        return Err(Error::DimensionMismatch {
            expected: trunc.dim(),
            found: log_powers.len(),
        });
    }
    let excluded: Vec<usize> = (0..trunc.dim()).filter(|&m| log_powers[m] > 0).collect();
    let pts = support_set(&trunc.base, &trunc.lattice, trunc.radius, &excluded)?;
    let parts: Vec<Vec<(Vec<u32>, Rational)>> = pts
        .par_iter()
        .map(|p| {
            // Expand prod_m P_m(log lambda_m) into monomials in the logs.
            let mut acc: Vec<(Vec<u32>, Rational)> = vec![(vec![0; trunc.dim()], int(1))];
            for (m, &pw) in log_powers.iter().enumerate() {
                let poly = f_coeffs(&trunc.base[m], p.point[m], pw).map_err(as_minimality)?;
                let mut next = Vec::new();
                for (deg, c) in acc {
                    for (d, pc) in poly.coeffs().iter().enumerate() {
                        if pc == &int(0) {
                            continue;
                        }
                        let mut deg = deg.clone();
                        deg[m] = d as u32;
                        next.push((deg, &c * pc));
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut out = LogSeries::with_truncation(trunc);
    for (p, monos) in pts.iter().zip(parts) {
        let e = trunc.exponent(&p.point);
        for (deg, c) in monos {
            out.add_term(LogKey::new(e.clone(), deg), c);
        }
    }
    Ok(out)
}

fn unit(dim: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; dim];
    e[i] = 1;
    e
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `F log lambda_i + G_i`.
pub fn first_order_quasisolution(f: &LogSeries, g_i: &LogSeries, i: usize) -> Result<LogSeries> {
    f.mul_log_linear(&unit(f.dim(), i))?.add(g_i)
}

/// `F log lambda_i log lambda_j + G_i log lambda_j + G_j log lambda_i + H_ij`.
pub fn second_order_quasisolution(
    f: &LogSeries,
    gs: &[LogSeries],
    h_ij: &LogSeries,
    i: usize,
    j: usize,
) -> Result<LogSeries> {
    let n = f.dim();
    check_len(n, gs.len())?;
    f.mul_log_linear(&unit(n, i))?
        .mul_log_linear(&unit(n, j))?
        .add(&gs[i].mul_log_linear(&unit(n, j))?)?
        .add(&gs[j].mul_log_linear(&unit(n, i))?)?
        .add(h_ij)
}

/// `F log lambda^l + sum_i l_i G_i`, a solution for every `l` in `L` when the
/// `G_i` come from a complete set of quasisolutions.
pub fn combine_first_order(f: &LogSeries, gs: &[LogSeries], l: &[i64]) -> Result<LogSeries> {
    let n = f.dim();
    check_len(n, gs.len())?;
    check_len(n, l.len())?;
    let parts: Vec<(i64, &LogSeries)> = l.iter().copied().zip(gs).collect();
    f.mul_log_linear(l)?
        .add(&LogSeries::linear_combination(n, &parts)?)
}

/// Symmetric table of second-order corrections. Entries are looked up in
/// either orientation.
#[derive(Debug, Clone, Default)]
pub struct HTable {
    entries: BTreeMap<(usize, usize), LogSeries>,
}

impl HTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: usize, j: usize, h: LogSeries) {
        self.entries.insert((i, j), h);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&LogSeries> {
        self.entries
            .get(&(i, j))
            .or_else(|| self.entries.get(&(j, i)))
    }

    pub fn check_symmetric(&self) -> Result<()> {
        for (&(i, j), h) in &self.entries {
            if let Some(other) = self.entries.get(&(j, i)) {
                if other != h {
                    return Err(Error::AsymmetricTable(i.min(j), i.max(j)));
                }
            }
        }
        Ok(())
    }

    /// Builds `H_ij` for `i <= j` over all pairs with `wanted(i, j)`.
    pub fn build(trunc: &Truncation, wanted: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut table = HTable::new();
        for i in 0..trunc.dim() {
            for j in i..trunc.dim() {
                if wanted(i, j) {
                    let h = if i == j {
                        build_h_diag(trunc, i)?
                    } else {
                        build_h_off(trunc, i, j)?
                    };
                    table.insert(i, j, h);
                }
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &LogSeries)> {
        self.entries.iter()
    }
}

/// `F log lambda^l log lambda^l' + (sum l_i G_i) log lambda^l'
///  + (sum l'_j G_j) log lambda^l + sum_{i,j} l_i l'_j H_ij`.
pub fn combine_second_order(
    f: &LogSeries,
    gs: &[LogSeries],
    hs: &HTable,
    l: &[i64],
    lp: &[i64],
) -> Result<LogSeries> {
    let n = f.dim();
    check_len(n, gs.len())?;
    check_len(n, l.len())?;
    check_len(n, lp.len())?;
    hs.check_symmetric()?;
    let gl: Vec<(i64, &LogSeries)> = l.iter().copied().zip(gs).collect();
    let glp: Vec<(i64, &LogSeries)> = lp.iter().copied().zip(gs).collect();
    let mut out = f
        .mul_log_linear(l)?
        .mul_log_linear(lp)?
        .add(&LogSeries::linear_combination(n, &gl)?.mul_log_linear(lp)?)?
        .add(&LogSeries::linear_combination(n, &glp)?.mul_log_linear(l)?)?;
    for (i, &li) in l.iter().enumerate() {
        for (j, &lj) in lp.iter().enumerate() {
            if li * lj == 0 {
                continue;
            }
            let h = hs
                .get(i, j)
                .ok_or_else(|| Error::Invalid(format!("H table has no entry ({i}, {j})")))?;
            out = out.add(&h.scale(&int(li * lj)))?;
        }
    }
    Ok(out)
}

/// `F` and every `G_i`, after checking within the truncation radius that
/// `v` has minimal negative support and minimal `i^`-negative support for
/// all `i`.
#[derive(Debug, Clone)]
pub struct FirstOrderSet {
    pub f: LogSeries,
    pub g: Vec<LogSeries>,
}

fn require_minimal(trunc: &Truncation, excluded: &[usize]) -> Result<()> {
    match check_minimal(&trunc.base, &trunc.lattice, trunc.radius, excluded)? {
        SupportVerdict::MinimalWithinRadius(_) => Ok(()),
        SupportVerdict::Counterexample(l) => Err(Error::MinimalityViolation(format!(
            "negative support ignoring {excluded:?} shrinks along {l:?}"
        ))),
    }
}

impl FirstOrderSet {
    pub fn build(trunc: &Truncation) -> Result<Self> {
        require_minimal(trunc, &[])?;
        for i in 0..trunc.dim() {
            require_minimal(trunc, &[i])?;
        }
        let f = build_f(trunc)?;
        let g = (0..trunc.dim())
            .map(|i| build_g(trunc, i))
            .collect::<Result<_>>()?;
        Ok(FirstOrderSet { f, g })
    }

    pub fn quasisolution(&self, i: usize) -> Result<LogSeries> {
        first_order_quasisolution(&self.f, &self.g[i], i)
    }

    pub fn combine(&self, l: &[i64]) -> Result<LogSeries> {
        combine_first_order(&self.f, &self.g, l)
    }
}

/// Checks every minimality hypothesis needed for `H_ij`.
pub fn require_second_order(trunc: &Truncation, i: usize, j: usize) -> Result<()> {
    require_minimal(trunc, &[])?;
    require_minimal(trunc, &[i])?;
    if i != j {
        require_minimal(trunc, &[j])?;
        require_minimal(trunc, &[i, j])?;
    }
    Ok(())
}
