//! Complete-intersection families: the lifted hypergeometric system, a
//! positive grading of its solution supports, mirror maps
//! `q = lambda_j exp(G_j / F)` computed grade by grade, and integrality
//! reports for their coefficients.

pub mod graded;

use std::fmt::Write as _;

use num_traits::One;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LatticePoint, RelationLattice, DEFAULT_MAX_POINTS};
use crate::logseries::{build_f, build_g, LogSeries, Truncation};
use crate::polytope::{check_unique_interior_point, PointSet};
use crate::rational::{fmt_ivec, fmt_rational, int, Rational};
use crate::support::{check_minimal, support_set, SupportVerdict};
use crate::system::GkzSystem;

pub use graded::{GradedSeries, Grading};

/// Default coordinate range `[-B, B]` for the grading search.
pub const DEFAULT_GRADING_BOUND: i64 = 8;
/// Radius used to collect support points for the grading search.
pub const GRADING_RADIUS: u32 = 2;
/// Largest radius the mirror-map escalation will try.
pub const DEFAULT_RADIUS_CAP: u32 = 64;

/// Point sets `A_1, ..., A_M` in `Z^n`; the first point of each set is the
/// distinguished point `a_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiSpec {
    sets: Vec<Vec<Vec<i64>>>,
}

impl CiSpec {
    pub fn new(sets: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let n = sets
            .first()
            .and_then(|s| s.first())
            .map(Vec::len)
            .ok_or_else(|| Error::Invalid("complete intersection needs a nonempty set".into()))?;
        for (i, s) in sets.iter().enumerate() {
            if s.len() < 2 {
                return Err(Error::Invalid(format!(
                    "set {} needs a distinguished point and at least one more",
                    i + 1
                )));
            }
            if let Some(p) = s.iter().find(|p| p.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        Ok(CiSpec { sets })
    }

    pub fn sets(&self) -> &[Vec<Vec<i64>>] {
        &self.sets
    }

    /// Ambient dimension `n` of the point sets.
    pub fn n(&self) -> usize {
        self.sets[0][0].len()
    }

    /// Number of sets `M`.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn columns(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Column of point `j` of set `i` (both 0-based).
    pub fn column(&self, i: usize, j: usize) -> Result<usize> {
        let set = self
            .sets
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("no set with index {}", i + 1)))?;
        if j >= set.len() {
            return Err(Error::Invalid(format!(
                "set {} has points 0..{}, got {j}",
                i + 1,
                set.len() - 1
            )));
        }
        Ok(self.sets[..i].iter().map(Vec::len).sum::<usize>() + j)
    }

    /// `(set, point)` of a column, both 0-based.
    pub fn label(&self, col: usize) -> (usize, usize) {
        let mut c = col;
        for (i, s) in self.sets.iter().enumerate() {
            if c < s.len() {
                return (i, c);
            }
            c -= s.len();
        }
        panic!("column {col} out of range");
    }

    /// `delta = sum_i a_0^(i)`.
    pub fn delta(&self) -> Vec<i64> {
        let mut d = vec![0; self.n()];
        for s in &self.sets {
            for (x, y) in d.iter_mut().zip(&s[0]) {
                *x += y;
            }
        }
        d
    }

    /// Columns `(a; e_i)` for every point `a` of set `i`.
    pub fn lifted_matrix(&self) -> IntMatrix {
        let (n, m) = (self.n(), self.m());
        let mut rows = vec![Vec::with_capacity(self.columns()); n + m];
        for (i, s) in self.sets.iter().enumerate() {
            for p in s {
                for (r, &x) in p.iter().enumerate() {
                    rows[r].push(x);
                }
                for k in 0..m {
                    rows[n + k].push(i64::from(k == i));
                }
            }
        }
        IntMatrix::from_i64(&rows).expect("rows have equal length")
    }

    /// `beta = (-delta; -1, ..., -1)`.
    pub fn beta(&self) -> Vec<Rational> {
        self.delta()
            .iter()
            .map(|&x| int(-x))
            .chain(std::iter::repeat_n(int(-1), self.m()))
            .collect()
    }

    /// `-1` at every distinguished column, `0` elsewhere.
    pub fn v(&self) -> Vec<Rational> {
        self.sets
            .iter()
            .flat_map(|s| (0..s.len()).map(|j| if j == 0 { int(-1) } else { int(0) }))
            .collect()
    }

    pub fn build_system(&self) -> Result<GkzSystem> {
        GkzSystem::new(self.lifted_matrix(), self.beta(), self.v())
    }

    /// Whether `delta` is the unique interior lattice point of the Minkowski
    /// sum of the hulls of the sets.
    pub fn interior_point_check(&self) -> Result<bool> {
        let sets: Vec<PointSet> = self
            .sets
            .iter()
            .map(|s| PointSet::new(s.clone()))
            .collect::<Result<_>>()?;
        check_unique_interior_point(&sets, &self.delta())
    }

    /// Canonical one-line text form, the input of [`CiSpec::hash`].
    pub fn canonical(&self) -> String {
        let sets: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                let pts: Vec<String> = s.iter().map(|p| fmt_ivec(p)).collect();
                format!("[{}]", pts.join(","))
            })
            .collect();
        format!("ci[{}]", sets.join(","))
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// Minimality verdicts for the empty exclusion and for every column.
    pub fn minimality_sweep(
        &self,
        sys: &GkzSystem,
        radius: u32,
    ) -> Result<Vec<(Option<usize>, SupportVerdict)>> {
        let mut out = vec![(None, check_minimal(sys.v(), sys.lattice(), radius, &[])?)];
        for col in 0..self.columns() {
            out.push((
                Some(col),
                check_minimal(sys.v(), sys.lattice(), radius, &[col])?,
            ));
        }
        Ok(out)
    }
}

fn shell(rank: usize, k: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * k + 1) as usize;
    let total = side.pow(rank as u32);
    (0..total).filter_map(move |mut idx| {
        let mut c = vec![0; rank];
        for x in c.iter_mut().rev() {
            *x = (idx % side) as i64 - k;
            idx /= side;
        }
        (c.iter().map(|x| x.abs()).max() == Some(k)).then_some(c)
    })
}

/// The first functional `c` on lattice coordinates, searched by increasing
/// sup-norm and lexicographically within each norm, with `c . s >= 1` for
/// every nonzero point `s` of `points`.
pub fn positive_grading(
    lat: &RelationLattice,
    points: &[LatticePoint],
    bound: i64,
) -> Result<Grading> {
    let coords: Vec<Vec<i64>> = points
        .iter()
        .map(|p| {
            lat.coordinates_int(p)
                .ok_or_else(|| Error::Invalid(format!("{} is not in the lattice", fmt_ivec(p))))
        })
        .filter(|c| !matches!(c, Ok(c) if c.iter().all(|&x| x == 0)))
        .collect::<Result<_>>()?;
    if coords.is_empty() {
        return Ok(Grading(vec![0; lat.rank()]));
    }
    for k in 1..=bound {
        for c in shell(lat.rank(), k) {
            let g = Grading(c);
            if coords.iter().all(|s| g.grade(s) >= 1) {
                return Ok(g);
            }
        }
    }
    Err(Error::NoPositiveFunctional { bound })
}

/// A mirror map `q / lambda_col = exp(G_col / F)` truncated at grade `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorMap {
    /// `(set, point)`, both 0-based.
    pub index: (usize, usize),
    pub column: usize,
    pub grading: Grading,
    pub grade_bound: i64,
    pub radius: u32,
    pub lattice: RelationLattice,
    pub series: GradedSeries,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorTerm {
    pub grade: i64,
    pub point: LatticePoint,
    pub coeff: Rational,
}

impl MirrorMap {
    pub fn terms(&self) -> Vec<MirrorTerm> {
        self.series
            .iter()
            .map(|(g, c, r)| MirrorTerm {
                grade: g,
                point: self.lattice.point(c),
                coeff: r.clone(),
            })
            .collect()
    }

    /// Terms whose coefficient is not an integer, by grade.
    pub fn integrality_violations(&self) -> Vec<MirrorTerm> {
        self.terms()
            .into_iter()
            .filter(|t| !t.coeff.is_integer())
            .collect()
    }

    /// Series listing: one `grade | lattice-point | coefficient` line per
    /// term.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in self.terms() {
            let _ = writeln!(
                out,
                "{} | {} | {}",
                t.grade,
                fmt_ivec(&t.point),
                fmt_rational(&t.coeff)
            );
        }
        out
    }

    pub fn integrality_report(&self, spec: &CiSpec) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# gkz integrality report");
        let _ = writeln!(out, "spec-sha256: {}", spec.hash());
        let _ = writeln!(out, "index: ({},{})", self.index.0 + 1, self.index.1);
        let _ = writeln!(out, "grading: {}", fmt_ivec(&self.grading.0));
        let basis: Vec<String> = self.lattice.basis().iter().map(|b| fmt_ivec(b)).collect();
        let _ = writeln!(out, "basis: {}", basis.join(" "));
        let _ = writeln!(out, "grade-bound: {}", self.grade_bound);
        let bad = self.integrality_violations();
        if bad.is_empty() {
            let _ = writeln!(out, "OK");
        }
        for t in bad {
            let _ = writeln!(
                out,
                "{} | {} | {}",
                t.grade,
                fmt_ivec(&t.point),
                fmt_rational(&t.coeff)
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MirrorOptions {
    pub start_radius: u32,
    pub radius_cap: u32,
    pub grading_bound: i64,
    /// Cap on the number of box points enumerated at once.
    pub max_points: usize,
}

impl Default for MirrorOptions {
    fn default() -> Self {
        MirrorOptions {
            start_radius: 4,
            radius_cap: DEFAULT_RADIUS_CAP,
            grading_bound: DEFAULT_GRADING_BOUND,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

/// Support points of every `L_{v, col^}` (and `L_v`) at `radius`.
pub fn all_support_points(sys: &GkzSystem, radius: u32) -> Result<Vec<LatticePoint>> {
    let mut pts = std::collections::BTreeSet::new();
    for p in support_set(sys.v(), sys.lattice(), radius, &[])? {
        pts.insert(p.point);
    }
    for col in 0..sys.dim() {
        for p in support_set(sys.v(), sys.lattice(), radius, &[col])? {
            pts.insert(p.point);
        }
    }
    Ok(pts.into_iter().collect())
}

/// Counts support points (for `excluded`) with grade at most `bound`, and
/// reports whether any of them sits on the outer shell of the box.
fn graded_census(
    sys: &GkzSystem,
    radius: u32,
    excluded: &[usize],
    grading: &Grading,
    bound: i64,
) -> Result<(usize, bool)> {
    let mut count = 0;
    let mut on_shell = false;
    for p in support_set(sys.v(), sys.lattice(), radius, excluded)? {
        let g = grading.grade(&p.coords);
        if g <= bound {
            count += 1;
            on_shell |= p
                .coords
                .iter()
                .any(|c| c.unsigned_abs() == u64::from(radius));
        }
    }
    Ok((count, on_shell))
}

/// Smallest radius (doubling from `start`) at which no support point of
/// grade at most `bound` lies on the box boundary and doubling once more
/// finds no new such points.
fn enclosing_radius(
    sys: &GkzSystem,
    excluded: &[&[usize]],
    grading: &Grading,
    bound: i64,
    opts: &MirrorOptions,
) -> Result<u32> {
    let mut r = opts.start_radius.max(1);
    loop {
        if r > opts.radius_cap {
            return Err(Error::InsufficientRadius {
                radius: r,
                grade: bound,
                cap: opts.radius_cap,
            });
        }
        let mut ok = true;
        for ex in excluded {
            let (count, on_shell) = graded_census(sys, r, ex, grading, bound)?;
            if on_shell {
                ok = false;
                break;
            }
            let wider = (r * 2).min(opts.radius_cap.max(r));
            if wider > r && graded_census(sys, wider, ex, grading, bound)?.0 != count {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(r);
        }
        r *= 2;
    }
}

fn to_graded(
    s: &LogSeries,
    trunc: &Truncation,
    grading: &Grading,
    bound: i64,
) -> Result<GradedSeries> {
    let mut out = GradedSeries::zero(grading.clone(), bound);
    for (k, c) in s.iter() {
        let coords = trunc
            .coordinates_of(&k.exponent)
            .ok_or_else(|| Error::NonLatticeExponent(crate::rational::fmt_vec(&k.exponent)))?;
        out.add(coords, c.clone())?;
    }
    Ok(out)
}

fn require_minimal(sys: &GkzSystem, radius: u32, excluded: &[usize]) -> Result<()> {
    match check_minimal(sys.v(), sys.lattice(), radius, excluded)? {
        SupportVerdict::MinimalWithinRadius(_) => Ok(()),
        SupportVerdict::Counterexample(l) => Err(Error::MinimalityViolation(format!(
            "negative support ignoring {excluded:?} shrinks along {}",
            fmt_ivec(&l)
        ))),
    }
}

/// The mirror map for point `j` of set `i` (both 0-based), truncated at
/// grade `grade_bound`.
pub fn mirror_map(
    spec: &CiSpec,
    index: (usize, usize),
    grade_bound: i64,
    opts: &MirrorOptions,
) -> Result<MirrorMap> {
    let col = spec.column(index.0, index.1)?;
    let sys = spec.build_system()?.with_max_points(opts.max_points);
    let support = all_support_points(&sys, GRADING_RADIUS)?;
    let grading = positive_grading(sys.lattice(), &support, opts.grading_bound)?;
    let radius = enclosing_radius(&sys, &[&[], &[col]], &grading, grade_bound, opts)?;
    require_minimal(&sys, radius, &[])?;
    require_minimal(&sys, radius, &[col])?;
    let trunc = sys.truncation(radius);
    let f = to_graded(&build_f(&trunc)?, &trunc, &grading, grade_bound)?;
    let g = to_graded(&build_g(&trunc, col)?, &trunc, &grading, grade_bound)?;
    if !f.constant().is_one() {
        return Err(Error::Invalid("F must have constant term 1".into()));
    }
    let h = g.div(&f)?;
    let series = h.exp()?;
    Ok(MirrorMap {
        index,
        column: col,
        grading,
        grade_bound,
        radius,
        lattice: (**sys.lattice()).clone(),
        series,
    })
}
