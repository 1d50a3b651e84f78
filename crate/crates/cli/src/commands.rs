//! One function per subcommand. Each returns a [`RunReport`]; solve and
//! combine re-verify everything they emit before reporting success.

use std::fmt::Write as _;

use gkz::ci::{mirror_map, CiSpec, MirrorOptions};
use gkz::lattice::DEFAULT_MAX_POINTS;
use gkz::logseries::{
    build_f, build_g, build_h_diag, build_h_off, combine_second_order, first_order_quasisolution,
    require_second_order, second_order_quasisolution, HTable,
};
use gkz::operators::{verify_box_all, verify_euler_annihilation, BoxOp};
use gkz::rational::{fmt_ivec, fmt_rational, fmt_vec};
use gkz::support::{check_minimal, support_set, SupportVerdict};
use gkz::{GkzSystem, LogSeries, Truncation};

use crate::error::CliError;
use crate::problem::Problem;
use crate::report::RunReport;

pub const DEFAULT_RADIUS: u32 = 6;
pub const DEFAULT_GRADE: i64 = 6;

fn header(cmd: &str, p: &Problem) -> RunReport {
    let mut r = RunReport::new(cmd);
    r.push("input", &p.path);
    r.push("input-sha256", &p.sha256);
    r.push("name", &p.name);
    r
}

fn verdict_text(v: &SupportVerdict) -> String {
    match v {
        SupportVerdict::MinimalWithinRadius(r) => format!("minimal-within-radius {r}"),
        SupportVerdict::Counterexample(l) => format!("counterexample {}", fmt_ivec(l)),
    }
}

fn excluded_text(ex: &[usize]) -> String {
    if ex.is_empty() {
        "none".into()
    } else {
        fmt_ivec(ex)
    }
}

/// Every `l` with basis coordinates in `[-1, 1]^rank`, one of each `+-l`
/// pair, plus any extra relations.
fn verification_ops(sys: &GkzSystem, extra: &[&[i64]]) -> Result<Vec<BoxOp>, CliError> {
    let mut ops: Vec<BoxOp> = Vec::new();
    for p in sys.lattice().enumerate_box(1)? {
        let first = p.coords.iter().find(|&&c| c != 0);
        if first.is_some_and(|&c| c > 0) {
            ops.push(BoxOp::new(p.point));
        }
    }
    for l in extra {
        if l.iter().any(|&x| x != 0) {
            ops.push(BoxOp::checked(l.to_vec(), sys.matrix())?);
        }
    }
    Ok(ops)
}

fn require_minimal(
    sys: &GkzSystem,
    radius: u32,
    excluded: &[usize],
    report: &mut RunReport,
) -> Result<bool, CliError> {
    let v = check_minimal(sys.v(), sys.lattice(), radius, excluded)?;
    report.push(
        "minimality",
        format!("exclude={} {}", excluded_text(excluded), verdict_text(&v)),
    );
    if !v.is_minimal() {
        report.fail(format!(
            "negative support ignoring {} is not minimal",
            excluded_text(excluded)
        ));
    }
    Ok(v.is_minimal())
}

fn check_index(sys: &GkzSystem, i: usize) -> Result<(), CliError> {
    if i >= sys.dim() {
        return Err(CliError::Input(format!(
            "column index {i} out of range 0..{}",
            sys.dim()
        )));
    }
    Ok(())
}

fn check_len(what: &str, l: &[i64], n: usize) -> Result<(), CliError> {
    if l.len() != n {
        return Err(CliError::Input(format!(
            "`{what}` has {} entries, expected {n}",
            l.len()
        )));
    }
    Ok(())
}

pub fn lattice(p: &Problem) -> Result<RunReport, CliError> {
    let mut r = header("lattice", p);
    let lat = p.system.lattice();
    r.push("ambient-dim", lat.ambient_dim());
    r.push("rank", lat.rank());
    let mut body = String::new();
    for b in lat.basis() {
        r.push("basis", fmt_ivec(b));
        let _ = writeln!(body, "{}", fmt_ivec(b));
    }
    r.artifact("lattice.txt", body);
    Ok(r)
}

pub fn support(p: &Problem, radius: u32, excluded: &[usize]) -> Result<RunReport, CliError> {
    let sys = &p.system;
    for &i in excluded {
        check_index(sys, i)?;
    }
    let mut r = header("support", p);
    r.push("radius", radius);
    r.push("exclude", excluded_text(excluded));
    let verdict = check_minimal(sys.v(), sys.lattice(), radius, excluded)?;
    r.push("verdict", verdict_text(&verdict));
    if !verdict.is_minimal() {
        r.fail("negative support is not minimal");
    }
    let pts = support_set(sys.v(), sys.lattice(), radius, excluded)?;
    r.push("support-size", pts.len());
    let mut body = String::new();
    for pt in &pts {
        let _ = writeln!(body, "{} | {}", fmt_ivec(&pt.coords), fmt_ivec(&pt.point));
    }
    r.artifact("support.txt", body);
    Ok(r)
}

fn emit_verified(
    r: &mut RunReport,
    name: &str,
    s: &LogSeries,
    ops: &[BoxOp],
    sys: Option<&GkzSystem>,
) -> Result<(), CliError> {
    r.push("terms", format!("{name} {}", s.len()));
    r.artifact(name, s.to_text());
    r.verification(name, "box", &verify_box_all(s, ops)?);
    if let Some(sys) = sys {
        let e = verify_euler_annihilation(s, sys.matrix(), sys.beta())?;
        r.verification(name, "euler", &e);
    }
    Ok(())
}

pub fn solve(
    p: &Problem,
    radius: u32,
    order: u8,
    indices: Option<&[usize]>,
) -> Result<RunReport, CliError> {
    let sys = &p.system;
    if order > 2 {
        return Err(CliError::Input(format!(
            "order must be 0, 1 or 2, got {order}"
        )));
    }
    let all: Vec<usize> = (0..sys.dim()).collect();
    let indices = indices.unwrap_or(&all);
    for &i in indices {
        check_index(sys, i)?;
    }
    let mut r = header("solve", p);
    r.push("radius", radius);
    r.push("order", order);
    if order > 0 {
        r.push("indices", fmt_ivec(indices));
    }
    let trunc = sys.truncation(radius);
    let ops = verification_ops(sys, &[])?;
    if !require_minimal(sys, radius, &[], &mut r)? {
        return Ok(r);
    }
    let f = build_f(&trunc)?;
    emit_verified(&mut r, "F.series", &f, &ops, Some(sys))?;
    if order == 0 {
        return Ok(r);
    }
    let mut gs = vec![LogSeries::with_truncation(&trunc); sys.dim()];
    for &i in indices {
        if !require_minimal(sys, radius, &[i], &mut r)? {
            continue;
        }
        gs[i] = build_g(&trunc, i)?;
        let q = first_order_quasisolution(&f, &gs[i], i)?;
        emit_verified(&mut r, &format!("quasi1_{i}.series"), &q, &ops, None)?;
    }
    if order == 1 || !r.passed() {
        return Ok(r);
    }
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a..] {
            let (i, j) = (i.min(j), i.max(j));
            if let Err(e) = require_second_order(&trunc, i, j) {
                r.push("skipped", format!("({i},{j}) {e}"));
                continue;
            }
            let h = build_h(&trunc, i, j)?;
            let q = second_order_quasisolution(&f, &gs, &h, i, j)?;
            emit_verified(&mut r, &format!("quasi2_{i}_{j}.series"), &q, &ops, None)?;
        }
    }
    Ok(r)
}

fn build_h(trunc: &Truncation, i: usize, j: usize) -> Result<LogSeries, CliError> {
    Ok(if i == j {
        build_h_diag(trunc, i)?
    } else {
        build_h_off(trunc, i, j)?
    })
}

fn truncation_g(trunc: &Truncation, used: &[bool]) -> Result<Vec<LogSeries>, CliError> {
    used.iter()
        .enumerate()
        .map(|(i, &u)| {
            if u {
                Ok(build_g(trunc, i)?)
            } else {
                Ok(LogSeries::with_truncation(trunc))
            }
        })
        .collect()
}

pub fn combine(
    p: &Problem,
    radius: u32,
    l: &[i64],
    lp: Option<&[i64]>,
) -> Result<RunReport, CliError> {
    let sys = &p.system;
    let n = sys.dim();
    check_len("l", l, n)?;
    if let Some(lp) = lp {
        check_len("lp", lp, n)?;
    }
    let mut extra: Vec<&[i64]> = vec![l];
    extra.extend(lp);
    let ops = verification_ops(sys, &extra)?;
    let mut r = header("combine", p);
    r.push("radius", radius);
    r.push("l", fmt_ivec(l));
    if let Some(lp) = lp {
        r.push("lp", fmt_ivec(lp));
    }
    let trunc = sys.truncation(radius);
    let used: Vec<bool> = (0..n)
        .map(|i| l[i] != 0 || lp.is_some_and(|lp| lp[i] != 0))
        .collect();
    if !require_minimal(sys, radius, &[], &mut r)? {
        return Ok(r);
    }
    for i in (0..n).filter(|&i| used[i]) {
        require_minimal(sys, radius, &[i], &mut r)?;
    }
    if !r.passed() {
        return Ok(r);
    }
    let f = build_f(&trunc)?;
    let gs = truncation_g(&trunc, &used)?;
    let sol = match lp {
        None => gkz::logseries::combine_first_order(&f, &gs, l)?,
        Some(lp) => {
            let mut hs = HTable::new();
            for i in (0..n).filter(|&i| l[i] != 0) {
                for j in (0..n).filter(|&j| lp[j] != 0) {
                    let (a, b) = (i.min(j), i.max(j));
                    if hs.get(a, b).is_some() {
                        continue;
                    }
                    require_second_order(&trunc, a, b)?;
                    hs.insert(a, b, build_h(&trunc, a, b)?);
                }
            }
            r.push("second-order-tables", hs.len());
            combine_second_order(&f, &gs, &hs, l, lp)?
        }
    };
    emit_verified(&mut r, "solution.series", &sol, &ops, Some(sys))?;
    Ok(r)
}

fn ci_spec(p: &Problem) -> Result<&CiSpec, CliError> {
    p.ci.as_ref()
        .ok_or_else(|| CliError::Input("this command needs a `ci` problem".into()))
}

pub fn ci(p: &Problem, radius: u32) -> Result<RunReport, CliError> {
    let spec = ci_spec(p)?;
    let sys = &p.system;
    let mut r = header("ci", p);
    r.push("spec-sha256", spec.hash());
    r.push("radius", radius);
    let mut body = String::new();
    for row in sys.matrix().rows() {
        let _ = writeln!(
            body,
            "{}",
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    r.artifact("lifted-matrix.txt", body);
    r.push("beta", fmt_vec(sys.beta()));
    r.push("v", fmt_vec(sys.v()));
    r.push("delta", fmt_ivec(&spec.delta()));
    let unique = spec.interior_point_check()?;
    r.push("unique-interior-point", unique);
    if !unique {
        r.fail("delta is not the unique interior lattice point");
    }
    for (col, verdict) in spec.minimality_sweep(sys, radius)? {
        let label = match col {
            None => "none".to_string(),
            Some(c) => {
                let (i, j) = spec.label(c);
                format!("({},{})", i + 1, j)
            }
        };
        r.push(
            "minimality",
            format!("exclude={label} {}", verdict_text(&verdict)),
        );
        if !verdict.is_minimal() {
            r.fail(format!("negative support ignoring {label} is not minimal"));
        }
    }
    Ok(r)
}

/// `index` is `(set, point)` with the set counted from 1.
pub fn mirror(
    p: &Problem,
    index: (usize, usize),
    grade: i64,
    start_radius: u32,
    max_points: Option<usize>,
) -> Result<RunReport, CliError> {
    let spec = ci_spec(p)?;
    if index.0 == 0 {
        return Err(CliError::Input("set index counts from 1".into()));
    }
    if grade < 0 {
        return Err(CliError::Input("grade bound must be nonnegative".into()));
    }
    let idx = (index.0 - 1, index.1);
    spec.column(idx.0, idx.1)?;
    let mut r = header("mirror", p);
    r.push("spec-sha256", spec.hash());
    r.push("index", format!("({},{})", index.0, index.1));
    r.push("grade", grade);
    if !spec.interior_point_check()? {
        r.fail("delta is not the unique interior lattice point");
        return Ok(r);
    }
    let opts = MirrorOptions {
        start_radius,
        max_points: max_points.unwrap_or(DEFAULT_MAX_POINTS),
        ..MirrorOptions::default()
    };
    let q = mirror_map(spec, idx, grade, &opts)?;
    r.push("grading", fmt_ivec(&q.grading.0));
    r.push("radius", q.radius);
    r.push("terms", q.series.len());
    let tag = format!("{}_{}", index.0, index.1);
    r.artifact(format!("mirror_{tag}.txt"), q.to_text());
    let report = q.integrality_report(spec);
    r.artifact(format!("integrality_{tag}.txt"), report);
    let bad = q.integrality_violations();
    r.push("non-integral", bad.len());
    if let Some(t) = bad.first() {
        r.push(
            "first-non-integral",
            format!(
                "{} | {} | {}",
                t.grade,
                fmt_ivec(&t.point),
                fmt_rational(&t.coeff)
            ),
        );
        r.fail("mirror map has non-integral coefficients");
    }
    Ok(r)
}
