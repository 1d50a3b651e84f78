//! Acceptance suite. Prints one `PASS` / `FAIL` line per criterion and fails
//! the test if any criterion fails. All coefficient comparisons are exact
//! (tolerance zero); the only pinned tolerances are wall-clock limits.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use gkz::ci::{mirror_map, positive_grading, CiSpec, Grading, MirrorOptions};
use gkz::coefficients::{bracket, elem_sym_shifted, f_coeffs, mono_sum_shifted, UniLogPoly};
use gkz::logseries::{build_h_diag, build_h_off, combine_second_order, FirstOrderSet, HTable};
use gkz::operators::{differentiate, verify_box_all, verify_euler_annihilation, BoxOp};
use gkz::rational::{factorial, frac, int};
use gkz::support::{check_minimal, support_set};
use gkz::{Error, GkzSystem, IntMatrix, LogKey, LogSeries, Rational};
use gkz_cli::{commands, Problem};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GAUSS_LIMIT: Duration = Duration::from_secs(5);
const SST_LIMIT: Duration = Duration::from_secs(10);
const CI_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: gkz::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn load(name: &str) -> Result<Problem, String> {
    Problem::load(&fixture(name)).map_err(|e| e.to_string())
}

fn pochhammer(z: &Rational, k: i64) -> Rational {
    (0..k).fold(int(1), |acc, m| acc * (z + int(m)))
}

fn harmonic(n: i64) -> Rational {
    (1..=n).fold(int(0), |acc, i| acc + frac(1, i))
}

fn fact(n: i64) -> Rational {
    BigRational::from_integer(factorial(n as u64))
}

fn sign(n: i64) -> Rational {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn terms(s: &LogSeries) -> BTreeMap<LogKey, Rational> {
    s.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
}

fn basis_ops(sys: &GkzSystem) -> Vec<BoxOp> {
    sys.lattice()
        .basis()
        .iter()
        .map(|b| BoxOp::new(b.clone()))
        .collect()
}

/// Box check over the basis plus `extra`, then the Euler operators.
fn verify_solution(sys: &GkzSystem, s: &LogSeries, extra: &[Vec<i64>]) -> Result<usize, String> {
    let mut ops = basis_ops(sys);
    ops.extend(extra.iter().map(|l| BoxOp::new(l.clone())));
    let b = ok(verify_box_all(s, &ops))?;
    ensure(b.passed(), || {
        format!("{} box violations", b.violations.len())
    })?;
    ensure(b.checked_term_count > 0, || "no certified box terms".into())?;
    let e = ok(verify_euler_annihilation(s, sys.matrix(), sys.beta()))?;
    ensure(e.passed(), || {
        format!("{} Euler violations", e.violations.len())
    })?;
    Ok(b.checked_term_count)
}

fn gauss_exponent(a: &Rational, b: &Rational, k: i64) -> Vec<Rational> {
    vec![-a - int(k), -b - int(k), int(k), int(k)]
}

fn gauss_example() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (name, a, b) in [
        ("gauss.json", frac(1, 2), frac(1, 3)),
        ("gauss2.json", frac(2, 5), frac(7, 3)),
    ] {
        let p = load(name)?;
        let sys = &p.system;
        let trunc = sys.truncation(10);
        let set = ok(FirstOrderSet::build(&trunc))?;
        let l = [-1, -1, 1, 1];
        let sol = ok(set.combine(&l))?;
        for k in 0..=10 {
            let e = gauss_exponent(&a, &b, k);
            let fk = pochhammer(&a, k) * pochhammer(&b, k) / (fact(k) * fact(k));
            ensure(set.f.coeff_at(&e) == fk, || format!("F at l={k} ({name})"))?;
            let h = (0..k).fold(int(0), |acc, m| {
                acc + (&a + int(m)).recip() + (&b + int(m)).recip() - frac(2, 1 + m)
            });
            ensure(sol.coeff(&LogKey::log_free(e.clone())) == &fk * h, || {
                format!("harmonic factor at l={k} ({name})")
            })?;
            for (j, &lj) in l.iter().enumerate() {
                let mut d = vec![0; 4];
                d[j] = 1;
                ensure(
                    sol.coeff(&LogKey::new(e.clone(), d)) == &fk * int(lj),
                    || format!("log coefficient {j} at l={k} ({name})"),
                )?;
            }
        }
        ensure(sol.len() == 54, || {
            format!("solution has {} terms", sol.len())
        })?;
        checked += verify_solution(sys, &sol, &[vec![-2, -2, 2, 2]])?;
        let rep = commands::combine(&p, 10, &l, None).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("combine command failed on {name}"))?;
    }
    within(GAUSS_LIMIT, start)?;
    Ok(format!(
        "F, G and combination exact for l <= 10; {checked} certified box terms"
    ))
}

/// SST exponent `v + (a, b, a, b, -2a-2b)`.
fn sst_key(a: i64, b: i64) -> LogKey {
    LogKey::log_free([a, b, a, b, 1 - 2 * a - 2 * b].map(int).to_vec())
}

fn sst_expected(r: i64, f: impl Fn(i64, i64) -> Option<Rational>) -> BTreeMap<LogKey, Rational> {
    let mut out = BTreeMap::new();
    for a in -r..=r {
        for b in -r..=r {
            if let Some(c) = f(a, b).filter(|c| *c != int(0)) {
                out.insert(sst_key(a, b), c);
            }
        }
    }
    out
}

fn g5_closed(a: i64, b: i64) -> Option<Rational> {
    (a >= 0 && b >= 0 && a + b > 0)
        .then(|| fact(2 * a + 2 * b - 2) / (fact(a) * fact(a) * fact(b) * fact(b)))
}

fn h55_closed(a: i64, b: i64) -> Option<Rational> {
    g5_closed(a, b).map(|g| int(2) * g * (int(1) - harmonic(2 * a + 2 * b - 2)))
}

fn h_i5_closed(odd: bool, a: i64, b: i64) -> Option<Rational> {
    let (x, y) = if odd { (a, b) } else { (b, a) };
    (x >= 1 && y >= 0)
        .then(|| -fact(2 * a + 2 * b - 2) / (fact(a) * fact(a) * fact(b) * fact(b)) * harmonic(x))
}

fn h13_closed(a: i64, b: i64) -> Option<Rational> {
    (b >= 0 && a <= -b && a != 0)
        .then(|| fact(-a - 1) * fact(-a - 1) / (fact(b) * fact(b) * fact(-2 * a - 2 * b + 1)))
}

fn sst_example() -> Outcome {
    let start = Instant::now();
    let p = load("sst.json")?;
    let sys = &p.system;
    let trunc = sys.truncation(6);
    let set = ok(FirstOrderSet::build(&trunc))?;
    let mut lambda5 = BTreeMap::new();
    lambda5.insert(sst_key(0, 0), int(1));
    ensure(terms(&set.f) == lambda5, || "F is not lambda5".into())?;
    ensure(set.g[..4].iter().all(LogSeries::is_zero), || {
        "G1..G4 not zero".into()
    })?;
    ensure(terms(&set.g[4]) == sst_expected(6, g5_closed), || {
        "G5".into()
    })?;
    let h55 = ok(build_h_diag(&trunc, 4))?;
    ensure(terms(&h55) == sst_expected(6, h55_closed), || "H55".into())?;
    for i in 0..4 {
        let h = ok(build_h_off(&trunc, i, 4))?;
        let want = sst_expected(6, |a, b| h_i5_closed(i % 2 == 0, a, b));
        ensure(terms(&h) == want, || format!("H{}5", i + 1))?;
    }
    let h13 = ok(build_h_off(&trunc, 0, 2))?;
    ensure(terms(&h13) == sst_expected(6, h13_closed), || "H13".into())?;
    let h24 = ok(build_h_off(&trunc, 1, 3))?;
    let want = sst_expected(6, |a, b| h13_closed(b, a));
    ensure(terms(&h24) == want, || "H24".into())?;

    let hs = ok(HTable::build(&trunc, |_, _| true))?;
    let l = [-1, 0, -1, 0, 2];
    let lp = [0, 1, 0, 1, -2];
    let sol = ok(combine_second_order(&set.f, &set.g, &hs, &l, &lp))?;
    let tail = sol.restrict(|k| k.total_logdeg() == 0);
    let want = sst_expected(6, |a, b| {
        let parts = [
            h55_closed(a, b).map(|x| x * int(-4)),
            h_i5_closed(true, a, b).map(|x| x * int(4)),
            h_i5_closed(false, a, b).map(|x| x * int(4)),
        ];
        parts
            .iter()
            .any(Option::is_some)
            .then(|| parts.into_iter().flatten().fold(int(0), |acc, x| acc + x))
    });
    ensure(terms(&tail) == want, || {
        "log-free tail is not -4H55 + 2 sum Hi5".into()
    })?;
    let checked = verify_solution(sys, &sol, &[vec![1, 1, 1, 1, -4]])?;
    let rep = commands::combine(&p, 6, &l, Some(&lp)).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || "combine command failed".into())?;
    within(SST_LIMIT, start)?;
    Ok(format!(
        "closed forms exact for a+b <= 6; {checked} certified box terms"
    ))
}

/// `support_set` must equal the box points accepted by `oracle`.
fn support_matches(
    sys: &GkzSystem,
    excluded: &[usize],
    radius: u32,
    oracle: impl Fn(&[i64]) -> bool,
) -> Result<usize, String> {
    let lat = sys.lattice();
    let verdict = ok(check_minimal(sys.v(), lat, radius, excluded))?;
    ensure(verdict.is_minimal(), || {
        format!("{excluded:?}: {verdict:?}")
    })?;
    let got: BTreeSet<Vec<i64>> = ok(support_set(sys.v(), lat, radius, excluded))?
        .into_iter()
        .map(|p| p.point)
        .collect();
    let want: BTreeSet<Vec<i64>> = ok(lat.enumerate_box(radius))?
        .into_iter()
        .map(|p| p.point)
        .filter(|p| oracle(p))
        .collect();
    ensure(got == want, || {
        format!("support ignoring {excluded:?} differs")
    })?;
    Ok(got.len())
}

fn support_machinery() -> Outcome {
    let r = 6;
    let mut sets = 0;
    // Gauss: points (c, c, -c, -c); the series runs over k = -c >= 0.
    for name in ["gauss.json", "gauss2.json"] {
        let sys = load(name)?.system;
        for ex in [vec![], vec![0], vec![1], vec![2], vec![3]] {
            support_matches(&sys, &ex, r, |p| p[0] <= 0)?;
            sets += 1;
        }
    }
    // SST: points (a, b, a, b, -2a-2b) shifting v = (0, 0, 0, 0, 1).
    let sys = load("sst.json")?.system;
    let zero = |p: &[i64]| p.iter().all(|&x| x == 0);
    for ex in [
        vec![],
        vec![0],
        vec![1],
        vec![2],
        vec![3],
        vec![0, 1],
        vec![2, 3],
    ] {
        ensure(support_matches(&sys, &ex, r, zero)? == 1, || {
            format!("{ex:?} not trivial")
        })?;
        sets += 1;
    }
    let quadrant = support_matches(&sys, &[4], r, |p| p[0] >= 0 && p[1] >= 0)?;
    ensure(quadrant == 49, || {
        format!("L_v,5 has {quadrant} box points")
    })?;
    support_matches(&sys, &[0, 2], r, |p| p[1] >= 0 && p[0] + p[1] <= 0)?;
    support_matches(&sys, &[1, 3], r, |p| p[0] >= 0 && p[0] + p[1] <= 0)?;
    for i in 0..4 {
        support_matches(&sys, &[i, 4], r, |p| p[0] >= 0 && p[1] >= 0)?;
    }
    sets += 7;
    // Complete intersections: v = (-1, 0, ...), grades read off the points.
    let ci1 = load("ci1.json")?.system;
    support_matches(&ci1, &[], r, |p| p[1] >= 0 && p[4] >= 0)?;
    let ci2 = load("ci2.json")?.system;
    support_matches(&ci2, &[], r, |p| p[1] >= 0 && p[4] >= 0)?;
    support_matches(&ci2, &[4], r, |p| p[1] >= 0 && p[2] >= 0)?;
    sets += 3;
    Ok(format!(
        "{sets} support sets and verdicts reproduced at R={r}"
    ))
}

fn pointed_cone_control() -> Outcome {
    let sys = load("sst.json")?.system;
    let trunc = sys.truncation(6);
    let set = ok(FirstOrderSet::build(&trunc))?;
    let hs = ok(HTable::build(&trunc, |_, _| true))?;
    let l = [-1, 0, -1, 0, 2];
    let sol = ok(combine_second_order(&set.f, &set.g, &hs, &l, &l))?;
    verify_solution(&sys, &sol, &[])?;
    let pts = ok(sol.support_points())?;
    ensure(pts.contains(&vec![1, 0, 1, 0, -2]), || {
        "no point of L_v,5".into()
    })?;
    ensure(pts.contains(&vec![-1, 0, -1, 0, 2]), || {
        "no point of L_v,13".into()
    })?;
    match positive_grading(sys.lattice(), &pts, 8) {
        Err(Error::NoPositiveFunctional { bound: 8 }) => Ok(format!(
            "{} support points, no positive functional",
            pts.len()
        )),
        other => Err(format!("expected NoPositiveFunctional, got {other:?}")),
    }
}

fn coeff_at(s: &LogSeries, sys: &GkzSystem, l: &[i64]) -> Rational {
    let e: Vec<Rational> = sys.v().iter().zip(l).map(|(v, &x)| v + int(x)).collect();
    s.coeff_at(&e)
}

fn ci_spec(p: &Problem) -> Result<&CiSpec, String> {
    p.ci.as_ref().ok_or_else(|| "not a ci fixture".to_string())
}

fn ci_example_1() -> Outcome {
    let start = Instant::now();
    let p = load("ci1.json")?;
    let spec = ci_spec(&p)?;
    let want = ok(IntMatrix::from_i64(&[
        vec![0, 1, 0, -1, 0, 0, 0],
        vec![0, 0, 1, -1, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, -1],
        vec![0, 0, 0, 0, 0, 1, -1],
        vec![1, 1, 1, 1, 1, 1, 1],
    ]))?;
    ensure(spec.lifted_matrix() == want, || "lifted matrix".into())?;
    ensure(spec.delta() == vec![0; 4], || "delta".into())?;
    ensure(ok(spec.interior_point_check())?, || {
        "interior point check".into()
    })?;
    let sys = &p.system;
    let set = ok(FirstOrderSet::build(&sys.truncation(6)))?;
    for l in 0..=6 {
        for m in 0..=6 - l {
            let pt = [-3 * l - 3 * m, l, l, l, m, m, m];
            let base = sign(l + m) * fact(3 * l + 3 * m) / (fact(l).pow(3) * fact(m).pow(3));
            ensure(coeff_at(&set.f, sys, &pt) == base, || {
                format!("F at ({l},{m})")
            })?;
            for j in 0..7 {
                let h = match j {
                    0 => harmonic(3 * l + 3 * m),
                    1..=3 => harmonic(l),
                    _ => harmonic(m),
                };
                ensure(coeff_at(&set.g[j], sys, &pt) == -&base * h, || {
                    format!("G{j} at ({l},{m})")
                })?;
            }
        }
    }
    let mut total = 0;
    for j in 0..7 {
        let q = ok(mirror_map(spec, (0, j), 8, &MirrorOptions::default()))?;
        ensure(q.grading == Grading(vec![-1, 0]), || {
            format!("grading for j={j}")
        })?;
        ensure(q.integrality_violations().is_empty(), || {
            format!("q{j} not integral")
        })?;
        total += q.series.len();
    }
    within(CI_LIMIT, start)?;
    Ok(format!(
        "closed forms exact; q0..q6 integral to D=8 ({total} terms)"
    ))
}

fn ci_example_2() -> Outcome {
    let start = Instant::now();
    let p = load("ci2.json")?;
    let spec = ci_spec(&p)?;
    ensure(ok(spec.interior_point_check())?, || {
        "interior point check".into()
    })?;
    let sys = &p.system;
    let set = ok(FirstOrderSet::build(&sys.truncation(8)))?;
    let mut points = 0;
    for l in 0..=2 {
        for m in -2 * l..=6 - 3 * l {
            let pt = [-4 * l - 2 * m, l, 2 * l + m, l, m];
            let g4 = coeff_at(&set.g[4], sys, &pt);
            points += 1;
            if m < 0 {
                let want = -fact(4 * l + 2 * m) * sign(-m) * fact(-m - 1)
                    / (fact(l) * fact(l) * fact(2 * l + m));
                ensure(g4 == want, || format!("G4 at ({l},{m})"))?;
                ensure(coeff_at(&set.f, sys, &pt) == int(0), || {
                    format!("F at ({l},{m})")
                })?;
                continue;
            }
            let base = fact(4 * l + 2 * m) / (fact(l) * fact(l) * fact(m) * fact(2 * l + m));
            ensure(coeff_at(&set.f, sys, &pt) == base, || {
                format!("F at ({l},{m})")
            })?;
            let hs = [4 * l + 2 * m, l, 2 * l + m, l, m];
            for (j, &n) in hs.iter().enumerate() {
                ensure(
                    coeff_at(&set.g[j], sys, &pt) == -&base * harmonic(n),
                    || format!("G{j} at ({l},{m})"),
                )?;
            }
        }
    }
    for j in 0..4 {
        let q = ok(mirror_map(spec, (0, j), 6, &MirrorOptions::default()))?;
        ensure(q.grading == Grading(vec![-1, 1]), || {
            format!("grading for j={j}")
        })?;
        ensure(q.integrality_violations().is_empty(), || {
            format!("q{j} not integral")
        })?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rep = commands::mirror(&p, (1, 4), 6, 4, None).map_err(|e| e.to_string())?;
    rep.write(dir.path()).map_err(|e| e.to_string())?;
    let archived =
        fs::read_to_string(dir.path().join("integrality_1_4.txt")).map_err(|e| e.to_string())?;
    ensure(archived.starts_with("# gkz integrality report\n"), || {
        "j=4 report".into()
    })?;
    within(CI_LIMIT, start)?;
    Ok(format!(
        "{points} coefficient points exact; q0..q3 integral; j=4 report archived"
    ))
}

fn differentiate_oracle(z: &Rational, k: i64, p: &UniLogPoly) -> UniLogPoly {
    let c = p.coeffs();
    let mut out = vec![int(0); c.len()];
    for (d, cd) in c.iter().enumerate() {
        out[d] += (z + int(k)) * cd;
        if d > 0 {
            out[d - 1] += int(d as i64) * cd;
        }
    }
    UniLogPoly::new(out)
}

fn random_series(rng: &mut StdRng, dim: usize, len: usize) -> LogSeries {
    let mut s = LogSeries::zero(dim);
    while s.len() < len {
        let e = (0..dim)
            .map(|_| frac(rng.random_range(-9..=9), rng.random_range(1..=4)))
            .collect();
        let d = (0..dim).map(|_| rng.random_range(0..=2)).collect();
        let c = frac(rng.random_range(-20..=20), rng.random_range(1..=7));
        s.add_term(LogKey::new(e, d), c);
    }
    s
}

fn mutations_detected(q: &LogSeries, ops: &[BoxOp], radius: i64) -> Result<usize, String> {
    let trunc = q.truncation().ok_or("series without truncation")?.clone();
    let mut n = 0;
    for (key, _) in q.iter() {
        let c = trunc
            .coordinates_of(&key.exponent)
            .ok_or("key off the lattice")?;
        if c.iter().any(|x| x.abs() >= radius) {
            continue;
        }
        let mut bad = q.clone();
        bad.add_term(key.clone(), int(1));
        ensure(!ok(verify_box_all(&bad, ops))?.passed(), || {
            format!("perturbation at {key:?} went unnoticed")
        })?;
        n += 1;
    }
    Ok(n)
}

fn property_suites() -> Outcome {
    let zs = [frac(1, 3), frac(-5, 2), int(0), int(-4)];
    let mut chains = 0;
    for z in &zs {
        for m in 0..=2 {
            for k in -6..=6 {
                let (Ok(hi), Ok(lo)) = (f_coeffs(z, k, m), f_coeffs(z, k - 1, m)) else {
                    continue;
                };
                ensure(differentiate_oracle(z, k, &hi) == lo, || {
                    format!("z={z} k={k} m={m}")
                })?;
                chains += 1;
            }
        }
        for k in 1..=6 {
            if let (Ok(up), Ok(down)) = (bracket(z, k), bracket(&(z + int(k)), -k)) {
                ensure(up * down == int(1), || {
                    format!("bracket inverse z={z} k={k}")
                })?;
            }
            let direct = (0..k).fold(int(1), |acc, r| acc * (z - int(r)));
            ensure(elem_sym_shifted(k as u64, k as u64, z) == direct, || {
                format!("top symmetric function z={z} k={k}")
            })?;
            if let Ok(m1) = mono_sum_shifted(k as u64, 1, z) {
                let direct = (1..=k).fold(int(0), |acc, r| acc + (z + int(r)).recip());
                ensure(m1 == direct, || format!("power sum z={z} k={k}"))?;
            }
        }
    }
    ensure(chains >= 4 * 3 * 10, || {
        format!("only {chains} chain links checked")
    })?;

    let mut rng = StdRng::seed_from_u64(0x6b7a);
    for case in 0..100 {
        let s = random_series(&mut rng, 3, 10);
        for j in 0..3 {
            for k in 0..3 {
                let jk = ok(differentiate(&ok(differentiate(&s, j))?, k))?;
                let kj = ok(differentiate(&ok(differentiate(&s, k))?, j))?;
                ensure(jk == kj, || format!("case {case}: d{j}d{k} != d{k}d{j}"))?;
            }
        }
    }

    let mut mutants = 0;
    for name in ["gauss.json", "gauss2.json"] {
        let sys = load(name)?.system;
        let set = ok(FirstOrderSet::build(&sys.truncation(6)))?;
        for i in 0..4 {
            mutants += mutations_detected(&ok(set.quasisolution(i))?, &basis_ops(&sys), 6)?;
        }
    }
    let sys = load("sst.json")?.system;
    let set = ok(FirstOrderSet::build(&sys.truncation(4)))?;
    mutants += mutations_detected(&ok(set.quasisolution(4))?, &basis_ops(&sys), 4)?;
    Ok(format!(
        "{chains} chain links, 100 commutation cases, {mutants} mutants killed"
    ))
}

fn run_cli(args: &[&str], out: &Path) -> Result<i32, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_gkz"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    status.code().ok_or_else(|| "terminated by signal".into())
}

fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for e in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        let bytes = fs::read(e.path()).map_err(|e| e.to_string())?;
        out.insert(e.file_name().to_string_lossy().into_owned(), bytes);
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let runs: &[(&str, &[&str])] = &[
        ("gauss.json", &["lattice", "support", "solve", "combine"]),
        ("gauss2.json", &["solve", "combine"]),
        ("sst.json", &["lattice", "support", "solve", "combine"]),
        ("ci1.json", &["ci", "mirror"]),
        ("ci2.json", &["ci", "mirror"]),
    ];
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (name, cmds) in runs {
        let path = fixture(name);
        let path = path.to_str().ok_or("non-utf8 fixture path")?;
        for cmd in *cmds {
            let mut snaps = Vec::new();
            for run in 0..2 {
                let out = tmp.path().join(format!("{name}-{cmd}-{run}"));
                let code = run_cli(&[cmd, path], &out)?;
                ensure(code == 0, || format!("{cmd} {name} exited {code}"))?;
                snaps.push(snapshot(&out)?);
            }
            ensure(snaps[0] == snaps[1], || {
                format!("{cmd} {name} differs between runs")
            })?;
            files += snaps[0].len();
        }
    }
    Ok(format!("{files} artifacts byte-identical across two runs"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("gauss example", gauss_example),
        ("sst example", sst_example),
        ("support machinery", support_machinery),
        ("pointed-cone negative control", pointed_cone_control),
        ("complete intersection 1", ci_example_1),
        ("complete intersection 2", ci_example_2),
        ("property suites", property_suites),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({t:.2}s): {detail}", n + 1),
            Err(why) => {
                println!("FAIL {} {name} ({t:.2}s): {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
