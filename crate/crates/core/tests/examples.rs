//! Closed-form checks of the builders on the Gauss and SST systems, plus
//! certified operator verification of every constructed solution.

use std::collections::BTreeMap;

use gkz::logseries::{
    build_f, build_g, build_h_diag, build_h_off, build_product_series, combine_second_order,
    first_order_quasisolution, second_order_quasisolution, FirstOrderSet, HTable,
};
use gkz::operators::{verify_box_all, verify_euler_annihilation, BoxOp};
use gkz::rational::{factorial, frac, int};
use gkz::{GkzSystem, IntMatrix, LogKey, LogSeries, Rational};
use num_rational::BigRational;

fn pochhammer(z: &Rational, k: i64) -> Rational {
    (0..k).fold(int(1), |acc, m| acc * (z + int(m)))
}

fn harmonic(n: i64) -> Rational {
    (1..=n).fold(int(0), |acc, i| acc + frac(1, i))
}

fn fact(n: i64) -> Rational {
    BigRational::from_integer(factorial(n as u64))
}

fn gauss(a: Rational, b: Rational) -> GkzSystem {
    let m = IntMatrix::from_i64(&[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, -1]]).unwrap();
    let v = vec![-a.clone(), -b.clone(), int(0), int(0)];
    let beta = vec![-a, -b, int(0)];
    GkzSystem::new(m, beta, v).unwrap()
}

fn sst() -> GkzSystem {
    let m = IntMatrix::from_i64(&[
        vec![1, 1, 1, 1, 1],
        vec![-1, 1, 1, -1, 0],
        vec![-1, -1, 1, 1, 0],
    ])
    .unwrap();
    let v = [0, 0, 0, 0, 1].iter().map(|&x| int(x)).collect();
    GkzSystem::new(m, vec![int(1), int(0), int(0)], v).unwrap()
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

fn assert_solution(sys: &GkzSystem, s: &LogSeries, extra: &[Vec<i64>]) {
    let mut ops = basis_ops(sys);
    ops.extend(extra.iter().map(|l| BoxOp::new(l.clone())));
    let boxed = verify_box_all(s, &ops).unwrap();
    assert!(boxed.passed(), "box violations: {:?}", boxed.violations);
    let euler = verify_euler_annihilation(s, sys.matrix(), sys.beta()).unwrap();
    assert!(euler.passed(), "Euler violations: {:?}", euler.violations);
}

/// SST exponent `v + (a, b, a, b, -2a-2b)`.
fn sst_key(a: i64, b: i64) -> LogKey {
    LogKey::log_free(
        [a, b, a, b, 1 - 2 * a - 2 * b]
            .iter()
            .map(|&x| int(x))
            .collect(),
    )
}

fn sst_expected(r: i64, f: impl Fn(i64, i64) -> Option<Rational>) -> BTreeMap<LogKey, Rational> {
    let mut out = BTreeMap::new();
    for a in -r..=r {
        for b in -r..=r {
            if let Some(c) = f(a, b) {
                if c != int(0) {
                    out.insert(sst_key(a, b), c);
                }
            }
        }
    }
    out
}

#[test]
fn gauss_f_matches_pochhammer() {
    for (a, b) in [(frac(1, 2), frac(1, 3)), (frac(2, 5), frac(7, 3))] {
        let sys = gauss(a.clone(), b.clone());
        let f = build_f(&sys.truncation(10)).unwrap();
        assert_eq!(f.len(), 11);
        for k in 0..=10 {
            let e = vec![-&a - int(k), -&b - int(k), int(k), int(k)];
            let want = pochhammer(&a, k) * pochhammer(&b, k) / (fact(k) * fact(k));
            assert_eq!(f.coeff_at(&e), want, "k = {k}");
        }
    }
}

#[test]
fn gauss_log_solution_matches_harmonic_form() {
    for (a, b) in [(frac(1, 2), frac(1, 3)), (frac(2, 5), frac(7, 3))] {
        let sys = gauss(a.clone(), b.clone());
        let trunc = sys.truncation(10);
        let set = FirstOrderSet::build(&trunc).unwrap();
        let l = [-1, -1, 1, 1];
        let sol = set.combine(&l).unwrap();
        for k in 0..=10 {
            let e = vec![-&a - int(k), -&b - int(k), int(k), int(k)];
            let fk = pochhammer(&a, k) * pochhammer(&b, k) / (fact(k) * fact(k));
            let h = (0..k).fold(int(0), |acc, m| {
                acc + (&a + int(m)).recip() + (&b + int(m)).recip() - frac(2, 1 + m)
            });
            assert_eq!(sol.coeff(&LogKey::log_free(e.clone())), &fk * h, "k = {k}");
            for (j, &lj) in l.iter().enumerate() {
                let mut d = vec![0; 4];
                d[j] = 1;
                assert_eq!(sol.coeff(&LogKey::new(e.clone(), d)), &fk * int(lj));
            }
        }
        assert_eq!(sol.len(), 11 * 4 + 10);
        assert_solution(&sys, &sol, &[vec![-2, -2, 2, 2], vec![3, 3, -3, -3]]);
        for i in 0..4 {
            let q = set.quasisolution(i).unwrap();
            let rep = verify_box_all(&q, &basis_ops(&sys)).unwrap();
            assert!(rep.passed(), "quasisolution {i}: {:?}", rep.violations);
            assert!(
                rep.checked_term_count > 0,
                "quasisolution {i}: nothing checked"
            );
            let euler = verify_euler_annihilation(&q, sys.matrix(), sys.beta()).unwrap();
            assert!(!euler.passed(), "bare quasisolution {i} should fail Euler");
        }
    }
}

#[test]
fn gauss_f_is_solution() {
    let sys = gauss(frac(1, 2), frac(1, 3));
    let f = build_f(&sys.truncation(6)).unwrap();
    assert_solution(&sys, &f, &[]);
}

#[test]
fn gauss_g_coefficients() {
    let (a, b) = (frac(1, 2), frac(1, 3));
    let sys = gauss(a.clone(), b.clone());
    let trunc = sys.truncation(8);
    for i in 0..4 {
        let g = build_g(&trunc, i).unwrap();
        for k in 0..=8 {
            let e = vec![-&a - int(k), -&b - int(k), int(k), int(k)];
            let fk = pochhammer(&a, k) * pochhammer(&b, k) / (fact(k) * fact(k));
            let want = match i {
                0 => -(0..k).fold(int(0), |acc, m| acc + (&a + int(m)).recip()) * &fk,
                1 => -(0..k).fold(int(0), |acc, m| acc + (&b + int(m)).recip()) * &fk,
                _ => -harmonic(k) * &fk,
            };
            assert_eq!(g.coeff_at(&e), want, "G{i} at k = {k}");
        }
    }
}

#[test]
fn sst_first_order() {
    let sys = sst();
    let trunc = sys.truncation(6);
    let set = FirstOrderSet::build(&trunc).unwrap();
    let mut lambda5 = BTreeMap::new();
    lambda5.insert(sst_key(0, 0), int(1));
    assert_eq!(terms(&set.f), lambda5);
    for i in 0..4 {
        assert!(set.g[i].is_zero(), "G{i} should vanish");
    }
    let want = sst_expected(6, |a, b| {
        (a >= 0 && b >= 0 && a + b > 0)
            .then(|| fact(2 * a + 2 * b - 2) / (fact(a) * fact(a) * fact(b) * fact(b)))
    });
    assert_eq!(terms(&set.g[4]), want);
    assert_eq!(set.g[4].coeff(&sst_key(1, 0)), int(1));
    for i in 0..5 {
        let q = set.quasisolution(i).unwrap();
        assert!(verify_box_all(&q, &basis_ops(&sys)).unwrap().passed());
    }
}

#[test]
fn sst_first_order_combinations() {
    let sys = sst();
    let set = FirstOrderSet::build(&sys.truncation(6)).unwrap();
    let l = [-1, 0, -1, 0, 2];
    let sol = set.combine(&l).unwrap();
    let expected = set
        .f
        .mul_log_linear(&l)
        .unwrap()
        .add(&set.g[4].scale(&int(2)))
        .unwrap();
    assert_eq!(sol, expected);
    assert_solution(&sys, &sol, &[]);
    let lp = [0, 1, 0, 1, -2];
    let sol = set.combine(&lp).unwrap();
    let expected = set
        .f
        .mul_log_linear(&lp)
        .unwrap()
        .sub(&set.g[4].scale(&int(2)))
        .unwrap();
    assert_eq!(sol, expected);
    assert_solution(&sys, &sol, &[]);
    assert!(set.combine(&[0; 5]).unwrap().is_zero());
}

fn h55_closed(a: i64, b: i64) -> Option<Rational> {
    (a >= 0 && b >= 0 && a + b > 0).then(|| {
        let n = 2 * a + 2 * b - 2;
        int(2) * fact(n) / (fact(a) * fact(a) * fact(b) * fact(b)) * (int(1) - harmonic(n))
    })
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

#[test]
fn sst_second_order_closed_forms() {
    let sys = sst();
    let trunc = sys.truncation(6);
    let h55 = build_h_diag(&trunc, 4).unwrap();
    assert_eq!(terms(&h55), sst_expected(6, h55_closed));
    assert_eq!(h55.coeff(&sst_key(1, 0)), int(2));
    assert_eq!(h55.coeff(&sst_key(1, 1)), int(-2));
    for i in 0..4 {
        let h = build_h_off(&trunc, i, 4).unwrap();
        let odd = i % 2 == 0;
        assert_eq!(
            terms(&h),
            sst_expected(6, |a, b| h_i5_closed(odd, a, b)),
            "H{}5",
            i + 1
        );
        assert_eq!(h, build_h_off(&trunc, 4, i).unwrap());
    }
    let h13 = build_h_off(&trunc, 0, 2).unwrap();
    assert_eq!(terms(&h13), sst_expected(6, h13_closed));
    assert_eq!(h13.coeff(&sst_key(-1, 0)), frac(1, 6));
    let h24 = build_h_off(&trunc, 1, 3).unwrap();
    assert_eq!(terms(&h24), sst_expected(6, |a, b| h13_closed(b, a)));
    assert_eq!(h24.coeff(&sst_key(0, -1)), frac(1, 6));
    assert!(build_h_off(&trunc, 0, 1).unwrap().is_zero());
}

#[test]
fn sst_second_order_quasisolutions_verify() {
    let sys = sst();
    let trunc = sys.truncation(6);
    let set = FirstOrderSet::build(&trunc).unwrap();
    let ops = basis_ops(&sys);
    for i in 0..5 {
        for j in i..5 {
            let h = build_h_off(&trunc, i, j).unwrap();
            let q = second_order_quasisolution(&set.f, &set.g, &h, i, j).unwrap();
            let rep = verify_box_all(&q, &ops).unwrap();
            assert!(rep.passed(), "({i},{j}): {:?}", rep.violations);
        }
    }
}

#[test]
fn product_series_matches_decomposition() {
    let sys = sst();
    let trunc = sys.truncation(4);
    let set = FirstOrderSet::build(&trunc).unwrap();
    for i in 0..5 {
        let mut p = vec![0; 5];
        p[i] = 1;
        assert_eq!(
            build_product_series(&trunc, &p).unwrap(),
            first_order_quasisolution(&set.f, &set.g[i], i).unwrap()
        );
        p[i] = 2;
        let h = build_h_diag(&trunc, i).unwrap();
        let want = second_order_quasisolution(&set.f, &set.g, &h, i, i).unwrap();
        assert_eq!(build_product_series(&trunc, &p).unwrap(), want);
    }
    let h13 = build_h_off(&trunc, 0, 2).unwrap();
    let want = second_order_quasisolution(&set.f, &set.g, &h13, 0, 2).unwrap();
    assert_eq!(
        build_product_series(&trunc, &[1, 0, 1, 0, 0]).unwrap(),
        want
    );
}

#[test]
fn sst_prop_solution_tail() {
    let sys = sst();
    let trunc = sys.truncation(6);
    let set = FirstOrderSet::build(&trunc).unwrap();
    let hs = HTable::build(&trunc, |_, _| true).unwrap();
    let l = [-1, 0, -1, 0, 2];
    let lp = [0, 1, 0, 1, -2];
    let sol = combine_second_order(&set.f, &set.g, &hs, &l, &lp).unwrap();
    let tail = sol.restrict(|k| k.total_logdeg() == 0);
    let want = sst_expected(6, |a, b| {
        let mut acc = int(0);
        let mut any = false;
        for c in [
            h55_closed(a, b).map(|x| x * int(-4)),
            h_i5_closed(true, a, b).map(|x| x * int(4)),
            h_i5_closed(false, a, b).map(|x| x * int(4)),
        ]
        .into_iter()
        .flatten()
        {
            acc += c;
            any = true;
        }
        any.then_some(acc)
    });
    assert_eq!(terms(&tail), want);
    assert_solution(&sys, &sol, &[vec![1, 1, 1, 1, -4]]);

    let sq = combine_second_order(&set.f, &set.g, &hs, &l, &l).unwrap();
    assert_solution(&sys, &sq, &[]);
    let pts = sq.support_points().unwrap();
    assert!(pts.contains(&vec![1, 0, 1, 0, -2]));
    assert!(pts.contains(&vec![-1, 0, -1, 0, 2]));
    assert!(combine_second_order(&set.f, &set.g, &hs, &[0; 5], &[0; 5])
        .unwrap()
        .is_zero());
}

#[test]
fn f_unchanged_on_wider_support() {
    let sys = sst();
    let trunc = sys.truncation(5);
    let f = build_f(&trunc).unwrap();
    let pts = gkz::support::support_set(&trunc.base, &trunc.lattice, 5, &[4]).unwrap();
    for p in pts {
        let c = gkz::coefficients::bracket_vec(&trunc.base, &p.point).unwrap();
        assert_eq!(f.coeff_at(&trunc.exponent(&p.point)), c);
    }
}

#[test]
fn mutated_quasisolution_fails() {
    let sys = sst();
    let trunc = sys.truncation(4);
    let set = FirstOrderSet::build(&trunc).unwrap();
    let q = set.quasisolution(4).unwrap();
    let ops = basis_ops(&sys);
    let inner: Vec<LogKey> = q
        .iter()
        .map(|(k, _)| k.clone())
        .filter(|k| {
            let c = trunc.coordinates_of(&k.exponent).unwrap();
            c.iter().all(|x| x.abs() < 4)
        })
        .collect();
    assert!(!inner.is_empty());
    for key in inner {
        let mut bad = q.clone();
        bad.add_term(key.clone(), int(1));
        let rep = verify_box_all(&bad, &ops).unwrap();
        assert!(!rep.passed(), "perturbation at {key:?} went unnoticed");
    }
}
