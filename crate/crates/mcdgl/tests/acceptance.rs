//! Acceptance run: one line per criterion, exit status nonzero on any
//! unexpected failure.

use mcdgl::pipelines;
use mcdgl_core::dersub::*;
use mcdgl_core::dgl::*;
use mcdgl_core::mc::*;
use mcdgl_core::models::*;
use mcdgl_core::scalar::int;
use mcdgl_core::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

/// Sub-claims that are known to be false and are reported as such.
const KNOWN_FALSE: &[&str] = &["[𝒟er₀, 𝒟er₋₁] = 0"];

struct Tally {
    unexpected: usize,
}

impl Tally {
    fn line(&mut self, n: u32, title: &str, ok: bool, known: bool, took: Duration, limit: Duration, detail: &str) {
        let in_time = took <= limit;
        let status = if ok && in_time { "PASS" } else { "FAIL" };
        let mut extra = String::new();
        if !in_time {
            extra.push_str(" over time limit;");
        }
        if !detail.is_empty() {
            extra.push(' ');
            extra.push_str(detail);
        }
        println!(
            "criterion {n} {status} {title} ({:.2} s, limit {} s){extra}",
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !(ok && in_time) && !(known && in_time) {
            self.unexpected += 1;
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn criterion_1(t: &mut Tally) {
    let (res, took) = timed(|| -> Result<bool> {
        let l = FreeLie::new(GeneratorSet::from_pairs(&[("x", 2), ("y", 2)], None)?);
        let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
        let t1 = Derivation::from_values(&l, 0, &[("x", x.clone()), ("y", -&y)])?;
        let t2 = Derivation::from_values(&l, 0, &[("x", y)])?;
        let t3 = Derivation::from_values(&l, 0, &[("y", x)])?;
        Ok(der_bracket(&t1, &t2)? == t2.scale(&int(-2))
            && der_bracket(&t1, &t3)? == t3.scale(&int(2))
            && der_bracket(&t2, &t3)? == t1.scale(&int(-1)))
    });
    let (ok, detail) = match res {
        Ok(ok) => (ok, String::new()),
        Err(e) => (false, e.to_string()),
    };
    t.line(1, "sl2 relations among θ₁, θ₂, θ₃", ok, false, took, Duration::from_secs(1), &detail);
}

fn failed_claims(report: &mcdgl::artifacts::ExampleReport) -> Vec<String> {
    report.claims.iter().filter(|c| !c.passed).map(|c| c.claim.clone()).collect()
}

fn criterion_2(t: &mut Tally) {
    let (res, took) = timed(|| pipelines::run("wedge-2-4-6-6", false));
    let (ok, detail) = match res {
        Ok(r) => {
            let failed = failed_claims(&r);
            (failed.is_empty(), format!("{} claims, failed: {:?}", r.claims.len(), failed))
        }
        Err(e) => (false, e.to_string()),
    };
    t.line(2, "wedge example end to end", ok, false, took, Duration::from_secs(30), &detail);
}

fn criterion_3(t: &mut Tally) {
    let mut check = |reduced: bool, limit: u64| {
        let (res, took) = timed(|| pipelines::run("su6-quotient", reduced));
        let title = if reduced {
            "su6 quotient example, reduced window"
        } else {
            "su6 quotient example end to end"
        };
        let (ok, known, detail) = match res {
            Ok(r) => {
                let failed = failed_claims(&r);
                let known = failed.iter().all(|c| KNOWN_FALSE.contains(&c.as_str()));
                let detail = if failed.is_empty() {
                    format!("{} claims", r.claims.len())
                } else if known {
                    format!(
                        "known false sub-claim(s) {:?}; the other {} claims pass",
                        failed,
                        r.claims.len() - failed.len()
                    )
                } else {
                    format!("failed: {failed:?}")
                };
                (failed.is_empty(), known, detail)
            }
            Err(e) => (false, false, e.to_string()),
        };
        t.line(3, title, ok, known, took, Duration::from_secs(limit), &detail);
    };
    check(false, 120);
    check(true, 15);
}

// Fixtures for the property suites.

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, n)
}

fn combine_elems(basis: &[LieElement], c: &[i64]) -> LieElement {
    let mut acc = basis[0].algebra().zero();
    for (b, x) in basis.iter().zip(c) {
        acc = acc.add_scaled(&int(*x), b).unwrap();
    }
    acc
}

fn combine_ders(alg: &FreeLie, k: i32, basis: &[Derivation], c: &[i64]) -> Derivation {
    let mut acc = Derivation::zero(alg, k);
    for (b, x) in basis.iter().zip(c) {
        acc = acc.add_scaled(&int(*x), b).unwrap();
    }
    acc
}

fn sign(n: i32) -> Scalar {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn mixed() -> &'static Vec<Vec<LieElement>> {
    static M: OnceLock<Vec<Vec<LieElement>>> = OnceLock::new();
    M.get_or_init(|| {
        let l = FreeLie::new(
            GeneratorSet::from_pairs(&[("x", 1), ("y", 2), ("z", 3)], Some(Window::degree(12))).unwrap(),
        );
        (1..=4).map(|d| l.degree_basis(d)).collect()
    })
}

fn mixed_element() -> impl Strategy<Value = LieElement> {
    (0..4usize, coeffs(8)).prop_map(|(i, c)| combine_elems(&mixed()[i], &c))
}

struct Wedge {
    l: FreeLie,
    m0: Vec<Derivation>,
    m1: Vec<Derivation>,
    variety: MCVariety,
}

fn wedge() -> &'static Wedge {
    static W: OnceLock<Wedge> = OnceLock::new();
    W.get_or_init(|| {
        let l = FreeLie::new(
            GeneratorSet::from_pairs(&[("x", 1), ("y", 3), ("z", 5), ("w", 5)], None).unwrap(),
        );
        let f = FiltrationOfV::trivial(l.generators());
        let m0 = dder_basis(&l, &f, 0).unwrap().basis;
        let m1 = dder_basis(&l, &f, -1).unwrap().basis;
        let m2 = dder_basis(&l, &f, -2).unwrap();
        let named: Vec<_> = m1.iter().enumerate().map(|(i, b)| (format!("a{i}"), b.clone())).collect();
        let variety = build_variety(&Derivation::zero(&l, -1), &named, &m2).unwrap();
        Wedge { l, m0, m1, variety }
    })
}

struct Quotient {
    l: FreeLie,
    d: Derivation,
    m0: Vec<Derivation>,
    m1: Vec<Derivation>,
    variety: MCVariety,
    der1: Vec<Derivation>,
    der_m1: Vec<Derivation>,
}

fn quotient() -> &'static Quotient {
    static Q: OnceLock<Quotient> = OnceLock::new();
    Q.get_or_init(|| {
        let one = int(1);
        let a = GradedAlgebraPresentation::new(
            &[("a", 4), ("b", 6), ("c", 13), ("p", 15), ("q", 19)],
            &[(0, 3, vec![(4, one.clone())]), (1, 2, vec![(4, one)])],
        )
        .unwrap();
        let (l, d) = quillen_model(&a, Some(&["x", "y", "z", "u", "v"]), Some(Window::degree(24))).unwrap();
        let d = d.into_derivation();
        let m0 = sder_basis(&l, 0).unwrap().basis;
        let g = |n: &str| l.gen(n).unwrap();
        let (x, y) = (g("x"), g("y"));
        let m1 = vec![
            Derivation::from_values(&l, -1, &[("z", x.ad_pow(2, &y).unwrap())]).unwrap(),
            Derivation::from_values(&l, -1, &[("u", y.ad_pow(2, &x).unwrap())]).unwrap(),
            Derivation::from_values(&l, -1, &[("v", x.ad_pow(4, &y).unwrap())]).unwrap(),
        ];
        let m2 = sder_basis(&l, -2).unwrap();
        let named: Vec<_> = ["alpha", "beta", "gamma"]
            .iter()
            .zip(&m1)
            .map(|(n, b)| (n.to_string(), b.clone()))
            .collect();
        let variety = build_variety(&d, &named, &m2).unwrap();
        let der1 = full_der_basis(&l, 1).unwrap();
        let der_m1 = full_der_basis(&l, -1).unwrap();
        Quotient { l, d, m0, m1, variety, der1, der_m1 }
    })
}

fn weighted() -> &'static (BigradedModel, Vec<Derivation>) {
    static B: OnceLock<(BigradedModel, Vec<Derivation>)> = OnceLock::new();
    B.get_or_init(|| {
        let pi = NilpotentLiePresentation::new(&[("a", 1), ("b", 3)], &[], 1).unwrap();
        let m = bigraded_model(&pi, Truncation { max_lower: 9, max_upper: 3, max_word_length: None }).unwrap();
        let w = m.generator_weights();
        let b = weight_raising_der_basis(&m.algebra, &w, 0).unwrap().basis;
        (m, b)
    })
}

type Prop = Result<(), TestCaseError>;

fn antisymmetry((a, b): (LieElement, LieElement)) -> Prop {
    let (da, db) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
    prop_assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().scale(&-sign(da * db)));
    Ok(())
}

fn jacobi((a, b, c): (LieElement, LieElement, LieElement)) -> Prop {
    let (da, db) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
    let lhs = a.bracket(&b.bracket(&c).unwrap()).unwrap();
    let rhs = a
        .bracket(&b)
        .unwrap()
        .bracket(&c)
        .unwrap()
        .add_scaled(&sign(da * db), &b.bracket(&a.bracket(&c).unwrap()).unwrap())
        .unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

fn leibniz((c, which, i, ca, j, cb): (Vec<i64>, usize, usize, Vec<i64>, usize, Vec<i64>)) -> Prop {
    let q = quotient();
    let (basis, k) = if which == 0 { (&q.der1, 1) } else { (&q.der_m1, -1) };
    let theta = combine_ders(&q.l, k, basis, &c);
    let elem = |idx: usize, cs: &[i64]| combine_elems(&q.l.degree_basis([3, 5, 8, 10][idx]), cs);
    let (a, b) = (elem(i, &ca), elem(j, &cb));
    prop_assume!(!a.is_zero() && !b.is_zero());
    let da = a.degree().unwrap();
    let lhs = theta.evaluate(&a.bracket(&b).unwrap()).unwrap();
    let rhs = theta
        .evaluate(&a)
        .unwrap()
        .bracket(&b)
        .unwrap()
        .add_scaled(&sign(k * da), &a.bracket(&theta.evaluate(&b).unwrap()).unwrap())
        .unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

fn d_squared((c, which): (Vec<i64>, usize)) -> Prop {
    let q = quotient();
    let (basis, k) = match which {
        0 => (&q.der1, 1),
        1 => (&q.der_m1, -1),
        _ => (&q.m0, 0),
    };
    let theta = combine_ders(&q.l, k, basis, &c);
    prop_assert!(boundary(&q.d, &boundary(&q.d, &theta).unwrap()).unwrap().is_zero());
    Ok(())
}

fn mc_matches_differential((c, scale): (Vec<i64>, i64)) -> Prop {
    let q = quotient();
    let c: Vec<i64> = c.iter().map(|x| x * scale).collect();
    let delta = combine_ders(&q.l, -1, &q.m1, &c);
    let mc = mc_check(&q.d, &delta).unwrap();
    prop_assert_eq!(mc, is_differential(&perturb(&q.d, &delta).unwrap()).unwrap());
    let pt: Vec<Scalar> = c.iter().map(|x| int(*x)).collect();
    prop_assert_eq!(mc, mc_points_check(&q.variety, &pt).unwrap());
    Ok(())
}

fn gauge_witnessed((a, g, t): (i64, i64, Vec<i64>)) -> Prop {
    let q = quotient();
    let delta = q.variety.point(&[int(a), int(a), int(g)]).unwrap();
    let theta = combine_ders(&q.l, 0, &q.m0, &t);
    let eta = gauge(&q.d, &theta, &delta).unwrap();
    prop_assert!(mc_check(&q.d, &eta).unwrap());
    prop_assert!(gauge_witness_check(&q.d, &theta, &delta, &eta).unwrap());
    Ok(())
}

fn exp_log_length(c: Vec<i64>) -> Prop {
    let w = wedge();
    let theta = combine_ders(&w.l, 0, &w.m0, &c);
    prop_assert_eq!(log(&exp(&theta).unwrap()).unwrap(), theta);
    Ok(())
}

fn exp_log_weight(c: Vec<i64>) -> Prop {
    let (m, basis) = weighted();
    prop_assume!(!basis.is_empty());
    let theta = combine_ders(&m.algebra, 0, basis, &c);
    let f = weight_exp(m, &theta).unwrap();
    prop_assert!(m.automorphism_raises_weight(&f));
    prop_assert_eq!(weight_log(m, &f).unwrap(), theta);
    Ok(())
}

fn exp_of_bch((c, e): (Vec<i64>, Vec<i64>)) -> Prop {
    let w = wedge();
    let theta = combine_ders(&w.l, 0, &w.m0, &c);
    let eta = combine_ders(&w.l, 0, &w.m0, &e);
    let z = bch(&theta, &eta).unwrap();
    prop_assert!(!z.is_truncated());
    prop_assert_eq!(exp(&z).unwrap(), exp(&theta).unwrap().compose(&exp(&eta).unwrap()).unwrap());
    Ok(())
}

fn conjugation_is_gauge((a, g, t): (i64, i64, Vec<i64>)) -> Prop {
    let q = quotient();
    let delta = q.variety.point(&[int(a), int(a), int(g)]).unwrap();
    let theta = combine_ders(&q.l, 0, &q.m0, &t);
    let by_aut = aut_action(&q.variety, &exp(&theta).unwrap(), &delta).unwrap();
    prop_assert_eq!(by_aut, gauge(&q.d, &theta, &delta).unwrap());
    Ok(())
}

fn reports_invariant((c, t, (p, r, s)): (Vec<i64>, Vec<i64>, (i64, i64, i64))) -> Prop {
    let w = wedge();
    let d = Derivation::zero(&w.l, -1);
    let delta = combine_ders(&w.l, -1, &w.m1, &c);
    let report = |x: &Derivation| orbit_invariants(&d, x, (1, 8), 3).unwrap();
    let base = report(&delta);
    let mut m = vec![vec![int(0); 4]; 4];
    m[0][0] = int(s);
    m[1][1] = int(-1);
    m[2][2] = int(1);
    m[2][3] = int(p);
    m[3][2] = int(r);
    m[3][3] = int(p * r + 1);
    let phi = aut_v_lift(&w.l, &m).unwrap();
    prop_assert_eq!(report(&aut_action(&w.variety, &phi, &delta).unwrap()), base.clone());
    let theta = combine_ders(&w.l, 0, &w.m0, &t);
    prop_assert_eq!(report(&aut_action(&w.variety, &exp(&theta).unwrap(), &delta).unwrap()), base.clone());
    prop_assert_eq!(report(&gauge(&d, &theta, &delta).unwrap()), base);
    Ok(())
}

fn criterion_4(t: &mut Tally) {
    const CASES: u32 = 200;
    let config = || Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut results: Vec<(&str, Result<(), String>)> = Vec::new();
    macro_rules! suite {
        ($name:expr, $strategy:expr, $prop:expr) => {{
            let mut runner = TestRunner::new(config());
            let r = runner.run(&$strategy, $prop).map_err(|e| e.to_string());
            results.push(($name, r));
        }};
    }
    let start = Instant::now();
    suite!("graded antisymmetry", (mixed_element(), mixed_element()), antisymmetry);
    suite!("Jacobi", (mixed_element(), mixed_element(), mixed_element()), jacobi);
    suite!(
        "Leibniz",
        (coeffs(16), 0..2usize, 0..4usize, coeffs(8), 0..4usize, coeffs(8)),
        leibniz
    );
    suite!("D² = 0", (coeffs(16), 0..3usize), d_squared);
    suite!("MC check against d + δ", (coeffs(3), 1i64..=3), mc_matches_differential);
    suite!("gauge witness", (-2i64..=2, -2i64..=2, coeffs(3)), gauge_witnessed);
    suite!("exp/log, length raising", coeffs(12), exp_log_length);
    suite!("exp/log, weight raising", coeffs(24), exp_log_weight);
    suite!("exp of BCH", (coeffs(12), coeffs(12)), exp_of_bch);
    suite!("exp conjugation is gauge", (-2i64..=2, -2i64..=2, coeffs(3)), conjugation_is_gauge);
    suite!(
        "orbit reports invariant",
        (coeffs(3), coeffs(12), (-2i64..=2, -2i64..=2, 1i64..=3)),
        reports_invariant
    );
    let took = start.elapsed();
    let failed: Vec<String> = results
        .iter()
        .filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}")))
        .collect();
    let detail = if failed.is_empty() {
        format!("{} suites x {CASES} cases", results.len())
    } else {
        failed.join("; ")
    };
    t.line(4, "property suites", failed.is_empty(), false, took, Duration::from_secs(300), &detail);
}

fn bigraded_checks(pi: &NilpotentLiePresentation, tr: Truncation, need: (i32, usize)) -> Result<String> {
    let m = bigraded_model(pi, tr)?;
    let weights = m.generator_weights();
    for i in 0..m.algebra.rank() {
        let v = m.differential.value(i);
        if m.upper[i] == 0 {
            if !v.is_zero() {
                return Err(Error::ConstraintViolation(format!("d of generator {i} is not zero")));
            }
        } else if !v.is_zero() && m.weight(v)? != weights[i] {
            return Err(Error::ConstraintViolation(format!("d of generator {i} changes weight")));
        }
    }
    verify(pi, &m)?;
    if m.certified.0 < need.0 || m.certified.1 < need.1 {
        return Err(Error::ConstraintViolation(format!("certified only up to {:?}", m.certified)));
    }
    Ok(format!("{} generators, certified {:?}", m.algebra.rank(), m.certified))
}

fn criterion_5(t: &mut Tally) {
    let tr = Truncation { max_lower: 13, max_upper: 4, max_word_length: None };
    let (res, took) = timed(|| -> Result<String> {
        let abelian = NilpotentLiePresentation::new(&[("a", 1), ("b", 3)], &[], 1)?;
        let even = NilpotentLiePresentation::new(&[("x", 2)], &[], 1)?;
        let odd = NilpotentLiePresentation::new(&[("x", 1), ("xx", 2)], &[(0, 0, vec![(1, int(1))])], 2)?;
        let a = bigraded_checks(&abelian, tr, (12, 3))?;
        let e = bigraded_checks(&even, tr, (12, 3))?;
        let o = bigraded_checks(&odd, tr, (12, 3))?;
        Ok(format!("abelian(1,3): {a}; free on x:2: {e}; free on x:1: {o}"))
    });
    let (ok, detail) = match res {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    t.line(5, "bigraded model certificate", ok, false, took, Duration::from_secs(60), &detail);
}

type Tensor = BTreeMap<Vec<usize>, BigRational>;

fn word_degree(degs: &[i32], w: &[usize]) -> i32 {
    w.iter().map(|&l| degs[l]).sum()
}

fn tensor_bracket(degs: &[i32], a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (u, x) in a {
        for (v, y) in b {
            let odd = word_degree(degs, u) * word_degree(degs, v) % 2 != 0;
            let mut uv = u.clone();
            uv.extend(v);
            let mut vu = v.clone();
            vu.extend(u);
            *out.entry(uv).or_insert_with(BigRational::zero) += x * y;
            let s = if odd { x * y } else { -(x * y) };
            *out.entry(vu).or_insert_with(BigRational::zero) += s;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn tensor_rank(vectors: Vec<Tensor>) -> usize {
    let mut rows: Vec<Tensor> = Vec::new();
    for mut v in vectors {
        for r in &rows {
            let (pivot, pc) = r.iter().next().unwrap();
            if let Some(c) = v.get(pivot).cloned() {
                let f = c / pc;
                for (k, x) in r {
                    *v.entry(k.clone()).or_insert_with(BigRational::zero) -= &f * x;
                }
                v.retain(|_, c| !c.is_zero());
            }
        }
        if !v.is_empty() {
            rows.push(v);
            rows.sort_by(|a, b| a.keys().next().cmp(&b.keys().next()));
        }
    }
    rows.len()
}

fn brute_force(degs: &[i32], n: usize) -> BTreeMap<i32, usize> {
    let k = degs.len();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    let gen = |l: usize| Tensor::from([(vec![l], BigRational::one())]);
    let mut by_degree: BTreeMap<i32, Vec<Tensor>> = BTreeMap::new();
    for w in words {
        let mut acc = gen(w[n - 1]);
        for &l in w[..n - 1].iter().rev() {
            acc = tensor_bracket(degs, &gen(l), &acc);
        }
        by_degree.entry(word_degree(degs, &w)).or_default().push(acc);
    }
    by_degree.into_iter().map(|(d, v)| (d, tensor_rank(v))).collect()
}

fn oracle_mismatches(pairs: &[(&str, i32)]) -> Vec<String> {
    let degs: Vec<i32> = pairs.iter().map(|p| p.1).collect();
    let top: i32 = 4 * degs.iter().max().unwrap();
    let l = FreeLie::new(GeneratorSet::from_pairs(pairs, Some(Window::degree(top))).unwrap());
    let mut bad = Vec::new();
    for n in 1..=4 {
        let oracle = brute_force(&degs, n);
        for d in 0..=top {
            let expected = oracle.get(&d).copied().unwrap_or(0);
            let got = l.dimension(n, d);
            if got != expected {
                bad.push(format!("length {n}, degree {d}: {got} vs {expected}"));
            }
        }
    }
    bad
}

fn criterion_6(t: &mut Tally) {
    let (bad, took) = timed(|| {
        let mut bad = oracle_mismatches(&[("x", 1), ("y", 3), ("z", 5), ("w", 5)]);
        bad.extend(oracle_mismatches(&[("x", 3), ("y", 5), ("z", 12), ("u", 14), ("v", 18)]));
        bad
    });
    let detail = if bad.is_empty() { String::new() } else { bad.join("; ") };
    t.line(6, "dimension oracle, word length ≤ 4", bad.is_empty(), false, took, Duration::from_secs(60), &detail);
}

fn main() {
    // Accept and ignore libtest flags passed by `cargo test`.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let mut t = Tally { unexpected: 0 };
    criterion_1(&mut t);
    criterion_2(&mut t);
    criterion_3(&mut t);
    criterion_4(&mut t);
    criterion_5(&mut t);
    criterion_6(&mut t);
    if t.unexpected > 0 {
        println!("{} unexpected failure(s)", t.unexpected);
        std::process::exit(1);
    }
}
