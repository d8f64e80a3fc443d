use mcdgl_core::dersub::*;
use mcdgl_core::dgl::*;
use mcdgl_core::mc::*;
use mcdgl_core::models::*;
use mcdgl_core::scalar::int;
use mcdgl_core::*;
use proptest::prelude::*;
use std::sync::OnceLock;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

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

/// Mixed-parity algebra for the bracket identities.
struct Mixed {
    elems: Vec<(i32, Vec<LieElement>)>,
}

fn mixed() -> &'static Mixed {
    static M: OnceLock<Mixed> = OnceLock::new();
    M.get_or_init(|| {
        let l = FreeLie::new(
            GeneratorSet::from_pairs(&[("x", 1), ("y", 2), ("z", 3)], Some(Window::degree(12)))
                .unwrap(),
        );
        let elems = (1..=4).map(|d| (d, l.degree_basis(d))).collect();
        Mixed { elems }
    })
}

fn mixed_element() -> impl Strategy<Value = LieElement> {
    (0..4usize, coeffs(8)).prop_map(|(i, c)| {
        let (_, b) = &mixed().elems[i];
        combine_elems(b, &c)
    })
}

fn sign(n: i32) -> Scalar {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// The example with generators of degrees 1, 3, 5, 5 and `d = 0`.
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
        let m1 = dder_basis(&l, &f, -1).unwrap();
        let m2 = dder_basis(&l, &f, -2).unwrap();
        let named: Vec<_> = m1
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| (format!("a{i}"), b.clone()))
            .collect();
        let variety = build_variety(&Derivation::zero(&l, -1), &named, &m2).unwrap();
        Wedge {
            l,
            m0,
            m1: m1.basis,
            variety,
        }
    })
}

/// The example with `dv = [x,u] + [y,z]`.
struct Quotient {
    l: FreeLie,
    d: Derivation,
    m0: Vec<Derivation>,
    m1: Vec<Derivation>,
    variety: MCVariety,
    /// A derivation of degree 1 and the full degree -1 basis.
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
        Quotient {
            l,
            d,
            m0,
            m1,
            variety,
            der1,
            der_m1,
        }
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn bracket_is_graded_antisymmetric(a in mixed_element(), b in mixed_element()) {
        let (da, db) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
        let ab = a.bracket(&b).unwrap();
        let ba = b.bracket(&a).unwrap();
        prop_assert_eq!(ab, ba.scale(&-sign(da * db)));
    }

    #[test]
    fn bracket_satisfies_jacobi(a in mixed_element(), b in mixed_element(), c in mixed_element()) {
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
    }

    #[test]
    fn derivations_satisfy_leibniz(
        c in coeffs(16),
        which in 0..2usize,
        i in 0..4usize,
        ca in coeffs(8),
        j in 0..4usize,
        cb in coeffs(8),
    ) {
        let q = quotient();
        let (basis, k) = if which == 0 { (&q.der1, 1) } else { (&q.der_m1, -1) };
        let theta = combine_ders(&q.l, k, basis, &c);
        let gen_elems = |idx: usize, cs: &[i64]| {
            let deg = [3, 5, 8, 10][idx];
            combine_elems(&q.l.degree_basis(deg), cs)
        };
        let a = gen_elems(i, &ca);
        let b = gen_elems(j, &cb);
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
    }

    #[test]
    fn boundary_squares_to_zero(c in coeffs(16), which in 0..3usize) {
        let q = quotient();
        let (basis, k) = match which {
            0 => (&q.der1, 1),
            1 => (&q.der_m1, -1),
            _ => (&q.m0, 0),
        };
        let theta = combine_ders(&q.l, k, basis, &c);
        let dd = boundary(&q.d, &boundary(&q.d, &theta).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn mc_check_matches_perturbed_differential(c in coeffs(3), scale in 1i64..=3) {
        let q = quotient();
        let c: Vec<i64> = c.iter().map(|x| x * scale).collect();
        let delta = combine_ders(&q.l, -1, &q.m1, &c);
        prop_assert_eq!(
            mc_check(&q.d, &delta).unwrap(),
            is_differential(&perturb(&q.d, &delta).unwrap()).unwrap()
        );
        prop_assert_eq!(mc_check(&q.d, &delta).unwrap(), mc_points_check(&q.variety, &c.iter().map(|x| int(*x)).collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn gauge_result_is_witnessed(a in -2i64..=2, g in -2i64..=2, t in coeffs(3)) {
        let q = quotient();
        let delta = q.variety.point(&[int(a), int(a), int(g)]).unwrap();
        let theta = combine_ders(&q.l, 0, &q.m0, &t);
        let eta = gauge(&q.d, &theta, &delta).unwrap();
        prop_assert!(mc_check(&q.d, &eta).unwrap());
        prop_assert!(gauge_witness_check(&q.d, &theta, &delta, &eta).unwrap());
    }

    #[test]
    fn exp_log_round_trip_on_length_raising(c in coeffs(12)) {
        let w = wedge();
        let theta = combine_ders(&w.l, 0, &w.m0, &c);
        let f = exp(&theta).unwrap();
        prop_assert_eq!(log(&f).unwrap(), theta);
    }

    #[test]
    fn exp_of_bch_is_composition(c in coeffs(12), e in coeffs(12)) {
        let w = wedge();
        let theta = combine_ders(&w.l, 0, &w.m0, &c);
        let eta = combine_ders(&w.l, 0, &w.m0, &e);
        let z = bch(&theta, &eta).unwrap();
        prop_assert!(!z.is_truncated());
        prop_assert_eq!(exp(&z).unwrap(), exp(&theta).unwrap().compose(&exp(&eta).unwrap()).unwrap());
    }

    #[test]
    fn conjugation_by_exp_is_gauge(a in -2i64..=2, g in -2i64..=2, t in coeffs(3)) {
        let q = quotient();
        let delta = q.variety.point(&[int(a), int(a), int(g)]).unwrap();
        let theta = combine_ders(&q.l, 0, &q.m0, &t);
        let by_aut = aut_action(&q.variety, &exp(&theta).unwrap(), &delta).unwrap();
        prop_assert_eq!(by_aut, gauge(&q.d, &theta, &delta).unwrap());
    }
}

fn weighted() -> &'static (BigradedModel, Vec<Derivation>) {
    static B: OnceLock<(BigradedModel, Vec<Derivation>)> = OnceLock::new();
    B.get_or_init(|| {
        let pi = NilpotentLiePresentation::new(&[("a", 1), ("b", 3)], &[], 1).unwrap();
        let m = bigraded_model(
            &pi,
            Truncation {
                max_lower: 9,
                max_upper: 3,
                max_word_length: None,
            },
        )
        .unwrap();
        let w = m.generator_weights();
        let b = weight_raising_der_basis(&m.algebra, &w, 0).unwrap().basis;
        (m, b)
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn exp_log_round_trip_on_weight_raising(c in coeffs(24)) {
        let (m, basis) = weighted();
        prop_assume!(!basis.is_empty());
        let theta = combine_ders(&m.algebra, 0, basis, &c);
        let f = weight_exp(m, &theta).unwrap();
        prop_assert!(m.automorphism_raises_weight(&f));
        prop_assert_eq!(weight_log(m, &f).unwrap(), theta);
    }

    #[test]
    fn orbit_reports_are_invariant(
        c in coeffs(3),
        t in coeffs(12),
        mix in (-2i64..=2, -2i64..=2, 1i64..=3),
    ) {
        let w = wedge();
        let d = Derivation::zero(&w.l, -1);
        let delta = combine_ders(&w.l, -1, &w.m1, &c);
        let report = |p: &Derivation| orbit_invariants(&d, p, (1, 8), 3).unwrap();
        let base = report(&delta);
        // Linear automorphism: scale x, y and mix z, w.
        let (p, r, s) = mix;
        let det_ok = s != 0;
        prop_assume!(det_ok);
        let mut m = vec![vec![int(0); 4]; 4];
        m[0][0] = int(s);
        m[1][1] = int(-1);
        m[2][2] = int(1);
        m[2][3] = int(p);
        m[3][2] = int(r);
        m[3][3] = int(p * r + 1);
        let phi = aut_v_lift(&w.l, &m).unwrap();
        let moved = aut_action(&w.variety, &phi, &delta).unwrap();
        prop_assert_eq!(report(&moved), base.clone());
        let theta = combine_ders(&w.l, 0, &w.m0, &t);
        let by_exp = aut_action(&w.variety, &exp(&theta).unwrap(), &delta).unwrap();
        prop_assert_eq!(report(&by_exp), base.clone());
        let gauged = gauge(&d, &theta, &delta).unwrap();
        prop_assert_eq!(report(&gauged), base);
    }
}
