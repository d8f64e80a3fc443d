use mcdgl_core::dersub::*;
use mcdgl_core::dgl::*;
use mcdgl_core::scalar::{int, ratio};
use mcdgl_core::*;
use proptest::prelude::*;
use std::sync::OnceLock;

fn sl2() -> (FreeLie, [Derivation; 3]) {
    let l = FreeLie::new(GeneratorSet::from_pairs(&[("x", 2), ("y", 2)], None).unwrap());
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    let t1 = Derivation::from_values(&l, 0, &[("x", x.clone()), ("y", -&y)]).unwrap();
    let t2 = Derivation::from_values(&l, 0, &[("x", y.clone())]).unwrap();
    let t3 = Derivation::from_values(&l, 0, &[("y", x.clone())]).unwrap();
    (l, [t1, t2, t3])
}

#[test]
fn sl2_relations_and_evaluation() {
    let (l, [t1, t2, t3]) = sl2();
    assert_eq!(der_bracket(&t1, &t2).unwrap(), t2.scale(&int(-2)));
    assert_eq!(der_bracket(&t1, &t3).unwrap(), t3.scale(&int(2)));
    assert_eq!(der_bracket(&t2, &t3).unwrap(), t1.scale(&int(-1)));
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    let xy = x.bracket(&y).unwrap();
    assert_eq!(t2.evaluate(&xy).unwrap(), y.bracket(&y).unwrap());
    assert_eq!(t2.evaluate(&x).unwrap(), y);
    assert!(Derivation::zero(&l, 0).evaluate(&xy).unwrap().is_zero());
    assert!(der_bracket(&t1, &t1).unwrap().is_zero());
    assert!(boundary(&Derivation::zero(&l, -1), &t1).unwrap().is_zero());
}

struct Wedge {
    l: FreeLie,
    m0: Vec<Derivation>,
    m1: Vec<Derivation>,
}

fn wedge() -> &'static Wedge {
    static W: OnceLock<Wedge> = OnceLock::new();
    W.get_or_init(|| {
        let l = FreeLie::new(
            GeneratorSet::from_pairs(&[("x", 1), ("y", 3), ("z", 5), ("w", 5)], Some(Window::degree(12))).unwrap(),
        );
        let f = FiltrationOfV::trivial(l.generators());
        let m0 = dder_basis(&l, &f, 0).unwrap().basis;
        let m1 = dder_basis(&l, &f, -1).unwrap().basis;
        Wedge { l, m0, m1 }
    })
}

fn combine(l: &FreeLie, k: i32, basis: &[Derivation], c: &[i64]) -> Derivation {
    let mut acc = Derivation::zero(l, k);
    for (b, x) in basis.iter().zip(c) {
        acc = acc.add_scaled(&int(*x), b).unwrap();
    }
    acc
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn sign(n: i32) -> Scalar {
    if n % 2 == 0 { int(1) } else { int(-1) }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn derivation_bracket_is_a_graded_lie_bracket(
        a in prop::collection::vec(-2i64..=2, 12),
        b in prop::collection::vec(-2i64..=2, 3),
        c in prop::collection::vec(-2i64..=2, 12),
    ) {
        let w = wedge();
        let th = combine(&w.l, 0, &w.m0, &a);
        let et = combine(&w.l, -1, &w.m1, &b);
        let ze = combine(&w.l, 0, &w.m0, &c);
        let te = der_bracket(&th, &et).unwrap();
        prop_assert_eq!(te, der_bracket(&et, &th).unwrap().scale(&int(-1)));
        let lhs = der_bracket(&th, &der_bracket(&et, &ze).unwrap()).unwrap();
        let rhs = der_bracket(&der_bracket(&th, &et).unwrap(), &ze)
            .unwrap()
            .try_add(&der_bracket(&et, &der_bracket(&th, &ze).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_is_a_derivation_of_the_bracket(
        a in prop::collection::vec(-2i64..=2, 12),
        b in prop::collection::vec(-2i64..=2, 12),
        dc in prop::collection::vec(-2i64..=2, 3),
    ) {
        let w = wedge();
        let d = combine(&w.l, -1, &w.m1, &dc);
        let th = combine(&w.l, 0, &w.m0, &a);
        let et = combine(&w.l, 0, &w.m0, &b);
        let lhs = boundary(&d, &der_bracket(&th, &et).unwrap()).unwrap();
        let rhs = der_bracket(&boundary(&d, &th).unwrap(), &et)
            .unwrap()
            .add_scaled(&sign(th.degree()), &der_bracket(&th, &boundary(&d, &et).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_is_an_action_of_the_bch_group(
        a in prop::collection::vec(-1i64..=1, 12),
        b in prop::collection::vec(-1i64..=1, 12),
        dc in prop::collection::vec(-2i64..=2, 3),
    ) {
        let w = wedge();
        let d = Derivation::zero(&w.l, -1);
        let delta = combine(&w.l, -1, &w.m1, &dc);
        let x = combine(&w.l, 0, &w.m0, &a);
        let y = combine(&w.l, 0, &w.m0, &b);
        let z = bch(&x, &y).unwrap();
        prop_assert_eq!(
            gauge(&d, &z, &delta).unwrap(),
            gauge(&d, &x, &gauge(&d, &y, &delta).unwrap()).unwrap()
        );
    }

    #[test]
    fn exp_inverts_under_negation(a in prop::collection::vec(-2i64..=2, 12)) {
        let w = wedge();
        let th = combine(&w.l, 0, &w.m0, &a);
        let f = exp(&th).unwrap();
        prop_assert_eq!(exp(&th.scale(&int(-1))).unwrap(), f.inverse().unwrap());
        prop_assert!(f.linear_matrix() == Automorphism::identity(&w.l).linear_matrix());
        prop_assert_eq!(exp(&log(&f).unwrap()).unwrap(), f);
    }
}

#[test]
fn perturbation_basics() {
    let w = wedge();
    let d = Derivation::zero(&w.l, -1);
    assert!(mc_check(&d, &d).unwrap());
    assert!(is_differential(&perturb(&d, &d).unwrap()).unwrap());
    let x = w.l.gen("x").unwrap();
    assert!(matches!(mc_check_element(&d, &x), Err(Error::WrongDegree { .. })));
    assert!(matches!(perturb_element(&d, &x), Err(Error::WrongDegree { .. })));
    let th = combine(&w.l, 0, &w.m0, &[1; 12]);
    assert!(matches!(mc_check(&d, &th), Err(Error::WrongDegree { .. })));
}

#[test]
fn series_edge_cases() {
    let w = wedge();
    let th = combine(&w.l, 0, &w.m0, &[1, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
    assert_eq!(bch(&th, &Derivation::zero(&w.l, 0)).unwrap(), th);
    let l = FreeLie::new(GeneratorSet::from_pairs(&[("x", 2), ("y", 2)], None).unwrap());
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    let a = Derivation::from_values(&l, 0, &[("x", x.clone())]).unwrap();
    let b = Derivation::from_values(&l, 0, &[("y", y.clone())]).unwrap();
    assert_eq!(bch(&a, &b).unwrap(), a.try_add(&b).unwrap());
    assert!(exp(&Derivation::zero(&w.l, 0)).unwrap().is_identity());
    assert!(log(&Automorphism::identity(&w.l)).unwrap().is_zero());
    assert!(matches!(exp(&a), Err(Error::NonTerminating(_))));
    let scaling = Automorphism::scale_generators(&l, &[int(2), int(1)]).unwrap();
    assert!(matches!(log(&scaling), Err(Error::Hypothesis(_))));
    let d = Derivation::zero(&w.l, -1);
    let delta = combine(&w.l, -1, &w.m1, &[1, 2, 0]);
    assert_eq!(gauge(&d, &Derivation::zero(&w.l, 0), &delta).unwrap(), delta);
    let zero = Derivation::zero(&w.l, 0);
    assert!(gauge_witness_check(&d, &zero, &delta, &delta).unwrap());
    let other = combine(&w.l, -1, &w.m1, &[1, 0, 0]);
    assert!(!gauge_witness_check(&d, &zero, &delta, &other).unwrap());
    let _ = ratio(1, 2);
}

#[test]
fn homology_routes_and_euler_characteristic() {
    let l = FreeLie::new(GeneratorSet::from_pairs(&[("x", 1), ("y", 3), ("z", 5), ("w", 5)], None).unwrap());
    let x = l.gen("x").unwrap();
    let dy = Derivation::from_values(&l, -1, &[("y", x.bracket(&x).unwrap())]).unwrap();
    let lie = homology_dims_with(&dy, 1..=8, HomologyRoute::Lie).unwrap();
    let env = homology_dims_with(&dy, 1..=8, HomologyRoute::Enveloping).unwrap();
    assert_eq!(lie, env);
    let dims: Vec<usize> = (1..=9)
        .map(|d| l.lengths_in_degree(d).map(|n| l.dimension(n, d)).sum())
        .collect();
    assert_eq!(
        homology_dims(&Derivation::zero(&l, -1), 1..=8).unwrap(),
        dims[..8].to_vec()
    );
    // δ_y kills [x,x] and y, which is everything in degrees 2 and 3.
    assert_eq!(lie[1], 0);
    assert_eq!(lie[2], 0);
}
