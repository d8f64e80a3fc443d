use mcdgl::artifacts::*;
use mcdgl::commands::{free_dgl_document, variety};
use mcdgl::pipelines::{QUOTIENT, WEDGE};
use mcdgl::problem::{eval_lie, Problem, WindowOverride};
use mcdgl::syntax::parse_expr;
use mcdgl_core::scalar::int;
use mcdgl_core::{FreeLie, GeneratorSet, LieElement, Window};
use proptest::prelude::*;
use std::sync::OnceLock;

const HEISENBERG: &str = include_str!("../problems/heisenberg.mcd");
const ABELIAN: &str = include_str!("../problems/abelian-1-3.mcd");
const CP2: &str = include_str!("../problems/cp2.mcd");

fn problem(text: &str) -> Problem {
    Problem::parse(text, WindowOverride::default()).unwrap()
}

#[test]
fn quadratic_system_round_trips() {
    for (text, kind) in [(QUOTIENT, "sder"), (WEDGE, "dder")] {
        let p = problem(text);
        let v = variety(&p, kind).unwrap();
        let art = QuadraticSystemJson::from(&v.system);
        let json = serde_json::to_string(&art).unwrap();
        let back: QuadraticSystemJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, art);
        let sys = back.to_system().unwrap();
        assert_eq!(QuadraticSystemJson::from(&sys), art);
        let grid = [-1, 0, 2];
        for a in grid {
            for b in grid {
                for c in grid {
                    let pt = [int(a), int(b), int(c)];
                    assert_eq!(sys.vanishes_at(&pt).unwrap(), v.system.vanishes_at(&pt).unwrap());
                }
            }
        }
    }
}

#[test]
fn quadratic_system_rejects_unknown_variables() {
    let art = QuadraticSystemJson {
        variables: vec!["a".into()],
        polynomials: vec![vec![Term {
            monomial: vec!["b".into()],
            coefficient: "1".into(),
        }]],
    };
    assert!(art.to_system().is_err());
}

#[test]
fn bigraded_model_round_trips() {
    for text in [HEISENBERG, ABELIAN] {
        let p = problem(text);
        let m = p.model.as_ref().unwrap();
        let pi = p.nilpotent.as_ref().unwrap();
        let names: Vec<&str> = (0..pi.len()).map(|i| pi.name(i)).collect();
        let art = BigradedModelJson::new(m, &names);
        let json = serde_json::to_string_pretty(&art).unwrap();
        let back: BigradedModelJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, art);
        let (alg, d) = back.to_dgl().unwrap();
        assert_eq!(alg.generators(), m.algebra.generators());
        assert_eq!(&d, &m.differential);
    }
}

#[test]
fn free_dgl_round_trips() {
    let p = problem(QUOTIENT);
    let art = FreeDglJson::new(&p.differential);
    let back: FreeDglJson = serde_json::from_str(&serde_json::to_string(&art).unwrap()).unwrap();
    let (alg, d) = back.to_dgl().unwrap();
    assert_eq!(alg.generators(), p.algebra.generators());
    assert_eq!(d, p.differential);
}

#[test]
fn quillen_document_reparses() {
    for text in [QUOTIENT, CP2] {
        let p = problem(text);
        let doc = free_dgl_document(&p.differential);
        let q = problem(&doc);
        assert_eq!(q.algebra.generators(), p.algebra.generators());
        assert_eq!(q.differential, p.differential);
    }
}

#[test]
fn derivation_values_round_trip() {
    let p = problem(QUOTIENT);
    for (_, theta) in &p.derivations {
        let vals = values(theta);
        let back = derivation_from(&p.algebra, theta.degree(), &vals).unwrap();
        assert_eq!(&back, theta);
    }
}

fn algebra() -> &'static (FreeLie, Vec<Vec<LieElement>>) {
    static A: OnceLock<(FreeLie, Vec<Vec<LieElement>>)> = OnceLock::new();
    A.get_or_init(|| {
        let l = FreeLie::new(
            GeneratorSet::from_pairs(&[("x", 1), ("y", 2), ("z'", 3)], Some(Window::degree(7))).unwrap(),
        );
        let b = (1..=7).map(|d| l.degree_basis(d)).collect();
        (l, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn element_display_reparses(d in 0..7usize, c in prop::collection::vec((-3i64..=3, 1i64..=4), 12)) {
        let (l, basis) = algebra();
        let mut e = l.zero();
        for (b, (n, q)) in basis[d].iter().zip(&c) {
            e = e.add_scaled(&mcdgl_core::scalar::ratio(*n, *q), b).unwrap();
        }
        let text = e.to_string();
        let back = eval_lie(&parse_expr(&text).unwrap(), l).unwrap();
        prop_assert_eq!(back, e);
    }
}
