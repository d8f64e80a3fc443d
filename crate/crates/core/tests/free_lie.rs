use mcdgl_core::scalar::int;
use mcdgl_core::*;

fn alg(pairs: &[(&str, i32)]) -> FreeLie {
    FreeLie::new(GeneratorSet::from_pairs(pairs, None).unwrap())
}

#[test]
fn small_brackets() {
    let l = alg(&[("x", 2), ("y", 2)]);
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    assert!(x.bracket(&x).unwrap().is_zero());
    assert_eq!(x.bracket(&y).unwrap(), -&y.bracket(&x).unwrap());
    let o = alg(&[("x", 1)]);
    let x = o.gen("x").unwrap();
    assert!(x.bracket(&x.bracket(&x).unwrap()).unwrap().is_zero());
    let other = alg(&[("x", 1), ("q", 2)]);
    assert!(matches!(
        x.bracket(&other.gen("x").unwrap()),
        Err(Error::IncompatibleAlgebra)
    ));
}

#[test]
fn small_bases() {
    let l = alg(&[("x", 2), ("y", 2)]);
    assert_eq!(l.dimension(2, 4), 1);
    assert_eq!(l.basis(2, 4)[0], l.gen("x").unwrap().bracket(&l.gen("y").unwrap()).unwrap());
    assert_eq!(l.basis(1, 2).len(), 2);
    let o = alg(&[("x", 1)]);
    let x = o.gen("x").unwrap();
    assert_eq!(o.basis(2, 2), vec![x.bracket(&x).unwrap()]);
    let two = alg(&[("x", 1), ("y", 1)]);
    assert_eq!(two.dimension(2, 2), 3);
    assert_eq!(two.basis(1, 1).len(), 2);
}

#[test]
fn express_examples() {
    let l = alg(&[("x", 2), ("y", 2), ("z", 3)]);
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    assert_eq!(l.express(&l.zero(), 2, 4).unwrap(), vec![int(0)]);
    let sym = &x.bracket(&y).unwrap() + &y.bracket(&x).unwrap();
    assert!(l.express(&sym, 2, 4).unwrap().iter().all(|c| *c == int(0)));
    for n in 1..=3 {
        for d in 2..=9 {
            let b = l.basis(n, d);
            for (k, e) in b.iter().enumerate() {
                let c = l.express(e, n, d).unwrap();
                for (j, cj) in c.iter().enumerate() {
                    assert_eq!(*cj, if j == k { int(1) } else { int(0) });
                }
            }
        }
    }
    let mixed = &x + &x.bracket(&y).unwrap();
    assert!(matches!(l.express(&mixed, 2, 4), Err(Error::NonHomogeneous)));
}

#[test]
fn dimension_independent_of_order() {
    let a = alg(&[("x", 1), ("y", 2), ("z", 3)]);
    let b = alg(&[("z", 3), ("x", 1), ("y", 2)]);
    for n in 1..=5 {
        for d in 1..=10 {
            assert_eq!(a.dimension(n, d), b.dimension(n, d));
        }
    }
}

#[test]
fn odd_generators_match_witt_count() {
    // All generators of the same odd degree behave as an ungraded free Lie
    // superalgebra whose total dimension in length n is the super Witt count;
    // for a single odd generator it is 1, 1, 0, 0, ...
    let l = alg(&[("x", 1)]);
    let dims: Vec<usize> = (1..=4).map(|n| l.dimension(n, n as i32)).collect();
    assert_eq!(dims, vec![1, 1, 0, 0]);
}

#[test]
fn window_truncation_is_flagged() {
    let l = FreeLie::new(GeneratorSet::from_pairs(&[("x", 2), ("y", 3)], Some(Window::degree(5))).unwrap());
    let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
    let xy = x.bracket(&y).unwrap();
    assert!(!xy.is_truncated());
    let big = xy.bracket(&y).unwrap();
    assert!(big.is_zero() && big.is_truncated());
}
