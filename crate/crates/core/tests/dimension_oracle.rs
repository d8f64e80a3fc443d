//! Dimensions of the canonical basis against the rank of all left-normed
//! brackets, computed here with a separate tensor-algebra bracket.

use mcdgl_core::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

type Tensor = BTreeMap<Vec<usize>, BigRational>;

fn degree(degs: &[i32], w: &[usize]) -> i32 {
    w.iter().map(|&l| degs[l]).sum()
}

fn bracket(degs: &[i32], a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (u, x) in a {
        for (v, y) in b {
            let odd = degree(degs, u) * degree(degs, v) % 2 != 0;
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

fn rank(vectors: Vec<Tensor>) -> usize {
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
    let mut by_degree: BTreeMap<i32, Vec<Tensor>> = BTreeMap::new();
    for w in words {
        let gen = |l: usize| Tensor::from([(vec![l], BigRational::one())]);
        let mut acc = gen(w[n - 1]);
        for &l in w[..n - 1].iter().rev() {
            acc = bracket(degs, &gen(l), &acc);
        }
        by_degree.entry(degree(degs, &w)).or_default().push(acc);
    }
    by_degree.into_iter().map(|(d, v)| (d, rank(v))).collect()
}

fn check(pairs: &[(&str, i32)]) {
    let degs: Vec<i32> = pairs.iter().map(|p| p.1).collect();
    let top: i32 = 4 * degs.iter().max().unwrap();
    let l = FreeLie::new(GeneratorSet::from_pairs(pairs, Some(Window::degree(top))).unwrap());
    for n in 1..=4 {
        let oracle = brute_force(&degs, n);
        for d in 0..=top {
            let expected = oracle.get(&d).copied().unwrap_or(0);
            assert_eq!(l.dimension(n, d), expected, "length {n}, degree {d}");
        }
    }
}

#[test]
fn wedge_generators() {
    check(&[("x", 1), ("y", 3), ("z", 5), ("w", 5)]);
}

#[test]
fn quotient_generators() {
    check(&[("x", 3), ("y", 5), ("z", 12), ("u", 14), ("v", 18)]);
}

#[test]
fn mixed_parity_generators() {
    check(&[("a", 1), ("b", 2)]);
}
