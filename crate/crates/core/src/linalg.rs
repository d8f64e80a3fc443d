//! Exact sparse linear algebra over the rationals.
//!
//! Rank and span membership run on primitive integer rows (fraction-free
//! elimination with content removal). Coordinates, kernels and inverses
//! use rational row reduction on small dense systems.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Sparse vector sorted by key, without explicit zeros.
pub type SparseVec<K> = Vec<(K, Scalar)>;

type IntRow<K> = Vec<(K, BigInt)>;

/// Clears denominators and divides by the content; the leading entry is positive.
fn primitive<K: Clone>(v: &[(K, Scalar)]) -> IntRow<K> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for (_, c) in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut row: IntRow<K> = v
        .iter()
        .map(|(k, c)| (k.clone(), c.numer() * (&lcm / c.denom())))
        .collect();
    normalize(&mut row);
    row
}

fn normalize<K>(row: &mut IntRow<K>) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let flip = row.first().map(|(_, c)| c.is_negative()).unwrap_or(false);
    if !g.is_one() || flip {
        if flip {
            g = -g;
        }
        for (_, c) in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `a*v - b*r` for sorted sparse rows.
fn combine<K: Ord + Clone>(a: &BigInt, v: &IntRow<K>, b: &BigInt, r: &IntRow<K>) -> IntRow<K> {
    let mut out = Vec::with_capacity(v.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < r.len() {
        let take = match (v.get(i), r.get(j)) {
            (Some((kv, _)), Some((kr, _))) => kv.cmp(kr),
            (Some(_), None) => core::cmp::Ordering::Less,
            (None, Some(_)) => core::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match take {
            core::cmp::Ordering::Less => {
                out.push((v[i].0.clone(), a * &v[i].1));
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push((r[j].0.clone(), -(b * &r[j].1)));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let c = a * &v[i].1 - b * &r[j].1;
                if !c.is_zero() {
                    out.push((v[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Row echelon form over primitive integer rows, keyed by pivot.
#[derive(Debug, Clone)]
pub struct Echelon<K> {
    rows: BTreeMap<K, IntRow<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    fn reduce(&self, mut v: IntRow<K>) -> IntRow<K> {
        while let Some((lead, coeff)) = v.first() {
            let Some(row) = self.rows.get(lead) else {
                break;
            };
            let a = row[0].1.clone();
            let b = coeff.clone();
            let g = a.gcd(&b);
            v = combine(&(&a / &g), &v, &(&b / &g), row);
            normalize(&mut v);
        }
        v
    }

    /// Inserts a vector; returns `true` when it was independent of the rows so far.
    pub fn insert(&mut self, v: &[(K, Scalar)]) -> bool {
        let reduced = self.reduce(primitive(v));
        match reduced.first() {
            None => false,
            Some((lead, _)) => {
                let lead = lead.clone();
                self.rows.insert(lead, reduced);
                true
            }
        }
    }

    pub fn contains(&self, v: &[(K, Scalar)]) -> bool {
        self.reduce(primitive(v)).is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Indices (in declaration order) of the candidates that extend `span` to a
/// larger subspace, chosen greedily.
pub fn greedy_complement<K: Ord + Clone>(
    span: &[SparseVec<K>],
    candidates: &[SparseVec<K>],
) -> Vec<usize> {
    let mut ech = Echelon::new();
    for v in span {
        ech.insert(v);
    }
    candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| ech.insert(c).then_some(i))
        .collect()
}

fn scale_sparse<K: Clone>(v: &[(K, Scalar)], c: &Scalar) -> SparseVec<K> {
    v.iter().map(|(k, x)| (k.clone(), x * c)).collect()
}

fn axpy<K: Ord + Clone>(v: &[(K, Scalar)], c: &Scalar, r: &[(K, Scalar)]) -> SparseVec<K> {
    // v - c*r
    let mut out = Vec::with_capacity(v.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < r.len() {
        let ord = match (v.get(i), r.get(j)) {
            (Some((a, _)), Some((b, _))) => a.cmp(b),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match ord {
            core::cmp::Ordering::Less => {
                out.push(v[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push((r[j].0.clone(), -(c * &r[j].1)));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let x = &v[i].1 - c * &r[j].1;
                if !x.is_zero() {
                    out.push((v[i].0.clone(), x));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Span of an ordered family with the ability to recover coordinates.
#[derive(Debug, Clone)]
pub struct Span<K> {
    // pivot -> (row with leading coefficient 1, combination of inserted vectors)
    rows: BTreeMap<K, (SparseVec<K>, SparseVec<usize>)>,
    count: usize,
    independent: Vec<bool>,
}

impl<K: Ord + Clone> Default for Span<K> {
    fn default() -> Self {
        Span {
            rows: BTreeMap::new(),
            count: 0,
            independent: Vec::new(),
        }
    }
}

impl<K: Ord + Clone> Span<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors(vectors: &[SparseVec<K>]) -> Self {
        let mut s = Self::new();
        for v in vectors {
            s.push(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Whether every pushed vector was independent of its predecessors.
    pub fn is_independent(&self) -> bool {
        self.independent.iter().all(|&b| b)
    }

    fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut combo: SparseVec<usize> = Vec::new();
        loop {
            let Some((lead, c)) = v.first().cloned() else {
                break;
            };
            let Some((row, rc)) = self.rows.get(&lead) else {
                break;
            };
            v = axpy(&v, &c, row);
            combo = axpy(&combo, &-c, rc);
        }
        (v, combo)
    }

    pub fn push(&mut self, v: &[(K, Scalar)]) -> bool {
        let idx = self.count;
        self.count += 1;
        let (rest, combo) = self.reduce(v.to_vec());
        let Some((lead, c)) = rest.first().cloned() else {
            self.independent.push(false);
            return false;
        };
        let inv = Scalar::one() / c;
        let row = scale_sparse(&rest, &inv);
        // row = inv * (v - sum combo_j * b_j) => combination: inv*e_idx - inv*combo
        let mut rc: SparseVec<usize> = scale_sparse(&combo, &-inv.clone());
        rc.push((idx, inv));
        rc.sort_by_key(|a| a.0);
        self.rows.insert(lead, (row, rc));
        self.independent.push(true);
        true
    }

    pub fn contains(&self, v: &[(K, Scalar)]) -> bool {
        self.reduce(v.to_vec()).0.is_empty()
    }

    /// Coefficients `c` with `v = sum c_i * pushed_i`, if `v` is in the span.
    pub fn coordinates(&self, v: &[(K, Scalar)]) -> Option<Vec<Scalar>> {
        let (rest, combo) = self.reduce(v.to_vec());
        if !rest.is_empty() {
            return None;
        }
        let mut out = vec![Scalar::zero(); self.count];
        for (i, c) in combo {
            out[i] = c;
        }
        Some(out)
    }
}

/// Reduced row echelon form in place, pivoting only in the first `ncols`
/// columns; returns pivot columns.
fn rref(m: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..m[r].len() {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{x : m x = 0}` for a dense matrix with `ncols` columns.
pub fn nullspace(mut m: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    for row in m.iter_mut() {
        row.resize(ncols, Scalar::zero());
    }
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Scalar::zero(); ncols];
        x[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = -m[r][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.resize(ncols, Scalar::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square dense matrix.
pub fn inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.resize(n, Scalar::zero());
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Integer basis of the rational kernel (each vector scaled to primitive integers).
pub fn integer_nullspace(m: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<i64>> {
    nullspace(m, ncols)
        .into_iter()
        .filter_map(|v| {
            let sparse: SparseVec<usize> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect();
            let row = primitive(&sparse);
            let mut out = vec![0i64; ncols];
            for (i, c) in row {
                out[i] = i64::try_from(c).ok()?;
            }
            Some(out)
        })
        .collect()
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn mat_vec(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Scalar::zero(), |acc, (r, v)| acc + r * v)
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Scalar::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}
