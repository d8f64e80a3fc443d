//! Homology dimensions of `(L, δ)`.
//!
//! Two independent routes. The Lie route ranks `δ` on the Lie basis. The
//! enveloping route ranks the induced differential on tensor words, whose
//! homology is the enveloping algebra of `H(L)` in characteristic zero, and
//! then inverts the PBW series. Both split matrices into blocks along the
//! integer gradings of the generators that `δ` preserves.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::derivation::{is_differential, Derivation};
use crate::error::{Error, Result};
use crate::glie::{add_term, FreeLie, Terms, Word};
use crate::linalg::{integer_nullspace, Echelon, SparseVec};
use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HomologyRoute {
    /// Enveloping route when all generators have positive degree.
    #[default]
    Auto,
    Lie,
    Enveloping,
}

fn check_window(delta: &Derivation, hi: i32) -> Result<()> {
    if !is_differential(delta)? {
        return Err(Error::ConstraintViolation("not a differential".into()));
    }
    let set = delta.algebra().generators();
    let min = match set.min_degree() {
        None => return Ok(()),
        Some(m) => m,
    };
    if min <= 0 {
        return Err(Error::WindowInsufficient(
            "degree-0 generators make degree cells infinite".into(),
        ));
    }
    if hi + 1 > set.max_degree() {
        return Err(Error::WindowInsufficient(format!(
            "degree {} needed, window stops at {}",
            hi + 1,
            set.max_degree()
        )));
    }
    let needed = ((hi + 1).max(0) / min) as usize;
    if needed > set.max_word_length() {
        return Err(Error::WindowInsufficient(format!(
            "word length {} needed, window stops at {}",
            needed,
            set.max_word_length()
        )));
    }
    Ok(())
}

/// Integer weights on generators preserved by `δ`, one vector per grading.
pub fn invariant_gradings(delta: &Derivation) -> Vec<Vec<i64>> {
    let r = delta.algebra().rank();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    for (g, v) in delta.values().iter().enumerate() {
        for (w, _) in v.terms() {
            let mut row = vec![0i64; r];
            for &l in w {
                row[usize::from(l)] += 1;
            }
            row[g] -= 1;
            if seen.insert(row.clone(), ()).is_none() {
                rows.push(row.into_iter().map(int).collect());
            }
        }
    }
    integer_nullspace(rows, r)
}

fn block_key(gradings: &[Vec<i64>], word: &[u16]) -> Vec<i64> {
    gradings
        .iter()
        .map(|om| word.iter().map(|&l| om[usize::from(l)]).sum())
        .collect()
}

fn block_key_of_letters(gradings: &[Vec<i64>], letter_counts: &[i64]) -> Vec<i64> {
    gradings
        .iter()
        .map(|om| om.iter().zip(letter_counts).map(|(a, b)| a * b).sum())
        .collect()
}

/// Homology dimensions for each degree in `range`, automatic route.
pub fn homology_dims(delta: &Derivation, range: RangeInclusive<i32>) -> Result<Vec<usize>> {
    homology_dims_with(delta, range, HomologyRoute::Auto)
}

pub fn homology_dims_with(
    delta: &Derivation,
    range: RangeInclusive<i32>,
    route: HomologyRoute,
) -> Result<Vec<usize>> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Ok(Vec::new());
    }
    check_window(delta, hi)?;
    let positive = delta.algebra().generators().is_positive();
    match route {
        HomologyRoute::Lie => lie_route(delta, lo, hi),
        HomologyRoute::Enveloping | HomologyRoute::Auto if positive => {
            enveloping_route(delta, lo, hi)
        }
        HomologyRoute::Auto => lie_route(delta, lo, hi),
        HomologyRoute::Enveloping => Err(Error::WindowInsufficient(
            "enveloping route needs positive degrees".into(),
        )),
    }
}

/// Rank of `δ: L_k -> L_{k-1}`, blockwise.
fn lie_rank(delta: &Derivation, gradings: &[Vec<i64>], k: i32) -> Result<usize> {
    let alg = delta.algebra();
    if k - 1 < alg.generators().min_degree().unwrap_or(0) {
        return Ok(0);
    }
    let mut blocks: BTreeMap<Vec<i64>, Echelon<Word>> = BTreeMap::new();
    for n in alg.lengths_in_degree(k) {
        let cell = alg.basis_cell(n, k);
        for b in cell.elements.iter() {
            let img = delta.evaluate(&b.element)?;
            if img.is_zero() {
                continue;
            }
            let key = block_key(gradings, &b.leading_word());
            blocks.entry(key).or_default().insert(&img.lead_projection());
        }
    }
    Ok(blocks.values().map(|e| e.rank()).sum())
}

fn degree_dim(alg: &FreeLie, k: i32) -> usize {
    alg.lengths_in_degree(k).map(|n| alg.dimension(n, k)).sum()
}

fn lie_route(delta: &Derivation, lo: i32, hi: i32) -> Result<Vec<usize>> {
    let alg = delta.algebra();
    let gradings = invariant_gradings(delta);
    let mut ranks = BTreeMap::new();
    for k in lo..=hi + 1 {
        ranks.insert(k, lie_rank(delta, &gradings, k)?);
    }
    (lo..=hi)
        .map(|k| {
            let dim = if k <= 0 { 0 } else { degree_dim(alg, k) };
            Ok(dim - ranks[&k] - ranks[&(k + 1)])
        })
        .collect()
}

fn words_by_degree(alg: &FreeLie, top: i32) -> Vec<Vec<Word>> {
    let set = alg.generators();
    let top = top.max(0) as usize;
    let mut out: Vec<Vec<Word>> = vec![Vec::new(); top + 1];
    out[0].push(Vec::new());
    for k in 1..=top {
        let mut here = Vec::new();
        for g in 0..set.len() {
            let gd = set.degree(g) as usize;
            if gd == 0 || gd > k {
                continue;
            }
            for w in &out[k - gd] {
                let mut nw = w.clone();
                nw.push(g as u16);
                here.push(nw);
            }
        }
        out[k] = here;
    }
    out
}

fn tensor_differential(values: &[Terms], degrees: &[i64], word: &[u16]) -> Terms {
    let mut out = Terms::new();
    let mut prefix: i64 = 0;
    for j in 0..word.len() {
        let l = usize::from(word[j]);
        let neg = prefix % 2 != 0; // δ has degree -1
        for (u, c) in &values[l] {
            let mut nw: Word = Vec::with_capacity(word.len() + u.len() - 1);
            nw.extend_from_slice(&word[..j]);
            nw.extend_from_slice(u);
            nw.extend_from_slice(&word[j + 1..]);
            add_term(&mut out, nw, if neg { -c.clone() } else { c.clone() });
        }
        prefix += degrees[l];
    }
    out
}

fn enveloping_route(delta: &Derivation, lo: i32, hi: i32) -> Result<Vec<usize>> {
    let alg = delta.algebra();
    let set = alg.generators();
    let degrees: Vec<i64> = (0..set.len()).map(|g| i64::from(set.degree(g))).collect();
    let values: Vec<Terms> = delta.values().iter().map(|v| v.terms.clone()).collect();
    let gradings = invariant_gradings(delta);
    let words = words_by_degree(alg, hi + 1);
    let top = (hi + 1).max(0) as usize;
    // rank of T_k -> T_{k-1}
    let mut rank = vec![0usize; top + 2];
    for k in 1..=top {
        let mut blocks: BTreeMap<Vec<i64>, Echelon<Word>> = BTreeMap::new();
        for w in &words[k] {
            let img = tensor_differential(&values, &degrees, w);
            if img.is_empty() {
                continue;
            }
            let mut counts = vec![0i64; set.len()];
            for &l in w {
                counts[usize::from(l)] += 1;
            }
            let key = block_key_of_letters(&gradings, &counts);
            let v: SparseVec<Word> = img.into_iter().collect();
            blocks.entry(key).or_default().insert(&v);
        }
        rank[k] = blocks.values().map(|e| e.rank()).sum();
    }
    let hi_u = hi.max(0) as usize;
    let mut h_tensor = vec![0usize; hi_u + 1];
    for k in 1..=hi_u {
        h_tensor[k] = words[k].len() - rank[k] - rank[k + 1];
    }
    // Invert the PBW series of U(H) = H(T).
    let mut prod = vec![BigInt::zero(); hi_u + 1];
    prod[0] = BigInt::from(1);
    let mut lie = vec![0usize; hi_u + 1];
    for k in 1..=hi_u {
        let l = BigInt::from(h_tensor[k]) - &prod[k];
        let lu = l.to_usize().ok_or_else(|| {
            Error::ConstraintViolation(format!("enveloping series inconsistent in degree {k}"))
        })?;
        lie[k] = lu;
        if lu == 0 {
            continue;
        }
        let odd = k % 2 == 1;
        let max_m = hi_u / k;
        let mut coefs = Vec::with_capacity(max_m + 1);
        let mut c = BigInt::from(1);
        coefs.push(c.clone());
        for m in 1..=max_m {
            c = if odd {
                c * BigInt::from(lu as i64 - (m as i64 - 1)) / BigInt::from(m)
            } else {
                c * BigInt::from(lu + m - 1) / BigInt::from(m)
            };
            coefs.push(c.clone());
        }
        let mut next = vec![BigInt::zero(); hi_u + 1];
        for (a, pa) in prod.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (m, cm) in coefs.iter().enumerate() {
                let idx = a + m * k;
                if idx > hi_u || cm.is_zero() {
                    break;
                }
                next[idx] += pa * cm;
            }
        }
        prod = next;
    }
    Ok((lo..=hi)
        .map(|k| if k <= 0 { 0 } else { lie[k as usize] })
        .collect())
}

/// Dimensions of `F^n H_k` for `n = 1..=max_len`, where `F^n` is spanned by
/// word lengths at least `n`. Computed on the Lie basis.
pub fn filtered_homology_dims(delta: &Derivation, k: i32, max_len: usize) -> Result<Vec<usize>> {
    check_window(delta, k)?;
    let alg = delta.algebra();
    // global coordinates of L_k: (length, local index) in length order
    let mut layout: Vec<(usize, usize)> = Vec::new();
    let mut offset: BTreeMap<usize, usize> = BTreeMap::new();
    for n in alg.lengths_in_degree(k) {
        offset.insert(n, layout.len());
        for i in 0..alg.dimension(n, k) {
            layout.push((n, i));
        }
    }
    let dim_k = layout.len();
    // δ on L_k, as sparse images keyed by lead word of L_{k-1}
    let mut images: Vec<SparseVec<Word>> = Vec::with_capacity(dim_k);
    for &(n, i) in &layout {
        let b = &alg.basis_cell(n, k).elements[i].element;
        images.push(delta.evaluate(b)?.lead_projection());
    }
    // boundaries coming from L_{k+1}, in L_k coordinates
    let mut bound = Echelon::<usize>::new();
    for n in alg.lengths_in_degree(k + 1) {
        for b in alg.basis(n, k + 1) {
            let img = delta.evaluate(&b)?;
            let mut v: SparseVec<usize> = Vec::new();
            for ((len, _), coords) in img.coordinates() {
                let off = offset[&len];
                for (i, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        v.push((off + i, c));
                    }
                }
            }
            bound.insert(&v);
        }
    }
    let b_dim = bound.rank();
    let mut out = Vec::with_capacity(max_len);
    for n in 1..=max_len {
        let cols: Vec<usize> = (0..dim_k).filter(|&j| layout[j].0 >= n).collect();
        let mut keys: BTreeMap<Word, usize> = BTreeMap::new();
        for &j in &cols {
            for (w, _) in &images[j] {
                let next = keys.len();
                keys.entry(w.clone()).or_insert(next);
            }
        }
        let mut m = vec![vec![Scalar::zero(); cols.len()]; keys.len()];
        for (ci, &j) in cols.iter().enumerate() {
            for (w, c) in &images[j] {
                m[keys[w]][ci] = c.clone();
            }
        }
        let kernel = crate::linalg::nullspace(m, cols.len());
        let mut ech = bound.clone();
        for z in kernel {
            let v: SparseVec<usize> = z
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(ci, c)| (cols[ci], c))
                .collect();
            ech.insert(&v);
        }
        out.push(ech.rank() - b_dim);
    }
    Ok(out)
}
