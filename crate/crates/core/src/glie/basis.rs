//! Super-Lyndon basis of a free graded Lie algebra.
//!
//! A Lyndon word `w` gives the standard bracketing `P_w`, and each Lyndon
//! word of odd degree additionally gives the square `[P_w, P_w]`. The
//! lexicographically smallest tensor word of `P_w` is `w` (coefficient 1) and
//! that of the square is `ww` (coefficient 2), so coordinates are found by a
//! triangular solve on those leading words alone.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::element::{FreeLie, LieElement, Letter, Terms, Word};
use super::generators::GeneratorSet;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Lyndon,
    /// `[P_w, P_w]` for an odd Lyndon word `w`.
    Square,
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub kind: BasisKind,
    /// The Lyndon word `w`; the leading word is `w` or `ww`.
    pub lyndon: Word,
    pub element: LieElement,
    label: String,
}

impl BasisElement {
    pub fn leading_word(&self) -> Word {
        match self.kind {
            BasisKind::Lyndon => self.lyndon.clone(),
            BasisKind::Square => {
                let mut w = self.lyndon.clone();
                w.extend_from_slice(&self.lyndon);
                w
            }
        }
    }

    /// Bracket notation, e.g. `[x,[x,y]]`.
    pub fn label(&self) -> &str {
        &self.label
    }
}

/// One `(word length, degree)` cell of the basis.
#[derive(Debug)]
pub struct BasisCell {
    pub elements: Vec<BasisElement>,
    lead_index: BTreeMap<Word, usize>,
    /// Column `j`: coefficients of element `j` on the leading words (by index).
    columns: Vec<SparseVec<usize>>,
}

impl BasisCell {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_words(&self) -> impl Iterator<Item = &Word> {
        self.lead_index.keys()
    }

    /// Projection of a homogeneous Lie element onto the leading words of the
    /// cell, indexed like the basis. Injective on the cell.
    pub fn project(&self, terms: &Terms) -> SparseVec<usize> {
        let mut out: SparseVec<usize> = terms
            .iter()
            .filter_map(|(w, c)| self.lead_index.get(w).map(|&i| (i, c.clone())))
            .collect();
        out.sort_by_key(|p| p.0);
        out
    }

    /// Coordinates from a projected vector.
    pub fn solve_projection(&self, proj: &[(usize, Scalar)]) -> Vec<Scalar> {
        let n = self.elements.len();
        let mut rhs = vec![Scalar::zero(); n];
        for (i, c) in proj {
            rhs[*i] = c.clone();
        }
        // Element j only touches leading words >= its own, so sweep upward.
        let mut x = vec![Scalar::zero(); n];
        for j in 0..n {
            if rhs[j].is_zero() {
                continue;
            }
            let col = &self.columns[j];
            let diag = &col[0].1;
            let cj = &rhs[j] / diag;
            for (i, c) in col.iter() {
                rhs[*i] -= &cj * c;
            }
            x[j] = cj;
        }
        x
    }
}

fn is_odd_degree(set: &GeneratorSet, w: &[Letter]) -> bool {
    scalar::is_odd(i64::from(set.word_degree(w)))
}

/// Lyndon words of the given length and degree, in lexicographic order.
pub fn lyndon_words(set: &GeneratorSet, n: usize, d: i32) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || set.is_empty() {
        return out;
    }
    let degrees: Vec<i32> = (0..set.len()).map(|i| set.degree(i)).collect();
    let min_deg = *degrees.iter().min().unwrap_or(&0);
    let mut word: Word = Vec::with_capacity(n);
    // FKM generation of prenecklaces with period tracking, pruned by degree.
    fn rec(
        degrees: &[i32],
        min_deg: i32,
        n: usize,
        d: i32,
        deg: i32,
        period: usize,
        word: &mut Word,
        out: &mut Vec<Word>,
    ) {
        let t = word.len();
        if t == n {
            if deg == d && period == n {
                out.push(word.clone());
            }
            return;
        }
        let remaining = (n - t - 1) as i32;
        let start = if t == 0 {
            0
        } else {
            usize::from(word[t - period])
        };
        for a in start..degrees.len() {
            let nd = deg + degrees[a];
            if nd + remaining * min_deg > d {
                continue;
            }
            let p = if t > 0 && a == usize::from(word[t - period]) {
                period
            } else {
                t + 1
            };
            word.push(a as Letter);
            rec(degrees, min_deg, n, d, nd, p, word, out);
            word.pop();
        }
    }
    rec(&degrees, min_deg, n, d, 0, 1, &mut word, &mut out);
    out
}

/// Whether `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = uv`, `v` the longest proper Lyndon suffix.
/// Returns the length of `u`.
pub fn standard_split(w: &[Letter]) -> usize {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("word of length >= 2")
}

struct Builder<'a> {
    alg: &'a FreeLie,
    memo: BTreeMap<Word, (LieElement, String)>,
}

impl Builder<'_> {
    fn standard(&mut self, w: &[Letter]) -> (LieElement, String) {
        if let Some(hit) = self.memo.get(w) {
            return hit.clone();
        }
        let out = if w.len() == 1 {
            let i = usize::from(w[0]);
            (
                self.alg.generator(i),
                String::from(self.alg.generators().name(i)),
            )
        } else {
            let k = standard_split(w);
            let (u, lu) = self.standard(&w[..k]);
            let (v, lv) = self.standard(&w[k..]);
            let e = u.bracket(&v).expect("same algebra");
            (e, alloc::format!("[{},{}]", lu, lv))
        };
        self.memo.insert(w.to_vec(), out.clone());
        out
    }
}

fn build_cell(alg: &FreeLie, n: usize, d: i32) -> BasisCell {
    let set = alg.generators();
    let mut elements = Vec::new();
    if n >= 1 && n <= set.max_word_length() && d <= set.max_degree() {
        let mut b = Builder {
            alg,
            memo: BTreeMap::new(),
        };
        for w in lyndon_words(set, n, d) {
            let (element, label) = b.standard(&w);
            elements.push(BasisElement {
                kind: BasisKind::Lyndon,
                lyndon: w,
                element,
                label,
            });
        }
        if n.is_multiple_of(2) && d % 2 == 0 {
            for w in lyndon_words(set, n / 2, d / 2) {
                if !is_odd_degree(set, &w) {
                    continue;
                }
                let (p, lp) = b.standard(&w);
                let element = p.bracket(&p).expect("same algebra");
                elements.push(BasisElement {
                    kind: BasisKind::Square,
                    lyndon: w,
                    element,
                    label: alloc::format!("[{},{}]", lp, lp),
                });
            }
        }
    }
    elements.sort_by_key(|e| e.leading_word());
    let lead_index: BTreeMap<Word, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.leading_word(), i))
        .collect();
    let mut cell = BasisCell {
        elements,
        lead_index,
        columns: Vec::new(),
    };
    cell.columns = cell
        .elements
        .iter()
        .map(|e| cell.project(&e.element.terms))
        .collect();
    cell
}

impl FreeLie {
    /// Basis of the `(n, d)` cell, built once and cached.
    pub fn basis_cell(&self, n: usize, d: i32) -> Arc<BasisCell> {
        let key = (n, d);
        if let Some(hit) = self.cached_basis(key) {
            return hit;
        }
        let cell = build_cell(self, n, d);
        self.store_basis(key, cell)
    }

    /// Basis of the word-length `n`, degree `d` part; empty outside the window.
    pub fn basis(&self, n: usize, d: i32) -> Vec<LieElement> {
        self.basis_cell(n, d)
            .elements
            .iter()
            .map(|e| e.element.clone())
            .collect()
    }

    pub fn dimension(&self, n: usize, d: i32) -> usize {
        self.basis_cell(n, d).len()
    }

    /// Basis of the whole degree-`d` part (all word lengths in the window),
    /// ordered by word length.
    pub fn degree_basis(&self, d: i32) -> Vec<LieElement> {
        (1..=self.generators().max_word_length())
            .flat_map(|n| self.basis(n, d))
            .collect()
    }

    /// Word lengths that can occur in degree `d` within the window.
    pub fn lengths_in_degree(&self, d: i32) -> core::ops::RangeInclusive<usize> {
        let set = self.generators();
        let lo = 1;
        let hi = match set.min_degree() {
            Some(m) if m > 0 => core::cmp::min(set.max_word_length(), (d.max(0) / m) as usize),
            _ => set.max_word_length(),
        };
        lo..=hi
    }

    /// Coordinates of a homogeneous element in `basis(n, d)`.
    pub fn express(&self, e: &LieElement, n: usize, d: i32) -> Result<Vec<Scalar>> {
        self.check(e.algebra())?;
        let set = self.generators();
        if e
            .terms
            .keys()
            .any(|w| w.len() != n || set.word_degree(w) != d)
        {
            return Err(Error::NonHomogeneous);
        }
        let cell = self.basis_cell(n, d);
        Ok(cell.solve_projection(&cell.project(&e.terms)))
    }

    /// Linear combination of `basis(n, d)`.
    pub fn combine(&self, n: usize, d: i32, coords: &[Scalar]) -> LieElement {
        let cell = self.basis_cell(n, d);
        let mut acc = self.zero();
        for (c, b) in coords.iter().zip(cell.elements.iter()) {
            acc = acc.add_scaled(c, &b.element).expect("same algebra");
        }
        acc
    }
}

impl LieElement {
    /// Coordinates per `(length, degree)` cell, dropping zero cells.
    pub fn coordinates(&self) -> BTreeMap<(usize, i32), Vec<Scalar>> {
        self.components()
            .into_iter()
            .map(|((n, d), part)| {
                let coords = self.alg.express(&part, n, d).expect("homogeneous part");
                ((n, d), coords)
            })
            .collect()
    }
}

impl LieElement {
    /// Injective linear projection onto leading words of the basis cells
    /// touched by the element. Sorted by word.
    pub fn lead_projection(&self) -> SparseVec<Word> {
        let mut out: SparseVec<Word> = Vec::new();
        for ((n, d), part) in self.components() {
            let cell = self.alg.basis_cell(n, d);
            let words: Vec<&Word> = cell.leading_words().collect();
            for (i, c) in cell.project(&part.terms) {
                out.push((words[i].clone(), c));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((n, d), coords) in self.coordinates() {
            let cell = self.alg.basis_cell(n, d);
            for (c, b) in coords.iter().zip(cell.elements.iter()) {
                if c.is_zero() {
                    continue;
                }
                write_term(f, c, b.label(), first)?;
                first = false;
            }
        }
        Ok(())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &Scalar,
    label: &str,
    first: bool,
) -> fmt::Result {
    use num_traits::Signed;
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if mag != Scalar::from_integer(1.into()) {
        write!(f, "{}*", scalar::format(&mag))?;
    }
    f.write_str(label)
}

/// Dimensions of all `(length, degree)` cells from the PBW identity
/// `prod (1 - s^n t^d)^{-L} prod (1 + s^n t^d)^{L} = 1 / (1 - s * sum t^{|v|})`,
/// even `d` in the first product and odd `d` in the second. Independent of
/// any basis construction. Indexed `[n][d]` for `n <= max_len`, `0 <= d <= max_deg`.
pub fn pbw_dimensions(
    set: &GeneratorSet,
    max_len: usize,
    max_deg: i32,
) -> Result<Vec<Vec<usize>>> {
    let cols = (max_deg.max(0) as usize) + 1;
    let rows = max_len + 1;
    let mut target = vec![vec![BigInt::zero(); cols]; rows];
    target[0][0] = BigInt::from(1);
    for n in 1..rows {
        for d in 0..cols {
            let mut acc = BigInt::zero();
            for g in set.generators() {
                let gd = g.degree as usize;
                if gd <= d {
                    acc += &target[n - 1][d - gd];
                }
            }
            target[n][d] = acc;
        }
    }
    let mut prod = vec![vec![BigInt::zero(); cols]; rows];
    prod[0][0] = BigInt::from(1);
    let mut dims = vec![vec![0usize; cols]; rows];
    for n in 1..rows {
        for d in 0..cols {
            let l = &target[n][d] - &prod[n][d];
            if l.is_zero() {
                continue;
            }
            let lu = l
                .to_usize()
                .ok_or_else(|| Error::OutOfRange(alloc::format!("dimension at ({n},{d})")))?;
            dims[n][d] = lu;
            let odd = d % 2 == 1;
            // Series of the factor in x = s^n t^d.
            let max_m = core::cmp::min(max_len / n, if d == 0 { usize::MAX } else { (cols - 1) / d });
            let mut coefs = Vec::with_capacity(max_m + 1);
            let mut c = BigInt::from(1);
            coefs.push(c.clone());
            for m in 1..=max_m {
                if odd {
                    // binom(L, m)
                    c = c * BigInt::from(lu as i64 - (m as i64 - 1)) / BigInt::from(m);
                } else {
                    // binom(L + m - 1, m)
                    c = c * BigInt::from(lu + m - 1) / BigInt::from(m);
                }
                coefs.push(c.clone());
            }
            let mut next = vec![vec![BigInt::zero(); cols]; rows];
            for a in 0..rows {
                for b in 0..cols {
                    if prod[a][b].is_zero() {
                        continue;
                    }
                    for (m, cm) in coefs.iter().enumerate() {
                        if cm.is_zero() {
                            break;
                        }
                        let na = a + m * n;
                        let nb = b + m * d;
                        if na >= rows || nb >= cols {
                            break;
                        }
                        next[na][nb] += &prod[a][b] * cm;
                    }
                }
            }
            prod = next;
        }
    }
    Ok(dims)
}

/// Total dimension of each degree `0..=max_deg` over word lengths `<= max_len`.
pub fn pbw_dimensions_by_degree(
    set: &GeneratorSet,
    max_len: usize,
    max_deg: i32,
) -> Result<Vec<usize>> {
    let dims = pbw_dimensions(set, max_len, max_deg)?;
    let cols = (max_deg.max(0) as usize) + 1;
    Ok((0..cols).map(|d| dims.iter().map(|row| row[d]).sum()).collect())
}
