use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use spin::RwLock;

use super::basis::BasisCell;
use super::generators::GeneratorSet;
use crate::error::{Error, Result};
use crate::scalar::{koszul_negative, Scalar};

pub type Letter = u16;
/// A tensor word; lexicographic order with prefixes first.
pub type Word = Vec<Letter>;
pub(crate) type Terms = BTreeMap<Word, Scalar>;

pub(crate) fn add_term(terms: &mut Terms, word: Word, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    use alloc::collections::btree_map::Entry;
    match terms.entry(word) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

struct Inner {
    set: GeneratorSet,
    bases: RwLock<BTreeMap<(usize, i32), Arc<BasisCell>>>,
}

/// Handle on the free graded Lie algebra generated by a [`GeneratorSet`].
///
/// Cheap to clone. Basis cells are computed on first request and shared.
#[derive(Clone)]
pub struct FreeLie(Arc<Inner>);

impl fmt::Debug for FreeLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("FreeLie").field(&self.0.set).finish()
    }
}

impl PartialEq for FreeLie {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.set == other.0.set
    }
}

impl Eq for FreeLie {}

impl FreeLie {
    pub fn new(set: GeneratorSet) -> Self {
        FreeLie(Arc::new(Inner {
            set,
            bases: RwLock::new(BTreeMap::new()),
        }))
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.0.set
    }

    pub fn rank(&self) -> usize {
        self.0.set.len()
    }

    pub fn zero(&self) -> LieElement {
        LieElement {
            alg: self.clone(),
            terms: Terms::new(),
            truncated: false,
        }
    }

    pub fn generator(&self, index: usize) -> LieElement {
        let mut terms = Terms::new();
        let word: Word = alloc::vec![Letter::try_from(index).expect("generator index")];
        if self.0.set.in_window(&word) {
            terms.insert(word, Scalar::one());
        }
        LieElement {
            alg: self.clone(),
            terms,
            truncated: false,
        }
    }

    pub fn gen(&self, name: &str) -> Option<LieElement> {
        self.0.set.index_of(name).map(|i| self.generator(i))
    }

    pub(crate) fn cached_basis(&self, key: (usize, i32)) -> Option<Arc<BasisCell>> {
        self.0.bases.read().get(&key).cloned()
    }

    pub(crate) fn store_basis(
        &self,
        key: (usize, i32),
        basis: BasisCell,
    ) -> Arc<BasisCell> {
        let mut guard = self.0.bases.write();
        guard.entry(key).or_insert_with(|| Arc::new(basis)).clone()
    }

    pub(crate) fn check(&self, other: &FreeLie) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleAlgebra)
        }
    }

    /// Builds an element from raw tensor terms, applying the window.
    pub(crate) fn element(&self, terms: Terms, truncated: bool) -> LieElement {
        let set = &self.0.set;
        let mut dropped = false;
        let terms: Terms = terms
            .into_iter()
            .filter(|(w, c)| {
                let keep = set.in_window(w);
                if !keep && !c.is_zero() {
                    dropped = true;
                }
                keep && !c.is_zero()
            })
            .collect();
        LieElement {
            alg: self.clone(),
            terms,
            truncated: truncated || dropped,
        }
    }
}

/// An element of the free graded Lie algebra, stored through its image in
/// the tensor algebra. The term map is canonical: equal elements have equal
/// maps, and zero is the empty map.
#[derive(Clone)]
pub struct LieElement {
    pub(crate) alg: FreeLie,
    pub(crate) terms: Terms,
    pub(crate) truncated: bool,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl Eq for LieElement {}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement({})", self)
    }
}

impl LieElement {
    pub fn algebra(&self) -> &FreeLie {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether some terms were dropped by the window somewhere upstream.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[Letter]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    fn word_degree(&self, w: &[Letter]) -> i32 {
        self.alg.generators().word_degree(w)
    }

    /// Degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|w| self.word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Word length if homogeneous in length and nonzero.
    pub fn word_length(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn min_word_length(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, degree: i32) -> bool {
        self.terms.keys().all(|w| self.word_degree(w) == degree)
    }

    /// The part made of words of exactly this length.
    pub fn length_component(&self, n: usize) -> LieElement {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() == n)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        LieElement {
            alg: self.alg.clone(),
            terms,
            truncated: self.truncated,
        }
    }

    /// Splits into `(length, degree)` homogeneous components.
    pub fn components(&self) -> BTreeMap<(usize, i32), LieElement> {
        let mut out: BTreeMap<(usize, i32), Terms> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry((w.len(), self.word_degree(w)))
                .or_default()
                .insert(w.clone(), c.clone());
        }
        out.into_iter()
            .map(|(k, terms)| {
                (
                    k,
                    LieElement {
                        alg: self.alg.clone(),
                        terms,
                        truncated: self.truncated,
                    },
                )
            })
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        if c.is_zero() {
            let mut z = self.alg.zero();
            z.truncated = self.truncated;
            return z;
        }
        LieElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
            truncated: self.truncated,
        }
    }

    pub fn try_add(&self, other: &LieElement) -> Result<LieElement> {
        self.alg.check(&other.alg)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut terms, w.clone(), c.clone());
        }
        Ok(LieElement {
            alg: self.alg.clone(),
            terms,
            truncated: self.truncated || other.truncated,
        })
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &LieElement) -> Result<LieElement> {
        self.alg.check(&other.alg)?;
        let mut terms = self.terms.clone();
        if !c.is_zero() {
            for (w, x) in &other.terms {
                add_term(&mut terms, w.clone(), x * c);
            }
        }
        Ok(LieElement {
            alg: self.alg.clone(),
            terms,
            truncated: self.truncated || other.truncated,
        })
    }

    /// Graded bracket `[a, b] = ab - (-1)^{|a||b|} ba` computed in the tensor algebra.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        self.alg.check(&other.alg)?;
        let set = self.alg.generators();
        let mut terms = Terms::new();
        let mut dropped = false;
        for (u, cu) in &self.terms {
            let du = i64::from(set.word_degree(u));
            for (v, cv) in &other.terms {
                let dv = i64::from(set.word_degree(v));
                let mut uv = Vec::with_capacity(u.len() + v.len());
                uv.extend_from_slice(u);
                uv.extend_from_slice(v);
                if !set.in_window(&uv) {
                    dropped = true;
                    continue;
                }
                let mut vu = Vec::with_capacity(u.len() + v.len());
                vu.extend_from_slice(v);
                vu.extend_from_slice(u);
                let c = cu * cv;
                if koszul_negative(du, dv) {
                    add_term(&mut terms, vu, c.clone());
                } else {
                    add_term(&mut terms, vu, -c.clone());
                }
                add_term(&mut terms, uv, c);
            }
        }
        Ok(LieElement {
            alg: self.alg.clone(),
            terms,
            truncated: self.truncated || other.truncated || dropped,
        })
    }

    /// `ad_self^k (y)`.
    pub fn ad_pow(&self, k: usize, y: &LieElement) -> Result<LieElement> {
        let mut acc = y.clone();
        for _ in 0..k {
            acc = self.bracket(&acc)?;
        }
        Ok(acc)
    }
}

impl core::ops::Add for &LieElement {
    type Output = LieElement;
    /// Panics when the operands live in different algebras.
    fn add(self, rhs: &LieElement) -> LieElement {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl core::ops::Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        self.add_scaled(&-Scalar::one(), rhs)
            .expect("subtracting elements of different algebras")
    }
}

impl core::ops::Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&-Scalar::one())
    }
}

impl core::ops::Mul<&LieElement> for &Scalar {
    type Output = LieElement;
    fn mul(self, rhs: &LieElement) -> LieElement {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glie::GeneratorSet;
    use crate::scalar::int;

    fn alg(pairs: &[(&str, i32)]) -> FreeLie {
        FreeLie::new(GeneratorSet::from_pairs(pairs, None).unwrap())
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let l = alg(&[("x", 2), ("y", 2)]);
        let x = l.gen("x").unwrap();
        let y = l.gen("y").unwrap();
        assert!(x.bracket(&x).unwrap().is_zero());
        assert_eq!(x.bracket(&y).unwrap(), -&y.bracket(&x).unwrap());
    }

    #[test]
    fn odd_generator_self_bracket() {
        let l = alg(&[("x", 1)]);
        let x = l.gen("x").unwrap();
        let xx = x.bracket(&x).unwrap();
        assert_eq!(xx.coefficient(&[0, 0]), int(2));
        assert!(x.bracket(&xx).unwrap().is_zero());
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let a = alg(&[("x", 2)]);
        let b = alg(&[("x", 3)]);
        assert_eq!(
            a.gen("x").unwrap().bracket(&b.gen("x").unwrap()),
            Err(Error::IncompatibleAlgebra)
        );
    }

    #[test]
    fn window_truncation_is_flagged() {
        let set = GeneratorSet::from_pairs(
            &[("x", 2), ("y", 2)],
            Some(crate::glie::Window::degree(4)),
        )
        .unwrap();
        let l = FreeLie::new(set);
        let x = l.gen("x").unwrap();
        let y = l.gen("y").unwrap();
        let xy = x.bracket(&y).unwrap();
        assert!(!xy.is_truncated());
        let xxy = x.bracket(&xy).unwrap();
        assert!(xxy.is_zero());
        assert!(xxy.is_truncated());
    }
}
