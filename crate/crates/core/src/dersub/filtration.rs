use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::dgl::Derivation;
use crate::error::{Error, Result};
use crate::glie::{FreeLie, GeneratorSet, LieElement};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Scalar;

/// A graded subspace of `V`, in generator coordinates.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    vectors: Vec<SparseVec<usize>>,
    ech: Echelon<usize>,
}

fn vector_degree(set: &GeneratorSet, v: &[(usize, Scalar)]) -> Option<i32> {
    let mut it = v.iter().map(|(g, _)| set.degree(*g));
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

impl GradedSubspace {
    pub fn zero() -> Self {
        GradedSubspace {
            vectors: Vec::new(),
            ech: Echelon::new(),
        }
    }

    /// Span of the listed generators.
    pub fn coordinate(indices: impl IntoIterator<Item = usize>) -> Self {
        let vectors: Vec<SparseVec<usize>> = indices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|g| vec![(g, Scalar::one())])
            .collect();
        Self::unchecked(vectors)
    }

    pub fn full(set: &GeneratorSet) -> Self {
        Self::coordinate(0..set.len())
    }

    /// Span of homogeneous vectors; rejects vectors mixing degrees.
    pub fn new(set: &GeneratorSet, vectors: Vec<SparseVec<usize>>) -> Result<Self> {
        for v in &vectors {
            if v.iter().any(|(g, _)| *g >= set.len()) {
                return Err(Error::InvalidFiltration("generator index out of range".into()));
            }
            if !v.is_empty() && vector_degree(set, v).is_none() {
                return Err(Error::InvalidFiltration(
                    "subspace vectors must be homogeneous".into(),
                ));
            }
        }
        Ok(Self::unchecked(vectors))
    }

    fn unchecked(vectors: Vec<SparseVec<usize>>) -> Self {
        let mut ech = Echelon::new();
        let mut kept = Vec::new();
        for v in vectors {
            if ech.insert(&v) {
                kept.push(v);
            }
        }
        GradedSubspace { vectors: kept, ech }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// A basis of the subspace.
    pub fn vectors(&self) -> &[SparseVec<usize>] {
        &self.vectors
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.ech.contains(v)
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.vectors.iter().all(|v| other.contains(v))
    }

    pub fn same_as(&self, other: &GradedSubspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// The degree-`l` part.
    pub fn degree_part(&self, set: &GeneratorSet, l: i32) -> GradedSubspace {
        Self::unchecked(
            self.vectors
                .iter()
                .filter(|v| vector_degree(set, v) == Some(l))
                .cloned()
                .collect(),
        )
    }

    pub fn sum(&self, other: &GradedSubspace) -> GradedSubspace {
        Self::unchecked(self.vectors.iter().chain(other.vectors.iter()).cloned().collect())
    }

    /// Whether every generator in the span of a basis vector is itself a member.
    fn is_coordinate(&self) -> bool {
        let singles: Vec<usize> = self
            .vectors
            .iter()
            .flat_map(|v| v.iter().map(|(g, _)| *g))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        singles.len() == self.dim()
    }
}

/// Generators of degree greater than `l`.
pub fn above_degree(set: &GeneratorSet, l: i32) -> GradedSubspace {
    GradedSubspace::coordinate((0..set.len()).filter(|&g| set.degree(g) > l))
}

/// A finite decreasing filtration `V = V^0 ⊋ V^1 ⊋ ... ⊋ V^q = 0`.
#[derive(Clone, Debug)]
pub struct FiltrationOfV {
    chain: Vec<GradedSubspace>,
}

impl FiltrationOfV {
    /// Validates a chain starting at `V` and ending at `0`.
    pub fn new(set: &GeneratorSet, chain: Vec<GradedSubspace>) -> Result<Self> {
        if chain.len() < 2 {
            return Err(Error::InvalidFiltration("need at least V and 0".into()));
        }
        if !chain[0].same_as(&GradedSubspace::full(set)) {
            return Err(Error::InvalidFiltration("first step must be V".into()));
        }
        if !chain[chain.len() - 1].is_zero() {
            return Err(Error::InvalidFiltration("last step must be 0".into()));
        }
        for w in chain.windows(2) {
            if !w[1].is_subspace_of(&w[0]) || w[1].dim() == w[0].dim() {
                return Err(Error::InvalidFiltration("chain must strictly decrease".into()));
            }
        }
        Ok(FiltrationOfV { chain })
    }

    /// `V ⊃ 0`.
    pub fn trivial(set: &GeneratorSet) -> Self {
        if set.is_empty() {
            return FiltrationOfV {
                chain: vec![GradedSubspace::zero(), GradedSubspace::zero()],
            };
        }
        FiltrationOfV {
            chain: vec![GradedSubspace::full(set), GradedSubspace::zero()],
        }
    }

    /// Filtration by generator subsets: `steps` lists `V^1, ..., V^{q-1}`.
    pub fn coordinate(set: &GeneratorSet, steps: &[Vec<usize>]) -> Result<Self> {
        let mut chain = vec![GradedSubspace::full(set)];
        for s in steps {
            if s.iter().any(|&g| g >= set.len()) {
                return Err(Error::InvalidFiltration("generator index out of range".into()));
            }
            chain.push(GradedSubspace::coordinate(s.iter().copied()));
        }
        chain.push(GradedSubspace::zero());
        FiltrationOfV::new(set, chain)
    }

    /// `q`, the number of proper steps.
    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn steps(&self) -> &[GradedSubspace] {
        &self.chain
    }

    pub fn step(&self, i: usize) -> &GradedSubspace {
        let last = self.chain.len() - 1;
        &self.chain[i.min(last)]
    }

    /// For coordinate filtrations, the largest `i` with `v_g ∈ V^i`.
    pub fn generator_levels(&self, set: &GeneratorSet) -> Result<Vec<usize>> {
        if !self.chain.iter().all(|s| s.is_coordinate()) {
            return Err(Error::InvalidFiltration(
                "levels are defined here only for coordinate filtrations".into(),
            ));
        }
        Ok((0..set.len())
            .map(|g| {
                let unit = vec![(g, Scalar::one())];
                (0..self.chain.len())
                    .rev()
                    .find(|&i| self.chain[i].contains(&unit))
                    .unwrap_or(0)
            })
            .collect())
    }
}

/// The refined chain `𝒱^•` built from a filtration and the top degree.
#[derive(Clone, Debug)]
pub struct RefinedFiltration {
    chain: Vec<GradedSubspace>,
}

impl RefinedFiltration {
    pub fn steps(&self) -> &[GradedSubspace] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// `𝒱^i_ℓ ≠ 0` implies `V_{>ℓ} ⊂ 𝒱^{i+1}`.
    pub fn satisfies_property(&self, set: &GeneratorSet) -> bool {
        let degrees: BTreeSet<i32> = (0..set.len()).map(|g| set.degree(g)).collect();
        for i in 0..self.chain.len().saturating_sub(1) {
            for &l in &degrees {
                if !self.chain[i].degree_part(set, l).is_zero()
                    && !above_degree(set, l).is_subspace_of(&self.chain[i + 1])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Interleaves the filtration with the degree grading, collapsing repeated steps.
pub fn refine_filtration(set: &GeneratorSet, f: &FiltrationOfV, m: i32) -> Result<RefinedFiltration> {
    if let Some(top) = set.top_degree() {
        if top > m {
            return Err(Error::InvalidFiltration(format!(
                "generators reach degree {top}, above the bound {m}"
            )));
        }
    }
    let lo = set.min_degree().unwrap_or(0);
    let q = f.length();
    let mut chain = vec![GradedSubspace::full(set)];
    for l in lo..=m {
        let rest = above_degree(set, l);
        for i in 1..q {
            chain.push(f.step(i).degree_part(set, l).sum(&rest));
        }
        chain.push(rest);
    }
    let mut out: Vec<GradedSubspace> = Vec::new();
    for s in chain {
        if out.last().is_none_or(|p| !p.same_as(&s)) {
            out.push(s);
        }
    }
    Ok(RefinedFiltration { chain: out })
}

/// Position `t = (n-1)nq/2 + p + 1` of `F^{n,p}` in the filtration of `L`.
pub fn filtration_position(n: usize, p: usize, q: usize) -> Result<usize> {
    if n == 0 || q == 0 || p >= n * q {
        return Err(Error::OutOfRange(format!(
            "need n >= 1, q >= 1 and p < nq, got n={n} p={p} q={q}"
        )));
    }
    Ok((n - 1) * n * q / 2 + p + 1)
}

/// Linear part of a derivation, `matrix[g]` = image of generator `g` in `V`.
pub fn linear_part(theta: &Derivation) -> Vec<SparseVec<usize>> {
    theta
        .values()
        .iter()
        .map(|v| {
            let mut row: SparseVec<usize> = v
                .terms()
                .filter(|(w, _)| w.len() == 1)
                .map(|(w, c)| (usize::from(w[0]), c.clone()))
                .collect();
            row.sort_by_key(|p| p.0);
            row
        })
        .collect()
}

pub(crate) fn apply_linear(lin: &[SparseVec<usize>], v: &[(usize, Scalar)]) -> SparseVec<usize> {
    let mut acc: alloc::collections::BTreeMap<usize, Scalar> = alloc::collections::BTreeMap::new();
    for (g, c) in v {
        for (h, x) in &lin[*g] {
            *acc.entry(*h).or_insert_with(Scalar::zero) += c * x;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `θ_*(S^i) ⊂ S^{i+1}` along a chain whose last step is zero.
pub fn linear_part_raises(theta: &Derivation, chain: &[GradedSubspace]) -> bool {
    let lin = linear_part(theta);
    let zero = GradedSubspace::zero();
    (0..chain.len()).all(|i| {
        let next = chain.get(i + 1).unwrap_or(&zero);
        chain[i]
            .vectors()
            .iter()
            .all(|v| next.contains(&apply_linear(&lin, v)))
    })
}

/// Position of the smallest `F^t` containing `e`, for coordinate filtrations.
/// `None` for zero.
pub fn element_level(f: &FiltrationOfV, e: &LieElement) -> Result<Option<usize>> {
    let set = e.algebra().generators();
    let levels = f.generator_levels(set)?;
    let q = f.length();
    let mut best: Option<usize> = None;
    for (w, _) in e.terms() {
        let n = w.len();
        let s: usize = w.iter().map(|&l| levels[usize::from(l)]).sum();
        let t = filtration_position(n, s.min(n * q - 1), q)?;
        best = Some(best.map_or(t, |b| b.min(t)));
    }
    Ok(best)
}

/// Largest `n` such that `θ(F^r) ⊂ F^{n+r}` on every basis element of word
/// length at most `max_len` in the window (`F^0 = L`). `None` when no basis
/// element has nonzero image.
pub fn derivation_level(
    f: &FiltrationOfV,
    theta: &Derivation,
    max_len: usize,
) -> Result<Option<i64>> {
    let alg: &FreeLie = theta.algebra();
    let set = alg.generators();
    let mut best: Option<i64> = None;
    let lo = set.min_degree().unwrap_or(0).max(0);
    for d in lo..=set.max_degree() {
        for n in 1..=max_len.min(set.max_word_length()) {
            for b in alg.basis(n, d) {
                let img = theta.evaluate(&b)?;
                let (Some(ti), Some(tb)) = (element_level(f, &img)?, element_level(f, &b)?) else {
                    continue;
                };
                let diff = ti as i64 - tb as i64;
                best = Some(best.map_or(diff, |x| x.min(diff)));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        assert_eq!(filtration_position(1, 0, 4).unwrap(), 1);
        assert_eq!(filtration_position(2, 0, 3).unwrap(), 4);
        assert_eq!(filtration_position(3, 2, 2).unwrap(), 9);
        assert!(filtration_position(2, 6, 3).is_err());
    }

    #[test]
    fn refine_trivial() {
        let set = GeneratorSet::from_pairs(&[("x", 1), ("y", 3)], None).unwrap();
        let f = FiltrationOfV::trivial(&set);
        let r = refine_filtration(&set, &f, 3).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.steps()[1].same_as(&GradedSubspace::coordinate([1])));
        assert!(r.satisfies_property(&set));

        let set = GeneratorSet::from_pairs(&[("x", 4)], None).unwrap();
        let r = refine_filtration(&set, &FiltrationOfV::trivial(&set), 4).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn rejects_non_chains() {
        let set = GeneratorSet::from_pairs(&[("x", 1), ("y", 3)], None).unwrap();
        assert!(FiltrationOfV::coordinate(&set, &[vec![0], vec![1]]).is_err());
        assert!(FiltrationOfV::coordinate(&set, &[vec![0, 1]]).is_err());
        assert!(FiltrationOfV::coordinate(&set, &[vec![1]]).is_ok());
    }
}
