use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::filtration::{linear_part_raises, FiltrationOfV, GradedSubspace};
use crate::dgl::Derivation;
use crate::error::{Error, Result};
use crate::glie::{FreeLie, Word};
use crate::linalg::{nullspace, Span};
use crate::scalar::Scalar;

/// Which subspace of `Der L` a basis describes.
#[derive(Clone, Debug)]
pub enum DerKind {
    Full,
    /// Đer with respect to a filtration of `V`.
    Dder(FiltrationOfV),
    /// 𝒟er: values of word length ≥ 3 in negative degrees, Đer (trivial
    /// filtration) otherwise.
    ScriptDer,
    /// Derivations raising the weight; one weight per generator.
    WeightRaising(Vec<i64>),
}

impl DerKind {
    pub fn name(&self) -> &'static str {
        match self {
            DerKind::Full => "Der",
            DerKind::Dder(_) => "Dder",
            DerKind::ScriptDer => "ScriptDer",
            DerKind::WeightRaising(_) => "WeightRaisingDer",
        }
    }
}

/// An explicit basis of one degree of a derivation subspace.
#[derive(Clone, Debug)]
pub struct DerSubspaceBasis {
    pub kind: DerKind,
    pub degree: i32,
    pub basis: Vec<Derivation>,
}

impl DerSubspaceBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn span(&self) -> Span<(usize, Word)> {
        let keys: Vec<_> = self.basis.iter().map(|b| b.sparse_key()).collect();
        Span::from_vectors(&keys)
    }

    pub fn contains(&self, theta: &Derivation) -> bool {
        (theta.is_zero() || theta.degree() == self.degree) && self.span().contains(&theta.sparse_key())
    }

    /// Coordinates of `theta` in the basis, when it lies in the span.
    pub fn coordinates(&self, theta: &Derivation) -> Option<Vec<Scalar>> {
        if !theta.is_zero() && theta.degree() != self.degree {
            return None;
        }
        self.span().coordinates(&theta.sparse_key())
    }

    pub fn combine(&self, coords: &[Scalar]) -> Result<Derivation> {
        if coords.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                found: coords.len(),
            });
        }
        let alg = match self.basis.first() {
            Some(b) => b.algebra().clone(),
            None => return Err(Error::DimensionMismatch { expected: 0, found: 0 }),
        };
        let mut acc = Derivation::zero(&alg, self.degree);
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = acc.add_scaled(c, b)?;
        }
        Ok(acc)
    }
}

fn check_window(alg: &FreeLie, k: i32) -> Result<()> {
    let set = alg.generators();
    for g in 0..set.len() {
        let d = set.degree(g) + k;
        if d > set.max_degree() {
            return Err(Error::WindowInsufficient(format!(
                "values on `{}` reach degree {}, window stops at {}",
                set.name(g),
                d,
                set.max_degree()
            )));
        }
        if let Some(m) = set.min_degree().filter(|&m| m > 0) {
            let len = (d.max(0) / m) as usize;
            if len > set.max_word_length() {
                return Err(Error::WindowInsufficient(format!(
                    "values on `{}` need word length {}",
                    set.name(g),
                    len
                )));
            }
        }
    }
    Ok(())
}

/// Derivations sending one generator to one basis element, filtered.
fn single_value_basis(
    alg: &FreeLie,
    k: i32,
    keep: impl Fn(usize, usize, &crate::glie::BasisElement) -> bool,
) -> Result<Vec<Derivation>> {
    check_window(alg, k)?;
    let set = alg.generators();
    let mut out = Vec::new();
    for g in 0..set.len() {
        let d = set.degree(g) + k;
        if d < set.min_degree().unwrap_or(0) {
            continue;
        }
        for n in alg.lengths_in_degree(d) {
            let cell = alg.basis_cell(n, d);
            for b in cell.elements.iter() {
                if !keep(g, n, b) {
                    continue;
                }
                let mut values: Vec<_> = (0..set.len()).map(|_| alg.zero()).collect();
                values[g] = b.element.clone();
                out.push(Derivation::new(alg, k, values)?);
            }
        }
    }
    Ok(out)
}

/// Basis of `Der_k L` within the window.
pub fn full_der_basis(alg: &FreeLie, k: i32) -> Result<Vec<Derivation>> {
    single_value_basis(alg, k, |_, _, _| true)
}

/// Derivations of degree `k` with values of word length at least `min_len`.
pub fn decomposable_basis(alg: &FreeLie, k: i32, min_len: usize) -> Result<Vec<Derivation>> {
    single_value_basis(alg, k, |_, n, _| n >= min_len)
}

fn annihilator(r: usize, s: &GradedSubspace) -> Vec<Vec<Scalar>> {
    let rows: Vec<Vec<Scalar>> = s
        .vectors()
        .iter()
        .map(|v| {
            let mut row = vec![Scalar::zero(); r];
            for (g, c) in v {
                row[*g] = c.clone();
            }
            row
        })
        .collect();
    nullspace(rows, r)
}

/// Linear derivations `θ` of degree `k` (values in `V`) with
/// `θ(S^i) ⊂ S^{i+1}` along the chain.
pub fn chain_linear_basis(alg: &FreeLie, chain: &[GradedSubspace], k: i32) -> Result<Vec<Derivation>> {
    let set = alg.generators();
    let r = set.len();
    let unknowns: Vec<(usize, usize)> = (0..r)
        .flat_map(|g| (0..r).map(move |h| (g, h)))
        .filter(|&(g, h)| set.degree(h) == set.degree(g) + k)
        .collect();
    let mut constraints: Vec<Vec<Scalar>> = Vec::new();
    let zero = GradedSubspace::zero();
    for i in 0..chain.len() {
        let next = chain.get(i + 1).unwrap_or(&zero);
        let ann = annihilator(r, next);
        for s in chain[i].vectors() {
            for f in &ann {
                let row: Vec<Scalar> = unknowns
                    .iter()
                    .map(|&(g, h)| {
                        let sg = s
                            .iter()
                            .find(|(x, _)| *x == g)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(Scalar::zero);
                        sg * &f[h]
                    })
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    constraints.push(row);
                }
            }
        }
    }
    let sols = nullspace(constraints, unknowns.len());
    let mut out = Vec::with_capacity(sols.len());
    for sol in sols {
        let mut values: Vec<_> = (0..r).map(|_| alg.zero()).collect();
        for (c, &(g, h)) in sol.iter().zip(&unknowns) {
            if !c.is_zero() {
                values[g] = values[g].add_scaled(c, &alg.generator(h))?;
            }
        }
        out.push(Derivation::new(alg, k, values)?);
    }
    Ok(out)
}

/// `{θ ∈ Der_k : θ_*(S^i) ⊂ S^{i+1}}` along a chain ending at zero.
pub fn chain_der_basis(alg: &FreeLie, chain: &[GradedSubspace], k: i32) -> Result<Vec<Derivation>> {
    let mut out = chain_linear_basis(alg, chain, k)?;
    out.extend(decomposable_basis(alg, k, 2)?);
    Ok(out)
}

/// Đer_k L by the degree trichotomy.
pub fn dder_basis(alg: &FreeLie, f: &FiltrationOfV, k: i32) -> Result<DerSubspaceBasis> {
    let basis = if k > 0 {
        full_der_basis(alg, k)?
    } else if k == 0 {
        chain_der_basis(alg, f.steps(), 0)?
    } else {
        decomposable_basis(alg, k, 2)?
    };
    Ok(DerSubspaceBasis {
        kind: DerKind::Dder(f.clone()),
        degree: k,
        basis,
    })
}

/// 𝒟er_k L.
pub fn sder_basis(alg: &FreeLie, k: i32) -> Result<DerSubspaceBasis> {
    let basis = if k < 0 {
        decomposable_basis(alg, k, 3)?
    } else {
        dder_basis(alg, &FiltrationOfV::trivial(alg.generators()), k)?.basis
    };
    Ok(DerSubspaceBasis {
        kind: DerKind::ScriptDer,
        degree: k,
        basis,
    })
}

fn word_weight(weights: &[i64], w: &[u16]) -> i64 {
    w.iter().map(|&l| weights[usize::from(l)]).sum()
}

/// Derivations of degree `k` raising the given generator weights.
pub fn weight_raising_der_basis(alg: &FreeLie, weights: &[i64], k: i32) -> Result<DerSubspaceBasis> {
    if weights.len() != alg.rank() {
        return Err(Error::DimensionMismatch {
            expected: alg.rank(),
            found: weights.len(),
        });
    }
    let basis = single_value_basis(alg, k, |g, _, b| {
        word_weight(weights, &b.leading_word()) > weights[g]
    })?;
    Ok(DerSubspaceBasis {
        kind: DerKind::WeightRaising(weights.to_vec()),
        degree: k,
        basis,
    })
}

/// Basis of any kind.
pub fn der_basis(alg: &FreeLie, kind: &DerKind, k: i32) -> Result<DerSubspaceBasis> {
    match kind {
        DerKind::Full => Ok(DerSubspaceBasis {
            kind: DerKind::Full,
            degree: k,
            basis: full_der_basis(alg, k)?,
        }),
        DerKind::Dder(f) => dder_basis(alg, f, k),
        DerKind::ScriptDer => sder_basis(alg, k),
        DerKind::WeightRaising(w) => weight_raising_der_basis(alg, w, k),
    }
}

/// The defining predicate of each kind.
pub fn membership(kind: &DerKind, theta: &Derivation) -> bool {
    if theta.is_zero() {
        return true;
    }
    let k = theta.degree();
    match kind {
        DerKind::Full => true,
        DerKind::Dder(f) => {
            if k > 0 {
                true
            } else if k == 0 {
                linear_part_raises(theta, f.steps())
            } else {
                theta.raises_length_to(2)
            }
        }
        DerKind::ScriptDer => {
            if k < 0 {
                theta.raises_length_to(3)
            } else {
                k > 0 || theta.raises_length_to(2)
            }
        }
        DerKind::WeightRaising(weights) => theta.values().iter().enumerate().all(|(g, v)| {
            v.terms().all(|(w, _)| word_weight(weights, w) > weights[g])
        }),
    }
}
