use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::glie::{add_term, FreeLie, LieElement, Terms, Word};
use crate::linalg::SparseVec;
use crate::scalar::{self, koszul_negative, Scalar};

/// A derivation of degree `k` stored by its values on the generators.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    alg: FreeLie,
    degree: i32,
    values: Vec<LieElement>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[{}]({})", self.degree, self)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self.alg.generators();
        let mut first = true;
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{} -> {}", set.name(i), v)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Derivation {
    pub fn zero(alg: &FreeLie, degree: i32) -> Self {
        Derivation {
            alg: alg.clone(),
            degree,
            values: (0..alg.rank()).map(|_| alg.zero()).collect(),
        }
    }

    /// Checks that every value is homogeneous of degree `|v| + k`.
    pub fn new(alg: &FreeLie, degree: i32, values: Vec<LieElement>) -> Result<Self> {
        if values.len() != alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: alg.rank(),
                found: values.len(),
            });
        }
        let set = alg.generators();
        for (i, v) in values.iter().enumerate() {
            alg.check(v.algebra())?;
            let expected = set.degree(i) + degree;
            if !v.is_homogeneous_of(expected) {
                return Err(Error::BadValueDegree {
                    generator: set.name(i).to_string(),
                    expected,
                    found: v.degree().unwrap_or(expected),
                });
            }
        }
        Ok(Derivation {
            alg: alg.clone(),
            degree,
            values,
        })
    }

    /// Derivation with the listed generator values and zero elsewhere.
    pub fn from_values(alg: &FreeLie, degree: i32, values: &[(&str, LieElement)]) -> Result<Self> {
        let mut all: Vec<LieElement> = (0..alg.rank()).map(|_| alg.zero()).collect();
        for (name, v) in values {
            let i = alg
                .generators()
                .index_of(name)
                .ok_or_else(|| Error::InvalidGenerators(name.to_string()))?;
            all[i] = v.clone();
        }
        Derivation::new(alg, degree, all)
    }

    pub fn algebra(&self) -> &FreeLie {
        &self.alg
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn value(&self, generator: usize) -> &LieElement {
        &self.values[generator]
    }

    pub fn values(&self) -> &[LieElement] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_truncated(&self) -> bool {
        self.values.iter().any(|v| v.is_truncated())
    }

    pub(crate) fn with_truncation(mut self) -> Self {
        if let Some(v) = self.values.first_mut() {
            v.truncated = true;
        }
        self
    }

    /// Values have word length at least `n` on every generator.
    pub fn raises_length_to(&self, n: usize) -> bool {
        self.values
            .iter()
            .all(|v| v.min_word_length().is_none_or(|m| m >= n))
    }

    /// Values lie in word length exactly 2.
    pub fn is_quadratic(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.terms().all(|(w, _)| w.len() == 2))
    }

    fn same(&self, other: &Derivation) -> Result<()> {
        self.alg.check(&other.alg)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Degree of a sum, letting a zero operand adopt the other's degree.
    fn sum_degree(&self, other: &Derivation) -> i32 {
        if self.is_zero() {
            other.degree
        } else {
            self.degree
        }
    }

    pub fn try_add(&self, other: &Derivation) -> Result<Derivation> {
        self.add_scaled(&Scalar::one(), other)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &Derivation) -> Result<Derivation> {
        self.same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add_scaled(c, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            alg: self.alg.clone(),
            degree: self.sum_degree(other),
            values,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            alg: self.alg.clone(),
            degree: self.degree,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// Leibniz extension to tensor words, with the window applied.
    pub(crate) fn apply_terms(&self, terms: &Terms) -> (Terms, bool) {
        let set = self.alg.generators();
        let k = i64::from(self.degree);
        let mut out = Terms::new();
        let mut dropped = false;
        for (w, c) in terms {
            let mut prefix_deg: i64 = 0;
            for j in 0..w.len() {
                let letter = usize::from(w[j]);
                let val = &self.values[letter];
                let neg = koszul_negative(k, prefix_deg);
                for (u, cu) in val.terms() {
                    let mut nw: Word = Vec::with_capacity(w.len() + u.len() - 1);
                    nw.extend_from_slice(&w[..j]);
                    nw.extend_from_slice(u);
                    nw.extend_from_slice(&w[j + 1..]);
                    if !set.in_window(&nw) {
                        dropped = true;
                        continue;
                    }
                    let coeff = c * cu;
                    add_term(&mut out, nw, if neg { -coeff } else { coeff });
                }
                prefix_deg += i64::from(set.degree(letter));
            }
        }
        (out, dropped)
    }

    /// The unique Leibniz extension evaluated on `e`.
    pub fn evaluate(&self, e: &LieElement) -> Result<LieElement> {
        self.alg.check(e.algebra())?;
        let (terms, dropped) = self.apply_terms(&e.terms);
        Ok(self
            .alg
            .element(terms, dropped || e.is_truncated() || self.is_truncated()))
    }

    /// Graded commutator `θ∘η - (-1)^{|θ||η|} η∘θ`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.alg.check(&other.alg)?;
        let neg = koszul_negative(i64::from(self.degree), i64::from(other.degree));
        let sign = if neg { Scalar::one() } else { -Scalar::one() };
        let mut values = Vec::with_capacity(self.values.len());
        for i in 0..self.values.len() {
            let a = self.evaluate(&other.values[i])?;
            let b = other.evaluate(&self.values[i])?;
            values.push(a.add_scaled(&sign, &b)?);
        }
        Ok(Derivation {
            alg: self.alg.clone(),
            degree: self.degree + other.degree,
            values,
        })
    }

    /// Composite `θ∘θ` on generators.
    pub fn square_on_generators(&self) -> Result<Vec<LieElement>> {
        self.values.iter().map(|v| self.evaluate(v)).collect()
    }

    /// Linear injective key for span computations: (generator, leading word).
    pub fn sparse_key(&self) -> SparseVec<(usize, Word)> {
        let mut out = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            for (w, c) in v.lead_projection() {
                out.push(((i, w), c));
            }
        }
        out
    }

    /// `ad_a` for an element `a` of the algebra.
    pub fn ad(a: &LieElement) -> Result<Derivation> {
        let alg = a.algebra().clone();
        let degree = a.degree().unwrap_or(0);
        if !a.is_homogeneous_of(degree) {
            return Err(Error::NonHomogeneous);
        }
        let values = (0..alg.rank())
            .map(|i| a.bracket(&alg.generator(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            alg,
            degree,
            values,
        })
    }
}

/// `[θ, η]` in the derivation algebra.
pub fn der_bracket(theta: &Derivation, eta: &Derivation) -> Result<Derivation> {
    theta.bracket(eta)
}

/// `Dθ = [d, θ] = d∘θ - (-1)^{|θ|} θ∘d`.
pub fn boundary(d: &Derivation, theta: &Derivation) -> Result<Derivation> {
    d.bracket(theta)
}

pub fn evaluate(theta: &Derivation, e: &LieElement) -> Result<LieElement> {
    theta.evaluate(e)
}

/// Whether a degree −1 derivation squares to zero.
pub fn is_differential(delta: &Derivation) -> Result<bool> {
    if delta.degree() != -1 {
        return Err(Error::WrongDegree {
            expected: -1,
            found: delta.degree(),
        });
    }
    Ok(delta.square_on_generators()?.iter().all(|v| v.is_zero()))
}

/// A square-zero derivation of degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential(Derivation);

impl Differential {
    pub fn new(delta: Derivation) -> Result<Self> {
        if is_differential(&delta)? {
            Ok(Differential(delta))
        } else {
            Err(Error::ConstraintViolation(
                "derivation does not square to zero".to_string(),
            ))
        }
    }

    pub fn zero(alg: &FreeLie) -> Self {
        Differential(Derivation::zero(alg, -1))
    }

    pub fn derivation(&self) -> &Derivation {
        &self.0
    }

    pub fn into_derivation(self) -> Derivation {
        self.0
    }

    /// Values have word length at least 2.
    pub fn is_decomposable(&self) -> bool {
        self.0.raises_length_to(2)
    }

    pub fn is_quadratic(&self) -> bool {
        self.0.is_quadratic()
    }
}

impl core::ops::Deref for Differential {
    type Target = Derivation;
    fn deref(&self) -> &Derivation {
        &self.0
    }
}

/// `d + δ` for a perturbation `δ` in the derivation algebra.
pub fn perturb(d: &Derivation, delta: &Derivation) -> Result<Derivation> {
    if delta.degree() != -1 && !delta.is_zero() {
        return Err(Error::WrongDegree {
            expected: -1,
            found: delta.degree(),
        });
    }
    d.try_add(delta)
}

/// Maurer-Cartan condition in the derivation algebra with differential `[d,-]`:
/// `Dδ + ½[δ,δ] = 0`.
pub fn mc_check(d: &Derivation, delta: &Derivation) -> Result<bool> {
    if delta.degree() != -1 && !delta.is_zero() {
        return Err(Error::WrongDegree {
            expected: -1,
            found: delta.degree(),
        });
    }
    let dd = boundary(d, delta)?;
    let half = scalar::ratio(1, 2);
    let sq = delta.bracket(delta)?;
    Ok(dd.add_scaled(&half, &sq)?.is_zero())
}

fn check_degree_minus_one(a: &LieElement) -> Result<()> {
    if a.is_homogeneous_of(-1) {
        Ok(())
    } else {
        Err(Error::WrongDegree {
            expected: -1,
            found: a.degree().unwrap_or(0),
        })
    }
}

/// `d + ad_a` for an element `a` of degree −1.
pub fn perturb_element(d: &Derivation, a: &LieElement) -> Result<Derivation> {
    check_degree_minus_one(a)?;
    let ad = Derivation::ad(a)?;
    d.try_add(&ad)
}

/// `da + ½[a,a] = 0` for an element of degree −1.
pub fn mc_check_element(d: &Derivation, a: &LieElement) -> Result<bool> {
    check_degree_minus_one(a)?;
    let da = d.evaluate(a)?;
    let sq = a.bracket(a)?;
    Ok(da.add_scaled(&scalar::ratio(1, 2), &sq)?.is_zero())
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
    fn sl2_relations() {
        let l = alg(&[("x", 2), ("y", 2)]);
        let x = l.gen("x").unwrap();
        let y = l.gen("y").unwrap();
        let t1 = Derivation::from_values(&l, 0, &[("x", x.clone()), ("y", -&y)]).unwrap();
        let t2 = Derivation::from_values(&l, 0, &[("x", y.clone())]).unwrap();
        let t3 = Derivation::from_values(&l, 0, &[("y", x.clone())]).unwrap();
        assert_eq!(t1.bracket(&t2).unwrap(), t2.scale(&int(-2)));
        assert_eq!(t1.bracket(&t3).unwrap(), t3.scale(&int(2)));
        assert_eq!(t2.bracket(&t3).unwrap(), t1.scale(&int(-1)));
        let xy = x.bracket(&y).unwrap();
        assert_eq!(t2.evaluate(&xy).unwrap(), y.bracket(&y).unwrap());
    }

    #[test]
    fn differential_checks() {
        let l = alg(&[("x", 3), ("y", 5), ("z", 12), ("u", 14), ("v", 18)]);
        let g = |n: &str| l.gen(n).unwrap();
        let dv = &g("x").bracket(&g("u")).unwrap() + &g("y").bracket(&g("z")).unwrap();
        let d = Derivation::from_values(&l, -1, &[("v", dv)]).unwrap();
        assert!(is_differential(&d).unwrap());
        assert!(is_differential(&Derivation::zero(&l, -1)).unwrap());
        assert!(is_differential(&Derivation::zero(&l, 0)).is_err());
        assert!(Differential::new(d).unwrap().is_quadratic());
    }

    #[test]
    fn rejects_wrong_value_degree() {
        let l = alg(&[("x", 2), ("y", 3)]);
        let y = l.gen("y").unwrap();
        assert!(Derivation::from_values(&l, 0, &[("x", y)]).is_err());
    }
}
