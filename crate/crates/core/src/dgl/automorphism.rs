use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::derivation::Derivation;
use crate::error::{Error, Result};
use crate::glie::{add_term, FreeLie, LieElement, Terms};
use crate::linalg;
use crate::scalar::Scalar;

/// A degree-preserving automorphism, determined by its values on generators.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    alg: FreeLie,
    values: Vec<LieElement>,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = self.alg.generators();
        f.write_str("Automorphism(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", set.name(i), v)?;
        }
        f.write_str(")")
    }
}

impl Automorphism {
    pub fn identity(alg: &FreeLie) -> Self {
        Automorphism {
            alg: alg.clone(),
            values: (0..alg.rank()).map(|i| alg.generator(i)).collect(),
        }
    }

    /// Checks degrees and invertibility of the linear part.
    pub fn new(alg: &FreeLie, values: Vec<LieElement>) -> Result<Self> {
        if values.len() != alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: alg.rank(),
                found: values.len(),
            });
        }
        let set = alg.generators();
        for (i, v) in values.iter().enumerate() {
            alg.check(v.algebra())?;
            if !v.is_homogeneous_of(set.degree(i)) {
                return Err(Error::BadValueDegree {
                    generator: set.name(i).to_string(),
                    expected: set.degree(i),
                    found: v.degree().unwrap_or(0),
                });
            }
        }
        let phi = Automorphism {
            alg: alg.clone(),
            values,
        };
        if linalg::inverse(&phi.linear_matrix()).is_none() {
            return Err(Error::Singular("linear part is not invertible".to_string()));
        }
        Ok(phi)
    }

    /// Listed values, identity on the other generators.
    pub fn from_values(alg: &FreeLie, values: &[(&str, LieElement)]) -> Result<Self> {
        let mut all = Automorphism::identity(alg).values;
        for (name, v) in values {
            let i = alg
                .generators()
                .index_of(name)
                .ok_or_else(|| Error::InvalidGenerators(name.to_string()))?;
            all[i] = v.clone();
        }
        Automorphism::new(alg, all)
    }

    /// Extension of a linear map on generators; `matrix[i][j]` is the
    /// coefficient of generator `j` in the image of generator `i`.
    pub fn linear(alg: &FreeLie, matrix: &[Vec<Scalar>]) -> Result<Self> {
        let n = alg.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.len(),
            });
        }
        let set = alg.generators();
        let mut values = Vec::with_capacity(n);
        for (i, row) in matrix.iter().enumerate() {
            let mut acc = alg.zero();
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if set.degree(i) != set.degree(j) {
                    return Err(Error::WrongDegree {
                        expected: set.degree(i),
                        found: set.degree(j),
                    });
                }
                acc = acc.add_scaled(c, &alg.generator(j))?;
            }
            values.push(acc);
        }
        Automorphism::new(alg, values)
    }

    pub fn algebra(&self) -> &FreeLie {
        &self.alg
    }

    pub fn value(&self, generator: usize) -> &LieElement {
        &self.values[generator]
    }

    pub fn values(&self) -> &[LieElement] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, v)| *v == self.alg.generator(i))
    }

    /// Coefficients of generators in the images of generators.
    pub fn linear_matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.alg.rank();
        self.values
            .iter()
            .map(|v| {
                let mut row = vec![Scalar::zero(); n];
                for (w, c) in v.terms() {
                    if w.len() == 1 {
                        row[usize::from(w[0])] = c.clone();
                    }
                }
                row
            })
            .collect()
    }

    /// Whether `φ - id` raises word length on generators.
    pub fn is_unipotent(&self) -> bool {
        self.values.iter().enumerate().all(|(i, v)| {
            (v - &self.alg.generator(i))
                .min_word_length()
                .is_none_or(|m| m >= 2)
        })
    }

    /// Applies the algebra morphism.
    pub fn apply(&self, e: &LieElement) -> Result<LieElement> {
        self.alg.check(e.algebra())?;
        let set = self.alg.generators();
        let mut out = Terms::new();
        let mut dropped = false;
        for (w, c) in e.terms() {
            let mut acc = Terms::new();
            acc.insert(Vec::new(), c.clone());
            for &letter in w {
                let img = &self.values[usize::from(letter)];
                let mut next = Terms::new();
                for (u, cu) in &acc {
                    for (v, cv) in img.terms() {
                        let mut uv = Vec::with_capacity(u.len() + v.len());
                        uv.extend_from_slice(u);
                        uv.extend_from_slice(v);
                        if !set.in_window(&uv) {
                            dropped = true;
                            continue;
                        }
                        add_term(&mut next, uv, cu * cv);
                    }
                }
                acc = next;
            }
            for (w, x) in acc {
                add_term(&mut out, w, x);
            }
        }
        let truncated = dropped || e.is_truncated() || self.values.iter().any(|v| v.is_truncated());
        Ok(self.alg.element(out, truncated))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.alg.check(&other.alg)?;
        let values = other
            .values
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Automorphism {
            alg: self.alg.clone(),
            values,
        })
    }

    /// Inverse within the window, by successive correction of the inverse
    /// of the linear part.
    pub fn inverse(&self) -> Result<Automorphism> {
        let inv = linalg::inverse(&self.linear_matrix())
            .ok_or_else(|| Error::Singular("linear part is not invertible".to_string()))?;
        let alpha = Automorphism::linear(&self.alg, &inv)?;
        let mut psi = alpha.clone();
        let rounds = self.alg.generators().max_word_length() + 2;
        for _ in 0..rounds {
            let mut done = true;
            let mut values = Vec::with_capacity(psi.values.len());
            for (i, pv) in psi.values.iter().enumerate() {
                let err = &self.apply(pv)? - &self.alg.generator(i);
                if err.is_zero() {
                    values.push(pv.clone());
                } else {
                    done = false;
                    values.push(pv - &alpha.apply(&err)?);
                }
            }
            if done {
                return Ok(psi);
            }
            psi = Automorphism {
                alg: self.alg.clone(),
                values,
            };
        }
        Err(Error::NonTerminating("automorphism inverse".to_string()))
    }

    /// `φ ∘ θ ∘ φ^{-1}`.
    pub fn conjugate(&self, theta: &Derivation) -> Result<Derivation> {
        let inv = self.inverse()?;
        self.conjugate_with(&inv, theta)
    }

    pub(crate) fn conjugate_with(&self, inv: &Automorphism, theta: &Derivation) -> Result<Derivation> {
        self.alg.check(theta.algebra())?;
        let values = inv
            .values
            .iter()
            .map(|v| self.apply(&theta.evaluate(v)?))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(&self.alg, theta.degree(), values)
    }

    /// Whether both sides of `η∘φ = φ∘δ` agree on every generator.
    pub fn intertwines(&self, delta: &Derivation, eta: &Derivation) -> Result<bool> {
        for i in 0..self.alg.rank() {
            let lhs = eta.evaluate(&self.values[i])?;
            let rhs = self.apply(&delta.evaluate(&self.alg.generator(i))?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Automorphism {
    pub(crate) fn from_raw(alg: &FreeLie, values: Vec<LieElement>) -> Self {
        debug_assert_eq!(values.len(), alg.rank());
        Automorphism {
            alg: alg.clone(),
            values,
        }
    }

    pub fn scale_generators(alg: &FreeLie, scalars: &[Scalar]) -> Result<Self> {
        let n = alg.rank();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (i, s) in scalars.iter().enumerate().take(n) {
            m[i][i] = s.clone();
        }
        for (i, row) in m.iter_mut().enumerate().skip(scalars.len()) {
            row[i] = Scalar::one();
        }
        Automorphism::linear(alg, &m)
    }
}
