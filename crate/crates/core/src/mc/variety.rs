use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::dersub::DerSubspaceBasis;
use crate::dgl::{is_differential, Derivation};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A polynomial of degree at most two in the MC coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub linear: BTreeMap<usize, Scalar>,
    /// Keys `(i, j)` with `i <= j`.
    pub quadratic: BTreeMap<(usize, usize), Scalar>,
}

impl Polynomial {
    pub fn is_zero(&self) -> bool {
        self.linear.is_empty() && self.quadratic.is_empty()
    }

    pub fn evaluate(&self, at: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, c) in &self.linear {
            acc += c * &at[*i];
        }
        for ((i, j), c) in &self.quadratic {
            acc += c * &at[*i] * &at[*j];
        }
        acc
    }

    fn add_linear(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.linear.entry(i).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.linear.remove(&i);
        }
    }

    fn add_quadratic(&mut self, i: usize, j: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = if i <= j { (i, j) } else { (j, i) };
        let e = self.quadratic.entry(key).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.quadratic.remove(&key);
        }
    }

    /// `c*x*y` terms joined by signs, quadratic part first.
    pub fn to_text(&self, variables: &[String]) -> String {
        use core::fmt::Write;
        use num_traits::Signed;
        let mut out = String::new();
        let mut terms: Vec<(Scalar, String)> = Vec::new();
        for ((i, j), c) in &self.quadratic {
            let mono = if i == j {
                alloc::format!("{}^2", variables[*i])
            } else {
                alloc::format!("{}*{}", variables[*i], variables[*j])
            };
            terms.push((c.clone(), mono));
        }
        for (i, c) in &self.linear {
            terms.push((c.clone(), variables[*i].clone()));
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        for (k, (c, mono)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            let _ = match (k == 0, neg) {
                (true, true) => out.write_str("-"),
                (true, false) => Ok(()),
                (false, true) => out.write_str(" - "),
                (false, false) => out.write_str(" + "),
            };
            if mag != scalar::one() {
                let _ = write!(out, "{}*", scalar::format(&mag));
            }
            out.push_str(mono);
        }
        out
    }
}

/// The MC equations with named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    pub variables: Vec<String>,
    pub polynomials: Vec<Polynomial>,
}

impl QuadraticSystem {
    pub fn is_identically_zero(&self) -> bool {
        self.polynomials.iter().all(|p| p.is_zero())
    }

    /// Nonzero polynomials only.
    pub fn equations(&self) -> impl Iterator<Item = &Polynomial> {
        self.polynomials.iter().filter(|p| !p.is_zero())
    }

    pub fn vanishes_at(&self, at: &[Scalar]) -> Result<bool> {
        if at.len() != self.variables.len() {
            return Err(Error::DimensionMismatch {
                expected: self.variables.len(),
                found: at.len(),
            });
        }
        Ok(self.polynomials.iter().all(|p| p.evaluate(at).is_zero()))
    }

    /// One nonzero polynomial per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in self.equations() {
            out.push_str(&p.to_text(&self.variables));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for QuadraticSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `M_{-1}`, `M_{-2}`, the structure constants and the resulting system.
#[derive(Clone, Debug)]
pub struct MCVariety {
    pub d: Derivation,
    pub labels: Vec<String>,
    pub m1: Vec<Derivation>,
    pub m2: DerSubspaceBasis,
    /// `lambda[l][i][j]`: coefficient of `σ_l` in `[∂_i, ∂_j]`.
    pub lambda: Vec<Vec<Vec<Scalar>>>,
    /// `linear[l][i]`: coefficient of `σ_l` in `D∂_i`.
    pub linear: Vec<Vec<Scalar>>,
    pub system: QuadraticSystem,
}

/// Structure constants of the MC equation `Dδ + ½[δ,δ] = 0` for
/// `δ = Σ α_i ∂_i`. Brackets leaving the span of `m2` are rejected.
pub fn build_variety(
    d: &Derivation,
    m1: &[(String, Derivation)],
    m2: &DerSubspaceBasis,
) -> Result<MCVariety> {
    let keys: Vec<_> = m1.iter().map(|(_, b)| b.sparse_key()).collect();
    if !crate::linalg::Span::from_vectors(&keys).is_independent() {
        return Err(Error::ConstraintViolation("M_-1 basis is not independent".into()));
    }
    let span = m2.span();
    let r = m2.len();
    let s = m1.len();
    let coords = |theta: &Derivation, what: &str| -> Result<Vec<Scalar>> {
        if theta.is_zero() {
            return Ok(alloc::vec![Scalar::zero(); r]);
        }
        span.coordinates(&theta.sparse_key())
            .ok_or_else(|| Error::OutOfSubspace(alloc::format!("{what} is not in M_-2")))
    };
    let mut lambda = alloc::vec![alloc::vec![alloc::vec![Scalar::zero(); s]; s]; r];
    for i in 0..s {
        for j in i..s {
            let b = m1[i].1.bracket(&m1[j].1)?;
            let c = coords(&b, "a bracket of M_-1")?;
            for (l, x) in c.into_iter().enumerate() {
                lambda[l][i][j] = x.clone();
                lambda[l][j][i] = x;
            }
        }
    }
    let mut linear = alloc::vec![alloc::vec![Scalar::zero(); s]; r];
    for i in 0..s {
        let b = d.bracket(&m1[i].1)?;
        let c = coords(&b, "the boundary of an element of M_-1")?;
        for (l, x) in c.into_iter().enumerate() {
            linear[l][i] = x;
        }
    }
    let half = scalar::ratio(1, 2);
    let polynomials = (0..r)
        .map(|l| {
            let mut p = Polynomial::default();
            for i in 0..s {
                p.add_linear(i, linear[l][i].clone());
                for j in 0..s {
                    p.add_quadratic(i, j, &half * &lambda[l][i][j]);
                }
            }
            p
        })
        .collect();
    let labels: Vec<String> = m1.iter().map(|(n, _)| n.clone()).collect();
    Ok(MCVariety {
        d: d.clone(),
        labels: labels.clone(),
        m1: m1.iter().map(|(_, b)| b.clone()).collect(),
        m2: m2.clone(),
        lambda,
        linear,
        system: QuadraticSystem {
            variables: labels,
            polynomials,
        },
    })
}

impl MCVariety {
    pub fn dimension(&self) -> usize {
        self.m1.len()
    }

    /// `Σ α_i ∂_i`.
    pub fn point(&self, alpha: &[Scalar]) -> Result<Derivation> {
        if alpha.len() != self.m1.len() {
            return Err(Error::DimensionMismatch {
                expected: self.m1.len(),
                found: alpha.len(),
            });
        }
        let mut acc = Derivation::zero(self.d.algebra(), -1);
        for (a, b) in alpha.iter().zip(&self.m1) {
            acc = acc.add_scaled(a, b)?;
        }
        Ok(acc)
    }

    /// Coordinates of a derivation of `M_{-1}`.
    pub fn coordinates(&self, delta: &Derivation) -> Result<Vec<Scalar>> {
        if delta.is_zero() {
            return Ok(alloc::vec![Scalar::zero(); self.m1.len()]);
        }
        let keys: Vec<_> = self.m1.iter().map(|b| b.sparse_key()).collect();
        crate::linalg::Span::from_vectors(&keys)
            .coordinates(&delta.sparse_key())
            .ok_or_else(|| Error::OutOfSubspace("derivation is not in M_-1".into()))
    }

    /// Whether `d + Σ α_i ∂_i` is a differential, checked on the
    /// assembled derivation.
    pub fn assembled_check(&self, alpha: &[Scalar]) -> Result<bool> {
        let delta = self.point(alpha)?;
        is_differential(&self.d.try_add(&delta)?)
    }
}

/// Whether all polynomials of the system vanish at `alpha`.
pub fn mc_points_check(v: &MCVariety, alpha: &[Scalar]) -> Result<bool> {
    v.system.vanishes_at(alpha)
}
