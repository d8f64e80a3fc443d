//! BCH product, exponential, logarithm and the gauge action.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::automorphism::Automorphism;
use super::derivation::Derivation;
use crate::error::{Error, Result};
use crate::glie::{pbw_dimensions_by_degree, LieElement, Word};
use crate::linalg::{SparseVec, Span};
use crate::scalar::{int, Scalar};

/// The operations the series below need, shared by Lie elements and derivations.
pub trait LieOps: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// `self + c * other`.
    fn plus(&self, c: &Scalar, other: &Self) -> Result<Self>;
    fn scaled(&self, c: &Scalar) -> Self;
    fn lie(&self, other: &Self) -> Result<Self>;
    /// Degree of a nonzero homogeneous element.
    fn homogeneous_degree(&self) -> Option<i32>;
    /// Injective linear coordinates, for span bookkeeping.
    fn span_key(&self) -> SparseVec<(usize, Word)>;
    /// Cap on series lengths derived from the window.
    fn series_cap(&self) -> usize;
    fn truncated(&self) -> bool;
    fn mark_truncated(self) -> Self;
}

impl LieOps for LieElement {
    fn zero_like(&self) -> Self {
        let mut z = self.algebra().zero();
        z.truncated = self.is_truncated();
        z
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, c: &Scalar, other: &Self) -> Result<Self> {
        self.add_scaled(c, other)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn lie(&self, other: &Self) -> Result<Self> {
        self.bracket(other)
    }
    fn homogeneous_degree(&self) -> Option<i32> {
        self.degree()
    }
    fn span_key(&self) -> SparseVec<(usize, Word)> {
        self.lead_projection()
            .into_iter()
            .map(|(w, c)| ((0, w), c))
            .collect()
    }
    fn series_cap(&self) -> usize {
        2 * self.algebra().generators().max_word_length() + 4
    }
    fn truncated(&self) -> bool {
        self.is_truncated()
    }
    fn mark_truncated(mut self) -> Self {
        self.truncated = true;
        self
    }
}

impl LieOps for Derivation {
    fn zero_like(&self) -> Self {
        Derivation::zero(self.algebra(), self.degree())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, c: &Scalar, other: &Self) -> Result<Self> {
        self.add_scaled(c, other)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn lie(&self, other: &Self) -> Result<Self> {
        self.bracket(other)
    }
    fn homogeneous_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.degree())
    }
    fn span_key(&self) -> SparseVec<(usize, Word)> {
        self.sparse_key()
    }
    fn series_cap(&self) -> usize {
        2 * self.algebra().generators().max_word_length() + 4
    }
    fn truncated(&self) -> bool {
        self.is_truncated()
    }
    fn mark_truncated(self) -> Self {
        self.with_truncation()
    }
}

fn require_degree_zero<T: LieOps>(x: &T) -> Result<()> {
    match x.homogeneous_degree() {
        None if x.is_zero_elem() => Ok(()),
        Some(0) => Ok(()),
        Some(d) => Err(Error::WrongDegree {
            expected: 0,
            found: d,
        }),
        None => Err(Error::NonHomogeneous),
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
fn bernoulli(n: usize) -> Vec<Scalar> {
    let mut b: Vec<Scalar> = Vec::with_capacity(n + 1);
    b.push(Scalar::one());
    for m in 1..=n {
        // sum_{k<m} binom(m+1, k) B_k = -(m+1) B_m
        let mut acc = Scalar::zero();
        let mut binom = Scalar::one();
        for (k, bk) in b.iter().enumerate() {
            acc += &binom * bk;
            binom = binom * int((m + 1 - k) as i64) / int((k + 1) as i64);
        }
        b.push(-acc / int((m + 1) as i64));
    }
    b
}

/// Baker-Campbell-Hausdorff product `z` with `e^z = e^x e^y`.
///
/// Terms are produced by the Varadarajan recursion and the series stops once
/// all brackets of the current length in `x, y` vanish.
pub fn bch<T: LieOps>(x: &T, y: &T) -> Result<T> {
    require_degree_zero(x)?;
    require_degree_zero(y)?;
    let cap = x.series_cap().max(y.series_cap());
    let half = Scalar::new(1.into(), 2.into());
    let sum = x.plus(&Scalar::one(), y)?;
    let diff = x.plus(&-Scalar::one(), y)?;
    // z[n] is the homogeneous part of length n; z[0] unused.
    let mut z: Vec<T> = alloc::vec![x.zero_like(), sum.clone()];
    let mut layer: Vec<T> = [x.clone(), y.clone()]
        .into_iter()
        .filter(|e| !e.is_zero_elem())
        .collect();
    let mut n = 1;
    let mut window_cut = false;
    loop {
        // layer spans all brackets of length n in x, y
        let mut next = Vec::new();
        let mut span: Span<(usize, Word)> = Span::new();
        for a in [x, y] {
            for c in &layer {
                let e = a.lie(c)?;
                if e.truncated() {
                    window_cut = true;
                }
                if !e.is_zero_elem() && span.push(&e.span_key()) {
                    next.push(e);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        if n >= cap {
            return Err(Error::NonTerminating(format!(
                "BCH series has nonzero brackets past length {cap}"
            )));
        }
        layer = next;
        let bern = bernoulli(n);
        // nested[j][m]: sum over compositions of m into j parts of
        // [z_{k1},[z_{k2},...,[z_{kj}, x+y]]]
        let max_parts = n;
        let mut nested: Vec<Vec<Option<T>>> = alloc::vec![alloc::vec![None; n + 1]; max_parts + 1];
        nested[0][0] = Some(sum.clone());
        for j in 1..=max_parts {
            for m in j..=n {
                let mut acc: Option<T> = None;
                for k in 1..=(m - (j - 1)) {
                    if let Some(inner) = &nested[j - 1][m - k] {
                        let t = z[k].lie(inner)?;
                        acc = Some(match acc {
                            None => t,
                            Some(a) => a.plus(&Scalar::one(), &t)?,
                        });
                    }
                }
                nested[j][m] = acc;
            }
        }
        let mut next_z = diff.lie(&z[n])?.scaled(&half);
        let mut p = 1;
        while 2 * p <= n {
            if let Some(t) = &nested[2 * p][n] {
                let mut fact = Scalar::one();
                for i in 1..=(2 * p) {
                    fact *= int(i as i64);
                }
                next_z = next_z.plus(&(&bern[2 * p] / fact), t)?;
            }
            p += 1;
        }
        z.push(next_z.scaled(&(Scalar::one() / int((n + 1) as i64))));
        n += 1;
    }
    let mut out = x.zero_like();
    for t in z.iter().skip(1) {
        out = out.plus(&Scalar::one(), t)?;
    }
    Ok(if window_cut { out.mark_truncated() } else { out })
}

fn degree_caps(theta_alg: &crate::glie::FreeLie) -> Result<Vec<usize>> {
    let set = theta_alg.generators();
    let top = set.top_degree().unwrap_or(0).max(0);
    pbw_dimensions_by_degree(set, set.max_word_length(), top)
}

/// `e^θ = Σ θ^n / n!` for a degree-0 derivation, applied on generators.
pub fn exp(theta: &Derivation) -> Result<Automorphism> {
    require_degree_zero(theta)?;
    let alg = theta.algebra();
    let set = alg.generators();
    let caps = degree_caps(alg)?;
    let mut values = Vec::with_capacity(alg.rank());
    for i in 0..alg.rank() {
        let cap = caps.get(set.degree(i) as usize).copied().unwrap_or(0) + 1;
        let mut term = alg.generator(i);
        let mut acc = term.clone();
        let mut n = 1;
        loop {
            term = theta.evaluate(&term)?.scale(&(Scalar::one() / int(n)));
            if term.is_zero() {
                break;
            }
            if n as usize > cap {
                return Err(Error::NonTerminating(format!(
                    "exponential does not terminate at generator {}",
                    set.name(i)
                )));
            }
            acc = &acc + &term;
            n += 1;
        }
        values.push(acc);
    }
    Ok(Automorphism::from_raw(alg, values))
}

/// `log f = Σ (-1)^{n+1} (f - id)^n / n`, requiring `f - id` to raise word length.
pub fn log(f: &Automorphism) -> Result<Derivation> {
    if !f.is_unipotent() {
        return Err(Error::Hypothesis(
            "automorphism minus identity does not raise word length".into(),
        ));
    }
    log_unchecked(f)
}

/// The logarithm series with only the window as termination certificate.
pub fn log_unchecked(f: &Automorphism) -> Result<Derivation> {
    let alg = f.algebra();
    let set = alg.generators();
    let caps = degree_caps(alg)?;
    let mut values = Vec::with_capacity(alg.rank());
    for i in 0..alg.rank() {
        let cap = caps.get(set.degree(i) as usize).copied().unwrap_or(0) + 1;
        let v = alg.generator(i);
        let mut term = &f.apply(&v)? - &v;
        let mut acc = alg.zero();
        let mut n: i64 = 1;
        while !term.is_zero() {
            if n as usize > cap {
                return Err(Error::NonTerminating(format!(
                    "logarithm does not terminate at generator {}",
                    set.name(i)
                )));
            }
            let sign = if n % 2 == 1 { int(1) } else { int(-1) };
            acc = acc.add_scaled(&(sign / int(n)), &term)?;
            term = &f.apply(&term)? - &term;
            n += 1;
        }
        values.push(acc);
    }
    Derivation::new(alg, 0, values)
}

/// `x 𝒢 a = Σ ad_x^i(a)/i! - Σ ad_x^i(dx)/(i+1)!` given `dx`.
pub fn gauge_with<T: LieOps>(x: &T, a: &T, dx: &T) -> Result<T> {
    require_degree_zero(x)?;
    let cap = x.series_cap();
    let mut out = a.zero_like();
    for (start, shift) in [(a, 0i64), (dx, 1i64)] {
        let sign = if shift == 0 { int(1) } else { int(-1) };
        let mut term = start.clone();
        let mut fact = Scalar::one();
        for i in 1..=shift {
            fact *= int(i);
        }
        let mut i: i64 = 0;
        while !term.is_zero_elem() {
            if i as usize > cap {
                return Err(Error::NonTerminating("gauge series".into()));
            }
            out = out.plus(&(&sign / &fact), &term)?;
            term = x.lie(&term)?;
            i += 1;
            fact *= int(i + shift);
        }
    }
    Ok(out)
}

/// Gauge action in the derivation algebra with differential `[d, -]`.
pub fn gauge(d: &Derivation, theta: &Derivation, delta: &Derivation) -> Result<Derivation> {
    let dtheta = d.bracket(theta)?;
    gauge_with(theta, delta, &dtheta)
}

/// Gauge action on elements of the algebra itself.
pub fn gauge_element(d: &Derivation, x: &LieElement, a: &LieElement) -> Result<LieElement> {
    let dx = d.evaluate(x)?;
    gauge_with(x, a, &dx)
}

/// Whether `e^θ` intertwines `d + δ` with `d + η`.
pub fn gauge_witness_check(
    d: &Derivation,
    theta: &Derivation,
    delta: &Derivation,
    eta: &Derivation,
) -> Result<bool> {
    let e = exp(theta)?;
    let src = d.try_add(delta)?;
    let dst = d.try_add(eta)?;
    e.intertwines(&src, &dst)
}
