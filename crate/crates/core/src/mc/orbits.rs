use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::variety::MCVariety;
use crate::dgl::{filtered_homology_dims, gauge, homology_dims, mc_check, Derivation};
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllipticStatus {
    CertifiedElliptic,
    Inconclusive,
}

/// Rationally elliptic certificate for a differential on `𝕃(V)` with
/// `V = V_{≤N}`: homology vanishes in degrees `[2N, 3N]`.
pub fn elliptic_certificate(total: &Derivation, n: i32) -> Result<EllipticStatus> {
    let set = total.algebra().generators();
    if set.top_degree().is_some_and(|t| t > n) {
        return Err(Error::Hypothesis(alloc::format!(
            "generators above degree {n}"
        )));
    }
    let dims = homology_dims(total, 2 * n..=3 * n)?;
    Ok(if dims.iter().all(|d| *d == 0) {
        EllipticStatus::CertifiedElliptic
    } else {
        EllipticStatus::Inconclusive
    })
}

/// Invariants of the orbit of `d + δ`, comparable with `==`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInvariantReport {
    pub degrees: (i32, i32),
    pub homology: Vec<usize>,
    /// Per degree, `dim F^n H` for `n = 1..=max_len` under the word-length
    /// filtration.
    pub filtered: Vec<Vec<usize>>,
    /// Present when the window reaches `3N + 1`.
    pub elliptic: Option<EllipticStatus>,
}

pub fn orbit_invariants(
    d: &Derivation,
    delta: &Derivation,
    degrees: (i32, i32),
    max_len: usize,
) -> Result<OrbitInvariantReport> {
    let total = d.try_add(delta)?;
    let homology = homology_dims(&total, degrees.0..=degrees.1)?;
    let filtered = (degrees.0..=degrees.1)
        .map(|k| filtered_homology_dims(&total, k, max_len))
        .collect::<Result<_>>()?;
    let set = total.algebra().generators();
    let elliptic = match set.top_degree() {
        Some(n) if set.max_degree() > 3 * n => Some(elliptic_certificate(&total, n)?),
        _ => None,
    };
    Ok(OrbitInvariantReport {
        degrees,
        homology,
        filtered,
        elliptic,
    })
}

/// Groups indices by equal reports, in first-seen order.
pub fn classify(reports: &[OrbitInvariantReport]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        match classes.iter_mut().find(|c| reports[c[0]] == *r) {
            Some(c) => c.push(i),
            None => classes.push(alloc::vec![i]),
        }
    }
    classes
}

#[derive(Clone, Debug)]
pub struct GaugeReduction {
    pub representative: Derivation,
    pub reduced: bool,
    /// Multiples of each direction that were applied.
    pub parameters: Vec<Scalar>,
}

/// Shift `(tθ) 𝒢 δ - δ` at `t = 1`, checked to scale linearly in `t`.
pub fn gauge_shift(d: &Derivation, theta: &Derivation, delta: &Derivation) -> Result<Option<Derivation>> {
    let minus = scalar::int(-1);
    let w = gauge(d, theta, delta)?.add_scaled(&minus, delta)?;
    let w2 = gauge(d, &theta.scale(&scalar::int(2)), delta)?.add_scaled(&minus, delta)?;
    Ok((w2 == w.scale(&scalar::int(2))).then_some(w))
}

/// Uses gauge directions whose action is affine to zero the coordinates
/// `zero_coords` of `δ`. Returns `δ` with `reduced = false` when the action
/// is not affine or cannot reach those coordinates.
pub fn canonical_gauge_representative(
    v: &MCVariety,
    directions: &[Derivation],
    delta: &Derivation,
    zero_coords: &[usize],
) -> Result<GaugeReduction> {
    let unchanged = |delta: &Derivation| GaugeReduction {
        representative: delta.clone(),
        reduced: false,
        parameters: alloc::vec![Scalar::zero(); directions.len()],
    };
    let coords = v.coordinates(delta)?;
    if let Some(&i) = zero_coords.iter().find(|&&i| i >= coords.len()) {
        return Err(Error::OutOfRange(alloc::format!("coordinate {i}")));
    }
    let mut shifts = Vec::with_capacity(directions.len());
    for theta in directions {
        match gauge_shift(&v.d, theta, delta)? {
            Some(w) => match v.coordinates(&w) {
                Ok(c) => shifts.push((w, c)),
                Err(_) => return Ok(unchanged(delta)),
            },
            None => return Ok(unchanged(delta)),
        }
    }
    let a: Vec<Vec<Scalar>> = zero_coords
        .iter()
        .map(|&i| shifts.iter().map(|(_, c)| c[i].clone()).collect())
        .collect();
    let b: Vec<Scalar> = zero_coords.iter().map(|&i| -coords[i].clone()).collect();
    let Some(t) = solve(&a, &b, directions.len()) else {
        return Ok(unchanged(delta));
    };
    let mut cur = delta.clone();
    let mut predicted = delta.clone();
    for ((theta, (w, _)), tj) in directions.iter().zip(&shifts).zip(&t) {
        if tj.is_zero() {
            continue;
        }
        cur = gauge(&v.d, &theta.scale(tj), &cur)?;
        predicted = predicted.add_scaled(tj, w)?;
    }
    if cur != predicted || !mc_check(&v.d, &cur)? {
        return Ok(unchanged(delta));
    }
    let c = v.coordinates(&cur)?;
    if zero_coords.iter().any(|&i| !c[i].is_zero()) {
        return Ok(unchanged(delta));
    }
    Ok(GaugeReduction {
        representative: cur,
        reduced: true,
        parameters: t,
    })
}

/// Whether every direction acts trivially at every sample point.
pub fn gauge_is_trivial(d: &Derivation, directions: &[Derivation], samples: &[Derivation]) -> Result<bool> {
    for theta in directions {
        for delta in samples {
            if gauge(d, theta, delta)? != *delta {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Specialization order on a list of orbit representatives: `x ≤ y` when
/// the line `r_x + t(r_y - r_x)` stays MC and in the class of `y` at every
/// sampled `t ≠ 0`, so that `r_x` lies in the closure of the orbit of `y`.
/// Returns the pairs `(x, y)`, `x ≠ y`.
pub fn closure_poset<F>(
    d: &Derivation,
    reps: &[(String, Derivation)],
    samples: &[Scalar],
    invariants: F,
) -> Result<Vec<(usize, usize)>>
where
    F: Fn(&Derivation) -> Result<OrbitInvariantReport>,
{
    let reports: Vec<_> = reps.iter().map(|(_, r)| invariants(r)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for x in 0..reps.len() {
        for y in 0..reps.len() {
            if x == y {
                continue;
            }
            let diff = reps[y].1.add_scaled(&scalar::int(-1), &reps[x].1)?;
            let mut ok = true;
            for t in samples.iter().filter(|t| !t.is_zero()) {
                let point = reps[x].1.add_scaled(t, &diff)?;
                if !mc_check(d, &point)? || invariants(&point)? != reports[y] {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}
