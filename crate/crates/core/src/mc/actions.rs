use alloc::vec::Vec;

use num_traits::Zero;

use super::variety::MCVariety;
use crate::dgl::{Automorphism, Derivation};
use crate::error::{Error, Result};
use crate::glie::FreeLie;
use crate::models::GradedAlgebraPresentation;
use crate::scalar::Scalar;

/// `φ(d + δ)φ⁻¹ - d`.
pub fn conjugate_perturbation(
    phi: &Automorphism,
    d: &Derivation,
    delta: &Derivation,
) -> Result<Derivation> {
    let total = d.try_add(delta)?;
    let conj = phi.conjugate(&total)?;
    conj.try_add(&d.scale(&-Scalar::from_integer(1.into())))
}

/// The action of an automorphism on a point of the variety. Fails when the
/// result leaves `M_{-1}`, in particular when `φ` does not fix the quadratic
/// part of a quadratic `d`.
pub fn aut_action(v: &MCVariety, phi: &Automorphism, delta: &Derivation) -> Result<Derivation> {
    let out = conjugate_perturbation(phi, &v.d, delta)?;
    if v.d.is_quadratic() && !v.d.is_zero() && !out.raises_length_to(3) {
        return Err(Error::OutOfSubspace(
            "automorphism does not stabilize the quadratic part of d".into(),
        ));
    }
    v.coordinates(&out)?;
    Ok(out)
}

/// Automorphism of `𝕃(V)` extending a linear automorphism of `V`.
/// Row `i` holds the image of generator `i`, as in [`Automorphism::linear`].
pub fn aut_v_lift(alg: &FreeLie, matrix: &[Vec<Scalar>]) -> Result<Automorphism> {
    Automorphism::linear(alg, matrix)
}

/// Diagonal automorphism of `A` scaling `e_i` by `λ_i`, checked against
/// the product, transported to `V = s⁻¹A^♯` through the inverse dual
/// `v_i ↦ λ_i⁻¹ v_i`.
pub fn aut_a_automorphism(
    a: &GradedAlgebraPresentation,
    alg: &FreeLie,
    scalars: &[Scalar],
) -> Result<Automorphism> {
    if scalars.len() != a.len() || alg.rank() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: scalars.len(),
        });
    }
    if let Some(i) = scalars.iter().position(|s| s.is_zero()) {
        return Err(Error::ConstraintViolation(alloc::format!(
            "scalar for {} is zero",
            a.name(i)
        )));
    }
    for (i, j, k, _) in a.structure_constants() {
        if &scalars[i] * &scalars[j] != scalars[k] {
            return Err(Error::ConstraintViolation(alloc::format!(
                "scaling does not respect {}*{}",
                a.name(i),
                a.name(j)
            )));
        }
    }
    let mu: Vec<Scalar> = scalars.iter().map(|s| s.recip()).collect();
    Automorphism::scale_generators(alg, &mu)
}

/// [`aut_action`] of a diagonal automorphism of `A`.
pub fn aut_a_action(
    a: &GradedAlgebraPresentation,
    scalars: &[Scalar],
    v: &MCVariety,
    delta: &Derivation,
) -> Result<Derivation> {
    let phi = aut_a_automorphism(a, v.d.algebra(), scalars)?;
    aut_action(v, &phi, delta)
}
