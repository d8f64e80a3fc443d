//! Quillen models of commutative graded algebras and bigraded models of
//! nilpotent graded Lie algebras.

mod algebra;
mod nilpotent;

pub use algebra::{quillen_derivation, quillen_model, GradedAlgebraPresentation};
pub use nilpotent::{
    bigraded_model, filtered_perturbation_check, rho_apply, verify, weight_exp, weight_log,
    BigradedModel, NilpotentLiePresentation, Truncation,
};
