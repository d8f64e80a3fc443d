//! Differentials, derivations, automorphisms and series on a free dgl.

mod automorphism;
mod derivation;
mod homology;
mod series;

pub use automorphism::Automorphism;
pub use derivation::{
    boundary, der_bracket, evaluate, is_differential, mc_check, mc_check_element, perturb,
    perturb_element, Derivation, Differential,
};
pub use homology::{
    filtered_homology_dims, homology_dims, homology_dims_with, invariant_gradings, HomologyRoute,
};
pub use series::{
    bch, exp, gauge, gauge_element, gauge_witness_check, gauge_with, log, log_unchecked, LieOps,
};
