//! Distinguished subspaces of `Der L` and filtrations of `V`.

mod bases;
mod filtration;

pub use bases::{
    chain_der_basis, chain_linear_basis, dder_basis, decomposable_basis, der_basis,
    full_der_basis, membership, sder_basis, weight_raising_der_basis,
    DerKind, DerSubspaceBasis,
};
pub use filtration::{
    above_degree, derivation_level, element_level, filtration_position, linear_part,
    linear_part_raises, refine_filtration, FiltrationOfV, GradedSubspace, RefinedFiltration,
};
