//! Free graded Lie algebras over the rationals.

mod basis;
mod element;
mod generators;

pub use basis::{
    is_lyndon, lyndon_words, pbw_dimensions, pbw_dimensions_by_degree, standard_split, BasisCell,
    BasisElement,
    BasisKind,
};
pub use element::{FreeLie, LieElement, Letter, Word};
pub(crate) use element::{add_term, Terms};
pub use generators::{Generator, GeneratorSet, Window};
