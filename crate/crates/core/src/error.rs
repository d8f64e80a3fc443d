use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("elements belong to different free Lie algebras")]
    IncompatibleAlgebra,
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("element is not homogeneous of the requested bidegree")]
    NonHomogeneous,
    #[error("element is not in the span of the basis: {0}")]
    NotInSpan(String),
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("value on generator `{generator}` has degree {found}, expected {expected}")]
    BadValueDegree {
        generator: String,
        expected: i32,
        found: i32,
    },
    #[error("computation window too small: {0}")]
    WindowInsufficient(String),
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
    #[error("result was truncated by the computation window")]
    Truncated,
    #[error("map is not invertible: {0}")]
    Singular(String),
    #[error("derivation leaves the ambient subspace: {0}")]
    OutOfSubspace(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid algebra presentation: {0}")]
    InvalidPresentation(String),
    #[error("automorphism constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}
