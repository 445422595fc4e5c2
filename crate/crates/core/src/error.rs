use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` already belongs to the ground set")]
    VertexCollision(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("ground set has {0} vertices; at most 64 are supported")]
    TooManyVertices(usize),
    #[error("the full simplex has no non-faces, so its Alexander dual is undefined")]
    FullSimplex,
    #[error("vertex `{vertex}` has weight {weight}; weights must be at least 2")]
    InvalidWeight { vertex: String, weight: u64 },
    #[error("vertex `{0}` has no weight")]
    MissingWeight(String),
    #[error("face {0:?} meets a facet without being contained in it")]
    FaceCondition(Vec<String>),
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("column counts differ ({0} vs {1})")]
    ColumnMismatch(usize, usize),
    #[error("{what}: size {actual} exceeds the guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("the HM pair is not unimodular")]
    NotUnimodular,
    #[error("input basis has an entry outside {{-1, 0, 1}}")]
    NonUnimodularBasis,
    #[error("the Graver basis is empty")]
    EmptyGraverBasis,
    #[error("arithmetic overflow while converting a kernel vector")]
    Overflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
