//! Hierarchical-model design matrices, unimodularity classification and
//! Graver bases.

pub mod complex;
pub mod error;
pub mod graver;
pub mod lattice;
pub mod matrix;
pub mod minor;
pub mod nuclear;
pub mod pair;
pub mod sweep;
pub mod unimodular;
pub mod vector;

pub use complex::{SimplicialComplex, VertexKind};
pub use error::{Error, Result};
pub use matrix::{DesignMatrix, IntMatrix, RowLabel};
pub use pair::HMPair;
pub use vector::{GraverBasis, SignedVector};
pub use unimodular::{classify, Verdict};
