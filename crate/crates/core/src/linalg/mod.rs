//! Exact scalar arithmetic, sparse matrices and a canonical subspace calculus
//! over ℚ and GF(p).

mod echelon;
mod field;
mod matrix;
mod subspace;

use thiserror::Error;

pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use subspace::{enumerate_subspaces, Subspace, SubspaceIter};
pub(crate) use subspace::unit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot represent {value} in {field}")]
    NotRepresentable { value: String, field: Field },
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("index ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    IndexOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace enumeration needs a finite field, got {0}")]
    UnsupportedEnumeration(Field),
}
