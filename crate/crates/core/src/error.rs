use thiserror::Error;

use crate::face::Face;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("complex is not pure")]
    NotPure,

    #[error("invalid facet order: {0}")]
    InvalidOrder(String),

    #[error("facet order fails the shelling condition at step {0}")]
    NotShellingStep(usize),

    #[error("complex is not shellable")]
    NonShellable,

    #[error("face {0} is not in the complex")]
    FaceNotInComplex(Face),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("characteristic matrix is singular on face {0}")]
    NonSingularityViolation(Face),

    #[error("no kernel element canonicalizes the cell: {0}")]
    NoSolution(String),

    #[error("differential does not square to zero at degree {0}")]
    DifferentialNotSquareZero(i32),

    #[error("transfer cochain is not divisible by 2^{expected}: {detail}")]
    DivisibilityFailure { expected: u32, detail: String },

    #[error("quotient basis reduction failed: {0}")]
    ReductionFailure(String),

    #[error("h-vector is inconsistent with the subcomplex table: {0}")]
    InconsistentHVector(String),

    #[error("small cover tables exist only for n = 3 and n = 4, got n = {0}")]
    DimensionUnsupported(usize),

    #[error("complex is not a simplicial sphere: {0}")]
    NotASphere(String),

    #[error("formula disagrees with the cellular oracle: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
