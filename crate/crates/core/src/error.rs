use thiserror::Error;

use crate::field::{FieldError, FieldSpec};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix dimension {0} outside 1..=64")]
    DimensionLimit(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("entries span more than one field ({0} and {1})")]
    MixedEntries(FieldSpec, FieldSpec),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not irreducible tridiagonal")]
    NotIrreducibleTridiagonal,

    #[error("characteristic polynomial does not split over {field}: {found} of {degree} roots in the field")]
    NotSplit { field: FieldSpec, found: usize, degree: usize },
    #[error("eigenvalue {eigenvalue} has multiplicity {multiplicity}")]
    NotMultiplicityFree { eigenvalue: String, multiplicity: usize },
    #[error("eigenvalue list repeats {0}")]
    RepeatedEigenvalue(String),
    #[error("supplied eigenvalue order is not a permutation of the spectrum")]
    OrderMismatch,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("not a system of mutually orthogonal rank-one idempotents: {0}")]
    InvalidIdempotentSystem(String),

    #[error("d must be at least 1")]
    DimensionZero,
    #[error("E*_{i} A E*_{j} violates the tridiagonal zero/nonzero pattern")]
    ShapeViolation { i: usize, j: usize },
    #[error("E_{i} A* E_{j} and E_{j} A* E_{i} disagree on being zero")]
    AsymmetricDelta { i: usize, j: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("pair ({0}, {0}) must consist of distinct vertices")]
    SamePair(usize),
    #[error("subspace is not A-invariant")]
    NotInvariant,
    #[error("A*-invariance of U_S disagrees with the crossing-edge criterion for S = {0:?}")]
    CriterionMismatch(Vec<usize>),
    #[error("exhaustive subset sweep capped at d <= 12, got d = {0}")]
    SweepTooLarge(usize),
    #[error("ordering is not a permutation of 0..={0}")]
    InvalidOrdering(usize),

    #[error("recurrence data inconsistent: {0}")]
    InconsistentRecurrence(String),
    #[error("three-condition verdict {verdict} disagrees with the graph oracle {oracle} for pair ({i}, {j})")]
    OracleDisagreement { i: usize, j: usize, verdict: bool, oracle: bool },

    #[error("internal identity failed: {0}")]
    Integrity(String),

    #[error("{0}")]
    FieldTooSmall(String),
    #[error("no admissible instance after {0} attempts")]
    RetriesExhausted(usize),
    #[error("invalid instance: {0}")]
    Instance(String),
}

impl Error {
    /// True for errors that signal a broken internal invariant rather than bad input.
    pub fn is_integrity_violation(&self) -> bool {
        matches!(
            self,
            Error::OracleDisagreement { .. }
                | Error::AsymmetricDelta { .. }
                | Error::CriterionMismatch(_)
                | Error::InconsistentRecurrence(_)
                | Error::Integrity(_)
        )
    }
}
