//! The exact character engine: word preprocessing, the projection onto the
//! `λ+(n)`-isotypic part of `(C^n)^{⊗k}`, contribution graphs, assignment
//! counting, and assembly of `E_w[χ^{λ+(n)}]`.

pub mod coloring;
pub mod expected;
pub mod graph;
pub mod projection;
pub mod word;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::partition::PartitionError;
use crate::symmetric::ShapeError;
use crate::weingarten::WeingartenError;

pub use coloring::count_assignments;
pub use expected::{
    expected_character, phi_w, polynomial_form, EngineOptions, EnumerationMode, EnumerationStats,
    EulerPolicy, ExpectedCharacter, PolynomialForm,
};
pub use graph::ContributionGraph;
pub use projection::{
    bitrace_character, build_projection, character_sum, expected_trace, proj_coeff, projection_weight,
    xi_isotypic, xi_projector_check, ProjectionMatrix,
};
pub use word::{preprocess_word, Letter, ReducedWord, Word, WordClass, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Weingarten(#[from] WeingartenError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("{what} needs {needed}, over the limit of {limit}")]
    ScaleGuard { what: String, needed: u128, limit: u128 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl EngineError {
    /// True for errors that falsify a claimed identity rather than reject input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, EngineError::InvariantViolation(_))
    }
}
