//! Operator-norm branch: conjugating close unitary representations of a
//! finite group, and the amalgam and HNN constructions built on it.
//!
//! Floating point is confined to this crate. Matrices are dense
//! `nalgebra` matrices over `Complex64`.

mod construct;
mod matrix;
mod rep;

pub use construct::{op_stabilize_amalgam, op_stabilize_hnn, OpAmalgam, OpHnn};
pub use matrix::{op_norm, polar_unitary, UMatrix};
pub use rep::{average_intertwiner, intertwining_defect, op_conjugate_close, rep_distance, OpConjugator, URep};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitaryError {
    #[error("empty matrix")]
    Empty,
    #[error("non-finite entry")]
    NonFinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected {0} matrices, got {1}")]
    LengthMismatch(usize, usize),
    #[error("representations of different groups")]
    GroupMismatch,
    #[error("not unitary: ‖A*A − I‖ = {0:e}")]
    NotUnitary(f64),
    #[error("not multiplicative: defect {0:e}")]
    NotMultiplicative(f64),
    #[error("singular matrix")]
    Singular,
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("defect {0} too large")]
    DefectTooLarge(f64),
    #[error("bound violated: {measured:e} > {bound:e}")]
    BoundViolated { measured: f64, bound: f64 },
    #[error("relation residual {0:e} above tolerance")]
    Residual(f64),
}

/// Numerical tolerances: `iteration` stops the Newton polar iteration,
/// `assertion` bounds every checked identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub iteration: f64,
    pub assertion: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            iteration: 1e-12,
            assertion: 1e-8,
            max_iterations: 100,
        }
    }
}
