//! Hilbert-space models of the conjunction fallacy.
//!
//! Two mechanisms are modeled. In the sequential picture a single belief state
//! answers two incompatible yes-no questions one after the other, and the
//! fallacy rides on the interference contribution `Int_B`; its structure
//! makes a double fallacy impossible. In the superposition picture the
//! conjunction is a new concept state, the normalized sum of the component
//! states, measured once; its interference term `Re⟨A|M|B⟩` can lift the
//! conjunction above both components.
//!
//! All operations are pure; fitting takes an explicit seeded generator so
//! concurrent fits are reproducible and independent.

mod fit;
pub mod linalg;
mod model;

pub use fit::{
    ee_fallacy_classification, ee_feasible_interference_bound, ee_fit, oe_fit, EeFit,
    EeFitOutcome, EeInfeasibility, EeTargets, OeFit, OeFitOutcome, OeInfeasibility, OeTargets,
    FIT_TOL,
};
pub use model::{
    oe_no_double_fallacy_check, EeModel, EePrediction, NoDoubleFallacyCheck, OeModel,
    OePrediction, Projector, StateVector, EQUALITY_TOL, INVARIANT_TOL,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} too small (minimum {min})")]
    InvalidDimension { dim: usize, min: usize },
    #[error("state vector norm {norm} is not 1 within tolerance")]
    NotUnitNorm { norm: f64 },
    #[error("matrix is not an orthogonal projector (max deviation {deviation:.3e})")]
    NotAProjector { deviation: f64 },
    #[error("component states are not orthogonal (|⟨A|B⟩| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },
    #[error("quantity expected to be real has imaginary residue {value:.3e}")]
    ImaginaryResidue { value: f64 },
    #[error("value {value} is not a probability in [0, 1]")]
    InvalidProbability { value: f64 },
    #[error("cannot project onto an empty span")]
    EmptySpan,
    #[error("matrix is not square")]
    NotSquare,
    #[error("fit did not converge (best residual {best_residual:.3e})")]
    FitFailure { best_residual: f64 },
}
