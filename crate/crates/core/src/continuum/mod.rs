//! Continuum models with exact or numerically controlled representations:
//! a rational interval orthoalgebra and projections on `ℂᵈ`.

mod intervals;
mod projection;

pub use intervals::{
    iv_is_closed, iv_is_open, iv_leq, iv_oplus, iv_oplus_pasting_check, iv_upset, l33, Interval,
    IntervalTuple, OplusPiece, PastingReport, RationalIntervalSet,
};
pub use projection::{
    faithful_subeffect_check, frame_order_check, gaussian_vector, meet_discontinuity_witness,
    min_eigenvalue, op_norm, random_chain, random_frame, random_projection, random_unitary,
    rank_separation_check, CMatrix, CVector, FrameReport, MeetDiscontinuity, Projection,
    RankSeparation, SubeffectReport, VectorState, DEFAULT_TOL, RANK_FACTOR,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuumError {
    #[error("{0} is not contained in [0,1/4] ∪ [3/4,1]")]
    NotInCarrier(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} outside 2..=8")]
    DimensionOutOfRange(usize),
    #[error("projections are not orthogonal")]
    NotOrthogonal,
    #[error("singular value {sigma:e} too close to the rank threshold {threshold:e}")]
    IllConditioned { sigma: f64, threshold: f64 },
    #[error("theta = {0} outside 0 < |θ| < π/2")]
    ThetaOutOfRange(f64),
    #[error("Q − P is not positive semidefinite (least eigenvalue {min_eigenvalue:e})")]
    NotDominated { min_eigenvalue: f64 },
    #[error("vector norm {norm} is not 1")]
    NotUnit { norm: f64 },
    #[error("not a projection: {0}")]
    NotProjection(String),
    #[error("parse error: {0}")]
    Parse(String),
}
