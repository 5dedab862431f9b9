//! Eigensolvers for the projected operator: dense diagonalization and a
//! Lanczos iteration that exposes its Ritz pairs after every step.

mod dense;
mod lanczos;
mod tracking;

use nalgebra::DVector;

pub use dense::{eigh_dense, eigh_tridiagonal, EigenDecomposition};
pub use lanczos::{
    check_symmetry, ritz_pairs, FnOperator, LanczosState, StartVector, StepOutcome, SymmetricOperator,
    BREAKDOWN_TOL,
};
pub use tracking::{assign_tracks, track_states, Track, TrackerConfig};

/// An approximate eigenpair of the projected operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzPair {
    pub value: f64,
    /// Unit vector in the basis of the projected operator.
    pub vector: DVector<f64>,
    /// Lanczos iteration count, or basis size for dense scans.
    pub iteration: usize,
    pub track_id: Option<usize>,
}

impl EigenDecomposition {
    /// All eigenpairs as Ritz pairs stamped with `iteration`.
    pub fn ritz_pairs(&self, iteration: usize) -> Vec<RitzPair> {
        (0..self.len())
            .map(|k| RitzPair {
                value: self.values[k],
                vector: self.vectors.column(k).into_owned(),
                iteration,
                track_id: None,
            })
            .collect()
    }
}
