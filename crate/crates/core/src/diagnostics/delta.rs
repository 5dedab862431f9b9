use nalgebra::DVector;

use crate::eigensolve::RitzPair;
use crate::error::{Error, Result};
use crate::hamiltonians::OperatorPair;

/// Raw `delta` at or below `EXACT_DELTA_FACTOR * ‖h‖²` is zero to working
/// precision: the state is an eigenpair of the square as well.
pub const EXACT_DELTA_FACTOR: f64 = 1e-12;

/// The squared-operator test for one Ritz pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRecord {
    pub track_id: Option<usize>,
    /// Lanczos iteration or basis size.
    pub iteration: usize,
    /// Rayleigh quotient `e = vᵀ h v`.
    pub value: f64,
    /// `|e² - vᵀ h2 v|`, units of energy².
    pub delta: f64,
    /// `delta / (1 + e²)`.
    pub delta_rel: f64,
    /// `‖h‖` of the operator the record was measured against.
    pub op_norm: f64,
}

impl DeltaRecord {
    pub fn new(track_id: Option<usize>, iteration: usize, value: f64, delta: f64, op_norm: f64) -> Self {
        let delta = if delta < 0.0 && delta >= -1e-12 { 0.0 } else { delta };
        Self { track_id, iteration, value, delta, delta_rel: delta / (1.0 + value * value), op_norm }
    }

    pub fn is_exact(&self) -> bool {
        self.delta <= EXACT_DELTA_FACTOR * self.op_norm * self.op_norm
    }
}

fn check_dim(vector: &DVector<f64>, ops: &OperatorPair) -> Result<()> {
    if vector.len() != ops.dim() {
        return Err(Error::DimensionMismatch { expected: ops.dim(), found: vector.len() });
    }
    Ok(())
}

/// `vᵀ h2 v - (vᵀ h v)²` without the absolute value. For an eigenvector of
/// `h` this is `vᵀ (h2 - h h) v`, the squared norm of the out-of-basis
/// part of `H v`, and so nonnegative.
pub fn squared_operator_gap(vector: &DVector<f64>, ops: &OperatorPair) -> Result<f64> {
    check_dim(vector, ops)?;
    let e = vector.dot(&(&ops.h * vector));
    let q = vector.dot(&(&ops.h2 * vector));
    Ok(q - e * e)
}

/// Test whether a Ritz pair of `h` is also an eigenpair of the squared
/// operator.
pub fn delta_diagnostic(pair: &RitzPair, ops: &OperatorPair) -> Result<DeltaRecord> {
    check_dim(&pair.vector, ops)?;
    let v = &pair.vector;
    let e = v.dot(&(&ops.h * v));
    let q = v.dot(&(&ops.h2 * v));
    Ok(DeltaRecord::new(pair.track_id, pair.iteration, e, (e * e - q).abs(), ops.norm()))
}
