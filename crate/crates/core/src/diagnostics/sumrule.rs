use nalgebra::DMatrix;

use crate::basis::{BasisSpec, QuadratureRule};
use crate::eigensolve::EigenDecomposition;
use crate::error::{Error, Result};

/// Value of the dipole sum for a complete spectrum with unit mass and
/// `hbar = 1`.
pub const TRK_COMPLETE: f64 = 0.5;

/// Position operator `<psi_i| r |psi_j>` in the basis.
pub fn position_matrix(basis: &BasisSpec, quad: &QuadratureRule) -> DMatrix<f64> {
    let table = basis.tabulate(quad);
    let mut weighted = table.values.clone();
    for (mut row, (&w, &r)) in weighted.row_iter_mut().zip(table.weights.iter().zip(&table.radius)) {
        row *= w * r;
    }
    let x = table.values.tr_mul(&weighted);
    (&x + x.transpose()) * 0.5
}

/// Thomas-Reiche-Kuhn sum `sum_k (E_k - E_g) |<k| r |g>|²` over the
/// discrete spectrum. Reaches [`TRK_COMPLETE`] when the basis resolves the
/// excitations out of state `ground_index`.
pub fn trk_sum_rule(
    decomposition: &EigenDecomposition,
    basis: &BasisSpec,
    quad: &QuadratureRule,
    ground_index: usize,
) -> Result<f64> {
    let n = basis.n_basis();
    if decomposition.len() != n || decomposition.vectors.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, found: decomposition.vectors.nrows() });
    }
    if ground_index >= n {
        return Err(Error::IndexOutOfRange { index: ground_index, n_basis: n });
    }
    let x = position_matrix(basis, quad);
    let column = x * decomposition.vectors.column(ground_index);
    let dipoles = decomposition.vectors.tr_mul(&column);
    let e0 = decomposition.values[ground_index];
    Ok(dipoles.iter().zip(decomposition.values.iter()).map(|(d, e)| (e - e0) * d * d).sum())
}
