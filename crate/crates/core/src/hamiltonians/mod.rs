//! Projected Hamiltonians and their projected squares.
//!
//! Both matrices come from one set of pointwise images `H psi_j` on the
//! quadrature grid:
//!
//! - `h[i][j]  = <psi_i | H psi_j>`
//! - `h2[i][j] = <H psi_i | H psi_j>`
//!
//! Because the same quadrature produces both, `h2 - h h` is the Gram matrix
//! of the part of `H psi_j` orthogonal to the basis and is positive
//! semidefinite up to the quadrature's orthonormality error.

mod oracle;
mod potential;

use std::ops::AddAssign;

use nalgebra::DMatrix;

use crate::basis::{weighted_gram, BasisSpec, QuadratureRule};
use crate::error::{invalid, Error, Result};

pub use oracle::{dirac_energy_oracle, schrodinger_energy_oracle};
pub use potential::{DiracParams, Potential, SPEED_OF_LIGHT};

/// A Hamiltonian to be projected: one-dimensional/radial Schrödinger with a
/// model potential, or the radial Dirac-Coulomb operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    Schrodinger(Potential),
    Dirac(DiracParams),
}

impl Problem {
    pub fn assemble(&self, basis: &BasisSpec, quad: &QuadratureRule) -> Result<OperatorPair> {
        match self {
            Self::Schrodinger(potential) => assemble_schrodinger(potential, basis, quad),
            Self::Dirac(params) => assemble_dirac(params, basis, quad),
        }
    }

    /// Matrix dimension for a basis of `n_basis` functions.
    pub fn dimension(&self, n_basis: usize) -> usize {
        match self {
            Self::Schrodinger(_) => n_basis,
            Self::Dirac(_) => 2 * n_basis,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Schrodinger(p) => p.label(),
            Self::Dirac(_) => "dirac_coulomb",
        }
    }
}

/// Matrices of the projected operator and of the projected square.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub h: DMatrix<f64>,
    pub h2: DMatrix<f64>,
    pub basis: BasisSpec,
    pub problem_tag: String,
    norm: f64,
}

impl OperatorPair {
    pub fn new(h: DMatrix<f64>, h2: DMatrix<f64>, basis: BasisSpec, problem_tag: impl Into<String>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), found: h.ncols() });
        }
        if h2.shape() != h.shape() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), found: h2.nrows() });
        }
        let h = symmetrize(h);
        let h2 = symmetrize(h2);
        let norm = induced_one_norm(&h);
        Ok(Self { h, h2, basis, problem_tag: problem_tag.into(), norm })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Induced 1-norm of `h` (max absolute column sum), an upper bound on
    /// its spectral norm.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `h2 - h h`, the Gram matrix of the out-of-basis images.
    pub fn leakage(&self) -> DMatrix<f64> {
        symmetrize(&self.h2 - &self.h * &self.h)
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn induced_one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn check_quadrature(basis: &BasisSpec, quad: &QuadratureRule) -> Result<()> {
    let inside = quad.nodes().first().is_some_and(|&u| u > 0.0)
        && quad.nodes().last().is_some_and(|&u| u < basis.box_length());
    if !inside {
        return Err(invalid("quadrature nodes must lie strictly inside the basis interval"));
    }
    if quad.len() < basis.n_basis() {
        return Err(Error::DimensionMismatch { expected: basis.n_basis(), found: quad.len() });
    }
    Ok(())
}

fn potential_on_nodes(v: impl Fn(f64) -> f64, radius: &[f64]) -> Result<Vec<f64>> {
    radius
        .iter()
        .map(|&r| {
            let value = v(r);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::SingularPotential { r })
            }
        })
        .collect()
}

/// Project `-½ d²/dr² + V` onto the basis.
pub fn assemble_schrodinger(potential: &Potential, basis: &BasisSpec, quad: &QuadratureRule) -> Result<OperatorPair> {
    check_quadrature(basis, quad)?;
    let table = basis.tabulate(quad);
    let v = potential_on_nodes(|r| potential.value(r), &table.radius)?;

    let mut images = &table.d2 * -0.5;
    for (row, &vr) in v.iter().enumerate() {
        let scaled = table.values.row(row) * vr;
        images.row_mut(row).add_assign(&scaled);
    }
    let h = table.weighted_gram(&table.values, &images);
    let h2 = table.weighted_gram(&images, &images);
    OperatorPair::new(h, h2, *basis, potential.label())
}

/// Project the radial Dirac-Coulomb operator
///
/// ```text
/// [ V + c²             c(-d/dr + κ/r) ]
/// [ c(d/dr + κ/r)      V - c²         ]
/// ```
///
/// with both components expanded in the same `N` radial functions. Basis
/// spinors `0..N` are large-component, `N..2N` small-component.
pub fn assemble_dirac(params: &DiracParams, basis: &BasisSpec, quad: &QuadratureRule) -> Result<OperatorPair> {
    let params = params.validated()?;
    check_quadrature(basis, quad)?;
    let table = basis.tabulate(quad);
    let DiracParams { z, kappa, c } = params;
    let kappa = f64::from(kappa);
    let rest = c * c;
    let v = potential_on_nodes(|r| -z / r, &table.radius)?;

    let n_nodes = table.n_nodes();
    let n = basis.n_basis();
    // rows 0..n_nodes: large component, n_nodes..2 n_nodes: small component
    let mut spinors = DMatrix::zeros(2 * n_nodes, 2 * n);
    let mut images = DMatrix::zeros(2 * n_nodes, 2 * n);
    for row in 0..n_nodes {
        let r = table.radius[row];
        let (vr, kr) = (v[row], kappa / r);
        for k in 0..n {
            let psi = table.values[(row, k)];
            let dpsi = table.d1[(row, k)];
            spinors[(row, k)] = psi;
            spinors[(n_nodes + row, n + k)] = psi;
            // large-component spinor
            images[(row, k)] = (vr + rest) * psi;
            images[(n_nodes + row, k)] = c * (dpsi + kr * psi);
            // small-component spinor
            images[(row, n + k)] = c * (-dpsi + kr * psi);
            images[(n_nodes + row, n + k)] = (vr - rest) * psi;
        }
    }
    let mut weights = table.weights.clone();
    weights.extend_from_within(..);
    let h = weighted_gram(&weights, &spinors, &images);
    let h2 = weighted_gram(&weights, &images, &images);
    OperatorPair::new(h, h2, *basis, "dirac_coulomb")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{quadrature_rule, DEFAULT_OVERSAMPLING};
    use crate::eigensolve::eigh_dense;
    use std::f64::consts::PI;

    fn schrodinger(potential: Potential, n: usize, l: f64) -> OperatorPair {
        let basis = BasisSpec::sine_box(n, l).unwrap();
        let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
        assemble_schrodinger(&potential, &basis, &quad).unwrap()
    }

    #[test]
    fn free_particle_is_diagonal_and_leak_free() {
        let (n, l) = (30, 9.0);
        let ops = schrodinger(Potential::Free, n, l);
        for i in 0..n {
            let kin = 0.5 * ((i + 1) as f64 * PI / l).powi(2);
            assert!((ops.h[(i, i)] - kin).abs() < 1e-12 * kin);
            assert!((ops.h2[(i, i)] - kin * kin).abs() < 1e-12 * kin * kin);
        }
        let scale = ops.norm().powi(2);
        assert!((ops.h.clone() - DMatrix::from_diagonal(&ops.h.diagonal())).amax() < 1e-12 * ops.norm());
        assert!(ops.leakage().amax() < 1e-12 * scale);
    }

    #[test]
    fn harmonic_ground_state() {
        let ops = schrodinger(Potential::harmonic(1.0, 10.0).unwrap(), 200, 20.0);
        let eig = eigh_dense(&ops.h).unwrap();
        assert!((eig.values[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn hydrogen_ground_state() {
        let ops = schrodinger(Potential::coulomb(1.0, 0).unwrap(), 300, 40.0);
        let eig = eigh_dense(&ops.h).unwrap();
        assert!((eig.values[0] + 0.5).abs() < 1e-3);
    }

    #[test]
    fn matrices_symmetric() {
        for potential in [
            Potential::coulomb(1.0, 0).unwrap(),
            Potential::square_well(5.0, 3.0, 6.0).unwrap(),
        ] {
            let ops = schrodinger(potential, 40, 12.0);
            assert!((&ops.h - ops.h.transpose()).amax() < 1e-12);
            assert!((&ops.h2 - ops.h2.transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn mapped_basis_reproduces_harmonic_spectrum() {
        let basis = BasisSpec::mapped_sine(120, 20.0, 0.5).unwrap();
        let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
        let ops = assemble_schrodinger(&Potential::harmonic(1.0, 10.0).unwrap(), &basis, &quad).unwrap();
        let eig = eigh_dense(&ops.h).unwrap();
        for n in 0..4 {
            assert!((eig.values[n] - (n as f64 + 0.5)).abs() < 1e-6, "level {n}: {}", eig.values[n]);
        }
        assert!((&ops.h - ops.h.transpose()).amax() < 1e-12);
    }

    #[test]
    fn singular_potential_rejected() {
        let basis = BasisSpec::sine_box(4, 1.0).unwrap();
        let quad = quadrature_rule(&basis, 4).unwrap();
        let node = quad.nodes()[3];
        let bad = Potential::CoulombRadial { z: f64::INFINITY, ell: 0, soft_core: 0.0 };
        assert!(matches!(assemble_schrodinger(&bad, &basis, &quad), Err(Error::SingularPotential { .. })));
        assert!(node > 0.0);
    }

    #[test]
    fn quadrature_outside_box_rejected() {
        let basis = BasisSpec::sine_box(4, 1.0).unwrap();
        let quad = QuadratureRule::gauss_legendre(24, 0.0, 2.0).unwrap();
        assert!(assemble_schrodinger(&Potential::Free, &basis, &quad).is_err());
        let coarse = QuadratureRule::gauss_legendre(3, 0.0, 1.0).unwrap();
        assert!(matches!(
            assemble_schrodinger(&Potential::Free, &basis, &coarse),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dirac_block_structure() {
        let params = DiracParams::hydrogenic(1.0, -1).unwrap();
        let basis = BasisSpec::sine_box(20, 10.0).unwrap();
        let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
        let ops = assemble_dirac(&params, &basis, &quad).unwrap();
        assert_eq!(ops.dim(), 40);
        assert_eq!(ops.h, ops.h.transpose());
        let c2 = params.rest_energy();
        // diagonal blocks differ by exactly 2c² on the diagonal
        for i in 0..20 {
            assert!((ops.h[(i, i)] - ops.h[(20 + i, 20 + i)] - 2.0 * c2).abs() < 1e-8 * c2);
        }
    }

    #[test]
    fn dirac_near_zero_charge_gives_free_kinetic_energy() {
        let l = 10.0;
        let params = DiracParams::hydrogenic(1e-12, -1).unwrap();
        let expected = 0.5 * (PI / l).powi(2);
        // same-basis components converge from below, roughly as 1/N
        let mut previous = f64::INFINITY;
        for n in [30, 60, 120, 240] {
            let basis = BasisSpec::sine_box(n, l).unwrap();
            let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
            let ops = assemble_dirac(&params, &basis, &quad).unwrap();
            let eig = eigh_dense(&ops.h).unwrap();
            let c2 = params.rest_energy();
            let lowest_positive = eig.values.iter().copied().find(|&e| e > 0.0).unwrap();
            let error = (lowest_positive - c2 - expected).abs();
            assert!(lowest_positive - c2 < expected);
            assert!(error < previous, "N = {n}: {error} vs {previous}");
            previous = error;
        }
        assert!(previous < 0.02 * expected);
    }
}
