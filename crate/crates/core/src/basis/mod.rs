//! Orthonormal sine bases on `(0, L)`, optionally coordinate-mapped.
//!
//! The basis functions in the coordinate `u` are
//! `phi_k(u) = sqrt(2/L) sin(k pi u / L)`, `k = 1..=N`. For a mapped basis
//! the physical radial functions are `psi_k(r) = phi_k(u(r)) / sqrt(J(u))`
//! with `J = dr/du`, which keeps them orthonormal in `dr`.

mod map;
mod quadrature;

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

pub use map::{build_coordinate_map, CoordinateMap, MapKind};
pub use quadrature::QuadratureRule;

/// Quadrature nodes per basis function used when none is requested.
pub const DEFAULT_OVERSAMPLING: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    SineBox,
    MappedSine,
}

/// A finite sine basis: its size, interval and coordinate map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    kind: BasisKind,
    n_basis: usize,
    box_length: f64,
    map_strength: f64,
}

pub fn build_sine_basis(n_basis: usize, box_length: f64) -> Result<BasisSpec> {
    BasisSpec::sine_box(n_basis, box_length)
}

impl BasisSpec {
    pub fn sine_box(n_basis: usize, box_length: f64) -> Result<Self> {
        Self::new(BasisKind::SineBox, n_basis, box_length, 0.0)
    }

    /// Sine basis in the rational-mapped coordinate.
    pub fn mapped_sine(n_basis: usize, box_length: f64, map_strength: f64) -> Result<Self> {
        Self::new(BasisKind::MappedSine, n_basis, box_length, map_strength)
    }

    pub fn new(kind: BasisKind, n_basis: usize, box_length: f64, map_strength: f64) -> Result<Self> {
        if n_basis == 0 {
            return Err(invalid("basis needs at least one function"));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(invalid(format!("box length must be positive, got {box_length}")));
        }
        if !(map_strength >= 0.0 && map_strength.is_finite()) {
            return Err(invalid(format!("map strength must be nonnegative, got {map_strength}")));
        }
        if kind == BasisKind::SineBox && map_strength != 0.0 {
            return Err(invalid("an unmapped sine box has map strength 0"));
        }
        Ok(Self { kind, n_basis, box_length, map_strength })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn map_strength(&self) -> f64 {
        self.map_strength
    }

    /// Same basis family with a different number of functions.
    pub fn with_size(&self, n_basis: usize) -> Result<Self> {
        Self::new(self.kind, n_basis, self.box_length, self.map_strength)
    }

    pub fn coordinate_map(&self) -> CoordinateMap {
        let kind = match self.kind {
            BasisKind::SineBox => MapKind::Identity,
            BasisKind::MappedSine => MapKind::Rational,
        };
        CoordinateMap::new(kind, self.box_length, self.map_strength)
            .expect("basis spec was validated on construction")
    }

    fn check(&self, k: usize, u: f64) -> Result<()> {
        if k == 0 || k > self.n_basis {
            return Err(Error::IndexOutOfRange { index: k, n_basis: self.n_basis });
        }
        if !(0.0..=self.box_length).contains(&u) {
            return Err(invalid(format!("u = {u} outside [0, {}]", self.box_length)));
        }
        Ok(())
    }

    /// `phi_k(u)`, exactly zero at both endpoints.
    pub fn value(&self, k: usize, u: f64) -> Result<f64> {
        self.check(k, u)?;
        Ok(sine_terms(k, u, self.box_length).0)
    }

    /// `phi_k'(u)`.
    pub fn d1(&self, k: usize, u: f64) -> Result<f64> {
        self.check(k, u)?;
        Ok(sine_terms(k, u, self.box_length).1)
    }

    /// `phi_k''(u)`.
    pub fn d2(&self, k: usize, u: f64) -> Result<f64> {
        self.check(k, u)?;
        Ok(sine_terms(k, u, self.box_length).2)
    }

    /// Tabulate the physical radial functions and their `r` derivatives at
    /// the quadrature nodes.
    pub fn tabulate(&self, quad: &QuadratureRule) -> BasisTable {
        let map = self.coordinate_map();
        let n_nodes = quad.len();
        let n = self.n_basis;
        let mut radius = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        let mut values = DMatrix::zeros(n_nodes, n);
        let mut d1 = DMatrix::zeros(n_nodes, n);
        let mut d2 = DMatrix::zeros(n_nodes, n);

        for (row, (&u, &w)) in quad.nodes().iter().zip(quad.weights()).enumerate() {
            let jac = map.jacobian(u);
            radius.push(map.forward(u));
            weights.push(w * jac);
            let jac1 = map.jacobian_d1(u);
            let jac2 = map.jacobian_d2(u);
            for k in 1..=n {
                let (chi, chi1, chi2) = sine_terms(k, u, self.box_length);
                let (p, p1, p2) = radial_derivatives(chi, chi1, chi2, jac, jac1, jac2);
                values[(row, k - 1)] = p;
                d1[(row, k - 1)] = p1;
                d2[(row, k - 1)] = p2;
            }
        }
        BasisTable { radius, weights, values, d1, d2 }
    }
}

/// Radial basis functions sampled on a quadrature grid. Rows are nodes,
/// columns are basis functions.
#[derive(Debug, Clone)]
pub struct BasisTable {
    /// Physical coordinate `r` at each node.
    pub radius: Vec<f64>,
    /// Weights for integrals in `dr`.
    pub weights: Vec<f64>,
    pub values: DMatrix<f64>,
    /// `d psi / dr`.
    pub d1: DMatrix<f64>,
    /// `d² psi / dr²`.
    pub d2: DMatrix<f64>,
}

impl BasisTable {
    pub fn n_nodes(&self) -> usize {
        self.radius.len()
    }

    /// `sum_nodes w f(node) g(node)` for columns `f` of `left` and `g` of
    /// `right`, i.e. `leftᵀ W right`.
    pub fn weighted_gram(&self, left: &DMatrix<f64>, right: &DMatrix<f64>) -> DMatrix<f64> {
        weighted_gram(&self.weights, left, right)
    }
}

/// `leftᵀ diag(weights) right`.
pub fn weighted_gram(weights: &[f64], left: &DMatrix<f64>, right: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(weights.len(), right.nrows(), "one weight per row");
    let mut scaled = right.clone();
    for (mut row, &w) in scaled.row_iter_mut().zip(weights) {
        row *= w;
    }
    left.tr_mul(&scaled)
}

/// Gauss-Legendre rule with `oversampling * n_basis` nodes on `(0, L)`.
pub fn quadrature_rule(spec: &BasisSpec, oversampling: usize) -> Result<QuadratureRule> {
    if oversampling < 2 {
        return Err(invalid(format!("oversampling must be at least 2, got {oversampling}")));
    }
    QuadratureRule::gauss_legendre(oversampling * spec.n_basis, 0.0, spec.box_length)
}

/// `(phi, phi', phi'')` with the argument reflected about `L/2` so that
/// `phi(L)` is exactly zero.
fn sine_terms(k: usize, u: f64, box_length: f64) -> (f64, f64, f64) {
    let kf = k as f64;
    let wave = kf * PI / box_length;
    let norm = (2.0 / box_length).sqrt();
    let (s, c) = if u <= 0.5 * box_length {
        (wave * u).sin_cos()
    } else {
        // sin(k pi - x) = (-1)^(k+1) sin x, cos(k pi - x) = (-1)^k cos x
        let (s, c) = (wave * (box_length - u)).sin_cos();
        if k % 2 == 1 {
            (s, -c)
        } else {
            (-s, c)
        }
    };
    let value = norm * s;
    (value, norm * wave * c, -wave * wave * value)
}

/// Value and `r` derivatives of `chi(u) / sqrt(J(u))`.
fn radial_derivatives(chi: f64, chi1: f64, chi2: f64, jac: f64, jac1: f64, jac2: f64) -> (f64, f64, f64) {
    let inv_sqrt = jac.powf(-0.5);
    let inv_32 = inv_sqrt / jac;
    let inv_52 = inv_32 / jac;
    let g = chi * inv_sqrt;
    let g1 = chi1 * inv_sqrt - 0.5 * chi * jac1 * inv_32;
    let g2 = chi2 * inv_sqrt - chi1 * jac1 * inv_32 - 0.5 * chi * jac2 * inv_32
        + 0.75 * chi * jac1 * jac1 * inv_52;
    let psi1 = g1 / jac;
    let psi2 = (g2 * jac - g1 * jac1) / (jac * jac * jac);
    (g, psi1, psi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_function_on_pi_box() {
        let spec = build_sine_basis(1, PI).unwrap();
        for u in [0.3, 1.0, 2.2] {
            assert_relative_eq!(spec.value(1, u).unwrap(), (2.0 / PI).sqrt() * u.sin(), max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(build_sine_basis(0, 1.0).is_err());
        assert!(build_sine_basis(3, -1.0).is_err());
        assert!(BasisSpec::new(BasisKind::SineBox, 3, 1.0, 0.5).is_err());
        assert!(BasisSpec::mapped_sine(3, 1.0, -0.1).is_err());
    }

    #[test]
    fn index_out_of_range() {
        let spec = build_sine_basis(4, 1.0).unwrap();
        assert_eq!(spec.value(5, 0.5), Err(Error::IndexOutOfRange { index: 5, n_basis: 4 }));
        assert!(spec.value(0, 0.5).is_err());
        assert!(spec.d1(2, 1.5).is_err());
    }

    #[test]
    fn vanishes_exactly_at_endpoints() {
        let spec = build_sine_basis(40, 7.3).unwrap();
        for k in 1..=40 {
            assert_eq!(spec.value(k, 0.0).unwrap(), 0.0);
            assert_eq!(spec.value(k, 7.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn second_derivative_identity() {
        let spec = build_sine_basis(9, 3.0).unwrap();
        for k in 1..=9 {
            for u in [0.1, 1.4, 2.9] {
                let wave = k as f64 * PI / 3.0;
                assert_relative_eq!(
                    spec.d2(k, u).unwrap(),
                    -wave * wave * spec.value(k, u).unwrap(),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn first_derivative_at_midpoint() {
        let spec = build_sine_basis(1, 2.0).unwrap();
        assert!(spec.d1(1, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn overlap_small_basis_against_trapezoid() {
        let spec = build_sine_basis(3, 1.0).unwrap();
        let quad = quadrature_rule(&spec, 6).unwrap();
        let overlap = |i: usize, j: usize| {
            quad.integrate(|u| spec.value(i, u).unwrap() * spec.value(j, u).unwrap())
        };
        // independent composite trapezoid with 10^5 panels
        let panels = 100_000;
        let h = 1.0 / panels as f64;
        let trap = |i: usize, j: usize| {
            (1..panels)
                .map(|m| {
                    let u = m as f64 * h;
                    spec.value(i, u).unwrap() * spec.value(j, u).unwrap()
                })
                .sum::<f64>()
                * h
        };
        assert!((overlap(2, 2) - 1.0).abs() < 1e-12);
        assert!(overlap(1, 3).abs() < 1e-12);
        assert!((overlap(2, 2) - trap(2, 2)).abs() < 1e-9);
        assert!((overlap(1, 3) - trap(1, 3)).abs() < 1e-9);
    }

    #[test]
    fn orthogonality_of_phi5_phi7() {
        let spec = build_sine_basis(10, 15.0).unwrap();
        let quad = quadrature_rule(&spec, 6).unwrap();
        let v = quad.integrate(|u| spec.value(5, u).unwrap() * spec.value(7, u).unwrap());
        assert!(v.abs() < 1e-10);
        let panels = 1_000_000;
        let h = 15.0 / panels as f64;
        let trap: f64 = (1..panels)
            .map(|m| {
                let u = m as f64 * h;
                spec.value(5, u).unwrap() * spec.value(7, u).unwrap()
            })
            .sum::<f64>()
            * h;
        assert!(trap.abs() < 1e-10);
    }

    #[test]
    fn overlap_matrix_is_identity() {
        for spec in [
            build_sine_basis(60, 11.0).unwrap(),
            BasisSpec::mapped_sine(60, 11.0, 1.5).unwrap(),
        ] {
            for oversampling in [4, 6] {
                let quad = quadrature_rule(&spec, oversampling).unwrap();
                let table = spec.tabulate(&quad);
                let s = table.weighted_gram(&table.values, &table.values);
                let dev = (s - DMatrix::<f64>::identity(60, 60)).amax();
                assert!(dev < 1e-10, "overlap deviation {dev:e}");
            }
        }
    }

    #[test]
    fn oversampling_must_be_at_least_two() {
        let spec = build_sine_basis(5, 1.0).unwrap();
        assert!(quadrature_rule(&spec, 1).is_err());
        assert_eq!(quadrature_rule(&spec, 2).unwrap().len(), 10);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let spec = build_sine_basis(12, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = 1e-4;
        for _ in 0..20 {
            let u: f64 = rng.gen_range(0.01..4.99);
            let k = rng.gen_range(1..=12);
            let f = |x: f64| spec.value(k, x).unwrap();
            let fd1 = (f(u + h) - f(u - h)) / (2.0 * h);
            let fd2 = (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
            let scale = 1.0 + (k as f64 * PI / 5.0).powi(2);
            assert!((spec.d1(k, u).unwrap() - fd1).abs() < 1e-6 * scale);
            assert!((spec.d2(k, u).unwrap() - fd2).abs() < 1e-6 * scale * scale.sqrt() * 10.0);
        }
    }

    #[test]
    fn mapped_radial_derivatives_match_finite_differences() {
        let spec = BasisSpec::mapped_sine(6, 8.0, 2.0).unwrap();
        let map = spec.coordinate_map();
        let quad = QuadratureRule::gauss_legendre(17, 0.0, 8.0).unwrap();
        let table = spec.tabulate(&quad);
        // psi_k as a function of r through the inverse map
        let psi = |k: usize, r: f64| {
            let u = map.inverse(r);
            spec.value(k, u).unwrap() / map.jacobian(u).sqrt()
        };
        let h = 1e-4;
        for (row, &r) in table.radius.iter().enumerate() {
            for k in 1..=6 {
                let fd1 = (psi(k, r + h) - psi(k, r - h)) / (2.0 * h);
                let fd2 = (psi(k, r + h) - 2.0 * psi(k, r) + psi(k, r - h)) / (h * h);
                assert_relative_eq!(table.values[(row, k - 1)], psi(k, r), epsilon = 1e-13);
                assert!((table.d1[(row, k - 1)] - fd1).abs() < 1e-6);
                assert!((table.d2[(row, k - 1)] - fd2).abs() < 1e-5);
            }
        }
    }
}
