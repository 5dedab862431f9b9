use crate::error::{invalid, Result};

/// Gauss-Legendre nodes and weights on an open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss-Legendre rule on `(a, b)`, nodes ascending.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("quadrature needs at least one node"));
        }
        if !(b > a) {
            return Err(invalid(format!("empty interval ({a}, {b})")));
        }
        let (x, w) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let nodes = x.iter().map(|&xi| a + half * (xi + 1.0)).collect();
        let weights = w.iter().map(|&wi| half * wi).collect();
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Nodes (ascending) and weights on (-1, 1), by Newton iteration on the
/// three-term Legendre recurrence. Nodes are mirrored so the rule is exactly
/// symmetric.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1e-300) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_constant() {
        let rule = QuadratureRule::gauss_legendre(60, 0.0, 20.0).unwrap();
        assert!((rule.integrate(|_| 1.0) - 20.0).abs() < 1e-12 * 20.0);
    }

    #[test]
    fn exact_for_polynomials_below_degree_2n() {
        let n = 7;
        let rule = QuadratureRule::gauss_legendre(n, 0.0, 2.0).unwrap();
        for deg in 0..2 * n as i32 {
            let exact = 2f64.powi(deg + 1) / (deg + 1) as f64;
            assert_relative_eq!(rule.integrate(|x| x.powi(deg)), exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn nodes_strictly_interior_and_increasing() {
        for n in [1, 2, 5, 64, 601, 2400] {
            let rule = QuadratureRule::gauss_legendre(n, 0.0, 3.0).unwrap();
            assert!(rule.nodes()[0] > 0.0);
            assert!(*rule.nodes().last().unwrap() < 3.0);
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            assert_relative_eq!(total, 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn sine_squared_half_length() {
        let l = 13.0;
        let rule = QuadratureRule::gauss_legendre(120, 0.0, l).unwrap();
        let v = rule.integrate(|u| (PI * u / l).sin().powi(2));
        assert!((v - l / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(QuadratureRule::gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(QuadratureRule::gauss_legendre(4, 1.0, 1.0).is_err());
    }
}
