use crate::basis::{BasisSpec, QuadratureRule};
use crate::eigensolve::RitzPair;
use crate::error::{Error, Result};
use crate::hamiltonians::{Potential, Problem};

const BISECTION_STEPS: usize = 80;

fn amplitude(basis: &BasisSpec, coefficients: &[f64], u: f64) -> Result<f64> {
    coefficients.iter().enumerate().try_fold(0.0, |acc, (k, c)| Ok(acc + c * basis.value(k + 1, u)?))
}

fn turning_point(excess: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_positive = excess(lo) > 0.0;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (excess(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn classically_forbidden(potential: &Potential, basis: &BasisSpec, quad: &QuadratureRule, energy: f64) -> Vec<(f64, f64)> {
    let map = basis.coordinate_map();
    let excess = |u: f64| potential.value(map.forward(u)) - energy;
    let nodes = quad.nodes();
    let mut cuts = vec![0.0];
    for pair in nodes.windows(2) {
        if (excess(pair[0]) > 0.0) != (excess(pair[1]) > 0.0) {
            cuts.push(turning_point(excess, pair[0], pair[1]));
        }
    }
    cuts.push(basis.box_length());
    cuts.windows(2)
        .filter(|seg| seg[1] > seg[0] && excess(0.5 * (seg[0] + seg[1])) > 0.0)
        .map(|seg| (seg[0], seg[1]))
        .collect()
}

/// Probability weight of a state in the region where `V(r) > e`, with `e`
/// the Ritz value. Uses the probability density `|psi(r)|² dr`, which in
/// the sine coordinate is `chi(u)² du`; each forbidden interval gets its
/// own Gauss-Legendre rule with at least the node density of `quad`.
pub fn forbidden_fraction(pair: &RitzPair, problem: &Problem, basis: &BasisSpec, quad: &QuadratureRule) -> Result<f64> {
    let potential = match problem {
        Problem::Schrodinger(p) => p,
        Problem::Dirac(_) => return Err(Error::NotApplicable("forbidden-region fraction of a Dirac spinor")),
    };
    if pair.vector.len() != basis.n_basis() {
        return Err(Error::DimensionMismatch { expected: basis.n_basis(), found: pair.vector.len() });
    }
    let coefficients = pair.vector.as_slice();
    let density = |u: f64| amplitude(basis, coefficients, u).map(|a| a * a);

    let mut total = 0.0;
    for (&u, &w) in quad.nodes().iter().zip(quad.weights()) {
        total += w * density(u)?;
    }
    if total <= 0.0 {
        return Err(Error::InvalidArgument("state has zero norm".into()));
    }

    let length = basis.box_length();
    let mut forbidden = 0.0;
    for (a, b) in classically_forbidden(potential, basis, quad, pair.value) {
        let n = 16 + (quad.len() as f64 * (b - a) / length).ceil() as usize;
        let rule = QuadratureRule::gauss_legendre(n, a, b)?;
        for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
            forbidden += w * density(u)?;
        }
    }
    Ok((forbidden / total).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{quadrature_rule, DEFAULT_OVERSAMPLING};
    use crate::eigensolve::eigh_dense;
    use crate::hamiltonians::DiracParams;

    fn lowest(problem: &Problem, basis: &BasisSpec) -> (RitzPair, QuadratureRule) {
        let quad = quadrature_rule(basis, DEFAULT_OVERSAMPLING).unwrap();
        let ops = problem.assemble(basis, &quad).unwrap();
        let eig = eigh_dense(&ops.h).unwrap();
        (eig.ritz_pairs(basis.n_basis()).swap_remove(0), quad)
    }

    #[test]
    fn harmonic_ground_state_matches_erfc() {
        let basis = BasisSpec::sine_box(120, 20.0).unwrap();
        let problem = Problem::Schrodinger(Potential::harmonic(1.0, 10.0).unwrap());
        let (pair, quad) = lowest(&problem, &basis);
        let f = forbidden_fraction(&pair, &problem, &basis, &quad).unwrap();
        // erfc(1)
        assert!((f - 0.157_299_207_050_285_1).abs() < 1e-6, "fraction {f}");
    }

    #[test]
    fn hydrogen_ground_state() {
        // 1s: weight beyond r = 2 is 13 e^-4
        let basis = BasisSpec::sine_box(300, 30.0).unwrap();
        let problem = Problem::Schrodinger(Potential::coulomb(1.0, 0).unwrap());
        let (pair, quad) = lowest(&problem, &basis);
        let f = forbidden_fraction(&pair, &problem, &basis, &quad).unwrap();
        assert!((f - 13.0 * (-4.0f64).exp()).abs() < 2e-3, "fraction {f}");
    }

    #[test]
    fn free_particle_has_no_forbidden_region() {
        let basis = BasisSpec::sine_box(10, 1.0).unwrap();
        let problem = Problem::Schrodinger(Potential::Free);
        let (pair, quad) = lowest(&problem, &basis);
        assert_eq!(forbidden_fraction(&pair, &problem, &basis, &quad).unwrap(), 0.0);
    }

    #[test]
    fn bounded_and_rejects_dirac() {
        let basis = BasisSpec::sine_box(30, 20.0).unwrap();
        let problem = Problem::Schrodinger(Potential::square_well(2.0, 4.0, 10.0).unwrap());
        let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
        let eig = eigh_dense(&problem.assemble(&basis, &quad).unwrap().h).unwrap();
        for pair in eig.ritz_pairs(30) {
            let f = forbidden_fraction(&pair, &problem, &basis, &quad).unwrap();
            assert!((0.0..=1.0).contains(&f));
        }
        let dirac = Problem::Dirac(DiracParams::hydrogenic(1.0, -1).unwrap());
        let pair = eig.ritz_pairs(30).swap_remove(0);
        assert!(matches!(forbidden_fraction(&pair, &dirac, &basis, &quad), Err(Error::NotApplicable(_))));
    }
}
