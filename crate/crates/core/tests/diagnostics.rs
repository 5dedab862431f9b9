use nalgebra::DMatrix;
use proptest::prelude::*;
use spuridium_core::basis::{quadrature_rule, BasisSpec, DEFAULT_OVERSAMPLING};
use spuridium_core::diagnostics::{delta_diagnostic, squared_operator_gap};
use spuridium_core::eigensolve::{eigh_dense, LanczosState, StartVector, StepOutcome};
use spuridium_core::hamiltonians::{OperatorPair, Potential, Problem};

fn operators(problem: Problem, basis: BasisSpec) -> OperatorPair {
    let quad = quadrature_rule(&basis, DEFAULT_OVERSAMPLING).unwrap();
    problem.assemble(&basis, &quad).unwrap()
}

fn hydrogen(n: usize) -> OperatorPair {
    operators(Problem::Schrodinger(Potential::coulomb(1.0, 0).unwrap()), BasisSpec::sine_box(n, 40.0).unwrap())
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    eigh_dense(m).unwrap().values[0]
}

#[test]
fn delta_equals_leakage_quadratic_form() {
    let ops = hydrogen(80);
    let leak = ops.leakage();
    let eig = eigh_dense(&ops.h).unwrap();
    for pair in eig.ritz_pairs(80).iter().step_by(7) {
        let rec = delta_diagnostic(pair, &ops).unwrap();
        let form = pair.vector.dot(&(&leak * &pair.vector));
        let scale = ops.norm().powi(2);
        assert!((rec.delta - form).abs() < 1e-11 * scale, "{} vs {form}", rec.delta);
        assert!(squared_operator_gap(&pair.vector, &ops).unwrap() > -1e-11 * scale);
    }
}

#[test]
fn hydrogen_ground_delta_decreases_with_basis_size() {
    let deltas: Vec<f64> = [100, 200, 300]
        .into_iter()
        .map(|n| {
            let ops = hydrogen(n);
            let eig = eigh_dense(&ops.h).unwrap();
            delta_diagnostic(&eig.ritz_pairs(n)[0], &ops).unwrap().delta_rel
        })
        .collect();
    assert!(deltas[1] < deltas[0] && deltas[2] < deltas[1], "{deltas:?}");
}

#[test]
fn full_lanczos_run_reproduces_dense_spectrum() {
    let ops = hydrogen(200);
    let dense = eigh_dense(&ops.h).unwrap();
    for start in [StartVector::Ones, StartVector::Random { seed: 3 }] {
        let mut state = LanczosState::new(start.build(200)).unwrap();
        while state.step(&ops.h).unwrap() == StepOutcome::Extended {}
        let ritz = state.ritz_pairs().unwrap();
        let tol = 1e-8 * (1.0 + ops.norm());
        for e in dense.values.iter().filter(|&&e| e < 0.0) {
            let nearest = ritz.iter().map(|p| (p.value - e).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest < tol, "{start:?}: level {e} off by {nearest}");
        }
        assert!(state.orthogonality_loss() < 1e-10);
    }
}

#[test]
fn mapped_basis_leakage_is_psd() {
    let basis = BasisSpec::mapped_sine(80, 30.0, 2.0).unwrap();
    let ops = operators(Problem::Schrodinger(Potential::coulomb(1.0, 0).unwrap()), basis);
    assert!(min_eig(&ops.leakage()) >= -1e-8 * (1.0 + ops.norm().powi(2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn leakage_is_psd_across_parameters(omega in 0.2f64..3.0, box_length in 8.0f64..30.0, n in 10usize..60) {
        let potential = Potential::harmonic(omega, box_length / 2.0).unwrap();
        let ops = operators(Problem::Schrodinger(potential), BasisSpec::sine_box(n, box_length).unwrap());
        prop_assert!(min_eig(&ops.leakage()) >= -1e-8 * (1.0 + ops.norm().powi(2)));
    }

    #[test]
    fn square_well_delta_nonnegative(depth in 0.5f64..5.0, width in 1.0f64..6.0) {
        let potential = Potential::square_well(depth, width, 10.0).unwrap();
        let ops = operators(Problem::Schrodinger(potential), BasisSpec::sine_box(40, 20.0).unwrap());
        let eig = eigh_dense(&ops.h).unwrap();
        for pair in eig.ritz_pairs(40) {
            prop_assert!(squared_operator_gap(&pair.vector, &ops).unwrap() > -1e-10 * ops.norm().powi(2));
        }
    }
}
