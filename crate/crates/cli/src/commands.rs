use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use spuridium_core::basis::{quadrature_rule, BasisSpec, QuadratureRule};
use spuridium_core::diagnostics::{
    delta_diagnostic, forbidden_fraction, trk_sum_rule, ClassifyConfig, DeltaRecord, TRK_COMPLETE,
};
use spuridium_core::eigensolve::{
    assign_tracks, eigh_dense, EigenDecomposition, LanczosState, RitzPair, StepOutcome, TrackerConfig,
};
use spuridium_core::hamiltonians::{OperatorPair, Problem};

use crate::config::{Resolved, RunConfig, SolverKind};
use crate::error::CliError;
use crate::report::{classified_rows, Adequacy, Report, SumRuleReport, SumRuleRow};

/// Environment variable capping the number of scan points solved at once.
pub const THREADS_ENV: &str = "SPURIDIUM_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var(THREADS_ENV) {
        match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {text:?}"))),
        }
    }
    builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// Ritz values and diagnostics of one scan point or Lanczos step.
struct Step {
    values: Vec<f64>,
    records: Vec<DeltaRecord>,
    /// Forbidden-region fraction per state, filled on the final step.
    forbidden: Vec<Option<f64>>,
}

fn measure(
    pairs: &[RitzPair],
    ops: &OperatorPair,
    problem: &Problem,
    basis: &BasisSpec,
    with_forbidden: bool,
    oversampling: usize,
) -> Result<Step, CliError> {
    let records = pairs.iter().map(|p| delta_diagnostic(p, ops)).collect::<Result<Vec<_>, _>>()?;
    let forbidden = if with_forbidden && matches!(problem, Problem::Schrodinger(_)) {
        let quad = quadrature_rule(basis, oversampling)?;
        pairs
            .iter()
            .map(|p| forbidden_fraction(p, problem, basis, &quad).map(Some))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![None; pairs.len()]
    };
    Ok(Step { values: pairs.iter().map(|p| p.value).collect(), records, forbidden })
}

fn trk_adequacy(eig: &EigenDecomposition, basis: &BasisSpec, quad: &QuadratureRule) -> Result<Adequacy, CliError> {
    let trk_sum = trk_sum_rule(eig, basis, quad, 0)?;
    Ok(Adequacy { n_basis: basis.n_basis(), trk_sum, trk_deviation: (trk_sum - TRK_COMPLETE).abs() })
}

fn dense_scan(config: &RunConfig, resolved: &Resolved) -> Result<(Vec<Step>, Option<Adequacy>), CliError> {
    let oversampling = config.diagnostics.oversampling;
    let last = resolved.bases.len() - 1;
    let problem = &resolved.problem;
    let results = thread_pool()?.install(|| {
        resolved
            .bases
            .par_iter()
            .enumerate()
            .map(|(i, basis)| -> Result<(Step, Option<Adequacy>), CliError> {
                let quad = quadrature_rule(basis, oversampling)?;
                let ops = problem.assemble(basis, &quad)?;
                let eig = eigh_dense(&ops.h)?;
                let pairs = eig.ritz_pairs(basis.n_basis());
                let step = measure(&pairs, &ops, problem, basis, i == last, oversampling)?;
                let adequacy = if i == last && matches!(problem, Problem::Schrodinger(_)) {
                    Some(trk_adequacy(&eig, basis, &quad)?)
                } else {
                    None
                };
                Ok((step, adequacy))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let adequacy = results.last().and_then(|r| r.1.clone());
    Ok((results.into_iter().map(|r| r.0).collect(), adequacy))
}

fn lanczos_run(config: &RunConfig, resolved: &Resolved) -> Result<(Vec<Step>, Option<Adequacy>), CliError> {
    let oversampling = config.diagnostics.oversampling;
    let basis = &resolved.bases[0];
    let problem = &resolved.problem;
    let quad = quadrature_rule(basis, oversampling)?;
    let ops = problem.assemble(basis, &quad)?;
    let budget = config.lanczos_steps(ops.dim());
    let mut state = LanczosState::new(resolved.start.build(ops.dim()))?;
    let mut steps = Vec::with_capacity(budget);
    for iteration in 1..=budget {
        let outcome = state.step(&ops.h)?;
        let last = iteration == budget || outcome == StepOutcome::Breakdown;
        steps.push(measure(&state.ritz_pairs()?, &ops, problem, basis, last, oversampling)?);
        if last {
            break;
        }
    }
    let adequacy = match problem {
        Problem::Schrodinger(_) => Some(trk_adequacy(&eigh_dense(&ops.h)?, basis, &quad)?),
        Problem::Dirac(_) => None,
    };
    Ok((steps, adequacy))
}

/// Solve, track, diagnose, and classify as configured.
pub fn cmd_solve(config: &RunConfig) -> Result<Report, CliError> {
    let started = Instant::now();
    let resolved = config.validate()?;
    let (steps, adequacy) = match config.solver.kind {
        SolverKind::Dense => dense_scan(config, &resolved)?,
        SolverKind::Lanczos => lanczos_run(config, &resolved)?,
    };

    let levels: Vec<Vec<f64>> = steps.iter().map(|s| s.values.clone()).collect();
    let ids = assign_tracks(&levels, &TrackerConfig::default());
    let mut records = Vec::new();
    let mut forbidden = BTreeMap::new();
    for (step, step_ids) in steps.into_iter().zip(ids) {
        for ((mut record, f), id) in step.records.into_iter().zip(step.forbidden).zip(step_ids) {
            record.track_id = Some(id);
            if let Some(f) = f {
                forbidden.insert((id, record.iteration), f);
            }
            records.push(record);
        }
    }
    let rows = classified_rows(&records, &forbidden, &resolved.classify);
    let mut report = Report::new(config.clone(), adequacy, rows);
    report.metadata.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    Ok(report)
}

/// Optional replacements for the classification thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClassifyOverrides {
    pub tol_bound: Option<f64>,
    pub plateau_factor: Option<f64>,
}

/// Re-run classification on an existing report. No matrix work.
pub fn cmd_classify(report: &Report, overrides: &ClassifyOverrides) -> Result<Report, CliError> {
    let mut config = report.metadata.config.clone();
    if let Some(t) = overrides.tol_bound {
        config.diagnostics.tol_bound = t;
    }
    if let Some(p) = overrides.plateau_factor {
        config.diagnostics.plateau_factor = p;
    }
    for (name, v) in [("tol_bound", config.diagnostics.tol_bound), ("plateau_factor", config.diagnostics.plateau_factor)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Config(format!("{name} must be positive, got {v}")));
        }
    }
    let classify = ClassifyConfig { tol_bound: config.diagnostics.tol_bound, plateau_factor: config.diagnostics.plateau_factor };
    let records: Vec<DeltaRecord> = report.rows.iter().map(|r| r.record()).collect();
    let forbidden = report
        .rows
        .iter()
        .filter_map(|r| r.forbidden_fraction.map(|f| ((r.track_id, r.iteration), f)))
        .collect();
    let rows = classified_rows(&records, &forbidden, &classify);
    let mut out = Report::new(config, report.adequacy.clone(), rows);
    out.metadata.version = report.metadata.version.clone();
    Ok(out)
}

/// Dipole sum rule for the ground state at every basis size.
pub fn cmd_sumrule(config: &RunConfig) -> Result<SumRuleReport, CliError> {
    let resolved = config.validate()?;
    if matches!(resolved.problem, Problem::Dirac(_)) {
        return Err(CliError::Config("the sum rule applies to Schrödinger problems only".into()));
    }
    let oversampling = config.diagnostics.oversampling;
    let rows = thread_pool()?.install(|| {
        resolved
            .bases
            .par_iter()
            .map(|basis| -> Result<SumRuleRow, CliError> {
                let quad = quadrature_rule(basis, oversampling)?;
                let ops = resolved.problem.assemble(basis, &quad)?;
                let eig = eigh_dense(&ops.h)?;
                let a = trk_adequacy(&eig, basis, &quad)?;
                Ok(SumRuleRow { n_basis: a.n_basis, trk_sum: a.trk_sum, deviation: a.trk_deviation })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SumRuleReport::new(config.clone(), rows))
}
