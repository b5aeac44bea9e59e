use std::time::Instant;

use rayon::prelude::*;
use sip_csa::{csa_run, grid_oracle, IterationRecord, RunError, RunOptions, RunResult, SipProblem};

use crate::error::{HarnessError, Result};
use crate::output::{SummaryRow, TraceRow};
use crate::spec::{Benchmark, ExperimentSpec};

/// Everything produced by one seed of an experiment.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub outcome: std::result::Result<RunResult<f64>, RunError<f64>>,
    /// Grid-oracle `G(x_bar)` on success.
    pub g_x_bar: Option<f64>,
    pub trace_rows: Vec<TraceRow>,
    pub wall_seconds: f64,
}

impl SeedRun {
    pub fn succeeded(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn f_x_bar(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.f_x_bar)
    }

    pub fn summary(&self) -> SummaryRow {
        let (status, b_size, meta) = match &self.outcome {
            Ok(r) => ("ok", r.b_size, Some(&r.metadata)),
            Err(RunError::EmptyB { metadata, .. }) => ("empty_b", 0, Some(metadata)),
            Err(RunError::Sip(_)) => ("error", 0, None),
        };
        SummaryRow {
            seed: self.seed,
            status,
            f_xbar: self.f_x_bar(),
            oracle_g_xbar: self.g_x_bar,
            b_size,
            kappa_clamped: meta.map_or(0, |m| m.kappa_clamped),
            sample_size_clamped: meta.map_or(0, |m| m.sample_size_clamped),
        }
    }
}

/// Runs every seed of `spec` in parallel; results come back in seed order.
pub fn run_seeds(spec: &ExperimentSpec, bench: &Benchmark, with_traces: bool) -> Result<Vec<SeedRun>> {
    spec.validate()?;
    let schedule = spec.schedule(bench)?;
    let backend = spec.sampler.backend()?;
    let options = RunOptions {
        oracle_every: spec.oracle_every,
        oracle_points_per_axis: spec.oracle_points,
    };
    spec.seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let outcome = csa_run(&bench.problem, &schedule, &backend, &bench.x1, seed, options);
            let g_x_bar = match &outcome {
                Ok(r) => Some(match r.g_x_bar_oracle {
                    Some(g) => g,
                    None => grid_oracle(&bench.problem, &r.x_bar, spec.oracle_points)?.value,
                }),
                Err(_) => None,
            };
            let trace_rows = if with_traces {
                let records: &[IterationRecord<f64>] = match &outcome {
                    Ok(r) => &r.trace,
                    Err(RunError::EmptyB { trace, .. }) => trace,
                    Err(RunError::Sip(_)) => &[],
                };
                trace_rows(&bench.problem, records, spec.oracle_every, spec.oracle_points)?
            } else {
                Vec::new()
            };
            Ok(SeedRun {
                seed,
                outcome,
                g_x_bar,
                trace_rows,
                wall_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// Trace rows with the running weighted average `x_bar_k` of the qualifying
/// iterates seen so far.
pub fn trace_rows(
    problem: &SipProblem<f64>,
    records: &[IterationRecord<f64>],
    oracle_every: Option<usize>,
    oracle_points: usize,
) -> Result<Vec<TraceRow>> {
    let mut sum = vec![0.0; problem.dim_x()];
    let mut total = 0.0;
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        if r.weight > 0.0 {
            for (s, &x) in sum.iter_mut().zip(&r.x) {
                *s += r.weight * x;
            }
            total += r.weight;
        }
        let x_bar: Option<Vec<f64>> = (total > 0.0).then(|| sum.iter().map(|s| s / total).collect());
        let due = oracle_every.is_some_and(|e| r.k % e == 0);
        let oracle_g_xbar_running = match (&x_bar, due) {
            (Some(xb), true) => Some(grid_oracle(problem, xb, oracle_points)?.value),
            _ => None,
        };
        rows.push(TraceRow {
            k: r.k,
            branch: r.branch.is_objective() as u8,
            gamma_k: r.gamma,
            eta_k: r.eta,
            sampled_value: r.sampled_value,
            f_xk: r.f_x,
            oracle_g_xk: r.oracle_g,
            f_xbar_running: x_bar.as_deref().map(|xb| problem.f(xb)),
            oracle_g_xbar_running,
        });
    }
    Ok(rows)
}

/// Fails with [`HarnessError::AllSeedsFailed`] when no seed succeeded.
pub fn require_success(runs: &[SeedRun]) -> Result<()> {
    if runs.iter().any(SeedRun::succeeded) {
        return Ok(());
    }
    let first = runs
        .first()
        .and_then(|r| r.outcome.as_ref().err())
        .map(|e| e.to_string())
        .unwrap_or_default();
    Err(HarnessError::AllSeedsFailed {
        seeds: runs.len(),
        first,
    })
}
