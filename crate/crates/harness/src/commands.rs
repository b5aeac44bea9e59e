use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sip_csa::PolicyKind;

use crate::error::{HarnessError, Result};
use crate::output::{write_csv, RatesRow, SensitivityRow, Table1Row};
use crate::runner::{require_success, run_seeds, SeedRun};
use crate::spec::{ExperimentSpec, ProblemChoice, SamplerSpec, TABLE1_MH_ITERATIONS, TABLE1_SAMPLE_SIZES};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TABLE1_FILE: &str = "table1.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const SENSITIVITY_FILE: &str = "mh_sensitivity.csv";

pub fn trace_file_name(seed: u64) -> String {
    format!("trace_seed_{seed}.csv")
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Standard error of the mean; zero for fewer than two values.
pub fn standard_error(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
    (var / v.len() as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (mx, my) = (mean(&lx), mean(&ly));
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

/// Outcome of [`cmd_run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub runs: Vec<SeedRun>,
    pub relative_gaps: Vec<Option<f64>>,
}

impl RunReport {
    pub fn successful_f(&self) -> Vec<f64> {
        self.runs.iter().filter_map(SeedRun::f_x_bar).collect()
    }

    pub fn failed(&self) -> usize {
        self.runs.iter().filter(|r| !r.succeeded()).count()
    }
}

/// Runs one experiment and writes a trace per seed plus `summary.csv` into
/// `spec.out`. Fails only if every seed failed, after the files are written.
/// Wall time stays in the report so the files are reproducible byte for byte.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let bench = spec.problem.build()?;
    let runs = run_seeds(spec, &bench, true)?;
    for run in &runs {
        write_csv(&spec.out.join(trace_file_name(run.seed)), &run.trace_rows)?;
    }
    let summary: Vec<_> = runs.iter().map(SeedRun::summary).collect();
    write_csv(&spec.out.join(SUMMARY_FILE), &summary)?;
    require_success(&runs)?;
    let relative_gaps = runs
        .iter()
        .map(|r| r.f_x_bar().map(|f| bench.relative_gap(f)))
        .collect();
    Ok(RunReport { runs, relative_gaps })
}

/// The five benchmark-table configurations: adaptive sampling, then fixed sampling
/// with increasing sample size.
pub fn table1_samplers() -> Vec<SamplerSpec> {
    let mut v = vec![SamplerSpec::Adaptive {
        mh_iterations: TABLE1_MH_ITERATIONS,
    }];
    v.extend(TABLE1_SAMPLE_SIZES.iter().map(|&m| SamplerSpec::Fixed { m }));
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    pub f_star: f64,
}

/// Builds the sampling comparison table. Each configuration goes through [`cmd_run`] into its
/// own subdirectory of `out`; the seed-mean table lands in `table1.csv`.
pub fn cmd_table1(seeds: &[u64], out: &Path) -> Result<Table1Report> {
    let bench = ProblemChoice::RobustLp.build()?;
    let mut rows = Vec::new();
    for sampler in table1_samplers() {
        let spec = ExperimentSpec::table1(sampler, seeds.to_vec(), out.join(sampler.label()));
        let report = cmd_run(&spec)?;
        let m = mean(&report.successful_f());
        rows.push(Table1Row {
            method: sampler.label(),
            seeds: seeds.len(),
            failed_seeds: report.failed(),
            mean_f_xbar: m,
            relative_gap: bench.relative_gap(m),
            optimal_value: bench.f_star,
        });
    }
    write_csv(&out.join(TABLE1_FILE), &rows)?;
    Ok(Table1Report {
        rows,
        f_star: bench.f_star,
    })
}

/// Plain-text layout of the comparison table: objective values and relative gaps per method.
pub fn format_table1(report: &Table1Report) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<18}", "");
    for row in &report.rows {
        let _ = write!(s, "{:>14}", row.method);
    }
    let _ = writeln!(s, "{:>15}", "optimal value");
    let _ = write!(s, "{:<18}", "objective values");
    for row in &report.rows {
        let _ = write!(s, "{:>14.3}", row.mean_f_xbar);
    }
    let _ = writeln!(s, "{:>15.3}", report.f_star);
    let _ = write!(s, "{:<18}", "relative gaps");
    for row in &report.rows {
        let _ = write!(s, "{:>13.1}%", 100.0 * row.relative_gap);
    }
    let _ = writeln!(s);
    s
}

#[derive(Debug, Clone)]
pub struct RatesRequest {
    pub problem: ProblemChoice,
    pub policy: PolicyKind,
    pub sampler: SamplerSpec,
    pub n_list: Vec<usize>,
    pub seeds: Vec<u64>,
    pub oracle_points: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatesReport {
    pub rows: Vec<RatesRow>,
    /// Slope of `|mean gap|` against `N` on a log-log scale.
    pub gap_slope: f64,
    /// Slope of `|mean violation|` against `N` on a log-log scale.
    pub violation_slope: f64,
}

/// Unscaled runs for every `N`, reporting seed-mean optimality gap
/// `f(x_bar) - f*`, seed-mean grid-oracle `G(x_bar)` and the matching
/// theoretical bounds. With the grid backend the exact-cut violation bound
/// is reported, otherwise the sampled-cut one.
pub fn cmd_rates(req: &RatesRequest) -> Result<RatesReport> {
    if req.n_list.is_empty() {
        return Err(HarnessError::InvalidSpec("rates needs at least one N".into()));
    }
    let bench = req.problem.build()?;
    let mut rows = Vec::new();
    for &n in &req.n_list {
        let spec = ExperimentSpec {
            problem: req.problem,
            policy: req.policy,
            c_g: 1.0,
            c_e: 1.0,
            sampler: req.sampler,
            n,
            seeds: req.seeds.clone(),
            oracle_every: None,
            oracle_points: req.oracle_points,
            out: req.out.clone(),
        };
        let schedule = spec.schedule(&bench)?;
        let runs = run_seeds(&spec, &bench, false)?;
        require_success(&runs)?;
        let ok: Vec<&SeedRun> = runs.iter().filter(|r| r.succeeded()).collect();
        let gaps: Vec<f64> = ok
            .iter()
            .filter_map(|r| r.f_x_bar())
            .map(|f| f - bench.f_star)
            .collect();
        let viol: Vec<f64> = ok.iter().filter_map(|r| r.g_x_bar).collect();
        let b: Vec<f64> = ok
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok())
            .map(|r| r.b_size as f64)
            .collect();
        let violation_bound = match req.sampler {
            SamplerSpec::Grid { .. } => schedule.exact_cut_violation_bound(),
            _ => schedule.violation_bound(),
        };
        rows.push(RatesRow {
            n,
            seeds: runs.len(),
            failed_seeds: runs.len() - ok.len(),
            mean_gap: mean(&gaps),
            se_gap: standard_error(&gaps),
            mean_violation: mean(&viol),
            se_violation: standard_error(&viol),
            gap_bound: schedule.gap_bound(),
            violation_bound,
            mean_b_size: mean(&b),
        });
    }
    write_csv(&req.out.join(RATES_FILE), &rows)?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let gaps: Vec<f64> = rows.iter().map(|r| r.mean_gap.abs()).collect();
    let viol: Vec<f64> = rows.iter().map(|r| r.mean_violation.abs()).collect();
    let (gap_slope, violation_slope) = if rows.len() >= 2 {
        (loglog_slope(&ns, &gaps), loglog_slope(&ns, &viol))
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(RatesReport {
        rows,
        gap_slope,
        violation_slope,
    })
}

/// Sweeps the MH chain length on the adaptive configuration of the comparison table.
pub fn cmd_mh_sensitivity(iterations: &[usize], seeds: &[u64], out: &Path) -> Result<Vec<SensitivityRow>> {
    if iterations.is_empty() {
        return Err(HarnessError::InvalidSpec(
            "at least one MH iteration count is required".into(),
        ));
    }
    let bench = ProblemChoice::RobustLp.build()?;
    let mut rows = Vec::new();
    for &mh in iterations {
        let spec = ExperimentSpec::table1(
            SamplerSpec::Adaptive { mh_iterations: mh },
            seeds.to_vec(),
            out.to_path_buf(),
        );
        let runs = run_seeds(&spec, &bench, false)?;
        require_success(&runs)?;
        let f: Vec<f64> = runs.iter().filter_map(SeedRun::f_x_bar).collect();
        let m = mean(&f);
        rows.push(SensitivityRow {
            mh_iterations: mh,
            seeds: runs.len(),
            failed_seeds: runs.len() - f.len(),
            mean_f_xbar: m,
            relative_gap: bench.relative_gap(m),
        });
    }
    write_csv(&out.join(SENSITIVITY_FILE), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
        assert_eq!(standard_error(&[4.0]), 0.0);
        // Sample variance 7, n = 3.
        assert!((standard_error(&[1.0, 2.0, 6.0]) - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let x = [10.0, 100.0, 1000.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        assert!((loglog_slope(&x, &y) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn table1_layout() {
        let row = |method: &str, f: f64| Table1Row {
            method: method.into(),
            seeds: 10,
            failed_seeds: 0,
            mean_f_xbar: f,
            relative_gap: (f + 2.0) / 2.0,
            optimal_value: -2.0,
        };
        let report = Table1Report {
            rows: vec![row("adaptive-mh200", -2.002), row("fixed-M10", -2.1)],
            f_star: -2.0,
        };
        let text = format_table1(&report);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("adaptive-mh200") && lines[0].ends_with("optimal value"));
        assert!(
            lines[1].starts_with("objective values")
                && lines[1].contains("-2.002")
                && lines[1].ends_with("-2.000")
        );
        assert!(lines[2].contains("-0.1%") && lines[2].contains("-5.0%"));
    }
}
