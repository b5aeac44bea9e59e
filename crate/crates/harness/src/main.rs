use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sip_csa::{PolicyKind, DEFAULT_ORACLE_POINTS};
use sip_harness::spec::{parse_policy, TABLE1_CE, TABLE1_CG, TABLE1_MH_ITERATIONS};
use sip_harness::{
    cmd_mh_sensitivity, cmd_rates, cmd_run, cmd_table1, format_table1, ExperimentSpec, HarnessError,
    ProblemChoice, RatesRequest, SamplerSpec,
};

const DEFAULT_SEEDS: &str = "0,1,2,3,4,5,6,7,8,9";

#[derive(Parser)]
#[command(
    name = "sip-bench",
    version,
    about = "Benchmarks for inexact CSA on semi-infinite programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write per-seed traces and a summary.
    Run(RunArgs),
    /// Compare adaptive and fixed sampling on the robust LP.
    Table1(CommonArgs),
    /// Sweep N with the unscaled policy and compare against the theoretical bounds.
    Rates(RatesArgs),
    /// Sweep the MH chain length on the adaptive robust-LP configuration.
    MhSensitivity(SensitivityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerKind {
    Fixed,
    Adaptive,
    Grid,
}

#[derive(Args)]
struct CommonArgs {
    /// Comma-separated seed list.
    #[arg(long, value_delimiter = ',', default_value = DEFAULT_SEEDS)]
    seeds: Vec<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct SamplerArgs {
    #[arg(long, value_enum, default_value = "adaptive")]
    sampler: SamplerKind,
    /// Samples per iteration for the fixed sampler.
    #[arg(long = "M", default_value_t = 100)]
    m: usize,
    /// MH steps per chain for the adaptive sampler.
    #[arg(long = "mh-iters", default_value_t = TABLE1_MH_ITERATIONS)]
    mh_iters: usize,
    /// Points per axis for the grid backend.
    #[arg(long, default_value_t = 101)]
    grid_points: usize,
}

impl SamplerArgs {
    fn spec(&self) -> SamplerSpec {
        match self.sampler {
            SamplerKind::Fixed => SamplerSpec::Fixed { m: self.m },
            SamplerKind::Adaptive => SamplerSpec::Adaptive {
                mh_iterations: self.mh_iters,
            },
            SamplerKind::Grid => SamplerSpec::Grid {
                points_per_axis: self.grid_points,
            },
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Built-in problem: robust-lp or strongly-convex.
    #[arg(long, default_value = "robust-lp")]
    problem: ProblemChoice,
    /// Step-size policy: convex or strongly-convex.
    #[arg(long, value_parser = parse_policy, default_value = "convex")]
    policy: PolicyKind,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Iteration budget.
    #[arg(long = "N", default_value_t = 1000)]
    n: usize,
    /// Scale factor on the step sizes gamma_k.
    #[arg(long, default_value_t = TABLE1_CG)]
    cg: f64,
    /// Scale factor on the violation tolerances eta_k.
    #[arg(long, default_value_t = TABLE1_CE)]
    ce: f64,
    /// Evaluate the grid oracle G every this many iterations.
    #[arg(long)]
    oracle_every: Option<usize>,
    /// Points per axis of the oracle grid.
    #[arg(long, default_value_t = DEFAULT_ORACLE_POINTS)]
    oracle_points: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RatesArgs {
    /// Built-in problem: robust-lp or strongly-convex.
    #[arg(long, default_value = "robust-lp")]
    problem: ProblemChoice,
    /// Step-size policy: convex or strongly-convex.
    #[arg(long, value_parser = parse_policy, default_value = "convex")]
    policy: PolicyKind,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Comma-separated iteration budgets.
    #[arg(long = "N", value_delimiter = ',', default_value = "100,1000,10000")]
    n: Vec<usize>,
    /// Points per axis of the grid used to evaluate G(x_bar).
    #[arg(long, default_value_t = DEFAULT_ORACLE_POINTS)]
    oracle_points: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SensitivityArgs {
    /// Comma-separated MH chain lengths.
    #[arg(
        long = "mh-iters",
        value_delimiter = ',',
        default_value = "1,10,50,100,200,400"
    )]
    mh_iters: Vec<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run(a) => {
            let spec = ExperimentSpec {
                problem: a.problem,
                policy: a.policy,
                c_g: a.cg,
                c_e: a.ce,
                sampler: a.sampler.spec(),
                n: a.n,
                seeds: a.common.seeds,
                oracle_every: a.oracle_every,
                oracle_points: a.oracle_points,
                out: a.common.out,
            };
            let report = cmd_run(&spec)?;
            for (run, gap) in report.runs.iter().zip(&report.relative_gaps) {
                match (run.f_x_bar(), gap) {
                    (Some(f), Some(g)) => println!(
                        "seed {:>4}: f(x_bar) = {f:.6}  relative gap = {:+.2}%  ({:.2}s)",
                        run.seed,
                        100.0 * g,
                        run.wall_seconds
                    ),
                    _ => println!("seed {:>4}: failed ({})", run.seed, run.summary().status),
                }
            }
        }
        Command::Table1(a) => {
            let report = cmd_table1(&a.seeds, &a.out)?;
            print!("{}", format_table1(&report));
        }
        Command::Rates(a) => {
            let report = cmd_rates(&RatesRequest {
                problem: a.problem,
                policy: a.policy,
                sampler: a.sampler.spec(),
                n_list: a.n,
                seeds: a.common.seeds,
                oracle_points: a.oracle_points,
                out: a.common.out,
            })?;
            println!(
                "{:>8} {:>14} {:>14} {:>14} {:>14}",
                "N", "mean gap", "gap bound", "mean G", "G bound"
            );
            for r in &report.rows {
                println!(
                    "{:>8} {:>14.6} {:>14.6} {:>14.6} {:>14.6}",
                    r.n, r.mean_gap, r.gap_bound, r.mean_violation, r.violation_bound
                );
            }
            println!(
                "log-log slope: |gap| {:.3}, |G| {:.3}",
                report.gap_slope, report.violation_slope
            );
        }
        Command::MhSensitivity(a) => {
            for r in cmd_mh_sensitivity(&a.mh_iters, &a.common.seeds, &a.common.out)? {
                println!(
                    "mh = {:>5}: mean f(x_bar) = {:.6}  relative gap = {:+.2}%",
                    r.mh_iterations,
                    r.mean_f_xbar,
                    100.0 * r.relative_gap
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
