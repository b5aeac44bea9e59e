//! Experiment harness for the `sip-csa` solver: seed sweeps over the
//! built-in problems, the sampling comparison table, convergence-rate
//! sweeps and MH chain-length sensitivity, all written as CSV.
//!
//! Seeds run in parallel; every per-seed result depends only on its seed,
//! and outputs are ordered by seed, so files are identical to a sequential run.

pub mod commands;
pub mod error;
pub mod output;
pub mod runner;
pub mod spec;

pub use commands::{
    cmd_mh_sensitivity, cmd_rates, cmd_run, cmd_table1, format_table1, loglog_slope, mean, standard_error,
    RatesReport, RatesRequest, RunReport, Table1Report,
};
pub use error::{HarnessError, Result};
pub use spec::{Benchmark, ExperimentSpec, ProblemChoice, SamplerSpec};
