//! The inexact CSA loop, its parameter policies, and run diagnostics.

mod diagnostics;
mod policy;
mod run;

pub use diagnostics::{check_well_defined, WellDefinedCondition, WellDefinedReport};
pub use policy::{
    policy_params, rho_weights, Branch, PolicyKind, PolicyParams, PolicySchedule, RhoStep, RhoTracker,
};
pub use run::{
    csa_run, weighted_average, IterationRecord, RunError, RunMetadata, RunOptions, RunResult,
    DEFAULT_ORACLE_POINTS,
};
