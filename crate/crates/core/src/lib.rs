//! Cooperative stochastic approximation (CSA) for convex semi-infinite
//! programs
//!
//! ```text
//! min f(x)  s.t.  G(x) = max_{delta in Delta} g(x, delta) <= 0,  x in X
//! ```
//!
//! where the inner maximization (cut generation) is solved inexactly by an
//! exhaustive grid, by i.i.d. sampling from a fixed distribution, or by
//! Metropolis-Hastings sampling from a Gibbs density adapted to the iterate.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` aliases below name the common double-precision instantiations.
//!
//! ```
//! use sip_csa::{csa_run, problems, CutGenerator, PolicyKind, PolicySchedule, RunOptions};
//!
//! let problem = problems::robust_lp::<f64>();
//! let schedule = PolicySchedule::new(PolicyKind::GeneralConvex, 200, problem.constants.clone()).unwrap();
//! let backend = CutGenerator::Grid { points_per_axis: 41 };
//! let run = csa_run(&problem, &schedule, &backend, &[0.0, 0.0], 7, RunOptions::default()).unwrap();
//! assert!(problem.decision_set.contains(&run.x_bar));
//! ```

// `!(x > 0)` style checks reject NaN on purpose; empty-B errors carry the trace.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::result_large_err)]

pub mod csa;
pub mod cutgen;
pub mod error;
pub mod geometry;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod scalar;

pub use csa::{
    check_well_defined, csa_run, policy_params, rho_weights, weighted_average, Branch, IterationRecord,
    PolicyKind, PolicyParams, PolicySchedule, RunError, RunMetadata, RunOptions, RunResult,
    WellDefinedReport, DEFAULT_ORACLE_POINTS,
};
pub use cutgen::{
    compute_c, fixed_sample_cut, gibbs_log_density_unnorm, grid_oracle, grid_tolerance, kappa_of_epsilon,
    make_default_ulb, mh_sample_cut, sample_size, theoretical_mk, AdaptiveSamplerConfig, Backend,
    CutGenerator, CutResult, FixedSamplerConfig, SampleSizeMode,
};
pub use error::{Result, SipError};
pub use geometry::{IndexSetGeometry, Region};
pub use problem::{
    validate_constants, FnOracle, ProblemConstants, SipOracle, SipProblem, ValidationReport, Violation,
    ViolationKind,
};
pub use prox::{bregman_distance, prox_map, DistanceGenerator, Euclidean, ProxState};
pub use scalar::Scalar;

pub type SipProblemF64 = SipProblem<f64>;
pub type ProblemConstantsF64 = ProblemConstants<f64>;
pub type RegionF64 = Region<f64>;
pub type PolicyScheduleF64 = PolicySchedule<f64>;
pub type CutGeneratorF64 = CutGenerator<f64>;
pub type RunResultF64 = RunResult<f64>;
pub type RunErrorF64 = RunError<f64>;
pub type SipProblemF32 = SipProblem<f32>;
