use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cutgen::{grid_oracle, CutGenerator};
use crate::error::{check_dim, SipError};
use crate::problem::SipProblem;
use crate::prox::prox_map;
use crate::scalar::Scalar;

use super::policy::{policy_params, Branch, PolicyKind, PolicySchedule, RhoTracker};

/// Grid resolution used for oracle `G` evaluations unless overridden.
pub const DEFAULT_ORACLE_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub k: usize,
    pub branch: Branch,
    pub gamma: T,
    pub eta: T,
    /// Cut tolerance handed to the sampler.
    pub epsilon: T,
    /// `g(x_k, delta_k)`.
    pub sampled_value: T,
    pub delta: Vec<T>,
    /// Averaging weight: `gamma_k` or `rho_k` on objective steps with `k >= s`, else zero.
    pub weight: T,
    /// Grid-oracle `G(x_k)`, when evaluated.
    pub oracle_g: Option<T>,
    pub x: Vec<T>,
    pub f_x: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata<T> {
    pub problem: String,
    pub policy: PolicyKind,
    pub scale_gamma: T,
    pub scale_eta: T,
    pub n: usize,
    pub s: usize,
    pub sampler: String,
    pub seed: u64,
    pub prox: &'static str,
    /// Iterations whose Gibbs temperature hit the floor.
    pub kappa_clamped: usize,
    /// Iterations whose theoretical sample size fell back to one draw.
    pub sample_size_clamped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub x_bar: Vec<T>,
    pub trace: Vec<IterationRecord<T>>,
    pub b_size: usize,
    pub f_x_bar: T,
    pub g_x_bar_oracle: Option<T>,
    pub metadata: RunMetadata<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError<T> {
    /// No iteration with `k >= s` passed the violation test. Carries the
    /// full trace for diagnosis.
    EmptyB {
        trace: Vec<IterationRecord<T>>,
        metadata: RunMetadata<T>,
    },
    Sip(SipError),
}

impl<T: Scalar> fmt::Display for RunError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::EmptyB { trace, .. } => {
                write!(f, "B is empty after {} iterations", trace.len())
            }
            RunError::Sip(e) => e.fmt(f),
        }
    }
}

impl<T: Scalar> std::error::Error for RunError<T> {}

impl<T> From<SipError> for RunError<T> {
    fn from(e: SipError) -> Self {
        RunError::Sip(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Evaluate the grid oracle `G(x_k)` every this many iterations, and at `x_bar`.
    pub oracle_every: Option<usize>,
    pub oracle_points_per_axis: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_every: None,
            oracle_points_per_axis: DEFAULT_ORACLE_POINTS,
        }
    }
}

/// Inexact cooperative stochastic approximation.
///
/// Each iteration draws `delta_k` from the backend, compares
/// `g(x_k, delta_k)` with `eta_k`, picks the objective or constraint
/// subgradient accordingly and takes a prox step of length `gamma_k`.
/// Under the strongly convex policy `gamma_k` uses the modulus of the branch
/// actually taken, so the cut is generated before the step size is fixed.
pub fn csa_run<T: Scalar>(
    problem: &SipProblem<T>,
    schedule: &PolicySchedule<T>,
    backend: &CutGenerator<T>,
    x1: &[T],
    rng_seed: u64,
    options: RunOptions,
) -> Result<RunResult<T>, RunError<T>> {
    check_dim(problem.dim_x(), x1.len())?;
    if !problem.decision_set.contains(x1) {
        return Err(SipError::InvalidInput("initial point lies outside the decision set".into()).into());
    }
    if options.oracle_every == Some(0) {
        return Err(SipError::InvalidInput("oracle_every must be >= 1".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let n = schedule.n;
    let s = schedule.averaging_start();
    let mut rho = match schedule.kind {
        PolicyKind::StronglyConvex => Some(RhoTracker::new(schedule)?),
        PolicyKind::GeneralConvex => None,
    };
    let mut metadata = RunMetadata {
        problem: problem.name.clone(),
        policy: schedule.kind,
        scale_gamma: schedule.scale_gamma,
        scale_eta: schedule.scale_eta,
        n,
        s,
        sampler: backend.describe(),
        seed: rng_seed,
        prox: problem.prox.name(),
        kappa_clamped: 0,
        sample_size_clamped: 0,
    };

    let mut trace = Vec::with_capacity(n);
    let mut x = x1.to_vec();
    for k in 1..=n {
        // eta_k and epsilon_k do not depend on the branch.
        let pre = policy_params(schedule, k, Branch::Objective)?;
        let outcome = backend.generate(problem, &x, pre.epsilon, &mut rng)?;
        metadata.kappa_clamped += outcome.kappa_clamped as usize;
        metadata.sample_size_clamped += outcome.sample_size_clamped as usize;
        let cut = outcome.cut;

        let branch = Branch::from_test(cut.value, pre.eta);
        let gamma = policy_params(schedule, k, branch)?.gamma;
        let h = match branch {
            Branch::Objective => problem.oracle.objective_subgradient(&x),
            Branch::Constraint => problem.oracle.constraint_subgradient(&x, &cut.delta),
        };
        let step: Vec<T> = h.iter().map(|&v| gamma * v).collect();

        let weight_raw = match rho.as_mut() {
            Some(tracker) => tracker.next(gamma, branch)?.rho,
            None => gamma,
        };
        let weight = if branch.is_objective() && k >= s {
            weight_raw
        } else {
            T::zero()
        };
        let oracle_g = match options.oracle_every {
            Some(every) if k % every == 0 => {
                Some(grid_oracle(problem, &x, options.oracle_points_per_axis)?.value)
            }
            _ => None,
        };

        let next = prox_map(problem.prox, &problem.decision_set, &x, &step)?;
        trace.push(IterationRecord {
            k,
            branch,
            gamma,
            eta: pre.eta,
            epsilon: pre.epsilon,
            sampled_value: cut.value,
            delta: cut.delta,
            weight,
            oracle_g,
            f_x: problem.oracle.objective(&x),
            x: std::mem::replace(&mut x, next),
        });
    }

    let x_bar = match weighted_average(&trace, s) {
        Ok(v) => v,
        Err(SipError::EmptyB) => return Err(RunError::EmptyB { trace, metadata }),
        Err(e) => return Err(e.into()),
    };
    let b_size = trace
        .iter()
        .filter(|r| r.k >= s && r.branch.is_objective())
        .count();
    let g_x_bar_oracle = match options.oracle_every {
        Some(_) => Some(grid_oracle(problem, &x_bar, options.oracle_points_per_axis)?.value),
        None => None,
    };
    Ok(RunResult {
        f_x_bar: problem.oracle.objective(&x_bar),
        x_bar,
        trace,
        b_size,
        g_x_bar_oracle,
        metadata,
    })
}

/// `sum w_k x_k / sum w_k` over objective-step records with `k >= s`.
pub fn weighted_average<T: Scalar>(records: &[IterationRecord<T>], s: usize) -> Result<Vec<T>, SipError> {
    let mut acc: Option<Vec<T>> = None;
    let mut total = T::zero();
    for r in records.iter().filter(|r| r.k >= s && r.branch.is_objective()) {
        let sum = acc.get_or_insert_with(|| vec![T::zero(); r.x.len()]);
        check_dim(sum.len(), r.x.len())?;
        for (a, &xi) in sum.iter_mut().zip(&r.x) {
            *a = *a + r.weight * xi;
        }
        total = total + r.weight;
    }
    match acc {
        Some(sum) if total > T::zero() => Ok(sum.into_iter().map(|v| v / total).collect()),
        Some(_) => Err(SipError::InvalidInput("qualifying weights sum to zero".into())),
        None => Err(SipError::EmptyB),
    }
}
