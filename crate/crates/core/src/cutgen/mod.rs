//! Approximate solvers for the cut-generation problem `max_delta g(x, delta)`.

mod adaptive;
mod fixed;
mod grid;

pub use adaptive::{
    compute_c, gibbs_log_density_unnorm, kappa_of_epsilon, kappa_unclamped, mh_acceptance, mh_sample_cut,
    AdaptiveSamplerConfig,
};
pub use fixed::{
    fixed_sample_cut, make_default_ulb, sample_size, theoretical_mk, FixedSamplerConfig, LevelSetBound,
    SampleSizeMode,
};
pub use grid::{grid_oracle, grid_tolerance};

use rand::Rng;

use crate::error::{Result, SipError};
use crate::problem::SipProblem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Grid,
    Fixed,
    Adaptive,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Grid => "grid",
            Backend::Fixed => "fixed",
            Backend::Adaptive => "adaptive",
        }
    }
}

/// The selected constraint index and its constraint value.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult<T> {
    pub delta: Vec<T>,
    /// `g(x, delta)`.
    pub value: T,
    pub samples_used: usize,
    pub backend: Backend,
}

/// A configured cut-generation backend.
#[derive(Debug, Clone)]
pub enum CutGenerator<T> {
    Grid { points_per_axis: usize },
    Fixed(FixedSamplerConfig<T>),
    Adaptive(AdaptiveSamplerConfig<T>),
}

/// A cut plus the bookkeeping a run records about how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CutOutcome<T> {
    pub cut: CutResult<T>,
    /// Temperature used by the adaptive backend.
    pub kappa: Option<T>,
    /// The temperature hit its floor.
    pub kappa_clamped: bool,
    /// The theoretical sample size was out of range and one draw was used.
    pub sample_size_clamped: bool,
}

impl<T: Scalar> CutGenerator<T> {
    pub fn backend(&self) -> Backend {
        match self {
            CutGenerator::Grid { .. } => Backend::Grid,
            CutGenerator::Fixed(_) => Backend::Fixed,
            CutGenerator::Adaptive(_) => Backend::Adaptive,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CutGenerator::Grid { points_per_axis } => format!("grid({points_per_axis})"),
            CutGenerator::Fixed(cfg) => match cfg.sample_size_mode {
                SampleSizeMode::Constant(m) => format!("fixed(M={m})"),
                SampleSizeMode::Theoretical => "fixed(theoretical)".to_string(),
            },
            CutGenerator::Adaptive(cfg) => format!(
                "adaptive(mh={},chains={})",
                cfg.mh_iterations, cfg.samples_per_iteration
            ),
        }
    }

    /// Produces `delta_k` for iterate `x` with cut tolerance `epsilon_k`.
    ///
    /// The tolerance drives the theoretical sample size (fixed backend) or the
    /// Gibbs temperature (adaptive backend); the grid and constant-size
    /// backends ignore it.
    pub fn generate<R: Rng + ?Sized>(
        &self,
        problem: &SipProblem<T>,
        x: &[T],
        epsilon_k: T,
        rng: &mut R,
    ) -> Result<CutOutcome<T>> {
        let plain = |cut| CutOutcome {
            cut,
            kappa: None,
            kappa_clamped: false,
            sample_size_clamped: false,
        };
        match self {
            CutGenerator::Grid { points_per_axis } => grid_oracle(problem, x, *points_per_axis).map(plain),
            CutGenerator::Fixed(cfg) => match cfg.sample_size_mode {
                SampleSizeMode::Constant(m) => fixed_sample_cut(problem, x, m, rng).map(plain),
                SampleSizeMode::Theoretical => {
                    let default_phi;
                    let phi: &dyn Fn(T) -> T = match &cfg.ulb_phi {
                        Some(f) => f.as_ref(),
                        None => {
                            default_phi = make_default_ulb(&problem.index_set);
                            default_phi.as_ref()
                        }
                    };
                    let (m, clamped) = match theoretical_mk(&problem.constants, phi, epsilon_k) {
                        Ok(m) => (m, false),
                        // A tolerance so loose that the ball covers all of Delta, or that
                        // the failure probability exceeds one, is met by a single draw.
                        Err(SipError::PolicyInfeasible { value, .. }) if value >= 1.0 => (1, true),
                        Err(e) => return Err(e),
                    };
                    let mut out = plain(fixed_sample_cut(problem, x, m, rng)?);
                    out.sample_size_clamped = clamped;
                    Ok(out)
                }
            },
            CutGenerator::Adaptive(cfg) => {
                let c = compute_c(&problem.index_set, problem.constants.lip_g_delta)?;
                let raw = kappa_unclamped(epsilon_k, problem.dim_delta(), c)?;
                let kappa = raw.max(cfg.kappa_floor);
                let cut = mh_sample_cut(problem, x, kappa, cfg, rng)?;
                Ok(CutOutcome {
                    cut,
                    kappa: Some(kappa),
                    kappa_clamped: raw < cfg.kappa_floor,
                    sample_size_clamped: false,
                })
            }
        }
    }
}
