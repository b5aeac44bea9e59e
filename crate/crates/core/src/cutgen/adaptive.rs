//! Adaptive cut generation: sample from the Gibbs density
//! `exp(g(x, delta) / kappa) / Z` with a random-walk Metropolis-Hastings chain.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SipError};
use crate::geometry::IndexSetGeometry;
use crate::problem::SipProblem;
use crate::scalar::Scalar;

use super::{Backend, CutResult};

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveSamplerConfig<T> {
    /// Steps per chain before its state is taken.
    pub mh_iterations: usize,
    /// Independent chains per query; the best final state is returned.
    pub samples_per_iteration: usize,
    /// Random-walk scale. `None` means `D_Delta / 20`.
    pub proposal_stddev: Option<T>,
    /// Lower clamp on the temperature.
    pub kappa_floor: T,
}

impl<T: Scalar> Default for AdaptiveSamplerConfig<T> {
    fn default() -> Self {
        AdaptiveSamplerConfig {
            mh_iterations: 200,
            samples_per_iteration: 1,
            proposal_stddev: None,
            kappa_floor: T::lit(1e-8),
        }
    }
}

impl<T: Scalar> AdaptiveSamplerConfig<T> {
    pub fn with_mh_iterations(mut self, n: usize) -> Self {
        self.mh_iterations = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mh_iterations < 1 || self.samples_per_iteration < 1 {
            return Err(SipError::InvalidInput(
                "MH iterations and samples per iteration must be >= 1".into(),
            ));
        }
        if let Some(s) = self.proposal_stddev {
            if !(s > T::zero() && s.is_finite()) {
                return Err(SipError::InvalidInput(format!(
                    "proposal stddev {s} must be positive"
                )));
            }
        }
        if !(self.kappa_floor > T::zero()) {
            return Err(SipError::InvalidInput("kappa floor must be positive".into()));
        }
        Ok(())
    }

    pub fn resolved_stddev(&self, geometry: &IndexSetGeometry<T>) -> T {
        self.proposal_stddev
            .unwrap_or_else(|| geometry.d_delta / T::lit(20.0))
    }
}

/// `C = L_gDelta (R_Delta + D_Delta) - ln r`.
///
/// Returns zero for a ball index set with a constraint constant in `delta`;
/// [`kappa_of_epsilon`] rejects that degenerate value.
pub fn compute_c<T: Scalar>(geometry: &IndexSetGeometry<T>, lip_g_delta: T) -> Result<T> {
    let r = geometry.volume_ratio;
    if !(r > T::zero() && r <= T::one()) {
        return Err(SipError::InvalidInput(format!(
            "volume ratio r = {r} not in (0, 1]"
        )));
    }
    if !(lip_g_delta >= T::zero()) {
        return Err(SipError::InvalidInput(format!(
            "L_gDelta = {lip_g_delta} is negative"
        )));
    }
    Ok(lip_g_delta * (geometry.r_delta + geometry.d_delta) - r.ln())
}

/// Temperature `kappa(eps) = min(eps / (2C), (eps / (2d))^2, 1)` before the floor.
pub fn kappa_unclamped<T: Scalar>(epsilon: T, d: usize, c: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon.is_finite()) {
        return Err(SipError::InvalidInput(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    if d == 0 {
        return Err(SipError::InvalidInput("dimension d must be >= 1".into()));
    }
    if !(c > T::zero()) {
        return Err(SipError::PolicyInfeasible {
            quantity: "C",
            value: c.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let dim_term = (epsilon / (two * T::of_usize(d))).powi(2);
    Ok((epsilon / (two * c)).min(dim_term).min(T::one()))
}

/// `max(kappa_floor, kappa(eps))`.
pub fn kappa_of_epsilon<T: Scalar>(epsilon: T, d: usize, c: T, kappa_floor: T) -> Result<T> {
    Ok(kappa_unclamped(epsilon, d, c)?.max(kappa_floor))
}

/// Log of the unnormalized Gibbs density, `g(x, delta) / kappa`, or negative
/// infinity outside `Delta`.
pub fn gibbs_log_density_unnorm<T: Scalar>(problem: &SipProblem<T>, x: &[T], kappa: T, delta: &[T]) -> T {
    if !problem.index_set.contains(delta) {
        return T::neg_infinity();
    }
    problem.oracle.constraint(x, delta) / kappa
}

/// Probability of accepting a move that changes `g` by `delta_g` at temperature `kappa`.
pub fn mh_acceptance<T: Scalar>(delta_g: T, kappa: T) -> T {
    (delta_g / kappa).min(T::zero()).exp()
}

/// Runs `samples_per_iteration` independent Gaussian random-walk chains
/// targeting the Gibbs density, each started from a uniform draw, and
/// returns the best final state.
pub fn mh_sample_cut<T: Scalar, R: Rng + ?Sized>(
    problem: &SipProblem<T>,
    x: &[T],
    kappa: T,
    config: &AdaptiveSamplerConfig<T>,
    rng: &mut R,
) -> Result<CutResult<T>> {
    config.validate()?;
    if !(kappa > T::zero()) {
        return Err(SipError::InvalidInput(format!(
            "kappa = {kappa} must be positive"
        )));
    }
    let geometry = &problem.index_set;
    let sigma = config.resolved_stddev(geometry).to_f64_lossy();
    let d = geometry.dim();

    let mut best: Option<(Vec<T>, T)> = None;
    let mut proposal = vec![T::zero(); d];
    for _ in 0..config.samples_per_iteration {
        let mut state = geometry.sample_uniform(rng);
        let mut value = problem.oracle.constraint(x, &state);
        for _ in 0..config.mh_iterations {
            for (p, &s) in proposal.iter_mut().zip(&state) {
                let z: f64 = rng.sample(StandardNormal);
                *p = s + T::lit(sigma * z);
            }
            if !geometry.contains(&proposal) {
                continue;
            }
            let cand = problem.oracle.constraint(x, &proposal);
            let log_ratio = (cand - value) / kappa;
            let accept = log_ratio >= T::zero() || T::lit(rng.random::<f64>()).ln() < log_ratio;
            if accept {
                state.copy_from_slice(&proposal);
                value = cand;
            }
        }
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((state, value));
        }
    }
    let (delta, value) = best.expect("at least one chain");
    Ok(CutResult {
        delta,
        value,
        samples_used: config.samples_per_iteration,
        backend: Backend::Adaptive,
    })
}
