//! Cut generation by i.i.d. sampling from a fixed (uniform) distribution on
//! `Delta`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Result, SipError};
use crate::geometry::IndexSetGeometry;
use crate::problem::{ProblemConstants, SipProblem};
use crate::scalar::{unit_ball_volume, Scalar};

use super::{Backend, CutResult};

/// Lower bound `r -> phi(r)` on the sampling measure of any ball of radius
/// `r` centered in `Delta`.
pub type LevelSetBound<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// How many samples the fixed sampler draws per query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSizeMode {
    Constant(usize),
    /// Derived from the per-iteration tolerance via [`theoretical_mk`].
    Theoretical,
}

#[derive(Clone)]
pub struct FixedSamplerConfig<T> {
    pub sample_size_mode: SampleSizeMode,
    /// `None` uses [`make_default_ulb`] on the problem's index set.
    pub ulb_phi: Option<LevelSetBound<T>>,
}

impl<T> std::fmt::Debug for FixedSamplerConfig<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FixedSamplerConfig")
            .field("sample_size_mode", &self.sample_size_mode)
            .field("ulb_phi", &self.ulb_phi.as_ref().map(|_| "custom"))
            .finish()
    }
}

impl<T: Scalar> FixedSamplerConfig<T> {
    pub fn constant(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(SipError::InvalidInput("constant sample size must be >= 1".into()));
        }
        Ok(FixedSamplerConfig {
            sample_size_mode: SampleSizeMode::Constant(m),
            ulb_phi: None,
        })
    }

    pub fn theoretical() -> Self {
        FixedSamplerConfig {
            sample_size_mode: SampleSizeMode::Theoretical,
            ulb_phi: None,
        }
    }
}

/// `M(eps, beta) = ceil(ln beta / ln(1 - eps))`, the number of i.i.d. draws
/// after which at least one lands in a set of mass `eps` with probability
/// `1 - beta`.
pub fn sample_size<T: Scalar>(epsilon: T, beta: T) -> Result<usize> {
    let open_unit = |v: T| v > T::zero() && v < T::one();
    if !open_unit(epsilon) {
        return Err(SipError::InvalidInput(format!(
            "epsilon = {epsilon} not in (0, 1)"
        )));
    }
    if !open_unit(beta) {
        return Err(SipError::InvalidInput(format!("beta = {beta} not in (0, 1)")));
    }
    let eps = epsilon.to_f64_lossy();
    let ratio = beta.to_f64_lossy().ln() / (-eps).ln_1p();
    // Shave rounding noise so exact integer ratios do not round up.
    let m = (ratio * (1.0 - 1e-12)).ceil();
    if !m.is_finite() || m > usize::MAX as f64 / 2.0 {
        return Err(SipError::InvalidInput(format!(
            "sample size for epsilon = {epsilon} overflows"
        )));
    }
    Ok((m as usize).max(1))
}

/// `phi(r) = min(1, vol(B_1) (r R / (R + D))^d / vol(Delta))` for the
/// uniform distribution on a convex body with inradius `R` and diameter `D`.
///
/// For `delta` in `Delta` and `lambda = r / (R + D)`, the ball of radius
/// `lambda R` around `(1 - lambda) delta + lambda delta_0` lies in `Delta`
/// and inside `B_r(delta)`.
pub fn make_default_ulb<T: Scalar>(geometry: &IndexSetGeometry<T>) -> LevelSetBound<T> {
    let d = geometry.dim();
    let unit = T::lit(unit_ball_volume(d));
    let shrink = geometry.r_delta / (geometry.r_delta + geometry.d_delta);
    let vol = geometry.volume;
    Arc::new(move |r: T| {
        if r <= T::zero() {
            return T::zero();
        }
        (unit * (r * shrink).powi(d as i32) / vol).min(T::one())
    })
}

/// Theoretical per-iteration sample size
/// `M(phi(eps / (2 L_gDelta)), eps / (2 (M_upper - M_lower)))`.
pub fn theoretical_mk<T: Scalar>(
    constants: &ProblemConstants<T>,
    ulb_phi: &dyn Fn(T) -> T,
    epsilon_k: T,
) -> Result<usize> {
    if !(epsilon_k > T::zero() && epsilon_k.is_finite()) {
        return Err(SipError::InvalidInput(format!(
            "epsilon_k = {epsilon_k} must be positive"
        )));
    }
    let two = T::lit(2.0);
    let radius = if constants.lip_g_delta > T::zero() {
        epsilon_k / (two * constants.lip_g_delta)
    } else {
        T::infinity()
    };
    let mass = ulb_phi(radius);
    if !(mass > T::zero() && mass < T::one()) {
        return Err(SipError::PolicyInfeasible {
            quantity: "phi(eps_k / (2 L_gDelta))",
            value: mass.to_f64_lossy(),
        });
    }
    let spread = constants.m_upper - constants.m_lower;
    let beta = if spread > T::zero() {
        epsilon_k / (two * spread)
    } else {
        T::infinity()
    };
    if !(beta > T::zero() && beta < T::one()) {
        return Err(SipError::PolicyInfeasible {
            quantity: "eps_k / (2 (M_upper - M_lower))",
            value: beta.to_f64_lossy(),
        });
    }
    sample_size(mass, beta)
}

/// Draws `m` uniform samples from `Delta` and keeps the one maximizing
/// `g(x, .)` (first draw wins ties).
pub fn fixed_sample_cut<T: Scalar, R: Rng + ?Sized>(
    problem: &SipProblem<T>,
    x: &[T],
    m: usize,
    rng: &mut R,
) -> Result<CutResult<T>> {
    if m < 1 {
        return Err(SipError::InvalidInput("fixed sampler needs M >= 1".into()));
    }
    let mut best_delta = problem.index_set.sample_uniform(rng);
    let mut best = problem.oracle.constraint(x, &best_delta);
    for _ in 1..m {
        let d = problem.index_set.sample_uniform(rng);
        let v = problem.oracle.constraint(x, &d);
        if v > best {
            best = v;
            best_delta = d;
        }
    }
    Ok(CutResult {
        delta: best_delta,
        value: best,
        samples_used: m,
        backend: Backend::Fixed,
    })
}
