//! Step-size / tolerance policies and the strongly convex weight recursion.

use crate::error::{Result, SipError};
use crate::problem::ProblemConstants;
use crate::scalar::Scalar;

/// Which side of the violation test an iteration fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `g(x_k, delta_k) <= eta_k`: step along the objective subgradient.
    Objective,
    /// Otherwise: step along the constraint subgradient.
    Constraint,
}

impl Branch {
    pub fn from_test<T: Scalar>(sampled_value: T, eta: T) -> Self {
        if sampled_value <= eta {
            Branch::Objective
        } else {
            Branch::Constraint
        }
    }

    pub fn is_objective(self) -> bool {
        self == Branch::Objective
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// `gamma_k ~ 1/sqrt(k)`, `eta_k ~ 1/sqrt(k)`, average over the second half.
    GeneralConvex,
    /// `gamma_k ~ 1/(k+1)`, constant `eta`, `rho`-weighted average over all iterations.
    StronglyConvex,
}

impl PolicyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyKind::GeneralConvex => "convex",
            PolicyKind::StronglyConvex => "strongly-convex",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySchedule<T> {
    pub kind: PolicyKind,
    /// Multiplier applied to every step size.
    pub scale_gamma: T,
    /// Multiplier applied to every violation tolerance.
    pub scale_eta: T,
    /// Iteration budget.
    pub n: usize,
    pub constants: ProblemConstants<T>,
}

/// Parameters for one iteration. `gamma` and `eta` include the scale factors;
/// `epsilon` (cut tolerance) and `s` (first averaged iteration) never do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyParams<T> {
    pub gamma: T,
    pub eta: T,
    pub epsilon: T,
    pub s: usize,
}

impl<T: Scalar> PolicySchedule<T> {
    pub fn new(kind: PolicyKind, n: usize, constants: ProblemConstants<T>) -> Result<Self> {
        Self::scaled(kind, n, constants, T::one(), T::one())
    }

    pub fn scaled(
        kind: PolicyKind,
        n: usize,
        constants: ProblemConstants<T>,
        scale_gamma: T,
        scale_eta: T,
    ) -> Result<Self> {
        if n < 1 {
            return Err(SipError::InvalidInput("iteration budget N must be >= 1".into()));
        }
        if !(scale_gamma > T::zero() && scale_eta > T::zero())
            || !scale_gamma.is_finite()
            || !scale_eta.is_finite()
        {
            return Err(SipError::InvalidInput(format!(
                "scale factors must be positive, got c_g = {scale_gamma}, c_e = {scale_eta}"
            )));
        }
        let sched = PolicySchedule {
            kind,
            scale_gamma,
            scale_eta,
            n,
            constants,
        };
        sched.check()?;
        Ok(sched)
    }

    fn check(&self) -> Result<()> {
        let c = &self.constants;
        match self.kind {
            PolicyKind::GeneralConvex => {
                if !(c.lip_sum() > T::zero()) {
                    return Err(SipError::InvalidPolicy(
                        "general convex policy needs L_f + L_gX > 0".into(),
                    ));
                }
            }
            PolicyKind::StronglyConvex => {
                if !(c.mu_f > T::zero() && c.mu_g > T::zero() && c.l_prox > T::zero()) {
                    return Err(SipError::InvalidPolicy(format!(
                        "strongly convex policy needs mu_f, mu_g, L > 0 (got {}, {}, {})",
                        c.mu_f, c.mu_g, c.l_prox
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_unscaled(&self) -> bool {
        self.scale_gamma == T::one() && self.scale_eta == T::one()
    }

    /// First iteration included in the average.
    pub fn averaging_start(&self) -> usize {
        match self.kind {
            PolicyKind::GeneralConvex => self.n.div_ceil(2),
            PolicyKind::StronglyConvex => 1,
        }
    }

    /// `max(mu_f, mu_g) * max(L_f^2 / mu_f^2, L_gX^2 / mu_g^2)`.
    pub fn strong_factor(&self) -> T {
        let c = &self.constants;
        c.mu_f.max(c.mu_g)
            * (c.lip_f * c.lip_f / (c.mu_f * c.mu_f)).max(c.lip_g_x * c.lip_g_x / (c.mu_g * c.mu_g))
    }

    /// Unscaled optimality-gap bound for `f(x_bar) - f(x*)`.
    pub fn gap_bound(&self) -> T {
        let c = &self.constants;
        let n = T::of_usize(self.n);
        match self.kind {
            PolicyKind::GeneralConvex => T::lit(6.0) * c.prox_diameter * c.lip_sum() / n.sqrt(),
            PolicyKind::StronglyConvex => T::lit(8.0) * c.l_prox * self.strong_factor() / (n + T::one()),
        }
    }

    /// Unscaled in-expectation bound on `G(x_bar)` when the cut tolerance
    /// follows the policy's `epsilon_k`.
    pub fn violation_bound(&self) -> T {
        let c = &self.constants;
        let n = T::of_usize(self.n);
        match self.kind {
            PolicyKind::GeneralConvex => T::lit(14.0) * c.prox_diameter * c.lip_sum() / n.sqrt(),
            PolicyKind::StronglyConvex => T::lit(9.0) * c.l_prox * self.strong_factor() / n,
        }
    }

    /// Violation bound with exact cuts (no sampling error term).
    pub fn exact_cut_violation_bound(&self) -> T {
        let c = &self.constants;
        let n = T::of_usize(self.n);
        match self.kind {
            PolicyKind::GeneralConvex => T::lit(12.0) * c.prox_diameter * c.lip_sum() / n.sqrt(),
            PolicyKind::StronglyConvex => T::lit(8.0) * c.l_prox * self.strong_factor() / n,
        }
    }
}

/// `(gamma_k, eta_k, epsilon_k, s)` for iteration `k`. Under the strongly
/// convex policy `branch_hint` picks `mu_f` or `mu_g` in `gamma_k`.
pub fn policy_params<T: Scalar>(
    schedule: &PolicySchedule<T>,
    k: usize,
    branch_hint: Branch,
) -> Result<PolicyParams<T>> {
    if k < 1 {
        return Err(SipError::InvalidInput("iterations are numbered from 1".into()));
    }
    schedule.check()?;
    let c = &schedule.constants;
    let kf = T::of_usize(k);
    let s = schedule.averaging_start();
    let (gamma, eta, epsilon) = match schedule.kind {
        PolicyKind::GeneralConvex => {
            let sk = kf.sqrt();
            let lsum = c.lip_sum();
            (
                c.prox_diameter / (sk * lsum),
                T::lit(6.0) * lsum * c.prox_diameter / sk,
                lsum * c.prox_diameter / sk,
            )
        }
        PolicyKind::StronglyConvex => {
            let n = T::of_usize(schedule.n);
            let factor = schedule.strong_factor();
            let mu = match branch_hint {
                Branch::Objective => c.mu_f,
                Branch::Constraint => c.mu_g,
            };
            (
                T::lit(2.0) * c.l_prox / (mu * (kf + T::one())),
                T::lit(8.0) * c.l_prox * factor / n,
                c.l_prox * factor / n,
            )
        }
    };
    Ok(PolicyParams {
        gamma: schedule.scale_gamma * gamma,
        eta: schedule.scale_eta * eta,
        epsilon,
        s,
    })
}

/// Incremental `a_k`, `A_k`, `rho_k` recursion for the strongly convex policy:
/// `a_k = mu gamma_k / L`, `A_1 = 1`, `A_k = (1 - a_k) A_{k-1}`, `rho_k = gamma_k / A_k`.
#[derive(Debug, Clone)]
pub struct RhoTracker<T> {
    mu_f: T,
    mu_g: T,
    l_prox: T,
    k: usize,
    big_a: T,
}

/// One step of the weight recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoStep<T> {
    pub a: T,
    pub big_a: T,
    pub rho: T,
}

impl<T: Scalar> RhoTracker<T> {
    pub fn new(schedule: &PolicySchedule<T>) -> Result<Self> {
        if schedule.kind != PolicyKind::StronglyConvex {
            return Err(SipError::InvalidPolicy(
                "rho weights are defined only for the strongly convex policy".into(),
            ));
        }
        schedule.check()?;
        Ok(RhoTracker {
            mu_f: schedule.constants.mu_f,
            mu_g: schedule.constants.mu_g,
            l_prox: schedule.constants.l_prox,
            k: 0,
            big_a: T::one(),
        })
    }

    /// Advances to the next iteration given its realized step and branch.
    pub fn next(&mut self, gamma: T, branch: Branch) -> Result<RhoStep<T>> {
        self.k += 1;
        let mu = if branch.is_objective() {
            self.mu_f
        } else {
            self.mu_g
        };
        let a = mu * gamma / self.l_prox;
        let big_a = if self.k == 1 {
            T::one()
        } else {
            (T::one() - a) * self.big_a
        };
        if !(big_a > T::zero()) {
            return Err(SipError::InvalidPolicy(format!(
                "A_{} = {big_a} is not positive (a_k = {a} >= 1); step sizes are too large",
                self.k
            )));
        }
        self.big_a = big_a;
        Ok(RhoStep {
            a,
            big_a,
            rho: gamma / big_a,
        })
    }
}

/// `rho_k` for every step of a realized `(gamma_k, branch_k)` sequence.
pub fn rho_weights<T: Scalar>(schedule: &PolicySchedule<T>, steps: &[(T, Branch)]) -> Result<Vec<T>> {
    let mut tracker = RhoTracker::new(schedule)?;
    steps
        .iter()
        .map(|&(g, b)| tracker.next(g, b).map(|s| s.rho))
        .collect()
}
