use crate::error::Result;
use crate::scalar::Scalar;

use super::policy::{Branch, PolicyKind, PolicySchedule, RhoTracker};
use super::run::IterationRecord;

/// Which sufficient condition for a nonempty `B` was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellDefinedCondition {
    /// `(N-s+1)/2 * min_{k in N} gamma_k eta_k > D^2 + sum_B gamma^2 L_f^2 / 2 + sum_N gamma^2 L_gX^2 / 2`.
    GeneralConvex,
    /// `min_{|A| = ceil((N-s+1)/2)} sum_A rho_k eta_k > (1-a_s) D^2 / A_s + sum_B rho gamma L_f^2 / 2 + sum_N rho gamma L_gX^2 / 2`.
    StronglyConvex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellDefinedReport<T> {
    pub condition: WellDefinedCondition,
    pub lhs: T,
    pub rhs: T,
    /// The sufficient condition held on the realized partition.
    pub holds: bool,
    pub b_size: usize,
    /// `(N - s + 1) / 2`.
    pub half_window: f64,
    pub b_at_least_half: bool,
}

/// Evaluates the sufficient condition for `B != {}` on a completed trace.
/// Report-only: a violated condition with a nonempty `B` is not an error.
pub fn check_well_defined<T: Scalar>(
    schedule: &PolicySchedule<T>,
    trace: &[IterationRecord<T>],
) -> Result<WellDefinedReport<T>> {
    let c = &schedule.constants;
    let s = schedule.averaging_start();
    let window: Vec<&IterationRecord<T>> = trace.iter().filter(|r| r.k >= s).collect();
    let b_size = window.iter().filter(|r| r.branch.is_objective()).count();
    let half_window = window.len() as f64 / 2.0;
    let half = T::lit(0.5);
    let d2 = c.prox_diameter * c.prox_diameter;
    let lf2 = c.lip_f * c.lip_f;
    let lg2 = c.lip_g_x * c.lip_g_x;

    let (condition, lhs, rhs) = match schedule.kind {
        PolicyKind::GeneralConvex => {
            let min_n = window
                .iter()
                .filter(|r| !r.branch.is_objective())
                .map(|r| r.gamma * r.eta)
                .fold(T::infinity(), T::min);
            let lhs = T::lit(half_window) * min_n;
            let rhs = window.iter().fold(d2, |acc, r| {
                let l2 = if r.branch.is_objective() { lf2 } else { lg2 };
                acc + half * r.gamma * r.gamma * l2
            });
            (WellDefinedCondition::GeneralConvex, lhs, rhs)
        }
        PolicyKind::StronglyConvex => {
            let mut tracker = RhoTracker::new(schedule)?;
            let mut products = Vec::with_capacity(trace.len());
            let mut rhs = T::zero();
            for r in trace {
                let step = tracker.next(r.gamma, r.branch)?;
                if r.k == s {
                    rhs = rhs + (T::one() - step.a) * d2 / step.big_a;
                }
                if r.k >= s {
                    products.push(step.rho * r.eta);
                    let l2 = if r.branch == Branch::Objective { lf2 } else { lg2 };
                    rhs = rhs + half * step.rho * r.gamma * l2;
                }
            }
            products.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
            let m = products.len().div_ceil(2);
            let lhs = products.iter().take(m).copied().sum::<T>();
            (WellDefinedCondition::StronglyConvex, lhs, rhs)
        }
    };
    Ok(WellDefinedReport {
        condition,
        lhs,
        rhs,
        holds: lhs > rhs,
        b_size,
        half_window,
        b_at_least_half: b_size as f64 >= half_window,
    })
}
