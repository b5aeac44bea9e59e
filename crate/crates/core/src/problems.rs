//! Built-in benchmark problems with analytic constants and known optima.

use std::sync::Arc;

use crate::error::{Result, SipError};
use crate::geometry::Region;
use crate::problem::{ProblemConstants, SipOracle, SipProblem};
use crate::scalar::{dot, norm, Scalar};

const LP_ROWS: [[f64; 2]; 4] = [[-1.0, 0.0], [0.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
const LP_RHS: [f64; 4] = [0.0, 0.0, 1.0, 1.0];
const LP_PERTURBATION: f64 = 0.2;
const LP_HALF_WIDTH: f64 = 2.0;

/// `min -x1 - x2` subject to `(a_i + 0.2 delta)^T x - b_i <= 0` for every row
/// `i` and every `||delta|| <= 1`, on `[-2, 2]^2`.
///
/// The four per-row uncertainty balls are folded into one shared unit ball,
/// with `g(x, delta) = max_i (a_i + 0.2 delta)^T x - b_i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RobustLp;

impl RobustLp {
    fn active_row<T: Scalar>(x: &[T], delta: &[T]) -> (usize, T) {
        let eps = T::lit(LP_PERTURBATION);
        let mut best = (0, T::neg_infinity());
        for (i, (row, &b)) in LP_ROWS.iter().zip(&LP_RHS).enumerate() {
            let v = (T::lit(row[0]) + eps * delta[0]) * x[0] + (T::lit(row[1]) + eps * delta[1]) * x[1]
                - T::lit(b);
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }
}

impl<T: Scalar> SipOracle<T> for RobustLp {
    fn objective(&self, x: &[T]) -> T {
        -x[0] - x[1]
    }

    fn objective_subgradient(&self, _x: &[T]) -> Vec<T> {
        vec![-T::one(), -T::one()]
    }

    fn constraint(&self, x: &[T], delta: &[T]) -> T {
        Self::active_row(x, delta).1
    }

    fn constraint_subgradient(&self, x: &[T], delta: &[T]) -> Vec<T> {
        let (i, _) = Self::active_row(x, delta);
        let eps = T::lit(LP_PERTURBATION);
        vec![
            T::lit(LP_ROWS[i][0]) + eps * delta[0],
            T::lit(LP_ROWS[i][1]) + eps * delta[1],
        ]
    }

    fn exact_max_constraint(&self, x: &[T]) -> Option<T> {
        Some(robust_lp_true_g(x))
    }
}

/// The robust LP as a [`SipProblem`] with analytically derived constants.
pub fn robust_lp<T: Scalar>() -> SipProblem<T> {
    let sqrt2 = T::SQRT_2();
    let eps = T::lit(LP_PERTURBATION);
    let w = T::lit(LP_HALF_WIDTH);
    // max ||x|| on the square is 2 sqrt(2); max ||a_i + 0.2 delta|| is 1.2.
    let max_x_norm = w * sqrt2;
    let lip_g_x = T::one() + eps;
    let constants = ProblemConstants {
        lip_f: sqrt2,
        lip_g_x,
        lip_g_delta: eps * max_x_norm,
        prox_diameter: T::lit(4.0),
        m_lower: -(lip_g_x * max_x_norm + T::one()),
        m_upper: lip_g_x * max_x_norm,
        mu_f: T::zero(),
        mu_g: T::zero(),
        l_prox: T::one(),
        dim_x: 2,
        dim_delta: 2,
    };
    SipProblem::new(
        "robust-lp",
        Arc::new(RobustLp),
        Region::cube(2, -w, w).expect("static square"),
        Region::unit_ball(2).expect("static ball"),
        constants,
    )
    .expect("robust LP constants are consistent")
}

/// `G(x) = max_i a_i^T x + 0.2 ||x|| - b_i`.
pub fn robust_lp_true_g<T: Scalar>(x: &[T]) -> T {
    let spread = T::lit(LP_PERTURBATION) * norm(x);
    LP_ROWS
        .iter()
        .zip(&LP_RHS)
        .map(|(row, &b)| T::lit(row[0]) * x[0] + T::lit(row[1]) * x[1] + spread - T::lit(b))
        .fold(T::neg_infinity(), T::max)
}

/// `x* = (t, t)` with `t = 1 / (1 + 0.2 sqrt 2)`, `f* = -2t`.
pub fn robust_lp_optimum<T: Scalar>() -> (Vec<T>, T) {
    let t = T::one() / (T::one() + T::lit(LP_PERTURBATION) * T::SQRT_2());
    (vec![t, t], -(t + t))
}

/// Parameters of the strongly convex synthetic problem
/// `min ||x - c||^2` s.t. `||x||^2 - R^2 + theta <delta, x> <= 0` for all
/// `delta` in the unit ball, on the cube `[-w, w]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams<T> {
    pub center: Vec<T>,
    pub radius: T,
    pub theta: T,
    pub half_width: T,
}

impl<T: Scalar> Default for SyntheticParams<T> {
    fn default() -> Self {
        SyntheticParams {
            center: vec![T::lit(2.0), T::lit(2.0)],
            radius: T::one(),
            theta: T::lit(0.1),
            half_width: T::lit(2.0),
        }
    }
}

#[derive(Debug, Clone)]
struct SyntheticOracle<T> {
    center: Vec<T>,
    radius: T,
    theta: T,
}

impl<T: Scalar> SipOracle<T> for SyntheticOracle<T> {
    fn objective(&self, x: &[T]) -> T {
        x.iter().zip(&self.center).map(|(&a, &c)| (a - c) * (a - c)).sum()
    }

    fn objective_subgradient(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(&self.center)
            .map(|(&a, &c)| (a - c) + (a - c))
            .collect()
    }

    fn constraint(&self, x: &[T], delta: &[T]) -> T {
        dot(x, x) - self.radius * self.radius + self.theta * dot(delta, x)
    }

    fn constraint_subgradient(&self, x: &[T], delta: &[T]) -> Vec<T> {
        x.iter()
            .zip(delta)
            .map(|(&a, &d)| a + a + self.theta * d)
            .collect()
    }

    fn exact_max_constraint(&self, x: &[T]) -> Option<T> {
        Some(dot(x, x) - self.radius * self.radius + self.theta * norm(x))
    }
}

/// A strongly convex problem together with its optimum.
#[derive(Debug, Clone)]
pub struct SyntheticInstance<T: Scalar> {
    pub problem: SipProblem<T>,
    pub x_star: Vec<T>,
    pub f_star: T,
}

/// Builds the strongly convex synthetic problem (`mu_f = mu_g = 2`).
///
/// The feasible set is the ball of radius `rho` solving `rho^2 + theta rho = R^2`;
/// the optimum is the radial projection of `c` onto it.
pub fn strongly_convex_synthetic<T: Scalar>(params: &SyntheticParams<T>) -> Result<SyntheticInstance<T>> {
    let n = params.center.len();
    let SyntheticParams {
        radius,
        theta,
        half_width: w,
        ..
    } = *params;
    if n == 0 {
        return Err(SipError::InvalidInput("center must have dimension >= 1".into()));
    }
    if !(radius > T::zero()) {
        return Err(SipError::InvalidInput(format!(
            "radius {radius} leaves no feasible interior"
        )));
    }
    if !(theta >= T::zero() && w > T::zero()) {
        return Err(SipError::InvalidInput(
            "theta must be >= 0 and the half width > 0".into(),
        ));
    }
    let two = T::lit(2.0);
    let rho = (-theta + (theta * theta + T::lit(4.0) * radius * radius).sqrt()) / two;
    if rho > w {
        return Err(SipError::InvalidInput(format!(
            "feasible ball of radius {rho} does not fit in the cube of half width {w}"
        )));
    }
    let c_norm = norm(&params.center);
    if c_norm <= rho {
        return Err(SipError::InvalidInput(
            "the unconstrained minimizer is feasible; the constraint would be inactive".into(),
        ));
    }

    let sqrt_n = T::of_usize(n).sqrt();
    let max_x = w * sqrt_n;
    let far: Vec<T> = params.center.iter().map(|&c| w + c.abs()).collect();
    let constants = ProblemConstants {
        lip_f: two * norm(&far),
        lip_g_x: two * max_x + theta,
        lip_g_delta: theta * max_x,
        prox_diameter: w * (two * T::of_usize(n)).sqrt(),
        m_lower: -radius * radius - theta * max_x,
        m_upper: max_x * max_x - radius * radius + theta * max_x,
        mu_f: two,
        mu_g: two,
        l_prox: T::one(),
        dim_x: n,
        dim_delta: n,
    };
    let oracle = SyntheticOracle {
        center: params.center.clone(),
        radius,
        theta,
    };
    let problem = SipProblem::new(
        "strongly-convex",
        Arc::new(oracle),
        Region::cube(n, -w, w)?,
        Region::unit_ball(n)?,
        constants,
    )?;
    let x_star = params.center.iter().map(|&c| c * rho / c_norm).collect();
    Ok(SyntheticInstance {
        problem,
        x_star,
        f_star: (c_norm - rho) * (c_norm - rho),
    })
}
