//! Semi-infinite program definition: oracles, set geometry, and the analytic
//! constants every step-size policy and sampler bound is built from.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Result, SipError};
use crate::geometry::{IndexSetGeometry, Region};
use crate::prox::{bregman_distance, ProxState};
use crate::scalar::{dist, dot, Scalar};

/// First-order oracles for `min f(x) s.t. g(x, delta) <= 0 for all delta`.
pub trait SipOracle<T: Scalar>: Send + Sync {
    fn objective(&self, x: &[T]) -> T;
    fn objective_subgradient(&self, x: &[T]) -> Vec<T>;
    fn constraint(&self, x: &[T], delta: &[T]) -> T;
    /// Subgradient of `g(., delta)` at `x`.
    fn constraint_subgradient(&self, x: &[T], delta: &[T]) -> Vec<T>;
    /// `G(x) = max_delta g(x, delta)` when a closed form exists.
    fn exact_max_constraint(&self, _x: &[T]) -> Option<T> {
        None
    }
}

type ObjFn<T> = dyn Fn(&[T]) -> (T, Vec<T>) + Send + Sync;
type ConFn<T> = dyn Fn(&[T], &[T]) -> (T, Vec<T>) + Send + Sync;

/// Oracle assembled from closures returning `(value, subgradient)`.
pub struct FnOracle<T> {
    objective: Box<ObjFn<T>>,
    constraint: Box<ConFn<T>>,
}

impl<T: Scalar> FnOracle<T> {
    pub fn new<F, G>(objective: F, constraint: G) -> Self
    where
        F: Fn(&[T]) -> (T, Vec<T>) + Send + Sync + 'static,
        G: Fn(&[T], &[T]) -> (T, Vec<T>) + Send + Sync + 'static,
    {
        FnOracle {
            objective: Box::new(objective),
            constraint: Box::new(constraint),
        }
    }
}

impl<T: Scalar> SipOracle<T> for FnOracle<T> {
    fn objective(&self, x: &[T]) -> T {
        (self.objective)(x).0
    }
    fn objective_subgradient(&self, x: &[T]) -> Vec<T> {
        (self.objective)(x).1
    }
    fn constraint(&self, x: &[T], delta: &[T]) -> T {
        (self.constraint)(x, delta).0
    }
    fn constraint_subgradient(&self, x: &[T], delta: &[T]) -> Vec<T> {
        (self.constraint)(x, delta).1
    }
}

/// Lipschitz, boundedness and convexity constants of a problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConstants<T> {
    /// Lipschitz constant of `f` on `X`.
    pub lip_f: T,
    /// Lipschitz constant of `g(., delta)` on `X`, uniform in `delta`.
    pub lip_g_x: T,
    /// Lipschitz constant of `g(x, .)` on `Delta`, uniform in `x`.
    pub lip_g_delta: T,
    /// Prox-diameter `sqrt(max V(x, z))` of `X`.
    pub prox_diameter: T,
    pub m_lower: T,
    pub m_upper: T,
    /// Strong-convexity modulus of `f` (zero when absent).
    pub mu_f: T,
    /// Strong-convexity modulus of every `g(., delta)` (zero when absent).
    pub mu_g: T,
    /// Quadratic-growth constant `L` of the prox-function.
    pub l_prox: T,
    pub dim_x: usize,
    pub dim_delta: usize,
}

impl<T: Scalar> ProblemConstants<T> {
    pub fn check(&self) -> Result<()> {
        let bad = |what: &str, v: T| {
            Err(SipError::InvalidInput(format!(
                "constant {what} = {v} is inadmissible"
            )))
        };
        for (name, v) in [
            ("L_f", self.lip_f),
            ("L_gX", self.lip_g_x),
            ("L_gDelta", self.lip_g_delta),
            ("mu_f", self.mu_f),
            ("mu_g", self.mu_g),
        ] {
            if !(v.is_finite() && v >= T::zero()) {
                return bad(name, v);
            }
        }
        if !(self.prox_diameter.is_finite() && self.prox_diameter > T::zero()) {
            return bad("D_X", self.prox_diameter);
        }
        if !(self.l_prox.is_finite() && self.l_prox > T::zero()) {
            return bad("L_prox", self.l_prox);
        }
        if !(self.m_lower.is_finite() && self.m_upper.is_finite() && self.m_lower <= self.m_upper) {
            return Err(SipError::InvalidInput(format!(
                "constraint bounds must satisfy M_lower <= M_upper, got [{}, {}]",
                self.m_lower, self.m_upper
            )));
        }
        if self.dim_x == 0 || self.dim_delta == 0 {
            return Err(SipError::InvalidInput("dimensions must be >= 1".into()));
        }
        Ok(())
    }

    /// `L_f + L_gX`.
    pub fn lip_sum(&self) -> T {
        self.lip_f + self.lip_g_x
    }
}

/// A fully specified semi-infinite program.
#[derive(Clone)]
pub struct SipProblem<T: Scalar> {
    pub name: String,
    pub oracle: Arc<dyn SipOracle<T>>,
    pub decision_set: Region<T>,
    pub index_set: IndexSetGeometry<T>,
    pub constants: ProblemConstants<T>,
    pub prox: ProxState,
}

impl<T: Scalar> fmt::Debug for SipProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SipProblem")
            .field("name", &self.name)
            .field("decision_set", &self.decision_set)
            .field("index_set", &self.index_set)
            .field("constants", &self.constants)
            .field("prox", &self.prox)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> SipProblem<T> {
    pub fn new(
        name: impl Into<String>,
        oracle: Arc<dyn SipOracle<T>>,
        decision_set: Region<T>,
        index_set: Region<T>,
        constants: ProblemConstants<T>,
    ) -> Result<Self> {
        constants.check()?;
        check_dim(constants.dim_x, decision_set.dim())?;
        check_dim(constants.dim_delta, index_set.dim())?;
        Ok(SipProblem {
            name: name.into(),
            oracle,
            decision_set,
            index_set: IndexSetGeometry::new(index_set),
            constants,
            prox: ProxState::Euclidean,
        })
    }

    pub fn dim_x(&self) -> usize {
        self.constants.dim_x
    }

    pub fn dim_delta(&self) -> usize {
        self.constants.dim_delta
    }

    pub fn f(&self, x: &[T]) -> T {
        self.oracle.objective(x)
    }

    pub fn g(&self, x: &[T], delta: &[T]) -> T {
        self.oracle.constraint(x, delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    LipschitzObjective,
    LipschitzConstraintX,
    LipschitzConstraintDelta,
    BelowLowerBound,
    AboveUpperBound,
    ObjectiveSubgradient,
    ConstraintSubgradient,
    ProxDiameter,
}

/// One failed inequality `lhs <= rhs`, with the points that witness it.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T> {
    pub kind: ViolationKind,
    pub lhs: T,
    pub rhs: T,
    pub x: Vec<T>,
    pub z: Vec<T>,
    pub delta: Vec<T>,
    pub delta_alt: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub trials: usize,
    pub violations: Vec<Violation<T>>,
}

impl<T> ValidationReport<T> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Monte-Carlo spot-check of the declared constants over random pairs drawn
/// uniformly from `X` and `Delta`.
///
/// Checks the three Lipschitz bounds, `M_lower <= g <= M_upper`, the
/// subgradient inequalities with the declared strong-convexity moduli and
/// `V(x, z) <= D_X^2`. Never fails; problems are listed in the report.
pub fn validate_constants<T: Scalar>(
    problem: &SipProblem<T>,
    trials: usize,
    rng_seed: u64,
) -> ValidationReport<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let c = &problem.constants;
    let tol_rel = T::epsilon().sqrt();
    let slack = |rhs: T| tol_rel * (T::one() + rhs.abs());
    let half = T::lit(0.5);
    let mut violations = Vec::new();

    for _ in 0..trials.max(1) {
        let x = problem.decision_set.sample_uniform(&mut rng);
        let z = problem.decision_set.sample_uniform(&mut rng);
        let d = problem.index_set.sample_uniform(&mut rng);
        let d2 = problem.index_set.sample_uniform(&mut rng);
        let dxz = dist(&x, &z);
        let ddd = dist(&d, &d2);
        let mut push = |kind, lhs: T, rhs: T| {
            if lhs > rhs + slack(rhs) {
                violations.push(Violation {
                    kind,
                    lhs,
                    rhs,
                    x: x.clone(),
                    z: z.clone(),
                    delta: d.clone(),
                    delta_alt: d2.clone(),
                });
            }
        };

        let fx = problem.oracle.objective(&x);
        let fz = problem.oracle.objective(&z);
        push(ViolationKind::LipschitzObjective, (fx - fz).abs(), c.lip_f * dxz);

        let gxd = problem.oracle.constraint(&x, &d);
        let gzd = problem.oracle.constraint(&z, &d);
        let gxd2 = problem.oracle.constraint(&x, &d2);
        push(
            ViolationKind::LipschitzConstraintX,
            (gxd - gzd).abs(),
            c.lip_g_x * dxz,
        );
        push(
            ViolationKind::LipschitzConstraintDelta,
            (gxd - gxd2).abs(),
            c.lip_g_delta * ddd,
        );
        push(ViolationKind::BelowLowerBound, c.m_lower, gxd);
        push(ViolationKind::AboveUpperBound, gxd, c.m_upper);

        // f(z) >= f(x) + <f'(x), z - x> + mu/2 ||z - x||^2
        let diff: Vec<T> = z.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let fsub = problem.oracle.objective_subgradient(&x);
        push(
            ViolationKind::ObjectiveSubgradient,
            fx + dot(&fsub, &diff) + half * c.mu_f * dxz * dxz,
            fz,
        );
        let gsub = problem.oracle.constraint_subgradient(&x, &d);
        push(
            ViolationKind::ConstraintSubgradient,
            gxd + dot(&gsub, &diff) + half * c.mu_g * dxz * dxz,
            gzd,
        );

        if let Ok(v) = bregman_distance(problem.prox, &x, &z) {
            push(ViolationKind::ProxDiameter, v, c.prox_diameter * c.prox_diameter);
        }
    }

    ValidationReport {
        trials: trials.max(1),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_problem(lip_f: f64) -> SipProblem<f64> {
        // f(x) = x0 + x1, g(x, d) = d0 * x0 - 1 on [-1,1]^2 x [-1,1]
        let oracle = FnOracle::new(
            |x: &[f64]| (x[0] + x[1], vec![1.0, 1.0]),
            |x: &[f64], d: &[f64]| (d[0] * x[0] - 1.0, vec![d[0], 0.0]),
        );
        let consts = ProblemConstants {
            lip_f,
            lip_g_x: 1.0,
            lip_g_delta: 1.0,
            prox_diameter: 2.0,
            m_lower: -2.0,
            m_upper: 0.0,
            mu_f: 0.0,
            mu_g: 0.0,
            l_prox: 1.0,
            dim_x: 2,
            dim_delta: 1,
        };
        SipProblem::new(
            "linear",
            Arc::new(oracle),
            Region::cube(2, -1.0, 1.0).unwrap(),
            Region::cube(1, -1.0, 1.0).unwrap(),
            consts,
        )
        .unwrap()
    }

    #[test]
    fn consistent_constants_pass() {
        let p = linear_problem(2f64.sqrt());
        assert!(validate_constants(&p, 5000, 1).is_clean());
        assert!(validate_constants(&p, 1, 9).is_clean());
    }

    #[test]
    fn zero_lipschitz_on_nonconstant_objective_is_caught() {
        let p = linear_problem(0.0);
        let report = validate_constants(&p, 100, 1);
        assert!(!report.is_clean());
        assert!(report.count(ViolationKind::LipschitzObjective) > 0);
        assert_eq!(report.count(ViolationKind::LipschitzConstraintX), 0);
    }

    #[test]
    fn overstated_modulus_is_caught() {
        let mut p = linear_problem(2f64.sqrt());
        p.constants.mu_f = 1.0;
        let report = validate_constants(&p, 200, 1);
        assert!(report.count(ViolationKind::ObjectiveSubgradient) > 0);
    }

    #[test]
    fn constants_invariants() {
        let p = linear_problem(1.0);
        let mut c = p.constants.clone();
        c.m_lower = 1.0;
        c.m_upper = 0.0;
        assert!(c.check().is_err());
        let mut c = p.constants.clone();
        c.prox_diameter = 0.0;
        assert!(c.check().is_err());
        let mut c = p.constants.clone();
        c.lip_g_x = -1.0;
        assert!(c.check().is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = linear_problem(1.0);
        let mut c = p.constants.clone();
        c.dim_delta = 2;
        assert!(SipProblem::new(
            "bad",
            p.oracle.clone(),
            p.decision_set.clone(),
            p.index_set.region.clone(),
            c
        )
        .is_err());
    }
}
