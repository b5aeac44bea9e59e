use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sip_csa::problems::{robust_lp, robust_lp_optimum, strongly_convex_synthetic, SyntheticParams};
use sip_csa::{
    AdaptiveSamplerConfig, CutGenerator, FixedSamplerConfig, PolicyKind, PolicySchedule, SipProblem,
    DEFAULT_ORACLE_POINTS,
};

use crate::error::{HarnessError, Result};

/// Iteration budget of the sampling comparison table.
pub const TABLE1_N: usize = 1000;
pub const TABLE1_CG: f64 = 0.35;
pub const TABLE1_CE: f64 = 0.001;
pub const TABLE1_MH_ITERATIONS: usize = 200;
/// Fixed-sampling sizes in the comparison table.
pub const TABLE1_SAMPLE_SIZES: [usize; 4] = [10, 20, 50, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemChoice {
    RobustLp,
    StronglyConvex,
}

impl ProblemChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemChoice::RobustLp => "robust-lp",
            ProblemChoice::StronglyConvex => "strongly-convex",
        }
    }

    pub fn build(self) -> Result<Benchmark> {
        let (problem, f_star) = match self {
            ProblemChoice::RobustLp => (robust_lp(), robust_lp_optimum::<f64>().1),
            ProblemChoice::StronglyConvex => {
                let inst = strongly_convex_synthetic(&SyntheticParams::default())?;
                (inst.problem, inst.f_star)
            }
        };
        // Start from the middle of the decision set.
        let (lo, hi) = problem.decision_set.bounding_box();
        let x1 = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(Benchmark { problem, f_star, x1 })
    }
}

impl fmt::Display for ProblemChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "robust-lp" => Ok(ProblemChoice::RobustLp),
            "strongly-convex" => Ok(ProblemChoice::StronglyConvex),
            other => Err(format!(
                "unknown problem '{other}' (expected robust-lp or strongly-convex)"
            )),
        }
    }
}

pub fn parse_policy(s: &str) -> std::result::Result<PolicyKind, String> {
    match s {
        "convex" => Ok(PolicyKind::GeneralConvex),
        "strongly-convex" => Ok(PolicyKind::StronglyConvex),
        other => Err(format!(
            "unknown policy '{other}' (expected convex or strongly-convex)"
        )),
    }
}

/// A built-in problem with its optimal value and starting point.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub problem: SipProblem<f64>,
    pub f_star: f64,
    pub x1: Vec<f64>,
}

impl Benchmark {
    pub fn relative_gap(&self, f: f64) -> f64 {
        (f - self.f_star) / self.f_star.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerSpec {
    Fixed { m: usize },
    Adaptive { mh_iterations: usize },
    Grid { points_per_axis: usize },
}

impl SamplerSpec {
    pub fn backend(&self) -> Result<CutGenerator<f64>> {
        match *self {
            SamplerSpec::Fixed { m } => FixedSamplerConfig::constant(m)
                .map(CutGenerator::Fixed)
                .map_err(|e| HarnessError::InvalidSpec(e.to_string())),
            SamplerSpec::Adaptive { mh_iterations } => {
                let cfg = AdaptiveSamplerConfig::default().with_mh_iterations(mh_iterations);
                cfg.validate()
                    .map_err(|e| HarnessError::InvalidSpec(e.to_string()))?;
                Ok(CutGenerator::Adaptive(cfg))
            }
            SamplerSpec::Grid { points_per_axis } => {
                if points_per_axis < 2 {
                    return Err(HarnessError::InvalidSpec(
                        "grid needs at least 2 points per axis".into(),
                    ));
                }
                Ok(CutGenerator::Grid { points_per_axis })
            }
        }
    }

    /// Short name used for output directories and table columns.
    pub fn label(&self) -> String {
        match *self {
            SamplerSpec::Fixed { m } => format!("fixed-M{m}"),
            SamplerSpec::Adaptive { mh_iterations } => format!("adaptive-mh{mh_iterations}"),
            SamplerSpec::Grid { points_per_axis } => format!("grid-{points_per_axis}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemChoice,
    pub policy: PolicyKind,
    pub c_g: f64,
    pub c_e: f64,
    pub sampler: SamplerSpec,
    pub n: usize,
    pub seeds: Vec<u64>,
    /// Evaluate the grid oracle every this many iterations.
    pub oracle_every: Option<usize>,
    pub oracle_points: usize,
    pub out: PathBuf,
}

impl ExperimentSpec {
    /// The scaled robust-LP configuration of the comparison table with the given sampler.
    pub fn table1(sampler: SamplerSpec, seeds: Vec<u64>, out: PathBuf) -> Self {
        ExperimentSpec {
            problem: ProblemChoice::RobustLp,
            policy: PolicyKind::GeneralConvex,
            c_g: TABLE1_CG,
            c_e: TABLE1_CE,
            sampler,
            n: TABLE1_N,
            seeds,
            oracle_every: None,
            oracle_points: DEFAULT_ORACLE_POINTS,
            out,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::InvalidSpec(m));
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.n < 1 {
            return bad("N must be >= 1".into());
        }
        if self.oracle_every == Some(0) {
            return bad("--oracle-every must be >= 1".into());
        }
        if self.oracle_points < 2 {
            return bad("oracle grid needs at least 2 points per axis".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("seeds must be distinct".into());
        }
        self.sampler.backend()?;
        Ok(())
    }

    pub fn schedule(&self, bench: &Benchmark) -> Result<PolicySchedule<f64>> {
        PolicySchedule::scaled(
            self.policy,
            self.n,
            bench.problem.constants.clone(),
            self.c_g,
            self.c_e,
        )
        .map_err(|e| HarnessError::InvalidSpec(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in [ProblemChoice::RobustLp, ProblemChoice::StronglyConvex] {
            assert_eq!(p.to_string().parse::<ProblemChoice>().unwrap(), p);
        }
        assert!("lp".parse::<ProblemChoice>().is_err());
        assert_eq!(parse_policy("convex").unwrap(), PolicyKind::GeneralConvex);
        assert_eq!(
            parse_policy("strongly-convex").unwrap(),
            PolicyKind::StronglyConvex
        );
        assert!(parse_policy("concave").is_err());
    }

    #[test]
    fn benchmarks_start_inside() {
        for p in [ProblemChoice::RobustLp, ProblemChoice::StronglyConvex] {
            let b = p.build().unwrap();
            assert!(b.problem.decision_set.contains(&b.x1));
            assert_eq!(b.relative_gap(b.f_star), 0.0);
        }
        let lp = ProblemChoice::RobustLp.build().unwrap();
        assert!(lp.relative_gap(lp.f_star * 1.01) < 0.0);
    }

    #[test]
    fn validation() {
        let ok = ExperimentSpec::table1(SamplerSpec::Fixed { m: 10 }, vec![0, 1], PathBuf::from("x"));
        assert!(ok.validate().is_ok());
        let bad = |f: fn(&mut ExperimentSpec)| {
            let mut s = ok.clone();
            f(&mut s);
            matches!(s.validate(), Err(HarnessError::InvalidSpec(_)))
        };
        assert!(bad(|s| s.seeds.clear()));
        assert!(bad(|s| s.seeds = vec![2, 2]));
        assert!(bad(|s| s.n = 0));
        assert!(bad(|s| s.oracle_every = Some(0)));
        assert!(bad(|s| s.oracle_points = 1));
        assert!(bad(|s| s.sampler = SamplerSpec::Fixed { m: 0 }));
        assert!(bad(|s| s.sampler = SamplerSpec::Adaptive { mh_iterations: 0 }));
        assert!(bad(|s| s.sampler = SamplerSpec::Grid { points_per_axis: 1 }));
        let mut neg = ok.clone();
        neg.c_g = -1.0;
        assert!(neg.schedule(&ProblemChoice::RobustLp.build().unwrap()).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(SamplerSpec::Fixed { m: 10 }.label(), "fixed-M10");
        assert_eq!(
            SamplerSpec::Adaptive { mh_iterations: 200 }.label(),
            "adaptive-mh200"
        );
        assert_eq!(SamplerSpec::Grid { points_per_axis: 101 }.label(), "grid-101");
    }
}
