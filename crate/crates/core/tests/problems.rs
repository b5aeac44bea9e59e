use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sip_csa::problems::*;
use sip_csa::{grid_oracle, grid_tolerance, validate_constants, SipError};

const ROWS: [[f64; 2]; 4] = [[-1.0, 0.0], [0.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
const RHS: [f64; 4] = [0.0, 0.0, 1.0, 1.0];

/// Optimum of the default synthetic instance from a boundary bisection and
/// golden-section search over the angle.
const SYNTHETIC_F_STAR: f64 = 3.5237968870995973;

#[test]
fn robust_lp_examples() {
    let p = robust_lp::<f64>();
    assert_eq!(p.name, "robust-lp");
    assert_eq!(p.f(&[1.0, 1.0]), -2.0);
    assert_eq!(p.oracle.objective_subgradient(&[1.0, 1.0]), vec![-1.0, -1.0]);
    assert_eq!(robust_lp_true_g(&[0.0, 0.0]), 0.0);
    assert_abs_diff_eq!(
        robust_lp_true_g(&[2.0, 2.0]),
        1.0 + 0.4 * 2f64.sqrt(),
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(robust_lp_true_g(&[2.0, 2.0]), 1.565685424949238, epsilon = 1e-14);

    let c = &p.constants;
    assert_abs_diff_eq!(c.lip_f, 2f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(c.lip_g_x, 1.2, epsilon = 1e-15);
    assert_abs_diff_eq!(c.lip_g_delta, 0.4 * 2f64.sqrt(), epsilon = 1e-15);
    assert_eq!(c.prox_diameter, 4.0);
    assert_abs_diff_eq!(c.m_upper, 1.2 * 2.0 * 2f64.sqrt(), epsilon = 1e-14);
    assert_abs_diff_eq!(c.m_lower, -(1.2 * 2.0 * 2f64.sqrt() + 1.0), epsilon = 1e-14);
    assert_eq!(
        (p.index_set.r_delta, p.index_set.d_delta, p.index_set.volume_ratio),
        (1.0, 2.0, 1.0)
    );
    assert_eq!(p.decision_set.euclidean_prox_diameter(), c.prox_diameter);
}

#[test]
fn robust_lp_optimum_is_active() {
    let (x, f) = robust_lp_optimum::<f64>();
    let t = 1.0 / (1.0 + 0.2 * 2f64.sqrt());
    assert_eq!(x, vec![t, t]);
    assert_abs_diff_eq!(f, -1.5590375815769153, epsilon = 1e-15);
    assert_eq!(format!("{f:.3}"), "-1.559");
    assert!(robust_lp_true_g(&x).abs() <= 1e-12);
    assert!(robust_lp::<f64>().decision_set.contains(&x));
    assert_eq!(robust_lp::<f64>().f(&x), f);
}

#[test]
fn robust_lp_optimum_beats_feasible_samples() {
    let p = robust_lp::<f64>();
    let (_, f_star) = robust_lp_optimum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    let mut seen = 0;
    for _ in 0..50_000 {
        let x = p.decision_set.sample_uniform(&mut rng);
        if robust_lp_true_g(&x) <= 0.0 {
            seen += 1;
            assert!(p.f(&x) >= f_star - 1e-12, "{x:?}");
        }
    }
    assert!(seen > 1_000);
}

#[test]
fn inner_max_matches_closed_form_per_row() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let p = robust_lp::<f64>();
    let (mut coarse_gap, mut fine_gap) = (0.0, 0.0);
    for _ in 0..1_000 {
        let x = p.decision_set.sample_uniform(&mut rng);
        let i = rng.random_range(0..4);
        let closed = ROWS[i][0] * x[0] + ROWS[i][1] * x[1] + 0.2 * (x[0].hypot(x[1]));
        let mut best = f64::NEG_INFINITY;
        for n in 1..=10_000 {
            let d = p.index_set.sample_uniform(&mut rng);
            best = best.max((ROWS[i][0] + 0.2 * d[0]) * x[0] + (ROWS[i][1] + 0.2 * d[1]) * x[1]);
            if n == 100 {
                coarse_gap += closed - best;
            }
        }
        fine_gap += closed - best;
        assert!(best <= closed + 1e-12);
        assert!(
            closed - best <= 0.2 * x[0].hypot(x[1]) * 0.03 + 1e-12,
            "gap {}",
            closed - best
        );
    }
    assert!(fine_gap < 0.1 * coarse_gap);
}

#[test]
fn folded_constraint_equals_max_over_rows() {
    let p = robust_lp::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..1_000 {
        let x = p.decision_set.sample_uniform(&mut rng);
        let d = p.index_set.sample_uniform(&mut rng);
        let want = (0..4)
            .map(|i| (ROWS[i][0] + 0.2 * d[0]) * x[0] + (ROWS[i][1] + 0.2 * d[1]) * x[1] - RHS[i])
            .fold(f64::NEG_INFINITY, f64::max);
        assert_abs_diff_eq!(p.g(&x, &d), want, epsilon = 1e-14);
    }
}

#[test]
fn true_g_is_convex_along_segments() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let p = robust_lp::<f64>();
    for _ in 0..5_000 {
        let a = p.decision_set.sample_uniform(&mut rng);
        let b = p.decision_set.sample_uniform(&mut rng);
        let t: f64 = rng.random();
        let m = [t * a[0] + (1.0 - t) * b[0], t * a[1] + (1.0 - t) * b[1]];
        let lhs = robust_lp_true_g(&m);
        let rhs = t * robust_lp_true_g(&a) + (1.0 - t) * robust_lp_true_g(&b);
        assert!(lhs <= rhs + 1e-12);
    }
}

#[test]
fn true_g_matches_the_grid_oracle() {
    let p = robust_lp::<f64>();
    let tol = grid_tolerance(&p, 201);
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    for _ in 0..100 {
        let x = p.decision_set.sample_uniform(&mut rng);
        let grid = grid_oracle(&p, &x, 201).unwrap().value;
        assert!((grid - robust_lp_true_g(&x)).abs() <= tol);
    }
}

#[test]
fn constants_validate_cleanly() {
    let lp = robust_lp::<f64>();
    let report = validate_constants(&lp, 10_000, 1);
    assert!(report.is_clean(), "{:?}", report.violations.first());
    assert!(validate_constants(&lp, 1, 2).is_clean());

    let inst = strongly_convex_synthetic(&SyntheticParams::<f64>::default()).unwrap();
    let report = validate_constants(&inst.problem, 10_000, 3);
    assert!(report.is_clean(), "{:?}", report.violations.first());
}

#[test]
fn synthetic_default_optimum() {
    let inst = strongly_convex_synthetic(&SyntheticParams::<f64>::default()).unwrap();
    assert_abs_diff_eq!(inst.f_star, SYNTHETIC_F_STAR, epsilon = 1e-6);
    assert_abs_diff_eq!(inst.problem.f(&inst.x_star), inst.f_star, epsilon = 1e-12);
    let g = inst.problem.oracle.exact_max_constraint(&inst.x_star).unwrap();
    assert!(g.abs() <= 1e-12);
    assert_eq!(inst.problem.name, "strongly-convex");
    assert_eq!(
        (inst.problem.constants.mu_f, inst.problem.constants.mu_g),
        (2.0, 2.0)
    );
}

#[test]
fn synthetic_optimum_beats_feasible_samples() {
    let inst = strongly_convex_synthetic(&SyntheticParams::<f64>::default()).unwrap();
    let p = &inst.problem;
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    let mut seen = 0;
    for _ in 0..20_000 {
        let x = p.decision_set.sample_uniform(&mut rng);
        if p.oracle.exact_max_constraint(&x).unwrap() <= 0.0 {
            seen += 1;
            assert!(p.f(&x) >= inst.f_star - 1e-12);
        }
    }
    assert!(seen > 1_000);
}

#[test]
fn synthetic_without_perturbation_is_a_radial_projection() {
    let params = SyntheticParams {
        center: vec![3.0, -4.0],
        radius: 2.0,
        theta: 0.0,
        half_width: 3.0,
    };
    let inst = strongly_convex_synthetic(&params).unwrap();
    assert_abs_diff_eq!(inst.x_star[0], 1.2, epsilon = 1e-14);
    assert_abs_diff_eq!(inst.x_star[1], -1.6, epsilon = 1e-14);
    assert_abs_diff_eq!(inst.f_star, 9.0, epsilon = 1e-12);
    assert!(validate_constants(&inst.problem, 2_000, 4).is_clean());
}

#[test]
fn synthetic_rejects_bad_parameters() {
    let base = SyntheticParams::<f64>::default();
    let cases = [
        SyntheticParams {
            radius: 0.0,
            ..base.clone()
        },
        SyntheticParams {
            theta: -0.1,
            ..base.clone()
        },
        SyntheticParams {
            half_width: 0.0,
            ..base.clone()
        },
        SyntheticParams {
            half_width: 0.5,
            ..base.clone()
        },
        SyntheticParams {
            center: vec![0.1, 0.1],
            ..base.clone()
        },
        SyntheticParams {
            center: vec![],
            ..base.clone()
        },
    ];
    for params in cases {
        assert!(
            matches!(strongly_convex_synthetic(&params), Err(SipError::InvalidInput(_))),
            "{params:?}"
        );
    }
}

#[test]
fn single_precision_problems() {
    let (x, f) = robust_lp_optimum::<f32>();
    assert!((f - (-1.559_037_6f32)).abs() < 1e-6);
    assert!(robust_lp_true_g(&x).abs() < 1e-6);
}
