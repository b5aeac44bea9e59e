use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sip_csa::{bregman_distance, prox_map, IndexSetGeometry, ProxState, Region, SipError};

fn half_sq(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
}

fn reference_projection(set: &Region<f64>, p: &[f64]) -> Vec<f64> {
    match set {
        Region::Box { lower, upper } => p
            .iter()
            .zip(lower.iter().zip(upper))
            .map(|(&v, (&lo, &hi))| {
                if v < lo {
                    lo
                } else if v > hi {
                    hi
                } else {
                    v
                }
            })
            .collect(),
        Region::Ball { center, radius } => {
            let off: Vec<f64> = p.iter().zip(center).map(|(a, c)| a - c).collect();
            let len = off.iter().map(|v| v * v).sum::<f64>().sqrt();
            if len <= *radius {
                p.to_vec()
            } else {
                center
                    .iter()
                    .zip(&off)
                    .map(|(c, o)| c + o * radius / len)
                    .collect()
            }
        }
    }
}

fn test_sets() -> Vec<Region<f64>> {
    vec![
        Region::cube(2, -2.0, 2.0).unwrap(),
        Region::new_box(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 5.0]).unwrap(),
        Region::unit_ball(2).unwrap(),
        Region::new_ball(vec![1.0, -1.0, 0.5], 2.5).unwrap(),
    ]
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-scale..scale)).collect()
}

#[test]
fn bregman_examples() {
    let e = ProxState::Euclidean;
    assert_eq!(bregman_distance(e, &[0.7, -3.0], &[0.7, -3.0]).unwrap(), 0.0);
    assert_abs_diff_eq!(
        bregman_distance(e, &[0.0, 0.0], &[3.0, 4.0]).unwrap(),
        12.5,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        bregman_distance(e, &[1.0, 1.0], &[1.0, 2.0]).unwrap(),
        0.5,
        epsilon = 1e-12
    );
    assert!(matches!(
        bregman_distance(e, &[0.0, 0.0], &[1.0]),
        Err(SipError::DimensionMismatch { .. })
    ));
}

#[test]
fn prox_examples() {
    let e = ProxState::Euclidean;
    let square = Region::cube(2, -2.0, 2.0).unwrap();
    assert_eq!(
        prox_map(e, &square, &[0.0, 0.0], &[3.0, -1.0]).unwrap(),
        vec![-2.0, 1.0]
    );
    assert_eq!(
        prox_map(e, &square, &[1.0, 1.0], &[0.0, 0.0]).unwrap(),
        vec![1.0, 1.0]
    );
    let disk = Region::unit_ball(2).unwrap();
    let p = prox_map(e, &disk, &[0.0, 0.0], &[-3.0, 0.0]).unwrap();
    assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-12);
    assert!(prox_map(e, &square, &[0.0, 0.0], &[1.0, 1.0, 1.0]).is_err());
}

#[test]
fn prox_matches_projection_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sets = test_sets();
    for case in 0..10_000 {
        let set = &sets[case % sets.len()];
        let x = set.sample_uniform(&mut rng);
        let y = random_vec(&mut rng, set.dim(), 6.0);
        let got = prox_map(ProxState::Euclidean, set, &x, &y).unwrap();
        let shifted: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let want = reference_projection(set, &shifted);
        for (g, w) in got.iter().zip(&want) {
            assert_abs_diff_eq!(*g, *w, epsilon = 1e-12);
        }
        assert!(set.contains(&got));
    }
}

#[test]
fn prox_first_order_optimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for set in test_sets() {
        for _ in 0..500 {
            let x = set.sample_uniform(&mut rng);
            let y = random_vec(&mut rng, set.dim(), 4.0);
            let z = prox_map(ProxState::Euclidean, &set, &x, &y).unwrap();
            for _ in 0..5 {
                let u = set.sample_uniform(&mut rng);
                // <y + z - x, u - z> >= 0 for the Euclidean generator.
                let ip: f64 = (0..z.len()).map(|i| (y[i] + z[i] - x[i]) * (u[i] - z[i])).sum();
                assert!(ip >= -1e-10, "optimality violated by {ip}");
            }
        }
    }
}

#[test]
fn three_point_inequality_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let e = ProxState::Euclidean;
    let sets = test_sets();
    for case in 0..10_000 {
        let set = &sets[case % sets.len()];
        let u = set.sample_uniform(&mut rng);
        let x = set.sample_uniform(&mut rng);
        let y = random_vec(&mut rng, set.dim(), 5.0);
        let p = prox_map(e, set, &x, &y).unwrap();
        let lhs = bregman_distance(e, &p, &u).unwrap();
        let ip: f64 = y
            .iter()
            .zip(u.iter().zip(&x))
            .map(|(a, (b, c))| a * (b - c))
            .sum();
        let rhs = bregman_distance(e, &x, &u).unwrap() + ip + 0.5 * y.iter().map(|v| v * v).sum::<f64>();
        assert!(lhs <= rhs + 1e-10, "case {case}: {lhs} > {rhs}");
    }
}

#[test]
fn prox_diameter_bounds_sampled_distances() {
    let square = Region::cube(2, -2.0, 2.0).unwrap();
    let d = square.euclidean_prox_diameter();
    assert_abs_diff_eq!(d, 4.0, epsilon = 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let worst = (0..10_000)
        .map(|_| {
            let x = square.sample_uniform(&mut rng);
            let z = square.sample_uniform(&mut rng);
            bregman_distance(ProxState::Euclidean, &x, &z).unwrap()
        })
        .fold(0.0, f64::max);
    assert!(worst.sqrt() <= d);
}

#[test]
fn index_set_constants() {
    let ball = IndexSetGeometry::new(Region::<f64>::unit_ball(2).unwrap());
    assert_eq!(ball.r_delta, 1.0);
    assert_eq!(ball.d_delta, 2.0);
    assert_eq!(ball.volume_ratio, 1.0);
    assert_abs_diff_eq!(ball.volume, std::f64::consts::PI, epsilon = 1e-12);

    let square = IndexSetGeometry::new(Region::<f64>::cube(2, -1.0, 1.0).unwrap());
    assert_eq!(square.r_delta, 1.0);
    assert_abs_diff_eq!(square.d_delta, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(square.volume, 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(square.volume_ratio, std::f64::consts::PI / 4.0, epsilon = 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for geo in [&ball, &square] {
        for _ in 0..2_000 {
            assert!(geo.contains(&geo.sample_uniform(&mut rng)));
        }
    }
}

#[test]
fn single_precision_prox() {
    let square = Region::<f32>::cube(2, -2.0, 2.0).unwrap();
    let p = prox_map(ProxState::Euclidean, &square, &[0.0f32, 0.0], &[3.0, -1.0]).unwrap();
    assert_eq!(p, vec![-2.0f32, 1.0]);
}

proptest! {
    #[test]
    fn zero_step_is_identity(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let square = Region::cube(2, -2.0, 2.0).unwrap();
        let p = prox_map(ProxState::Euclidean, &square, &[a, b], &[0.0, 0.0]).unwrap();
        prop_assert_eq!(p, vec![a, b]);
    }

    #[test]
    fn bregman_nonnegative_and_zero_only_on_diagonal(
        x in prop::collection::vec(-5.0f64..5.0, 3),
        z in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let v = bregman_distance(ProxState::Euclidean, &x, &z).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!((v - half_sq(&x, &z)).abs() <= 1e-9 * (1.0 + v));
        prop_assert_eq!(v == 0.0, x == z);
    }

    #[test]
    fn projection_lands_inside(p in prop::collection::vec(-50.0f64..50.0, 3)) {
        for set in test_sets().into_iter().filter(|s| s.dim() == 3) {
            prop_assert!(set.contains(&set.project(&p).unwrap()));
        }
    }
}
