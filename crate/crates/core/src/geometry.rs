//! Boxes and Euclidean balls: the two set shapes used for both the decision
//! set `X` and the constraint index set `Delta`. Every geometric constant is
//! closed-form for these shapes.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Result, SipError};
use crate::scalar::{dist, unit_ball_volume, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Region<T> {
    /// Axis-aligned box with per-coordinate bounds.
    Box { lower: Vec<T>, upper: Vec<T> },
    /// Closed Euclidean ball.
    Ball { center: Vec<T>, radius: T },
}

impl<T: Scalar> Region<T> {
    pub fn new_box(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(SipError::InvalidInput("box must have dimension >= 1".into()));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(SipError::InvalidInput(format!(
                    "box edge {i} is empty or unbounded: [{l}, {u}]"
                )));
            }
        }
        Ok(Region::Box { lower, upper })
    }

    /// Cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: T, hi: T) -> Result<Self> {
        Self::new_box(vec![lo; dim], vec![hi; dim])
    }

    pub fn new_ball(center: Vec<T>, radius: T) -> Result<Self> {
        if center.is_empty() {
            return Err(SipError::InvalidInput("ball must have dimension >= 1".into()));
        }
        if !(radius.is_finite() && radius > T::zero()) || center.iter().any(|c| !c.is_finite()) {
            return Err(SipError::InvalidInput(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Region::Ball { center, radius })
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::new_ball(vec![T::zero(); dim], T::one())
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box { lower, .. } => lower.len(),
            Region::Ball { center, .. } => center.len(),
        }
    }

    /// Membership up to a few ulps of slack, so projected points always test inside.
    pub fn contains(&self, p: &[T]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        let slack = T::epsilon() * T::lit(16.0);
        match self {
            Region::Box { lower, upper } => p.iter().zip(lower.iter().zip(upper)).all(|(&x, (&l, &u))| {
                let tol = slack * (T::one() + l.abs().max(u.abs()));
                x >= l - tol && x <= u + tol
            }),
            Region::Ball { center, radius } => dist(p, center) <= *radius * (T::one() + slack) + slack,
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_dim(self.dim(), p.len())?;
        Ok(match self {
            Region::Box { lower, upper } => p
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&x, (&l, &u))| x.max(l).min(u))
                .collect(),
            Region::Ball { center, radius } => {
                let r = dist(p, center);
                if r <= *radius {
                    p.to_vec()
                } else {
                    let scale = *radius / r;
                    p.iter().zip(center).map(|(&x, &c)| c + (x - c) * scale).collect()
                }
            }
        })
    }

    /// One draw from the uniform distribution on the set.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        match self {
            Region::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&l, &u)| l + (u - l) * T::lit(rng.random::<f64>()))
                .collect(),
            Region::Ball { center, radius } => {
                let d = center.len();
                let mut dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                let mut n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                while n == 0.0 {
                    dir = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                    n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                }
                let rho = rng.random::<f64>().powf(1.0 / d as f64);
                center
                    .iter()
                    .zip(&dir)
                    .map(|(&c, &v)| c + *radius * T::lit(rho * v / n))
                    .collect()
            }
        }
    }

    /// Smallest axis-aligned box containing the set, as `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        match self {
            Region::Box { lower, upper } => (lower.clone(), upper.clone()),
            Region::Ball { center, radius } => (
                center.iter().map(|&c| c - *radius).collect(),
                center.iter().map(|&c| c + *radius).collect(),
            ),
        }
    }

    /// Euclidean diameter.
    pub fn diameter(&self) -> T {
        match self {
            Region::Box { lower, upper } => dist(lower, upper),
            Region::Ball { radius, .. } => *radius + *radius,
        }
    }

    /// Radius of the largest inscribed ball and its center.
    pub fn inball(&self) -> (T, Vec<T>) {
        match self {
            Region::Box { lower, upper } => {
                let half = T::lit(0.5);
                let r = lower
                    .iter()
                    .zip(upper)
                    .map(|(&l, &u)| (u - l) * half)
                    .fold(T::infinity(), T::min);
                let c = lower.iter().zip(upper).map(|(&l, &u)| (l + u) * half).collect();
                (r, c)
            }
            Region::Ball { center, radius } => (*radius, center.clone()),
        }
    }

    /// Lebesgue volume.
    pub fn volume(&self) -> T {
        match self {
            Region::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .fold(T::one(), |acc, (&l, &u)| acc * (u - l)),
            Region::Ball { center, radius } => {
                T::lit(unit_ball_volume(center.len())) * radius.powi(center.len() as i32)
            }
        }
    }

    /// `max V(x, z)` over the set for the half-squared-norm generator: `diam^2 / 2`.
    pub fn euclidean_prox_diameter(&self) -> T {
        let d = self.diameter();
        (d * d * T::lit(0.5)).sqrt()
    }
}

/// The compact index set `Delta` together with the geometric constants the
/// adaptive sampler and the level-set bound consume.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSetGeometry<T> {
    pub region: Region<T>,
    /// Radius of the largest inscribed ball.
    pub r_delta: T,
    /// Euclidean diameter.
    pub d_delta: T,
    pub volume: T,
    /// `vol(largest inscribed ball) / vol(Delta)`, in `(0, 1]`.
    pub volume_ratio: T,
    /// Center of the largest inscribed ball.
    pub inball_center: Vec<T>,
}

impl<T: Scalar> IndexSetGeometry<T> {
    pub fn new(region: Region<T>) -> Self {
        let (r_delta, inball_center) = region.inball();
        let d_delta = region.diameter();
        let volume = region.volume();
        let d = region.dim();
        let volume_ratio = match region {
            // Exactly one for balls, avoiding a rounded ratio of equal volumes.
            Region::Ball { .. } => T::one(),
            Region::Box { .. } => {
                (T::lit(unit_ball_volume(d)) * r_delta.powi(d as i32) / volume).min(T::one())
            }
        };
        IndexSetGeometry {
            region,
            r_delta,
            d_delta,
            volume,
            volume_ratio,
            inball_center,
        }
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn contains(&self, p: &[T]) -> bool {
        self.region.contains(p)
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.region.sample_uniform(rng)
    }
}
