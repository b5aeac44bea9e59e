//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field the solver is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion from a count.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

/// Volume of the unit Euclidean ball in `d` dimensions, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = 2 pi / d * V_{d-2}
    let mut even = 1.0_f64;
    let mut odd = 2.0_f64;
    if d == 0 {
        return even;
    }
    if d == 1 {
        return odd;
    }
    let mut k = 2;
    loop {
        even *= 2.0 * std::f64::consts::PI / k as f64;
        if k == d {
            return even;
        }
        odd *= 2.0 * std::f64::consts::PI / (k + 1) as f64;
        if k + 1 == d {
            return odd;
        }
        k += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(1), 2.0);
        assert_relative_eq!(unit_ball_volume(2), std::f64::consts::PI);
        assert_relative_eq!(unit_ball_volume(3), 4.0 / 3.0 * std::f64::consts::PI);
        assert_relative_eq!(
            unit_ball_volume(4),
            std::f64::consts::PI.powi(2) / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn norms() {
        assert_eq!(norm(&[3.0_f64, 4.0]), 5.0);
        assert_eq!(dist(&[1.0_f32, 1.0], &[1.0, 2.0]), 1.0);
    }
}
