//! Distance-generating functions, the Bregman distance they induce, and the
//! prox-mapping used for every iterate update.

use crate::error::{check_dim, Result};
use crate::geometry::Region;
use crate::scalar::Scalar;

/// A strongly convex distance-generating function with modulus 1.
///
/// Implementations must be able to solve the prox subproblem exactly on the
/// supported set shapes.
pub trait DistanceGenerator<T: Scalar>: Send + Sync {
    fn omega(&self, x: &[T]) -> T;
    fn grad(&self, x: &[T]) -> Vec<T>;
    /// `argmin_{z in set} <y, z> + V(x, z)`.
    fn prox(&self, set: &Region<T>, x: &[T], y: &[T]) -> Result<Vec<T>>;
    /// Quadratic-growth constant `L` with `V(x, z) <= L/2 ||x - z||^2`.
    fn quadratic_growth(&self) -> T;
    fn name(&self) -> &'static str;
}

/// `omega(x) = ||x||^2 / 2`; the prox-mapping reduces to projecting `x - y`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Euclidean;

impl<T: Scalar> DistanceGenerator<T> for Euclidean {
    fn omega(&self, x: &[T]) -> T {
        T::lit(0.5) * x.iter().map(|&v| v * v).sum::<T>()
    }

    fn grad(&self, x: &[T]) -> Vec<T> {
        x.to_vec()
    }

    fn prox(&self, set: &Region<T>, x: &[T], y: &[T]) -> Result<Vec<T>> {
        check_dim(x.len(), y.len())?;
        let shifted: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
        set.project(&shifted)
    }

    fn quadratic_growth(&self) -> T {
        T::one()
    }

    fn name(&self) -> &'static str {
        "euclidean"
    }
}

/// Prox state: which generator defines `V`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ProxState {
    #[default]
    Euclidean,
}

impl ProxState {
    fn generator<T: Scalar>(&self) -> &'static dyn DistanceGenerator<T> {
        match self {
            ProxState::Euclidean => &Euclidean,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProxState::Euclidean => "euclidean",
        }
    }

    pub fn quadratic_growth<T: Scalar>(&self) -> T {
        self.generator::<T>().quadratic_growth()
    }
}

/// `V(x, z) = omega(z) - omega(x) - <grad omega(x), z - x>`.
pub fn bregman_distance<T: Scalar>(state: ProxState, x: &[T], z: &[T]) -> Result<T> {
    check_dim(x.len(), z.len())?;
    let gen = state.generator::<T>();
    let gx = gen.grad(x);
    let lin: T = gx
        .iter()
        .zip(z.iter().zip(x))
        .map(|(&g, (&zi, &xi))| g * (zi - xi))
        .sum();
    // Clamp the rounding noise of a difference of nearly equal terms.
    Ok((gen.omega(z) - gen.omega(x) - lin).max(T::zero()))
}

/// `P_x(y) = argmin_{z in set} <y, z> + V(x, z)`.
pub fn prox_map<T: Scalar>(state: ProxState, set: &Region<T>, x: &[T], y: &[T]) -> Result<Vec<T>> {
    check_dim(set.dim(), x.len())?;
    state.generator::<T>().prox(set, x, y)
}
