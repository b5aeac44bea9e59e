use crate::error::{Result, SipError};
use crate::geometry::Region;
use crate::problem::SipProblem;
use crate::scalar::Scalar;

use super::{Backend, CutResult};

/// Exhaustive maximization of `g(x, .)` over a regular grid on the bounding
/// box of `Delta`, keeping only grid points inside `Delta`.
///
/// Ties keep the first point in lexicographic grid order (last axis fastest).
pub fn grid_oracle<T: Scalar>(
    problem: &SipProblem<T>,
    x: &[T],
    points_per_axis: usize,
) -> Result<CutResult<T>> {
    if points_per_axis < 2 {
        return Err(SipError::InvalidInput(format!(
            "grid oracle needs at least 2 points per axis, got {points_per_axis}"
        )));
    }
    let region = &problem.index_set.region;
    let (lower, upper) = region.bounding_box();
    let d = lower.len();
    let steps: Vec<T> = lower
        .iter()
        .zip(&upper)
        .map(|(&l, &u)| (u - l) / T::of_usize(points_per_axis - 1))
        .collect();

    let mut idx = vec![0usize; d];
    let mut point = lower.clone();
    let mut best: Option<(Vec<T>, T)> = None;
    let mut evaluated = 0usize;
    loop {
        for i in 0..d {
            // Pin the last node to the upper bound exactly.
            point[i] = if idx[i] + 1 == points_per_axis {
                upper[i]
            } else {
                lower[i] + steps[i] * T::of_usize(idx[i])
            };
        }
        if region.contains(&point) {
            evaluated += 1;
            let v = problem.oracle.constraint(x, &point);
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((point.clone(), v));
            }
        }
        // odometer increment, last axis fastest
        let mut axis = d;
        loop {
            if axis == 0 {
                let (delta, value) = best.ok_or(SipError::InfeasibleGrid { points_per_axis })?;
                return Ok(CutResult {
                    delta,
                    value,
                    samples_used: evaluated,
                    backend: Backend::Grid,
                });
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < points_per_axis {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// Worst-case gap `G(x) - grid value` for the given resolution: `L_gDelta`
/// times one cell diagonal on boxes, two on balls, never more than
/// `L_gDelta * D_Delta`.
pub fn grid_tolerance<T: Scalar>(problem: &SipProblem<T>, points_per_axis: usize) -> T {
    let region = &problem.index_set.region;
    let (lower, upper) = region.bounding_box();
    let n = T::of_usize(points_per_axis.max(2) - 1);
    let diag = lower
        .iter()
        .zip(&upper)
        .map(|(&l, &u)| {
            let h = (u - l) / n;
            h * h
        })
        .sum::<T>()
        .sqrt();
    let factor = match region {
        Region::Box { .. } => T::one(),
        Region::Ball { .. } => T::lit(2.0),
    };
    problem.constants.lip_g_delta * (factor * diag).min(problem.index_set.d_delta)
}
