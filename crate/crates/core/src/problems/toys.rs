//! Two bi-objective toys with binary constraints and known constrained fronts.
//!
//! Both share the distance term `g = sum_{i>=2} (x_i - 0.5)^2`, so the front
//! is reached at `x_i = 0.5` for every `i >= 2`.

use crate::error::{Error, Result};
use crate::problems::{Bounds, Problem};
use crate::solution::{ConstraintBits, ObjectiveVector};

/// Lower / upper edge of the infeasible band on `f1 + f2`.
pub const BAND_LOW: f64 = 1.02;
pub const BAND_HIGH: f64 = 1.30;

/// Number of equal-width stripes along `x1` in `bc_arcs`; even stripes are
/// feasible.
pub const ARC_STRIPES: usize = 5;

fn check_dim(x: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::Config(format!(
            "toy problems need D >= 2, got {}",
            x.len()
        )));
    }
    Ok(())
}

fn distance_term(x: &[f64]) -> f64 {
    x[1..].iter().map(|v| (v - 0.5) * (v - 0.5)).sum()
}

/// Linear front `f1 + f2 = 1` separated from most of the search space by an
/// infeasible band `1.02 < f1 + f2 < 1.30`.
pub fn eval_bc_band(x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)> {
    check_dim(x)?;
    let g = distance_term(x);
    let f1 = x[0] + g;
    let f2 = 1.0 - x[0] + g;
    let sum = f1 + f2;
    let violated = BAND_LOW < sum && sum < BAND_HIGH;
    Ok((vec![f1, f2].into(), ConstraintBits::from_flags([violated])))
}

/// Stripe index of `x1` in `[0, 1]`, with `x1 = 1` folded into the last one.
pub(crate) fn arc_stripe(x1: f64) -> usize {
    ((ARC_STRIPES as f64 * x1).floor().max(0.0) as usize).min(ARC_STRIPES - 1)
}

/// Linear front cut into three disconnected pieces; feasibility depends on
/// `x1` only.
pub fn eval_bc_arcs(x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)> {
    check_dim(x)?;
    let g = distance_term(x);
    let f1 = x[0];
    let f2 = 1.0 - x[0] + g;
    let violated = arc_stripe(x[0]) % 2 == 1;
    Ok((vec![f1, f2].into(), ConstraintBits::from_flags([violated])))
}

#[derive(Clone, Debug)]
pub struct BcBand {
    bounds: Bounds,
}

impl BcBand {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!("bc_band needs D >= 2, got {dim}")));
        }
        Ok(Self {
            bounds: Bounds::unit(dim),
        })
    }
}

impl Problem for BcBand {
    fn name(&self) -> &str {
        "bc_band"
    }

    fn n_obj(&self) -> usize {
        2
    }

    fn n_con(&self) -> usize {
        1
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)> {
        eval_bc_band(x)
    }

    fn sample_front(&self, n_points: usize) -> Option<Vec<ObjectiveVector>> {
        Some(
            unit_grid(n_points)
                .map(|t| vec![t, 1.0 - t].into())
                .collect(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct BcArcs {
    bounds: Bounds,
}

impl BcArcs {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!("bc_arcs needs D >= 2, got {dim}")));
        }
        Ok(Self {
            bounds: Bounds::unit(dim),
        })
    }

    /// `[start, end)` of every feasible stripe of `f1` (the last one closed).
    pub fn feasible_stripes() -> impl Iterator<Item = (f64, f64)> {
        let width = 1.0 / ARC_STRIPES as f64;
        (0..ARC_STRIPES)
            .step_by(2)
            .map(move |s| (s as f64 * width, (s + 1) as f64 * width))
    }
}

impl Problem for BcArcs {
    fn name(&self) -> &str {
        "bc_arcs"
    }

    fn n_obj(&self) -> usize {
        2
    }

    fn n_con(&self) -> usize {
        1
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)> {
        eval_bc_arcs(x)
    }

    /// Samples spaced evenly along the concatenated feasible pieces, so each
    /// piece receives points in proportion to its length.
    fn sample_front(&self, n_points: usize) -> Option<Vec<ObjectiveVector>> {
        let width = 1.0 / ARC_STRIPES as f64;
        let pieces = ARC_STRIPES.div_ceil(2);
        let total = pieces as f64 * width;
        Some(
            unit_grid(n_points)
                .map(|u| {
                    let s = u * total;
                    // Piece containing arc position s; the final end point
                    // belongs to the last piece.
                    let piece = ((s / width).floor() as usize).min(pieces - 1);
                    let t = s + piece as f64 * width;
                    vec![t, 1.0 - t].into()
                })
                .collect(),
        )
    }
}

/// `n` evenly spaced values covering `[0, 1]`; a single point sits at 0.5.
fn unit_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| {
        if n == 1 {
            0.5
        } else {
            j as f64 / (n - 1) as f64
        }
    })
}
