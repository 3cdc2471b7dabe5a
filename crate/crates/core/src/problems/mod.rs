//! Problem definitions with binary constraint outputs.
//!
//! Two analytic toys (`bc_band`, `bc_arcs`) carry closed-form constrained
//! fronts. Benchmark problems with real-valued constraints are wrapped by
//! [`BinarizationAdapter`], which reduces every constraint to a single
//! violated / satisfied bit.

mod binarize;
mod front;
mod suites;
mod toys;

pub use binarize::{
    binarize_equality, binarize_inequality, BinarizationAdapter, ConstrainedProblem, RawEvaluation,
    EQUALITY_SLACK,
};
pub use front::{sample_reference_front, ReferenceFront};
pub use suites::{DasCmop2, DifficultyTriplet, LirCmop5, Mw13};
pub use toys::{eval_bc_arcs, eval_bc_band, BcArcs, BcBand};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::{ConstraintBits, ObjectiveVector};

/// Box bounds of the decision space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Config(format!(
                "bounds need equal, nonzero lengths (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| !(l.is_finite() && u.is_finite() && l <= u))
        {
            return Err(Error::Config(
                "every bound pair must satisfy lower <= upper".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    /// `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Self {
        Self::uniform(dim, 0.0, 1.0)
    }

    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Self {
        Self {
            lower: vec![lower; dim],
            upper: vec![upper; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Inclusive bound check.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (l, u)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*l, *u);
        }
    }
}

/// A multi-objective problem whose constraints return 0 (satisfied) or 1
/// (violated). Implementations must be deterministic.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn n_obj(&self) -> usize;

    /// Number of binary constraints.
    fn n_con(&self) -> usize;

    fn bounds(&self) -> &Bounds;

    fn n_var(&self) -> usize {
        self.bounds().dim()
    }

    fn evaluate(&self, x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)>;

    /// `n_points` samples of the constrained Pareto front, when it is known in
    /// closed form.
    fn sample_front(&self, _n_points: usize) -> Option<Vec<ObjectiveVector>> {
        None
    }
}

/// Construction options for [`build_problem`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemOptions {
    /// Overrides the suite's number of decision variables.
    #[serde(default)]
    pub dim: Option<usize>,
    /// DASCMOP difficulty triplet.
    #[serde(default)]
    pub difficulty: Option<DifficultyTriplet>,
}

/// Names accepted by [`build_problem`].
pub const PROBLEM_NAMES: &[&str] = &[
    "bc_band",
    "bc_arcs",
    "mw13_bc",
    "lircmop5_bc",
    "dascmop2_bc",
];

/// Default number of variables for the analytic toys.
pub const TOY_DEFAULT_DIM: usize = 15;

/// Look a problem up by name.
pub fn build_problem(name: &str, options: &ProblemOptions) -> Result<Box<dyn Problem>> {
    let dim = options.dim;
    let problem: Box<dyn Problem> = match name {
        "bc_band" => Box::new(BcBand::new(dim.unwrap_or(TOY_DEFAULT_DIM))?),
        "bc_arcs" => Box::new(BcArcs::new(dim.unwrap_or(TOY_DEFAULT_DIM))?),
        "mw13_bc" => Box::new(BinarizationAdapter::new(Mw13::new(
            dim.unwrap_or(Mw13::DEFAULT_DIM),
        )?)),
        "lircmop5_bc" => Box::new(BinarizationAdapter::new(LirCmop5::new(
            dim.unwrap_or(LirCmop5::DEFAULT_DIM),
        )?)),
        "dascmop2_bc" => Box::new(BinarizationAdapter::new(DasCmop2::new(
            dim.unwrap_or(DasCmop2::DEFAULT_DIM),
            options.difficulty.unwrap_or_default(),
        )?)),
        other => {
            return Err(Error::Config(format!(
                "unknown problem {other:?}; expected one of {PROBLEM_NAMES:?}"
            )))
        }
    };
    Ok(problem)
}
