//! Solutions, their evaluated parts and the evaluation counter.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Problem;

/// A point of the decision space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Bitwise equality, used to spot the same individual reached twice.
    pub fn same_bits(&self, other: &DecisionVector) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Deref for DecisionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DecisionVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Objective values of one solution; every objective is minimised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &[f64]) -> f64 {
        euclidean(&self.0, other)
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Binary constraint outcomes: bit `i` is 1 when constraint `i` is violated.
/// The violation `cv` is the number of violated constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintBits {
    bits: Vec<u8>,
    cv: u32,
}

impl ConstraintBits {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Contract(format!(
                "constraint bit {bad} is not 0 or 1"
            )));
        }
        let cv = bits.iter().map(|&b| u32::from(b)).sum();
        Ok(Self { bits, cv })
    }

    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<u8> = flags.into_iter().map(u8::from).collect();
        let cv = bits.iter().map(|&b| u32::from(b)).sum();
        Self { bits, cv }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn cv(&self) -> u32 {
        self.cv
    }

    pub fn is_feasible(&self) -> bool {
        self.cv == 0
    }
}

/// An evaluated individual.
///
/// `fitness` and `effective_cv` are scratch fields owned by environmental
/// selection: `effective_cv` starts equal to the raw violation count and is
/// only lowered while detection-region relaxation is in force.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub decision: DecisionVector,
    pub objectives: ObjectiveVector,
    pub constraints: ConstraintBits,
    pub fitness: f64,
    pub effective_cv: u32,
}

impl Solution {
    /// Assemble an already-evaluated solution.
    pub fn new(
        decision: DecisionVector,
        objectives: ObjectiveVector,
        constraints: ConstraintBits,
    ) -> Self {
        let effective_cv = constraints.cv();
        Self {
            decision,
            objectives,
            constraints,
            fitness: 0.0,
            effective_cv,
        }
    }

    pub fn cv(&self) -> u32 {
        self.constraints.cv()
    }

    pub fn is_feasible(&self) -> bool {
        self.constraints.is_feasible()
    }

    /// Violation used by comparisons: relaxed or raw.
    pub fn cv_for(&self, use_effective_cv: bool) -> u32 {
        if use_effective_cv {
            self.effective_cv
        } else {
            self.constraints.cv()
        }
    }

    pub fn reset_effective_cv(&mut self) {
        self.effective_cv = self.constraints.cv();
    }
}

/// A list of evaluated solutions.
pub type Population = Vec<Solution>;

/// Evaluates decisions against a problem and counts every call.
pub struct Evaluator<'a> {
    problem: &'a dyn Problem,
    evaluations: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn Problem) -> Self {
        Self {
            problem,
            evaluations: 0,
        }
    }

    pub fn problem(&self) -> &'a dyn Problem {
        self.problem
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn evaluate(&mut self, decision: DecisionVector) -> Result<Solution> {
        let bounds = self.problem.bounds();
        if decision.len() != bounds.dim() {
            return Err(Error::Contract(format!(
                "decision has {} variables, problem {} expects {}",
                decision.len(),
                self.problem.name(),
                bounds.dim()
            )));
        }
        if !bounds.contains(&decision) {
            return Err(Error::Contract(format!(
                "decision {:?} outside the bounds of {}",
                &*decision,
                self.problem.name()
            )));
        }
        let (objectives, constraints) = self.problem.evaluate(&decision)?;
        self.evaluations += 1;
        if objectives.len() != self.problem.n_obj() {
            return Err(Error::Contract(format!(
                "{} returned {} objectives, expected {}",
                self.problem.name(),
                objectives.len(),
                self.problem.n_obj()
            )));
        }
        if objectives.iter().any(|f| !f.is_finite()) {
            return Err(Error::Evaluation {
                message: format!("non-finite objective vector {:?}", &*objectives),
                decision: decision.into_inner(),
            });
        }
        Ok(Solution::new(decision, objectives, constraints))
    }

    pub fn evaluate_all(&mut self, decisions: Vec<DecisionVector>) -> Result<Population> {
        decisions.into_iter().map(|d| self.evaluate(d)).collect()
    }
}
