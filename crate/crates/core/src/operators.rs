//! Real-coded variation: simulated binary crossover with polynomial
//! mutation, and DE/rand/1/bin followed by polynomial mutation. Children are
//! clamped back into the box.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Bounds;
use crate::solution::DecisionVector;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    #[default]
    Ga,
    De,
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ga" => Ok(Self::Ga),
            "de" => Ok(Self::De),
            other => Err(Error::Config(format!(
                "unknown operator {other:?}; expected \"ga\" or \"de\""
            ))),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ga => "ga",
            Self::De => "de",
        })
    }
}

/// Polynomial mutation settings. `probability` is per variable; `None`
/// means `1 / D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MutationParams {
    pub probability: Option<f64>,
    pub eta: f64,
}

impl Default for MutationParams {
    fn default() -> Self {
        Self {
            probability: None,
            eta: 20.0,
        }
    }
}

impl MutationParams {
    pub fn disabled() -> Self {
        Self {
            probability: Some(0.0),
            ..Self::default()
        }
    }

    fn rate(&self, dim: usize) -> f64 {
        self.probability.unwrap_or(1.0 / dim as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    /// Probability that a parent pair is recombined.
    pub p_crossover: f64,
    pub eta_c: f64,
    pub mutation: MutationParams,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            p_crossover: 1.0,
            eta_c: 20.0,
            mutation: MutationParams::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeParams {
    pub cr: f64,
    pub f: f64,
    pub mutation: MutationParams,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            cr: 1.0,
            f: 0.5,
            mutation: MutationParams::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OperatorConfig {
    pub ga: GaParams,
    pub de: DeParams,
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")))
            }
        };
        let index = |name: &str, eta: f64| {
            if eta > 0.0 && eta.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {eta}")))
            }
        };
        prob("ga.p_crossover", self.ga.p_crossover)?;
        index("ga.eta_c", self.ga.eta_c)?;
        prob("de.cr", self.de.cr)?;
        if !self.de.f.is_finite() {
            return Err(Error::Config(format!(
                "de.f must be finite, got {}",
                self.de.f
            )));
        }
        for (name, m) in [
            ("ga.mutation", self.ga.mutation),
            ("de.mutation", self.de.mutation),
        ] {
            if let Some(p) = m.probability {
                prob(&format!("{name}.probability"), p)?;
            }
            index(&format!("{name}.eta"), m.eta)?;
        }
        Ok(())
    }
}

/// SBX on consecutive parent pairs followed by polynomial mutation. An odd
/// last parent is paired with the first one and only its first child kept.
pub fn ga_offspring<R: Rng + ?Sized>(
    parents: &[DecisionVector],
    rng: &mut R,
    bounds: &Bounds,
    params: &GaParams,
) -> Vec<DecisionVector> {
    let n = parents.len();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let a = &parents[i];
        let b = &parents[if i + 1 < n { i + 1 } else { 0 }];
        let (mut c1, mut c2) = sbx_pair(a, b, rng, params);
        for child in [&mut c1, &mut c2] {
            bounds.clamp(child);
            polynomial_mutation(child, rng, bounds, &params.mutation);
        }
        out.push(c1.into());
        if out.len() < n {
            out.push(c2.into());
        }
        i += 2;
    }
    out
}

fn sbx_pair<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    rng: &mut R,
    params: &GaParams,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    if rng.random::<f64>() >= params.p_crossover {
        return (c1, c2);
    }
    let exponent = 1.0 / (params.eta_c + 1.0);
    for j in 0..a.len() {
        let mu: f64 = rng.random();
        let beta = if mu <= 0.5 {
            (2.0 * mu).powf(exponent)
        } else {
            (2.0 - 2.0 * mu).powf(-exponent)
        };
        // Each variable is recombined with probability 0.5.
        if rng.random::<f64>() < 0.5 {
            continue;
        }
        let mean = 0.5 * (a[j] + b[j]);
        let half = 0.5 * beta * (a[j] - b[j]);
        c1[j] = mean + half;
        c2[j] = mean - half;
    }
    (c1, c2)
}

/// Bounded polynomial mutation; `x` must already lie inside `bounds`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    rng: &mut R,
    bounds: &Bounds,
    params: &MutationParams,
) {
    let rate = params.rate(x.len());
    let exponent = 1.0 / (params.eta + 1.0);
    for (j, v) in x.iter_mut().enumerate() {
        let site = rng.random::<f64>() < rate;
        let mu: f64 = rng.random();
        let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
        if !site || hi <= lo {
            continue;
        }
        let span = hi - lo;
        let delta = if mu <= 0.5 {
            let t = 1.0 - (*v - lo) / span;
            (2.0 * mu + (1.0 - 2.0 * mu) * t.powf(params.eta + 1.0)).powf(exponent) - 1.0
        } else {
            let t = 1.0 - (hi - *v) / span;
            1.0 - (2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * t.powf(params.eta + 1.0)).powf(exponent)
        };
        *v = (*v + delta * span).clamp(lo, hi);
    }
}

/// DE/rand/1/bin: for target `i`, `v = x_r1 + F (x_r2 - x_r3)` with
/// `r1, r2, r3, i` distinct, binomial crossover with one guaranteed donor
/// coordinate, then polynomial mutation. Pools smaller than four fall back
/// to [`ga_offspring`].
pub fn de_offspring<R: Rng + ?Sized>(
    pool: &[DecisionVector],
    rng: &mut R,
    bounds: &Bounds,
    params: &DeParams,
    fallback: &GaParams,
) -> Vec<DecisionVector> {
    let n = pool.len();
    if n < 4 {
        return ga_offspring(pool, rng, bounds, fallback);
    }
    let dim = bounds.dim();
    let mut out = Vec::with_capacity(n);
    for (i, target) in pool.iter().enumerate() {
        let [r1, r2, r3] = distinct_indices(rng, n, i);
        let forced = rng.random_range(0..dim);
        let mut child = target.to_vec();
        for j in 0..dim {
            if j == forced || rng.random::<f64>() < params.cr {
                child[j] = pool[r1][j] + params.f * (pool[r2][j] - pool[r3][j]);
            }
        }
        bounds.clamp(&mut child);
        polynomial_mutation(&mut child, rng, bounds, &params.mutation);
        out.push(child.into());
    }
    out
}

fn distinct_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, exclude: usize) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    for slot in 0..3 {
        loop {
            let c = rng.random_range(0..n);
            if c != exclude && !picked[..slot].contains(&c) {
                picked[slot] = c;
                break;
            }
        }
    }
    picked
}
