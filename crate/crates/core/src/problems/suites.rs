//! Benchmark problems with real-valued constraints (`g(x) <= 0` feasible).
//! Wrap them in [`BinarizationAdapter`](super::BinarizationAdapter) to get
//! their binary-constraint versions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Bounds, ConstrainedProblem, RawEvaluation};

/// MW13: bi-objective, two nonlinear constraints, discontinuous front.
#[derive(Clone, Debug)]
pub struct Mw13 {
    bounds: Bounds,
}

impl Mw13 {
    pub const DEFAULT_DIM: usize = 15;

    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!("mw13 needs D >= 2, got {dim}")));
        }
        Ok(Self {
            bounds: Bounds::uniform(dim, 0.0, 1.5),
        })
    }
}

impl ConstrainedProblem for Mw13 {
    fn name(&self) -> &str {
        "mw13"
    }

    fn n_obj(&self) -> usize {
        2
    }

    fn n_inequality(&self) -> usize {
        2
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_raw(&self, x: &[f64]) -> RawEvaluation {
        let g = 1.0
            + x.windows(2)
                .map(|w| {
                    let t = w[1] + (w[0] - 0.5).powi(2) - 1.0;
                    2.0 * t * t
                })
                .sum::<f64>();
        let f1 = g * x[0];
        let u = f1 / g;
        let f2 = g * (5.0 - u.exp() - (0.5 * (3.0 * PI * u).sin()).abs());

        let wave = 0.5 * (3.0 * PI * f1).sin();
        let c1 = (5.0 - f1.exp() - wave - f2) * (5.0 - (1.0 + 0.4 * f1) - wave - f2);
        let c2 =
            -(5.0 - (1.0 + f1 + 0.5 * f1 * f1) - wave - f2) * (5.0 - (1.0 + 0.7 * f1) - wave - f2);
        RawEvaluation {
            objectives: vec![f1, f2],
            inequality: vec![c1, c2],
            equality: Vec::new(),
        }
    }
}

/// LIRCMOP5: bi-objective with two large elliptic infeasible regions.
#[derive(Clone, Debug)]
pub struct LirCmop5 {
    bounds: Bounds,
}

impl LirCmop5 {
    pub const DEFAULT_DIM: usize = 30;

    pub fn new(dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Config(format!("lircmop5 needs D >= 3, got {dim}")));
        }
        Ok(Self {
            bounds: Bounds::unit(dim),
        })
    }
}

impl ConstrainedProblem for LirCmop5 {
    fn name(&self) -> &str {
        "lircmop5"
    }

    fn n_obj(&self) -> usize {
        2
    }

    fn n_inequality(&self) -> usize {
        2
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_raw(&self, x: &[f64]) -> RawEvaluation {
        let d = x.len() as f64;
        let (mut odd, mut even) = (0.0, 0.0);
        // 1-based index j runs over 2..=D; odd j use sine, even j cosine.
        for (i, v) in x.iter().enumerate().skip(1) {
            let j = (i + 1) as f64;
            let angle = 0.5 * j / d * PI * x[0];
            if (i + 1) % 2 == 1 {
                odd += (v - angle.sin()).powi(2);
            } else {
                even += (v - angle.cos()).powi(2);
            }
        }
        let f1 = x[0] + 10.0 * odd + 0.7057;
        let f2 = 1.0 - x[0].sqrt() + 10.0 * even + 0.7057;

        const P: [f64; 2] = [1.6, 2.5];
        const Q: [f64; 2] = [1.6, 2.5];
        const A: [f64; 2] = [2.0, 2.0];
        const B: [f64; 2] = [4.0, 8.0];
        const R: f64 = 0.1;
        let theta = -0.25 * PI;
        let (s, c) = theta.sin_cos();
        let inequality = (0..2)
            .map(|k| {
                let u = (f1 - P[k]) * c - (f2 - Q[k]) * s;
                let v = (f1 - P[k]) * s + (f2 - Q[k]) * c;
                R - u * u / (A[k] * A[k]) - v * v / (B[k] * B[k])
            })
            .collect();
        RawEvaluation {
            objectives: vec![f1, f2],
            inequality,
            equality: Vec::new(),
        }
    }
}

/// Difficulty factors `(eta, zeta, gamma)` of the DASCMOP family, each in
/// `[0, 1]`: diversity, feasibility and convergence hardness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTriplet(pub [f64; 3]);

impl Default for DifficultyTriplet {
    fn default() -> Self {
        Self([0.5, 0.5, 0.5])
    }
}

/// DASCMOP2: bi-objective with tunable constraint difficulty.
#[derive(Clone, Debug)]
pub struct DasCmop2 {
    bounds: Bounds,
    difficulty: DifficultyTriplet,
}

impl DasCmop2 {
    pub const DEFAULT_DIM: usize = 30;

    pub fn new(dim: usize, difficulty: DifficultyTriplet) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!("dascmop2 needs D >= 2, got {dim}")));
        }
        if difficulty.0.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Config(format!(
                "difficulty factors must lie in [0, 1], got {:?}",
                difficulty.0
            )));
        }
        Ok(Self {
            bounds: Bounds::unit(dim),
            difficulty,
        })
    }

    pub fn difficulty(&self) -> DifficultyTriplet {
        self.difficulty
    }
}

impl ConstrainedProblem for DasCmop2 {
    fn name(&self) -> &str {
        "dascmop2"
    }

    fn n_obj(&self) -> usize {
        2
    }

    fn n_inequality(&self) -> usize {
        3
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate_raw(&self, x: &[f64]) -> RawEvaluation {
        let target = (0.5 * PI * x[0]).sin();
        let g: f64 = x[1..].iter().map(|v| (v - target).powi(2)).sum();
        let f1 = x[0] + g;
        let f2 = 1.0 - x[0].sqrt() + g;

        let [eta, zeta, gamma] = self.difficulty.0;
        // Diversity: stripes in x1.
        let a = 20.0;
        let b = 2.0 * eta - 1.0;
        let c1 = b - (a * PI * x[0]).sin();

        // Feasibility: g restricted to [d, e].
        let d = if zeta == 0.0 { 0.0 } else { 0.5 };
        let e = if zeta == 0.0 { 1e30 } else { d - zeta.ln() };
        let c2 = if zeta == 1.0 {
            1e-4 - (e - g).abs()
        } else {
            -(e - g) * (g - d)
        };

        // Convergence: elliptic holes in objective space.
        const P: [f64; 9] = [0.0, 1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 3.0];
        const Q: [f64; 9] = [1.5, 0.5, 2.5, 1.5, 0.5, 3.5, 2.5, 1.5, 0.5];
        let (ak, bk) = (0.3, 1.2);
        let r = 0.5 * gamma;
        let (s, c) = (-0.25 * PI).sin_cos();
        let nearest = P
            .iter()
            .zip(&Q)
            .map(|(p, q)| {
                let u = (f1 - p) * c - (f2 - q) * s;
                let v = (f1 - p) * s + (f2 - q) * c;
                u * u / (ak * ak) + v * v / (bk * bk) - r
            })
            .fold(f64::INFINITY, f64::min);
        let c3 = -nearest;

        RawEvaluation {
            objectives: vec![f1, f2],
            inequality: vec![c1, c2, c3],
            equality: Vec::new(),
        }
    }
}
