use crate::error::{Error, Result};
use crate::problems::{Bounds, Problem};
use crate::solution::{ConstraintBits, ObjectiveVector};

/// Slack applied to equality constraints before binarisation.
pub const EQUALITY_SLACK: f64 = 1e-6;

/// 1 when the inequality `g <= 0` is violated. The boundary `g == 0` counts
/// as satisfied.
pub fn binarize_inequality(g_value: f64) -> Result<u8> {
    if !g_value.is_finite() {
        return Err(Error::Evaluation {
            message: format!("non-finite constraint value {g_value}"),
            decision: Vec::new(),
        });
    }
    Ok(u8::from(g_value > 0.0))
}

/// Equality `h == 0` relaxed to `|h| - delta <= 0`, then binarised.
pub fn binarize_equality(h_value: f64, delta: f64) -> Result<u8> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Config(format!(
            "equality slack must be positive, got {delta}"
        )));
    }
    binarize_inequality(h_value.abs() - delta)
}

/// Raw output of a problem with graded constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct RawEvaluation {
    pub objectives: Vec<f64>,
    /// Values of `g_i(x)`; feasible when `<= 0`.
    pub inequality: Vec<f64>,
    /// Values of `h_j(x)`; feasible when `== 0`.
    pub equality: Vec<f64>,
}

/// A constrained problem with real-valued constraint functions.
pub trait ConstrainedProblem: Send + Sync {
    fn name(&self) -> &str;
    fn n_obj(&self) -> usize;
    fn n_inequality(&self) -> usize;
    fn n_equality(&self) -> usize {
        0
    }
    fn bounds(&self) -> &Bounds;
    fn evaluate_raw(&self, x: &[f64]) -> RawEvaluation;
}

/// Turns a [`ConstrainedProblem`] into a binary-constraint [`Problem`]:
/// every constraint reports only whether it is violated. Objectives pass
/// through unchanged.
#[derive(Clone, Debug)]
pub struct BinarizationAdapter<P> {
    inner: P,
    delta: f64,
    name: String,
}

impl<P: ConstrainedProblem> BinarizationAdapter<P> {
    pub fn new(inner: P) -> Self {
        let name = format!("{}_bc", inner.name());
        Self {
            inner,
            delta: EQUALITY_SLACK,
            name,
        }
    }

    pub fn with_delta(inner: P, delta: f64) -> Result<Self> {
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::Config(format!(
                "equality slack must be positive, got {delta}"
            )));
        }
        Ok(Self {
            delta,
            ..Self::new(inner)
        })
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl<P: ConstrainedProblem> Problem for BinarizationAdapter<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn n_obj(&self) -> usize {
        self.inner.n_obj()
    }

    fn n_con(&self) -> usize {
        self.inner.n_inequality() + self.inner.n_equality()
    }

    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }

    fn evaluate(&self, x: &[f64]) -> Result<(ObjectiveVector, ConstraintBits)> {
        let raw = self.inner.evaluate_raw(x);
        let with_decision = |e: Error| match e {
            Error::Evaluation { message, .. } => Error::Evaluation {
                message: format!("{}: {message}", self.name),
                decision: x.to_vec(),
            },
            other => other,
        };
        let mut bits = Vec::with_capacity(self.n_con());
        for g in &raw.inequality {
            bits.push(binarize_inequality(*g).map_err(with_decision)?);
        }
        for h in &raw.equality {
            bits.push(binarize_equality(*h, self.delta).map_err(with_decision)?);
        }
        Ok((raw.objectives.into(), ConstraintBits::new(bits)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inequality_examples() {
        assert_eq!(binarize_inequality(-0.3).unwrap(), 0);
        assert_eq!(binarize_inequality(0.7).unwrap(), 1);
        assert_eq!(binarize_inequality(0.0).unwrap(), 0);
        assert!(binarize_inequality(f64::NAN).is_err());
        assert!(binarize_inequality(f64::INFINITY).is_err());
    }

    #[test]
    fn equality_examples() {
        assert_eq!(binarize_equality(1e-7, 1e-6).unwrap(), 0);
        assert_eq!(binarize_equality(-2e-6, 1e-6).unwrap(), 1);
        assert_eq!(binarize_equality(0.0, 1e-6).unwrap(), 0);
        assert!(matches!(binarize_equality(0.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(
            binarize_equality(0.0, -1.0),
            Err(Error::Config(_))
        ));
    }

    struct Disc {
        bounds: Bounds,
    }

    impl ConstrainedProblem for Disc {
        fn name(&self) -> &str {
            "disc"
        }
        fn n_obj(&self) -> usize {
            2
        }
        fn n_inequality(&self) -> usize {
            1
        }
        fn n_equality(&self) -> usize {
            1
        }
        fn bounds(&self) -> &Bounds {
            &self.bounds
        }
        fn evaluate_raw(&self, x: &[f64]) -> RawEvaluation {
            RawEvaluation {
                objectives: vec![x[0].sin(), x[1].exp()],
                inequality: vec![x[0] * x[0] + x[1] * x[1] - 0.25],
                equality: vec![x[0] - x[1]],
            }
        }
    }

    #[test]
    fn adapter_binarises_and_keeps_objectives() {
        let p = BinarizationAdapter::new(Disc {
            bounds: Bounds::unit(2),
        });
        assert_eq!(p.name(), "disc_bc");
        assert_eq!(p.n_con(), 2);
        let (f, c) = p.evaluate(&[0.1, 0.1]).unwrap();
        assert_eq!(c.bits(), &[0, 0]);
        assert_eq!(f[0].to_bits(), 0.1f64.sin().to_bits());
        let (_, c) = p.evaluate(&[0.9, 0.1]).unwrap();
        assert_eq!(c.bits(), &[1, 1]);
        assert_eq!(c.cv(), 2);
    }

    proptest! {
        #[test]
        fn binarisation_is_idempotent(g in -10.0f64..10.0) {
            let bit = binarize_inequality(g).unwrap();
            prop_assert_eq!(binarize_inequality(f64::from(bit)).unwrap(), bit);
        }

        #[test]
        fn adapter_preserves_objectives(x in 0.0f64..1.0, y in 0.0f64..1.0) {
            let disc = Disc { bounds: Bounds::unit(2) };
            let raw = disc.evaluate_raw(&[x, y]);
            let p = BinarizationAdapter::new(disc);
            let (f, _) = p.evaluate(&[x, y]).unwrap();
            for (a, b) in f.iter().zip(&raw.objectives) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
