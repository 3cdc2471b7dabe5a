//! Detection regions: objective-space balls around archived feasible
//! solutions inside which infeasible solutions are treated as feasible.
//!
//! The balls shrink as the run advances. With `alpha` rising from about 0
//! to about 1 the radius follows `r = (1 - alpha) * r_max` and every centre
//! is moved by `alpha * r` along each objective, i.e. into the region its
//! source point dominates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::{euclidean, ObjectiveVector, Solution};

/// Smallest admissible maximum radius.
pub const MIN_RADIUS: f64 = 1e-12;

/// How `alpha` grows between activation and the final generation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaSchedule {
    /// Logistic curve centred at 60 % of the remaining run.
    #[default]
    Sigmoid,
    Linear,
}

impl AlphaSchedule {
    /// `alpha` at progress `p = (k - k_s) / (K - k_s)`.
    pub fn value(self, progress: f64) -> f64 {
        match self {
            AlphaSchedule::Sigmoid => 1.0 / (1.0 + (-10.0 * (progress - 0.6)).exp()),
            AlphaSchedule::Linear => progress,
        }
    }
}

impl FromStr for AlphaSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigmoid" => Ok(Self::Sigmoid),
            "linear" => Ok(Self::Linear),
            other => Err(Error::Config(format!(
                "unknown alpha schedule {other:?}; expected \"sigmoid\" or \"linear\""
            ))),
        }
    }
}

impl fmt::Display for AlphaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sigmoid => "sigmoid",
            Self::Linear => "linear",
        })
    }
}

/// Schedule state of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrmState {
    generation: usize,
    activation_generation: usize,
    max_generation: usize,
    alpha: f64,
    radius: f64,
    r_max: f64,
    schedule: AlphaSchedule,
    shift_centers: bool,
}

impl DrmState {
    pub fn new(max_generation: usize, schedule: AlphaSchedule, shift_centers: bool) -> Self {
        Self {
            generation: 0,
            activation_generation: 0,
            max_generation,
            alpha: 0.0,
            radius: 0.0,
            r_max: MIN_RADIUS,
            schedule,
            shift_centers,
        }
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Generation at which the method switched on; 0 while inactive.
    pub fn activation_generation(&self) -> usize {
        self.activation_generation
    }

    pub fn max_generation(&self) -> usize {
        self.max_generation
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn schedule(&self) -> AlphaSchedule {
        self.schedule
    }

    pub fn shift_centers(&self) -> bool {
        self.shift_centers
    }

    pub fn is_active(&self) -> bool {
        self.activation_generation > 0
    }

    pub fn set_generation(&mut self, k: usize) {
        self.generation = k;
    }

    /// Sets the radius ceiling; frozen once the method is active.
    pub fn set_r_max(&mut self, r_max: f64) -> Result<()> {
        if r_max.is_nan() || r_max < 0.0 {
            return Err(Error::Contract(format!(
                "maximum radius must be >= 0, got {r_max}"
            )));
        }
        if !self.is_active() {
            self.r_max = r_max.max(MIN_RADIUS);
        }
        Ok(())
    }

    /// Latches activation at the current generation. Returns whether the
    /// method is active afterwards: activation is refused when no
    /// generation would remain for the schedule (`K <= k`).
    pub fn try_activate(&mut self) -> bool {
        if !self.is_active() && self.generation > 0 && self.max_generation > self.generation {
            self.activation_generation = self.generation;
            self.alpha = 0.0;
            self.radius = self.r_max;
        }
        self.is_active()
    }

    /// Forces activation at generation `k_s` regardless of the run loop.
    pub fn activate_at(&mut self, k_s: usize) -> Result<()> {
        if k_s == 0 {
            return Err(Error::Contract(
                "activation generation must be positive".into(),
            ));
        }
        self.activation_generation = k_s;
        self.generation = self.generation.max(k_s);
        Ok(())
    }

    /// Recomputes `alpha` for the current generation and stores it.
    pub fn update_alpha(&mut self) -> Result<f64> {
        if !self.is_active() {
            return Err(Error::Contract(
                "alpha is undefined before activation".into(),
            ));
        }
        let (k, k_s, big_k) = (
            self.generation,
            self.activation_generation,
            self.max_generation,
        );
        if big_k <= k_s {
            return Err(Error::Config(format!(
                "maximum generation {big_k} must exceed activation generation {k_s}"
            )));
        }
        if k < k_s || k > big_k {
            return Err(Error::Contract(format!(
                "generation {k} outside [{k_s}, {big_k}]"
            )));
        }
        let progress = (k - k_s) as f64 / (big_k - k_s) as f64;
        self.alpha = self.schedule.value(progress);
        Ok(self.alpha)
    }

    /// `r = (1 - alpha) * r_max`, stored.
    pub fn update_radius(&mut self) -> Result<f64> {
        if !self.is_active() {
            return Err(Error::Contract(
                "radius is undefined before activation".into(),
            ));
        }
        self.radius = radius_for(self.alpha, self.r_max)?;
        Ok(self.radius)
    }
}

/// `(1 - alpha) * r_max`.
pub fn radius_for(alpha: f64, r_max: f64) -> Result<f64> {
    if r_max.is_nan() || r_max < 0.0 {
        return Err(Error::Contract(format!(
            "maximum radius must be >= 0, got {r_max}"
        )));
    }
    Ok((1.0 - alpha) * r_max)
}

/// Centres and common radius of the current detection regions.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionRegions {
    pub centers: Vec<ObjectiveVector>,
    pub radius: f64,
}

impl DetectionRegions {
    pub fn empty() -> Self {
        Self {
            centers: Vec::new(),
            radius: 0.0,
        }
    }
}

/// One centre per archive member, shifted by `alpha * r` on every objective
/// unless the state disables shifting.
pub fn compute_centers(archive: &[Solution], state: &DrmState) -> Result<DetectionRegions> {
    if archive.is_empty() {
        return Err(Error::Contract(
            "detection regions need a nonempty feasible archive".into(),
        ));
    }
    if archive.iter().any(|s| !s.is_feasible()) {
        return Err(Error::Contract(
            "detection regions are built from feasible archive members only".into(),
        ));
    }
    let shift = if state.shift_centers {
        state.alpha * state.radius
    } else {
        0.0
    };
    let centers = archive
        .iter()
        .map(|s| {
            s.objectives
                .iter()
                .map(|f| f + shift)
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    Ok(DetectionRegions {
        centers,
        radius: state.radius,
    })
}

/// Whether `objectives` lies strictly inside any region.
pub fn in_detection_region(objectives: &[f64], regions: &DetectionRegions) -> Result<bool> {
    let mut inside = false;
    for c in &regions.centers {
        if c.len() != objectives.len() {
            return Err(Error::Contract(format!(
                "objective vector of length {} against centre of length {}",
                objectives.len(),
                c.len()
            )));
        }
        if !inside && euclidean(objectives, c) < regions.radius {
            inside = true;
        }
    }
    Ok(inside)
}

/// Resets `effective_cv` to the raw count, then zeroes it for infeasible
/// members that fall in a detection region. Nothing else is touched.
pub fn relax_population(population: &mut [Solution], regions: &DetectionRegions) -> Result<()> {
    for s in population.iter_mut() {
        s.reset_effective_cv();
        if s.cv() > 0 && in_detection_region(&s.objectives, regions)? {
            s.effective_cv = 0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::ConstraintBits;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sol(f: &[f64], violated: bool) -> Solution {
        Solution::new(
            vec![0.0].into(),
            f.to_vec().into(),
            ConstraintBits::from_flags([violated]),
        )
    }

    fn active(schedule: AlphaSchedule, k_s: usize, big_k: usize) -> DrmState {
        let mut st = DrmState::new(big_k, schedule, true);
        st.activate_at(k_s).unwrap();
        st
    }

    #[test]
    fn sigmoid_midpoint() {
        let mut st = active(AlphaSchedule::Sigmoid, 10, 60);
        st.set_generation(40);
        assert_abs_diff_eq!(st.update_alpha().unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn linear_endpoints() {
        let mut st = active(AlphaSchedule::Linear, 3, 13);
        assert_eq!(st.update_alpha().unwrap(), 0.0);
        st.set_generation(13);
        assert_eq!(st.update_alpha().unwrap(), 1.0);
    }

    #[test]
    fn alpha_errors() {
        let mut st = DrmState::new(10, AlphaSchedule::Sigmoid, true);
        assert!(matches!(st.update_alpha(), Err(Error::Contract(_))));
        let mut st = active(AlphaSchedule::Sigmoid, 10, 10);
        assert!(matches!(st.update_alpha(), Err(Error::Config(_))));
        let mut st = active(AlphaSchedule::Sigmoid, 2, 10);
        st.set_generation(11);
        assert!(matches!(st.update_alpha(), Err(Error::Contract(_))));
    }

    #[test]
    fn activation_is_latched_and_refused_at_last_generation() {
        let mut st = DrmState::new(5, AlphaSchedule::Sigmoid, true);
        st.set_r_max(2.0).unwrap();
        st.set_generation(5);
        assert!(!st.try_activate());
        st.set_generation(3);
        assert!(st.try_activate());
        assert_eq!(st.activation_generation(), 3);
        st.set_generation(4);
        assert!(st.try_activate());
        assert_eq!(st.activation_generation(), 3);
        // r_max is frozen once active.
        st.set_r_max(7.0).unwrap();
        assert_eq!(st.r_max(), 2.0);
    }

    #[test]
    fn r_max_floor_and_sign() {
        let mut st = DrmState::new(5, AlphaSchedule::Sigmoid, true);
        st.set_r_max(0.0).unwrap();
        assert_eq!(st.r_max(), MIN_RADIUS);
        assert!(st.set_r_max(-1.0).is_err());
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_for(0.0, 2.0).unwrap(), 2.0);
        assert_eq!(radius_for(0.5, 2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            radius_for(0.9820138, 1.0).unwrap(),
            0.0179862,
            epsilon = 1e-12
        );
        assert!(radius_for(0.5, -1.0).is_err());
    }

    #[test]
    fn centers_shift_along_all_ones() {
        let mut st = active(AlphaSchedule::Sigmoid, 1, 10);
        st.alpha = 0.25;
        st.radius = 0.8;
        let regions = compute_centers(&[sol(&[0.3, 0.4], false)], &st).unwrap();
        assert_abs_diff_eq!(regions.centers[0][0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(regions.centers[0][1], 0.6, epsilon = 1e-15);
        assert_eq!(regions.radius, 0.8);

        st.shift_centers = false;
        let regions = compute_centers(&[sol(&[0.3, 0.4], false)], &st).unwrap();
        assert_eq!(&*regions.centers[0], &[0.3, 0.4]);
    }

    #[test]
    fn centers_without_shift_at_activation() {
        let st = active(AlphaSchedule::Sigmoid, 1, 10);
        let arch = [sol(&[0.1, 0.9], false), sol(&[0.9, 0.1], false)];
        let regions = compute_centers(&arch, &st).unwrap();
        assert_eq!(regions.centers.len(), 2);
        assert_eq!(&*regions.centers[0], &[0.1, 0.9]);
        assert_eq!(&*regions.centers[1], &[0.9, 0.1]);
    }

    #[test]
    fn centers_preconditions() {
        let st = active(AlphaSchedule::Sigmoid, 1, 10);
        assert!(compute_centers(&[], &st).is_err());
        assert!(compute_centers(&[sol(&[0.0, 0.0], true)], &st).is_err());
    }

    #[test]
    fn membership_examples() {
        let regions = DetectionRegions {
            centers: vec![vec![0.5, 0.5].into()],
            radius: 0.2,
        };
        assert!(in_detection_region(&[0.6, 0.6], &regions).unwrap());
        assert!(!in_detection_region(&[0.8, 0.8], &regions).unwrap());
        assert!(!in_detection_region(&[0.5, 0.5], &DetectionRegions::empty()).unwrap());
        assert!(in_detection_region(&[0.5], &regions).is_err());
        // Strict inequality on the boundary.
        let unit = DetectionRegions {
            centers: vec![vec![0.0, 0.0].into()],
            radius: 1.0,
        };
        assert!(!in_detection_region(&[1.0, 0.0], &unit).unwrap());
    }

    #[test]
    fn relaxation_cases() {
        let regions = DetectionRegions {
            centers: vec![vec![0.5, 0.5].into()],
            radius: 0.2,
        };
        let mut pop = vec![
            sol(&[0.55, 0.5], true),
            sol(&[3.0, 3.0], false),
            sol(&[0.9, 0.9], true),
        ];
        let before = pop.clone();
        relax_population(&mut pop, &regions).unwrap();
        assert_eq!(pop[0].effective_cv, 0);
        assert_eq!(pop[1].effective_cv, 0);
        assert_eq!(pop[2].effective_cv, 1);
        for (a, b) in pop.iter().zip(&before) {
            assert_eq!(a.objectives, b.objectives);
            assert_eq!(a.decision, b.decision);
            assert_eq!(a.constraints, b.constraints);
        }
        // A second pass with empty regions restores raw counts.
        relax_population(&mut pop, &DetectionRegions::empty()).unwrap();
        assert_eq!(pop[0].effective_cv, 1);
    }

    proptest! {
        #[test]
        fn relaxation_monotone_in_radius(
            f in prop::collection::vec(0.0f64..2.0, 2),
            centers in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 2), 1..5),
            r in 0.0f64..1.0,
            extra in 0.0f64..1.0,
        ) {
            let centers: Vec<ObjectiveVector> = centers.into_iter().map(Into::into).collect();
            let small = DetectionRegions { centers: centers.clone(), radius: r };
            let large = DetectionRegions { centers, radius: r + extra };
            if in_detection_region(&f, &small).unwrap() {
                prop_assert!(in_detection_region(&f, &large).unwrap());
            }
        }

        #[test]
        fn centers_lie_behind_sources(
            f in prop::collection::vec(-1.0f64..1.0, 3),
            k in 1usize..50,
        ) {
            let mut st = active(AlphaSchedule::Sigmoid, 1, 50);
            st.set_r_max(1.5).unwrap();
            st.set_generation(k);
            st.update_alpha().unwrap();
            st.update_radius().unwrap();
            let src = sol(&f, false);
            let regions = compute_centers(std::slice::from_ref(&src), &st).unwrap();
            let c = &regions.centers[0];
            prop_assert!(c.iter().zip(f.iter()).all(|(a, b)| a >= b));
        }

        #[test]
        fn sigmoid_strictly_inside_unit_interval(k_s in 1usize..100, len in 1usize..1000, step in 0usize..1000) {
            let big_k = k_s + len;
            let mut st = active(AlphaSchedule::Sigmoid, k_s, big_k);
            st.set_generation(k_s + step % (len + 1));
            let a = st.update_alpha().unwrap();
            prop_assert!(a > 0.0 && a < 1.0);
        }
    }
}
