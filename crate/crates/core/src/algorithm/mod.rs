//! The DRMCMO main loop: SPEA2 with an elite feasible archive, switching
//! from constraint-dominance selection to detection-region selection as
//! soon as the archive holds a feasible solution.

mod archive;
mod selection;

pub use archive::{update_archive, Archive};
pub use selection::{
    environmental_selection, environmental_selection_cdp, environmental_selection_drm,
    spea2_fitness, truncate,
};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::drm::{compute_centers, AlphaSchedule, DrmState};
use crate::error::{Error, Result};
use crate::harness::{ArchiveEntry, Checkpoint, RunRecord, RECORD_SCHEMA_VERSION};
use crate::metrics::{hv, hv_reference_point, igd};
use crate::operators::{de_offspring, ga_offspring, OperatorConfig, OperatorKind};
use crate::problems::{Problem, ReferenceFront};
use crate::solution::{euclidean, DecisionVector, Evaluator, Population, Solution};

/// Generations between two recorded checkpoints.
pub const CHECKPOINT_EVERY: usize = 10;

/// Algorithm variants used for ablation.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Sigmoid schedule with shifted centres.
    #[default]
    Full,
    /// Centres stay on the archived objective vectors.
    V1NoShift,
    /// Linear alpha schedule.
    V2LinearAlpha,
    /// Constraint-dominance selection only; detection regions never used.
    V3CdpOnly,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Full,
        Variant::V1NoShift,
        Variant::V2LinearAlpha,
        Variant::V3CdpOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::V1NoShift => "v1_no_shift",
            Variant::V2LinearAlpha => "v2_linear_alpha",
            Variant::V3CdpOnly => "v3_cdp_only",
        }
    }

    pub fn uses_detection_regions(self) -> bool {
        self != Variant::V3CdpOnly
    }

    pub fn schedule(self) -> AlphaSchedule {
        match self {
            Variant::V2LinearAlpha => AlphaSchedule::Linear,
            _ => AlphaSchedule::Sigmoid,
        }
    }

    pub fn shifts_centers(self) -> bool {
        self != Variant::V1NoShift
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown variant {s:?}; expected one of full, v1_no_shift, v2_linear_alpha, v3_cdp_only"
                ))
            })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How parents are paired before variation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatingMode {
    /// Binary tournaments on fitness.
    #[default]
    Tournament,
    /// Tournament winners each mated with a random one of their
    /// `ceil(N / 10)` nearest objective-space neighbours.
    NeighborPairing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgorithmConfig {
    pub population_size: usize,
    pub max_fe: usize,
    pub variant: Variant,
    pub operator: OperatorKind,
    pub operators: OperatorConfig,
    pub mating: MatingMode,
    pub seed: u64,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_fe: 100_000,
            variant: Variant::Full,
            operator: OperatorKind::Ga,
            operators: OperatorConfig::default(),
            mating: MatingMode::Tournament,
            seed: 1,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config(format!(
                "population size must be >= 2, got {}",
                self.population_size
            )));
        }
        if self.max_fe < self.population_size {
            return Err(Error::Config(format!(
                "evaluation budget {} is smaller than the population size {}",
                self.max_fe, self.population_size
            )));
        }
        self.operators.validate()
    }

    /// Final generation index `K = ceil(max_fe / N)`.
    pub fn max_generation(&self) -> usize {
        self.max_fe.div_ceil(self.population_size)
    }
}

/// Read-only view handed to observers after every generation.
pub struct GenerationView<'a> {
    pub generation: usize,
    pub evaluations: usize,
    pub population: &'a [Solution],
    pub archive: &'a Archive,
    pub drm: &'a DrmState,
    /// Whether this generation's selection used detection regions.
    pub used_detection_regions: bool,
}

/// Result of one optimisation run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub archive: Archive,
    pub record: RunRecord,
}

/// Runs DRMCMO on `problem`. Metrics in the record are computed against
/// `reference` when one is supplied.
pub fn run(
    problem: &dyn Problem,
    config: &AlgorithmConfig,
    reference: Option<&ReferenceFront>,
) -> Result<RunOutcome> {
    run_observed(problem, config, reference, &mut |_| {})
}

/// [`run`], calling `observer` at generation 0 and after every generation.
pub fn run_observed(
    problem: &dyn Problem,
    config: &AlgorithmConfig,
    reference: Option<&ReferenceFront>,
    observer: &mut dyn FnMut(&GenerationView<'_>),
) -> Result<RunOutcome> {
    config.validate()?;
    let started = Instant::now();
    let n = config.population_size;
    let bounds = problem.bounds().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(problem);
    let scorer = reference.map(Scorer::new);

    let initial: Vec<DecisionVector> = (0..n)
        .map(|_| {
            bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(l, u)| l + (u - l) * rng.random::<f64>())
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    let mut population = evaluator.evaluate_all(initial)?;
    spea2_fitness(&mut population, false);
    let mut archive = update_archive(&Archive::new(n), &population);

    let mut drm = DrmState::new(
        config.max_generation(),
        config.variant.schedule(),
        config.variant.shifts_centers(),
    );
    drm.set_r_max(min_vector_norm(&population))?;

    let mut generation = 0usize;
    let mut checkpoints = Vec::new();
    checkpoints.push(checkpoint(
        0,
        evaluator.evaluations(),
        &population,
        &archive,
        &drm,
        scorer.as_ref(),
    )?);
    observer(&GenerationView {
        generation,
        evaluations: evaluator.evaluations(),
        population: &population,
        archive: &archive,
        drm: &drm,
        used_detection_regions: false,
    });

    let truncated = evaluator.evaluations() >= config.max_fe;
    while evaluator.evaluations() < config.max_fe {
        let parents = mating_pool(&population, n, config.mating, &mut rng);
        let offspring = match config.operator {
            OperatorKind::Ga => ga_offspring(&parents, &mut rng, &bounds, &config.operators.ga),
            OperatorKind::De => de_offspring(
                &parents,
                &mut rng,
                &bounds,
                &config.operators.de,
                &config.operators.ga,
            ),
        };
        let mut merged: Population = evaluator.evaluate_all(offspring)?;
        merged.append(&mut population);

        generation += 1;
        drm.set_generation(generation);
        let use_regions =
            config.variant.uses_detection_regions() && archive.has_feasible() && drm.try_activate();
        population = if use_regions {
            drm.update_alpha()?;
            drm.update_radius()?;
            let feasible: Vec<Solution> = archive.feasible().cloned().collect();
            let regions = compute_centers(&feasible, &drm)?;
            environmental_selection_drm(merged, &regions, n)?
        } else {
            if !drm.is_active() {
                drm.set_r_max(min_vector_norm(&merged))?;
            }
            environmental_selection_cdp(merged, n)
        };
        archive = update_archive(&archive, &population);
        debug_assert!(
            archive.is_clean(),
            "archive hygiene broken at generation {generation}"
        );

        let done = evaluator.evaluations() >= config.max_fe;
        if generation.is_multiple_of(CHECKPOINT_EVERY) || done {
            checkpoints.push(checkpoint(
                generation,
                evaluator.evaluations(),
                &population,
                &archive,
                &drm,
                scorer.as_ref(),
            )?);
        }
        observer(&GenerationView {
            generation,
            evaluations: evaluator.evaluations(),
            population: &population,
            archive: &archive,
            drm: &drm,
            used_detection_regions: use_regions,
        });
    }

    let (final_igd, final_hv) = match &scorer {
        Some(s) => s.score(&archive)?,
        None => (None, None),
    };
    let record = RunRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        problem: problem.name().to_string(),
        variant: config.variant,
        operator: config.operator,
        seed: config.seed,
        population_size: n,
        max_fe: config.max_fe,
        evaluations: evaluator.evaluations(),
        generations: generation,
        truncated,
        activation_generation: (drm.is_active()).then(|| drm.activation_generation()),
        final_igd,
        final_hv,
        checkpoints,
        archive: archive
            .members
            .iter()
            .map(|s| ArchiveEntry {
                objectives: s.objectives.to_vec(),
                decision: s.decision.to_vec(),
                cv: s.cv(),
            })
            .collect(),
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutcome { archive, record })
}

/// Euclidean norm of the componentwise minimum objective vector.
fn min_vector_norm(population: &[Solution]) -> f64 {
    let Some(first) = population.first() else {
        return 0.0;
    };
    let mut min = first.objectives.to_vec();
    for s in &population[1..] {
        for (m, v) in min.iter_mut().zip(s.objectives.iter()) {
            *m = m.min(*v);
        }
    }
    min.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn tournament<R: Rng + ?Sized>(population: &[Solution], rng: &mut R) -> usize {
    let a = rng.random_range(0..population.len());
    let b = rng.random_range(0..population.len());
    if population[b].fitness < population[a].fitness {
        b
    } else {
        a
    }
}

fn mating_pool<R: Rng + ?Sized>(
    population: &[Solution],
    n: usize,
    mode: MatingMode,
    rng: &mut R,
) -> Vec<DecisionVector> {
    match mode {
        MatingMode::Tournament => (0..n)
            .map(|_| population[tournament(population, rng)].decision.clone())
            .collect(),
        MatingMode::NeighborPairing => {
            let t = n
                .div_ceil(10)
                .clamp(1, population.len().saturating_sub(1).max(1));
            let mut pool = Vec::with_capacity(n + 1);
            while pool.len() < n {
                let p = tournament(population, rng);
                let mut others: Vec<(f64, usize)> = (0..population.len())
                    .filter(|&j| j != p)
                    .map(|j| {
                        (
                            euclidean(&population[p].objectives, &population[j].objectives),
                            j,
                        )
                    })
                    .collect();
                others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let mate = if others.is_empty() {
                    p
                } else {
                    others[rng.random_range(0..t.min(others.len()))].1
                };
                pool.push(population[p].decision.clone());
                pool.push(population[mate].decision.clone());
            }
            pool.truncate(n);
            pool
        }
    }
}

struct Scorer<'a> {
    front: &'a ReferenceFront,
    hv_reference: Vec<f64>,
}

impl<'a> Scorer<'a> {
    fn new(front: &'a ReferenceFront) -> Self {
        Self {
            front,
            hv_reference: hv_reference_point(front),
        }
    }

    fn score(&self, archive: &Archive) -> Result<(Option<f64>, Option<f64>)> {
        let feasible: Vec<&[f64]> = archive.feasible().map(|s| &*s.objectives).collect();
        if feasible.is_empty() {
            return Ok((None, None));
        }
        let igd = igd(&feasible, self.front.points());
        let hv = if self.hv_reference.len() <= 3 {
            Some(hv(&feasible, &self.hv_reference)?)
        } else {
            None
        };
        Ok((igd, hv))
    }
}

fn checkpoint(
    generation: usize,
    evaluations: usize,
    population: &[Solution],
    archive: &Archive,
    drm: &DrmState,
    scorer: Option<&Scorer<'_>>,
) -> Result<Checkpoint> {
    let (igd, hv) = match scorer {
        Some(s) => s.score(archive)?,
        None => (None, None),
    };
    Ok(Checkpoint {
        generation,
        evaluations,
        igd,
        hv,
        population_feasible: population.iter().filter(|s| s.is_feasible()).count(),
        archive_feasible: archive.feasible().count(),
        alpha: drm.is_active().then(|| drm.alpha()),
        radius: drm.is_active().then(|| drm.radius()),
    })
}
