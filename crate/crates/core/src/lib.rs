//! Constrained multi-objective optimisation when constraints only report
//! satisfied or violated.
//!
//! The optimiser is an SPEA2-style evolutionary algorithm with an elite
//! feasible archive. Once a feasible solution is archived, infeasible
//! solutions lying inside shrinking detection regions around the archive
//! are treated as feasible during selection, letting the search cross
//! infeasible gaps that a binary constraint signal cannot grade.
//!
//! ```no_run
//! use drmcmo::{build_problem, run, sample_reference_front, AlgorithmConfig, ProblemOptions};
//!
//! let problem = build_problem("bc_band", &ProblemOptions::default())?;
//! let front = sample_reference_front(problem.as_ref(), 1000, None)?;
//! let out = run(problem.as_ref(), &AlgorithmConfig::default(), Some(&front))?;
//! println!("final IGD {:?}", out.record.final_igd);
//! # Ok::<(), drmcmo::Error>(())
//! ```

pub mod algorithm;
pub mod dominance;
pub mod drm;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod operators;
pub mod problems;
pub mod solution;

pub use algorithm::{
    run, run_observed, AlgorithmConfig, Archive, GenerationView, MatingMode, RunOutcome, Variant,
};
pub use error::{Error, Result};
pub use harness::{run_campaign, summarize_dir, CampaignConfig, RunRecord};
pub use problems::{
    build_problem, sample_reference_front, Problem, ProblemOptions, ReferenceFront,
};
pub use solution::{ConstraintBits, DecisionVector, ObjectiveVector, Solution};
