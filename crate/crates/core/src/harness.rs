//! Batch experiments: campaign configuration, parallel seeded runs, per-run
//! JSON records, and summary tables in "mean (std)" style with rank-sum
//! markers and Friedman mean ranks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithm::{run, AlgorithmConfig, MatingMode, Variant};
use crate::error::{Error, Result};
use crate::metrics::{friedman_mean_ranks, wilcoxon_rank_sum, Comparison, SIGNIFICANCE};
use crate::operators::{OperatorConfig, OperatorKind};
use crate::problems::{build_problem, sample_reference_front, ProblemOptions, ReferenceFront};

pub const RECORD_SCHEMA_VERSION: u32 = 1;
pub const RECORDS_DIR: &str = "records";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUMMARY_TXT: &str = "summary.txt";
pub const FAILURES_FILE: &str = "failures.txt";
/// Marker row written for an archive without feasible members.
pub const NA_MARKER: &str = "N/A";

/// Metric snapshot taken every few generations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub generation: usize,
    pub evaluations: usize,
    pub igd: Option<f64>,
    pub hv: Option<f64>,
    pub population_feasible: usize,
    pub archive_feasible: usize,
    pub alpha: Option<f64>,
    pub radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub objectives: Vec<f64>,
    pub decision: Vec<f64>,
    pub cv: u32,
}

/// Everything persisted about one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub problem: String,
    pub variant: Variant,
    pub operator: OperatorKind,
    pub seed: u64,
    pub population_size: usize,
    pub max_fe: usize,
    pub evaluations: usize,
    pub generations: usize,
    /// The budget allowed no generation beyond the initial population.
    pub truncated: bool,
    pub activation_generation: Option<usize>,
    pub final_igd: Option<f64>,
    pub final_hv: Option<f64>,
    pub checkpoints: Vec<Checkpoint>,
    pub archive: Vec<ArchiveEntry>,
    pub wall_time_secs: f64,
}

impl RunRecord {
    /// Column label used in summaries, e.g. `full-ga`.
    pub fn algorithm(&self) -> String {
        algorithm_label(self.variant, self.operator)
    }

    pub fn file_name(&self) -> String {
        record_file_name(&self.problem, self.variant, self.operator, self.seed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let record: RunRecord = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if record.schema_version != RECORD_SCHEMA_VERSION {
            return Err(Error::Ingestion {
                path: path.to_path_buf(),
                message: format!(
                    "record schema version {} is not supported (expected {RECORD_SCHEMA_VERSION})",
                    record.schema_version
                ),
            });
        }
        Ok(record)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run records always serialise")
    }
}

pub fn algorithm_label(variant: Variant, operator: OperatorKind) -> String {
    format!("{variant}-{operator}")
}

fn record_file_name(problem: &str, variant: Variant, operator: OperatorKind, seed: u64) -> String {
    format!("{problem}__{variant}__{operator}__seed{seed:04}.json")
}

fn default_seeds() -> Vec<u64> {
    (1..=30).collect()
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::Full]
}

fn default_operators() -> Vec<OperatorKind> {
    vec![OperatorKind::Ga]
}

fn default_population() -> usize {
    100
}

fn default_max_fe() -> usize {
    100_000
}

fn default_front_points() -> usize {
    1000
}

/// A campaign, usually read from a TOML file.
///
/// ```toml
/// problems = ["bc_band", "bc_arcs"]
/// variants = ["full", "v3_cdp_only"]
/// seeds = [1, 2, 3]
/// max_fe = 20000
/// output_dir = "out"
///
/// [fronts]
/// mw13_bc = "fronts/mw13.csv"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub problems: Vec<String>,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default = "default_operators")]
    pub operators: Vec<OperatorKind>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_population")]
    pub population_size: usize,
    #[serde(default = "default_max_fe")]
    pub max_fe: usize,
    pub output_dir: PathBuf,
    /// Column every other column is tested against. Defaults to the first
    /// variant with the first operator.
    #[serde(default)]
    pub baseline: Option<String>,
    /// Worker threads; `None` uses the available parallelism.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Points sampled from analytic fronts.
    #[serde(default = "default_front_points")]
    pub front_points: usize,
    /// Reference-front CSV files by problem name; they take precedence over
    /// analytic fronts.
    #[serde(default)]
    pub fronts: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub problem_options: ProblemOptions,
    #[serde(default)]
    pub operator_params: OperatorConfig,
    #[serde(default)]
    pub mating: MatingMode,
}

impl CampaignConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: CampaignConfig = toml::from_str(text)
            .map_err(|e| Error::Config(format!("invalid campaign file: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() || self.variants.is_empty() || self.operators.is_empty() {
            return Err(Error::Config(
                "problems, variants and operators must be nonempty".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seed list must be nonempty".into()));
        }
        let unique: BTreeSet<u64> = self.seeds.iter().copied().collect();
        if unique.len() != self.seeds.len() {
            return Err(Error::Config("seeds must be unique".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        if let Some(b) = &self.baseline {
            if !self.labels().contains(b) {
                return Err(Error::Config(format!(
                    "baseline {b:?} is not one of the campaign columns {:?}",
                    self.labels()
                )));
            }
        }
        for p in &self.problems {
            build_problem(p, &self.problem_options)?;
        }
        self.algorithm_config(Variant::Full, OperatorKind::Ga, 0)
            .validate()
    }

    fn labels(&self) -> Vec<String> {
        self.variants
            .iter()
            .flat_map(|&v| self.operators.iter().map(move |&o| algorithm_label(v, o)))
            .collect()
    }

    pub fn baseline_label(&self) -> String {
        self.baseline
            .clone()
            .unwrap_or_else(|| algorithm_label(self.variants[0], self.operators[0]))
    }

    pub fn algorithm_config(
        &self,
        variant: Variant,
        operator: OperatorKind,
        seed: u64,
    ) -> AlgorithmConfig {
        AlgorithmConfig {
            population_size: self.population_size,
            max_fe: self.max_fe,
            variant,
            operator,
            operators: self.operator_params,
            mating: self.mating,
            seed,
        }
    }

    /// Total number of runs.
    pub fn run_count(&self) -> usize {
        self.problems.len() * self.variants.len() * self.operators.len() * self.seeds.len()
    }
}

/// A run that did not produce a record.
#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub problem: String,
    pub algorithm: String,
    pub seed: u64,
    pub message: String,
}

/// What [`run_campaign`] produced.
#[derive(Clone, Debug)]
pub struct CampaignOutcome {
    pub records_written: usize,
    pub failures: Vec<RunFailure>,
    pub summary: Summary,
}

/// Runs every (problem, variant, operator, seed) combination and writes
/// records plus the summary into the output directory.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    config.validate()?;
    let records_dir = config.output_dir.join(RECORDS_DIR);
    ensure_writable(&records_dir)?;

    let mut fronts: BTreeMap<String, Option<ReferenceFront>> = BTreeMap::new();
    for name in &config.problems {
        let problem = build_problem(name, &config.problem_options)?;
        let file = config.fronts.get(name).map(PathBuf::as_path);
        let front = match sample_reference_front(problem.as_ref(), config.front_points, file) {
            Ok(f) => Some(f),
            Err(Error::Config(msg)) => {
                log::warn!("{name}: no reference front, metrics will be N/A ({msg})");
                None
            }
            Err(e) => return Err(e),
        };
        fronts.insert(name.clone(), front);
    }

    let mut jobs = Vec::with_capacity(config.run_count());
    for p in &config.problems {
        for &v in &config.variants {
            for &o in &config.operators {
                for &s in &config.seeds {
                    jobs.push((p.clone(), v, o, s));
                }
            }
        }
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let results: Vec<std::result::Result<RunRecord, RunFailure>> = pool.install(|| {
        jobs.par_iter()
            .map(|(p, v, o, s)| {
                let attempt = || -> Result<RunRecord> {
                    let problem = build_problem(p, &config.problem_options)?;
                    let out = run(
                        problem.as_ref(),
                        &config.algorithm_config(*v, *o, *s),
                        fronts[p].as_ref(),
                    )?;
                    write_atomic(
                        &records_dir.join(out.record.file_name()),
                        &out.record.to_json(),
                    )?;
                    Ok(out.record)
                };
                attempt().map_err(|e| {
                    log::error!("{p} {} seed {s} failed: {e}", algorithm_label(*v, *o));
                    RunFailure {
                        problem: p.clone(),
                        algorithm: algorithm_label(*v, *o),
                        seed: *s,
                        message: e.to_string(),
                    }
                })
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }
    if !failures.is_empty() {
        let mut text = String::new();
        for f in &failures {
            let _ = writeln!(
                text,
                "{}\t{}\tseed {}\t{}",
                f.problem, f.algorithm, f.seed, f.message
            );
        }
        write_atomic(&config.output_dir.join(FAILURES_FILE), &text)?;
    }

    let summary = Summary::from_records(&records, &config.baseline_label())?;
    summary.write(&config.output_dir)?;
    Ok(CampaignOutcome {
        records_written: records.len(),
        failures,
        summary,
    })
}

/// Rebuilds the summary of an output directory from its record files alone.
pub fn summarize_dir(dir: &Path, baseline: Option<&str>) -> Result<Summary> {
    let records = load_records(&dir.join(RECORDS_DIR))?;
    if records.is_empty() {
        return Err(Error::Ingestion {
            path: dir.join(RECORDS_DIR),
            message: "no run records found".into(),
        });
    }
    let baseline = match baseline {
        Some(b) => b.to_string(),
        None => {
            let labels: BTreeSet<(Variant, String)> = records
                .iter()
                .map(|r| (r.variant, r.operator.to_string()))
                .collect();
            let (v, o) = labels.iter().next().expect("records are nonempty");
            format!("{v}-{o}")
        }
    };
    let summary = Summary::from_records(&records, &baseline)?;
    summary.write(dir)?;
    Ok(summary)
}

/// Every `*.json` record below `dir`, in file-name order.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| RunRecord::load(p)).collect()
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some((mean, var.sqrt()))
}

/// `1.3118e-2 (3.37e-3)`.
pub fn format_mean_std(mean: f64, std: f64) -> String {
    format!("{mean:.4e} ({std:.2e})")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Igd,
    Hv,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Igd => "IGD",
            Metric::Hv => "HV",
        }
    }

    pub fn lower_is_better(self) -> bool {
        self == Metric::Igd
    }

    fn of(self, r: &RunRecord) -> Option<f64> {
        match self {
            Metric::Igd => r.final_igd,
            Metric::Hv => r.final_hv,
        }
    }
}

/// One (problem, algorithm) cell of a summary table.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    /// Runs in the cell.
    pub runs: usize,
    /// Finite metric values, in seed order.
    pub values: Vec<f64>,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    /// Comparison against the baseline column; `None` when the test could
    /// not be carried out.
    pub marker: Option<Comparison>,
}

impl Cell {
    pub fn text(&self, is_baseline: bool) -> String {
        let stat = match (self.mean, self.std) {
            (Some(m), Some(s)) => format_mean_std(m, s),
            _ => NA_MARKER.to_string(),
        };
        if is_baseline {
            return stat;
        }
        match self.marker {
            Some(c) => format!("{stat} {}", c.symbol()),
            None => format!("{stat} ?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    pub metric: Metric,
    /// `cells[problem][algorithm]`.
    pub cells: Vec<Vec<Cell>>,
    /// Friedman mean rank per algorithm, when at least two problems and two
    /// algorithms have complete results.
    pub friedman: Option<Vec<f64>>,
}

/// Aggregated campaign results.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub problems: Vec<String>,
    pub algorithms: Vec<String>,
    pub baseline: String,
    pub tables: Vec<MetricTable>,
}

impl Summary {
    /// Depends only on the record contents, never on their order.
    pub fn from_records(records: &[RunRecord], baseline: &str) -> Result<Self> {
        let problems: Vec<String> = records
            .iter()
            .map(|r| r.problem.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let keys: BTreeSet<(Variant, String)> = records
            .iter()
            .map(|r| (r.variant, r.operator.to_string()))
            .collect();
        let algorithms: Vec<String> = keys.iter().map(|(v, o)| format!("{v}-{o}")).collect();
        let Some(base_idx) = algorithms.iter().position(|a| a == baseline) else {
            return Err(Error::Config(format!(
                "baseline {baseline:?} has no records; columns are {algorithms:?}"
            )));
        };

        let mut groups: BTreeMap<(usize, usize), Vec<&RunRecord>> = BTreeMap::new();
        for r in records {
            let p = problems
                .iter()
                .position(|x| *x == r.problem)
                .expect("collected above");
            let a = algorithms
                .iter()
                .position(|x| *x == r.algorithm())
                .expect("collected above");
            groups.entry((p, a)).or_default().push(r);
        }
        for g in groups.values_mut() {
            g.sort_by_key(|r| r.seed);
        }

        let mut tables = Vec::new();
        for metric in [Metric::Igd, Metric::Hv] {
            let mut cells = Vec::with_capacity(problems.len());
            for p in 0..problems.len() {
                let mut row: Vec<Cell> = (0..algorithms.len())
                    .map(|a| {
                        let runs = groups.get(&(p, a)).map_or(&[][..], |g| &g[..]);
                        let values: Vec<f64> = runs
                            .iter()
                            .filter_map(|r| metric.of(r))
                            .filter(|v| v.is_finite())
                            .collect();
                        let stats = mean_std(&values);
                        Cell {
                            runs: runs.len(),
                            values,
                            mean: stats.map(|s| s.0),
                            std: stats.map(|s| s.1),
                            marker: None,
                        }
                    })
                    .collect();
                let base_values = row[base_idx].values.clone();
                for cell in &mut row {
                    cell.marker = compare(&cell.values, &base_values, metric.lower_is_better());
                }
                cells.push(row);
            }
            let friedman = if algorithms.len() >= 2 && problems.len() >= 2 {
                let matrix: Vec<Vec<f64>> = (0..algorithms.len())
                    .map(|a| {
                        (0..problems.len())
                            .map(|p| cells[p][a].mean.unwrap_or(f64::NAN))
                            .collect()
                    })
                    .collect();
                friedman_mean_ranks(&matrix, metric.lower_is_better()).ok()
            } else {
                None
            };
            tables.push(MetricTable {
                metric,
                cells,
                friedman,
            });
        }
        Ok(Self {
            problems,
            algorithms,
            baseline: baseline.to_string(),
            tables,
        })
    }

    /// Long-format CSV: one line per (metric, problem, algorithm).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,problem,algorithm,runs,valid,mean,std,cell,marker\n");
        for t in &self.tables {
            for (p, row) in self.problems.iter().zip(&t.cells) {
                for (a, cell) in self.algorithms.iter().zip(row) {
                    let num =
                        |v: Option<f64>| v.map_or(NA_MARKER.to_string(), |x| format!("{x:e}"));
                    let marker = if *a == self.baseline {
                        "baseline"
                    } else {
                        cell.marker.map_or("?", Comparison::symbol)
                    };
                    let _ = writeln!(
                        out,
                        "{},{p},{a},{},{},{},{},\"{}\",{marker}",
                        t.metric.name(),
                        cell.runs,
                        cell.values.len(),
                        num(cell.mean),
                        num(cell.std),
                        cell.text(true),
                    );
                }
            }
            if let Some(ranks) = &t.friedman {
                for (a, r) in self.algorithms.iter().zip(ranks) {
                    let _ = writeln!(out, "{},friedman_rank,{a},,,{r:.4},,,", t.metric.name());
                }
            }
        }
        out
    }

    /// Aligned plain-text tables, one per metric.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            let mut rows: Vec<Vec<String>> = Vec::new();
            let mut header = vec![t.metric.name().to_string()];
            header.extend(self.algorithms.iter().map(|a| {
                if *a == self.baseline {
                    format!("{a} (baseline)")
                } else {
                    a.clone()
                }
            }));
            rows.push(header);
            for (p, row) in self.problems.iter().zip(&t.cells) {
                let mut line = vec![p.clone()];
                line.extend(
                    self.algorithms
                        .iter()
                        .zip(row)
                        .map(|(a, c)| c.text(*a == self.baseline)),
                );
                rows.push(line);
            }
            let mut tally = vec!["+/-/≈".to_string()];
            for (a, alg) in self.algorithms.iter().enumerate() {
                if *alg == self.baseline {
                    tally.push(String::new());
                    continue;
                }
                let count =
                    |c: Comparison| t.cells.iter().filter(|r| r[a].marker == Some(c)).count();
                tally.push(format!(
                    "{}/{}/{}",
                    count(Comparison::Better),
                    count(Comparison::Worse),
                    count(Comparison::Similar)
                ));
            }
            rows.push(tally);
            let mut ranks = vec!["Friedman rank".to_string()];
            match &t.friedman {
                Some(r) => ranks.extend(r.iter().map(|v| format!("{v:.2}"))),
                None => ranks.extend(self.algorithms.iter().map(|_| NA_MARKER.to_string())),
            }
            rows.push(ranks);

            let widths: Vec<usize> = (0..rows[0].len())
                .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
                .collect();
            for r in &rows {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                    .collect();
                let _ = writeln!(out, "{}", cells.join("  ").trim_end());
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_atomic(&dir.join(SUMMARY_CSV), &self.to_csv())?;
        write_atomic(&dir.join(SUMMARY_TXT), &self.to_text())
    }
}

/// Marker of `sample` against `baseline`, from the sample's viewpoint.
fn compare(sample: &[f64], baseline: &[f64], lower_is_better: bool) -> Option<Comparison> {
    if sample.len() == baseline.len()
        && sample
            .iter()
            .zip(baseline)
            .all(|(a, b)| a.to_bits() == b.to_bits())
    {
        return Some(Comparison::Similar);
    }
    wilcoxon_rank_sum(sample, baseline, SIGNIFICANCE, lower_is_better).ok()
}

/// CSV of the feasible final-archive objective vectors, one per line. An
/// archive with no feasible member yields a single `N/A` row.
pub fn front_csv(record: &RunRecord) -> String {
    let mut out = String::new();
    for e in record.archive.iter().filter(|e| e.cv == 0) {
        let row: Vec<String> = e.objectives.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    if out.is_empty() {
        out.push_str(NA_MARKER);
        out.push('\n');
    }
    out
}

/// Writes [`front_csv`] to `path`.
pub fn emit_front(record: &RunRecord, path: &Path) -> Result<()> {
    write_atomic(path, &front_csv(record))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(problem: &str, variant: Variant, seed: u64, igd: Option<f64>) -> RunRecord {
        RunRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            problem: problem.into(),
            variant,
            operator: OperatorKind::Ga,
            seed,
            population_size: 10,
            max_fe: 100,
            evaluations: 100,
            generations: 9,
            truncated: false,
            activation_generation: None,
            final_igd: igd,
            final_hv: igd.map(|v| 1.0 - v),
            checkpoints: vec![],
            archive: vec![
                ArchiveEntry {
                    objectives: vec![0.0, 1.0],
                    decision: vec![0.0],
                    cv: 0,
                },
                ArchiveEntry {
                    objectives: vec![1.0, 0.0],
                    decision: vec![1.0],
                    cv: 0,
                },
            ],
            wall_time_secs: 0.5,
        }
    }

    #[test]
    fn mean_std_format() {
        assert_eq!(format_mean_std(1.3118e-2, 3.37e-3), "1.3118e-2 (3.37e-3)");
        assert_eq!(mean_std(&[2.0]), Some((2.0, 0.0)));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
        assert_eq!(mean_std(&[]), None);
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = CampaignConfig::from_toml_str("problems = [\"bc_band\"]\noutput_dir = \"out\"\n")
            .unwrap();
        assert_eq!(c.seeds, (1..=30).collect::<Vec<_>>());
        assert_eq!(c.population_size, 100);
        assert_eq!(c.max_fe, 100_000);
        assert_eq!(c.baseline_label(), "full-ga");
        assert!(CampaignConfig::from_toml_str("problems = []\noutput_dir = \"o\"\n").is_err());
        assert!(CampaignConfig::from_toml_str(
            "problems = [\"bc_band\"]\nseeds = [1, 1]\noutput_dir = \"o\"\n"
        )
        .is_err());
        assert!(
            CampaignConfig::from_toml_str("problems = [\"nope\"]\noutput_dir = \"o\"\n").is_err()
        );
        assert!(CampaignConfig::from_toml_str(
            "problems = [\"bc_band\"]\noutput_dir = \"o\"\nbaseline = \"v3_cdp_only-ga\"\n"
        )
        .is_err());
    }

    #[test]
    fn overrides_reach_algorithm_config() {
        let c = CampaignConfig::from_toml_str(
            "problems = [\"bc_band\"]\noutput_dir = \"o\"\npopulation_size = 20\nmax_fe = 400\n\
             mating = \"neighbor_pairing\"\n[operator_params.de]\nf = 0.7\n[problem_options]\ndim = 4\n",
        )
        .unwrap();
        let a = c.algorithm_config(Variant::V1NoShift, OperatorKind::De, 9);
        assert_eq!(a.population_size, 20);
        assert_eq!(a.max_fe, 400);
        assert_eq!(a.operators.de.f, 0.7);
        assert_eq!(a.mating, MatingMode::NeighborPairing);
        assert_eq!(a.seed, 9);
        assert_eq!(c.problem_options.dim, Some(4));
    }

    #[test]
    fn summary_is_order_independent() {
        let mut recs: Vec<RunRecord> = (1..=6)
            .flat_map(|s| {
                [
                    record("a", Variant::Full, s, Some(0.01 * s as f64)),
                    record("a", Variant::V3CdpOnly, s, Some(0.5 + 0.01 * s as f64)),
                    record("b", Variant::Full, s, Some(0.02 * s as f64)),
                    record("b", Variant::V3CdpOnly, s, None),
                ]
            })
            .collect();
        let s1 = Summary::from_records(&recs, "full-ga").unwrap();
        recs.reverse();
        let s2 = Summary::from_records(&recs, "full-ga").unwrap();
        assert_eq!(s1.to_csv(), s2.to_csv());
        assert_eq!(s1.to_text(), s2.to_text());

        let igd = &s1.tables[0];
        assert_eq!(igd.cells[0][0].marker, Some(Comparison::Similar));
        assert_eq!(igd.cells[0][1].marker, Some(Comparison::Worse));
        assert_eq!(igd.cells[1][1].mean, None);
        assert!(s1.to_text().contains("N/A"));
        // problem b lacks v3 results, so only problem a is ranked
        assert_eq!(igd.friedman, Some(vec![1.0, 2.0]));
    }

    #[test]
    fn front_rows() {
        let r = record("a", Variant::Full, 1, Some(0.1));
        assert_eq!(front_csv(&r), "0,1\n1,0\n");
        let mut empty = r.clone();
        empty.archive[0].cv = 1;
        empty.archive.truncate(1);
        assert_eq!(front_csv(&empty), "N/A\n");
    }

    #[test]
    fn record_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = record("a", Variant::V2LinearAlpha, 3, Some(0.25));
        let path = dir.path().join(r.file_name());
        write_atomic(&path, &r.to_json()).unwrap();
        assert_eq!(RunRecord::load(&path).unwrap(), r);
        assert!(r.to_json().contains("\"v2_linear_alpha\""));
    }
}
