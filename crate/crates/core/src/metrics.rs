//! Quality indicators and the statistics used to compare runs.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::problems::ReferenceFront;
use crate::solution::{euclidean, Solution};

/// Scale applied to the reference front's nadir to obtain the hypervolume
/// reference point.
pub const HV_REFERENCE_SCALE: f64 = 1.1;

/// Default significance level of the rank-sum test.
pub const SIGNIFICANCE: f64 = 0.05;

/// Inverted generational distance: mean distance from every reference point
/// to its nearest member of `points`. `None` when `points` is empty.
pub fn igd<P: AsRef<[f64]>, Q: AsRef<[f64]>>(points: &[P], reference: &[Q]) -> Option<f64> {
    if points.is_empty() || reference.is_empty() {
        return None;
    }
    let total: f64 = reference
        .iter()
        .map(|v| {
            points
                .iter()
                .map(|p| euclidean(v.as_ref(), p.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Some(total / reference.len() as f64)
}

/// Exact hypervolume dominated by `points` and bounded by `z`, for one to
/// three objectives. Points not strictly better than `z` in every objective
/// contribute nothing and are skipped.
pub fn hv<P: AsRef<[f64]>>(points: &[P], z: &[f64]) -> Result<f64> {
    let m = z.len();
    if !(1..=3).contains(&m) {
        return Err(Error::Contract(format!(
            "exact hypervolume supports 1 to 3 objectives, got {m}"
        )));
    }
    let mut kept: Vec<&[f64]> = Vec::with_capacity(points.len());
    for p in points {
        let p = p.as_ref();
        if p.len() != m {
            return Err(Error::Contract(format!(
                "point of length {} against reference of length {m}",
                p.len()
            )));
        }
        if p.iter().zip(z).all(|(a, b)| a < b) {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Ok(0.0);
    }
    Ok(match m {
        1 => z[0] - kept.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            let mut pts: Vec<(f64, f64)> = kept.iter().map(|p| (p[0], p[1])).collect();
            hv2d(&mut pts, z[0], z[1])
        }
        _ => hv3d(kept, z),
    })
}

fn hv2d(pts: &mut [(f64, f64)], z1: f64, z2: f64) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut best = z2;
    for &(f1, f2) in pts.iter() {
        if f2 < best {
            area += (z1 - f1) * (best - f2);
            best = f2;
        }
    }
    area
}

/// Slices along the third objective and sums 2-D areas.
fn hv3d(mut pts: Vec<&[f64]>, z: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slice: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        slice.push((p[0], p[1]));
        let top = pts.get(i + 1).map_or(z[2], |q| q[2]);
        let depth = top - p[2];
        if depth > 0.0 {
            volume += hv2d(&mut slice, z[0], z[1]) * depth;
        }
    }
    volume
}

/// Indicators of one archive, computed on its feasible members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// `None` when no feasible solution exists (reported as N/A).
    pub igd: Option<f64>,
    pub hv: f64,
    pub n_solutions: usize,
    pub feasible_only: bool,
}

impl MetricReport {
    pub fn compute(
        solutions: &[Solution],
        reference: &ReferenceFront,
        hv_reference: &[f64],
    ) -> Result<Self> {
        let feasible: Vec<&[f64]> = solutions
            .iter()
            .filter(|s| s.is_feasible())
            .map(|s| &*s.objectives)
            .collect();
        Ok(Self {
            igd: igd(&feasible, reference.points()),
            hv: hv(&feasible, hv_reference)?,
            n_solutions: feasible.len(),
            feasible_only: true,
        })
    }
}

/// Hypervolume reference point for a front: its nadir scaled by 1.1.
pub fn hv_reference_point(front: &ReferenceFront) -> Vec<f64> {
    front
        .nadir()
        .into_iter()
        .map(|v| v * HV_REFERENCE_SCALE)
        .collect()
}

/// Outcome of a two-sample comparison from the first sample's viewpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Better,
    Worse,
    Similar,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Better => "+",
            Comparison::Worse => "-",
            Comparison::Similar => "≈",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Comparison::Better => Comparison::Worse,
            Comparison::Worse => Comparison::Better,
            Comparison::Similar => Comparison::Similar,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Statistics of the two-sided Wilcoxon rank-sum test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankSumTest {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// Normal score with tie correction; 0 when the variance vanishes.
    pub z: f64,
    pub p_value: f64,
    /// Mean rank of each sample in the pooled ranking.
    pub mean_rank_a: f64,
    pub mean_rank_b: f64,
}

/// Average ranks (1-based) of `values`, ties sharing their mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Rank-sum statistics with the normal approximation and tie correction.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumTest> {
    if a.len() < 5 || b.len() < 5 {
        return Err(Error::Contract(format!(
            "rank-sum test needs at least 5 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Contract("rank-sum samples must be finite".into()));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let rank_sum_b: f64 = ranks[a.len()..].iter().sum();
    let u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;

    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let (z, p_value) = if variance > 0.0 {
        let z = (u - n1 * n2 / 2.0) / variance.sqrt();
        (z, erfc(z.abs() / std::f64::consts::SQRT_2))
    } else {
        (0.0, 1.0)
    };
    Ok(RankSumTest {
        u,
        z,
        p_value,
        mean_rank_a: rank_sum_a / n1,
        mean_rank_b: rank_sum_b / n2,
    })
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    }
}

/// Whether sample `a` is significantly better, worse, or similar to `b` at
/// level `alpha`. Direction follows the medians, falling back to mean ranks
/// when the medians coincide.
pub fn wilcoxon_rank_sum(
    a: &[f64],
    b: &[f64],
    alpha: f64,
    lower_is_better: bool,
) -> Result<Comparison> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )));
    }
    let test = rank_sum_test(a, b)?;
    if test.p_value >= alpha {
        return Ok(Comparison::Similar);
    }
    let order = match median(a).total_cmp(&median(b)) {
        Ordering::Equal => test.mean_rank_a.total_cmp(&test.mean_rank_b),
        other => other,
    };
    let a_lower = match order {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => return Ok(Comparison::Similar),
    };
    Ok(if a_lower == lower_is_better {
        Comparison::Better
    } else {
        Comparison::Worse
    })
}

/// Mean Friedman rank of every algorithm (rows) over the problems
/// (columns). Rank 1 is best; ties share their average rank. Problems with a
/// missing (non-finite) cell are skipped with a warning.
pub fn friedman_mean_ranks(results: &[Vec<f64>], lower_is_better: bool) -> Result<Vec<f64>> {
    let n_alg = results.len();
    if n_alg < 2 {
        return Err(Error::Contract(format!(
            "Friedman ranking needs >= 2 algorithms, got {n_alg}"
        )));
    }
    let n_prob = results[0].len();
    if results.iter().any(|row| row.len() != n_prob) {
        return Err(Error::Contract(
            "result matrix rows differ in length".into(),
        ));
    }
    if n_prob < 2 {
        return Err(Error::Contract(format!(
            "Friedman ranking needs >= 2 problems, got {n_prob}"
        )));
    }
    let mut sums = vec![0.0; n_alg];
    let mut used = 0usize;
    for col in 0..n_prob {
        let column: Vec<f64> = results.iter().map(|row| row[col]).collect();
        if column.iter().any(|v| !v.is_finite()) {
            log::warn!("problem column {col} has missing results; excluded from Friedman ranking");
            continue;
        }
        let keyed: Vec<f64> = if lower_is_better {
            column
        } else {
            column.into_iter().map(|v| -v).collect()
        };
        for (s, r) in sums.iter_mut().zip(average_ranks(&keyed)) {
            *s += r;
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::Contract(
            "no problem has results for every algorithm".into(),
        ));
    }
    Ok(sums.into_iter().map(|s| s / used as f64).collect())
}
