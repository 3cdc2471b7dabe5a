//! SPEA2 fitness under constraint-dominance, truncation and environmental
//! selection.

use std::cmp::Ordering;

use crate::dominance::cdp_dominates_cv;
use crate::drm::{relax_population, DetectionRegions};
use crate::error::Result;
use crate::solution::{euclidean, Solution};

/// Pairwise objective-space distances of a population, row-major.
pub(crate) struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub(crate) fn of(members: &[Solution]) -> Self {
        let n = members.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&members[i].objectives, &members[j].objectives);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Assigns SPEA2 fitness (lower is better) to every member and returns the
/// distance matrix it used.
///
/// Strength `S(y)` counts the members `y` constraint-dominates; the raw
/// fitness of `x` sums `S(y)` over every `y` dominating `x`; the density is
/// `1 / (sigma + 2)` with `sigma` the distance to the `floor(sqrt(n))`-th
/// nearest neighbour.
pub(crate) fn assign_fitness(members: &mut [Solution], use_effective_cv: bool) -> DistanceMatrix {
    let n = members.len();
    let dist = DistanceMatrix::of(members);
    if n == 0 {
        return dist;
    }
    if n == 1 {
        members[0].fitness = 0.5;
        return dist;
    }

    let cvs: Vec<u32> = members.iter().map(|s| s.cv_for(use_effective_cv)).collect();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut strength = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j
                && cdp_dominates_cv(
                    cvs[i],
                    &members[i].objectives,
                    cvs[j],
                    &members[j].objectives,
                )
            {
                strength[i] += 1;
                dominated_by[j].push(i);
            }
        }
    }

    let kth = (n as f64).sqrt().floor() as usize;
    let mut row = Vec::with_capacity(n - 1);
    for (i, member) in members.iter_mut().enumerate() {
        let raw: u32 = dominated_by[i].iter().map(|&d| strength[d]).sum();
        row.clear();
        row.extend((0..n).filter(|&j| j != i).map(|j| dist.get(i, j)));
        let (_, sigma, _) = row.select_nth_unstable_by(kth - 1, f64::total_cmp);
        member.fitness = f64::from(raw) + 1.0 / (*sigma + 2.0);
    }
    dist
}

/// SPEA2 fitness of every member of `population`.
pub fn spea2_fitness(population: &mut [Solution], use_effective_cv: bool) {
    assign_fitness(population, use_effective_cv);
}

/// Indices (ascending) of the `n` survivors of a fitness-assigned set.
pub(crate) fn truncation_indices(
    members: &[Solution],
    dist: &DistanceMatrix,
    n: usize,
) -> Vec<usize> {
    if members.len() <= n {
        return (0..members.len()).collect();
    }
    let nondominated: Vec<usize> = (0..members.len())
        .filter(|&i| members[i].fitness < 1.0)
        .collect();
    let mut kept = if nondominated.len() >= n {
        prune_by_distance(&nondominated, n, |a, b| dist.get(a, b))
    } else {
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| members[a].fitness.total_cmp(&members[b].fitness));
        order.truncate(n);
        order
    };
    kept.sort_unstable();
    kept
}

/// Keeps `n` of the fitness-assigned `candidates`.
///
/// When at least `n` members are nondominated (fitness < 1), crowded ones
/// are removed one at a time: the member whose sorted neighbour-distance
/// list is lexicographically smallest goes first, lowest index on a full
/// tie. Otherwise the `n` lowest-fitness members survive.
pub fn truncate(candidates: Vec<Solution>, n: usize) -> Vec<Solution> {
    let dist = DistanceMatrix::of(&candidates);
    let keep = truncation_indices(&candidates, &dist, n);
    take_indices(candidates, &keep)
}

pub(crate) fn take_indices(members: Vec<Solution>, sorted_keep: &[usize]) -> Vec<Solution> {
    let mut keep = sorted_keep.iter().peekable();
    members
        .into_iter()
        .enumerate()
        .filter_map(|(i, s)| {
            if keep.peek() == Some(&&i) {
                keep.next();
                Some(s)
            } else {
                None
            }
        })
        .collect()
}

/// Iterative nearest-neighbour truncation of `pool` (indices into whatever
/// `dist` measures) down to `n` members. Returns the survivors.
pub(crate) fn prune_by_distance<F>(pool: &[usize], n: usize, dist: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> f64,
{
    let k = pool.len();
    if k <= n {
        return pool.to_vec();
    }
    if n == 0 {
        return Vec::new();
    }
    // Each row: distances to every other pool member, ascending, ties broken
    // by position so rows compare deterministically.
    let rows: Vec<Vec<(f64, usize)>> = (0..k)
        .map(|a| {
            let mut row: Vec<(f64, usize)> = (0..k)
                .filter(|&b| b != a)
                .map(|b| (dist(pool[a], pool[b]), b))
                .collect();
            row.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            row
        })
        .collect();
    let mut removed = vec![false; k];
    let mut heads = vec![0usize; k];
    let mut remaining = k;

    while remaining > n {
        for a in 0..k {
            if removed[a] {
                continue;
            }
            while removed[rows[a][heads[a]].1] {
                heads[a] += 1;
            }
        }
        let mut worst: Option<usize> = None;
        for a in 0..k {
            if removed[a] {
                continue;
            }
            worst = match worst {
                None => Some(a),
                Some(w) => {
                    if compare_rows(&rows[a][heads[a]..], &rows[w][heads[w]..], &removed)
                        == Ordering::Less
                    {
                        Some(a)
                    } else {
                        Some(w)
                    }
                }
            };
        }
        let w = worst.expect("pool larger than target is nonempty");
        removed[w] = true;
        remaining -= 1;
    }
    (0..k).filter(|&a| !removed[a]).map(|a| pool[a]).collect()
}

fn compare_rows(a: &[(f64, usize)], b: &[(f64, usize)], removed: &[bool]) -> Ordering {
    let mut ia = a.iter().filter(|e| !removed[e.1]);
    let mut ib = b.iter().filter(|e| !removed[e.1]);
    loop {
        match (ia.next(), ib.next()) {
            (Some(x), Some(y)) => match x.0.total_cmp(&y.0) {
                Ordering::Equal => continue,
                other => return other,
            },
            _ => return Ordering::Equal,
        }
    }
}

/// SPEA2 environmental selection on raw or relaxed violations. Fitness is
/// (re)assigned to every survivor.
pub fn environmental_selection(
    mut merged: Vec<Solution>,
    n: usize,
    use_effective_cv: bool,
) -> Vec<Solution> {
    let dist = assign_fitness(&mut merged, use_effective_cv);
    let keep = truncation_indices(&merged, &dist, n);
    take_indices(merged, &keep)
}

/// Selection under constraint-dominance with raw violation counts.
pub fn environmental_selection_cdp(mut merged: Vec<Solution>, n: usize) -> Vec<Solution> {
    for s in merged.iter_mut() {
        s.reset_effective_cv();
    }
    environmental_selection(merged, n, false)
}

/// Selection with detection-region relaxation: infeasible members inside a
/// region count as feasible, then ordinary SPEA2 selection follows.
pub fn environmental_selection_drm(
    mut merged: Vec<Solution>,
    regions: &DetectionRegions,
    n: usize,
) -> Result<Vec<Solution>> {
    relax_population(&mut merged, regions)?;
    Ok(environmental_selection(merged, n, true))
}
