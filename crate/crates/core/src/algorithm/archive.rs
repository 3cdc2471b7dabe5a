use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::algorithm::selection::{
    assign_fitness, prune_by_distance, take_indices, truncation_indices,
};
use crate::dominance::{cdp_dominates, dominates};
use crate::solution::{euclidean, Solution};

/// Bounded elite store. Once any feasible solution has been seen it only
/// holds feasible, mutually nondominated members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    pub members: Vec<Solution>,
    pub capacity: usize,
}

impl Archive {
    pub fn new(capacity: usize) -> Self {
        Self {
            members: Vec::new(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn has_feasible(&self) -> bool {
        self.members.iter().any(Solution::is_feasible)
    }

    pub fn feasible(&self) -> impl Iterator<Item = &Solution> {
        self.members.iter().filter(|s| s.is_feasible())
    }

    /// Feasible-only, no member dominating another, within capacity. An
    /// archive without feasible members only has to respect the capacity.
    pub fn is_clean(&self) -> bool {
        if self.members.len() > self.capacity {
            return false;
        }
        if !self.has_feasible() {
            return true;
        }
        self.members.iter().all(Solution::is_feasible)
            && self
                .members
                .iter()
                .all(|a| self.members.iter().all(|b| !cdp_dominates(a, b, false)))
    }
}

/// Merges `population` into `archive` under constraint-dominance with raw
/// violation counts.
///
/// Decision vectors already present are skipped. With feasible candidates,
/// the feasible nondominated subset survives, thinned by nearest-neighbour
/// truncation when it exceeds the capacity; otherwise the `capacity`
/// best candidates by SPEA2 fitness are kept.
pub fn update_archive(archive: &Archive, population: &[Solution]) -> Archive {
    let mut merged: Vec<Solution> = Vec::with_capacity(archive.len() + population.len());
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(merged.capacity());
    for s in archive.members.iter().chain(population) {
        if seen.insert(s.decision.iter().map(|v| v.to_bits()).collect()) {
            let mut s = s.clone();
            s.reset_effective_cv();
            merged.push(s);
        }
    }

    let members = if merged.iter().any(Solution::is_feasible) {
        let feasible: Vec<Solution> = merged.into_iter().filter(Solution::is_feasible).collect();
        let front: Vec<usize> = (0..feasible.len())
            .filter(|&i| {
                !feasible
                    .iter()
                    .any(|o| dominates(&o.objectives, &feasible[i].objectives))
            })
            .collect();
        let keep = prune_by_distance(&front, archive.capacity, |a, b| {
            euclidean(&feasible[a].objectives, &feasible[b].objectives)
        });
        take_indices(feasible, &keep)
    } else {
        let dist = assign_fitness(&mut merged, false);
        let keep = truncation_indices(&merged, &dist, archive.capacity);
        take_indices(merged, &keep)
    };
    Archive {
        members,
        capacity: archive.capacity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::ConstraintBits;

    fn sol(x: f64, f: &[f64], cv: usize) -> Solution {
        Solution::new(
            vec![x].into(),
            f.to_vec().into(),
            ConstraintBits::from_flags((0..3).map(|i| i < cv)),
        )
    }

    fn objectives(a: &Archive) -> Vec<Vec<f64>> {
        a.members.iter().map(|s| s.objectives.to_vec()).collect()
    }

    #[test]
    fn dominating_newcomers_evict_local_optima() {
        let arch = Archive {
            members: vec![sol(0.0, &[0.5, 1.0], 0), sol(0.1, &[1.0, 0.5], 0)],
            capacity: 5,
        };
        let pop = vec![
            sol(0.2, &[0.2, 0.8], 0),
            sol(0.3, &[0.8, 0.2], 0),
            sol(0.4, &[0.0, 0.0], 2),
        ];
        let next = update_archive(&arch, &pop);
        assert_eq!(objectives(&next), vec![vec![0.2, 0.8], vec![0.8, 0.2]]);
        assert!(next.is_clean());
    }

    #[test]
    fn all_infeasible_keeps_lowest_violations() {
        let arch = Archive::new(2);
        let pop = vec![
            sol(0.0, &[0.0, 0.0], 3),
            sol(0.1, &[0.0, 0.0], 1),
            sol(0.2, &[0.0, 0.0], 2),
            sol(0.3, &[1.0, 1.0], 1),
        ];
        let next = update_archive(&arch, &pop);
        let cvs: Vec<u32> = next.members.iter().map(Solution::cv).collect();
        assert_eq!(cvs, vec![1, 1]);
        assert!(!next.has_feasible());
        assert!(next.is_clean());
    }

    #[test]
    fn small_nondominated_set_is_kept_verbatim() {
        let arch = Archive::new(10);
        let pop = vec![
            sol(0.0, &[0.0, 1.0], 0),
            sol(0.1, &[0.5, 0.5], 0),
            sol(0.2, &[1.0, 0.0], 0),
        ];
        let next = update_archive(&arch, &pop);
        assert_eq!(next.members, pop);
    }

    #[test]
    fn duplicates_are_merged_and_capacity_respected() {
        let pts: Vec<Solution> = (0..8)
            .map(|i| {
                let t = i as f64 / 7.0;
                sol(t, &[t, 1.0 - t], 0)
            })
            .collect();
        let arch = Archive {
            members: pts[..4].to_vec(),
            capacity: 4,
        };
        let next = update_archive(&arch, &pts);
        assert_eq!(next.len(), 4);
        assert!(next.is_clean());
        let again = update_archive(&next, &next.members.clone());
        assert_eq!(again.members, next.members);
    }

    #[test]
    fn hygiene_detects_violations() {
        let dirty = Archive {
            members: vec![sol(0.0, &[0.0, 0.0], 0), sol(0.1, &[1.0, 1.0], 0)],
            capacity: 5,
        };
        assert!(!dirty.is_clean());
        let mixed = Archive {
            members: vec![sol(0.0, &[0.0, 1.0], 0), sol(0.1, &[1.0, 0.0], 1)],
            capacity: 5,
        };
        assert!(!mixed.is_clean());
    }
}
