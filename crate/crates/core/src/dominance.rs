//! Pareto dominance and the constraint dominance principle (CDP).
//!
//! All comparisons are exact: no epsilon is applied to objective values.

use crate::error::{Error, Result};
use crate::solution::Solution;

/// `true` iff `a` Pareto-dominates `b` (minimisation).
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Contract(format!(
            "cannot compare objective vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates(a, b))
}

/// Unchecked variant for hot loops; lengths must already agree.
#[inline]
pub(crate) fn dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Constraint-dominance of `a` over `b`, using either the raw violation
/// count or the relaxed `effective_cv`.
pub fn cdp_dominates(a: &Solution, b: &Solution, use_effective_cv: bool) -> bool {
    cdp_dominates_cv(
        a.cv_for(use_effective_cv),
        &a.objectives,
        b.cv_for(use_effective_cv),
        &b.objectives,
    )
}

#[inline]
pub(crate) fn cdp_dominates_cv(cv_a: u32, a: &[f64], cv_b: u32, b: &[f64]) -> bool {
    match (cv_a, cv_b) {
        (0, 0) => dominates(a, b),
        (0, _) => true,
        (_, 0) => false,
        (x, y) => x < y,
    }
}

/// Indices of the members not CDP-dominated by any other member.
pub fn cdp_nondominated(members: &[Solution], use_effective_cv: bool) -> Vec<usize> {
    (0..members.len())
        .filter(|&i| {
            !members
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && cdp_dominates(other, &members[i], use_effective_cv))
        })
        .collect()
}
