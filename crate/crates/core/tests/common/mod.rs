//! Brute-force reference implementations shared by the integration tests
//! and the acceptance target. Written independently of the library code.

#![allow(dead_code)]

use drmcmo::{ConstraintBits, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pareto(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for i in 0..a.len() {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            strictly = true;
        }
    }
    strictly
}

pub fn cdp(cv_a: u32, a: &[f64], cv_b: u32, b: &[f64]) -> bool {
    if cv_a == 0 && cv_b == 0 {
        pareto(a, b)
    } else if cv_a == 0 || cv_b == 0 {
        cv_a == 0
    } else {
        cv_a < cv_b
    }
}

/// SPEA2 fitness by double loops and full sorts.
pub fn spea2_fitness(objs: &[Vec<f64>], cvs: &[u32]) -> Vec<f64> {
    let n = objs.len();
    if n == 1 {
        return vec![0.5];
    }
    let mut strength = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && cdp(cvs[i], &objs[i], cvs[j], &objs[j]) {
                strength[i] += 1;
            }
        }
    }
    let k = (n as f64).sqrt().floor() as usize;
    (0..n)
        .map(|i| {
            let mut raw = 0usize;
            for j in 0..n {
                if j != i && cdp(cvs[j], &objs[j], cvs[i], &objs[i]) {
                    raw += strength[j];
                }
            }
            let mut d: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    objs[i]
                        .iter()
                        .zip(&objs[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            raw as f64 + 1.0 / (d[k - 1] + 2.0)
        })
        .collect()
}

pub fn igd(points: &[Vec<f64>], reference: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        for p in points {
            let d = r
                .iter()
                .zip(p)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    total / reference.len() as f64
}

/// Monte Carlo hypervolume over the box `[ideal, z]`: `(estimate, standard error)`.
pub fn hv_monte_carlo(points: &[Vec<f64>], z: &[f64], samples: usize, seed: u64) -> (f64, f64) {
    let m = z.len();
    let lo: Vec<f64> = (0..m)
        .map(|k| {
            points
                .iter()
                .map(|p| p[k])
                .fold(f64::INFINITY, f64::min)
                .min(z[k])
        })
        .collect();
    let volume: f64 = (0..m).map(|k| z[k] - lo[k]).product();
    let mut r = rng(seed);
    let mut hits = 0usize;
    let mut s = vec![0.0; m];
    for _ in 0..samples {
        for k in 0..m {
            s[k] = lo[k] + (z[k] - lo[k]) * r.random::<f64>();
        }
        if points.iter().any(|p| (0..m).all(|k| p[k] <= s[k])) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (volume * p, volume * (p * (1.0 - p) / samples as f64).sqrt())
}

/// Mann-Whitney U of `a` by pairwise counting (ties count one half).
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for x in a {
        for y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// Random population of `n` solutions with `m` objectives; some share
/// objective vectors and violation counts so ties are exercised.
pub fn random_population(r: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Solution> {
    let mut out: Vec<Solution> = Vec::with_capacity(n);
    for i in 0..n {
        let objs: Vec<f64> = if i > 0 && r.random_bool(0.1) {
            out[r.random_range(0..i)].objectives.to_vec()
        } else {
            (0..m)
                .map(|_| (r.random::<f64>() * 8.0).round() / 8.0)
                .collect()
        };
        let cv = if r.random_bool(0.5) {
            0
        } else {
            r.random_range(1..4)
        };
        out.push(Solution::new(
            vec![i as f64].into(),
            objs.into(),
            ConstraintBits::from_flags((0..3).map(|b| b < cv)),
        ));
    }
    out
}

/// `n` random mutually nondominated points in `[0, 1]^m`.
pub fn random_front(r: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::new();
    while pts.len() < n {
        let p: Vec<f64> = (0..m).map(|_| r.random::<f64>()).collect();
        if pts.iter().any(|q| pareto(q, &p) || q == &p) {
            continue;
        }
        pts.retain(|q| !pareto(&p, q));
        pts.push(p);
    }
    pts
}
