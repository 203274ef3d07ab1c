//! Partitioning Around Medoids: greedy BUILD followed by best-improvement SWAP.
//!
//! Every argmin breaks ties toward the lowest index (for SWAP, the
//! lexicographically lowest `(medoid, non-medoid)` pair), and improvements are
//! accepted only under a strict `<` on the objective, so the procedure is fully
//! deterministic and each accepted swap strictly lowers the objective.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    /// Cluster index of each item, in `0..medoids.len()`.
    pub assignments: Vec<usize>,
    /// Item index of each cluster's medoid.
    pub medoids: Vec<usize>,
    /// Sum over items of the distance to the nearest medoid.
    pub objective: f64,
}

impl ClusteringResult {
    pub fn cluster_count(&self) -> usize {
        self.medoids.len()
    }

    /// Item indices belonging to each cluster, ascending within a cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.medoids.len()];
        for (item, &c) in self.assignments.iter().enumerate() {
            members[c].push(item);
        }
        members
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members().iter().map(Vec::len).collect()
    }
}

fn check_cluster_count(d: &DistanceMatrix, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Parameter("cluster count must be at least 1".into()));
    }
    if m > d.len() {
        return Err(Error::Parameter(format!(
            "cluster count {m} exceeds item count {}",
            d.len()
        )));
    }
    Ok(())
}

/// Sum over items of the distance to the nearest of `medoids`.
pub fn objective(d: &DistanceMatrix, medoids: &[usize]) -> f64 {
    (0..d.len())
        .map(|k| {
            medoids
                .iter()
                .map(|&l| d.get(k, l))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Nearest-medoid position for every item; medoids always claim themselves
/// and remaining ties go to the lowest position.
pub fn assign(d: &DistanceMatrix, medoids: &[usize]) -> Vec<usize> {
    (0..d.len())
        .map(|k| {
            if let Some(pos) = medoids.iter().position(|&r| r == k) {
                return pos;
            }
            let mut best = 0;
            for (pos, &r) in medoids.iter().enumerate().skip(1) {
                if d.get(k, r) < d.get(k, medoids[best]) {
                    best = pos;
                }
            }
            best
        })
        .collect()
}

/// Greedy initial medoids, in selection order.
pub fn pam_build(d: &DistanceMatrix, m: usize) -> Result<Vec<usize>> {
    check_cluster_count(d, m)?;
    let n = d.len();

    let first = (0..n)
        .map(|i| (i, d.row(i).iter().sum::<f64>()))
        .fold(
            (0, f64::INFINITY),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        )
        .0;
    let mut medoids = vec![first];
    let mut nearest: Vec<f64> = d.row(first).to_vec();
    let mut chosen = vec![false; n];
    chosen[first] = true;

    while medoids.len() < m {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..n).filter(|&j| !chosen[j]) {
            let cost: f64 = (0..n).map(|k| nearest[k].min(d.get(k, j))).sum();
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((j, cost));
            }
        }
        let (j, _) = best.expect("m <= n leaves a candidate");
        chosen[j] = true;
        medoids.push(j);
        for (k, near) in nearest.iter_mut().enumerate() {
            *near = near.min(d.get(k, j));
        }
    }
    Ok(medoids)
}

fn check_medoids(d: &DistanceMatrix, medoids: &[usize]) -> Result<()> {
    check_cluster_count(d, medoids.len())?;
    let mut seen = vec![false; d.len()];
    for &r in medoids {
        if r >= d.len() {
            return Err(Error::Parameter(format!("medoid index {r} out of range")));
        }
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::Parameter(format!("duplicate medoid index {r}")));
        }
    }
    Ok(())
}

/// SWAP phase; see [`pam_swap_traced`].
pub fn pam_swap(d: &DistanceMatrix, medoids: &[usize]) -> Result<ClusteringResult> {
    pam_swap_traced(d, medoids).map(|(result, _)| result)
}

/// SWAP phase, also returning the objective at the start and after every
/// accepted swap.
///
/// Candidate swaps are scored from each item's nearest and second-nearest
/// medoid distance, which yields the same `min` values (and therefore the same
/// sums, bit for bit) as recomputing the objective from scratch.
pub fn pam_swap_traced(
    d: &DistanceMatrix,
    medoids: &[usize],
) -> Result<(ClusteringResult, Vec<f64>)> {
    check_medoids(d, medoids)?;
    let n = d.len();
    let mut current: Vec<usize> = medoids.to_vec();
    current.sort_unstable();
    let mut best_objective = objective(d, &current);
    let mut trace = vec![best_objective];

    loop {
        let is_medoid = {
            let mut v = vec![false; n];
            current.iter().for_each(|&r| v[r] = true);
            v
        };
        // (nearest medoid, distance to it, distance to the runner-up)
        let near: Vec<(usize, f64, f64)> = (0..n)
            .map(|k| {
                let mut first = (usize::MAX, f64::INFINITY);
                let mut second = f64::INFINITY;
                for &r in &current {
                    let dk = d.get(k, r);
                    if dk < first.1 {
                        second = first.1;
                        first = (r, dk);
                    } else if dk < second {
                        second = dk;
                    }
                }
                (first.0, first.1, second)
            })
            .collect();

        let non_medoids: Vec<usize> = (0..n).filter(|&j| !is_medoid[j]).collect();
        let pairs: Vec<(usize, usize)> = current
            .iter()
            .flat_map(|&i| non_medoids.iter().map(move |&j| (i, j)))
            .collect();
        let costs: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| {
                near.iter()
                    .enumerate()
                    .map(|(k, &(nearest, dn, ds))| {
                        let without = if nearest == i { ds } else { dn };
                        without.min(d.get(k, j))
                    })
                    .sum()
            })
            .collect();

        let mut choice: Option<(usize, f64)> = None;
        for (idx, &cost) in costs.iter().enumerate() {
            if choice.is_none_or(|(_, c)| cost < c) {
                choice = Some((idx, cost));
            }
        }
        match choice {
            Some((idx, cost)) if cost < best_objective => {
                let (i, j) = pairs[idx];
                let slot = current.iter().position(|&r| r == i).unwrap();
                current[slot] = j;
                current.sort_unstable();
                best_objective = cost;
                trace.push(cost);
            }
            _ => break,
        }
    }

    let result = ClusteringResult {
        assignments: assign(d, &current),
        medoids: current,
        objective: best_objective,
    };
    Ok((result, trace))
}

/// BUILD then SWAP.
pub fn kmedoids(d: &DistanceMatrix, m: usize) -> Result<ClusteringResult> {
    let initial = pam_build(d, m)?;
    pam_swap(d, &initial)
}
