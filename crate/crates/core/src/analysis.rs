//! Post-clustering analysis: dominance-based ranking of clusters, pooled
//! centroid ECDFs, and the question × agent-setting assignment matrix.

use serde::{Deserialize, Serialize};

use crate::ecdf::{signed_area, Ecdf, SampleList};
use crate::error::{Error, Result};
use crate::mds::mds_order;
use crate::pam::ClusteringResult;

/// Pairwise dominance between cluster medoids.
///
/// `entries[i][j] == 1` when the medoid ECDF of cluster `i` has strictly
/// negative signed area against that of cluster `j`, i.e. `i` puts its mass on
/// higher values on balance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinMatrix {
    pub entries: Vec<Vec<u8>>,
    pub wins: Vec<usize>,
}

impl WinMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn win_matrix(medoid_samples: &[SampleList]) -> Result<WinMatrix> {
    if medoid_samples.is_empty() {
        return Err(Error::Parameter(
            "win matrix needs at least one medoid".into(),
        ));
    }
    let ecdfs: Vec<Ecdf> = medoid_samples.iter().map(Ecdf::from_samples).collect();
    Ok(win_matrix_of(&ecdfs))
}

pub fn win_matrix_of(ecdfs: &[Ecdf]) -> WinMatrix {
    let entries: Vec<Vec<u8>> = ecdfs
        .iter()
        .map(|a| {
            ecdfs
                .iter()
                .map(|b| u8::from(signed_area(a, b) < 0.0))
                .collect()
        })
        .collect();
    let wins = entries
        .iter()
        .map(|row| row.iter().map(|&w| w as usize).sum())
        .collect();
    WinMatrix { entries, wins }
}

/// A clustering relabelled so that cluster 0 has the most wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedClustering {
    pub clustering: ClusteringResult,
    /// Win matrix in the new label order.
    pub win_matrix: WinMatrix,
    /// `original_label[k]` is the pre-ranking label of new cluster `k`.
    pub original_label: Vec<usize>,
}

/// Relabels clusters by descending win count; equal counts keep their
/// original relative order. The partition is unchanged.
pub fn rank_clusters(
    result: &ClusteringResult,
    medoid_samples: &[SampleList],
) -> Result<RankedClustering> {
    if medoid_samples.len() != result.medoids.len() {
        return Err(Error::LengthMismatch {
            expected: result.medoids.len(),
            actual: medoid_samples.len(),
        });
    }
    let w = win_matrix(medoid_samples)?;
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w.wins[b].cmp(&w.wins[a]));

    let mut new_label = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_label[old] = new;
    }
    let clustering = ClusteringResult {
        assignments: result.assignments.iter().map(|&c| new_label[c]).collect(),
        medoids: order.iter().map(|&old| result.medoids[old]).collect(),
        objective: result.objective,
    };
    let win_matrix = WinMatrix {
        entries: order
            .iter()
            .map(|&i| order.iter().map(|&j| w.entries[i][j]).collect())
            .collect(),
        wins: order.iter().map(|&i| w.wins[i]).collect(),
    };
    Ok(RankedClustering {
        clustering,
        win_matrix,
        original_label: order,
    })
}

/// ECDF of all member samples concatenated.
pub fn pooled_ecdf(member_samples: &[&SampleList]) -> Result<Ecdf> {
    if member_samples.is_empty() {
        return Err(Error::EmptyGroup("cluster has no members".into()));
    }
    Ok(Ecdf::from_samples(&SampleList::concat(
        member_samples.iter().copied(),
    )?))
}

/// Cluster labels laid out with questions as rows and agent settings as
/// columns, plus display orders for both axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentMatrix {
    pub n_questions: usize,
    pub n_agents: usize,
    /// Row-major; `entries[i][j]` is the cluster of setting `n_agents * i + j`.
    pub entries: Vec<Vec<usize>>,
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
}

impl AssignmentMatrix {
    pub fn column(&self, j: usize) -> Vec<usize> {
        self.entries.iter().map(|row| row[j]).collect()
    }

    /// Entries with rows and columns permuted into display order.
    pub fn ordered(&self) -> Vec<Vec<usize>> {
        self.row_order
            .iter()
            .map(|&i| self.col_order.iter().map(|&j| self.entries[i][j]).collect())
            .collect()
    }
}

pub fn assignment_matrix(
    assignments: &[usize],
    n_questions: usize,
    n_agents: usize,
) -> Result<AssignmentMatrix> {
    if n_questions == 0 || n_agents == 0 {
        return Err(Error::Parameter(
            "assignment matrix needs at least one question and one agent setting".into(),
        ));
    }
    if assignments.len() != n_questions * n_agents {
        return Err(Error::LengthMismatch {
            expected: n_questions * n_agents,
            actual: assignments.len(),
        });
    }
    Ok(AssignmentMatrix {
        n_questions,
        n_agents,
        entries: assignments
            .chunks(n_agents)
            .map(<[usize]>::to_vec)
            .collect(),
        row_order: (0..n_questions).collect(),
        col_order: (0..n_agents).collect(),
    })
}

/// Sets both display orders from one-dimensional MDS of the rows and columns.
pub fn reorder(c: &AssignmentMatrix) -> Result<AssignmentMatrix> {
    let columns: Vec<Vec<usize>> = (0..c.n_agents).map(|j| c.column(j)).collect();
    Ok(AssignmentMatrix {
        row_order: mds_order(&c.entries)?,
        col_order: mds_order(&columns)?,
        ..c.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> SampleList {
        SampleList::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_point_masses_win_matrix() {
        let w = win_matrix(&[s(&[0.9]), s(&[0.1])]).unwrap();
        assert_eq!(w.entries, vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(w.wins, vec![1, 0]);
    }

    #[test]
    fn identical_medoids_never_win() {
        let w = win_matrix(&[s(&[0.4, 0.6]), s(&[0.6, 0.4])]).unwrap();
        assert_eq!(w.wins, vec![0, 0]);
        assert!(w.entries.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn rank_by_descending_wins() {
        // medoid samples chosen so wins are [0, 2, 1]
        let result = ClusteringResult {
            assignments: vec![0, 1, 2, 1],
            medoids: vec![0, 1, 2],
            objective: 0.0,
        };
        let samples = [s(&[0.1]), s(&[0.9]), s(&[0.5])];
        let ranked = rank_clusters(&result, &samples).unwrap();
        assert_eq!(ranked.original_label, vec![1, 2, 0]);
        assert_eq!(ranked.clustering.medoids, vec![1, 2, 0]);
        assert_eq!(ranked.clustering.assignments, vec![2, 0, 1, 0]);
        assert_eq!(ranked.win_matrix.wins, vec![2, 1, 0]);
    }

    #[test]
    fn equal_wins_keep_order() {
        let result = ClusteringResult {
            assignments: vec![1, 0],
            medoids: vec![0, 1],
            objective: 0.0,
        };
        let ranked = rank_clusters(&result, &[s(&[0.5]), s(&[0.5])]).unwrap();
        assert_eq!(ranked.clustering, result);
    }

    #[test]
    fn pooled_examples() {
        let a = s(&[0.0]);
        let b = s(&[1.0]);
        let p = pooled_ecdf(&[&a, &b]).unwrap();
        assert_eq!(p.support(), &[0.0, 1.0]);
        assert_eq!(p.cumulative(), vec![0.5, 1.0]);
        assert_eq!(pooled_ecdf(&[&b, &a]).unwrap(), p);
        assert_eq!(pooled_ecdf(&[&a]).unwrap(), Ecdf::from_samples(&a));
        assert!(pooled_ecdf(&[]).is_err());
    }

    #[test]
    fn assignment_matrix_is_row_major() {
        let c = assignment_matrix(&[0, 1, 2, 3], 2, 2).unwrap();
        assert_eq!(c.entries, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.row_order, vec![0, 1]);
        let one = assignment_matrix(&[4], 1, 1).unwrap();
        assert_eq!(one.entries, vec![vec![4]]);
        assert!(matches!(
            assignment_matrix(&[0, 1, 2], 2, 2),
            Err(Error::LengthMismatch {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn reorder_one_by_one() {
        let c = reorder(&assignment_matrix(&[0], 1, 1).unwrap()).unwrap();
        assert_eq!(c.row_order, vec![0]);
        assert_eq!(c.col_order, vec![0]);
    }
}
