use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ecdf::{wasserstein_l1, Ecdf, SampleList};
use crate::error::{Error, Result};

/// Dense symmetric matrix of pairwise distances, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistanceRepr", into = "DistanceRepr")]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistanceRepr {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a row-major `n x n` matrix: finite, non-negative, exactly
    /// symmetric, zero diagonal.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DistanceMatrix(
                "matrix must have at least one item".into(),
            ));
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::DistanceMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::DistanceMatrix(format!(
                        "entry ({i}, {j}) = {v} is not a finite non-negative value"
                    )));
                }
                if v != entries[j * n + i] {
                    return Err(Error::DistanceMatrix(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    /// Builds a matrix from a distance function evaluated on `i < j` only.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        DistanceMatrix::new(n, entries)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        DistanceMatrix::new(n, entries)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Same matrix with items renumbered so that new item `k` is old item `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: perm.len(),
            });
        }
        DistanceMatrix::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }
}

impl From<DistanceMatrix> for DistanceRepr {
    fn from(d: DistanceMatrix) -> Self {
        DistanceRepr {
            n: d.n,
            entries: d.entries,
        }
    }
}

impl TryFrom<DistanceRepr> for DistanceMatrix {
    type Error = Error;

    fn try_from(r: DistanceRepr) -> Result<Self> {
        DistanceMatrix::new(r.n, r.entries)
    }
}

/// Pairwise Wasserstein-1 distances between already-built ECDFs.
///
/// Every entry is computed on its own, so the result does not depend on how
/// rayon schedules the rows.
pub fn ecdf_distance_matrix(ecdfs: &[Ecdf]) -> Result<DistanceMatrix> {
    let n = ecdfs.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| wasserstein_l1(&ecdfs[i], &ecdfs[j]))
                .collect()
        })
        .collect();
    DistanceMatrix::from_fn(n, |i, j| upper[i][j - i - 1])
}

/// Pairwise Wasserstein-1 distances between the ECDFs of each sample list.
pub fn distance_matrix<S: AsRef<[f64]>>(settings: &[S]) -> Result<DistanceMatrix> {
    let ecdfs = settings
        .iter()
        .enumerate()
        .map(|(index, s)| match SampleList::new(s.as_ref().to_vec()) {
            Ok(list) => Ok(Ecdf::from_samples(&list)),
            Err(Error::EmptySamples) => Err(Error::EmptySamplesAt { index }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    ecdf_distance_matrix(&ecdfs)
}
