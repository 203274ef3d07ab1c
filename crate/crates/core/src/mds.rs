//! One-dimensional classical (Torgerson) multidimensional scaling, used to
//! seriate the rows and columns of the assignment matrix.
//!
//! The eigen-decomposition is a cyclic Jacobi sweep written with basic
//! arithmetic and `sqrt` only, so the coordinates are reproducible bit for
//! bit across platforms.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues and column eigenvectors of a symmetric matrix (row-major `n x n`).
///
/// Returns `(values, vectors)` where `vectors[i * n + k]` is component `i` of
/// the eigenvector for `values[k]`. Order is unspecified.
pub fn symmetric_eigen(n: usize, matrix: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    (values, v)
}

/// First principal coordinate of classical MDS.
///
/// Squares the distances, double-centres them, and scales the eigenvector of
/// the largest eigenvalue by its square root. The sign is fixed so the first
/// non-negligible loading is positive. A non-positive top eigenvalue (e.g. all
/// distances zero) yields all-zero coordinates.
pub fn classical_mds_1d(d: &DistanceMatrix) -> Vec<f64> {
    let n = d.len();
    let sq: Vec<f64> = d.entries().iter().map(|x| x * x).collect();
    let row_means: Vec<f64> = (0..n)
        .map(|i| sq[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64)
        .collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] = -0.5 * (sq[i * n + j] - row_means[i] - row_means[j] + grand);
        }
    }

    let (values, vectors) = symmetric_eigen(n, &b);
    let mut top = 0;
    for k in 1..n {
        if values[k] > values[top] {
            top = k;
        }
    }
    let lambda = values[top];
    let max_abs_entry = b.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if lambda.is_nan() || lambda <= 1e-12 * max_abs_entry.max(f64::MIN_POSITIVE) {
        return vec![0.0; n];
    }

    let mut coords: Vec<f64> = (0..n)
        .map(|i| vectors[i * n + top] * lambda.sqrt())
        .collect();
    let largest = coords.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if let Some(first) = coords.iter().find(|x| x.abs() > 1e-9 * largest) {
        if *first < 0.0 {
            coords.iter_mut().for_each(|x| *x = -*x);
        }
    }
    coords
}

/// Permutation that sorts items by their coordinate, stable on ties.
pub fn order_by_coordinate(coords: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| coords[a].total_cmp(&coords[b]));
    order
}

/// Number of positions where two label vectors differ.
pub fn hamming(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Orders label vectors by their one-dimensional MDS coordinate under Hamming
/// distance. Identical vectors always receive identical coordinates.
pub fn mds_order(vectors: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::Parameter("mds needs at least one vector".into()));
    }
    let len = vectors[0].len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != len) {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: bad.len(),
        });
    }
    let d = DistanceMatrix::from_fn(n, |i, j| hamming(&vectors[i], &vectors[j]) as f64)?;
    let mut coords = classical_mds_1d(&d);
    // Copies of a vector take the coordinate of its first occurrence, and
    // coordinate ties are broken by that first occurrence, so copies always
    // form one contiguous run.
    let first_seen: Vec<usize> = (0..n)
        .map(|i| (0..i).find(|&k| vectors[k] == vectors[i]).unwrap_or(i))
        .collect();
    for i in 0..n {
        coords[i] = coords[first_seen[i]];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        coords[a]
            .total_cmp(&coords[b])
            .then(first_seen[a].cmp(&first_seen[b]))
    });
    Ok(order)
}
