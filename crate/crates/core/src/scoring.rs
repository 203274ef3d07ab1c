//! Embedding-based scoring of candidate answers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::normalize_answer;
use crate::ecdf::SampleList;
use crate::error::{Error, Result};

/// A finite, non-zero embedding vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Embedding("embedding has no components".into()));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::Embedding(
                "embedding has a non-finite component".into(),
            ));
        }
        if components.iter().all(|&x| x == 0.0) {
            return Err(Error::Embedding("zero embedding vector".into()));
        }
        Ok(EmbeddingVector(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for EmbeddingVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        EmbeddingVector::new(v)
    }
}

impl From<EmbeddingVector> for Vec<f64> {
    fn from(v: EmbeddingVector) -> Self {
        v.0
    }
}

fn check_dims(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::Embedding(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(())
}

/// `dot(u, v) / (|u| |v|)`, clamped to `[-1, 1]` against rounding overshoot.
pub fn cosine_similarity(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<f64> {
    check_dims(u, v)?;
    let (mut dot, mut uu, mut vv) = (0.0, 0.0, 0.0);
    for (a, b) in u.0.iter().zip(&v.0) {
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    // sqrt(x * x) == x exactly, so identical vectors score exactly 1.
    Ok((dot / (uu * vv).sqrt()).clamp(-1.0, 1.0))
}

pub fn max_similarity(candidate: &EmbeddingVector, references: &[EmbeddingVector]) -> Result<f64> {
    if references.is_empty() {
        return Err(Error::Embedding("no reference embeddings".into()));
    }
    references.iter().try_fold(f64::NEG_INFINITY, |best, r| {
        Ok(best.max(cosine_similarity(candidate, r)?))
    })
}

/// Best-reference similarity of each candidate, in candidate order.
pub fn score_setting(
    candidates: &[EmbeddingVector],
    references: &[EmbeddingVector],
) -> Result<SampleList> {
    let values = candidates
        .iter()
        .map(|c| max_similarity(c, references))
        .collect::<Result<Vec<_>>>()?;
    SampleList::new(values).map_err(|_| Error::Embedding("no candidate embeddings".into()))
}

/// Index of the candidate closest (Euclidean) to the mean candidate
/// embedding; ties go to the lowest index.
pub fn select_final_answer(candidates: &[EmbeddingVector]) -> Result<usize> {
    let first = candidates
        .first()
        .ok_or_else(|| Error::Embedding("no candidate embeddings".into()))?;
    let dim = first.dim();
    for c in candidates {
        check_dims(first, c)?;
    }
    let mut mean = vec![0.0; dim];
    for c in candidates {
        for (m, x) in mean.iter_mut().zip(&c.0) {
            *m += x;
        }
    }
    let count = candidates.len() as f64;
    mean.iter_mut().for_each(|m| *m /= count);

    let mut best = (0, f64::INFINITY);
    for (idx, c) in candidates.iter().enumerate() {
        let dist =
            c.0.iter()
                .zip(&mean)
                .map(|(x, m)| (x - m) * (x - m))
                .sum::<f64>()
                .sqrt();
        if dist < best.1 {
            best = (idx, dist);
        }
    }
    Ok(best.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchOptions {
    pub case_insensitive: bool,
}

/// Exact match of the normalized final answer against any normalized reference.
pub fn correctness(final_answer: &str, references: &[String], options: MatchOptions) -> bool {
    let fold = |s: &str| {
        let s = normalize_answer(s);
        if options.case_insensitive {
            s.to_lowercase()
        } else {
            s
        }
    };
    let answer = fold(final_answer);
    references.iter().any(|r| fold(r) == answer)
}

/// Fraction of correct flags in one group, kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
}

impl Accuracy {
    pub fn value(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

pub fn subject_accuracy<K: Ord + Clone + std::fmt::Debug>(
    groups: &BTreeMap<K, Vec<bool>>,
) -> Result<BTreeMap<K, Accuracy>> {
    groups
        .iter()
        .map(|(k, flags)| {
            if flags.is_empty() {
                return Err(Error::EmptyGroup(format!("subject {k:?} has no questions")));
            }
            Ok((
                k.clone(),
                Accuracy {
                    correct: flags.iter().filter(|&&b| b).count(),
                    total: flags.len(),
                },
            ))
        })
        .collect()
}
