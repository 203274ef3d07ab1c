//! Derived artifacts written by the pipeline stages.
//!
//! All JSON is written compactly with a trailing newline. Floats go through
//! shortest round-trip formatting, so the bytes depend only on the values.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::{AssignmentMatrix, RankedClustering};
use crate::dataset::{read_jsonl, save_similarities, write_jsonl, SIMILARITIES_FILE};
use crate::distance::DistanceMatrix;
use crate::ecdf::{Ecdf, SampleList};
use crate::error::{Error, Result};

pub const DISTANCES_FILE: &str = "distances.json";
pub const CLUSTERING_FILE: &str = "clustering.json";
pub const ORDERS_FILE: &str = "orders.json";
pub const FINAL_ANSWERS_FILE: &str = "final_answers.jsonl";
pub const REPORT_FILE: &str = "report.txt";
pub const PLOTS_DIR: &str = "plots";

/// Ranked clustering as persisted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringArtifact {
    pub m: usize,
    pub objective: f64,
    pub assignments: Vec<usize>,
    pub medoids: Vec<usize>,
    pub wins: Vec<usize>,
    pub win_matrix: Vec<Vec<u8>>,
    /// Pre-ranking label of each cluster.
    pub original_label: Vec<usize>,
    pub medoid_ecdfs: Vec<Ecdf>,
    pub centroid_ecdfs: Vec<Ecdf>,
}

impl ClusteringArtifact {
    pub fn new(
        ranked: &RankedClustering,
        medoid_ecdfs: Vec<Ecdf>,
        centroid_ecdfs: Vec<Ecdf>,
    ) -> Self {
        let c = &ranked.clustering;
        ClusteringArtifact {
            m: c.medoids.len(),
            objective: c.objective,
            assignments: c.assignments.clone(),
            medoids: c.medoids.clone(),
            wins: ranked.win_matrix.wins.clone(),
            win_matrix: ranked.win_matrix.entries.clone(),
            original_label: ranked.original_label.clone(),
            medoid_ecdfs,
            centroid_ecdfs,
        }
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == cluster)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalAnswerRecord {
    pub setting_id: usize,
    pub final_answer_index: usize,
    pub final_answer: String,
    pub correct: bool,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string(value).expect("artifacts serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}

pub fn read_final_answers(path: &Path) -> Result<Vec<FinalAnswerRecord>> {
    Ok(read_jsonl(path)?.into_iter().map(|(_, r)| r).collect())
}

pub fn write_final_answers(path: &Path, rows: &[FinalAnswerRecord]) -> Result<()> {
    write_jsonl(path, rows)
}

/// Everything the score and cluster stages produce.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisArtifacts {
    pub similarities: Vec<SampleList>,
    pub final_answers: Option<Vec<FinalAnswerRecord>>,
    pub distances: DistanceMatrix,
    pub clustering: ClusteringArtifact,
    pub orders: AssignmentMatrix,
}

/// Writes every artifact into `dir` under its standard file name.
pub fn save_artifacts(artifacts: &AnalysisArtifacts, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_similarities(&dir.join(SIMILARITIES_FILE), &artifacts.similarities)?;
    if let Some(rows) = &artifacts.final_answers {
        write_final_answers(&dir.join(FINAL_ANSWERS_FILE), rows)?;
    }
    write_json(&dir.join(DISTANCES_FILE), &artifacts.distances)?;
    write_json(&dir.join(CLUSTERING_FILE), &artifacts.clustering)?;
    write_json(&dir.join(ORDERS_FILE), &artifacts.orders)
}
