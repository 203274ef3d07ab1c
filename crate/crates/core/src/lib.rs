//! Evaluation of LLM-agent response sets through empirical CDFs of their
//! similarity to reference answers.
//!
//! The pipeline scores each question × agent-setting pair into a list of
//! cosine similarities ([`scoring`]), turns each list into an [`Ecdf`],
//! measures exact Wasserstein-1 distances between them ([`distance`]),
//! clusters them with PAM ([`pam`]), ranks the clusters by pairwise dominance
//! and seriates the resulting assignment matrix ([`analysis`], [`mds`]).

pub mod analysis;
pub mod artifacts;
pub mod dataset;
pub mod distance;
pub mod ecdf;
pub mod error;
pub mod mds;
pub mod pam;
pub mod scoring;

pub use analysis::{
    assignment_matrix, pooled_ecdf, rank_clusters, reorder, win_matrix, AssignmentMatrix,
    RankedClustering, WinMatrix,
};
pub use distance::{distance_matrix, ecdf_distance_matrix, DistanceMatrix};
pub use ecdf::{ecdf_from_samples, merge_support, signed_area, wasserstein_l1, Ecdf, SampleList};
pub use error::{Error, Result};
pub use mds::mds_order;
pub use pam::{kmedoids, pam_build, pam_swap, ClusteringResult};
pub use scoring::{
    correctness, cosine_similarity, max_similarity, score_setting, select_final_answer,
    subject_accuracy, Accuracy, EmbeddingVector, MatchOptions,
};
