//! The four pipeline stages. Each stage reads what the previous one wrote into
//! the output directory, so stages can be rerun independently.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ecdfclust_core::artifacts::{
    read_final_answers, read_json, write_final_answers, write_json, ClusteringArtifact,
    FinalAnswerRecord, CLUSTERING_FILE, DISTANCES_FILE, FINAL_ANSWERS_FILE, ORDERS_FILE, PLOTS_DIR,
    REPORT_FILE,
};
use ecdfclust_core::dataset::{
    load_corpus, load_similarities, save_similarities, Corpus, CorpusPaths, SIMILARITIES_FILE,
};
use ecdfclust_core::{
    assignment_matrix, correctness, ecdf_distance_matrix, kmedoids, pooled_ecdf, rank_clusters,
    reorder, score_setting, select_final_answer, Accuracy, AssignmentMatrix, Ecdf, Error,
    SampleList,
};

use crate::config::PipelineConfig;
use crate::error::{PipelineError, Result};
use crate::plot::{assignment_heatmap, ecdf_panel, Frame};
use crate::report::render_report;

fn io(path: &Path, source: std::io::Error) -> PipelineError {
    PipelineError::Core(Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| io(path, e))
}

fn remove_if_present(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(io(path, e)),
        _ => Ok(()),
    }
}

pub fn load_input(config: &PipelineConfig) -> Result<Corpus> {
    Ok(load_corpus(&CorpusPaths::in_dir(&config.input_dir))?)
}

/// Where precomputed similarities come from, if anywhere: the explicit flag
/// first, then a similarities file inside the input directory.
fn similarity_source(config: &PipelineConfig) -> Option<PathBuf> {
    config.similarities.clone().or_else(|| {
        let p = config.input_dir.join(SIMILARITIES_FILE);
        p.is_file().then_some(p)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreOutput {
    pub similarities: Vec<SampleList>,
    pub final_answers: Option<Vec<FinalAnswerRecord>>,
}

pub fn final_answers(corpus: &Corpus, config: &PipelineConfig) -> Result<Vec<FinalAnswerRecord>> {
    corpus
        .records
        .iter()
        .map(|r| {
            let embeddings = r.embeddings.as_ref().ok_or_else(|| {
                PipelineError::Input(format!("setting {} has no embeddings", r.setting_id))
            })?;
            let idx = select_final_answer(embeddings)?;
            let answer = r.candidates[idx].clone();
            let refs = &corpus.question_of(r.setting_id).references;
            Ok(FinalAnswerRecord {
                setting_id: r.setting_id,
                final_answer_index: idx,
                correct: correctness(&answer, refs, config.match_options),
                final_answer: answer,
            })
        })
        .collect()
}

pub fn score(config: &PipelineConfig) -> Result<ScoreOutput> {
    config.validate()?;
    let corpus = load_input(config)?;
    ensure_dir(&config.out_dir)?;

    let similarities = if let Some(path) = similarity_source(config) {
        load_similarities(&path, &corpus)?
    } else if corpus.has_embeddings() {
        corpus
            .records
            .iter()
            .map(|r| {
                score_setting(
                    r.embeddings.as_deref().unwrap_or_default(),
                    r.reference_embeddings.as_deref().unwrap_or_default(),
                )
                .map_err(|e| PipelineError::Input(format!("setting {}: {e}", r.setting_id)))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        return Err(PipelineError::Input(format!(
            "no embeddings or similarities in {}: run the corpus builder to produce {} \
             or pass --similarities <file>",
            config.input_dir.display(),
            ecdfclust_core::dataset::EMBEDDINGS_FILE
        )));
    };
    save_similarities(&config.out(SIMILARITIES_FILE), &similarities)?;

    let final_path = config.out(FINAL_ANSWERS_FILE);
    let final_answers = if corpus.has_embeddings() {
        let rows = final_answers(&corpus, config)?;
        write_final_answers(&final_path, &rows)?;
        Some(rows)
    } else {
        remove_if_present(&final_path)?;
        None
    };
    Ok(ScoreOutput {
        similarities,
        final_answers,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOutput {
    pub clustering: ClusteringArtifact,
    pub orders: AssignmentMatrix,
}

pub fn cluster(config: &PipelineConfig) -> Result<ClusterOutput> {
    config.validate()?;
    let corpus = load_input(config)?;
    let similarities = load_similarities(&config.out(SIMILARITIES_FILE), &corpus)?;
    let ecdfs: Vec<Ecdf> = similarities.iter().map(Ecdf::from_samples).collect();

    let distances = ecdf_distance_matrix(&ecdfs)?;
    let result = kmedoids(&distances, config.clusters)?;
    let medoid_samples: Vec<SampleList> = result
        .medoids
        .iter()
        .map(|&i| similarities[i].clone())
        .collect();
    let ranked = rank_clusters(&result, &medoid_samples)?;

    let medoid_ecdfs = ranked
        .clustering
        .medoids
        .iter()
        .map(|&i| ecdfs[i].clone())
        .collect();
    let centroid_ecdfs = ranked
        .clustering
        .members()
        .into_iter()
        .map(|ids| {
            let members: Vec<&SampleList> = ids.into_iter().map(|i| &similarities[i]).collect();
            pooled_ecdf(&members)
        })
        .collect::<ecdfclust_core::Result<Vec<_>>>()?;
    let clustering = ClusteringArtifact::new(&ranked, medoid_ecdfs, centroid_ecdfs);

    let orders = reorder(&assignment_matrix(
        &clustering.assignments,
        corpus.n_questions(),
        corpus.n_agents(),
    )?)?;

    write_json(&config.out(DISTANCES_FILE), &distances)?;
    write_json(&config.out(CLUSTERING_FILE), &clustering)?;
    write_json(&config.out(ORDERS_FILE), &orders)?;
    Ok(ClusterOutput { clustering, orders })
}

fn read_final_answers_if_present(
    config: &PipelineConfig,
) -> Result<Option<Vec<FinalAnswerRecord>>> {
    let path = config.out(FINAL_ANSWERS_FILE);
    if path.is_file() {
        Ok(Some(read_final_answers(&path)?))
    } else {
        Ok(None)
    }
}

/// Settings grouped by (subject, agent): the unit over which accuracy is
/// reported. Keys are (subject, agent_id); values are setting ids.
pub fn accuracy_groups(corpus: &Corpus) -> BTreeMap<(String, usize), Vec<usize>> {
    let mut groups: BTreeMap<(String, usize), Vec<usize>> = BTreeMap::new();
    for r in &corpus.records {
        let subject = corpus.question_of(r.setting_id).subject.clone();
        groups
            .entry((subject, r.agent_id))
            .or_default()
            .push(r.setting_id);
    }
    groups
}

/// Accuracy of every (subject, agent) group.
pub fn group_accuracies(
    corpus: &Corpus,
    answers: &[FinalAnswerRecord],
) -> Result<BTreeMap<(String, usize), Accuracy>> {
    let correct: BTreeMap<usize, bool> =
        answers.iter().map(|a| (a.setting_id, a.correct)).collect();
    let flags: BTreeMap<(String, usize), Vec<bool>> = accuracy_groups(corpus)
        .into_iter()
        .map(|(k, ids)| {
            let v = ids
                .iter()
                .map(|id| {
                    correct.get(id).copied().ok_or_else(|| {
                        PipelineError::Input(format!("no final answer for setting {id}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((k, v))
        })
        .collect::<Result<_>>()?;
    Ok(ecdfclust_core::subject_accuracy(&flags)?)
}

pub fn row_labels(corpus: &Corpus) -> Vec<String> {
    corpus
        .questions
        .iter()
        .map(|q| q.question_id.clone())
        .collect()
}

pub fn column_labels(corpus: &Corpus) -> Vec<String> {
    corpus
        .agents
        .iter()
        .map(|a| format!("a{} T={}", a.agent_id, a.temperature))
        .collect()
}

/// Writes the per-cluster panels, the heatmap and, when final answers exist,
/// one panel per accuracy value. Returns the written paths in order.
pub fn plot(config: &PipelineConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let corpus = load_input(config)?;
    let similarities = load_similarities(&config.out(SIMILARITIES_FILE), &corpus)?;
    let clustering: ClusteringArtifact = read_json(&config.out(CLUSTERING_FILE))?;
    let orders: AssignmentMatrix = read_json(&config.out(ORDERS_FILE))?;
    if clustering.assignments.len() != similarities.len() {
        return Err(PipelineError::Input(format!(
            "{CLUSTERING_FILE} covers {} settings but there are {}; rerun cluster",
            clustering.assignments.len(),
            similarities.len()
        )));
    }
    let answers = read_final_answers_if_present(config)?;

    let dir = config.out(PLOTS_DIR);
    ensure_dir(&dir)?;
    for entry in fs::read_dir(&dir).map_err(|e| io(&dir, e))? {
        let path = entry.map_err(|e| io(&dir, e))?.path();
        if path.extension().is_some_and(|x| x == "svg") {
            remove_if_present(&path)?;
        }
    }

    let ecdfs: Vec<Ecdf> = similarities.iter().map(Ecdf::from_samples).collect();
    let frame = Frame::for_ecdfs(config.plot_width, config.plot_height, &ecdfs);
    let mut written = Vec::new();
    let mut emit = |name: String, svg: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, svg).map_err(|e| io(&path, e))?;
        written.push(path);
        Ok(())
    };

    for k in 0..clustering.m {
        let members: Vec<&Ecdf> = clustering
            .members(k)
            .into_iter()
            .map(|i| &ecdfs[i])
            .collect();
        if members.is_empty() {
            return Err(PipelineError::Input(format!("cluster {k} has no members")));
        }
        let title = format!(
            "cluster {k}: {} settings, {} wins",
            members.len(),
            clustering.wins[k]
        );
        let svg = ecdf_panel(
            &title,
            &members,
            clustering.medoid_ecdfs.get(k),
            clustering.centroid_ecdfs.get(k),
            &frame,
        );
        emit(format!("cluster_{k:02}.svg"), svg)?;
    }

    emit(
        "assignments.svg".into(),
        assignment_heatmap(
            &orders,
            clustering.m,
            &row_labels(&corpus),
            &column_labels(&corpus),
        ),
    )?;

    if let Some(answers) = answers {
        let accuracies = group_accuracies(&corpus, &answers)?;
        let groups = accuracy_groups(&corpus);
        let mut by_value: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (key, acc) in &accuracies {
            by_value
                .entry(reduced(acc))
                .or_default()
                .extend(groups[key].iter().copied());
        }
        for ((c, t), mut ids) in by_value {
            ids.sort_unstable();
            let members: Vec<&Ecdf> = ids.iter().map(|&i| &ecdfs[i]).collect();
            let pooled: Vec<&SampleList> = ids.iter().map(|&i| &similarities[i]).collect();
            let centroid = pooled_ecdf(&pooled)?;
            let title = format!("accuracy {c}/{t}: {} settings", ids.len());
            let svg = ecdf_panel(&title, &members, None, Some(&centroid), &frame);
            emit(format!("accuracy_{c}_of_{t}.svg"), svg)?;
        }
    }
    Ok(written)
}

/// Accuracy as a fraction in lowest terms.
pub fn reduced(acc: &Accuracy) -> (usize, usize) {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(acc.correct, acc.total).max(1);
    (acc.correct / g, acc.total / g)
}

pub fn report(config: &PipelineConfig) -> Result<String> {
    config.validate()?;
    let corpus = load_input(config)?;
    let clustering: ClusteringArtifact = read_json(&config.out(CLUSTERING_FILE))?;
    if clustering.assignments.len() != corpus.n_settings() {
        return Err(PipelineError::Input(format!(
            "{CLUSTERING_FILE} covers {} settings but the corpus has {}; rerun cluster",
            clustering.assignments.len(),
            corpus.n_settings()
        )));
    }
    let answers = read_final_answers_if_present(config)?;
    let accuracies = match &answers {
        Some(a) => Some(group_accuracies(&corpus, a)?),
        None => None,
    };
    let text = render_report(
        &corpus,
        &clustering,
        answers.as_deref(),
        accuracies.as_ref(),
    );
    let path = config.out(REPORT_FILE);
    fs::write(&path, &text).map_err(|e| io(&path, e))?;
    Ok(text)
}

pub fn run_all(config: &PipelineConfig) -> Result<()> {
    score(config)?;
    cluster(config)?;
    plot(config)?;
    report(config)?;
    Ok(())
}
