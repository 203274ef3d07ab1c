//! Corpus records and their line-delimited JSON files.
//!
//! A corpus directory holds:
//!
//! * `questions.jsonl`: `{question_id, subject, question, references[]}`
//! * `agents.jsonl`: `{agent_id, persona_text, temperature}`
//! * `responses.jsonl`: `{setting_id, question_id, agent_id, candidates[], prompt?}`
//! * `embeddings.jsonl` (optional): `{setting_id, candidate_embeddings[][], reference_embeddings[][]}`
//! * `similarities.jsonl` (optional): `{setting_id, similarities[]}`
//!
//! Settings are numbered `setting_id = n_agents * question_index + agent_id`,
//! where `question_index` is the position of the question in its file.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ecdf::SampleList;
use crate::error::{Error, Result};
use crate::scoring::EmbeddingVector;

pub const QUESTIONS_FILE: &str = "questions.jsonl";
pub const AGENTS_FILE: &str = "agents.jsonl";
pub const RESPONSES_FILE: &str = "responses.jsonl";
pub const EMBEDDINGS_FILE: &str = "embeddings.jsonl";
pub const SIMILARITIES_FILE: &str = "similarities.jsonl";

const ANSWER_SUFFIXES: [char; 5] = ['.', ',', ';', ':', '\\'];

/// Strips trailing punctuation suffixes and whitespace until none remain.
pub fn normalize_answer(text: &str) -> String {
    text.trim_end_matches(|c: char| c.is_whitespace() || ANSWER_SUFFIXES.contains(&c))
        .to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaItem {
    pub question_id: String,
    pub subject: String,
    pub question: String,
    pub references: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSetting {
    pub agent_id: usize,
    pub persona_text: String,
    pub temperature: f64,
}

/// One line of the responses file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub setting_id: usize,
    pub question_id: String,
    pub agent_id: usize,
    pub candidates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub setting_id: usize,
    pub candidate_embeddings: Vec<Vec<f64>>,
    pub reference_embeddings: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRecord {
    pub setting_id: usize,
    pub similarities: SampleList,
}

/// A question × agent-setting pair with its candidate answers.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingRecord {
    pub setting_id: usize,
    pub question_id: String,
    pub agent_id: usize,
    pub candidates: Vec<String>,
    pub prompt: Option<String>,
    pub embeddings: Option<Vec<EmbeddingVector>>,
    pub reference_embeddings: Option<Vec<EmbeddingVector>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub questions: Vec<QaItem>,
    /// Sorted by `agent_id`, which runs `0..n_agents`.
    pub agents: Vec<AgentSetting>,
    /// Sorted by `setting_id`, which runs `0..n_questions * n_agents`.
    pub records: Vec<SettingRecord>,
}

impl Corpus {
    pub fn n_questions(&self) -> usize {
        self.questions.len()
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn n_settings(&self) -> usize {
        self.records.len()
    }

    pub fn question_of(&self, setting_id: usize) -> &QaItem {
        &self.questions[setting_id / self.n_agents()]
    }

    pub fn agent_of(&self, setting_id: usize) -> &AgentSetting {
        &self.agents[setting_id % self.n_agents()]
    }

    pub fn has_embeddings(&self) -> bool {
        self.records.iter().all(|r| r.embeddings.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub questions: PathBuf,
    pub agents: PathBuf,
    pub responses: PathBuf,
    pub embeddings: Option<PathBuf>,
}

impl CorpusPaths {
    /// Standard file names inside `dir`; the embeddings file is picked up
    /// only if it exists.
    pub fn in_dir(dir: &Path) -> Self {
        let embeddings = dir.join(EMBEDDINGS_FILE);
        CorpusPaths {
            questions: dir.join(QUESTIONS_FILE),
            agents: dir.join(AGENTS_FILE),
            responses: dir.join(RESPONSES_FILE),
            embeddings: embeddings.is_file().then_some(embeddings),
        }
    }
}

/// Parses a JSON-lines file, returning each record with its 1-based line
/// number. Blank lines are skipped.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push((idx + 1, value));
    }
    Ok(out)
}

pub fn write_jsonl<'a, T, I>(path: &Path, items: I) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        let line = serde_json::to_string(item).expect("records serialize");
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn validation(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn load_questions(path: &Path) -> Result<Vec<QaItem>> {
    let rows: Vec<(usize, QaItem)> = read_jsonl(path)?;
    let mut seen = HashMap::new();
    let mut questions = Vec::with_capacity(rows.len());
    for (line, q) in rows {
        if seen.insert(q.question_id.clone(), line).is_some() {
            return Err(Error::DuplicateId {
                path: path.to_path_buf(),
                line,
                kind: "question",
                id: q.question_id,
            });
        }
        if q.references.is_empty() {
            return Err(validation(
                path,
                line,
                format!("question {} has no reference answers", q.question_id),
            ));
        }
        questions.push(q);
    }
    if questions.is_empty() {
        return Err(validation(path, 0, "no questions"));
    }
    Ok(questions)
}

fn load_agents(path: &Path) -> Result<Vec<AgentSetting>> {
    let rows: Vec<(usize, AgentSetting)> = read_jsonl(path)?;
    let mut by_id: BTreeMap<usize, AgentSetting> = BTreeMap::new();
    for (line, a) in rows {
        if !(a.temperature >= 0.0 && a.temperature.is_finite()) {
            return Err(validation(
                path,
                line,
                format!(
                    "agent {} has invalid temperature {}",
                    a.agent_id, a.temperature
                ),
            ));
        }
        if by_id.contains_key(&a.agent_id) {
            return Err(Error::DuplicateId {
                path: path.to_path_buf(),
                line,
                kind: "agent",
                id: a.agent_id.to_string(),
            });
        }
        by_id.insert(a.agent_id, a);
    }
    if by_id.is_empty() {
        return Err(validation(path, 0, "no agent settings"));
    }
    let n = by_id.len();
    if let Some(&bad) = by_id.keys().find(|&&id| id >= n) {
        return Err(validation(
            path,
            0,
            format!("agent ids must be 0..{n}, found {bad}"),
        ));
    }
    Ok(by_id.into_values().collect())
}

fn attach_embeddings(
    path: &Path,
    records: &mut [SettingRecord],
    corpus_questions: &[QaItem],
    n_agents: usize,
) -> Result<()> {
    let rows: Vec<(usize, EmbeddingRecord)> = read_jsonl(path)?;
    let mut dim: Option<usize> = None;
    for (line, row) in rows {
        let Some(record) = records.get_mut(row.setting_id) else {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "setting",
                id: row.setting_id.to_string(),
            });
        };
        if record.embeddings.is_some() {
            return Err(Error::DuplicateId {
                path: path.to_path_buf(),
                line,
                kind: "setting",
                id: row.setting_id.to_string(),
            });
        }
        if row.candidate_embeddings.len() != record.candidates.len() {
            return Err(validation(
                path,
                line,
                format!(
                    "setting {} has {} candidates but {} candidate embeddings",
                    row.setting_id,
                    record.candidates.len(),
                    row.candidate_embeddings.len()
                ),
            ));
        }
        if row.reference_embeddings.is_empty() {
            return Err(validation(
                path,
                line,
                format!("setting {} has no reference embeddings", row.setting_id),
            ));
        }
        let n_refs = corpus_questions[row.setting_id / n_agents].references.len();
        if row.reference_embeddings.len() != n_refs {
            return Err(validation(
                path,
                line,
                format!(
                    "setting {} has {} references but {} reference embeddings",
                    row.setting_id,
                    n_refs,
                    row.reference_embeddings.len()
                ),
            ));
        }
        let mut convert = |vectors: Vec<Vec<f64>>| -> Result<Vec<EmbeddingVector>> {
            vectors
                .into_iter()
                .map(|v| {
                    let len = v.len();
                    if *dim.get_or_insert(len) != len {
                        return Err(validation(
                            path,
                            line,
                            format!(
                                "setting {}: embedding dimension {len} differs from {}",
                                row.setting_id,
                                dim.unwrap()
                            ),
                        ));
                    }
                    EmbeddingVector::new(v).map_err(|e| {
                        validation(path, line, format!("setting {}: {e}", row.setting_id))
                    })
                })
                .collect()
        };
        let candidates = convert(row.candidate_embeddings)?;
        let references = convert(row.reference_embeddings)?;
        record.embeddings = Some(candidates);
        record.reference_embeddings = Some(references);
    }
    if let Some(missing) = records.iter().find(|r| r.embeddings.is_none()) {
        return Err(validation(
            path,
            0,
            format!("missing embeddings for setting {}", missing.setting_id),
        ));
    }
    Ok(())
}

/// Loads and cross-checks a corpus.
pub fn load_corpus(paths: &CorpusPaths) -> Result<Corpus> {
    let questions = load_questions(&paths.questions)?;
    let agents = load_agents(&paths.agents)?;
    let n_agents = agents.len();
    let question_index: HashMap<&str, usize> = questions
        .iter()
        .enumerate()
        .map(|(i, q)| (q.question_id.as_str(), i))
        .collect();

    let path = paths.responses.as_path();
    let rows: Vec<(usize, ResponseRecord)> = read_jsonl(path)?;
    let n_settings = questions.len() * n_agents;
    let mut slots: Vec<Option<SettingRecord>> = vec![None; n_settings];
    for (line, r) in rows {
        let Some(&qi) = question_index.get(r.question_id.as_str()) else {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "question",
                id: r.question_id,
            });
        };
        if r.agent_id >= n_agents {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "agent",
                id: r.agent_id.to_string(),
            });
        }
        if r.candidates.is_empty() {
            return Err(Error::EmptyCandidates {
                path: path.to_path_buf(),
                line,
                setting_id: r.setting_id,
            });
        }
        let expected = n_agents * qi + r.agent_id;
        if r.setting_id != expected {
            return Err(validation(
                path,
                line,
                format!(
                    "setting_id {} does not match question {} / agent {} (expected {expected})",
                    r.setting_id, r.question_id, r.agent_id
                ),
            ));
        }
        if slots[expected].is_some() {
            return Err(Error::DuplicateId {
                path: path.to_path_buf(),
                line,
                kind: "setting",
                id: r.setting_id.to_string(),
            });
        }
        slots[expected] = Some(SettingRecord {
            setting_id: r.setting_id,
            question_id: r.question_id,
            agent_id: r.agent_id,
            candidates: r.candidates,
            prompt: r.prompt,
            embeddings: None,
            reference_embeddings: None,
        });
    }
    let mut records = Vec::with_capacity(n_settings);
    for (setting_id, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(r) => records.push(r),
            None => {
                return Err(validation(
                    path,
                    0,
                    format!("missing responses for setting {setting_id}"),
                ))
            }
        }
    }

    if let Some(emb) = &paths.embeddings {
        attach_embeddings(emb, &mut records, &questions, n_agents)?;
    }
    Ok(Corpus {
        questions,
        agents,
        records,
    })
}

/// Writes a corpus in the standard layout under `dir`.
pub fn save_corpus(corpus: &Corpus, dir: &Path) -> Result<CorpusPaths> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = CorpusPaths::in_dir(dir);
    write_jsonl(&paths.questions, &corpus.questions)?;
    write_jsonl(&paths.agents, &corpus.agents)?;
    let responses: Vec<ResponseRecord> = corpus
        .records
        .iter()
        .map(|r| ResponseRecord {
            setting_id: r.setting_id,
            question_id: r.question_id.clone(),
            agent_id: r.agent_id,
            candidates: r.candidates.clone(),
            prompt: r.prompt.clone(),
        })
        .collect();
    write_jsonl(&paths.responses, &responses)?;

    let embeddings_path = dir.join(EMBEDDINGS_FILE);
    if corpus.has_embeddings() {
        let rows: Vec<EmbeddingRecord> = corpus
            .records
            .iter()
            .map(|r| EmbeddingRecord {
                setting_id: r.setting_id,
                candidate_embeddings: to_raw(r.embeddings.as_deref().unwrap_or_default()),
                reference_embeddings: to_raw(r.reference_embeddings.as_deref().unwrap_or_default()),
            })
            .collect();
        write_jsonl(&embeddings_path, &rows)?;
        paths.embeddings = Some(embeddings_path);
    } else {
        paths.embeddings = None;
    }
    Ok(paths)
}

fn to_raw(vectors: &[EmbeddingVector]) -> Vec<Vec<f64>> {
    vectors.iter().map(|v| v.components().to_vec()).collect()
}

/// Loads precomputed similarity lists, one per setting of `corpus`, returned
/// in `setting_id` order.
pub fn load_similarities(path: &Path, corpus: &Corpus) -> Result<Vec<SampleList>> {
    let rows: Vec<(usize, SimilarityRecord)> = read_jsonl(path)?;
    let mut slots: Vec<Option<SampleList>> = vec![None; corpus.n_settings()];
    for (line, row) in rows {
        let Some(slot) = slots.get_mut(row.setting_id) else {
            return Err(Error::DanglingReference {
                path: path.to_path_buf(),
                line,
                kind: "setting",
                id: row.setting_id.to_string(),
            });
        };
        if slot.is_some() {
            return Err(Error::DuplicateId {
                path: path.to_path_buf(),
                line,
                kind: "setting",
                id: row.setting_id.to_string(),
            });
        }
        *slot = Some(row.similarities);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(setting_id, s)| {
            s.ok_or_else(|| {
                validation(
                    path,
                    0,
                    format!("missing similarities for setting {setting_id}"),
                )
            })
        })
        .collect()
}

pub fn save_similarities(path: &Path, lists: &[SampleList]) -> Result<()> {
    let rows: Vec<SimilarityRecord> = lists
        .iter()
        .enumerate()
        .map(|(setting_id, s)| SimilarityRecord {
            setting_id,
            similarities: s.clone(),
        })
        .collect();
    write_jsonl(path, &rows)
}
