#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ecdfclust_cli::PipelineConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const FIXTURE_CLUSTERS: usize = 3;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/basic")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

pub fn fixture_config(out: &Path) -> PipelineConfig {
    PipelineConfig::new(fixture_dir(), out).with_clusters(FIXTURE_CLUSTERS)
}

/// Every file the pipeline writes for the fixture, relative to the output dir.
pub fn output_files(out: &Path) -> Vec<String> {
    let mut names = Vec::new();
    collect(out, out, &mut names);
    names.sort();
    names
}

fn collect(root: &Path, dir: &Path, names: &mut Vec<String>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect(root, &path, names);
        } else {
            let rel = path.strip_prefix(root).unwrap();
            names.push(rel.to_string_lossy().replace('\\', "/"));
        }
    }
}

/// Compares `out` against the frozen golden directory, or refreshes the
/// golden files when `ECDFCLUST_BLESS=1`. Returns the names that differ.
pub fn compare_with_golden(out: &Path) -> Vec<String> {
    let golden = golden_dir();
    let produced = output_files(out);
    if std::env::var("ECDFCLUST_BLESS").as_deref() == Ok("1") {
        let _ = fs::remove_dir_all(&golden);
        for name in &produced {
            let dst = golden.join(name);
            fs::create_dir_all(dst.parent().unwrap()).unwrap();
            fs::copy(out.join(name), dst).unwrap();
        }
        return Vec::new();
    }
    let expected = output_files(&golden);
    let mut diffs: Vec<String> = expected
        .iter()
        .filter(|n| !produced.contains(n))
        .map(|n| format!("missing {n}"))
        .collect();
    for name in &produced {
        if !expected.contains(name) {
            diffs.push(format!("unexpected {name}"));
        } else if fs::read(out.join(name)).unwrap() != fs::read(golden.join(name)).unwrap() {
            diffs.push(format!("differs {name}"));
        }
    }
    diffs
}

/// One step segment parsed back from SVG path data, in pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub role: String,
    pub start: (f64, f64),
    /// (x of jump, y after jump)
    pub jumps: Vec<(f64, f64)>,
    pub end_x: f64,
}

pub fn parse_curves(svg: &str) -> Vec<Curve> {
    let mut curves = Vec::new();
    for line in svg.lines().filter(|l| l.starts_with("<path ")) {
        let role = attr(line, "data-role");
        let d = attr(line, "d");
        let tokens: Vec<&str> = d.split_whitespace().collect();
        assert_eq!(tokens[0], "M");
        let start = (tokens[1].parse().unwrap(), tokens[2].parse().unwrap());
        let mut jumps = Vec::new();
        let mut i = 3;
        let mut end_x = start.0;
        while i < tokens.len() {
            assert_eq!(tokens[i], "H");
            let x: f64 = tokens[i + 1].parse().unwrap();
            if i + 2 < tokens.len() {
                assert_eq!(tokens[i + 2], "V");
                jumps.push((x, tokens[i + 3].parse().unwrap()));
                i += 4;
            } else {
                end_x = x;
                i += 2;
            }
        }
        curves.push(Curve {
            role,
            start,
            jumps,
            end_x,
        });
    }
    curves
}

fn attr(line: &str, name: &str) -> String {
    let key = format!("{name}=\"");
    let at = line.find(&key).unwrap() + key.len();
    line[at..at + line[at..].find('"').unwrap()].to_string()
}

/// Writes a corpus with embeddings: `subjects` subjects of `per_subject`
/// questions each, `agents` agent settings, `n_c` candidates per setting.
/// A candidate is either a copy of the first reference (text and a slightly
/// perturbed embedding) or a random wrong answer.
pub fn write_embedded_corpus(
    dir: &Path,
    subjects: usize,
    per_subject: usize,
    agents: usize,
    n_c: usize,
    seed: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 8;
    let vec_near = |rng: &mut ChaCha8Rng, base: &[f64], noise: f64| -> Vec<f64> {
        base.iter()
            .map(|x| x + rng.gen_range(-noise..noise))
            .collect()
    };
    let mut questions = String::new();
    let mut responses = String::new();
    let mut embeddings = String::new();
    let mut agents_text = String::new();
    for a in 0..agents {
        agents_text.push_str(&json!({"agent_id": a, "persona_text": format!("persona {a}"), "temperature": a as f64 * 0.5}).to_string());
        agents_text.push('\n');
    }
    let n_q = subjects * per_subject;
    for qi in 0..n_q {
        let reference: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let qid = format!("q{qi:03}");
        questions.push_str(
            &json!({"question_id": qid, "subject": format!("subject-{}", qi / per_subject),
                    "question": format!("question {qi}?"), "references": [format!("answer {qi}")]})
            .to_string(),
        );
        questions.push('\n');
        for a in 0..agents {
            let setting_id = qi * agents + a;
            let p_correct: f64 = rng.gen_range(0.0..1.0);
            let mut texts = Vec::new();
            let mut embs = Vec::new();
            for c in 0..n_c {
                if rng.gen_bool(p_correct) {
                    texts.push(format!("answer {qi}"));
                    embs.push(vec_near(&mut rng, &reference, 0.05));
                } else {
                    texts.push(format!("wrong {qi}-{c}"));
                    embs.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
                }
            }
            responses.push_str(
                &json!({"setting_id": setting_id, "question_id": qid, "agent_id": a, "candidates": texts})
                    .to_string(),
            );
            responses.push('\n');
            embeddings.push_str(
                &json!({"setting_id": setting_id, "candidate_embeddings": embs,
                        "reference_embeddings": [reference.clone()]})
                .to_string(),
            );
            embeddings.push('\n');
        }
    }
    fs::create_dir_all(dir).unwrap();
    fs::write(dir.join("questions.jsonl"), questions).unwrap();
    fs::write(dir.join("agents.jsonl"), agents_text).unwrap();
    fs::write(dir.join("responses.jsonl"), responses).unwrap();
    fs::write(dir.join("embeddings.jsonl"), embeddings).unwrap();
}
