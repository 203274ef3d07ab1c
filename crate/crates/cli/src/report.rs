//! Plain-text report rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use ecdfclust_core::artifacts::{ClusteringArtifact, FinalAnswerRecord};
use ecdfclust_core::dataset::{normalize_answer, Corpus};
use ecdfclust_core::Accuracy;

fn accuracy_cell(acc: &Accuracy) -> String {
    format!("{}/{} ({:.3})", acc.correct, acc.total, acc.value())
}

fn accuracy_table(out: &mut String, corpus: &Corpus, acc: &BTreeMap<(String, usize), Accuracy>) {
    let _ = writeln!(out, "== Accuracy by subject and agent setting ==");
    let subjects: BTreeSet<&str> = acc.keys().map(|(s, _)| s.as_str()).collect();
    let width = subjects
        .iter()
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
        .max("subject".len());
    let _ = write!(out, "{:<width$}", "subject");
    for a in &corpus.agents {
        let _ = write!(
            out,
            "  {:>17}",
            format!("a{} T={}", a.agent_id, a.temperature)
        );
    }
    let _ = writeln!(out);
    for s in subjects {
        let _ = write!(out, "{s:<width$}");
        for a in &corpus.agents {
            let cell = acc
                .get(&(s.to_string(), a.agent_id))
                .map(accuracy_cell)
                .unwrap_or_else(|| "-".into());
            let _ = write!(out, "  {cell:>17}");
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out);
}

fn cluster_summary(out: &mut String, corpus: &Corpus, c: &ClusteringArtifact) {
    let _ = writeln!(
        out,
        "== Clusters (m = {}, objective = {}) ==",
        c.m, c.objective
    );
    let _ = writeln!(out, "sizes sum to {} settings", c.assignments.len());
    for k in 0..c.m {
        let members = c.members(k);
        let medoid = c.medoids[k];
        let q = corpus.question_of(medoid);
        let agent = corpus.agent_of(medoid);
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "-- cluster {k}: size {}, wins {} --",
            members.len(),
            c.wins[k]
        );
        let _ = writeln!(
            out,
            "medoid: setting {medoid} (question {}, agent {}, T={})",
            q.question_id, agent.agent_id, agent.temperature
        );
        let _ = writeln!(out, "question: {}", q.question);
        let _ = writeln!(out, "references: {}", q.references.join(" | "));
        let mut seen = BTreeSet::new();
        let _ = writeln!(out, "unique answers:");
        for cand in &corpus.records[medoid].candidates {
            let norm = normalize_answer(cand);
            if seen.insert(norm.clone()) {
                let _ = writeln!(out, "  - {norm}");
            }
        }
        let ids: Vec<String> = members.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "members: {}", ids.join(" "));
    }
    let _ = writeln!(out);
}

fn final_answer_table(out: &mut String, corpus: &Corpus, rows: &[FinalAnswerRecord]) {
    let _ = writeln!(out, "== Final answers ==");
    let _ = writeln!(out, "setting  question  agent  correct  answer");
    for r in rows {
        let q = corpus.question_of(r.setting_id);
        let a = corpus.agent_of(r.setting_id);
        let _ = writeln!(
            out,
            "{:>7}  {:<8}  {:>5}  {:<7}  {}",
            r.setting_id,
            q.question_id,
            a.agent_id,
            if r.correct { "yes" } else { "no" },
            normalize_answer(&r.final_answer)
        );
    }
    let _ = writeln!(out);
}

pub fn render_report(
    corpus: &Corpus,
    clustering: &ClusteringArtifact,
    answers: Option<&[FinalAnswerRecord]>,
    accuracies: Option<&BTreeMap<(String, usize), Accuracy>>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} questions x {} agent settings = {} settings",
        corpus.n_questions(),
        corpus.n_agents(),
        corpus.n_settings()
    );
    let _ = writeln!(out);
    match accuracies {
        Some(acc) => accuracy_table(&mut out, corpus, acc),
        None => {
            let _ = writeln!(out, "No final answers: accuracy needs embeddings.");
            let _ = writeln!(out);
        }
    }
    cluster_summary(&mut out, corpus, clustering);
    if let Some(rows) = answers {
        final_answer_table(&mut out, corpus, rows);
    }
    out
}
