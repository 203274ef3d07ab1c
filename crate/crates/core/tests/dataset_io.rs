use std::fs;
use std::path::Path;

use ecdfclust_core::dataset::{
    load_corpus, load_similarities, normalize_answer, save_corpus, save_similarities, CorpusPaths,
    AGENTS_FILE, EMBEDDINGS_FILE, QUESTIONS_FILE, RESPONSES_FILE,
};
use ecdfclust_core::{Error, SampleList};
use proptest::prelude::*;

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn grid_corpus(dir: &Path, n_q: usize, n_a: usize) {
    let mut q = String::new();
    for i in 0..n_q {
        q += &format!(
            "{{\"question_id\":\"q{i}\",\"subject\":\"s\",\"question\":\"What {i}?\",\"references\":[\"r{i}\",\"alt {i}.\"]}}\n"
        );
    }
    let mut a = String::new();
    for j in 0..n_a {
        a += &format!(
            "{{\"agent_id\":{j},\"persona_text\":\"\",\"temperature\":{}}}\n",
            j as f64 * 0.5
        );
    }
    let mut r = String::new();
    let mut e = String::new();
    // written in reverse to check that records are sorted on load
    for i in (0..n_q).rev() {
        for j in (0..n_a).rev() {
            let id = n_a * i + j;
            r += &format!(
                "{{\"setting_id\":{id},\"question_id\":\"q{i}\",\"agent_id\":{j},\"candidates\":[\"r{i}\",\"x\"]}}\n"
            );
            e += &format!(
                "{{\"setting_id\":{id},\"candidate_embeddings\":[[1.0,0.1],[0.2,0.3]],\"reference_embeddings\":[[1.0,0.0],[0.5,0.5]]}}\n"
            );
        }
    }
    write(dir, QUESTIONS_FILE, &q);
    write(dir, AGENTS_FILE, &a);
    write(dir, RESPONSES_FILE, &r);
    write(dir, EMBEDDINGS_FILE, &e);
}

#[test]
fn grid_ids_follow_index_formula() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 2, 2);
    let corpus = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap();
    assert_eq!(corpus.n_settings(), 4);
    for (idx, r) in corpus.records.iter().enumerate() {
        assert_eq!(r.setting_id, idx);
        assert_eq!(
            r.setting_id,
            2 * corpus
                .questions
                .iter()
                .position(|q| q.question_id == r.question_id)
                .unwrap()
                + r.agent_id
        );
    }
    assert!(corpus.has_embeddings());
}

#[test]
fn load_save_load_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 1, 1);
    let corpus = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap();
    let out = tempfile::tempdir().unwrap();
    let paths = save_corpus(&corpus, out.path()).unwrap();
    let again = load_corpus(&paths).unwrap();
    assert_eq!(again, corpus);
    // saving again is byte-identical
    let out2 = tempfile::tempdir().unwrap();
    save_corpus(&again, out2.path()).unwrap();
    for name in [QUESTIONS_FILE, AGENTS_FILE, RESPONSES_FILE, EMBEDDINGS_FILE] {
        assert_eq!(
            fs::read(out.path().join(name)).unwrap(),
            fs::read(out2.path().join(name)).unwrap()
        );
    }
}

#[test]
fn dangling_question_is_named() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 1, 1);
    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":0,\"question_id\":\"nope\",\"agent_id\":0,\"candidates\":[\"a\"]}\n",
    );
    let err = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap_err();
    match &err {
        Error::DanglingReference { kind, id, line, .. } => {
            assert_eq!(*kind, "question");
            assert_eq!(id, "nope");
            assert_eq!(*line, 1);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.to_string().contains("nope"));
}

#[test]
fn distinct_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 1, 2);
    let paths = CorpusPaths::in_dir(dir.path());

    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":0,\"question_id\":\"q0\"\n",
    );
    assert!(matches!(
        load_corpus(&paths),
        Err(Error::Parse { line: 1, .. })
    ));

    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":0,\"question_id\":\"q0\",\"agent_id\":0,\"candidates\":[]}\n",
    );
    assert!(matches!(
        load_corpus(&paths),
        Err(Error::EmptyCandidates { setting_id: 0, .. })
    ));

    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":0,\"question_id\":\"q0\",\"agent_id\":0,\"candidates\":[\"a\"]}\n\
         {\"setting_id\":0,\"question_id\":\"q0\",\"agent_id\":0,\"candidates\":[\"a\"]}\n",
    );
    assert!(matches!(
        load_corpus(&paths),
        Err(Error::DuplicateId { line: 2, .. })
    ));

    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":1,\"question_id\":\"q0\",\"agent_id\":0,\"candidates\":[\"a\"]}\n",
    );
    assert!(matches!(load_corpus(&paths), Err(Error::Validation { .. })));

    write(
        dir.path(),
        RESPONSES_FILE,
        "{\"setting_id\":0,\"question_id\":\"q0\",\"agent_id\":0,\"candidates\":[\"a\"]}\n",
    );
    let err = load_corpus(&paths).unwrap_err();
    assert!(
        err.to_string().contains("missing responses for setting 1"),
        "{err}"
    );

    write(dir.path(), AGENTS_FILE, "{\"agent_id\":0,\"persona_text\":\"\",\"temperature\":1.0}\n{\"agent_id\":0,\"persona_text\":\"\",\"temperature\":1.0}\n");
    assert!(matches!(
        load_corpus(&paths),
        Err(Error::DuplicateId { kind: "agent", .. })
    ));

    write(
        dir.path(),
        AGENTS_FILE,
        "{\"agent_id\":0,\"persona_text\":\"\",\"temperature\":-1.0}\n",
    );
    assert!(matches!(load_corpus(&paths), Err(Error::Validation { .. })));
}

#[test]
fn zero_embedding_rejected_with_setting_id() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 1, 1);
    write(
        dir.path(),
        EMBEDDINGS_FILE,
        "{\"setting_id\":0,\"candidate_embeddings\":[[0.0,0.0],[1.0,0.0]],\"reference_embeddings\":[[1.0,0.0],[0.0,1.0]]}\n",
    );
    let err = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap_err();
    assert!(err.to_string().contains("setting 0"), "{err}");
    assert!(err.to_string().contains("zero embedding"), "{err}");

    write(
        dir.path(),
        EMBEDDINGS_FILE,
        "{\"setting_id\":0,\"candidate_embeddings\":[[1.0,0.0,2.0],[1.0,0.0]],\"reference_embeddings\":[[1.0,0.0],[0.0,1.0]]}\n",
    );
    let err = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap_err();
    assert!(err.to_string().contains("dimension"), "{err}");
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap_err();
    assert!(err.is_io());
    assert!(err.to_string().contains(QUESTIONS_FILE));
}

#[test]
fn similarities_roundtrip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    grid_corpus(dir.path(), 1, 2);
    let corpus = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap();
    let lists = vec![
        SampleList::new(vec![0.1 + 0.2, 1.0 / 3.0]).unwrap(),
        SampleList::new(vec![-std::f64::consts::FRAC_1_SQRT_2]).unwrap(),
    ];
    let path = dir.path().join("sims.jsonl");
    save_similarities(&path, &lists).unwrap();
    assert_eq!(load_similarities(&path, &corpus).unwrap(), lists);

    fs::write(&path, "{\"setting_id\":0,\"similarities\":[0.5]}\n").unwrap();
    assert!(load_similarities(&path, &corpus).is_err());
    fs::write(
        &path,
        "{\"setting_id\":0,\"similarities\":[]}\n{\"setting_id\":1,\"similarities\":[1]}\n",
    )
    .unwrap();
    assert!(matches!(
        load_similarities(&path, &corpus),
        Err(Error::Parse { line: 1, .. })
    ));
}

proptest! {
    #[test]
    fn normalize_is_idempotent(s in "[a-z .,;:\\\\]{0,12}") {
        let once = normalize_answer(&s);
        prop_assert_eq!(normalize_answer(&once), once.clone());
        prop_assert!(!once.ends_with(['.', ',', ';', ':', '\\', ' ']));
    }

    #[test]
    fn normalize_matches_char_oracle(s in "[a-z0-9 .,;:\\\\]{0,12}") {
        let mut chars: Vec<char> = s.chars().collect();
        while let Some(&c) = chars.last() {
            if ".,;:\\".contains(c) || c.is_whitespace() {
                chars.pop();
            } else {
                break;
            }
        }
        prop_assert_eq!(normalize_answer(&s), chars.into_iter().collect::<String>());
    }

    #[test]
    fn embeddings_roundtrip_with_full_precision(v in prop::collection::vec(-1e3f64..1e3, 1..6)) {
        let text = serde_json::to_string(&v).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, v);
    }
}
