mod support;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use support::{fixtures, golden_dir};

fn affekt(store: &Path, args: &[&str]) -> Output {
    let config = fixtures().join("affekt.json");
    Command::new(env!("CARGO_BIN_EXE_affekt"))
        .args(args)
        .arg("--config")
        .arg(&config)
        .arg("--store")
        .arg(store)
        .env_remove("AFFEKT_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ingest(store: &Path) -> Value {
    let items = fixtures().join("items.jsonl");
    let stories = fixtures().join("stories.jsonl");
    let o = affekt(
        store,
        &["ingest", "--items", items.to_str().unwrap(), "--stories", stories.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn ingest_reports_counts_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let first = ingest(dir.path());
    assert_eq!(first["prototypes"], "created");
    assert_eq!(first["items"]["created"], 12);
    assert_eq!(first["skipped"], serde_json::json!([]));
    assert_eq!(first["stories"]["created"], 6);

    let second = ingest(dir.path());
    assert_eq!(second["prototypes"], "unchanged");
    assert_eq!(second["items"]["unchanged"], 12);
    assert_eq!(second["stories"]["unchanged"], 6);
    assert_eq!(second["revision"], first["revision"]);
}

#[test]
fn combine_prints_the_golden_prototype() {
    let dir = tempfile::tempdir().unwrap();
    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "Trust"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = std::fs::read_to_string(golden_dir().join("prototype_love.json")).unwrap();
    assert_eq!(stdout(&o), golden);

    // Requiring both sides for triviality moves the discard to the weakest
    // MODIFIER term.
    let o = affekt(
        dir.path(),
        &["combine", "--head", "joy", "--modifier", "trust", "--triviality", "head-and-modifier"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms: Vec<&str> = doc["typical"].as_array().unwrap().iter().map(|t| t["term"].as_str().unwrap()).collect();
    assert_eq!(terms.len(), 19);
    assert!(terms.contains(&"smile") && !terms.contains(&"harbor"));
    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "trust", "--triviality", "modifier"]);
    assert_eq!(o.status.code(), Some(1));

    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "Love"]);
    assert_eq!(o.status.code(), Some(1));
    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "joy"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn recommend_and_export_after_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    ingest(&store);

    let o = affekt(&store, &["recommend", "--story", "S3", "--kind", "opposite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rec: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = rec["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["story"] == "S4"));
    let scores: Vec<f64> = entries.iter().map(|e| e["relevance"].as_f64().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));

    let out = dir.path().join("out.nt");
    let o = affekt(&store, &["export", "--triples", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = std::fs::read_to_string(golden_dir().join("triples.nt")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden);
    let o = affekt(&store, &["export", "--triples", "-"]);
    assert_eq!(stdout(&o), golden);

    for (args, code) in [
        (vec!["recommend", "--story", "S3", "--kind", "inverse"], 1),
        (vec!["recommend", "--story", "S3", "--kind", "same", "--limit", "0"], 1),
        (vec!["recommend", "--story", "S404", "--kind", "same"], 1),
    ] {
        assert_eq!(affekt(&store, &args).status.code(), Some(code), "{args:?}");
    }
}

#[test]
fn classify_does_not_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let item = dir.path().join("gufo.json");
    let line = std::fs::read_to_string(fixtures().join("items.jsonl"))
        .unwrap()
        .lines()
        .find(|l| l.contains("40211"))
        .unwrap()
        .to_string();
    std::fs::write(&item, line).unwrap();
    let o = affekt(&store, &["classify", "--item", item.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["id"], "40211");
    assert_eq!(v["emotions"][0]["emotion"], "Curiosity");
    assert!(!store.exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = affekt(dir.path(), &["serve", "--port", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("port"), "{}", stderr(&o));

    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "trust", "--threshold", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("threshold"));

    let o = affekt(dir.path(), &["classify", "--item", "/nonexistent/item.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = affekt(dir.path(), &["combine", "--head", "joy", "--modifier", "trust", "--lexicon", "/nonexistent.tsv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = affekt(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"top_k": 0}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_affekt"))
        .args(["combine", "--head", "joy", "--modifier", "trust", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("top_k"));
}

#[test]
fn config_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_affekt"))
        .args(["combine", "--head", "joy", "--modifier", "trust"])
        .env("AFFEKT_CONFIG", fixtures().join("affekt.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = std::fs::read_to_string(golden_dir().join("prototype_love.json")).unwrap();
    assert_eq!(stdout(&o), golden);

    // Without any lexicon there is nothing to combine.
    let o = Command::new(env!("CARGO_BIN_EXE_affekt"))
        .args(["combine", "--head", "joy", "--modifier", "trust"])
        .env_remove("AFFEKT_CONFIG")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lexicon"));
}
