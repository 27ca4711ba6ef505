//! Fixture catalog and golden rendering shared by the service tests.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use affekt_core::build_wheel;
use affekt_core::classify::{RecommendationKind, Story};
use affekt_core::text::load_items;
use affekt_service::config::{ConfigFile, ServiceConfig};
use affekt_service::engine::{build_prototypes, Analyzer};
use affekt_service::store::{CatalogStore, Snapshot};
use affekt_service::views::{ItemEmotions, StoryEmotions};

pub const GOLDEN_FILES: [&str; 5] = [
    "prototype_love.json",
    "classification.jsonl",
    "story_profiles.jsonl",
    "recommendations.jsonl",
    "triples.nt",
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn golden_dir() -> PathBuf {
    fixtures().join("golden")
}

pub fn fixture_config(store: &Path) -> ServiceConfig {
    let flags = ConfigFile {
        store: Some(store.to_path_buf()),
        ..ConfigFile::default()
    };
    ServiceConfig::resolve(flags, Some(&fixtures().join("affekt.json")), None).expect("fixture config")
}

pub fn fixture_stories() -> Vec<Story> {
    std::fs::read_to_string(fixtures().join("stories.jsonl"))
        .expect("stories fixture")
        .lines()
        .map(|l| Story::parse(l).expect("fixture story"))
        .collect()
}

/// A store under `dir` holding the fixture catalog.
pub fn ingest_fixture(dir: &Path) -> CatalogStore {
    let config = fixture_config(dir);
    let prototypes = build_prototypes(config.lexicon.as_deref().unwrap(), &config).unwrap();
    let store = CatalogStore::open(dir, Analyzer::from_config(&config).unwrap()).unwrap();
    store.set_prototypes(prototypes).unwrap();
    for item in load_items(&fixtures().join("items.jsonl")).unwrap() {
        store.put_item(item).unwrap();
    }
    for story in fixture_stories() {
        store.put_story(story).unwrap();
    }
    store
}

fn lines<T: serde::Serialize>(values: impl IntoIterator<Item = T>) -> String {
    values
        .into_iter()
        .map(|v| serde_json::to_string(&v).unwrap() + "\n")
        .collect()
}

/// Golden file name → content, rendered from a fixture snapshot.
pub fn render_goldens(snapshot: &Snapshot) -> BTreeMap<&'static str, String> {
    let wheel = build_wheel();
    let love = &snapshot.prototypes.as_ref().unwrap().compound[&wheel.lookup("Love").unwrap()];
    let mut out = BTreeMap::new();
    out.insert(
        GOLDEN_FILES[0],
        serde_json::to_string_pretty(&love.to_document()).unwrap() + "\n",
    );
    out.insert(GOLDEN_FILES[1], lines(snapshot.items.values().map(|i| ItemEmotions::of(i))));
    out.insert(
        GOLDEN_FILES[2],
        lines(snapshot.stories.values().map(|s| StoryEmotions::of(s))),
    );
    let mut recs = Vec::new();
    for id in snapshot.stories.keys() {
        for kind in [RecommendationKind::Same, RecommendationKind::Similar, RecommendationKind::Opposite] {
            recs.push(match snapshot.recommend(&wheel, id, kind, 5) {
                Ok(r) => serde_json::to_string(&r).unwrap(),
                Err(e) => serde_json::json!({"source": id, "kind": kind, "error": e.to_string()}).to_string(),
            });
        }
    }
    out.insert(GOLDEN_FILES[3], recs.iter().map(|r| format!("{r}\n")).collect());
    out.insert(GOLDEN_FILES[4], snapshot.triples());
    out
}

/// Compares against the committed goldens; `AFFEKT_BLESS=1` rewrites them.
pub fn check_goldens(rendered: &BTreeMap<&'static str, String>) -> Result<(), String> {
    let dir = golden_dir();
    if std::env::var_os("AFFEKT_BLESS").is_some() {
        std::fs::create_dir_all(&dir).unwrap();
        for (name, content) in rendered {
            std::fs::write(dir.join(name), content).unwrap();
        }
    }
    for (name, content) in rendered {
        let expected = std::fs::read_to_string(dir.join(name))
            .map_err(|e| format!("{name}: {e}"))?;
        if &expected != content {
            return Err(format!("{name} differs from golden:\n--- expected\n{expected}\n--- actual\n{content}"));
        }
    }
    Ok(())
}
