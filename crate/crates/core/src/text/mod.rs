//! Item ingestion: JSON records, normalization, lemmatization and
//! frequency profiles.

mod lemma;
mod stopwords;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use lemma::{
    lemmatizer_registry, DictionaryLemmatizer, IdentityLemmatizer, Lemmatizer, SuffixLemmatizer,
    DEFAULT_LEMMATIZER,
};
pub use stopwords::Stopwords;

pub const ITEM_SCHEMA: &str = "item/1";
pub const PROFILE_SCHEMA: &str = "profile/1";
pub const MIN_TOKEN_CHARS: usize = 2;

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("item schema: {message}")]
    Schema { field: &'static str, message: String },
    #[error("item `{0}` has no lexical content (empty profile)")]
    EmptyProfile(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("duplicate item id `{0}`")]
    DuplicateId(String),
}

impl TextError {
    /// The offending field for schema errors.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            TextError::Schema { field, .. } => Some(field),
            _ => None,
        }
    }
}

/// A cultural item as described in the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    pub description: String,
    #[serde(default)]
    pub annotations: Vec<String>,
}

fn schema(field: &'static str, message: impl Into<String>) -> TextError {
    TextError::Schema {
        field,
        message: message.into(),
    }
}

fn opt_string(obj: &serde_json::Map<String, Value>, field: &'static str) -> Result<Option<String>, TextError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(schema(field, format!("field `{field}` must be a string"))),
    }
}

impl ItemRecord {
    pub fn from_value(value: &Value) -> Result<ItemRecord, TextError> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("id", "item must be a JSON object"))?;
        let id = match obj.get("id") {
            Some(Value::String(s)) if !s.trim().is_empty() => s.trim().to_string(),
            Some(Value::Number(n)) => n.to_string(),
            Some(Value::String(_)) => return Err(schema("id", "field `id` is empty")),
            Some(_) => return Err(schema("id", "field `id` must be a string")),
            None => return Err(schema("id", "missing field `id`")),
        };
        let description = opt_string(obj, "description")?
            .ok_or_else(|| schema("description", "missing field `description`"))?;
        let annotations = match obj.get("annotations") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| schema("annotations", "annotations must be strings"))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(schema("annotations", "field `annotations` must be an array")),
        };
        Ok(ItemRecord {
            id,
            title: opt_string(obj, "title")?.unwrap_or_default(),
            author: opt_string(obj, "author")?,
            description,
            annotations,
        })
    }

    /// Description followed by annotations, the text that gets profiled.
    pub fn text_segments(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.description.as_str()).chain(self.annotations.iter().map(String::as_str))
    }
}

/// Parses one `item/1` JSON document.
pub fn parse_item(document: &str) -> Result<ItemRecord, TextError> {
    let value: Value = serde_json::from_str(document)?;
    ItemRecord::from_value(&value)
}

/// Loads items from a directory of `*.json` files (sorted by file name) or
/// from a JSON-lines file.
pub fn load_items(path: &Path) -> Result<Vec<ItemRecord>, TextError> {
    let io = |source| TextError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut items = Vec::new();
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for file in files {
            let text = std::fs::read_to_string(&file).map_err(|source| TextError::Io {
                path: file.display().to_string(),
                source,
            })?;
            items.push(parse_item(&text)?);
        }
    } else {
        let text = std::fs::read_to_string(path).map_err(io)?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            items.push(parse_item(line)?);
        }
    }
    let mut seen = BTreeSet::new();
    for item in &items {
        if !seen.insert(item.id.as_str()) {
            return Err(TextError::DuplicateId(item.id.clone()));
        }
    }
    Ok(items)
}

/// Lowercased alphabetic runs; everything else is a boundary.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Tokenizes, drops stopwords and short tokens, and lemmatizes.
pub fn normalize_and_lemmatize(
    text: &str,
    stopwords: &Stopwords,
    lemmatizer: &dyn Lemmatizer,
) -> Vec<String> {
    tokenize(text)
        .filter(|t| t.chars().count() >= MIN_TOKEN_CHARS && !stopwords.contains(t))
        .map(|t| lemmatizer.lemmatize(&t))
        .filter(|l| l.chars().count() >= MIN_TOKEN_CHARS && !stopwords.contains(l))
        .collect()
}

/// `count(lemma) / total` for each distinct lemma. `None` on empty input.
pub fn term_frequencies<S: AsRef<str>>(lemmas: &[S]) -> Option<BTreeMap<String, f64>> {
    if lemmas.is_empty() {
        return None;
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for l in lemmas {
        *counts.entry(l.as_ref().to_string()).or_default() += 1;
    }
    let total = lemmas.len() as f64;
    Some(
        counts
            .into_iter()
            .map(|(lemma, n)| (lemma, n as f64 / total))
            .collect(),
    )
}

/// Lemmatized frequency profile of one item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemProfile {
    pub id: String,
    pub frequencies: BTreeMap<String, f64>,
}

impl ItemProfile {
    pub fn contains(&self, lemma: &str) -> bool {
        self.frequencies.contains_key(lemma)
    }

    pub fn lemma_set(&self) -> BTreeSet<&str> {
        self.frequencies.keys().map(String::as_str).collect()
    }

    /// One `profile/1` JSON line.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "schema": PROFILE_SCHEMA,
            "id": self.id,
            "frequencies": self.frequencies,
        })
        .to_string()
    }
}

/// Stopwords plus a lemmatizer, applied uniformly to every item.
#[derive(Clone)]
pub struct TextPipeline {
    stopwords: Arc<Stopwords>,
    lemmatizer: Arc<dyn Lemmatizer>,
}

impl std::fmt::Debug for TextPipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TextPipeline")
            .field("stopwords", &self.stopwords.len())
            .field("lemmatizer", &self.lemmatizer.name())
            .finish()
    }
}

impl Default for TextPipeline {
    fn default() -> Self {
        TextPipeline::new(Stopwords::english(), Arc::new(SuffixLemmatizer))
    }
}

impl TextPipeline {
    pub fn new(stopwords: Stopwords, lemmatizer: Arc<dyn Lemmatizer>) -> Self {
        TextPipeline {
            stopwords: Arc::new(stopwords),
            lemmatizer,
        }
    }

    pub fn lemmatizer(&self) -> &dyn Lemmatizer {
        self.lemmatizer.as_ref()
    }

    pub fn lemmas(&self, text: &str) -> Vec<String> {
        normalize_and_lemmatize(text, &self.stopwords, self.lemmatizer.as_ref())
    }

    pub fn profile(&self, item: &ItemRecord) -> Result<ItemProfile, TextError> {
        let lemmas: Vec<String> = item.text_segments().flat_map(|s| self.lemmas(s)).collect();
        let frequencies =
            term_frequencies(&lemmas).ok_or_else(|| TextError::EmptyProfile(item.id.clone()))?;
        Ok(ItemProfile {
            id: item.id.clone(),
            frequencies,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemmas(text: &str, stop: &[&str]) -> Vec<String> {
        normalize_and_lemmatize(text, &Stopwords::from_words(stop.iter().copied()), &SuffixLemmatizer)
    }

    #[test]
    fn parse_item_examples() {
        let item = parse_item(
            r#"{"id":"39138","title":"(Der) Matrose Fritz Müller","description":"Ritratto di marinaio"}"#,
        )
        .unwrap();
        assert_eq!(item.id, "39138");
        assert_eq!(item.title, "(Der) Matrose Fritz Müller");
        assert_eq!(item.author, None);

        let item = parse_item(r#"{"id":"x","description":"a"}"#).unwrap();
        assert!(item.annotations.is_empty());
        assert_eq!(item.title, "");

        let err = parse_item(r#"{"title":"no id"}"#).unwrap_err();
        assert_eq!(err.field(), Some("id"));
        let err = parse_item(r#"{"id":"x"}"#).unwrap_err();
        assert_eq!(err.field(), Some("description"));
        assert!(matches!(parse_item("{"), Err(TextError::Json(_))));
        assert_eq!(parse_item(r#"{"id":7,"description":"d"}"#).unwrap().id, "7");
        assert!(parse_item(r#"{"id":"x","description":"d","annotations":[1]}"#).is_err());
    }

    #[test]
    fn lemmatization_examples() {
        assert_eq!(lemmas("The Seas, the sea!", &["the"]), ["sea", "sea"]);
        assert!(lemmas("", &[]).is_empty());
        assert!(lemmas("1874", &[]).is_empty());
        assert_eq!(lemmas("a b cd é", &[]), ["cd"]);
        assert_eq!(lemmas("dell'arte", &["dell"]), ["arte"]);
    }

    #[test]
    fn frequency_examples() {
        let f = term_frequencies(&["sea", "storm", "sea", "fear"]).unwrap();
        assert_eq!(f["sea"], 0.5);
        assert_eq!(f["storm"], 0.25);
        assert_eq!(f["fear"], 0.25);
        assert_eq!(term_frequencies(&["owl"]).unwrap()["owl"], 1.0);
        assert!(term_frequencies::<&str>(&[]).is_none());
    }

    #[test]
    fn profile_includes_annotations() {
        let pipeline = TextPipeline::default();
        let item = ItemRecord {
            id: "i".into(),
            title: String::new(),
            author: None,
            description: "The storm".into(),
            annotations: vec!["storms and fear".into()],
        };
        let p = pipeline.profile(&item).unwrap();
        assert_eq!(p.frequencies.len(), 2);
        assert!((p.frequencies["storm"] - 2.0 / 3.0).abs() < 1e-12);

        let empty = ItemRecord {
            description: "the and of 1999".into(),
            annotations: vec![],
            ..item
        };
        assert!(matches!(pipeline.profile(&empty), Err(TextError::EmptyProfile(id)) if id == "i"));
    }

    #[test]
    fn load_items_from_dir_and_jsonl() {
        let dir = std::env::temp_dir().join(format!("affekt-items-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("b.json"), r#"{"id":"b","description":"x"}"#).unwrap();
        std::fs::write(dir.join("a.json"), r#"{"id":"a","description":"x"}"#).unwrap();
        std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
        let ids: Vec<String> = load_items(&dir).unwrap().into_iter().map(|i| i.id).collect();
        assert_eq!(ids, ["a", "b"]);

        let jsonl = dir.join("items.jsonl");
        std::fs::write(
            &jsonl,
            "{\"id\":\"a\",\"description\":\"x\"}\n\n{\"id\":\"a\",\"description\":\"y\"}\n",
        )
        .unwrap();
        assert!(matches!(load_items(&jsonl), Err(TextError::DuplicateId(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
