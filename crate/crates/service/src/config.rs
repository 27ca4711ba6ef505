//! Service configuration: defaults, an optional JSON file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use affekt_core::classify::{StoryBounds, DEFAULT_THRESHOLD};
use affekt_core::lexicon::DEFAULT_TOP_K;
use affekt_core::tcl::{search_registry, TrivialityRule, DEFAULT_SEARCH, MAX_INCLUSIONS};
use affekt_core::text::{lemmatizer_registry, Stopwords, DEFAULT_LEMMATIZER};
use affekt_core::EmotionId;
use serde::Deserialize;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "AFFEKT_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid config: `{field}` {message}")]
    Invalid { field: &'static str, message: String },
    #[error("reading config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl ConfigError {
    fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field,
            message: message.into(),
        }
    }
}

/// Config file contents. Every key is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lexicon: Option<PathBuf>,
    pub top_k: Option<i64>,
    pub threshold: Option<f64>,
    pub min_items: Option<i64>,
    pub max_items: Option<i64>,
    pub host: Option<String>,
    pub port: Option<i64>,
    pub language: Option<String>,
    pub translation: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub lemmatizer: Option<String>,
    pub search: Option<String>,
    /// `head-only` (default) or `head-and-modifier`.
    pub triviality: Option<String>,
    pub include_basics: Option<bool>,
    pub rigid_check: Option<bool>,
    /// Dyad name → the component acting as HEAD.
    pub heads: Option<BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| ConfigError::invalid("config", format!("is not valid: {e}")))?;
        // Relative paths are taken relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut file.lexicon, &mut file.translation, &mut file.store]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(file)
    }

    /// `self` wins wherever it is set.
    pub fn or(self, fallback: ConfigFile) -> ConfigFile {
        ConfigFile {
            lexicon: self.lexicon.or(fallback.lexicon),
            top_k: self.top_k.or(fallback.top_k),
            threshold: self.threshold.or(fallback.threshold),
            min_items: self.min_items.or(fallback.min_items),
            max_items: self.max_items.or(fallback.max_items),
            host: self.host.or(fallback.host),
            port: self.port.or(fallback.port),
            language: self.language.or(fallback.language),
            translation: self.translation.or(fallback.translation),
            store: self.store.or(fallback.store),
            lemmatizer: self.lemmatizer.or(fallback.lemmatizer),
            search: self.search.or(fallback.search),
            triviality: self.triviality.or(fallback.triviality),
            include_basics: self.include_basics.or(fallback.include_basics),
            rigid_check: self.rigid_check.or(fallback.rigid_check),
            heads: self.heads.or(fallback.heads),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub lexicon: Option<PathBuf>,
    pub top_k: usize,
    pub threshold: f64,
    pub bounds: StoryBounds,
    pub host: String,
    pub port: u16,
    pub language: String,
    pub translation: Option<PathBuf>,
    pub store: PathBuf,
    pub lemmatizer: String,
    pub search: String,
    pub triviality: TrivialityRule,
    pub include_basics: bool,
    pub rigid_check: bool,
    pub heads: BTreeMap<EmotionId, EmotionId>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig::from_file(ConfigFile::default()).expect("defaults are valid")
    }
}

fn non_negative(field: &'static str, value: i64) -> Result<usize, ConfigError> {
    usize::try_from(value).map_err(|_| ConfigError::invalid(field, format!("must be non-negative (got {value})")))
}

impl ServiceConfig {
    /// Applies defaults and validates every field.
    pub fn from_file(file: ConfigFile) -> Result<ServiceConfig, ConfigError> {
        let top_k = non_negative("top_k", file.top_k.unwrap_or(DEFAULT_TOP_K as i64))?;
        if top_k == 0 {
            return Err(ConfigError::invalid("top_k", "must be at least 1"));
        }
        // Two basic prototypes feed each combination.
        if 2 * top_k > MAX_INCLUSIONS {
            return Err(ConfigError::invalid(
                "top_k",
                format!("must be at most {} (got {top_k})", MAX_INCLUSIONS / 2),
            ));
        }
        let threshold = file.threshold.unwrap_or(DEFAULT_THRESHOLD);
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(ConfigError::invalid(
                "threshold",
                format!("must be in (0, 1] (got {threshold})"),
            ));
        }
        let defaults = StoryBounds::default();
        let min = non_negative("min_items", file.min_items.unwrap_or(defaults.min as i64))?;
        let max = non_negative("max_items", file.max_items.unwrap_or(defaults.max as i64))?;
        if min == 0 {
            return Err(ConfigError::invalid("min_items", "must be at least 1"));
        }
        let bounds = StoryBounds::new(min, max).map_err(|_| {
            ConfigError::invalid("max_items", format!("must be at least min_items ({min}, got {max})"))
        })?;
        let port = file.port.unwrap_or(8080);
        let port = u16::try_from(port)
            .map_err(|_| ConfigError::invalid("port", format!("must be in 0..=65535 (got {port})")))?;
        let language = file.language.unwrap_or_else(|| "en".to_string());
        if Stopwords::for_language(&language).is_none() {
            return Err(ConfigError::invalid(
                "language",
                format!("must be one of en, it, en+it, none (got {language:?})"),
            ));
        }
        let lemmatizer = file.lemmatizer.unwrap_or_else(|| DEFAULT_LEMMATIZER.to_string());
        if lemmatizer_registry().get(&lemmatizer).is_err() {
            return Err(ConfigError::invalid(
                "lemmatizer",
                format!("unknown lemmatizer {lemmatizer:?}"),
            ));
        }
        let search = file.search.unwrap_or_else(|| DEFAULT_SEARCH.to_string());
        if search_registry().get(&search).is_err() {
            return Err(ConfigError::invalid("search", format!("unknown search strategy {search:?}")));
        }
        let triviality = match &file.triviality {
            None => TrivialityRule::default(),
            Some(t) => t.parse().map_err(|e: String| ConfigError::invalid("triviality", e))?,
        };
        let mut heads = BTreeMap::new();
        for (dyad, head) in file.heads.unwrap_or_default() {
            let d = EmotionId::from_name(&dyad)
                .filter(|d| !d.is_basic())
                .ok_or_else(|| ConfigError::invalid("heads", format!("{dyad:?} is not a dyad")))?;
            let h = EmotionId::from_name(&head)
                .filter(|h| d.components().is_some_and(|(a, b)| *h == a || *h == b))
                .ok_or_else(|| {
                    ConfigError::invalid("heads", format!("{head:?} is not a component of {dyad}"))
                })?;
            heads.insert(d, h);
        }
        Ok(ServiceConfig {
            lexicon: file.lexicon,
            top_k,
            threshold,
            bounds,
            host: file.host.unwrap_or_else(|| "127.0.0.1".to_string()),
            port,
            language,
            translation: file.translation,
            store: file.store.unwrap_or_else(|| PathBuf::from("affekt-store")),
            lemmatizer,
            search,
            triviality,
            include_basics: file.include_basics.unwrap_or(false),
            rigid_check: file.rigid_check.unwrap_or(true),
            heads,
        })
    }

    /// Layers `flags` over the config file, if any. The explicit path wins
    /// over the environment variable.
    pub fn resolve(
        flags: ConfigFile,
        explicit_path: Option<&Path>,
        env_path: Option<&Path>,
    ) -> Result<ServiceConfig, ConfigError> {
        let file = match explicit_path.or(env_path) {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        ServiceConfig::from_file(flags.or(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(file: ConfigFile) -> &'static str {
        match ServiceConfig::from_file(file).unwrap_err() {
            ConfigError::Invalid { field, .. } => field,
            other => panic!("{other}"),
        }
    }

    #[test]
    fn defaults() {
        let c = ServiceConfig::default();
        assert_eq!(c.top_k, 10);
        assert_eq!(c.threshold, 0.30);
        assert_eq!(c.bounds, StoryBounds { min: 1, max: 3 });
        assert_eq!(c.port, 8080);
        assert_eq!(c.search, "best-first");
        assert!(!c.include_basics);
    }

    #[test]
    fn invalid_values_name_the_field() {
        let f = |edit: fn(&mut ConfigFile)| {
            let mut file = ConfigFile::default();
            edit(&mut file);
            field_of(file)
        };
        assert_eq!(f(|c| c.port = Some(-1)), "port");
        assert_eq!(f(|c| c.port = Some(70000)), "port");
        assert_eq!(f(|c| c.threshold = Some(0.0)), "threshold");
        assert_eq!(f(|c| c.threshold = Some(1.5)), "threshold");
        assert_eq!(f(|c| c.top_k = Some(0)), "top_k");
        assert_eq!(f(|c| c.top_k = Some(40)), "top_k");
        assert_eq!(f(|c| c.min_items = Some(0)), "min_items");
        assert_eq!(f(|c| {
            c.min_items = Some(3);
            c.max_items = Some(2);
        }), "max_items");
        assert_eq!(f(|c| c.language = Some("de".into())), "language");
        assert_eq!(f(|c| c.lemmatizer = Some("porter".into())), "lemmatizer");
        assert_eq!(f(|c| c.search = Some("random".into())), "search");
        assert_eq!(f(|c| c.triviality = Some("modifier".into())), "triviality");
        assert_eq!(
            f(|c| c.heads = Some([("Love".to_string(), "Fear".to_string())].into())),
            "heads"
        );
        let msg = ServiceConfig::from_file(ConfigFile {
            port: Some(-1),
            ..ConfigFile::default()
        })
        .unwrap_err()
        .to_string();
        assert!(msg.contains("port"), "{msg}");
    }

    #[test]
    fn flags_override_file_and_paths_resolve_against_it() {
        let dir = std::env::temp_dir().join(format!("affekt-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("affekt.json");
        std::fs::write(&path, r#"{"top_k": 5, "port": 9000, "lexicon": "lex.tsv"}"#).unwrap();
        let flags = ConfigFile {
            port: Some(9001),
            ..ConfigFile::default()
        };
        let c = ServiceConfig::resolve(flags, None, Some(&path)).unwrap();
        assert_eq!(c.top_k, 5);
        assert_eq!(c.port, 9001);
        assert_eq!(c.lexicon.as_deref(), Some(dir.join("lex.tsv").as_path()));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = std::env::temp_dir().join(format!("affekt-config-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("affekt.json");
        std::fs::write(&path, r#"{"topk": 5}"#).unwrap();
        assert!(ConfigFile::load(&path).unwrap_err().to_string().contains("topk"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
