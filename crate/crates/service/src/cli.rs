//! Command-line surface. Exit status: 0 success, 1 validation error, 2 I/O
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use affekt_core::classify::{RecommendationKind, Story};
use affekt_core::lexicon::{prototypes_to_kb, LexiconError};
use affekt_core::text::{load_items, parse_item, TextError};
use affekt_core::EmotionId;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{ConfigError, ConfigFile, ServiceConfig};
use crate::engine::{self, Analyzer, EngineError, PrototypeSet};
use crate::http::{router, AppState, DEFAULT_LIMIT};
use crate::store::{CatalogStore, StoreError, WriteOutcome};
use crate::views::ItemEmotions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "affekt", version, about = "Affective classification and story recommendation")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON config file; overrides $AFFEKT_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Catalog store directory.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    /// Emotion-intensity lexicon (term, emotion, intensity TSV).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Terms kept per basic emotion.
    #[arg(long, global = true, allow_negative_numbers = true)]
    top_k: Option<i64>,
    /// Fraction of typical terms an item must carry.
    #[arg(long, global = true, allow_negative_numbers = true)]
    threshold: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    min_items: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    max_items: Option<i64>,
    /// Stopword list: en, it, en+it or none.
    #[arg(long, global = true)]
    language: Option<String>,
    /// JSON map from item lemmas to lexicon terms.
    #[arg(long, global = true)]
    translation: Option<PathBuf>,
    #[arg(long, global = true)]
    lemmatizer: Option<String>,
    /// Scenario search strategy.
    #[arg(long, global = true)]
    search: Option<String>,
    /// Triviality rule: head-only or head-and-modifier.
    #[arg(long, global = true)]
    triviality: Option<String>,
    /// Also classify against the eight basic emotions.
    #[arg(long, global = true)]
    include_basics: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build prototypes from the lexicon, then classify and store items.
    Ingest {
        /// Directory of *.json item files, or a JSON-lines file.
        #[arg(long)]
        items: PathBuf,
        /// Stories to store after the items (directory or JSON lines).
        #[arg(long)]
        stories: Option<PathBuf>,
    },
    /// Print the combined prototype of two basic emotions.
    Combine {
        #[arg(long)]
        head: String,
        #[arg(long)]
        modifier: String,
    },
    /// Classify one item file without storing it.
    Classify {
        #[arg(long)]
        item: PathBuf,
    },
    /// Recommend stories related to a stored story.
    Recommend {
        #[arg(long)]
        story: String,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = DEFAULT_LIMIT as i64, allow_negative_numbers = true)]
        limit: i64,
    },
    /// Write all emotion assertions as N-Triples ("-" for stdout).
    Export {
        #[arg(long)]
        triples: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, allow_negative_numbers = true)]
        port: Option<i64>,
        #[arg(long)]
        host: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Invalid { .. } => CliError::Validation(e.to_string()),
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Io { .. }
            | EngineError::Lexicon {
                source: LexiconError::Io(_),
                ..
            } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Io { .. } | StoreError::Corrupt { .. } | StoreError::Locked(_) => {
                CliError::Io(e.to_string())
            }
            StoreError::Item(TextError::Io { .. }) => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<TextError> for CliError {
    fn from(e: TextError) -> Self {
        match e {
            TextError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("writing output: {e}"))
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let line = serde_json::to_string(value).expect("views serialize");
    writeln!(out, "{line}").map_err(out_err)
}

impl GlobalArgs {
    fn flags(&self) -> ConfigFile {
        ConfigFile {
            lexicon: self.lexicon.clone(),
            top_k: self.top_k,
            threshold: self.threshold,
            min_items: self.min_items,
            max_items: self.max_items,
            language: self.language.clone(),
            translation: self.translation.clone(),
            store: self.store.clone(),
            lemmatizer: self.lemmatizer.clone(),
            search: self.search.clone(),
            triviality: self.triviality.clone(),
            include_basics: self.include_basics.then_some(true),
            ..ConfigFile::default()
        }
    }
}

/// Parses `args` and runs the command, returning the exit status.
/// `env_config` is the value of `$AFFEKT_CONFIG`, if set.
pub fn run<I, T>(args: I, env_config: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_VALIDATION
                }
            };
        }
    };
    match execute(cli, env_config, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, env_config: Option<PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    let mut flags = cli.global.flags();
    if let Command::Serve { port, host } = &cli.command {
        flags.port = *port;
        flags.host = host.clone();
    }
    let config = ServiceConfig::resolve(flags, cli.global.config.as_deref(), env_config.as_deref())?;
    match cli.command {
        Command::Ingest { items, stories } => ingest(&config, &items, stories.as_deref(), out),
        Command::Combine { head, modifier } => combine(&config, &head, &modifier, out),
        Command::Classify { item } => classify(&config, &item, out),
        Command::Recommend { story, kind, limit } => recommend(&config, &story, &kind, limit, out),
        Command::Export { triples } => export(&config, &triples, out),
        Command::Serve { .. } => serve(&config, out),
    }
}

fn lexicon_path(config: &ServiceConfig) -> Result<&Path, CliError> {
    config
        .lexicon
        .as_deref()
        .ok_or_else(|| EngineError::NoLexicon.into())
}

/// Story files: a directory of `*.json` (sorted by name) or JSON lines.
fn load_stories(path: &Path) -> Result<Vec<Story>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let parse = |text: &str, origin: String| {
        Story::parse(text).map_err(|e| CliError::Validation(format!("{origin}: {e}")))
    };
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(io)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()
            .map_err(io)?;
        files.retain(|p| p.extension().is_some_and(|x| x == "json"));
        files.sort();
        files
            .iter()
            .map(|f| {
                let text = std::fs::read_to_string(f).map_err(io)?;
                parse(&text, f.display().to_string())
            })
            .collect()
    } else {
        let text = std::fs::read_to_string(path).map_err(io)?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| parse(l, format!("{} line {}", path.display(), i + 1)))
            .collect()
    }
}

#[derive(Serialize)]
struct WriteCounts {
    created: usize,
    unchanged: usize,
}

#[derive(Serialize)]
struct IngestSummary {
    revision: u64,
    prototypes: &'static str,
    items: WriteCounts,
    skipped: Vec<String>,
    stories: WriteCounts,
}

fn count(counts: &mut WriteCounts, outcome: WriteOutcome) {
    match outcome {
        WriteOutcome::Created => counts.created += 1,
        WriteOutcome::Unchanged => counts.unchanged += 1,
    }
}

fn ingest(config: &ServiceConfig, items: &Path, stories: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let prototypes = engine::build_prototypes(lexicon_path(config)?, config)?;
    let records = load_items(items)?;
    let stories = stories.map(load_stories).transpose()?.unwrap_or_default();
    let store = CatalogStore::open(&config.store, Analyzer::from_config(config)?)?;
    let proto_outcome = store.set_prototypes(prototypes)?;
    let mut summary = IngestSummary {
        revision: 0,
        prototypes: match proto_outcome {
            WriteOutcome::Created => "created",
            WriteOutcome::Unchanged => "unchanged",
        },
        items: WriteCounts { created: 0, unchanged: 0 },
        skipped: Vec::new(),
        stories: WriteCounts { created: 0, unchanged: 0 },
    };
    for record in records {
        let id = record.id.clone();
        match store.put_item(record) {
            Ok((outcome, _)) => count(&mut summary.items, outcome),
            Err(StoreError::Item(e @ TextError::EmptyProfile(_))) => {
                tracing::warn!(item = %id, "skipped: {e}");
                summary.skipped.push(id);
            }
            Err(e) => return Err(e.into()),
        }
    }
    for story in stories {
        let (outcome, _) = store.put_story(story)?;
        count(&mut summary.stories, outcome);
    }
    summary.revision = store.snapshot().revision;
    print_json(out, &summary)
}

/// Basic emotion by name, case-insensitively.
fn basic(name: &str, flag: &str) -> Result<EmotionId, CliError> {
    EmotionId::from_name(name)
        .filter(|e| e.is_basic())
        .ok_or_else(|| CliError::Validation(format!("--{flag}: `{name}` is not a basic emotion")))
}

fn combine(config: &ServiceConfig, head: &str, modifier: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let (h, m) = (basic(head, "head")?, basic(modifier, "modifier")?);
    if h == m {
        return Err(CliError::Validation("--head and --modifier must differ".into()));
    }
    let basics = engine::build_basics(lexicon_path(config)?, config)?;
    let kb = prototypes_to_kb(&basics).map_err(|e| CliError::Validation(e.to_string()))?;
    let concept = match affekt_core::build_wheel().dyad(h, m) {
        Some(d) => d.name().to_string(),
        None => format!("{}+{}", h.name(), m.name()),
    };
    let prototype = engine::combiner(config)
        .combine_named(&kb, h.name(), m.name(), &concept)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let text = serde_json::to_string_pretty(&prototype.to_document()).expect("documents serialize");
    writeln!(out, "{text}").map_err(out_err)
}

/// Prototypes of the store when it has them, otherwise built from the lexicon.
fn current_prototypes(config: &ServiceConfig, store: &CatalogStore) -> Result<PrototypeSet, CliError> {
    match &store.snapshot().prototypes {
        Some(p) => Ok((**p).clone()),
        None => Ok(engine::build_prototypes(lexicon_path(config)?, config)?),
    }
}

fn classify(config: &ServiceConfig, item: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(item)
        .map_err(|e| CliError::Io(format!("{}: {e}", item.display())))?;
    let record = parse_item(&text)?;
    let analyzer = Analyzer::from_config(config)?;
    let store = CatalogStore::open_read_only(&config.store, analyzer.clone())?;
    let prototypes = current_prototypes(config, &store)?;
    let (_, assignments) =
        analyzer.analyze_item(&record, &prototypes.classifier_prototypes(analyzer.include_basics))?;
    print_json(out, &ItemEmotions::new(&record.id, &assignments))
}

fn recommend(
    config: &ServiceConfig,
    story: &str,
    kind: &str,
    limit: i64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let kind: RecommendationKind = kind
        .parse()
        .map_err(|e| CliError::Validation(format!("--kind: {e}")))?;
    let limit = usize::try_from(limit)
        .ok()
        .filter(|&l| l > 0)
        .ok_or_else(|| CliError::Validation(format!("--limit must be positive (got {limit})")))?;
    let store = CatalogStore::open_read_only(&config.store, Analyzer::from_config(config)?)?;
    let recommendation = store
        .snapshot()
        .recommend(&affekt_core::build_wheel(), story, kind, limit)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    print_json(out, &recommendation)
}

fn export(config: &ServiceConfig, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let store = CatalogStore::open_read_only(&config.store, Analyzer::from_config(config)?)?;
    let triples = store.snapshot().triples();
    if path == Path::new("-") {
        return out.write_all(triples.as_bytes()).map_err(out_err);
    }
    std::fs::write(path, triples).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn serve(config: &ServiceConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let store = CatalogStore::open(&config.store, Analyzer::from_config(config)?)?;
    if store.snapshot().prototypes.is_none() {
        match &config.lexicon {
            Some(lexicon) => {
                store.set_prototypes(engine::build_prototypes(lexicon, config)?)?;
            }
            None => tracing::warn!("no prototypes and no lexicon; POST /items will fail until `ingest` runs"),
        }
    }
    let state = AppState::new(store);
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Io(format!("starting runtime: {e}")))?;
    runtime.block_on(async {
        let addr = format!("{}:{}", config.host, config.port);
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| CliError::Io(format!("binding {addr}: {e}")))?;
        let local = listener
            .local_addr()
            .map_err(|e| CliError::Io(format!("binding {addr}: {e}")))?;
        writeln!(out, "listening on http://{local}").map_err(out_err)?;
        out.flush().map_err(out_err)?;
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::Io(format!("serving: {e}")))
    })
}
