//! Append-only catalog store.
//!
//! Inputs (item records, stories, prototype sets) are logged as JSON lines,
//! one file per entity type, each line stamped with the store revision it
//! created. Profiles, assignments and story profiles are derived state and are
//! recomputed on replay. A trailing line without its newline is a torn write
//! that was never acknowledged; it is dropped on open.
//!
//! One writer at a time; readers take an `Arc<Snapshot>` and never block it.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use affekt_core::classify::{
    classify_story, export_assignments, recommend, EmotionAssignment, EmotionPrototype,
    RecommendError, Recommendation, RecommendationKind, Story, StoryEmotionProfile, StoryEntry,
    StoryError,
};
use affekt_core::text::{ItemProfile, ItemRecord, TextError};
use affekt_core::WheelCatalog;
use parking_lot::{Mutex, RwLock};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::engine::{Analyzer, PrototypeSet, PrototypeSetDocument};

pub const ITEMS_LOG: &str = "items.jsonl";
pub const STORIES_LOG: &str = "stories.jsonl";
pub const PROTOTYPES_LOG: &str = "prototypes.jsonl";
const LOCK_FILE: &str = "LOCK";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file} line {line}: {message}")]
    Corrupt {
        file: String,
        line: usize,
        message: String,
    },
    #[error("store {0} is locked by another process")]
    Locked(String),
    #[error("store opened read-only")]
    ReadOnly,
    #[error("no prototypes loaded; run `ingest` with a lexicon first")]
    NoPrototypes,
    #[error("{kind} `{id}` already exists with different content")]
    Conflict { kind: &'static str, id: String },
    #[error(transparent)]
    Item(#[from] TextError),
    #[error(transparent)]
    Story(#[from] StoryError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteOutcome {
    Created,
    /// Identical content was already stored; nothing was written.
    Unchanged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredItem {
    pub record: ItemRecord,
    pub profile: ItemProfile,
    pub assignments: Vec<EmotionAssignment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredStory {
    pub story: Story,
    pub profile: StoryEmotionProfile,
}

/// Immutable view of the catalog at one revision.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    pub revision: u64,
    pub prototypes: Option<Arc<PrototypeSet>>,
    pub items: BTreeMap<String, Arc<StoredItem>>,
    pub stories: BTreeMap<String, Arc<StoredStory>>,
}

impl Snapshot {
    pub fn item(&self, id: &str) -> Option<&StoredItem> {
        self.items.get(id).map(Arc::as_ref)
    }

    pub fn story(&self, id: &str) -> Option<&StoredStory> {
        self.stories.get(id).map(Arc::as_ref)
    }

    /// Stories containing `item_id`, by story id.
    pub fn stories_with_item<'a>(&'a self, item_id: &'a str) -> impl Iterator<Item = &'a StoredStory> {
        self.stories
            .values()
            .filter(move |s| s.story.item_ids().any(|i| i == item_id))
            .map(Arc::as_ref)
    }

    pub fn recommend(
        &self,
        wheel: &WheelCatalog,
        story: &str,
        kind: RecommendationKind,
        limit: usize,
    ) -> Result<Recommendation, RecommendError> {
        let catalog: Vec<StoryEntry<'_>> = self
            .stories
            .values()
            .map(|s| StoryEntry {
                id: &s.story.id,
                creator: &s.story.creator,
                profile: &s.profile,
            })
            .collect();
        recommend(wheel, story, &catalog, kind, limit)
    }

    /// Item and story assignments as N-Triples.
    pub fn triples(&self) -> String {
        let stories: Vec<EmotionAssignment> =
            self.stories.values().flat_map(|s| s.profile.assignments()).collect();
        export_assignments(
            self.items
                .values()
                .flat_map(|i| i.assignments.iter())
                .chain(stories.iter()),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ItemLine {
    rev: u64,
    item: ItemRecord,
}

#[derive(Serialize, Deserialize)]
struct StoryLine {
    rev: u64,
    story: Story,
}

#[derive(Serialize, Deserialize)]
struct PrototypesLine {
    rev: u64,
    prototypes: PrototypeSetDocument,
}

struct Logs {
    items: File,
    stories: File,
    prototypes: File,
    _lock: File,
}

pub struct CatalogStore {
    root: PathBuf,
    analyzer: Analyzer,
    snapshot: RwLock<Arc<Snapshot>>,
    writer: Mutex<Option<Logs>>,
}

impl std::fmt::Debug for CatalogStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogStore")
            .field("root", &self.root)
            .field("revision", &self.snapshot().revision)
            .finish()
    }
}

/// Complete lines of a log. A torn tail is cut off when `repair` is set.
fn read_log<T: DeserializeOwned>(path: &Path, repair: bool) -> Result<Vec<T>, StoreError> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let complete = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    if complete < bytes.len() {
        tracing::warn!(
            file = %path.display(),
            bytes = bytes.len() - complete,
            "dropping torn trailing write"
        );
        if repair {
            let f = OpenOptions::new().write(true).open(path).map_err(io_err(path))?;
            f.set_len(complete as u64).map_err(io_err(path))?;
            f.sync_all().map_err(io_err(path))?;
        }
    }
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    bytes[..complete]
        .split(|&b| b == b'\n')
        .enumerate()
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| {
            serde_json::from_slice(line).map_err(|e| StoreError::Corrupt {
                file: file.clone(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

fn open_append(path: &Path) -> Result<File, StoreError> {
    OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))
}

/// Writes one line and syncs it; on failure the file is cut back so the log
/// never keeps a half-written record.
fn append_line<T: Serialize>(file: &mut File, path: &Path, value: &T) -> Result<(), StoreError> {
    let mut line = serde_json::to_vec(value).expect("log records serialize");
    line.push(b'\n');
    let before = file.metadata().map_err(io_err(path))?.len();
    let result = file.write_all(&line).and_then(|()| file.sync_data());
    if let Err(e) = result {
        let _ = file.set_len(before);
        return Err(io_err(path)(e));
    }
    Ok(())
}

fn assignment_map<'a>(
    items: &BTreeMap<String, Arc<StoredItem>>,
    ids: impl Iterator<Item = &'a str>,
) -> BTreeMap<String, Vec<EmotionAssignment>> {
    ids.filter_map(|id| items.get(id).map(|i| (id.to_string(), i.assignments.clone())))
        .collect()
}

impl CatalogStore {
    /// Opens (creating if needed) a store for writing. Holds an exclusive lock
    /// on the directory until dropped.
    pub fn open(root: impl Into<PathBuf>, analyzer: Analyzer) -> Result<CatalogStore, StoreError> {
        let root = root.into();
        std::fs::create_dir_all(&root).map_err(io_err(&root))?;
        let lock_path = root.join(LOCK_FILE);
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(io_err(&lock_path))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(std::fs::TryLockError::WouldBlock) => {
                return Err(StoreError::Locked(root.display().to_string()))
            }
            Err(std::fs::TryLockError::Error(e)) => return Err(io_err(&lock_path)(e)),
        }
        let snapshot = Self::replay(&root, &analyzer, true)?;
        let logs = Logs {
            items: open_append(&root.join(ITEMS_LOG))?,
            stories: open_append(&root.join(STORIES_LOG))?,
            prototypes: open_append(&root.join(PROTOTYPES_LOG))?,
            _lock: lock,
        };
        #[cfg(unix)]
        if let Ok(dir) = File::open(&root) {
            let _ = dir.sync_all();
        }
        Ok(CatalogStore {
            root,
            analyzer,
            snapshot: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(Some(logs)),
        })
    }

    /// Replays without locking or repairing; writes fail with `ReadOnly`.
    /// A missing directory reads as an empty catalog.
    pub fn open_read_only(root: impl Into<PathBuf>, analyzer: Analyzer) -> Result<CatalogStore, StoreError> {
        let root = root.into();
        let snapshot = Self::replay(&root, &analyzer, false)?;
        Ok(CatalogStore {
            root,
            analyzer,
            snapshot: RwLock::new(Arc::new(snapshot)),
            writer: Mutex::new(None),
        })
    }

    fn replay(root: &Path, analyzer: &Analyzer, repair: bool) -> Result<Snapshot, StoreError> {
        let prototypes: Vec<PrototypesLine> = read_log(&root.join(PROTOTYPES_LOG), repair)?;
        let items: Vec<ItemLine> = read_log(&root.join(ITEMS_LOG), repair)?;
        let stories: Vec<StoryLine> = read_log(&root.join(STORIES_LOG), repair)?;
        let revision = prototypes
            .iter()
            .map(|l| l.rev)
            .chain(items.iter().map(|l| l.rev))
            .chain(stories.iter().map(|l| l.rev))
            .max()
            .unwrap_or(0);
        let corrupt = |file: &str, message: String| StoreError::Corrupt {
            file: file.to_string(),
            line: 0,
            message,
        };
        let prototypes = match prototypes.last() {
            Some(line) => Some(Arc::new(
                PrototypeSet::from_document(&line.prototypes)
                    .map_err(|e| corrupt(PROTOTYPES_LOG, e.to_string()))?,
            )),
            None => None,
        };
        let mut snapshot = Snapshot {
            revision,
            prototypes,
            ..Snapshot::default()
        };
        let records: Vec<ItemRecord> = items.into_iter().map(|l| l.item).collect();
        let stories: Vec<Story> = stories.into_iter().map(|l| l.story).collect();
        if !records.is_empty() && snapshot.prototypes.is_none() {
            return Err(corrupt(ITEMS_LOG, "items logged before any prototypes".into()));
        }
        Self::derive(analyzer, &mut snapshot, records, stories)
            .map_err(|e| corrupt(ITEMS_LOG, format!("replay under the current configuration failed: {e}")))?;
        Ok(snapshot)
    }

    /// Recomputes all derived state of `snapshot` from the given inputs.
    fn derive(
        analyzer: &Analyzer,
        snapshot: &mut Snapshot,
        records: Vec<ItemRecord>,
        stories: Vec<Story>,
    ) -> Result<(), StoreError> {
        let prototypes = match &snapshot.prototypes {
            Some(p) => p.classifier_prototypes(analyzer.include_basics),
            None => Vec::new(),
        };
        snapshot.items.clear();
        for record in records {
            let (profile, assignments) = analyzer.analyze_item(&record, &prototypes)?;
            snapshot.items.insert(
                record.id.clone(),
                Arc::new(StoredItem {
                    record,
                    profile,
                    assignments,
                }),
            );
        }
        snapshot.stories.clear();
        for story in stories {
            // Stories were validated when written; bounds may have changed since.
            let map = assignment_map(&snapshot.items, story.item_ids());
            let profile = classify_story(&story, &map)?;
            snapshot
                .stories
                .insert(story.id.clone(), Arc::new(StoredStory { story, profile }));
        }
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot.read().clone()
    }

    fn publish(&self, snapshot: Snapshot) {
        *self.snapshot.write() = Arc::new(snapshot);
    }

    /// Installs a new prototype set and reclassifies everything under it.
    pub fn set_prototypes(&self, set: PrototypeSet) -> Result<WriteOutcome, StoreError> {
        let mut guard = self.writer.lock();
        let logs = guard.as_mut().ok_or(StoreError::ReadOnly)?;
        let current = self.snapshot();
        if current.prototypes.as_deref() == Some(&set) {
            return Ok(WriteOutcome::Unchanged);
        }
        let mut next = Snapshot {
            revision: current.revision + 1,
            prototypes: Some(Arc::new(set)),
            ..Snapshot::default()
        };
        Self::derive(
            &self.analyzer,
            &mut next,
            current.items.values().map(|i| i.record.clone()).collect(),
            current.stories.values().map(|s| s.story.clone()).collect(),
        )?;
        let line = PrototypesLine {
            rev: next.revision,
            prototypes: next.prototypes.as_ref().expect("just set").to_document(),
        };
        append_line(&mut logs.prototypes, &self.root.join(PROTOTYPES_LOG), &line)?;
        self.publish(next);
        Ok(WriteOutcome::Created)
    }

    /// Profiles, classifies and stores an item. Re-posting an identical record
    /// is a no-op; a different record under a known id is a conflict.
    pub fn put_item(&self, record: ItemRecord) -> Result<(WriteOutcome, Arc<StoredItem>), StoreError> {
        let mut guard = self.writer.lock();
        let logs = guard.as_mut().ok_or(StoreError::ReadOnly)?;
        let current = self.snapshot();
        if let Some(existing) = current.items.get(&record.id) {
            if existing.record == record {
                return Ok((WriteOutcome::Unchanged, existing.clone()));
            }
            return Err(StoreError::Conflict {
                kind: "item",
                id: record.id,
            });
        }
        let prototypes = current.prototypes.as_ref().ok_or(StoreError::NoPrototypes)?;
        let (profile, assignments) = self
            .analyzer
            .analyze_item(&record, &prototypes.classifier_prototypes(self.analyzer.include_basics))?;
        let revision = current.revision + 1;
        append_line(
            &mut logs.items,
            &self.root.join(ITEMS_LOG),
            &ItemLine {
                rev: revision,
                item: record.clone(),
            },
        )?;
        let stored = Arc::new(StoredItem {
            record,
            profile,
            assignments,
        });
        let mut next = (*current).clone();
        next.revision = revision;
        next.items.insert(stored.record.id.clone(), stored.clone());
        self.publish(next);
        Ok((WriteOutcome::Created, stored))
    }

    /// Validates a story against the configured bounds and the catalog, then
    /// stores it with its emotion profile.
    pub fn put_story(&self, story: Story) -> Result<(WriteOutcome, Arc<StoredStory>), StoreError> {
        let mut guard = self.writer.lock();
        let logs = guard.as_mut().ok_or(StoreError::ReadOnly)?;
        let current = self.snapshot();
        if let Some(existing) = current.stories.get(&story.id) {
            if existing.story == story {
                return Ok((WriteOutcome::Unchanged, existing.clone()));
            }
            return Err(StoreError::Conflict {
                kind: "story",
                id: story.id,
            });
        }
        let map = assignment_map(&current.items, story.item_ids());
        let profile = self.analyzer.analyze_story(&story, &map)?;
        let revision = current.revision + 1;
        append_line(
            &mut logs.stories,
            &self.root.join(STORIES_LOG),
            &StoryLine {
                rev: revision,
                story: story.clone(),
            },
        )?;
        let stored = Arc::new(StoredStory { story, profile });
        let mut next = (*current).clone();
        next.revision = revision;
        next.stories.insert(stored.story.id.clone(), stored.clone());
        self.publish(next);
        Ok((WriteOutcome::Created, stored))
    }

    /// Classifies an item against the current prototypes without storing it.
    pub fn classify_transient(&self, record: &ItemRecord) -> Result<Vec<EmotionAssignment>, StoreError> {
        let snapshot = self.snapshot();
        let prototypes = snapshot.prototypes.as_ref().ok_or(StoreError::NoPrototypes)?;
        let protos: Vec<EmotionPrototype> = prototypes.classifier_prototypes(self.analyzer.include_basics);
        Ok(self.analyzer.analyze_item(record, &protos)?.1)
    }
}
