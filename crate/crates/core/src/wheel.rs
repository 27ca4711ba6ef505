//! The Plutchik wheel: eight basic emotions on a circle and the 24 dyads
//! formed by non-opposite pairs.
//!
//! Positions are kept in half-sector units (one sector is 45°), so a basic
//! emotion in sector `s` sits at `2s` and a dyad sits at the circular midpoint
//! of its components along the shorter arc.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Number of basic emotions (sectors) on the wheel.
pub const SECTORS: u8 = 8;
/// Number of catalog emotions: 8 basics followed by 24 dyads.
pub const EMOTION_COUNT: usize = 32;

const HALF_UNITS: u8 = 2 * SECTORS;

/// Basic emotion names in canonical sector order.
const BASIC_NAMES: [&str; 8] = [
    "Joy",
    "Trust",
    "Fear",
    "Surprise",
    "Sadness",
    "Disgust",
    "Anger",
    "Anticipation",
];

/// Dyad table: (name, first sector, second sector).
const DYADS: [(&str, u8, u8); 24] = [
    // primary, distance 1
    ("Love", 0, 1),
    ("Submission", 1, 2),
    ("Awe", 2, 3),
    ("Disapproval", 3, 4),
    ("Remorse", 4, 5),
    ("Contempt", 5, 6),
    ("Aggressiveness", 6, 7),
    ("Optimism", 7, 0),
    // secondary, distance 2
    ("Guilt", 0, 2),
    ("Curiosity", 1, 3),
    ("Despair", 2, 4),
    ("Unbelief", 3, 5),
    ("Envy", 4, 6),
    ("Cynicism", 5, 7),
    ("Pride", 6, 0),
    ("Hope", 7, 1),
    // tertiary, distance 3
    ("Delight", 0, 3),
    ("Sentimentality", 1, 4),
    ("Shame", 2, 5),
    ("Outrage", 3, 6),
    ("Pessimism", 4, 7),
    ("Morbidness", 5, 0),
    ("Dominance", 6, 1),
    ("Anxiety", 7, 2),
];

/// Index into the fixed emotion catalog: `0..8` are basics in sector order,
/// `8..32` are dyads.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmotionId(u8);

impl EmotionId {
    pub const JOY: EmotionId = EmotionId(0);
    pub const TRUST: EmotionId = EmotionId(1);
    pub const FEAR: EmotionId = EmotionId(2);
    pub const SURPRISE: EmotionId = EmotionId(3);
    pub const SADNESS: EmotionId = EmotionId(4);
    pub const DISGUST: EmotionId = EmotionId(5);
    pub const ANGER: EmotionId = EmotionId(6);
    pub const ANTICIPATION: EmotionId = EmotionId(7);

    /// All 32 catalog emotions, basics first.
    pub fn all() -> impl Iterator<Item = EmotionId> {
        (0..EMOTION_COUNT as u8).map(EmotionId)
    }

    pub fn basics() -> impl Iterator<Item = EmotionId> {
        (0..SECTORS).map(EmotionId)
    }

    pub fn dyads() -> impl Iterator<Item = EmotionId> {
        (SECTORS..EMOTION_COUNT as u8).map(EmotionId)
    }

    pub fn from_index(index: usize) -> Option<EmotionId> {
        (index < EMOTION_COUNT).then_some(EmotionId(index as u8))
    }

    /// Case-insensitive lookup by name.
    pub fn from_name(name: &str) -> Option<EmotionId> {
        static INDEX: OnceLock<HashMap<String, EmotionId>> = OnceLock::new();
        INDEX
            .get_or_init(|| {
                EmotionId::all()
                    .map(|id| (id.name().to_ascii_lowercase(), id))
                    .collect()
            })
            .get(&name.trim().to_ascii_lowercase())
            .copied()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        if self.is_basic() {
            BASIC_NAMES[self.0 as usize]
        } else {
            DYADS[(self.0 - SECTORS) as usize].0
        }
    }

    pub fn is_basic(self) -> bool {
        self.0 < SECTORS
    }

    /// Sector of a basic emotion.
    pub fn sector(self) -> Option<u8> {
        self.is_basic().then_some(self.0)
    }

    /// Component basics of a dyad, in table order.
    pub fn components(self) -> Option<(EmotionId, EmotionId)> {
        if self.is_basic() {
            return None;
        }
        let (_, a, b) = DYADS[(self.0 - SECTORS) as usize];
        Some((EmotionId(a), EmotionId(b)))
    }

    /// Angular position in half-sector units, `0..16`.
    pub fn half_position(self) -> u8 {
        match self.components() {
            None => 2 * self.0,
            Some((a, b)) => midpoint(a.0, b.0),
        }
    }

    /// Angular position in sector units (`0, 0.5, …, 7.5`).
    pub fn position(self) -> f64 {
        f64::from(self.half_position()) / 2.0
    }
}

impl fmt::Debug for EmotionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for EmotionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for EmotionId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for EmotionId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        EmotionId::from_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown emotion `{name}`")))
    }
}

impl std::str::FromStr for EmotionId {
    type Err = UnknownEmotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EmotionId::from_name(s).ok_or_else(|| UnknownEmotion(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown emotion `{0}`")]
pub struct UnknownEmotion(pub String);

fn sector_distance(a: u8, b: u8) -> u8 {
    let d = a.abs_diff(b);
    d.min(SECTORS - d)
}

fn half_distance(a: u8, b: u8) -> u8 {
    let d = a.abs_diff(b);
    d.min(HALF_UNITS - d)
}

/// Circular midpoint of two sectors along the shorter arc, in half units.
fn midpoint(a: u8, b: u8) -> u8 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi - lo <= SECTORS / 2 {
        lo + hi
    } else {
        (lo + SECTORS + hi) % HALF_UNITS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DyadKind {
    Primary,
    Secondary,
    Tertiary,
}

impl DyadKind {
    fn from_distance(d: u8) -> Option<DyadKind> {
        match d {
            1 => Some(DyadKind::Primary),
            2 => Some(DyadKind::Secondary),
            3 => Some(DyadKind::Tertiary),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicEmotion {
    pub name: &'static str,
    pub sector: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompoundEmotion {
    pub name: &'static str,
    pub components: [&'static str; 2],
    pub kind: DyadKind,
    /// Sector units, multiples of 0.5.
    pub position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionRelation {
    Same,
    Similar,
    Opposite,
    None,
}

impl EmotionRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            EmotionRelation::Same => "same",
            EmotionRelation::Similar => "similar",
            EmotionRelation::Opposite => "opposite",
            EmotionRelation::None => "none",
        }
    }
}

impl std::str::FromStr for EmotionRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "same" => Ok(EmotionRelation::Same),
            "similar" => Ok(EmotionRelation::Similar),
            "opposite" => Ok(EmotionRelation::Opposite),
            "none" => Ok(EmotionRelation::None),
            other => Err(format!("unknown relation kind `{other}`")),
        }
    }
}

/// The fixed wheel. Immutable once built.
#[derive(Debug, Clone)]
pub struct WheelCatalog {
    basics: Vec<BasicEmotion>,
    dyads: Vec<CompoundEmotion>,
    by_pair: HashMap<(u8, u8), EmotionId>,
}

pub fn build_wheel() -> WheelCatalog {
    let basics = EmotionId::basics()
        .map(|id| BasicEmotion {
            name: id.name(),
            sector: id.0,
        })
        .collect();
    let mut dyads = Vec::with_capacity(DYADS.len());
    let mut by_pair = HashMap::with_capacity(DYADS.len());
    for id in EmotionId::dyads() {
        let (a, b) = id.components().expect("dyad");
        let kind = DyadKind::from_distance(sector_distance(a.0, b.0))
            .expect("dyad table holds only distances 1..=3");
        dyads.push(CompoundEmotion {
            name: id.name(),
            components: [a.name(), b.name()],
            kind,
            position: id.position(),
        });
        by_pair.insert(ordered(a.0, b.0), id);
    }
    WheelCatalog {
        basics,
        dyads,
        by_pair,
    }
}

fn ordered(a: u8, b: u8) -> (u8, u8) {
    (a.min(b), a.max(b))
}

impl WheelCatalog {
    pub fn basics(&self) -> &[BasicEmotion] {
        &self.basics
    }

    pub fn dyads(&self) -> &[CompoundEmotion] {
        &self.dyads
    }

    pub fn lookup(&self, name: &str) -> Option<EmotionId> {
        EmotionId::from_name(name)
    }

    /// The dyad composed of two basics, if they are at distance 1..=3.
    pub fn dyad(&self, a: EmotionId, b: EmotionId) -> Option<EmotionId> {
        let (sa, sb) = (a.sector()?, b.sector()?);
        self.by_pair.get(&ordered(sa, sb)).copied()
    }

    pub fn kind(&self, dyad: EmotionId) -> Option<DyadKind> {
        let (a, b) = dyad.components()?;
        DyadKind::from_distance(self.radial_distance(a, b))
    }

    /// Sector distance between two basics, `0..=4`.
    pub fn radial_distance(&self, a: EmotionId, b: EmotionId) -> u8 {
        let sa = a.sector().expect("radial_distance takes basic emotions");
        let sb = b.sector().expect("radial_distance takes basic emotions");
        sector_distance(sa, sb)
    }

    pub fn opposite_of(&self, e: EmotionId) -> EmotionId {
        match e.components() {
            None => EmotionId((e.0 + SECTORS / 2) % SECTORS),
            Some((a, b)) => {
                let (oa, ob) = (self.opposite_of(a), self.opposite_of(b));
                self.dyad(oa, ob)
                    .expect("opposites of a dyad's components form a dyad")
            }
        }
    }

    /// Angular distance between two catalog emotions in half-sector units.
    pub fn angular_distance(&self, a: EmotionId, b: EmotionId) -> u8 {
        half_distance(a.half_position(), b.half_position())
    }

    pub fn relation(&self, a: EmotionId, b: EmotionId) -> EmotionRelation {
        if a == b {
            EmotionRelation::Same
        } else if self.opposite_of(a) == b {
            EmotionRelation::Opposite
        } else if self.angular_distance(a, b) <= 2 {
            EmotionRelation::Similar
        } else {
            EmotionRelation::None
        }
    }

    /// `wheel/1` JSON document.
    pub fn to_document(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "wheel/1",
            "basics": self.basics,
            "dyads": self.dyads,
        })
    }
}
