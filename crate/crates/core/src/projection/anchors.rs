use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::axis::{build_axis, AnchorMode, FeatureAxis};
use crate::embedding::EmbeddingSpace;
use crate::error::{Error, Result};

/// Endpoints for one feature in one context and mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorEntry {
    pub context: String,
    pub feature: String,
    pub mode: AnchorMode,
    pub low: Vec<String>,
    pub high: Vec<String>,
}

/// A collection of anchor triples, typically loaded from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnchorConfig {
    pub entries: Vec<AnchorEntry>,
}

pub const ANCHORS_PER_END: usize = 3;

// (feature, low adjectives, high adjectives, low objects, high objects)
type Row = (&'static str, [&'static str; 3], [&'static str; 3], [&'static str; 3], [&'static str; 3]);

const NATURE: [Row; 12] = [
    ("size", ["small", "little", "tiny"], ["big", "large", "huge"], ["bird", "rabbit", "rat"], ["lion", "giraffe", "elephant"]),
    ("domesticity", ["wild", "untamed", "undomesticated"], ["domestic", "pet", "tamed"], ["fish", "pig", "ferret"], ["shark", "lion", "panther"]),
    ("predacity", ["quarry", "prey", "herbivore"], ["ferocious", "predatory", "carnivorous"], ["rabbit", "goose", "swan"], ["shark", "lion", "wolf"]),
    ("speed", ["slow", "sluggish", "gradual"], ["fast", "quick", "speedy"], ["sloth", "snail", "tortoise"], ["leopard", "cheetah", "hummingbird"]),
    ("furriness", ["smooth", "sleek", "rough"], ["fast", "quick", "speedy"], ["penguin", "dolphin", "frog"], ["puma", "dog", "lion"]),
    ("aquatic-ness", ["terrestrial", "land", "walking"], ["water", "aquatic", "swimming"], ["lion", "panther", "dog"], ["dolphin", "fish", "frog"]),
    ("dangerousness", ["dangerous", "unsafe", "threatening"], ["safe", "harmless", "innocuous"], ["swan", "rabbit", "goose"], ["shark", "lion", "scorpion"]),
    ("edibility", ["uneatable", "inedible", "indigestible"], ["delicious", "edible", "food"], ["dog", "lion", "elephant"], ["cow", "veal", "chicken"]),
    ("intelligence", ["dumb", "stupid", "idiotic"], ["smart", "intelligent", "wise"], ["lizard", "goose", "snail"], ["crow", "elephant", "dolphin"]),
    ("humanness", ["inhuman", "animal", "wild"], ["human", "anthropomorphic", "humanist"], ["goose", "swan", "frog"], ["dog", "ape", "monkey"]),
    ("cuteness", ["ugly", "repulsive", "hideous"], ["cute", "adorable", "attractive"], ["shark", "raccoon", "lizard"], ["rabbit", "dog", "giraffe"]),
    ("interest", ["uninteresting", "lame", "boring"], ["interesting", "cool", "exciting"], ["goose", "pigeon", "snail"], ["gorilla", "dolphin", "lion"]),
];

const TRANSPORTATION: [Row; 12] = [
    ("size", ["small", "little", "tiny"], ["big", "large", "huge"], ["segway", "scooter", "skateboard"], ["spaceship", "carrier", "airliner"]),
    ("cost", ["cheap", "affordable", "inexpensive"], ["costly", "expensive", "pricey"], ["bike", "scooter", "skateboard"], ["fighter", "spaceship", "carrier"]),
    ("openness", ["covered", "windowless", "enclosed"], ["uncovered", "open", "exposed"], ["spaceship", "jet", "tank"], ["convertible", "skateboard", "scooter"]),
    ("speed", ["slow", "sluggish", "gradual"], ["fast", "quick", "speedy"], ["van", "barge", "bus"], ["speedboat", "racecar", "spaceship"]),
    ("wheeledness", ["hull", "smooth", "propelled"], ["wheeled", "wheels", "tire"], ["kayak", "speedboat", "spaceship"], ["convertible", "racecar", "bus"]),
    ("dangerousness", ["dangerous", "unsafe", "threatening"], ["safe", "harmless", "innocuous"], ["canoe", "cart", "buggy"], ["spaceship", "destroyer", "jet"]),
    ("elevation", ["underwater", "low", "deep"], ["high", "elevated", "skyward"], ["automobile", "convertible", "yacht"], ["spaceship", "satellite", "jet"]),
    ("comfort", ["uncomfortable", "cramped", "hunched"], ["comfortable", "cozy", "relaxing"], ["scooter", "cart", "tractor"], ["sedan", "yacht", "train"]),
    ("skill", ["simple", "novice", "unskilled"], ["complex", "skilled", "experienced"], ["tricycle", "bus", "train"], ["aircraft", "spaceship", "jet"]),
    ("personalness", ["impersonal", "public", "shared"], ["personal", "intimate", "private"], ["airliner", "spaceship", "carrier"], ["skateboard", "sportscar", "yacht"]),
    ("usefulness", ["uncommon", "useless", "novelty"], ["useful", "usable", "common"], ["skateboard", "yacht", "jetpack"], ["airliner", "bus", "train"]),
    ("interest", ["uninteresting", "lame", "boring"], ["interesting", "cool", "exciting"], ["scooter", "minivan", "train"], ["jet", "spaceship", "yacht"]),
];

fn owned(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| (*w).to_owned()).collect()
}

impl Default for AnchorConfig {
    /// The published endpoint lists for the nature and transportation
    /// contexts, in both modes, transcribed as printed.
    fn default() -> Self {
        let mut entries = Vec::with_capacity(48);
        for (context, rows) in [("nature", &NATURE), ("transportation", &TRANSPORTATION)] {
            for (feature, adj_lo, adj_hi, obj_lo, obj_hi) in rows.iter() {
                entries.push(AnchorEntry {
                    context: context.into(),
                    feature: (*feature).into(),
                    mode: AnchorMode::Contextual,
                    low: owned(obj_lo),
                    high: owned(obj_hi),
                });
                entries.push(AnchorEntry {
                    context: context.into(),
                    feature: (*feature).into(),
                    mode: AnchorMode::Adjective,
                    low: owned(adj_lo),
                    high: owned(adj_hi),
                });
            }
        }
        AnchorConfig { entries }
    }
}

impl AnchorConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: AnchorConfig = serde_json::from_str(&s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string_pretty(self)?;
        fs::write(path, s + "\n").map_err(|e| Error::io(path, e))
    }

    /// Every entry must carry exactly three anchors per end, and
    /// (context, feature, mode) must be unique.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.entries {
            if e.low.len() != ANCHORS_PER_END || e.high.len() != ANCHORS_PER_END {
                return Err(Error::InvalidArgument(format!(
                    "{}/{}/{}: need exactly {ANCHORS_PER_END} anchors per end",
                    e.context, e.feature, e.mode
                )));
            }
            if !seen.insert((&e.context, &e.feature, e.mode)) {
                return Err(Error::InvalidArgument(format!(
                    "{}/{}/{}: duplicate entry",
                    e.context, e.feature, e.mode
                )));
            }
        }
        Ok(())
    }

    /// Entries for one context and mode, in file order.
    pub fn entries_for<'a>(
        &'a self,
        context: &'a str,
        mode: AnchorMode,
    ) -> impl Iterator<Item = &'a AnchorEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.context == context && e.mode == mode)
    }

    pub fn features(&self, context: &str, mode: AnchorMode) -> Vec<String> {
        self.entries_for(context, mode)
            .map(|e| e.feature.clone())
            .collect()
    }

    /// Anchors that also appear in `items`.
    pub fn overlap_with<S: AsRef<str>>(&self, context: &str, items: &[S]) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.context == context)
            .flat_map(|e| e.low.iter().chain(&e.high))
            .filter(|a| items.iter().any(|i| i.as_ref() == a.as_str()))
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Builds the axes of one context and mode in `space`.
    pub fn axes(
        &self,
        space: &EmbeddingSpace,
        context: &str,
        mode: AnchorMode,
    ) -> Result<Vec<FeatureAxis>> {
        let axes: Vec<FeatureAxis> = self
            .entries_for(context, mode)
            .map(|e| build_axis(space, &e.feature, mode, &e.low, &e.high))
            .collect::<Result<_>>()?;
        if axes.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no {mode} anchors for context `{context}`"
            )));
        }
        Ok(axes)
    }
}
