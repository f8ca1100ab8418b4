use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedding::TrainConfig;
use crate::eval::CorrelationMethod;
use crate::inventory;
use crate::projection::AnchorMode;
use crate::similarity::PairEncoding;

/// One training context: category roots plus its test items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextConfig {
    pub name: String,
    pub include: Vec<String>,
    #[serde(default)]
    pub exclude: Vec<String>,
    #[serde(default)]
    pub target_tokens: Option<u64>,
    #[serde(default)]
    pub items: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixConfig {
    pub a: PathBuf,
    pub b: PathBuf,
    pub fraction: f64,
    #[serde(default = "default_mix_name")]
    pub name: String,
}

fn default_mix_name() -> String {
    "mixed".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfig {
    pub source: PathBuf,
    pub reference: PathBuf,
    pub targets: Vec<String>,
    #[serde(default = "default_match_name")]
    pub name: String,
}

fn default_match_name() -> String {
    "matched".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub windows: Vec<usize>,
    pub dims: Vec<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            windows: vec![9],
            dims: vec![100],
        }
    }
}

/// Everything needed to rerun an experiment end to end. Command-line flags
/// take precedence over these values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub articles: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub contexts: Vec<ContextConfig>,
    /// Drop articles reachable from more than one context.
    pub remove_overlap: bool,
    pub mix: Option<MixConfig>,
    pub frequency_match: Option<MatchConfig>,
    pub train: TrainConfig,
    pub seeds: Vec<u64>,
    pub grid: GridConfig,
    pub anchors: Option<PathBuf>,
    pub anchor_mode: AnchorMode,
    pub judgments: Option<PathBuf>,
    pub feature_ratings: Option<PathBuf>,
    pub methods: Vec<String>,
    pub encoding: PairEncoding,
    pub filter_threshold: f64,
    pub n_boot: usize,
    pub correlation: CorrelationMethod,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            articles: None,
            edges: None,
            contexts: Vec::new(),
            remove_overlap: true,
            mix: None,
            frequency_match: None,
            train: TrainConfig::default(),
            seeds: (0..inventory::ENSEMBLE_SIZE as u64).collect(),
            grid: GridConfig::default(),
            anchors: None,
            anchor_mode: AnchorMode::Contextual,
            judgments: None,
            feature_ratings: None,
            methods: vec!["cosine".into()],
            encoding: PairEncoding::Absolute,
            filter_threshold: 0.5,
            n_boot: crate::eval::DEFAULT_N_BOOT,
            correlation: CorrelationMethod::Pearson,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        cfg.validate()
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.seeds.is_empty() {
            return Err("seed list is empty".into());
        }
        if self.grid.windows.is_empty() || self.grid.dims.is_empty() {
            return Err("training grid is empty".into());
        }
        for c in &self.contexts {
            if c.include.is_empty() {
                return Err(format!("context `{}` has no include roots", c.name));
            }
        }
        self.train.validate().map_err(|e| e.to_string())
    }

    pub fn context(&self, name: &str) -> Option<&ContextConfig> {
        self.contexts.iter().find(|c| c.name == name)
    }

    /// Items of a context: from the config if listed, else the built-in
    /// inventory.
    pub fn items(&self, context: &str) -> Option<Vec<String>> {
        if let Some(items) = self.context(context).and_then(|c| c.items.clone()) {
            return Some(items);
        }
        inventory::items(context).map(|s| s.iter().map(|w| w.to_string()).collect())
    }
}
