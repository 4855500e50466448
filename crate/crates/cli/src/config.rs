//! Run configuration: defaults, optional TOML file, then command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use convscale::descriptives::PauseThresholds;
use convscale::ingest::{CorpusKind, FilterSettings};
use convscale::temporal::AveragingOrder;
use convscale::textprep::{CleanRules, FormPolicy};
use convscale::RegimeMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// Inferred from the first input when absent.
    pub kind: Option<CorpusKind>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub form_policy: FormPolicy,
    /// Unit restriction for the analyses; all units when absent.
    pub unit: Option<String>,
    /// Conversation filter; a kind-dependent default applies when absent.
    pub filter: Option<FilterSettings>,
    pub clean: CleanRules,
    pub regimes: RegimeMatrix,
    pub temporal: TemporalSettings,
    pub descriptives: DescriptiveSettings,
    pub pauses: PauseThresholds,
    pub synth: SynthSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            kind: None,
            out_dir: PathBuf::from("out"),
            seed: 0,
            form_policy: FormPolicy::default(),
            unit: None,
            filter: None,
            clean: CleanRules::default(),
            regimes: RegimeMatrix::default(),
            temporal: TemporalSettings::default(),
            descriptives: DescriptiveSettings::default(),
            pauses: PauseThresholds::default(),
            synth: SynthSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemporalSettings {
    pub averaging_order: AveragingOrder,
    /// Also report shuffled baselines.
    pub shuffle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DescriptiveSettings {
    /// Fraction of conversations below the unique-run outlier cutoff.
    pub run_coverage: f64,
    pub top_interjections: usize,
}

impl Default for DescriptiveSettings {
    fn default() -> Self {
        DescriptiveSettings {
            run_coverage: 0.99,
            top_interjections: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSettings {
    /// Generator name and parameters, e.g. `{ process = "heaps_process", beta = 0.7 }`.
    pub process: toml::Table,
    pub n_tokens: usize,
    pub conversations: usize,
}

impl Default for SynthSettings {
    fn default() -> Self {
        let mut process = toml::Table::new();
        process.insert("process".into(), "heaps_process".into());
        process.insert("beta".into(), 0.7.into());
        SynthSettings {
            process,
            n_tokens: 10_000,
            conversations: 10,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn kind(&self) -> CorpusKind {
        self.kind.unwrap_or(CorpusKind::Generic)
    }

    /// Filter actually applied at ingest.
    pub fn effective_filter(&self) -> FilterSettings {
        if let Some(f) = &self.filter {
            return f.clone();
        }
        match self.kind() {
            CorpusKind::MoviesIndividual => FilterSettings::movie_dialogs(),
            // grouping keeps short conversations
            CorpusKind::MoviesGrouped => FilterSettings {
                min_utterances: 0,
                ..FilterSettings::movie_dialogs()
            },
            CorpusKind::Candor | CorpusKind::Generic => FilterSettings::identity(),
        }
    }

    /// Replace kind-dependent defaults by their concrete values.
    pub fn resolve(mut self) -> Result<Self> {
        self.kind = Some(self.kind());
        self.filter = Some(self.effective_filter());
        self.regimes.validate()?;
        self.pauses.validate()?;
        Ok(self)
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex sha256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
