//! Scaling-law analysis of conversational corpora: vocabulary growth (Heaps),
//! rank-frequency (Zipf), lexical diversity, and interarrival burstiness/memory.
//!
//! The pipeline is ingest → clean/tokenize → (external POS tagging) → analyses.
//! Corpora are immutable once loaded and every analysis is a pure function of
//! its inputs, so per-conversation work parallelizes freely.

pub mod descriptives;
pub mod error;
pub mod ingest;
pub mod report;
pub mod rng;
pub mod scaling;
pub mod synth;
pub mod temporal;
pub mod textprep;

pub use error::{Error, Result};
pub use ingest::{Conversation, Corpus, CorpusKind, Token, Utterance};
pub use scaling::{FitResult, GrowthCurve, RankTable, RegimeBounds, RegimeMatrix, Unit};
pub use temporal::BurstinessMemory;
pub use textprep::{MacroClass, Upos};
