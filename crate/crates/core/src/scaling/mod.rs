//! Vocabulary growth (Heaps) and rank-frequency (Zipf) estimation with
//! regime-restricted log-log least squares.

mod fit;
mod growth;
mod rank;
mod regime;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use fit::{fit_loglog, ses_flag, Axis, FitResult, RegimeBounds};
pub use growth::{averaged_growth_curve, growth_curve, GrowthCurve};
pub use rank::{corpus_rank_frequency, count_ranks, rank_frequency, RankEntry, RankTable};
pub use regime::{ClassRegimes, RegimeMatrix};

use crate::error::{Error, Result};
use crate::ingest::{Conversation, Corpus};
use crate::textprep::MacroClass;

/// Which tokens an analysis runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    All,
    Class(MacroClass),
}

impl Unit {
    pub const ALL_UNITS: [Unit; 6] = [
        Unit::All,
        Unit::Class(MacroClass::Noun),
        Unit::Class(MacroClass::Verb),
        Unit::Class(MacroClass::Other),
        Unit::Class(MacroClass::Func),
        Unit::Class(MacroClass::Intj),
    ];

    pub fn forms<'a>(&self, conv: &'a Conversation) -> Vec<&'a str> {
        match self {
            Unit::All => conv.forms(),
            Unit::Class(c) => conv.class_forms(*c),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::All => f.write_str("all"),
            Unit::Class(c) => c.fmt(f),
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            Ok(Unit::All)
        } else {
            s.parse().map(Unit::Class)
        }
    }
}

fn require_tags_for(corpus: &Corpus, unit: Unit) -> Result<()> {
    match unit {
        Unit::All => Ok(()),
        Unit::Class(c) => corpus.require_tagged(&format!("{c} fit")),
    }
}

/// Heaps fit of the window-averaged growth curve, regime applied to unique types.
pub fn heaps_fit(corpus: &Corpus, unit: Unit, regimes: &RegimeMatrix) -> Result<FitResult> {
    require_tags_for(corpus, unit)?;
    let bounds = regimes.bounds(unit, corpus.kind, Axis::Y)?;
    heaps_fit_in(corpus, unit, bounds)
}

pub fn heaps_fit_in(corpus: &Corpus, unit: Unit, bounds: RegimeBounds) -> Result<FitResult> {
    let curve = averaged_growth_curve(corpus, unit)?;
    fit_loglog(&curve.points(), bounds)
}

/// Zipf fit of the corpus-wide rank table, regime applied to rank.
pub fn zipf_fit(corpus: &Corpus, unit: Unit, regimes: &RegimeMatrix) -> Result<FitResult> {
    require_tags_for(corpus, unit)?;
    let bounds = regimes.bounds(unit, corpus.kind, Axis::X)?;
    zipf_fit_in(corpus, unit, bounds)
}

pub fn zipf_fit_in(corpus: &Corpus, unit: Unit, bounds: RegimeBounds) -> Result<FitResult> {
    let table = corpus_rank_frequency(corpus, unit)?;
    fit_loglog(&table.points(), bounds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerConversationFits {
    pub fits: Vec<(String, FitResult)>,
    /// Conversations with fewer than three points in the regime.
    pub skipped: usize,
}

/// One whole-vocabulary Heaps fit per conversation, at the corpus-level regime.
pub fn per_conversation_exponents(corpus: &Corpus, regimes: &RegimeMatrix) -> Result<PerConversationFits> {
    let bounds = regimes.bounds(Unit::All, corpus.kind, Axis::Y)?;
    let results: Vec<Option<(String, FitResult)>> = corpus
        .conversations
        .par_iter()
        .map(|c| {
            let forms = c.forms();
            growth_curve(&forms)
                .and_then(|curve| fit_loglog(&curve.points(), bounds))
                .ok()
                .map(|f| (c.id.clone(), f))
        })
        .collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    Ok(PerConversationFits {
        fits: results.into_iter().flatten().collect(),
        skipped,
    })
}

#[derive(Debug)]
pub struct InterjectionSplit {
    pub median_share: f64,
    pub low: Result<FitResult>,
    pub high: Result<FitResult>,
    /// Fractions of conversations in the (low, high) groups.
    pub proportions: (f64, f64),
    pub low_ids: Vec<String>,
    pub high_ids: Vec<String>,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Split conversations at the median interjection-token share (ties go low)
/// and fit Heaps' law on each group.
pub fn interjection_split_fit(corpus: &Corpus, regimes: &RegimeMatrix) -> Result<InterjectionSplit> {
    corpus.require_tagged("interjection split")?;
    if corpus.conversations.is_empty() {
        return Err(Error::Empty("interjection split of an empty corpus".into()));
    }
    let shares: Vec<f64> = corpus
        .conversations
        .iter()
        .map(|c| {
            let n = c.n_tokens();
            if n == 0 {
                0.0
            } else {
                c.tokens().filter(|t| t.macro_class == MacroClass::Intj).count() as f64 / n as f64
            }
        })
        .collect();
    let mut sorted = shares.clone();
    sorted.sort_by(f64::total_cmp);
    let med = median(&sorted);

    let (mut low, mut high) = (Vec::new(), Vec::new());
    for (c, &s) in corpus.conversations.iter().zip(&shares) {
        if s <= med {
            low.push(c.clone());
        } else {
            high.push(c.clone());
        }
    }
    let total = corpus.conversations.len() as f64;
    let proportions = (low.len() as f64 / total, high.len() as f64 / total);
    let low_ids = low.iter().map(|c| c.id.clone()).collect();
    let high_ids = high.iter().map(|c| c.id.clone()).collect();
    let fit_group = |convs: Vec<Conversation>, name: &str| -> Result<FitResult> {
        if convs.is_empty() {
            return Err(Error::Empty(format!("{name} interjection group has no conversations")));
        }
        heaps_fit(&Corpus::new(corpus.kind, convs, ""), Unit::All, regimes)
    };
    Ok(InterjectionSplit {
        median_share: med,
        low: fit_group(low, "low"),
        high: fit_group(high, "high"),
        proportions,
        low_ids,
        high_ids,
    })
}
