//! Interarrival gaps, burstiness and memory.
//!
//! Gaps are token-index differences between successive occurrences of a key.
//! Burstiness is `B = (σ - μ) / (σ + μ)` with the population standard deviation;
//! memory is the Pearson correlation of consecutive gap pairs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Conversation, Corpus, Token};
use crate::rng::{derive_seed, rng_from};
use crate::textprep::MacroClass;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeriesKey {
    Form(String),
    Class(MacroClass),
}

impl fmt::Display for SeriesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesKey::Form(s) => f.write_str(s),
            SeriesKey::Class(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMode {
    /// Every occurrence of the key.
    Total,
    /// First occurrences of new types within a class.
    Unique,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterarrivalSeries {
    pub key: SeriesKey,
    pub gaps: Vec<usize>,
    pub n_events: usize,
}

impl InterarrivalSeries {
    fn from_positions(key: SeriesKey, positions: &[usize]) -> Self {
        InterarrivalSeries {
            key,
            gaps: gaps_of(positions),
            n_events: positions.len(),
        }
    }

    pub fn burstiness(&self) -> Option<f64> {
        burstiness(&self.gaps)
    }

    pub fn memory(&self) -> Option<f64> {
        memory(&self.gaps)
    }

    pub fn bm(&self) -> BurstinessMemory {
        BurstinessMemory {
            b: self.burstiness(),
            m: self.memory(),
        }
    }
}

pub fn gaps_of(positions: &[usize]) -> Vec<usize> {
    positions.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Gap series for `key` over a token stream.
pub fn interarrival_series(tokens: &[Token], key: &SeriesKey, mode: GapMode) -> Result<InterarrivalSeries> {
    if tokens.is_empty() {
        return Err(Error::Empty("interarrival series of an empty stream".into()));
    }
    let positions: Vec<usize> = match (key, mode) {
        (SeriesKey::Form(form), GapMode::Total) => tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| &t.form == form)
            .map(|(i, _)| i + 1)
            .collect(),
        (SeriesKey::Class(class), GapMode::Total) => tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.macro_class == *class)
            .map(|(i, _)| i + 1)
            .collect(),
        (SeriesKey::Class(class), GapMode::Unique) => {
            let mut seen = HashSet::new();
            tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.macro_class == *class && seen.insert(t.form.as_str()))
                .map(|(i, _)| i + 1)
                .collect()
        }
        (SeriesKey::Form(_), GapMode::Unique) => {
            return Err(Error::InvalidParam("unique-mode gaps need a macro-class key".into()))
        }
    };
    Ok(InterarrivalSeries::from_positions(key.clone(), &positions))
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// `(σ - μ) / (σ + μ)`; `None` with fewer than two gaps.
pub fn burstiness(gaps: &[usize]) -> Option<f64> {
    if gaps.len() < 2 {
        return None;
    }
    let (mu, sigma) = mean_sd(gaps.iter().map(|&g| g as f64));
    Some((sigma - mu) / (sigma + mu))
}

/// Lag-1 Pearson correlation of gaps; `None` with fewer than two pairs or a
/// constant marginal.
pub fn memory(gaps: &[usize]) -> Option<f64> {
    if gaps.len() < 3 {
        return None;
    }
    let head = gaps[..gaps.len() - 1].iter().map(|&g| g as f64);
    let tail = gaps[1..].iter().map(|&g| g as f64);
    let (m1, s1) = mean_sd(head.clone());
    let (m2, s2) = mean_sd(tail.clone());
    if s1 == 0.0 || s2 == 0.0 {
        return None;
    }
    let n = (gaps.len() - 1) as f64;
    let cov = head.zip(tail).map(|(a, b)| (a - m1) * (b - m2)).sum::<f64>() / n;
    Some((cov / (s1 * s2)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BurstinessMemory {
    pub b: Option<f64>,
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingOrder {
    /// Mean over keys within each conversation, then over conversations.
    #[default]
    KeysThenConversations,
    /// Mean over conversations for each key, then over keys.
    ConversationsThenKeys,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmUnit {
    /// Every word type with more than two occurrences in a conversation.
    WordTypes,
    /// The five macro-class series.
    Classes,
    /// One macro-class series.
    Class(MacroClass),
}

impl fmt::Display for BmUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BmUnit::WordTypes => f.write_str("words"),
            BmUnit::Classes => f.write_str("classes"),
            BmUnit::Class(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BmOptions {
    pub shuffle: bool,
    pub seed: u64,
    pub order: AveragingOrder,
}

/// Token stream of a conversation, optionally permuted with a seed derived from
/// `(seed, conversation id)`.
pub fn conversation_stream(conv: &Conversation, shuffle: bool, seed: u64) -> Vec<&Token> {
    let mut tokens: Vec<&Token> = conv.tokens().collect();
    if shuffle {
        let mut rng = rng_from(derive_seed(seed, &conv.id));
        tokens.shuffle(&mut rng);
    }
    tokens
}

fn positions_by<K: std::hash::Hash + Eq + Ord + Clone>(
    tokens: &[&Token],
    key: impl Fn(&Token) -> K,
) -> BTreeMap<K, Vec<usize>> {
    let mut map: HashMap<K, Vec<usize>> = HashMap::new();
    for (i, t) in tokens.iter().enumerate() {
        map.entry(key(t)).or_default().push(i + 1);
    }
    map.into_iter().collect()
}

/// Per-key (B, M) values of one conversation.
fn conversation_key_bm(tokens: &[&Token], unit: BmUnit) -> Vec<(String, BurstinessMemory)> {
    let bm_of = |positions: &[usize]| {
        let gaps = gaps_of(positions);
        BurstinessMemory {
            b: burstiness(&gaps),
            m: memory(&gaps),
        }
    };
    match unit {
        BmUnit::WordTypes => positions_by(tokens, |t| t.form.clone())
            .into_iter()
            .filter(|(_, p)| p.len() > 2)
            .map(|(k, p)| (k, bm_of(&p)))
            .collect(),
        BmUnit::Classes | BmUnit::Class(_) => positions_by(tokens, |t| t.macro_class)
            .into_iter()
            .filter(|(c, _)| matches!(unit, BmUnit::Classes) || unit == BmUnit::Class(*c))
            .map(|(c, p)| (c.to_string(), bm_of(&p)))
            .collect(),
    }
}

#[derive(Default)]
struct Mean {
    sum: f64,
    n: usize,
}

impl Mean {
    fn add(&mut self, v: Option<f64>) {
        if let Some(v) = v {
            self.sum += v;
            self.n += 1;
        }
    }

    fn get(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }
}

/// Corpus-level averaged burstiness and memory; only defined values enter means.
pub fn corpus_bm(corpus: &Corpus, unit: BmUnit, opts: BmOptions) -> Result<BurstinessMemory> {
    if !matches!(unit, BmUnit::WordTypes) {
        corpus.require_tagged("class-level burstiness/memory")?;
    }
    let per_conv: Vec<Vec<(String, BurstinessMemory)>> = corpus
        .conversations
        .par_iter()
        .map(|c| conversation_key_bm(&conversation_stream(c, opts.shuffle, opts.seed), unit))
        .collect();

    let (mut b, mut m) = (Mean::default(), Mean::default());
    match opts.order {
        AveragingOrder::KeysThenConversations => {
            for keys in &per_conv {
                let (mut kb, mut km) = (Mean::default(), Mean::default());
                for (_, v) in keys {
                    kb.add(v.b);
                    km.add(v.m);
                }
                b.add(kb.get());
                m.add(km.get());
            }
        }
        AveragingOrder::ConversationsThenKeys => {
            let mut by_key: BTreeMap<&str, (Mean, Mean)> = BTreeMap::new();
            for (k, v) in per_conv.iter().flatten() {
                let e = by_key.entry(k.as_str()).or_default();
                e.0.add(v.b);
                e.1.add(v.m);
            }
            for (kb, km) in by_key.values() {
                b.add(kb.get());
                m.add(km.get());
            }
        }
    }
    Ok(BurstinessMemory { b: b.get(), m: m.get() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapUnit {
    /// Gaps of every word type, pooled.
    Words,
    /// Gaps of one macro-class.
    Class(MacroClass),
}

/// Gap lists of the three narrative thirds, cut at floor(T/3) and floor(2T/3);
/// no gap crosses a cut.
pub fn tertile_interarrivals(conv: &Conversation, unit: GapUnit) -> Result<[Vec<usize>; 3]> {
    let tokens: Vec<&Token> = conv.tokens().collect();
    let n = tokens.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "conversation `{}` has {n} tokens; tertiles need at least 3",
            conv.id
        )));
    }
    if let GapUnit::Class(_) = unit {
        if conv.is_placeholder_tagged() {
            return Err(Error::Untagged(format!("tertile gaps of `{}`", conv.id)));
        }
    }
    let cuts = [0, n / 3, 2 * n / 3, n];
    Ok(std::array::from_fn(|k| stream_gaps(&tokens[cuts[k]..cuts[k + 1]], unit)))
}

/// Pooled gaps of `unit` within one token slice, keys in sorted order.
pub fn stream_gaps(tokens: &[&Token], unit: GapUnit) -> Vec<usize> {
    match unit {
        GapUnit::Words => positions_by(tokens, |t| t.form.clone())
            .values()
            .flat_map(|p| gaps_of(p))
            .collect(),
        GapUnit::Class(class) => {
            let p: Vec<usize> = tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.macro_class == class)
                .map(|(i, _)| i + 1)
                .collect();
            gaps_of(&p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CorpusKind, Utterance};
    use crate::textprep::Upos;
    use proptest::prelude::*;

    fn toks(forms: &[&str]) -> Vec<Token> {
        forms.iter().map(|f| Token::new(*f, Upos::Noun)).collect()
    }

    fn conv(id: &str, tokens: Vec<Token>) -> Conversation {
        Conversation::new(id, CorpusKind::Generic, vec![Utterance::new("a", tokens)])
    }

    #[test]
    fn total_mode_gaps() {
        let s = interarrival_series(&toks(&["a", "b", "a", "b", "a"]), &SeriesKey::Form("a".into()), GapMode::Total)
            .unwrap();
        assert_eq!(s.gaps, [2, 2]);
        assert_eq!(s.n_events, 3);
    }

    #[test]
    fn unique_mode_gaps() {
        let s = interarrival_series(
            &toks(&["x1", "x2", "x1", "x3"]),
            &SeriesKey::Class(MacroClass::Noun),
            GapMode::Unique,
        )
        .unwrap();
        assert_eq!(s.gaps, [1, 2]);
        assert!(interarrival_series(&toks(&["a"]), &SeriesKey::Form("a".into()), GapMode::Unique).is_err());
    }

    #[test]
    fn class_gaps_from_worked_sequence() {
        // INTJ FUNC INTJ FUNC VERB VERB NOUN FUNC
        let tags = [Upos::Intj, Upos::Adp, Upos::Intj, Upos::Cconj, Upos::Verb, Upos::Verb, Upos::Noun, Upos::Sconj];
        let t: Vec<Token> = tags.iter().enumerate().map(|(i, &u)| Token::new(format!("t{i}"), u)).collect();
        let s = interarrival_series(&t, &SeriesKey::Class(MacroClass::Func), GapMode::Total).unwrap();
        assert_eq!(s.gaps, [2, 4]);
    }

    #[test]
    fn absent_key_is_empty() {
        let s = interarrival_series(&toks(&["a"]), &SeriesKey::Form("z".into()), GapMode::Total).unwrap();
        assert_eq!(s.n_events, 0);
        assert!(s.gaps.is_empty());
        assert!(interarrival_series(&[], &SeriesKey::Form("z".into()), GapMode::Total).is_err());
    }

    #[test]
    fn periodic_and_alternating() {
        assert_eq!(burstiness(&[3, 3, 3, 3]), Some(-1.0));
        assert_eq!(memory(&[3, 3, 3, 3]), None);
        assert_eq!(burstiness(&[5]), None);
        assert_eq!(memory(&[1, 3]), None);
        assert_eq!(memory(&[1, 3, 1, 3, 1]), Some(-1.0));
        assert_eq!(memory(&[1, 2, 3, 4]), Some(1.0));
    }

    #[test]
    fn single_series_corpus_matches_series() {
        let t = toks(&["a", "x", "a", "y", "z", "a", "a", "q", "r", "s", "a"]);
        let s = interarrival_series(&t, &SeriesKey::Form("a".into()), GapMode::Total).unwrap();
        let filler: Vec<&str> = vec!["a", "x", "a", "y", "z", "a", "a", "q", "r", "s", "a"];
        let corpus = Corpus::new(CorpusKind::Generic, vec![conv("c", toks(&filler))], "");
        let bm = corpus_bm(&corpus, BmUnit::WordTypes, BmOptions::default()).unwrap();
        assert_eq!(bm, s.bm());
    }

    #[test]
    fn shuffle_preserves_single_type_degenerate_case() {
        let corpus = Corpus::new(CorpusKind::Generic, vec![conv("c", toks(&["a"; 12]))], "");
        let plain = corpus_bm(&corpus, BmUnit::WordTypes, BmOptions::default()).unwrap();
        let shuffled = corpus_bm(
            &corpus,
            BmUnit::WordTypes,
            BmOptions { shuffle: true, seed: 3, ..Default::default() },
        )
        .unwrap();
        assert_eq!(plain, shuffled);
        assert_eq!(plain.b, Some(-1.0));
    }

    #[test]
    fn averaging_orders_differ_as_expected() {
        // conv1: a periodic (B=-1); conv2: a periodic, b irregular
        let c1 = conv("1", toks(&["a", "x", "a", "y", "a"]));
        let c2 = conv("2", toks(&["a", "a", "a", "b", "w", "w", "b", "b"]));
        let corpus = Corpus::new(CorpusKind::Generic, vec![c1, c2], "");
        let kc = corpus_bm(&corpus, BmUnit::WordTypes, BmOptions::default()).unwrap();
        let ck = corpus_bm(
            &corpus,
            BmUnit::WordTypes,
            BmOptions { order: AveragingOrder::ConversationsThenKeys, ..Default::default() },
        )
        .unwrap();
        let b_b = burstiness(&[3, 1]).unwrap();
        // keys-then-conversations: mean(-1, mean(-1, b_b)); conversations-then-keys: mean(-1, b_b)
        assert!((kc.b.unwrap() - (-1.0 + (-1.0 + b_b) / 2.0) / 2.0).abs() < 1e-12);
        assert!((ck.b.unwrap() - (-1.0 + b_b) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn class_unit_needs_tags() {
        let corpus = Corpus::new(CorpusKind::Generic, vec![conv("c", vec![Token::raw("a"), Token::raw("a")])], "");
        assert!(corpus_bm(&corpus, BmUnit::Classes, BmOptions::default()).is_err());
        assert!(corpus_bm(&corpus, BmUnit::WordTypes, BmOptions::default()).is_ok());
    }

    #[test]
    fn tertile_cuts() {
        let nine = conv("9", toks(&["a"; 9]));
        let t = tertile_interarrivals(&nine, GapUnit::Words).unwrap();
        assert_eq!(t, [vec![1, 1], vec![1, 1], vec![1, 1]]);
        let ten = conv("10", toks(&["a"; 10]));
        let t = tertile_interarrivals(&ten, GapUnit::Words).unwrap();
        assert_eq!(t.iter().map(Vec::len).collect::<Vec<_>>(), [2, 2, 3]);
        assert!(tertile_interarrivals(&conv("2", toks(&["a", "b"])), GapUnit::Words).is_err());
    }

    fn multiset(v: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for g in v {
            *m.entry(g).or_insert(0) += 1;
        }
        m
    }

    proptest! {
        #[test]
        fn tertile_gaps_subset_of_whole(stream in prop::collection::vec(0u8..6, 3..200)) {
            let forms: Vec<String> = stream.iter().map(|b| format!("w{b}")).collect();
            let c = conv("p", forms.iter().map(|f| Token::new(f.as_str(), Upos::Noun)).collect());
            let thirds = tertile_interarrivals(&c, GapUnit::Words).unwrap();
            let all: Vec<&Token> = c.tokens().collect();
            // brute force: every (i, j) of the same form with no occurrence between
            let mut whole = Vec::new();
            for i in 0..forms.len() {
                if let Some(j) = (i + 1..forms.len()).find(|&j| forms[j] == forms[i]) {
                    whole.push(j - i);
                }
            }
            prop_assert_eq!(multiset(stream_gaps(&all, GapUnit::Words)), multiset(whole.clone()));
            let whole = multiset(whole);
            for (g, n) in multiset(thirds.into_iter().flatten()) {
                prop_assert!(whole.get(&g).copied().unwrap_or(0) >= n);
            }
        }

        #[test]
        fn gap_sum_spans_first_to_last(stream in prop::collection::vec(0u8..5, 1..200)) {
            let forms: Vec<String> = stream.iter().map(|b| format!("w{b}")).collect();
            let t: Vec<Token> = forms.iter().map(|f| Token::new(f.as_str(), Upos::Noun)).collect();
            let s = interarrival_series(&t, &SeriesKey::Form("w0".into()), GapMode::Total).unwrap();
            let pos: Vec<usize> = forms.iter().enumerate().filter(|(_, f)| *f == "w0").map(|(i, _)| i).collect();
            if !pos.is_empty() {
                prop_assert_eq!(s.gaps.iter().sum::<usize>(), pos[pos.len() - 1] - pos[0]);
                prop_assert_eq!(s.gaps.len(), s.n_events - 1);
            }
        }

        #[test]
        fn bounds_and_reversal(gaps in prop::collection::vec(1usize..50, 0..60)) {
            if let Some(b) = burstiness(&gaps) { prop_assert!((-1.0..1.0).contains(&b)); }
            let m = memory(&gaps);
            if let Some(m) = m { prop_assert!((-1.0..=1.0).contains(&m)); }
            let mut rev = gaps.clone();
            rev.reverse();
            match (m, memory(&rev)) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
                (a, b) => prop_assert_eq!(a.is_none(), b.is_none()),
            }
        }
    }
}
