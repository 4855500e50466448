//! Descriptive corpus statistics.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Conversation, Corpus};
use crate::scaling::rank_frequency;
use crate::textprep::MacroClass;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasicStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1); 0 for a single value.
    pub sd: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// sd / mean, 0 when the mean is 0.
    pub cv: f64,
}

pub fn median_of(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

impl BasicStats {
    pub fn of(values: &[f64]) -> Result<Self> {
        let median = median_of(values).ok_or_else(|| Error::Empty("statistics of no values".into()))?;
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(BasicStats {
            n,
            mean,
            sd,
            median,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            cv: if mean > 0.0 { sd / mean } else { 0.0 },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Tokens per conversation.
    Words,
    /// Utterances per conversation.
    Utterances,
    /// Tokens per speaker within each conversation.
    SpeakerWords,
}

pub fn measure_values(corpus: &Corpus, measure: Measure) -> Vec<f64> {
    match measure {
        Measure::Words => corpus.conversations.iter().map(|c| c.n_tokens() as f64).collect(),
        Measure::Utterances => corpus
            .conversations
            .iter()
            .map(|c| c.utterances.len() as f64)
            .collect(),
        Measure::SpeakerWords => corpus
            .conversations
            .iter()
            .flat_map(|c| {
                let mut per: BTreeMap<&str, usize> = BTreeMap::new();
                for u in &c.utterances {
                    *per.entry(u.speaker_id.as_str()).or_default() += u.tokens.len();
                }
                per.into_values().map(|n| n as f64)
            })
            .collect(),
    }
}

pub fn basic_stats(corpus: &Corpus, measure: Measure) -> Result<BasicStats> {
    if corpus.conversations.is_empty() {
        return Err(Error::Empty("descriptives of an empty corpus".into()));
    }
    BasicStats::of(&measure_values(corpus, measure))
}

/// Unique forms over total tokens.
pub fn ttr(conv: &Conversation) -> Result<f64> {
    let n = conv.n_tokens();
    if n == 0 {
        return Err(Error::Empty(format!("TTR of empty conversation `{}`", conv.id)));
    }
    let unique: HashSet<&str> = conv.tokens().map(|t| t.form.as_str()).collect();
    Ok(unique.len() as f64 / n as f64)
}

/// Mean and sample sd of per-conversation TTR.
pub fn corpus_ttr(corpus: &Corpus) -> Result<(f64, f64)> {
    let values = corpus.conversations.iter().map(ttr).collect::<Result<Vec<_>>>()?;
    let s = BasicStats::of(&values)?;
    Ok((s.mean, s.sd))
}

pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParam(format!("length mismatch {} vs {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("correlation needs at least two pairs".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("correlation with zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson r between per-conversation token and utterance counts.
pub fn words_utterances_r(corpus: &Corpus) -> Result<f64> {
    pearson_r(
        &measure_values(corpus, Measure::Words),
        &measure_values(corpus, Measure::Utterances),
    )
}

/// Longest stretch of consecutive tokens that introduce no new type.
pub fn max_unique_run<S: AsRef<str>>(forms: &[S]) -> usize {
    let mut seen = HashSet::new();
    let (mut run, mut best) = (0usize, 0usize);
    for f in forms {
        if seen.insert(f.as_ref()) {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub max_runs: Vec<(String, usize)>,
    pub median: f64,
    /// Smallest run value at or below which `coverage` of conversations fall.
    pub cutoff: usize,
    pub outliers: Vec<String>,
}

pub fn run_outliers(corpus: &Corpus, coverage: f64) -> Result<RunReport> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::InvalidParam(format!("coverage must be in (0, 1], got {coverage}")));
    }
    if corpus.conversations.is_empty() {
        return Err(Error::Empty("run report of an empty corpus".into()));
    }
    let max_runs: Vec<(String, usize)> = corpus
        .conversations
        .iter()
        .map(|c| (c.id.clone(), max_unique_run(&c.forms())))
        .collect();
    let mut sorted: Vec<usize> = max_runs.iter().map(|r| r.1).collect();
    sorted.sort_unstable();
    let k = ((coverage * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let cutoff = sorted[k - 1];
    let median = median_of(&sorted.iter().map(|&v| v as f64).collect::<Vec<_>>()).unwrap_or(0.0);
    let outliers = max_runs
        .iter()
        .filter(|(_, r)| *r > cutoff)
        .map(|(id, _)| id.clone())
        .collect();
    Ok(RunReport {
        max_runs,
        median,
        cutoff,
        outliers,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassShare {
    pub class: MacroClass,
    pub total_share: f64,
    pub unique_share: f64,
}

/// Token and type shares per macro-class. A form seen under two classes counts
/// once in each.
pub fn pos_proportions(corpus: &Corpus) -> Result<Vec<ClassShare>> {
    corpus.require_tagged("POS proportions")?;
    let mut totals = [0usize; 5];
    let mut uniques: HashSet<(MacroClass, &str)> = HashSet::new();
    for t in corpus.conversations.iter().flat_map(Conversation::tokens) {
        totals[t.macro_class.index()] += 1;
        uniques.insert((t.macro_class, t.form.as_str()));
    }
    let n_total: usize = totals.iter().sum();
    if n_total == 0 {
        return Err(Error::Empty("POS proportions of an empty corpus".into()));
    }
    let mut unique_counts = [0usize; 5];
    for (c, _) in &uniques {
        unique_counts[c.index()] += 1;
    }
    let n_unique = uniques.len() as f64;
    Ok(MacroClass::ALL
        .iter()
        .map(|&class| ClassShare {
            class,
            total_share: totals[class.index()] as f64 / n_total as f64,
            unique_share: unique_counts[class.index()] as f64 / n_unique,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterjectionRow {
    pub rank: usize,
    pub form: String,
    pub count: u64,
    /// Share of all interjection tokens in the corpus.
    pub share: f64,
}

pub fn top_interjections(corpus: &Corpus, k: usize) -> Result<Vec<InterjectionRow>> {
    corpus.require_tagged("interjection table")?;
    let forms: Vec<&str> = corpus
        .conversations
        .iter()
        .flat_map(|c| c.class_forms(MacroClass::Intj))
        .collect();
    if forms.is_empty() || k == 0 {
        return Ok(Vec::new());
    }
    let table = rank_frequency(&forms)?;
    let total = forms.len() as f64;
    Ok(table
        .entries
        .into_iter()
        .take(k)
        .map(|e| InterjectionRow {
            rank: e.rank,
            share: e.count as f64 / total,
            form: e.form,
            count: e.count,
        })
        .collect())
}

/// Pause band edges in seconds. Scores: -1 below `overlap_below`, 0 below
/// `short_below`, 2 at or above `long_from`, otherwise 1 (which requires
/// `medium_below >= long_from` so the bands leave no gap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauseThresholds {
    pub overlap_below: f64,
    pub short_below: f64,
    pub medium_below: f64,
    pub long_from: f64,
}

impl Default for PauseThresholds {
    fn default() -> Self {
        PauseThresholds {
            overlap_below: 0.0,
            short_below: 0.4,
            medium_below: 1.25,
            long_from: 1.25,
        }
    }
}

impl PauseThresholds {
    pub fn validate(&self) -> Result<()> {
        let ordered = self.overlap_below <= self.short_below
            && self.short_below <= self.long_from
            && self.long_from <= self.medium_below;
        if ordered {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!("pause thresholds out of order or leave a gap: {self:?}")))
        }
    }

    pub fn score(&self, pause_s: f64) -> Result<i8> {
        if !pause_s.is_finite() {
            return Err(Error::InvalidParam(format!("pause must be finite, got {pause_s}")));
        }
        Ok(if pause_s < self.overlap_below {
            -1
        } else if pause_s < self.short_below {
            0
        } else if pause_s >= self.long_from {
            2
        } else {
            1
        })
    }
}

pub fn pause_score(pause_s: f64) -> Result<i8> {
    PauseThresholds::default().score(pause_s)
}

/// Pauses between consecutive timed utterances (next start minus previous stop).
pub fn conversation_pauses(conv: &Conversation) -> Vec<f64> {
    conv.utterances
        .windows(2)
        .filter_map(|w| Some(w[1].start_s? - w[0].stop_s?))
        .collect()
}

/// Sum of pause scores divided by utterance count; `None` without timed pauses.
pub fn normalized_pause_score(conv: &Conversation, thresholds: &PauseThresholds) -> Result<Option<f64>> {
    let pauses = conversation_pauses(conv);
    if pauses.is_empty() {
        return Ok(None);
    }
    let total: i64 = pauses
        .iter()
        .map(|&p| thresholds.score(p).map(i64::from))
        .sum::<Result<i64>>()?;
    Ok(Some(total as f64 / conv.utterances.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CorpusKind, Token, Utterance};
    use crate::textprep::Upos;
    use proptest::prelude::*;

    fn conv(id: &str, words: &[&str]) -> Conversation {
        Conversation::new(
            id,
            CorpusKind::Generic,
            vec![Utterance::new("a", words.iter().map(|w| Token::new(*w, Upos::Noun)).collect())],
        )
    }

    #[test]
    fn stats_of_single_conversation() {
        let c = Corpus::new(CorpusKind::Generic, vec![conv("a", &["x", "y", "z"])], "");
        let s = basic_stats(&c, Measure::Words).unwrap();
        assert_eq!((s.mean, s.sd, s.cv, s.median), (3.0, 0.0, 0.0, 3.0));
    }

    #[test]
    fn stats_moments() {
        let s = BasicStats::of(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(s.mean, 5.0);
        assert!((s.sd - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(s.median, 4.5);
        assert_eq!((s.min, s.max), (2.0, 9.0));
        assert!((s.cv - s.sd / 5.0).abs() < 1e-15);
        assert!(BasicStats::of(&[]).is_err());
    }

    #[test]
    fn speaker_words_within_conversations() {
        let mut c = conv("a", &["x", "y"]);
        c.utterances.push(Utterance::new("b", vec![Token::raw("z")]));
        c.utterances.push(Utterance::new("a", vec![Token::raw("w")]));
        let corpus = Corpus::new(CorpusKind::Generic, vec![c, conv("b", &["q"])], "");
        assert_eq!(measure_values(&corpus, Measure::SpeakerWords), [3.0, 1.0, 1.0]);
    }

    #[test]
    fn ttr_values() {
        assert_eq!(ttr(&conv("a", &["a", "a", "a", "b"])).unwrap(), 0.5);
        assert_eq!(ttr(&conv("a", &["a", "b", "c"])).unwrap(), 1.0);
        assert!(ttr(&conv("e", &[])).is_err());
    }

    #[test]
    fn pearson_extremes() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson_r(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson_r(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!(pearson_r(&xs, &[1.0; 4]).is_err());
        assert!(pearson_r(&[1.0], &[1.0]).is_err());
    }

    /// Longest window of non-new tokens by checking every window.
    fn brute_run(forms: &[&str]) -> usize {
        let is_new: Vec<bool> = (0..forms.len()).map(|i| !forms[..i].contains(&forms[i])).collect();
        let mut best = 0;
        for i in 0..forms.len() {
            for j in i..forms.len() {
                if is_new[i..=j].iter().all(|n| !n) {
                    best = best.max(j - i + 1);
                }
            }
        }
        best
    }

    #[test]
    fn unique_runs() {
        assert_eq!(max_unique_run(&["a", "b", "a", "a", "a", "b", "c"]), 4);
        assert_eq!(max_unique_run(&["a", "b", "c"]), 0);
        assert_eq!(brute_run(&["a", "b", "a", "a", "a", "b", "c"]), 4);
    }

    #[test]
    fn run_cutoff_and_outliers() {
        let mut convs: Vec<Conversation> = (0..9).map(|i| conv(&format!("c{i}"), &["a", "b", "a"])).collect();
        convs.push(conv("long", &["a", "a", "a", "a", "a", "a"]));
        let corpus = Corpus::new(CorpusKind::Generic, convs, "");
        let r = run_outliers(&corpus, 0.9).unwrap();
        assert_eq!(r.cutoff, 1);
        assert_eq!(r.outliers, ["long"]);
        assert_eq!(r.median, 1.0);
        let r = run_outliers(&corpus, 0.9995).unwrap();
        assert_eq!(r.cutoff, 5);
        assert!(r.outliers.is_empty());
    }

    #[test]
    fn proportions() {
        let toks = vec![
            Token::new("oh", Upos::Intj),
            Token::new("dog", Upos::Noun),
            Token::new("dog", Upos::Noun),
            Token::new("run", Upos::Verb),
            Token::new("run", Upos::Noun),
        ];
        let c = Corpus::new(
            CorpusKind::Generic,
            vec![Conversation::new("a", CorpusKind::Generic, vec![Utterance::new("s", toks)])],
            "",
        );
        let p = pos_proportions(&c).unwrap();
        let noun = p[MacroClass::Noun.index()];
        assert!((noun.total_share - 0.6).abs() < 1e-12);
        // unique (class, form): (intj,oh) (noun,dog) (verb,run) (noun,run)
        assert!((noun.unique_share - 0.5).abs() < 1e-12);
        let single = Corpus::new(CorpusKind::Generic, vec![conv("a", &["x", "y", "x"])], "");
        let p = pos_proportions(&single).unwrap();
        for s in p {
            let expect = if s.class == MacroClass::Noun { 1.0 } else { 0.0 };
            assert_eq!((s.total_share, s.unique_share), (expect, expect));
        }
    }

    #[test]
    fn interjection_table() {
        let toks: Vec<Token> = ["yeah", "oh", "yeah", "dog", "Yeah", "um"]
            .iter()
            .map(|w| Token::new(*w, if *w == "dog" { Upos::Noun } else { Upos::Intj }))
            .collect();
        let c = Corpus::new(
            CorpusKind::Generic,
            vec![Conversation::new("a", CorpusKind::Generic, vec![Utterance::new("s", toks)])],
            "",
        );
        let t = top_interjections(&c, 2).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].form.as_str(), t[0].count), ("yeah", 3));
        assert!((t[0].share - 0.6).abs() < 1e-12);
        assert_eq!(t[1].form, "oh");
        assert!(top_interjections(&c, 0).unwrap().is_empty());
    }

    #[test]
    fn pause_scores() {
        assert_eq!(pause_score(-0.5).unwrap(), -1);
        assert_eq!(pause_score(0.0).unwrap(), 0);
        assert_eq!(pause_score(0.2).unwrap(), 0);
        assert_eq!(pause_score(0.4).unwrap(), 1);
        assert_eq!(pause_score(1.2).unwrap(), 1);
        assert_eq!(pause_score(1.25).unwrap(), 2);
        assert_eq!(pause_score(2.0).unwrap(), 2);
        assert!(pause_score(f64::NAN).is_err());
        PauseThresholds::default().validate().unwrap();
        let gap = PauseThresholds { medium_below: 1.0, ..Default::default() };
        assert!(gap.validate().is_err());
    }

    #[test]
    fn pauses_from_timings() {
        let mut c = conv("a", &["x"]);
        c.utterances = vec![
            Utterance::new("a", vec![Token::raw("x")]).timed(0.0, 1.0),
            Utterance::new("b", vec![Token::raw("y")]).timed(0.8, 2.0),
            Utterance::new("a", vec![Token::raw("z")]).timed(4.0, 5.0),
            Utterance::new("b", vec![Token::raw("w")]),
        ];
        assert_eq!(conversation_pauses(&c), [-0.19999999999999996, 2.0]);
        assert_eq!(normalized_pause_score(&c, &PauseThresholds::default()).unwrap(), Some(0.25));
    }

    proptest! {
        #[test]
        fn run_matches_brute_force(stream in prop::collection::vec(0u8..6, 0..40)) {
            let forms: Vec<String> = stream.iter().map(|b| format!("w{b}")).collect();
            let refs: Vec<&str> = forms.iter().map(String::as_str).collect();
            let run = max_unique_run(&refs);
            prop_assert_eq!(run, brute_run(&refs));
            let distinct: HashSet<&str> = refs.iter().copied().collect();
            prop_assert!(run + distinct.len() <= refs.len());
            let doubled: Vec<&str> = refs.iter().chain(refs.iter()).copied().collect();
            prop_assert!(max_unique_run(&doubled) >= refs.len() - distinct.len());
        }

        #[test]
        fn pearson_bounded_and_symmetric(
            pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..50)
        ) {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            if let Ok(r) = pearson_r(&xs, &ys) {
                prop_assert!((-1.0..=1.0).contains(&r));
                prop_assert!((r - pearson_r(&ys, &xs).unwrap()).abs() < 1e-12);
            }
        }
    }
}
