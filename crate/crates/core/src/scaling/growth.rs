use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;

use super::Unit;
use crate::error::{Error, Result};
use crate::ingest::Corpus;

/// Unique-type counts N(t) at positions t = 1..T.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCurve {
    pub n_unique: Vec<f64>,
}

impl GrowthCurve {
    pub fn len(&self) -> usize {
        self.n_unique.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_unique.is_empty()
    }

    /// `(t, N(t))` pairs with t starting at 1.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.n_unique
            .iter()
            .enumerate()
            .map(|(i, &n)| ((i + 1) as f64, n))
            .collect()
    }

    pub fn last(&self) -> Option<f64> {
        self.n_unique.last().copied()
    }
}

fn unique_counts<T: Hash + Eq>(items: &[T]) -> Vec<u32> {
    let mut seen = HashSet::with_capacity(items.len() / 4 + 1);
    let mut n = 0u32;
    items
        .iter()
        .map(|it| {
            if seen.insert(it) {
                n += 1;
            }
            n
        })
        .collect()
}

pub fn growth_curve<T: Hash + Eq>(items: &[T]) -> Result<GrowthCurve> {
    if items.is_empty() {
        return Err(Error::Empty("growth curve of an empty stream".into()));
    }
    Ok(GrowthCurve {
        n_unique: unique_counts(items).into_iter().map(f64::from).collect(),
    })
}

/// Window-averaged growth curve: at each t, the mean of N_c(t) over the
/// conversations whose (unit-filtered) stream has at least t tokens.
pub fn averaged_growth_curve(corpus: &Corpus, unit: Unit) -> Result<GrowthCurve> {
    if let Unit::Class(_) = unit {
        corpus.require_tagged("per-class growth curve")?;
    }
    let curves: Vec<Vec<u32>> = corpus
        .conversations
        .par_iter()
        .map(|c| unique_counts(&unit.forms(c)))
        .collect();
    let longest = curves.iter().map(Vec::len).max().unwrap_or(0);
    if longest == 0 {
        return Err(Error::Empty(format!("no `{unit}` tokens in corpus")));
    }
    let mut sums = vec![0f64; longest];
    let mut counts = vec![0u32; longest];
    for curve in &curves {
        for (t, &n) in curve.iter().enumerate() {
            sums[t] += f64::from(n);
            counts[t] += 1;
        }
    }
    Ok(GrowthCurve {
        n_unique: sums
            .iter()
            .zip(&counts)
            .map(|(s, &c)| s / f64::from(c))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{Conversation, CorpusKind, Token, Utterance};
    use crate::textprep::{MacroClass, Upos};
    use proptest::prelude::*;

    fn conv(id: &str, words: &[&str]) -> Conversation {
        Conversation::new(
            id,
            CorpusKind::Generic,
            vec![Utterance::new("a", words.iter().map(|w| Token::new(*w, Upos::Noun)).collect())],
        )
    }

    #[test]
    fn direct_counts() {
        assert_eq!(growth_curve(&["a", "b", "a", "c"]).unwrap().n_unique, [1.0, 2.0, 2.0, 3.0]);
        assert_eq!(growth_curve(&["z"; 5]).unwrap().n_unique, [1.0; 5]);
        assert!(growth_curve::<&str>(&[]).is_err());
    }

    #[test]
    fn window_average_excludes_ended_conversations() {
        let corpus = Corpus::new(
            CorpusKind::Generic,
            vec![conv("1", &["a", "b"]), conv("2", &["a", "a", "b", "c"])],
            "",
        );
        let avg = averaged_growth_curve(&corpus, Unit::All).unwrap();
        assert_eq!(avg.n_unique, [1.0, 1.5, 2.0, 3.0]);
    }

    #[test]
    fn single_conversation_average_is_its_curve() {
        let words = ["x", "y", "x", "z", "y", "w"];
        let corpus = Corpus::new(CorpusKind::Generic, vec![conv("1", &words)], "");
        assert_eq!(
            averaged_growth_curve(&corpus, Unit::All).unwrap(),
            growth_curve(&words).unwrap()
        );
    }

    #[test]
    fn class_unit_reindexes_filtered_stream() {
        let toks = vec![
            Token::new("oh", Upos::Intj),
            Token::new("dog", Upos::Noun),
            Token::new("runs", Upos::Verb),
            Token::new("dog", Upos::Noun),
            Token::new("cat", Upos::Noun),
        ];
        let corpus = Corpus::new(
            CorpusKind::Generic,
            vec![Conversation::new("1", CorpusKind::Generic, vec![Utterance::new("a", toks)])],
            "",
        );
        let curve = averaged_growth_curve(&corpus, Unit::Class(MacroClass::Noun)).unwrap();
        assert_eq!(curve.n_unique, [1.0, 1.0, 2.0]);
        assert!(averaged_growth_curve(&corpus, Unit::Class(MacroClass::Func)).is_err());
    }

    #[test]
    fn class_unit_refuses_placeholder_corpus() {
        let corpus = Corpus::new(
            CorpusKind::Generic,
            vec![Conversation::new("1", CorpusKind::Generic, vec![Utterance::new("a", vec![Token::raw("x")])])],
            "",
        );
        assert!(matches!(
            averaged_growth_curve(&corpus, Unit::Class(MacroClass::Noun)),
            Err(Error::Untagged(_))
        ));
        assert!(averaged_growth_curve(&corpus, Unit::All).is_ok());
    }

    proptest! {
        #[test]
        fn matches_brute_force_set_scan(stream in prop::collection::vec(0u8..40, 1..300)) {
            let curve = growth_curve(&stream).unwrap();
            for t in 1..=stream.len() {
                let distinct: HashSet<_> = stream[..t].iter().collect();
                prop_assert_eq!(curve.n_unique[t - 1], distinct.len() as f64);
            }
        }
    }
}
