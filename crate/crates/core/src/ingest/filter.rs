use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::model::{
    Conversation, Corpus, CorpusKind, Meta, MetaValue, GENRES_KEY, MOVIE_ID_KEY, NULL_UTTERANCES_KEY,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterSettings {
    pub min_utterances: usize,
    /// Matched case-insensitively against each conversation's genre list.
    pub excluded_genres: BTreeSet<String>,
    pub drop_null: bool,
}

impl FilterSettings {
    /// No-op filter.
    pub fn identity() -> Self {
        FilterSettings {
            min_utterances: 0,
            excluded_genres: BTreeSet::new(),
            drop_null: false,
        }
    }

    /// Settings used for the Movie-Dialogs subset: at least 10 utterances, no
    /// non-fiction genres, no conversations with null lines.
    pub fn movie_dialogs() -> Self {
        FilterSettings {
            min_utterances: 10,
            excluded_genres: ["documentary", "biography"].iter().map(|s| s.to_string()).collect(),
            drop_null: true,
        }
    }

    fn describe(&self) -> String {
        let genres: Vec<&str> = self.excluded_genres.iter().map(String::as_str).collect();
        format!(
            "filter(min_utterances={}, excluded_genres=[{}], drop_null={})",
            self.min_utterances,
            genres.join(","),
            self.drop_null
        )
    }

    pub fn keeps(&self, conv: &Conversation) -> bool {
        if conv.utterances.len() < self.min_utterances {
            return false;
        }
        if self.drop_null && conv.null_utterances() > 0 {
            return false;
        }
        let excluded = self
            .excluded_genres
            .iter()
            .map(|g| g.to_lowercase())
            .collect::<BTreeSet<_>>();
        !conv.genres().iter().any(|g| excluded.contains(&g.to_lowercase()))
    }
}

impl Default for FilterSettings {
    fn default() -> Self {
        FilterSettings::identity()
    }
}

/// Keep conversations passing `settings`; the settings are appended to provenance.
pub fn filter_conversations(corpus: &Corpus, settings: &FilterSettings) -> Corpus {
    let mut out = Corpus::new(
        corpus.kind,
        corpus
            .conversations
            .iter()
            .filter(|c| settings.keeps(c))
            .cloned()
            .collect(),
        corpus.provenance.clone(),
    );
    out.append_provenance(&settings.describe());
    out
}

/// Join every movie's conversations into one conversation per movie, in order of
/// first appearance, concatenating utterances in source order.
pub fn group_by_movie(corpus: &Corpus) -> Result<Corpus> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<&Conversation>> = HashMap::new();
    for conv in &corpus.conversations {
        let movie = conv
            .movie_id()
            .ok_or_else(|| Error::MissingMovieId(conv.id.clone()))?;
        groups
            .entry(movie.to_string())
            .or_insert_with(|| {
                order.push(movie.to_string());
                Vec::new()
            })
            .push(conv);
    }

    let conversations = order
        .into_iter()
        .map(|movie| {
            let parts = &groups[&movie];
            let mut meta = Meta::new();
            meta.insert(MOVIE_ID_KEY.into(), MetaValue::Text(movie.clone()));
            for key in ["title", "year", GENRES_KEY] {
                if let Some(v) = parts[0].meta.get(key) {
                    meta.insert(key.into(), v.clone());
                }
            }
            let nulls: usize = parts.iter().map(|c| c.null_utterances()).sum();
            if nulls > 0 {
                meta.insert(NULL_UTTERANCES_KEY.into(), MetaValue::Text(nulls.to_string()));
            }
            meta.insert("n_source_conversations".into(), MetaValue::Text(parts.len().to_string()));
            let utterances = parts.iter().flat_map(|c| c.utterances.iter().cloned()).collect();
            let mut conv = Conversation::new(movie, CorpusKind::MoviesGrouped, utterances);
            conv.meta = meta;
            conv
        })
        .collect();

    let mut out = Corpus::new(CorpusKind::MoviesGrouped, conversations, corpus.provenance.clone());
    out.append_provenance("group_by_movie");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::model::{Token, Utterance};
    use proptest::prelude::*;

    fn conv(id: &str, movie: Option<&str>, n_utts: usize, genres: &[&str], nulls: usize) -> Conversation {
        let utts = (0..n_utts)
            .map(|i| Utterance::new("s", vec![Token::raw(format!("w{i}")), Token::raw("x")]))
            .collect();
        let mut c = Conversation::new(id, CorpusKind::MoviesIndividual, utts);
        if let Some(m) = movie {
            c.meta.insert(MOVIE_ID_KEY.into(), MetaValue::Text(m.into()));
        }
        c.meta.insert(
            GENRES_KEY.into(),
            MetaValue::List(genres.iter().map(|s| s.to_string()).collect()),
        );
        if nulls > 0 {
            c.meta.insert(NULL_UTTERANCES_KEY.into(), MetaValue::Text(nulls.to_string()));
        }
        c
    }

    fn corpus(convs: Vec<Conversation>) -> Corpus {
        Corpus::new(CorpusKind::MoviesIndividual, convs, "test")
    }

    #[test]
    fn min_utterances_boundary() {
        let c = corpus(vec![conv("a", Some("m"), 9, &[], 0), conv("b", Some("m"), 10, &[], 0)]);
        let s = FilterSettings {
            min_utterances: 10,
            ..FilterSettings::identity()
        };
        let out = filter_conversations(&c, &s);
        assert_eq!(out.conversations.len(), 1);
        assert_eq!(out.conversations[0].id, "b");
        assert!(out.provenance.contains("min_utterances=10"));
    }

    #[test]
    fn identity_filter_keeps_everything() {
        let c = corpus(vec![conv("a", None, 1, &["Documentary"], 3), conv("b", None, 0, &[], 0)]);
        let out = filter_conversations(&c, &FilterSettings::identity());
        assert_eq!(out.conversations, c.conversations);
    }

    #[test]
    fn genre_match_is_case_insensitive_and_nulls_drop_whole_conversation() {
        let c = corpus(vec![
            conv("doc", Some("m1"), 12, &["Documentary"], 0),
            conv("bio", Some("m1"), 12, &["drama", "BIOGRAPHY"], 0),
            conv("null", Some("m2"), 12, &["drama"], 1),
            conv("ok", Some("m2"), 12, &["drama"], 0),
        ]);
        let out = filter_conversations(&c, &FilterSettings::movie_dialogs());
        let ids: Vec<_> = out.conversations.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["ok"]);
    }

    #[test]
    fn grouping_conserves_counts() {
        let c = corpus(vec![
            conv("a", Some("m1"), 2, &[], 0),
            conv("b", Some("m2"), 3, &[], 0),
            conv("c", Some("m1"), 4, &[], 0),
            conv("d", Some("m2"), 1, &[], 0),
            conv("e", Some("m2"), 5, &[], 0),
        ]);
        let g = group_by_movie(&c).unwrap();
        assert_eq!(g.kind, CorpusKind::MoviesGrouped);
        assert_eq!(g.conversations.len(), 2);
        assert_eq!(g.conversations[0].id, "m1");
        assert_eq!(g.conversations[0].utterances.len(), 6);
        assert_eq!(g.conversations[1].n_tokens(), 18);
        assert_eq!(g.n_tokens(), c.n_tokens());
        assert_eq!(g.n_utterances(), c.n_utterances());
    }

    #[test]
    fn grouping_requires_movie_id() {
        let c = corpus(vec![conv("a", None, 2, &[], 0)]);
        assert!(matches!(group_by_movie(&c), Err(Error::MissingMovieId(id)) if id == "a"));
    }

    proptest! {
        #[test]
        fn filter_is_idempotent(
            specs in prop::collection::vec((0usize..15, 0usize..3, 0usize..2), 0..20),
            min in 0usize..15,
            drop_null in any::<bool>(),
        ) {
            let genres = [&[][..], &["Documentary"][..], &["drama"][..]];
            let c = corpus(specs.iter().enumerate()
                .map(|(i, &(n, g, nulls))| conv(&format!("c{i}"), Some("m"), n, genres[g], nulls))
                .collect());
            let s = FilterSettings { min_utterances: min, drop_null, ..FilterSettings::movie_dialogs() };
            let once = filter_conversations(&c, &s);
            prop_assert_eq!(filter_conversations(&once, &s), once);
        }
    }
}
