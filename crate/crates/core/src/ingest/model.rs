use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{recode_upos, FormPolicy, MacroClass, Upos};

/// Meta key holding the number of missing/empty lines a conversation referenced.
pub const NULL_UTTERANCES_KEY: &str = "null_utterances";
pub const MOVIE_ID_KEY: &str = "movie_id";
pub const GENRES_KEY: &str = "genres";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub form: String,
    pub upos: Upos,
    pub macro_class: MacroClass,
}

impl Token {
    pub fn new(surface: impl Into<String>, upos: Upos) -> Self {
        Token::with_policy(surface, upos, FormPolicy::CaseFold)
    }

    pub fn with_policy(surface: impl Into<String>, upos: Upos, policy: FormPolicy) -> Self {
        let surface = surface.into();
        let form = policy.form_of(&surface);
        Token {
            surface,
            form,
            upos,
            macro_class: recode_upos(upos),
        }
    }

    /// An untagged token carrying the placeholder tag X.
    pub fn raw(surface: impl Into<String>) -> Self {
        Token::new(surface, Upos::X)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub speaker_id: String,
    pub tokens: Vec<Token>,
    pub start_s: Option<f64>,
    pub stop_s: Option<f64>,
    /// Untokenized text, kept on raw (pre-tagging) records.
    pub text: Option<String>,
}

impl Utterance {
    pub fn new(speaker_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        Utterance {
            speaker_id: speaker_id.into(),
            tokens,
            start_s: None,
            stop_s: None,
            text: None,
        }
    }

    pub fn timed(mut self, start_s: f64, stop_s: f64) -> Self {
        self.start_s = Some(start_s);
        self.stop_s = Some(stop_s);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    Candor,
    MoviesIndividual,
    MoviesGrouped,
    Generic,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 4] = [
        CorpusKind::Candor,
        CorpusKind::MoviesIndividual,
        CorpusKind::MoviesGrouped,
        CorpusKind::Generic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusKind::Candor => "candor",
            CorpusKind::MoviesIndividual => "movies_individual",
            CorpusKind::MoviesGrouped => "movies_grouped",
            CorpusKind::Generic => "generic",
        }
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusKind {
    type Err = Error;

    /// Accepts both `movies_grouped` and `movies-grouped` spellings.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        CorpusKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::InvalidParam(format!("unknown corpus kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetaValue {
    Text(String),
    List(Vec<String>),
}

impl MetaValue {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            MetaValue::Text(s) => Some(s),
            MetaValue::List(_) => None,
        }
    }

    pub fn items(&self) -> &[String] {
        match self {
            MetaValue::Text(s) => std::slice::from_ref(s),
            MetaValue::List(v) => v,
        }
    }
}

pub type Meta = BTreeMap<String, MetaValue>;

#[derive(Debug, Clone, PartialEq)]
pub struct Conversation {
    pub id: String,
    pub kind: CorpusKind,
    pub utterances: Vec<Utterance>,
    pub meta: Meta,
}

impl Conversation {
    pub fn new(id: impl Into<String>, kind: CorpusKind, utterances: Vec<Utterance>) -> Self {
        Conversation {
            id: id.into(),
            kind,
            utterances,
            meta: Meta::new(),
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> + '_ {
        self.utterances.iter().flat_map(|u| u.tokens.iter())
    }

    pub fn n_tokens(&self) -> usize {
        self.utterances.iter().map(|u| u.tokens.len()).sum()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens().map(|t| t.form.as_str()).collect()
    }

    /// Forms of tokens in `class`, in stream order.
    pub fn class_forms(&self, class: MacroClass) -> Vec<&str> {
        self.tokens()
            .filter(|t| t.macro_class == class)
            .map(|t| t.form.as_str())
            .collect()
    }

    pub fn null_utterances(&self) -> usize {
        self.meta
            .get(NULL_UTTERANCES_KEY)
            .and_then(MetaValue::as_text)
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    }

    pub fn movie_id(&self) -> Option<&str> {
        self.meta.get(MOVIE_ID_KEY).and_then(MetaValue::as_text)
    }

    pub fn genres(&self) -> &[String] {
        self.meta.get(GENRES_KEY).map(MetaValue::items).unwrap_or(&[])
    }

    /// True when the conversation has tokens and every one carries the placeholder tag.
    pub fn is_placeholder_tagged(&self) -> bool {
        let mut any = false;
        for t in self.tokens() {
            if t.upos != Upos::X {
                return false;
            }
            any = true;
        }
        any
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub kind: CorpusKind,
    pub conversations: Vec<Conversation>,
    pub provenance: String,
}

impl Corpus {
    pub fn new(kind: CorpusKind, conversations: Vec<Conversation>, provenance: impl Into<String>) -> Self {
        Corpus {
            kind,
            conversations,
            provenance: provenance.into(),
        }
    }

    pub fn n_tokens(&self) -> usize {
        self.conversations.iter().map(Conversation::n_tokens).sum()
    }

    pub fn n_utterances(&self) -> usize {
        self.conversations.iter().map(|c| c.utterances.len()).sum()
    }

    pub fn is_tagged(&self) -> bool {
        !self.conversations.iter().any(Conversation::is_placeholder_tagged)
    }

    /// Error unless the corpus carries real POS tags.
    pub fn require_tagged(&self, what: &str) -> Result<()> {
        if self.is_tagged() {
            Ok(())
        } else {
            Err(Error::Untagged(what.to_string()))
        }
    }

    pub fn append_provenance(&mut self, step: &str) {
        if self.provenance.is_empty() {
            self.provenance = step.to_string();
        } else if !self.provenance.ends_with(step) {
            self.provenance.push_str("; ");
            self.provenance.push_str(step);
        }
    }
}
