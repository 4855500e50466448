//! Universal POS tags and their five-way macro-class recoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The 17 Universal Dependencies part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl FromStr for Upos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Upos::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownUpos(s.to_string()))
    }
}

impl TryFrom<String> for Upos {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Upos> for String {
    fn from(t: Upos) -> String {
        t.as_str().to_string()
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coarse part-of-speech grouping used for per-class scaling and temporal analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MacroClass {
    Noun,
    Verb,
    Other,
    Func,
    Intj,
}

impl MacroClass {
    /// Row order of the regime matrices.
    pub const ALL: [MacroClass; 5] = [
        MacroClass::Noun,
        MacroClass::Verb,
        MacroClass::Other,
        MacroClass::Func,
        MacroClass::Intj,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MacroClass::Noun => "noun",
            MacroClass::Verb => "verb",
            MacroClass::Other => "other",
            MacroClass::Func => "func",
            MacroClass::Intj => "intj",
        }
    }
}

impl FromStr for MacroClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        MacroClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == lower)
            .ok_or_else(|| Error::InvalidParam(format!("unknown macro-class `{s}`")))
    }
}

impl fmt::Display for MacroClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Recode a UPOS tag into its macro-class.
///
/// Nominals (NOUN, PROPN, PRON) go to noun, VERB and ADV to verb, adpositions and
/// conjunctions to function words, INTJ stays, everything else (AUX included) is other.
pub fn recode_upos(upos: Upos) -> MacroClass {
    match upos {
        Upos::Noun | Upos::Propn | Upos::Pron => MacroClass::Noun,
        Upos::Verb | Upos::Adv => MacroClass::Verb,
        Upos::Adp | Upos::Cconj | Upos::Sconj => MacroClass::Func,
        Upos::Intj => MacroClass::Intj,
        Upos::Adj
        | Upos::Aux
        | Upos::Det
        | Upos::Num
        | Upos::Part
        | Upos::Punct
        | Upos::Sym
        | Upos::X => MacroClass::Other,
    }
}

/// String-level entry point; unknown tags are an error naming the tag.
pub fn recode_tag(tag: &str) -> Result<MacroClass> {
    tag.parse::<Upos>().map(recode_upos)
}
