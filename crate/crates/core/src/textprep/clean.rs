//! Corpus-specific cleaning profiles.
//!
//! A profile is an ordered list of regex rewrites. Every profile is followed by the
//! `common` profile, which spells out five informal contractions and normalizes
//! whitespace.

use std::fmt;
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Candor,
    Movies,
    Common,
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileName::Candor => "candor",
            ProfileName::Movies => "movies",
            ProfileName::Common => "common",
        })
    }
}

impl FromStr for ProfileName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "candor" => Ok(ProfileName::Candor),
            "movies" => Ok(ProfileName::Movies),
            "common" => Ok(ProfileName::Common),
            other => Err(Error::InvalidParam(format!("unknown clean profile `{other}`"))),
        }
    }
}

/// One `pattern -> replacement` rewrite, in `regex` crate syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub pattern: String,
    pub replacement: String,
}

impl RuleSpec {
    fn new(pattern: &str, replacement: &str) -> Self {
        RuleSpec {
            pattern: pattern.to_string(),
            replacement: replacement.to_string(),
        }
    }
}

/// Serializable rule tables for all three profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanRules {
    pub candor: Vec<RuleSpec>,
    pub movies: Vec<RuleSpec>,
    pub common: Vec<RuleSpec>,
}

const EXPANSIONS: [(&str, &str); 5] = [
    ("sorta", "sort of"),
    ("dunno", "do not know"),
    ("gonna", "going to"),
    ("wanna", "want to"),
    ("gotta", "got to"),
];

impl Default for CleanRules {
    fn default() -> Self {
        let candor = vec![RuleSpec::new("[≪≫]", " ")];
        let movies = vec![
            RuleSpec::new("[\u{2018}\u{2019}\u{201A}\u{201B}\u{0091}\u{0092}]", "'"),
            RuleSpec::new("[\u{201C}\u{201D}\u{201E}\u{201F}\u{0093}\u{0094}]", "\""),
            RuleSpec::new("[\u{2010}-\u{2015}\u{0096}\u{0097}]", "-"),
            RuleSpec::new("[\u{2026}\u{0085}]", "..."),
            RuleSpec::new("\u{00A0}", " "),
            RuleSpec::new("<[/]?[ibu]>", ""),
        ];
        let mut common = Vec::new();
        for (short, long) in EXPANSIONS {
            common.push(RuleSpec::new(&format!(r"\b{short}\b"), long));
            common.push(RuleSpec::new(
                &format!(r"\b{}\b", capitalize(short)),
                &capitalize(long),
            ));
        }
        common.push(RuleSpec::new(r"\s+", " "));
        common.push(RuleSpec::new(r"^ | $", ""));
        CleanRules {
            candor,
            movies,
            common,
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone)]
struct Rule {
    pattern: Regex,
    replacement: String,
}

/// A compiled cleaning profile.
#[derive(Debug, Clone)]
pub struct CleanProfile {
    pub name: ProfileName,
    rules: Vec<Rule>,
}

impl CleanProfile {
    pub fn compile(name: ProfileName, specs: &[RuleSpec]) -> Result<Self> {
        let rules = specs
            .iter()
            .map(|spec| {
                Regex::new(&spec.pattern)
                    .map(|pattern| Rule {
                        pattern,
                        replacement: spec.replacement.clone(),
                    })
                    .map_err(|e| Error::BadRule {
                        pattern: spec.pattern.clone(),
                        message: e.to_string(),
                    })
            })
            .collect::<Result<_>>()?;
        Ok(CleanProfile { name, rules })
    }

    fn apply(&self, text: &str) -> String {
        let mut out = text.to_string();
        for rule in &self.rules {
            // `NoExpand`: replacements are literal text, not `$1` templates.
            out = rule
                .pattern
                .replace_all(&out, regex::NoExpand(&rule.replacement))
                .into_owned();
        }
        out
    }
}

/// The compiled set of profiles; `clean` applies the named profile then `common`.
#[derive(Debug, Clone)]
pub struct Cleaner {
    candor: CleanProfile,
    movies: CleanProfile,
    common: CleanProfile,
}

impl Cleaner {
    pub fn new(rules: &CleanRules) -> Result<Self> {
        Ok(Cleaner {
            candor: CleanProfile::compile(ProfileName::Candor, &rules.candor)?,
            movies: CleanProfile::compile(ProfileName::Movies, &rules.movies)?,
            common: CleanProfile::compile(ProfileName::Common, &rules.common)?,
        })
    }

    pub fn profile(&self, name: ProfileName) -> &CleanProfile {
        match name {
            ProfileName::Candor => &self.candor,
            ProfileName::Movies => &self.movies,
            ProfileName::Common => &self.common,
        }
    }

    pub fn clean(&self, text: &str, profile: ProfileName) -> String {
        let specific = match profile {
            ProfileName::Common => None,
            other => Some(self.profile(other)),
        };
        let staged = match specific {
            Some(p) => p.apply(text),
            None => text.to_string(),
        };
        self.common.apply(&staged)
    }
}

impl Default for Cleaner {
    fn default() -> Self {
        Cleaner::new(&CleanRules::default()).expect("built-in rules compile")
    }
}

/// Clean `text` with the default rule tables.
pub fn clean_text(text: &str, profile: ProfileName) -> String {
    thread_local! {
        static DEFAULT: Cleaner = Cleaner::default();
    }
    DEFAULT.with(|c| c.clean(text, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn candor_glyphs_removed() {
        assert_eq!(clean_text("≪ yeah ≫ ok", ProfileName::Candor), "yeah ok");
        assert_eq!(clean_text("≪yeah≫ok", ProfileName::Candor), "yeah ok");
    }

    #[test]
    fn five_expansions() {
        assert_eq!(clean_text("I'm gonna go", ProfileName::Common), "I'm going to go");
        assert_eq!(
            clean_text("dunno, sorta wanna but gotta", ProfileName::Common),
            "do not know, sort of want to but got to"
        );
        assert_eq!(clean_text("Gonna rain.", ProfileName::Movies), "Going to rain.");
    }

    #[test]
    fn expansions_respect_word_boundaries() {
        assert_eq!(clean_text("gonnabe agonna", ProfileName::Common), "gonnabe agonna");
        // other contractions are left alone
        assert_eq!(clean_text("y'all kinda", ProfileName::Common), "y'all kinda");
    }

    #[test]
    fn movies_ascii_standardization() {
        assert_eq!(
            clean_text("\u{201C}Don\u{2019}t\u{201D} \u{2014} stop\u{2026}", ProfileName::Movies),
            "\"Don't\" - stop..."
        );
        assert_eq!(clean_text("a   b\t\tc ", ProfileName::Movies), "a b c");
    }

    #[test]
    fn empty_input() {
        assert_eq!(clean_text("", ProfileName::Candor), "");
        assert_eq!(clean_text("", ProfileName::Common), "");
    }

    #[test]
    fn bad_rule_is_reported() {
        let err = CleanProfile::compile(ProfileName::Common, &[RuleSpec::new("(", "")]).unwrap_err();
        assert!(matches!(err, Error::BadRule { .. }));
    }

    proptest! {
        #[test]
        fn idempotent(text in "[a-zA-Z ≪≫\u{2019}\u{201C}\u{2014}.,!'\t]{0,60}",
                      which in 0usize..3) {
            let profile = [ProfileName::Candor, ProfileName::Movies, ProfileName::Common][which];
            let once = clean_text(&text, profile);
            prop_assert_eq!(clean_text(&once, profile), once);
        }

        #[test]
        fn idempotent_on_expansion_words(words in prop::collection::vec(
            prop::sample::select(vec!["gonna", "Gonna", "sorta", "dunno", "wanna", "gotta", "x", "≪", ","]),
            0..12))
        {
            let text = words.join(" ");
            let once = clean_text(&text, ProfileName::Candor);
            prop_assert_eq!(clean_text(&once, ProfileName::Candor), once);
        }
    }
}
