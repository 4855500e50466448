//! Word-and-punctuation tokenizer.
//!
//! Whitespace separates chunks; within a chunk, punctuation is split off as
//! standalone tokens. Apostrophes and hyphens between two word characters stay
//! inside the word (`I'm`, `well-known`), as do `.` and `,` between digits
//! (`3.5`, `1,000`). A run of one repeated punctuation mark (`...`, `--`, `!!`) is a
//! single token.

use unicode_normalization::UnicodeNormalization;

/// Case-folding policy for the type key of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormPolicy {
    /// NFC, then lowercase.
    #[default]
    CaseFold,
    /// NFC only.
    Preserve,
}

impl FormPolicy {
    pub fn form_of(self, surface: &str) -> String {
        let nfc: String = surface.nfc().collect();
        match self {
            FormPolicy::CaseFold => nfc.to_lowercase(),
            FormPolicy::Preserve => nfc,
        }
    }
}

/// Type key of a surface string under the default policy.
pub fn form_of(surface: &str) -> String {
    FormPolicy::CaseFold.form_of(surface)
}

fn is_combining(c: char) -> bool {
    matches!(c as u32,
        0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || is_combining(c)
}

fn is_inner_joiner(prev: char, c: char, next: char) -> bool {
    match c {
        '\'' | '\u{2019}' | '-' => is_word_char(prev) && is_word_char(next),
        '.' | ',' => prev.is_ascii_digit() && next.is_ascii_digit(),
        _ => false,
    }
}

/// Split cleaned text into surfaces.
pub fn tokenize_surfaces(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        split_chunk(chunk, &mut out);
    }
    out
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut word = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if is_word_char(c) {
            word.push(c);
            i += 1;
            continue;
        }
        let prev = if i > 0 { chars[i - 1] } else { ' ' };
        let next = chars.get(i + 1).copied().unwrap_or(' ');
        if !word.is_empty() && is_inner_joiner(prev, c, next) {
            word.push(c);
            i += 1;
            continue;
        }
        if !word.is_empty() {
            out.push(std::mem::take(&mut word));
        }
        let start = i;
        while i < chars.len() && chars[i] == c {
            i += 1;
        }
        out.push(chars[start..i].iter().collect());
    }
    if !word.is_empty() {
        out.push(word);
    }
}

/// Tokenize into `(surface, form)` pairs.
pub fn tokenize(text: &str) -> Vec<(String, String)> {
    tokenize_with(text, FormPolicy::CaseFold)
}

pub fn tokenize_with(text: &str, policy: FormPolicy) -> Vec<(String, String)> {
    tokenize_surfaces(text)
        .into_iter()
        .map(|s| {
            let form = policy.form_of(&s);
            (s, form)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize_surfaces(text)
    }

    #[test]
    fn punctuation_split_off() {
        let toks = tokenize("Oh, yeah!");
        let s: Vec<_> = toks.iter().map(|t| t.0.as_str()).collect();
        let f: Vec<_> = toks.iter().map(|t| t.1.as_str()).collect();
        assert_eq!(s, ["Oh", ",", "yeah", "!"]);
        assert_eq!(f, ["oh", ",", "yeah", "!"]);
    }

    #[test]
    fn contractions_stay_whole() {
        assert_eq!(surfaces("I'm here."), ["I'm", "here", "."]);
        assert_eq!(surfaces("don\u{2019}t"), ["don\u{2019}t"]);
        assert_eq!(surfaces("'em goin'"), ["'", "em", "goin", "'"]);
    }

    #[test]
    fn joiners_and_runs() {
        assert_eq!(surfaces("well-known -- 3.5 1,000 wait..."), [
            "well-known", "--", "3.5", "1,000", "wait", "..."
        ]);
        assert_eq!(surfaces("end.Start"), ["end", ".", "Start"]);
        assert_eq!(surfaces("?!"), ["?", "!"]);
        assert_eq!(surfaces("$5"), ["$", "5"]);
    }

    #[test]
    fn nfc_and_casefold() {
        // "e" + combining acute composes to U+00E9
        let toks = tokenize("Cafe\u{0301}");
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].1, "caf\u{00E9}");
        assert_eq!(FormPolicy::Preserve.form_of("Yeah"), "Yeah");
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
    }

    proptest! {
        #[test]
        fn no_empty_tokens_and_stable(text in "[a-zA-Z0-9 '\\-.,!?\u{2019}é]{0,80}") {
            let toks = tokenize_surfaces(&text);
            prop_assert!(toks.iter().all(|t| !t.is_empty()));
            let rejoined = toks.join(" ");
            prop_assert_eq!(tokenize_surfaces(&rejoined), toks);
        }

        #[test]
        fn concatenation(a in "[a-zA-Z'.,!?]{0,30}( [a-zA-Z'.,!?]{1,20}){0,4}",
                         b in "[a-zA-Z'.,!?]{0,30}( [a-zA-Z'.,!?]{1,20}){0,4}") {
            let mut joined = tokenize(&a);
            joined.extend(tokenize(&b));
            prop_assert_eq!(tokenize(&format!("{a} {b}")), joined);
        }
    }
}
