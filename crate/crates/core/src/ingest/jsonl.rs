//! Canonical tagged-JSONL interchange: one conversation record per line.
//!
//! ```text
//! {"id": str, "kind": str, "meta": {str: str|list},
//!  "utterances": [{"speaker": str, "start_s": num|null, "stop_s": num|null,
//!                  "tokens": [{"s": surface, "p": UPOS}]}]}
//! ```
//!
//! Raw (pre-tagging) records may also carry an utterance-level `"text"` field.
//! A token-level macro-class, if present, is ignored and recomputed from `p`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{Conversation, Corpus, CorpusKind, Meta, Token, Utterance};
use crate::error::{Error, Result};
use crate::textprep::{FormPolicy, Upos};

#[derive(Debug, Serialize, Deserialize)]
struct TokenRecord {
    s: String,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct UtteranceRecord {
    speaker: String,
    #[serde(default)]
    start_s: Option<f64>,
    #[serde(default)]
    stop_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
    tokens: Vec<TokenRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConversationRecord {
    id: String,
    kind: String,
    #[serde(default)]
    meta: Meta,
    utterances: Vec<UtteranceRecord>,
}

/// Decode bytes as UTF-8, replacing invalid sequences; returns the number of
/// replacement characters introduced.
pub(crate) fn decode_lossy(bytes: &[u8]) -> (String, usize) {
    match std::str::from_utf8(bytes) {
        Ok(s) => (s.to_string(), 0),
        Err(_) => {
            let before = bytecount_replacement(bytes);
            let text = String::from_utf8_lossy(bytes).into_owned();
            let after = text.chars().filter(|&c| c == char::REPLACEMENT_CHARACTER).count();
            (text, after - before)
        }
    }
}

fn bytecount_replacement(bytes: &[u8]) -> usize {
    // U+FFFD already present in valid parts of the input
    bytes.windows(3).filter(|w| *w == [0xEF, 0xBF, 0xBD]).count()
}

fn parse_record(line: &str, lineno: usize, policy: FormPolicy) -> Result<Conversation> {
    let rec: ConversationRecord = serde_json::from_str(line).map_err(|e| Error::Schema {
        line: lineno,
        message: e.to_string(),
    })?;
    let kind: CorpusKind = rec.kind.parse().map_err(|e: Error| Error::Schema {
        line: lineno,
        message: e.to_string(),
    })?;
    let mut utterances = Vec::with_capacity(rec.utterances.len());
    for u in rec.utterances {
        if let (Some(a), Some(b)) = (u.start_s, u.stop_s) {
            if b < a {
                return Err(Error::Schema {
                    line: lineno,
                    message: format!("utterance stop_s {b} precedes start_s {a}"),
                });
            }
        }
        let tokens = u
            .tokens
            .into_iter()
            .map(|t| {
                let upos: Upos = t.p.parse().map_err(|e: Error| Error::Schema {
                    line: lineno,
                    message: e.to_string(),
                })?;
                Ok(Token::with_policy(t.s, upos, policy))
            })
            .collect::<Result<Vec<_>>>()?;
        utterances.push(Utterance {
            speaker_id: u.speaker,
            tokens,
            start_s: u.start_s,
            stop_s: u.stop_s,
            text: u.text,
        });
    }
    Ok(Conversation {
        id: rec.id,
        kind,
        utterances,
        meta: rec.meta,
    })
}

/// Parse JSONL text. Blank lines are skipped; all records must share one kind.
pub fn parse_tagged_jsonl(text: &str, policy: FormPolicy) -> Result<Vec<Conversation>> {
    let mut out: Vec<Conversation> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let conv = parse_record(line, i + 1, policy)?;
        if let Some(first) = out.first() {
            if first.kind != conv.kind {
                return Err(Error::Schema {
                    line: i + 1,
                    message: format!("kind `{}` differs from `{}` of earlier records", conv.kind, first.kind),
                });
            }
        }
        out.push(conv);
    }
    Ok(out)
}

pub fn load_tagged_jsonl(path: impl AsRef<Path>) -> Result<Corpus> {
    load_tagged_jsonl_with(path, FormPolicy::CaseFold)
}

pub fn load_tagged_jsonl_with(path: impl AsRef<Path>, policy: FormPolicy) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (text, replaced) = decode_lossy(&bytes);
    let conversations = parse_tagged_jsonl(&text, policy)?;
    let kind = conversations.first().map_or(CorpusKind::Generic, |c| c.kind);
    Ok(Corpus::new(
        kind,
        conversations,
        format!("jsonl:{} replaced_chars={replaced}", path.display()),
    ))
}

/// Serialize one conversation as a single JSONL line (no trailing newline).
pub fn conversation_to_line(conv: &Conversation) -> String {
    let rec = ConversationRecord {
        id: conv.id.clone(),
        kind: conv.kind.as_str().to_string(),
        meta: conv.meta.clone(),
        utterances: conv
            .utterances
            .iter()
            .map(|u| UtteranceRecord {
                speaker: u.speaker_id.clone(),
                start_s: u.start_s,
                stop_s: u.stop_s,
                text: u.text.clone(),
                tokens: u
                    .tokens
                    .iter()
                    .map(|t| TokenRecord {
                        s: t.surface.clone(),
                        p: t.upos.as_str().to_string(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&rec).expect("conversation record serializes")
}

pub fn write_tagged_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for conv in &corpus.conversations {
        out.write_all(conversation_to_line(conv).as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn save_tagged_jsonl(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_tagged_jsonl(corpus, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
