//! Loading, filtering, grouping and serializing conversational corpora.

mod filter;
mod jsonl;
mod model;
mod movie_dialogs;

use std::path::Path;

pub use filter::{filter_conversations, group_by_movie, FilterSettings};
pub use jsonl::{
    conversation_to_line, load_tagged_jsonl, load_tagged_jsonl_with, parse_tagged_jsonl,
    save_tagged_jsonl, write_tagged_jsonl,
};
pub use model::{
    Conversation, Corpus, CorpusKind, Meta, MetaValue, Token, Utterance, GENRES_KEY, MOVIE_ID_KEY,
    NULL_UTTERANCES_KEY,
};
pub use movie_dialogs::{load_movie_dialogs, CHARACTERS_FILE, CONVERSATIONS_FILE, LINES_FILE, TITLES_FILE};

use crate::error::{Error, Result};
use crate::textprep::tokenize_surfaces;

/// Load arbitrary plain text as one generic conversation; every non-blank line is
/// an utterance of a single speaker.
pub fn load_plain_text(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let (text, replaced) = jsonl::decode_lossy(&bytes);
    let utterances: Vec<Utterance> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut u = Utterance::new(
                "text",
                tokenize_surfaces(l).into_iter().map(Token::raw).collect(),
            );
            u.text = Some(l.trim().to_string());
            u
        })
        .collect();
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "text".to_string());
    let conversations = if utterances.is_empty() {
        Vec::new()
    } else {
        vec![Conversation::new(id, CorpusKind::Generic, utterances)]
    };
    Ok(Corpus::new(
        CorpusKind::Generic,
        conversations,
        format!("text:{} replaced_chars={replaced}", path.display()),
    ))
}
