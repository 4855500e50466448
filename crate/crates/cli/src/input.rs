//! Input detection and corpus assembly.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{bail, Context, Result};
use convscale::ingest::{
    filter_conversations, group_by_movie, load_movie_dialogs, load_plain_text, load_tagged_jsonl_with,
    Corpus, CorpusKind, LINES_FILE,
};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    MovieDialogs,
    Jsonl,
    PlainText,
}

pub fn detect(path: &Path) -> Result<InputFormat> {
    if path.is_dir() {
        if path.join(LINES_FILE).is_file() {
            return Ok(InputFormat::MovieDialogs);
        }
        bail!("no conversations found in {}: directory has no {LINES_FILE}", path.display());
    }
    if !path.exists() {
        bail!("input {} does not exist", path.display());
    }
    let is_jsonl = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("jsonl"))
        .unwrap_or(false);
    Ok(if is_jsonl { InputFormat::Jsonl } else { InputFormat::PlainText })
}

/// Kind declared by an input without loading all of it.
pub fn sniff_kind(path: &Path) -> Result<CorpusKind> {
    Ok(match detect(path)? {
        InputFormat::MovieDialogs => CorpusKind::MoviesIndividual,
        InputFormat::PlainText => CorpusKind::Generic,
        InputFormat::Jsonl => {
            let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let mut kind = CorpusKind::Generic;
            for line in BufReader::new(f).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: serde_json::Value = serde_json::from_str(&line)
                    .with_context(|| format!("{}: line 1 is not JSON", path.display()))?;
                if let Some(k) = value.get("kind").and_then(|k| k.as_str()) {
                    kind = k.parse()?;
                }
                break;
            }
            kind
        }
    })
}

fn load_one(path: &Path, config: &RunConfig) -> Result<Corpus> {
    let corpus = match detect(path)? {
        InputFormat::MovieDialogs => load_movie_dialogs(path)?,
        InputFormat::Jsonl => load_tagged_jsonl_with(path, config.form_policy)?,
        InputFormat::PlainText => load_plain_text(path)?,
    };
    Ok(corpus)
}

/// Load every input, merge, filter, and group movie conversations when a
/// grouped corpus is requested from per-scene data.
pub fn load_corpus(config: &RunConfig) -> Result<Corpus> {
    if config.inputs.is_empty() {
        bail!("no input given (use --input or `inputs` in the config file)");
    }
    let mut merged: Option<Corpus> = None;
    for path in &config.inputs {
        let corpus = load_one(path, config)?;
        merged = Some(match merged {
            None => corpus,
            Some(mut acc) => {
                acc.conversations.extend(corpus.conversations);
                acc.provenance = format!("{}; {}", acc.provenance, corpus.provenance);
                acc
            }
        });
    }
    let loaded = merged.expect("at least one input");
    let target = config.kind();
    let filtered = filter_conversations(&loaded, &config.effective_filter());
    let mut corpus = if target == CorpusKind::MoviesGrouped && loaded.kind == CorpusKind::MoviesIndividual {
        group_by_movie(&filtered)?
    } else {
        filtered
    };
    corpus.kind = target;
    for conv in &mut corpus.conversations {
        conv.kind = target;
    }
    if corpus.conversations.is_empty() {
        bail!("no conversations found in {}", display_inputs(config));
    }
    Ok(corpus)
}

pub fn display_inputs(config: &RunConfig) -> String {
    config
        .inputs
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
