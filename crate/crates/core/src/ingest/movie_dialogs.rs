//! Reader for the legacy Cornell Movie-Dialogs release: four `+++$+++`-delimited
//! metadata files describing titles, characters, conversations and lines.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use regex::Regex;

use super::jsonl::decode_lossy;
use super::model::{
    Conversation, Corpus, CorpusKind, Meta, MetaValue, Token, Utterance, GENRES_KEY, MOVIE_ID_KEY,
    NULL_UTTERANCES_KEY,
};
use crate::error::{Error, Result};
use crate::textprep::tokenize_surfaces;

pub const TITLES_FILE: &str = "movie_titles_metadata.txt";
pub const CHARACTERS_FILE: &str = "movie_characters_metadata.txt";
pub const CONVERSATIONS_FILE: &str = "movie_conversations.txt";
pub const LINES_FILE: &str = "movie_lines.txt";

const SEP: &str = "+++$+++";

struct Title {
    name: String,
    year: String,
    genres: Vec<String>,
}

struct Line {
    speaker: String,
    text: String,
}

fn read_table(dir: &Path, name: &str) -> Result<(PathBuf, String, usize)> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(Error::MissingFile(path));
    }
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let (text, replaced) = decode_lossy(&bytes);
    Ok((path, text, replaced))
}

fn split_fields<'a>(path: &Path, lineno: usize, line: &'a str, min: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split(SEP).map(str::trim).collect();
    if fields.len() < min {
        return Err(Error::Malformed {
            file: path.to_path_buf(),
            line: lineno,
            message: format!("expected {min} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

fn nonblank_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Load an unfiltered `movies_individual` corpus from the legacy release directory.
///
/// Tokens carry the placeholder tag X and the raw line text is kept on each
/// utterance. Line ids that are absent from the lines file, or whose text is empty,
/// are counted in the conversation's `null_utterances` meta field and skipped.
pub fn load_movie_dialogs(dir: impl AsRef<Path>) -> Result<Corpus> {
    let dir = dir.as_ref();
    let list_item = Regex::new(r"'([^']*)'").expect("static regex");

    // every file must be present before any parsing starts
    let (titles_path, titles_text, r1) = read_table(dir, TITLES_FILE)?;
    let (chars_path, chars_text, r2) = read_table(dir, CHARACTERS_FILE)?;
    let (convs_path, convs_text, r3) = read_table(dir, CONVERSATIONS_FILE)?;
    let (lines_path, lines_text, r4) = read_table(dir, LINES_FILE)?;

    let mut titles: HashMap<&str, Title> = HashMap::new();
    for (n, line) in nonblank_lines(&titles_text) {
        let f = split_fields(&titles_path, n, line, 6)?;
        let genres = list_item
            .captures_iter(f[5])
            .map(|c| c[1].to_string())
            .collect();
        titles.insert(
            f[0],
            Title {
                name: f[1].to_string(),
                year: f[2].to_string(),
                genres,
            },
        );
    }

    let mut n_characters = 0usize;
    for (n, line) in nonblank_lines(&chars_text) {
        split_fields(&chars_path, n, line, 4)?;
        n_characters += 1;
    }

    let mut lines: HashMap<&str, Line> = HashMap::new();
    for (n, line) in nonblank_lines(&lines_text) {
        let f = split_fields(&lines_path, n, line, 4)?;
        let text = f.get(4).copied().unwrap_or("");
        lines.insert(
            f[0],
            Line {
                speaker: f[1].to_string(),
                text: text.to_string(),
            },
        );
    }

    let mut conversations = Vec::new();
    for (n, line) in nonblank_lines(&convs_text) {
        let f = split_fields(&convs_path, n, line, 4)?;
        let movie = f[2];
        let mut utterances = Vec::new();
        let mut nulls = 0usize;
        for cap in list_item.captures_iter(f[3]) {
            match lines.get(&cap[1]) {
                Some(l) if !l.text.trim().is_empty() => {
                    let tokens = tokenize_surfaces(&l.text).into_iter().map(Token::raw).collect();
                    let mut u = Utterance::new(l.speaker.clone(), tokens);
                    u.text = Some(l.text.clone());
                    utterances.push(u);
                }
                _ => nulls += 1,
            }
        }
        let mut meta = Meta::new();
        meta.insert(MOVIE_ID_KEY.into(), MetaValue::Text(movie.to_string()));
        meta.insert(
            "characters".into(),
            MetaValue::List(vec![f[0].to_string(), f[1].to_string()]),
        );
        if let Some(t) = titles.get(movie) {
            meta.insert("title".into(), MetaValue::Text(t.name.clone()));
            meta.insert("year".into(), MetaValue::Text(t.year.clone()));
            meta.insert(GENRES_KEY.into(), MetaValue::List(t.genres.clone()));
        }
        if nulls > 0 {
            meta.insert(NULL_UTTERANCES_KEY.into(), MetaValue::Text(nulls.to_string()));
        }
        let mut conv = Conversation::new(
            format!("c{}", conversations.len()),
            CorpusKind::MoviesIndividual,
            utterances,
        );
        conv.meta = meta;
        conversations.push(conv);
    }

    Ok(Corpus::new(
        CorpusKind::MoviesIndividual,
        conversations,
        format!(
            "movie_dialogs:{} movies={} characters={n_characters} replaced_chars={}",
            dir.display(),
            titles.len(),
            r1 + r2 + r3 + r4
        ),
    ))
}
