//! Loaders for the lexical resource files: stopwords, the emoticon lexicon,
//! the gazetteer, and gold entity annotations.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use stance_core::corpus::Dataset;
use stance_core::ner::{EntitySpan, EntityType, NerError};
use stance_core::text::{EmoticonLexicon, StopwordList, TextError};

#[derive(Debug, thiserror::Error)]
pub enum ResourceError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Ner(#[from] NerError),
}

fn line_error(line: usize, message: impl Into<String>) -> ResourceError {
    ResourceError::Line {
        line,
        message: message.into(),
    }
}

/// Lines that carry no entry in any resource file: blank or `#` comment.
fn is_skippable(line: &str) -> bool {
    let trimmed = line.trim();
    trimmed.is_empty() || trimmed.starts_with('#')
}

/// One stopword per line.
pub fn parse_stopwords(content: &str) -> StopwordList {
    StopwordList::new(
        content
            .lines()
            .map(str::trim)
            .filter(|line| !is_skippable(line))
            .map(String::from),
    )
}

pub fn load_stopwords(path: &Path) -> Result<StopwordList, ResourceError> {
    Ok(parse_stopwords(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?))
}

/// The built-in emoticon lexicon, mirrored by `data/emoticons.tsv`: the
/// widely-used core set plus a few conventional variants. Editable by
/// pointing the CLI at a file instead.
pub fn default_emoticons() -> EmoticonLexicon {
    let positive = [":)", ":D", "<3", ":-)", "=)", ";)", ":P"];
    let negative = [":(", ":\\", ":-(", ":'(", ":/"];
    EmoticonLexicon::new(
        positive.iter().map(|s| String::from(*s)),
        negative.iter().map(|s| String::from(*s)),
    )
    .expect("built-in lexicon has no polarity clash")
}

/// Lines `POS<TAB>token` / `NEG<TAB>token`.
pub fn parse_emoticons(content: &str) -> Result<EmoticonLexicon, ResourceError> {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (index, raw) in content.lines().enumerate() {
        let line = index + 1;
        if is_skippable(raw) {
            continue;
        }
        let Some((tag, token)) = raw.split_once('\t') else {
            return Err(line_error(line, "expected TAG<TAB>token"));
        };
        if token.is_empty() {
            return Err(line_error(line, "empty emoticon"));
        }
        match tag {
            "POS" => positive.push(String::from(token)),
            "NEG" => negative.push(String::from(token)),
            other => return Err(line_error(line, format!("unknown tag {other:?}"))),
        }
    }
    Ok(EmoticonLexicon::new(positive, negative)?)
}

pub fn load_emoticons(path: &Path) -> Result<EmoticonLexicon, ResourceError> {
    parse_emoticons(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?)
}

/// Lines `TYPE<TAB>name` with TYPE in {PER, LOC, ORG}; names may hold spaces.
pub fn parse_gazetteer(content: &str) -> Result<Gazetteer, ResourceError> {
    let mut entries = Vec::new();
    for (index, raw) in content.lines().enumerate() {
        let line = index + 1;
        if is_skippable(raw) {
            continue;
        }
        let Some((tag, name)) = raw.split_once('\t') else {
            return Err(line_error(line, "expected TYPE<TAB>name"));
        };
        let etype = EntityType::parse_token(tag)
            .ok_or_else(|| line_error(line, format!("unknown entity type {tag:?}")))?;
        if name.trim().is_empty() {
            return Err(line_error(line, "empty name"));
        }
        entries.push((String::from(name), etype));
    }
    Ok(Gazetteer::new(entries)?)
}

pub use stance_core::ner::Gazetteer;

pub fn load_gazetteer(path: &Path) -> Result<Gazetteer, ResourceError> {
    parse_gazetteer(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?)
}

/// Lines `tweet_id<TAB>start<TAB>end<TAB>TYPE` with character offsets into
/// the tweet's text. Ids must exist in the data set; spans must be in bounds
/// and non-overlapping per tweet. Surfaces are resolved from the text.
pub fn parse_annotations(
    content: &str,
    ds: &Dataset,
) -> Result<BTreeMap<String, Vec<EntitySpan>>, ResourceError> {
    let texts: BTreeMap<&str, Vec<char>> = ds
        .tweets()
        .iter()
        .map(|t| (t.id.as_str(), t.text.chars().collect()))
        .collect();
    let mut map: BTreeMap<String, Vec<EntitySpan>> = BTreeMap::new();
    for (index, raw) in content.lines().enumerate() {
        let line = index + 1;
        if is_skippable(raw) {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let [id, start, end, tag] = fields.as_slice() else {
            return Err(line_error(line, "expected tweet_id<TAB>start<TAB>end<TAB>TYPE"));
        };
        let chars = texts
            .get(id)
            .ok_or_else(|| line_error(line, format!("unknown tweet id {id:?}")))?;
        let parse_offset = |field: &str| {
            field
                .parse::<usize>()
                .map_err(|_| line_error(line, format!("bad offset {field:?}")))
        };
        let (start, end) = (parse_offset(start)?, parse_offset(end)?);
        if start >= end || end > chars.len() {
            return Err(line_error(
                line,
                format!(
                    "span [{start}, {end}) out of bounds for {} characters",
                    chars.len()
                ),
            ));
        }
        let etype = EntityType::parse_token(tag)
            .ok_or_else(|| line_error(line, format!("unknown entity type {tag:?}")))?;
        map.entry(String::from(*id)).or_default().push(EntitySpan {
            start,
            end,
            etype,
            surface: chars[start..end].iter().collect(),
        });
    }
    for (id, spans) in &mut map {
        spans.sort_by_key(|s| (s.start, s.end));
        for pair in spans.windows(2) {
            if pair[1].start < pair[0].end {
                return Err(line_error(
                    0,
                    format!(
                        "tweet {id:?}: spans [{}, {}) and [{}, {}) overlap",
                        pair[0].start, pair[0].end, pair[1].start, pair[1].end
                    ),
                ));
            }
        }
    }
    Ok(map)
}

pub fn load_annotations(
    path: &Path,
    ds: &Dataset,
) -> Result<BTreeMap<String, Vec<EntitySpan>>, ResourceError> {
    parse_annotations(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?, ds)
}
