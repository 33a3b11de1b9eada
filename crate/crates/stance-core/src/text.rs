//! Tweet tokenization and preprocessing.
//!
//! The tokenizer is rule-based and total: every non-whitespace character of
//! the input ends up in exactly one token. Special entities are recognized
//! with the precedence URL > emoticon > hashtag > mention > word >
//! punctuation. Case folding follows Turkish orthography, where dotted and
//! dotless `i` are distinct letters.

use alloc::string::String;
use alloc::vec::Vec;

use alloc::collections::BTreeSet;

/// What kind of surface form a token is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Emoticon,
    Punct,
}

/// One token of a tweet, with half-open character offsets into the original
/// text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Case-folded surface, see [`fold_case`].
    pub folded: String,
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

/// Positive/negative emoticon dictionary.
///
/// The two polarity sets must be disjoint.
#[derive(Debug, Clone, Default)]
pub struct EmoticonLexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

/// Case-folded stopword set.
#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    entries: BTreeSet<String>,
}

/// Boolean per-tweet features derived from token kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpecialFlags {
    pub has_hashtag: bool,
    pub has_link: bool,
    pub has_pos_emoticon: bool,
    pub has_neg_emoticon: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("emoticon {0:?} appears in both polarity sets")]
    EmoticonPolarityClash(String),
}

impl EmoticonLexicon {
    /// Builds a lexicon, rejecting tokens listed with both polarities.
    pub fn new<P, N>(positive: P, negative: N) -> Result<Self, TextError>
    where
        P: IntoIterator<Item = String>,
        N: IntoIterator<Item = String>,
    {
        let positive: BTreeSet<String> = positive.into_iter().collect();
        let negative: BTreeSet<String> = negative.into_iter().collect();
        if let Some(clash) = positive.intersection(&negative).next() {
            return Err(TextError::EmoticonPolarityClash(clash.clone()));
        }
        Ok(Self { positive, negative })
    }

    pub fn is_positive(&self, surface: &str) -> bool {
        self.positive.contains(surface)
    }

    pub fn is_negative(&self, surface: &str) -> bool {
        self.negative.contains(surface)
    }

    pub fn positive(&self) -> impl Iterator<Item = &str> {
        self.positive.iter().map(String::as_str)
    }

    pub fn negative(&self) -> impl Iterator<Item = &str> {
        self.negative.iter().map(String::as_str)
    }

    fn all(&self) -> impl Iterator<Item = &str> {
        self.positive().chain(self.negative())
    }
}

impl StopwordList {
    /// Builds a stopword set; entries are case-folded on the way in.
    pub fn new<I: IntoIterator<Item = String>>(entries: I) -> Self {
        Self {
            entries: entries.into_iter().map(|e| fold_case(&e)).collect(),
        }
    }

    pub fn contains(&self, folded: &str) -> bool {
        self.entries.contains(folded)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Turkish-aware lowercasing: `I` folds to `ı` and `İ` to `i`; everything
/// else takes the standard lowercase mapping.
pub fn fold_case(surface: &str) -> String {
    let mut out = String::with_capacity(surface.len());
    for c in surface.chars() {
        match c {
            'I' => out.push('ı'),
            'İ' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];

pub(crate) fn is_apostrophe(c: char) -> bool {
    APOSTROPHES.contains(&c)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Rule-based tweet tokenizer.
///
/// Emoticons come from a lexicon, so the tokenizer is built from one; the
/// longest lexicon entry matching at a position wins.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    /// Emoticon surfaces as char sequences, longest first.
    emoticons: Vec<Vec<char>>,
}

impl Tokenizer {
    pub fn new(lexicon: &EmoticonLexicon) -> Self {
        let mut emoticons: Vec<Vec<char>> =
            lexicon.all().map(|e| e.chars().collect()).collect();
        emoticons.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Self { emoticons }
    }

    /// Splits `text` into tokens covering every non-whitespace character.
    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let (kind, end) = self.next_token(&chars, i);
            let surface: String = chars[i..end].iter().collect();
            let folded = fold_case(&surface);
            tokens.push(Token {
                surface,
                folded,
                kind,
                start: i,
                end,
            });
            i = end;
        }
        tokens
    }

    fn next_token(&self, chars: &[char], start: usize) -> (TokenKind, usize) {
        if let Some(end) = url_end(chars, start) {
            return (TokenKind::Url, end);
        }
        if let Some(end) = self.emoticon_end(chars, start) {
            return (TokenKind::Emoticon, end);
        }
        if chars[start] == '#' && start + 1 < chars.len() && is_word_char(chars[start + 1]) {
            return (TokenKind::Hashtag, word_end(chars, start + 1));
        }
        if chars[start] == '@' && start + 1 < chars.len() && is_word_char(chars[start + 1]) {
            return (TokenKind::Mention, word_end(chars, start + 1));
        }
        if is_word_char(chars[start]) {
            return (TokenKind::Word, word_end(chars, start));
        }
        (TokenKind::Punct, start + 1)
    }

    fn emoticon_end(&self, chars: &[char], start: usize) -> Option<usize> {
        self.emoticons
            .iter()
            .find(|emo| chars[start..].starts_with(emo))
            .map(|emo| start + emo.len())
    }
}

/// Consumes word characters, allowing apostrophes embedded between them
/// ("Galatasaray'ı" stays one token).
fn word_end(chars: &[char], start: usize) -> usize {
    let mut i = start;
    while i < chars.len() {
        if is_word_char(chars[i]) {
            i += 1;
        } else if is_apostrophe(chars[i]) && i + 1 < chars.len() && is_word_char(chars[i + 1]) {
            i += 2;
        } else {
            break;
        }
    }
    i
}

fn url_end(chars: &[char], start: usize) -> Option<usize> {
    const PREFIXES: [&str; 3] = ["http://", "https://", "www."];
    let matches_prefix = PREFIXES.iter().any(|prefix| {
        prefix
            .chars()
            .enumerate()
            .all(|(offset, p)| {
                chars
                    .get(start + offset)
                    .is_some_and(|&c| c.to_ascii_lowercase() == p)
            })
    });
    if !matches_prefix {
        return None;
    }
    let mut end = start;
    while end < chars.len() && !chars[end].is_whitespace() {
        end += 1;
    }
    Some(end)
}

/// Drops `Word` tokens whose folded form is a stopword. Other token kinds
/// always pass through.
pub fn remove_stopwords(tokens: Vec<Token>, stops: &StopwordList) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| t.kind != TokenKind::Word || !stops.contains(&t.folded))
        .collect()
}

/// Scans tokens for hashtags, links, and lexicon emoticons.
pub fn detect_flags(tokens: &[Token], lexicon: &EmoticonLexicon) -> SpecialFlags {
    let mut flags = SpecialFlags::default();
    for token in tokens {
        match token.kind {
            TokenKind::Hashtag => flags.has_hashtag = true,
            TokenKind::Url => flags.has_link = true,
            TokenKind::Emoticon => {
                if lexicon.is_positive(&token.surface) {
                    flags.has_pos_emoticon = true;
                }
                if lexicon.is_negative(&token.surface) {
                    flags.has_neg_emoticon = true;
                }
            }
            _ => {}
        }
    }
    flags
}
