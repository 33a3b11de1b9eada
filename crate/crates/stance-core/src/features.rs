//! Sparse feature extraction for stance classification.
//!
//! Six feature families: unigrams, bigrams, three one-bit tweet flags
//! (hashtag, link, positive/negative emoticon), and named-entity surfaces.
//! Textual families get dense lexicographic indices from the training split
//! only; flag families occupy fixed slots after them. All values are binary
//! presence.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{StanceLabel, Tweet};
use crate::ner::EntitySpan;
use crate::text::{
    detect_flags, fold_case, remove_stopwords, EmoticonLexicon, SpecialFlags, StopwordList,
    TokenKind, Tokenizer,
};

/// Sorted sparse vector; indices strictly increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeatureError {
    #[error("duplicate feature index {0}")]
    DuplicateIndex(usize),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("no feature family enabled")]
    NoFamilyEnabled,
    #[error("min_term_freq must be at least 1")]
    ZeroMinTermFreq,
    #[error("span [{start}, {end}) out of bounds for text of {len} characters")]
    SpanOutOfBounds {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("bad vocabulary dump: {0}")]
    BadDump(&'static str),
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts by index; duplicate indices are rejected.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Result<Self, FeatureError> {
        pairs.sort_unstable_by_key(|(i, _)| *i);
        for pair in pairs.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(FeatureError::DuplicateIndex(pair[0].0));
            }
        }
        Ok(Self { entries: pairs })
    }

    /// Binary vector over the given indices; duplicates collapse.
    pub fn binary_from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Self {
            entries: set.into_iter().map(|i| (i, 1.0)).collect(),
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    /// Sparse-sparse dot product by merge walk.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut sum = 0.0;
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((ia, va)), Some((ib, vb))) = (a.peek(), b.peek()) {
            match ia.cmp(ib) {
                core::cmp::Ordering::Less => {
                    a.next();
                }
                core::cmp::Ordering::Greater => {
                    b.next();
                }
                core::cmp::Ordering::Equal => {
                    sum += va * vb;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }

    /// Dot product against a dense vector; indices beyond its length
    /// contribute nothing.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .take_while(|(i, _)| *i < dense.len())
            .map(|(i, v)| v * dense[*i])
            .sum()
    }

    /// out += factor * self. All indices must be within `out`.
    pub fn scatter_add(&self, factor: f64, out: &mut [f64]) {
        for (i, v) in &self.entries {
            out[*i] += factor * v;
        }
    }
}

/// Which named-entity spans feed the NE feature family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeSource {
    /// Hand-annotated spans.
    #[default]
    Gold,
    /// Spans produced by the recognizer.
    Auto,
}

/// Feature-family switches. At least one family must be on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureConfig {
    pub use_unigrams: bool,
    pub use_bigrams: bool,
    pub use_hashtag_flag: bool,
    pub use_link_flag: bool,
    pub use_pos_emoticon_flag: bool,
    pub use_neg_emoticon_flag: bool,
    pub use_named_entities: bool,
    pub ne_source: NeSource,
    /// Textual terms below this total training frequency are dropped.
    pub min_term_freq: usize,
}

impl Default for FeatureConfig {
    /// The unigram baseline.
    fn default() -> Self {
        Self {
            use_unigrams: true,
            use_bigrams: false,
            use_hashtag_flag: false,
            use_link_flag: false,
            use_pos_emoticon_flag: false,
            use_neg_emoticon_flag: false,
            use_named_entities: false,
            ne_source: NeSource::Gold,
            min_term_freq: 1,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.min_term_freq == 0 {
            return Err(FeatureError::ZeroMinTermFreq);
        }
        let any = self.use_unigrams
            || self.use_bigrams
            || self.use_hashtag_flag
            || self.use_link_flag
            || self.use_pos_emoticon_flag
            || self.use_neg_emoticon_flag
            || self.use_named_entities;
        if !any {
            return Err(FeatureError::NoFamilyEnabled);
        }
        Ok(())
    }
}

/// A tweet reduced to classifier inputs: the n-gram token stream
/// (post-stopword words and hashtags), the tweet-level flags, and folded
/// named-entity surfaces supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedTweet {
    pub id: String,
    pub label: StanceLabel,
    pub ngram_tokens: Vec<String>,
    pub flags: SpecialFlags,
    pub ne_terms: Vec<String>,
}

/// Runs tokenization, flag detection, and stopword removal on one tweet.
/// `fold` selects folded surfaces for the n-gram stream (the default
/// pipeline) or raw ones. Entity terms start empty; attach them with
/// [`ne_terms`] output when the NE family is in play.
pub fn prepare(
    tweet: &Tweet,
    tokenizer: &Tokenizer,
    stops: &StopwordList,
    lexicon: &EmoticonLexicon,
    fold: bool,
) -> PreparedTweet {
    let tokens = tokenizer.tokenize(&tweet.text);
    let flags = detect_flags(&tokens, lexicon);
    let kept = remove_stopwords(tokens, stops);
    let ngram_tokens = kept
        .into_iter()
        .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Hashtag))
        .map(|t| if fold { t.folded } else { t.surface })
        .collect();
    PreparedTweet {
        id: tweet.id.clone(),
        label: tweet.label_a,
        ngram_tokens,
        flags,
        ne_terms: Vec::new(),
    }
}

/// Folded surfaces of the given spans, deduplicated and sorted. Types are
/// discarded; boundaries already exclude suffixes.
pub fn ne_terms(tweet: &Tweet, spans: &[EntitySpan]) -> Result<Vec<String>, FeatureError> {
    let chars: Vec<char> = tweet.text.chars().collect();
    let mut terms = BTreeSet::new();
    for span in spans {
        if span.start >= span.end || span.end > chars.len() {
            return Err(FeatureError::SpanOutOfBounds {
                start: span.start,
                end: span.end,
                len: chars.len(),
            });
        }
        let surface: String = chars[span.start..span.end].iter().collect();
        terms.insert(fold_case(&surface));
    }
    Ok(terms.into_iter().collect())
}

/// Frozen term-to-index map plus the flag slot layout, built from training
/// data under one config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    config: FeatureConfig,
    unigrams: BTreeMap<String, usize>,
    bigrams: BTreeMap<String, usize>,
    entities: BTreeMap<String, usize>,
    hashtag_slot: Option<usize>,
    link_slot: Option<usize>,
    pos_emoticon_slot: Option<usize>,
    neg_emoticon_slot: Option<usize>,
    dim: usize,
}

impl Vocabulary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn unigram_count(&self) -> usize {
        self.unigrams.len()
    }

    pub fn bigram_count(&self) -> usize {
        self.bigrams.len()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    /// All (family, term, index) rows in index order, flags included.
    pub fn dump(&self) -> Vec<(&'static str, String, usize)> {
        let mut rows: Vec<(&'static str, String, usize)> = Vec::with_capacity(self.dim);
        for (term, index) in &self.unigrams {
            rows.push(("unigram", term.clone(), *index));
        }
        for (term, index) in &self.bigrams {
            rows.push(("bigram", term.clone(), *index));
        }
        for (term, index) in &self.entities {
            rows.push(("entity", term.clone(), *index));
        }
        let flags = [
            ("hashtag", self.hashtag_slot),
            ("link", self.link_slot),
            ("emo-pos", self.pos_emoticon_slot),
            ("emo-neg", self.neg_emoticon_slot),
        ];
        for (name, slot) in flags {
            if let Some(index) = slot {
                rows.push(("flag", String::from(name), index));
            }
        }
        rows.sort_by_key(|(_, _, index)| *index);
        rows
    }

    /// Rebuilds a vocabulary from [`Vocabulary::dump`] rows and the config it
    /// was built under. Indices must be dense and unique; flag rows must name
    /// the known flags and appear at most once each.
    pub fn from_dump<I>(cfg: &FeatureConfig, rows: I) -> Result<Vocabulary, FeatureError>
    where
        I: IntoIterator<Item = (String, String, usize)>,
    {
        cfg.validate()?;
        let mut vocab = Vocabulary {
            config: *cfg,
            unigrams: BTreeMap::new(),
            bigrams: BTreeMap::new(),
            entities: BTreeMap::new(),
            hashtag_slot: None,
            link_slot: None,
            pos_emoticon_slot: None,
            neg_emoticon_slot: None,
            dim: 0,
        };
        let mut seen = BTreeSet::new();
        for (family, term, index) in rows {
            if !seen.insert(index) {
                return Err(FeatureError::BadDump("duplicate index"));
            }
            let replaced = match family.as_str() {
                "unigram" => vocab.unigrams.insert(term, index),
                "bigram" => vocab.bigrams.insert(term, index),
                "entity" => vocab.entities.insert(term, index),
                "flag" => {
                    let slot = match term.as_str() {
                        "hashtag" => &mut vocab.hashtag_slot,
                        "link" => &mut vocab.link_slot,
                        "emo-pos" => &mut vocab.pos_emoticon_slot,
                        "emo-neg" => &mut vocab.neg_emoticon_slot,
                        _ => return Err(FeatureError::BadDump("unknown flag name")),
                    };
                    slot.replace(index)
                }
                _ => return Err(FeatureError::BadDump("unknown family")),
            };
            if replaced.is_some() {
                return Err(FeatureError::BadDump("duplicate term"));
            }
        }
        vocab.dim = seen.len();
        if seen.last() != vocab.dim.checked_sub(1).as_ref() {
            return Err(FeatureError::BadDump("indices are not dense from zero"));
        }
        Ok(vocab)
    }
}

fn bigram_key(a: &str, b: &str) -> String {
    let mut key = String::with_capacity(a.len() + b.len() + 1);
    key.push_str(a);
    key.push(' ');
    key.push_str(b);
    key
}

/// Collects terms meeting the frequency threshold into lexicographic order.
fn thresholded(freq: BTreeMap<String, usize>, min_freq: usize, next: &mut usize) -> BTreeMap<String, usize> {
    let mut map = BTreeMap::new();
    for (term, count) in freq {
        if count >= min_freq {
            map.insert(term, *next);
            *next += 1;
        }
    }
    map
}

/// Builds the vocabulary for the enabled families from training tweets only.
pub fn build_vocabulary(
    train: &[PreparedTweet],
    cfg: &FeatureConfig,
) -> Result<Vocabulary, FeatureError> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(FeatureError::EmptyTrainingSet);
    }

    let mut next = 0usize;
    let mut unigram_freq: BTreeMap<String, usize> = BTreeMap::new();
    let mut bigram_freq: BTreeMap<String, usize> = BTreeMap::new();
    let mut entity_freq: BTreeMap<String, usize> = BTreeMap::new();
    for tweet in train {
        if cfg.use_unigrams {
            for token in &tweet.ngram_tokens {
                *unigram_freq.entry(token.clone()).or_insert(0) += 1;
            }
        }
        if cfg.use_bigrams {
            for pair in tweet.ngram_tokens.windows(2) {
                *bigram_freq.entry(bigram_key(&pair[0], &pair[1])).or_insert(0) += 1;
            }
        }
        if cfg.use_named_entities {
            for term in &tweet.ne_terms {
                *entity_freq.entry(term.clone()).or_insert(0) += 1;
            }
        }
    }

    let unigrams = thresholded(unigram_freq, cfg.min_term_freq, &mut next);
    let bigrams = thresholded(bigram_freq, cfg.min_term_freq, &mut next);
    let entities = thresholded(entity_freq, cfg.min_term_freq, &mut next);

    let mut slot = |enabled: bool| {
        if enabled {
            let index = next;
            next += 1;
            Some(index)
        } else {
            None
        }
    };
    let hashtag_slot = slot(cfg.use_hashtag_flag);
    let link_slot = slot(cfg.use_link_flag);
    let pos_emoticon_slot = slot(cfg.use_pos_emoticon_flag);
    let neg_emoticon_slot = slot(cfg.use_neg_emoticon_flag);

    Ok(Vocabulary {
        config: *cfg,
        unigrams,
        bigrams,
        entities,
        hashtag_slot,
        link_slot,
        pos_emoticon_slot,
        neg_emoticon_slot,
        dim: next,
    })
}

/// Binary presence vector for one tweet. Families act only when enabled both
/// in `cfg` and in the vocabulary's build config; out-of-vocabulary terms
/// are ignored.
pub fn vectorize(tweet: &PreparedTweet, vocab: &Vocabulary, cfg: &FeatureConfig) -> SparseVector {
    let mut indices = BTreeSet::new();
    if cfg.use_unigrams {
        for token in &tweet.ngram_tokens {
            if let Some(&index) = vocab.unigrams.get(token) {
                indices.insert(index);
            }
        }
    }
    if cfg.use_bigrams {
        for pair in tweet.ngram_tokens.windows(2) {
            if let Some(&index) = vocab.bigrams.get(&bigram_key(&pair[0], &pair[1])) {
                indices.insert(index);
            }
        }
    }
    if cfg.use_named_entities {
        for term in &tweet.ne_terms {
            if let Some(&index) = vocab.entities.get(term) {
                indices.insert(index);
            }
        }
    }
    let flag_slots = [
        (cfg.use_hashtag_flag, tweet.flags.has_hashtag, vocab.hashtag_slot),
        (cfg.use_link_flag, tweet.flags.has_link, vocab.link_slot),
        (
            cfg.use_pos_emoticon_flag,
            tweet.flags.has_pos_emoticon,
            vocab.pos_emoticon_slot,
        ),
        (
            cfg.use_neg_emoticon_flag,
            tweet.flags.has_neg_emoticon,
            vocab.neg_emoticon_slot,
        ),
    ];
    for (enabled, present, slot) in flag_slots {
        if enabled && present {
            if let Some(index) = slot {
                indices.insert(index);
            }
        }
    }
    SparseVector::binary_from_indices(indices)
}
