//! Gazetteer-driven named entity recognition for tweet text.
//!
//! Tweets drop diacritics and capitalization unreliably, so matching runs on
//! up to four variants of each token: the raw form, a diacritics-stripped
//! form that keeps case, a case-folded form that keeps diacritics, and the
//! fully folded form. The two relaxations are independent switches; the raw
//! comparison is always on. Apostrophe-attached suffixes never count as part
//! of a name ("Galatasaray'ı" matches "Galatasaray"), and an optional rule
//! also accepts a bare attached suffix when a whole gazetteer key is a
//! prefix of the token ("Galatasarayı").
//!
//! Candidates are resolved left to right, longest match first: more tokens
//! win, then longer character coverage of the final token, then the earlier
//! gazetteer entry. Emitted spans never overlap.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Dataset, StanceLabel, TargetId};
use crate::text::{fold_case, is_apostrophe, EmoticonLexicon, Token, TokenKind, Tokenizer};

/// Entity category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityType {
    Person,
    Location,
    Organization,
}

impl EntityType {
    pub fn as_token(self) -> &'static str {
        match self {
            EntityType::Person => "PER",
            EntityType::Location => "LOC",
            EntityType::Organization => "ORG",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            EntityType::Person => "Person",
            EntityType::Location => "Location",
            EntityType::Organization => "Organization",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        match token {
            "PER" => Some(EntityType::Person),
            "LOC" => Some(EntityType::Location),
            "ORG" => Some(EntityType::Organization),
            _ => None,
        }
    }

    pub const ALL: [EntityType; 3] = [
        EntityType::Person,
        EntityType::Location,
        EntityType::Organization,
    ];
}

/// A typed entity occurrence, [start, end) in character offsets; `surface`
/// is the text slice those offsets cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub etype: EntityType,
    pub surface: String,
}

/// Matching switches for [`recognize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecognizerOptions {
    /// Also compare case-folded forms.
    pub relax_capitalization: bool,
    /// Also compare diacritics-stripped forms.
    pub fold_diacritics: bool,
    /// Match a whole gazetteer key as a prefix of the final token, treating
    /// the remainder as an attached suffix.
    pub attached_suffixes: bool,
}

/// Exact-match evaluation counts with derived metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NerScore {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl NerScore {
    /// Derives precision/recall/F1, each 0 when its denominator is 0.
    pub fn from_counts(true_pos: usize, false_pos: usize, false_neg: usize) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(true_pos, true_pos + false_pos);
        let recall = ratio(true_pos, true_pos + false_neg);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            true_pos,
            false_pos,
            false_neg,
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NerError {
    #[error("gazetteer entry {index} has an empty name")]
    EmptyName { index: usize },
    #[error("overlapping spans in the {list} list")]
    OverlappingSpans { list: &'static str },
}

/// Case fold, then strip the six diacritic letters to their ASCII
/// counterparts.
pub fn diacritics_fold(text: &str) -> String {
    strip_diacritics(&fold_case(text))
}

/// Diacritics stripping alone; keeps case so capitalization can stay a
/// separate constraint.
fn strip_diacritics(text: &str) -> String {
    text.chars()
        .map(|c| match c {
            'ç' => 'c',
            'ğ' => 'g',
            'ı' => 'i',
            'ö' => 'o',
            'ş' => 's',
            'ü' => 'u',
            'Ç' => 'C',
            'Ğ' => 'G',
            'İ' => 'I',
            'Ö' => 'O',
            'Ş' => 'S',
            'Ü' => 'U',
            other => other,
        })
        .collect()
}

/// The four comparison forms of one token, as char sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TokenForms {
    raw: Vec<char>,
    dia: Vec<char>,
    low: Vec<char>,
    full: Vec<char>,
}

impl TokenForms {
    fn of(text: &str) -> Self {
        Self {
            raw: text.chars().collect(),
            dia: strip_diacritics(text).chars().collect(),
            low: fold_case(text).chars().collect(),
            full: diacritics_fold(text).chars().collect(),
        }
    }

    /// Whole-token equality under the enabled variants.
    fn matches(&self, key: &TokenForms, opts: RecognizerOptions) -> bool {
        if self.raw == key.raw {
            return true;
        }
        if opts.fold_diacritics && self.dia == key.dia {
            return true;
        }
        if opts.relax_capitalization && self.low == key.low {
            return true;
        }
        opts.relax_capitalization && opts.fold_diacritics && self.full == key.full
    }

    /// Strict-prefix match under the enabled variants, for the attached
    /// suffix rule. All folds map one char to one char, so the matched
    /// length equals the key length in original characters.
    fn key_is_prefix(&self, key: &TokenForms, opts: RecognizerOptions) -> bool {
        let strict = key.raw.len() < self.raw.len();
        if !strict {
            return false;
        }
        if self.raw.starts_with(&key.raw) {
            return true;
        }
        if opts.fold_diacritics && self.dia.starts_with(&key.dia) {
            return true;
        }
        if opts.relax_capitalization && self.low.starts_with(&key.low) {
            return true;
        }
        opts.relax_capitalization && opts.fold_diacritics && self.full.starts_with(&key.full)
    }
}

#[derive(Debug, Clone)]
struct CompiledEntry {
    tokens: Vec<TokenForms>,
    etype: EntityType,
}

/// Compiled name list. Entry order is kept: it is the final tie-breaker
/// between equally long matches.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<CompiledEntry>,
}

impl Gazetteer {
    /// Compiles entries, splitting names on whitespace.
    pub fn new(entries: Vec<(String, EntityType)>) -> Result<Self, NerError> {
        let mut compiled = Vec::with_capacity(entries.len());
        for (index, (name, etype)) in entries.into_iter().enumerate() {
            let tokens: Vec<TokenForms> =
                name.split_whitespace().map(TokenForms::of).collect();
            if tokens.is_empty() {
                return Err(NerError::EmptyName { index });
            }
            compiled.push(CompiledEntry { tokens, etype });
        }
        Ok(Self { entries: compiled })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A word token's stem (the part before any apostrophe) with its forms.
struct WordStem {
    forms: TokenForms,
    full_forms: TokenForms,
    start: usize,
    stem_chars: usize,
}

/// Finds gazetteer names in `text`. See the module docs for the matching and
/// tie rules.
pub fn recognize(text: &str, gaz: &Gazetteer, opts: RecognizerOptions) -> Vec<EntitySpan> {
    if gaz.is_empty() {
        return Vec::new();
    }
    let tokenizer = Tokenizer::new(&EmoticonLexicon::default());
    let tokens = tokenizer.tokenize(text);
    let stems: Vec<Option<WordStem>> = tokens.iter().map(word_stem).collect();
    let chars: Vec<char> = text.chars().collect();

    let mut spans = Vec::new();
    let mut t = 0;
    while t < tokens.len() {
        match best_match_at(&stems, t, gaz, opts) {
            Some(found) => {
                let start = tokens[t].start;
                let last = stems[t + found.token_count - 1].as_ref().expect("matched token");
                let end = last.start + found.last_token_chars;
                spans.push(EntitySpan {
                    start,
                    end,
                    etype: gaz.entries[found.entry].etype,
                    surface: chars[start..end].iter().collect(),
                });
                t += found.token_count;
            }
            None => t += 1,
        }
    }
    spans
}

fn word_stem(token: &Token) -> Option<WordStem> {
    if token.kind != TokenKind::Word {
        return None;
    }
    let stem: String = token
        .surface
        .chars()
        .take_while(|c| !is_apostrophe(*c))
        .collect();
    let stem_chars = stem.chars().count();
    Some(WordStem {
        forms: TokenForms::of(&stem),
        full_forms: TokenForms::of(&token.surface),
        start: token.start,
        stem_chars,
    })
}

/// Length (in original chars) matched on the candidate's final token, or
/// None when `entry` does not match at `t`.
fn entry_match_at(
    stems: &[Option<WordStem>],
    t: usize,
    entry: &CompiledEntry,
    opts: RecognizerOptions,
) -> Option<usize> {
    let len = entry.tokens.len();
    if t + len > stems.len() {
        return None;
    }
    for (offset, key) in entry.tokens.iter().enumerate() {
        let stem = stems[t + offset].as_ref()?;
        let last = offset + 1 == len;
        if !last {
            // interior tokens must match whole, apostrophe suffix included
            if !stem.full_forms.matches(key, opts) {
                return None;
            }
            continue;
        }
        if stem.forms.matches(key, opts) {
            return Some(stem.stem_chars);
        }
        if opts.attached_suffixes && stem.forms.key_is_prefix(key, opts) {
            return Some(key.raw.len());
        }
        return None;
    }
    unreachable!("entries have at least one token")
}

struct FoundMatch {
    token_count: usize,
    last_token_chars: usize,
    entry: usize,
}

/// Best candidate starting at `t`: most tokens, then widest final token,
/// then the earliest gazetteer entry.
fn best_match_at(
    stems: &[Option<WordStem>],
    t: usize,
    gaz: &Gazetteer,
    opts: RecognizerOptions,
) -> Option<FoundMatch> {
    let mut best: Option<FoundMatch> = None;
    for (index, entry) in gaz.entries.iter().enumerate() {
        if let Some(matched) = entry_match_at(stems, t, entry, opts) {
            let better = best.as_ref().is_none_or(|b| {
                (entry.tokens.len(), matched) > (b.token_count, b.last_token_chars)
            });
            if better {
                best = Some(FoundMatch {
                    token_count: entry.tokens.len(),
                    last_token_chars: matched,
                    entry: index,
                });
            }
        }
    }
    best
}

/// Exact-match scoring: a prediction is correct only when (start, end, type)
/// all equal a gold span's.
pub fn score_exact(gold: &[EntitySpan], predicted: &[EntitySpan]) -> Result<NerScore, NerError> {
    check_no_overlap(gold, "gold")?;
    check_no_overlap(predicted, "predicted")?;
    let gold_keys: alloc::collections::BTreeSet<(usize, usize, EntityType)> = gold
        .iter()
        .map(|s| (s.start, s.end, s.etype))
        .collect();
    let true_pos = predicted
        .iter()
        .filter(|s| gold_keys.contains(&(s.start, s.end, s.etype)))
        .count();
    Ok(NerScore::from_counts(
        true_pos,
        predicted.len() - true_pos,
        gold.len() - true_pos,
    ))
}

fn check_no_overlap(spans: &[EntitySpan], list: &'static str) -> Result<(), NerError> {
    let mut ranges: Vec<(usize, usize)> = spans.iter().map(|s| (s.start, s.end)).collect();
    ranges.sort_unstable();
    for pair in ranges.windows(2) {
        if pair[1].0 < pair[0].1 {
            return Err(NerError::OverlappingSpans { list });
        }
    }
    Ok(())
}

/// Entity counts per (target, stance, type) cell, with marginals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NeStatistics {
    cells: BTreeMap<(TargetId, StanceLabel, EntityType), usize>,
}

impl NeStatistics {
    pub fn cell(&self, target: TargetId, stance: StanceLabel, etype: EntityType) -> usize {
        self.cells.get(&(target, stance, etype)).copied().unwrap_or(0)
    }

    pub fn row_total(&self, target: TargetId, stance: StanceLabel) -> usize {
        EntityType::ALL
            .iter()
            .map(|e| self.cell(target, stance, *e))
            .sum()
    }

    pub fn etype_total(&self, etype: EntityType) -> usize {
        self.cells
            .iter()
            .filter(|((_, _, e), _)| *e == etype)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn grand_total(&self) -> usize {
        self.cells.values().sum()
    }
}

/// Tallies annotated entities by the tweet's target and first-annotator
/// stance. Annotations for ids outside the data set are ignored.
pub fn ne_statistics(ds: &Dataset, annotations: &BTreeMap<String, Vec<EntitySpan>>) -> NeStatistics {
    let mut stats = NeStatistics::default();
    for tweet in ds.tweets() {
        let Some(spans) = annotations.get(&tweet.id) else {
            continue;
        };
        for span in spans {
            *stats
                .cells
                .entry((tweet.target.id, tweet.label_a, span.etype))
                .or_insert(0) += 1;
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dataset, Tweet};
    use alloc::string::ToString;
    use alloc::vec;

    fn gazetteer() -> Gazetteer {
        Gazetteer::new(vec![
            ("Galatasaray".to_string(), EntityType::Organization),
            ("Fenerbahçe".to_string(), EntityType::Organization),
            ("İstanbul".to_string(), EntityType::Location),
            ("Arda Turan".to_string(), EntityType::Person),
        ])
        .unwrap()
    }

    fn span(start: usize, end: usize, etype: EntityType, surface: &str) -> EntitySpan {
        EntitySpan {
            start,
            end,
            etype,
            surface: surface.to_string(),
        }
    }

    #[test]
    fn folding_examples() {
        assert_eq!(diacritics_fold("Fenerbahçe"), "fenerbahce");
        assert_eq!(diacritics_fold("abc"), "abc");
        assert_eq!(diacritics_fold("Kadıköy"), "kadikoy");
        assert_eq!(diacritics_fold("İstanbul"), "istanbul");
        assert_eq!(diacritics_fold("IŞIK"), "isik");
        for s in ["Çağrı", "şöğü", "plain"] {
            let once = diacritics_fold(s);
            assert_eq!(diacritics_fold(&once), once);
        }
    }

    #[test]
    fn apostrophe_suffix_is_left_out() {
        let spans = recognize("Galatasaray'ı yendik", &gazetteer(), RecognizerOptions::default());
        assert_eq!(
            spans,
            vec![span(0, 11, EntityType::Organization, "Galatasaray")]
        );
    }

    #[test]
    fn capitalization_switch() {
        let gaz = gazetteer();
        let strict = recognize("galatasaray çok iyi", &gaz, RecognizerOptions::default());
        assert!(strict.is_empty());
        let relaxed = recognize(
            "galatasaray çok iyi",
            &gaz,
            RecognizerOptions {
                relax_capitalization: true,
                ..Default::default()
            },
        );
        assert_eq!(relaxed.len(), 1);
        assert_eq!(relaxed[0].surface, "galatasaray");
    }

    #[test]
    fn diacritics_switch_keeps_case_constraint() {
        let gaz = gazetteer();
        let opts = RecognizerOptions {
            fold_diacritics: true,
            ..Default::default()
        };
        // diacritics dropped but capitalized: matches with the fold alone
        assert_eq!(recognize("Fenerbahce kazandı", &gaz, opts).len(), 1);
        // lowercase too: needs both relaxations
        assert!(recognize("fenerbahce kazandı", &gaz, opts).is_empty());
        assert!(recognize(
            "fenerbahce kazandı",
            &gaz,
            RecognizerOptions {
                relax_capitalization: true,
                ..Default::default()
            },
        )
        .is_empty());
        let both = RecognizerOptions {
            relax_capitalization: true,
            fold_diacritics: true,
            ..Default::default()
        };
        assert_eq!(recognize("fenerbahce kazandı", &gaz, both).len(), 1);
    }

    #[test]
    fn multi_token_entity() {
        let spans = recognize("Arda Turan attı", &gazetteer(), RecognizerOptions::default());
        assert_eq!(spans, vec![span(0, 10, EntityType::Person, "Arda Turan")]);
    }

    #[test]
    fn empty_gazetteer_finds_nothing() {
        let gaz = Gazetteer::new(vec![]).unwrap();
        assert!(recognize("Galatasaray kazandı", &gaz, RecognizerOptions::default()).is_empty());
    }

    #[test]
    fn attached_suffix_rule_is_opt_in() {
        let gaz = gazetteer();
        assert!(recognize("Galatasarayı yendik", &gaz, RecognizerOptions::default()).is_empty());
        let spans = recognize(
            "Galatasarayı yendik",
            &gaz,
            RecognizerOptions {
                attached_suffixes: true,
                ..Default::default()
            },
        );
        assert_eq!(
            spans,
            vec![span(0, 11, EntityType::Organization, "Galatasaray")]
        );
    }

    #[test]
    fn longest_match_wins() {
        let gaz = Gazetteer::new(vec![
            ("Galatasaray".to_string(), EntityType::Organization),
            ("Galatasaray Lisesi".to_string(), EntityType::Organization),
        ])
        .unwrap();
        let spans = recognize("Galatasaray Lisesi açıldı", &gaz, RecognizerOptions::default());
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].surface, "Galatasaray Lisesi");
    }

    #[test]
    fn repeated_names_give_disjoint_spans() {
        let spans = recognize(
            "Galatasaray Galatasaray",
            &gazetteer(),
            RecognizerOptions::default(),
        );
        assert_eq!(spans.len(), 2);
        assert!(spans[0].end <= spans[1].start);
    }

    #[test]
    fn relaxation_only_adds_spans() {
        let gaz = gazetteer();
        let text = "galatasaray ile İstanbul ve fenerbahce";
        let base = recognize(text, &gaz, RecognizerOptions::default());
        let relaxed = recognize(
            text,
            &gaz,
            RecognizerOptions {
                relax_capitalization: true,
                fold_diacritics: true,
                ..Default::default()
            },
        );
        for span in &base {
            assert!(relaxed.contains(span));
        }
        assert!(relaxed.len() >= base.len());
    }

    #[test]
    fn empty_gazetteer_name_rejected() {
        let err = Gazetteer::new(vec![("  ".to_string(), EntityType::Person)]).unwrap_err();
        assert_eq!(err, NerError::EmptyName { index: 0 });
    }

    #[test]
    fn gold_vs_gold_is_perfect() {
        let gold = vec![
            span(0, 11, EntityType::Organization, "Galatasaray"),
            span(15, 23, EntityType::Location, "İstanbul"),
        ];
        let score = score_exact(&gold, &gold).unwrap();
        assert_eq!((score.precision, score.recall, score.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn boundary_off_by_one_counts_twice() {
        let gold = vec![span(0, 11, EntityType::Organization, "Galatasaray")];
        let predicted = vec![span(0, 12, EntityType::Organization, "Galatasarayı")];
        let score = score_exact(&gold, &predicted).unwrap();
        assert_eq!(score.true_pos, 0);
        assert_eq!(score.false_pos, 1);
        assert_eq!(score.false_neg, 1);
        assert_eq!(score.f1, 0.0);
    }

    #[test]
    fn half_right_prediction_scores_half() {
        let gold = vec![
            span(0, 4, EntityType::Person, "Arda"),
            span(10, 18, EntityType::Location, "İstanbul"),
        ];
        let predicted = vec![
            span(0, 4, EntityType::Person, "Arda"),
            span(20, 24, EntityType::Organization, "spur"),
        ];
        let score = score_exact(&gold, &predicted).unwrap();
        assert_eq!((score.precision, score.recall, score.f1), (0.5, 0.5, 0.5));
    }

    #[test]
    fn type_mismatch_is_not_credit() {
        let gold = vec![span(0, 4, EntityType::Person, "Arda")];
        let predicted = vec![span(0, 4, EntityType::Organization, "Arda")];
        let score = score_exact(&gold, &predicted).unwrap();
        assert_eq!(score.true_pos, 0);
    }

    #[test]
    fn empty_prediction_set_has_zero_recall() {
        let gold = vec![span(0, 4, EntityType::Person, "Arda")];
        let score = score_exact(&gold, &[]).unwrap();
        assert_eq!(score.recall, 0.0);
        assert_eq!(score.precision, 0.0);
    }

    #[test]
    fn overlapping_spans_rejected() {
        let overlapping = vec![
            span(0, 5, EntityType::Person, "ArdaT"),
            span(3, 8, EntityType::Person, "aTura"),
        ];
        assert_eq!(
            score_exact(&overlapping, &[]),
            Err(NerError::OverlappingSpans { list: "gold" })
        );
        assert_eq!(
            score_exact(&[], &overlapping),
            Err(NerError::OverlappingSpans { list: "predicted" })
        );
    }

    fn stats_fixture() -> (Dataset, BTreeMap<String, Vec<EntitySpan>>) {
        let tweets = vec![
            Tweet {
                id: "t0".to_string(),
                text: "Galatasaray Arda Turan İstanbul".to_string(),
                target: TargetId::Target1.into(),
                label_a: StanceLabel::Favor,
                label_b: None,
            },
            Tweet {
                id: "t1".to_string(),
                text: "Fenerbahçe".to_string(),
                target: TargetId::Target2.into(),
                label_a: StanceLabel::Against,
                label_b: None,
            },
            Tweet {
                id: "t2".to_string(),
                text: "İstanbul".to_string(),
                target: TargetId::Target1.into(),
                label_a: StanceLabel::Favor,
                label_b: None,
            },
        ];
        let ds = Dataset::new("fixture", tweets).unwrap();
        let mut annotations = BTreeMap::new();
        annotations.insert(
            "t0".to_string(),
            vec![
                span(0, 11, EntityType::Organization, "Galatasaray"),
                span(12, 22, EntityType::Person, "Arda Turan"),
                span(23, 31, EntityType::Location, "İstanbul"),
            ],
        );
        annotations.insert(
            "t1".to_string(),
            vec![span(0, 10, EntityType::Organization, "Fenerbahçe")],
        );
        annotations.insert(
            "t2".to_string(),
            vec![span(0, 8, EntityType::Location, "İstanbul")],
        );
        (ds, annotations)
    }

    #[test]
    fn statistics_hand_counted() {
        let (ds, annotations) = stats_fixture();
        let stats = ne_statistics(&ds, &annotations);
        assert_eq!(
            stats.cell(TargetId::Target1, StanceLabel::Favor, EntityType::Location),
            2
        );
        assert_eq!(
            stats.cell(TargetId::Target1, StanceLabel::Favor, EntityType::Person),
            1
        );
        assert_eq!(
            stats.cell(TargetId::Target2, StanceLabel::Against, EntityType::Organization),
            1
        );
        assert_eq!(stats.row_total(TargetId::Target1, StanceLabel::Favor), 4);
        assert_eq!(stats.etype_total(EntityType::Organization), 2);
        assert_eq!(stats.grand_total(), 5);
    }

    #[test]
    fn statistics_empty_annotation() {
        let (ds, _) = stats_fixture();
        let stats = ne_statistics(&ds, &BTreeMap::new());
        assert_eq!(stats.grand_total(), 0);
        assert_eq!(stats.etype_total(EntityType::Person), 0);
    }

    #[test]
    fn statistics_ignore_unknown_ids() {
        let (ds, mut annotations) = stats_fixture();
        annotations.insert(
            "ghost".to_string(),
            vec![span(0, 3, EntityType::Person, "Ali")],
        );
        assert_eq!(ne_statistics(&ds, &annotations).grand_total(), 5);
    }
}
