//! Shared parsing for configuration tokens: feature lists, mode names, and
//! the key=value override file. The same spellings appear on the command
//! line, in config files, and in persisted model headers.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use stance_core::features::{FeatureConfig, NeSource};
use stance_core::rounding::RoundingMode;

/// Feature-family tokens in their canonical order.
pub const FAMILY_TOKENS: [&str; 7] = [
    "unigram", "bigram", "hashtag", "link", "emo-pos", "emo-neg", "ne",
];

/// Every key the config file may carry, across all subcommands.
pub const KNOWN_KEYS: [&str; 19] = [
    "features",
    "ne-source",
    "min-term-freq",
    "c",
    "tol",
    "k",
    "seed",
    "target",
    "rounding",
    "whole-set-vocab",
    "per-fold-mean",
    "no-case-fold",
    "stopwords",
    "emoticons",
    "gazetteer",
    "annotations",
    "relax-caps",
    "fold-diacritics",
    "attached-suffixes",
];

/// Parses a comma-separated family list into a config whose other fields
/// stay at their defaults.
pub fn parse_features(list: &str) -> Result<FeatureConfig, String> {
    let mut cfg = FeatureConfig {
        use_unigrams: false,
        ..FeatureConfig::default()
    };
    for token in list.split(',') {
        let token = token.trim();
        match token {
            "unigram" => cfg.use_unigrams = true,
            "bigram" => cfg.use_bigrams = true,
            "hashtag" => cfg.use_hashtag_flag = true,
            "link" => cfg.use_link_flag = true,
            "emo-pos" => cfg.use_pos_emoticon_flag = true,
            "emo-neg" => cfg.use_neg_emoticon_flag = true,
            "ne" => cfg.use_named_entities = true,
            "" => return Err(String::from("empty feature token")),
            other => {
                return Err(format!(
                    "unknown feature {other:?}; expected any of {}",
                    FAMILY_TOKENS.join(", ")
                ))
            }
        }
    }
    Ok(cfg)
}

/// The enabled families as the canonical comma list.
pub fn render_features(cfg: &FeatureConfig) -> String {
    let enabled = [
        (cfg.use_unigrams, "unigram"),
        (cfg.use_bigrams, "bigram"),
        (cfg.use_hashtag_flag, "hashtag"),
        (cfg.use_link_flag, "link"),
        (cfg.use_pos_emoticon_flag, "emo-pos"),
        (cfg.use_neg_emoticon_flag, "emo-neg"),
        (cfg.use_named_entities, "ne"),
    ];
    let names: Vec<&str> = enabled
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, name)| *name)
        .collect();
    names.join(",")
}

pub fn parse_ne_source(token: &str) -> Result<NeSource, String> {
    match token {
        "gold" => Ok(NeSource::Gold),
        "auto" => Ok(NeSource::Auto),
        other => Err(format!("unknown ne-source {other:?}; expected gold or auto")),
    }
}

pub fn render_ne_source(source: NeSource) -> &'static str {
    match source {
        NeSource::Gold => "gold",
        NeSource::Auto => "auto",
    }
}

pub fn parse_rounding(token: &str) -> Result<RoundingMode, String> {
    match token {
        "half-up" => Ok(RoundingMode::HalfUp),
        "half-even" => Ok(RoundingMode::HalfEven),
        other => Err(format!(
            "unknown rounding mode {other:?}; expected half-up or half-even"
        )),
    }
}

pub fn render_rounding(mode: RoundingMode) -> &'static str {
    match mode {
        RoundingMode::HalfUp => "half-up",
        RoundingMode::HalfEven => "half-even",
    }
}

pub fn parse_bool(token: &str) -> Result<bool, String> {
    match token {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, found {other:?}")),
    }
}

/// Key=value override file; `#` comments and blank lines are skipped. Keys
/// are long flag names and must be known, though a subcommand may ignore the
/// ones it has no use for.
pub fn parse_config_file(content: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (number, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value", number + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("line {}: unknown key {key:?}", number + 1));
        }
        if map.insert(String::from(key), String::from(value)).is_some() {
            return Err(format!("line {}: duplicate key {key:?}", number + 1));
        }
    }
    Ok(map)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let content =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config_file(&content).map_err(|e| format!("{}: {e}", path.display()))
}
