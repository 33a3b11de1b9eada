//! Persistence for trained classifiers: the versioned model file, the
//! vocabulary dump, and the per-sweep convergence trace.
//!
//! Model files are plain UTF-8. The header line is the format version; the
//! field lines carry the scalars and the preprocessing settings a later
//! `predict` needs; the `weights`/`alphas` section headers carry their line
//! counts. Floats are written in shortest-roundtrip form, so save/load is
//! exact.

use std::fs;
use std::io;
use std::path::Path;

use stance_core::features::{FeatureConfig, Vocabulary};
use stance_core::svm::{SvmModel, SweepRecord};

use crate::config;

pub const MODEL_VERSION: &str = "stance-svm v1";
pub const TRACE_HEADER: &str = "sweep,changed_pairs,dual_objective";

/// A model plus everything needed to vectorize new text the same way it was
/// vectorized for training.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub model: SvmModel,
    pub features: FeatureConfig,
    pub fold_case: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelIoError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("bad model header {found:?}; expected {MODEL_VERSION:?}")]
    VersionMismatch { found: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing field {0:?}")]
    MissingField(&'static str),
}

fn line_error(line: usize, message: impl Into<String>) -> ModelIoError {
    ModelIoError::Line {
        line,
        message: message.into(),
    }
}

/// Renders the model file. Alphas are per-training-example and only needed
/// for audits, so they are optional.
pub fn render_model(saved: &SavedModel, include_alphas: bool) -> String {
    let mut out = String::new();
    out.push_str(MODEL_VERSION);
    out.push('\n');
    let fields = [
        ("dimension", saved.model.dimension.to_string()),
        ("bias", saved.model.bias.to_string()),
        ("converged", saved.model.converged.to_string()),
        ("features", config::render_features(&saved.features)),
        (
            "ne_source",
            String::from(config::render_ne_source(saved.features.ne_source)),
        ),
        ("min_term_freq", saved.features.min_term_freq.to_string()),
        ("fold_case", saved.fold_case.to_string()),
    ];
    for (name, value) in fields {
        out.push_str(name);
        out.push(' ');
        out.push_str(&value);
        out.push('\n');
    }
    out.push_str("weights ");
    out.push_str(&saved.model.weights.len().to_string());
    out.push('\n');
    for w in &saved.model.weights {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    if include_alphas {
        out.push_str("alphas ");
        out.push_str(&saved.model.alphas.len().to_string());
        out.push('\n');
        for a in &saved.model.alphas {
            out.push_str(&a.to_string());
            out.push('\n');
        }
    }
    out
}

pub fn save_model(saved: &SavedModel, path: &Path, include_alphas: bool) -> Result<(), ModelIoError> {
    Ok(fs::write(path, render_model(saved, include_alphas)).map_err(|e| crate::io_at(path, e))?)
}

/// Parses a model file; a missing alphas section loads as empty.
pub fn parse_model(content: &str) -> Result<SavedModel, ModelIoError> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines.next().ok_or(ModelIoError::VersionMismatch {
        found: String::new(),
    })?;
    if header != MODEL_VERSION {
        return Err(ModelIoError::VersionMismatch {
            found: String::from(header),
        });
    }

    let mut dimension = None;
    let mut bias = None;
    let mut converged = None;
    let mut features = None;
    let mut ne_source = None;
    let mut min_term_freq = None;
    let mut fold_case = None;
    let mut weights: Option<Vec<f64>> = None;
    let mut alphas: Option<Vec<f64>> = None;

    while let Some((index, raw)) = lines.next() {
        let line = index + 1;
        let Some((name, value)) = raw.split_once(' ') else {
            return Err(line_error(line, format!("expected `field value`, found {raw:?}")));
        };
        match name {
            "dimension" => {
                dimension = Some(value.parse::<usize>().map_err(|_| {
                    line_error(line, format!("bad dimension {value:?}"))
                })?);
            }
            "bias" => {
                bias = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| line_error(line, format!("bad bias {value:?}")))?,
                );
            }
            "converged" => {
                converged = Some(config::parse_bool(value).map_err(|e| line_error(line, e))?);
            }
            "features" => {
                features = Some(config::parse_features(value).map_err(|e| line_error(line, e))?);
            }
            "ne_source" => {
                ne_source = Some(config::parse_ne_source(value).map_err(|e| line_error(line, e))?);
            }
            "min_term_freq" => {
                min_term_freq = Some(value.parse::<usize>().map_err(|_| {
                    line_error(line, format!("bad min_term_freq {value:?}"))
                })?);
            }
            "fold_case" => {
                fold_case = Some(config::parse_bool(value).map_err(|e| line_error(line, e))?);
            }
            "weights" | "alphas" => {
                let count: usize = value
                    .parse()
                    .map_err(|_| line_error(line, format!("bad count {value:?}")))?;
                let mut values = Vec::with_capacity(count);
                for _ in 0..count {
                    let (index, raw) = lines
                        .next()
                        .ok_or_else(|| line_error(line, format!("{name} section cut short")))?;
                    values.push(raw.parse::<f64>().map_err(|_| {
                        line_error(index + 1, format!("bad number {raw:?}"))
                    })?);
                }
                match name {
                    "weights" => weights = Some(values),
                    _ => alphas = Some(values),
                }
            }
            other => return Err(line_error(line, format!("unknown field {other:?}"))),
        }
    }

    let mut features = features.ok_or(ModelIoError::MissingField("features"))?;
    features.ne_source = ne_source.ok_or(ModelIoError::MissingField("ne_source"))?;
    features.min_term_freq = min_term_freq.ok_or(ModelIoError::MissingField("min_term_freq"))?;
    let weights = weights.ok_or(ModelIoError::MissingField("weights"))?;
    let dimension = dimension.ok_or(ModelIoError::MissingField("dimension"))?;
    if weights.len() != dimension {
        return Err(line_error(
            0,
            format!("dimension {dimension} but {} weights", weights.len()),
        ));
    }
    Ok(SavedModel {
        model: SvmModel {
            alphas: alphas.unwrap_or_default(),
            bias: bias.ok_or(ModelIoError::MissingField("bias"))?,
            weights,
            dimension,
            converged: converged.ok_or(ModelIoError::MissingField("converged"))?,
        },
        features,
        fold_case: fold_case.ok_or(ModelIoError::MissingField("fold_case"))?,
    })
}

pub fn load_model(path: &Path) -> Result<SavedModel, ModelIoError> {
    parse_model(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?)
}

/// The vocabulary dump: one `family<TAB>term<TAB>index` line per feature, in
/// index order.
pub fn render_vocabulary(vocab: &Vocabulary) -> String {
    let mut out = String::new();
    for (family, term, index) in vocab.dump() {
        out.push_str(family);
        out.push('\t');
        out.push_str(&term);
        out.push('\t');
        out.push_str(&index.to_string());
        out.push('\n');
    }
    out
}

pub fn save_vocabulary(vocab: &Vocabulary, path: &Path) -> Result<(), ModelIoError> {
    Ok(fs::write(path, render_vocabulary(vocab)).map_err(|e| crate::io_at(path, e))?)
}

/// Reads dump rows back; pair with [`Vocabulary::from_dump`] and the config
/// stored in the model file.
pub fn parse_vocabulary_rows(content: &str) -> Result<Vec<(String, String, usize)>, ModelIoError> {
    let mut rows = Vec::new();
    for (index, raw) in content.lines().enumerate() {
        let line = index + 1;
        let fields: Vec<&str> = raw.split('\t').collect();
        let [family, term, number] = fields.as_slice() else {
            return Err(line_error(line, "expected family<TAB>term<TAB>index"));
        };
        let number: usize = number
            .parse()
            .map_err(|_| line_error(line, format!("bad index {number:?}")))?;
        rows.push((String::from(*family), String::from(*term), number));
    }
    Ok(rows)
}

pub fn load_vocabulary_rows(path: &Path) -> Result<Vec<(String, String, usize)>, ModelIoError> {
    parse_vocabulary_rows(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?)
}

/// One line per outer sweep, after a header naming the columns.
pub fn render_trace(trace: &[SweepRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for record in trace {
        out.push_str(&record.sweep.to_string());
        out.push(',');
        out.push_str(&record.changed_pairs.to_string());
        out.push(',');
        out.push_str(&record.dual_objective.to_string());
        out.push('\n');
    }
    out
}

pub fn save_trace(trace: &[SweepRecord], path: &Path) -> Result<(), ModelIoError> {
    Ok(fs::write(path, render_trace(trace)).map_err(|e| crate::io_at(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stance_core::features::NeSource;

    fn saved() -> SavedModel {
        SavedModel {
            model: SvmModel {
                alphas: vec![0.5, 0.25, 0.0],
                bias: -0.1875,
                weights: vec![0.25, -1.5],
                dimension: 2,
                converged: true,
            },
            features: FeatureConfig {
                use_hashtag_flag: true,
                use_named_entities: true,
                ne_source: NeSource::Auto,
                min_term_freq: 2,
                ..FeatureConfig::default()
            },
            fold_case: false,
        }
    }

    #[test]
    fn model_round_trips_exactly() {
        let original = saved();
        for include_alphas in [true, false] {
            let text = render_model(&original, include_alphas);
            let loaded = parse_model(&text).unwrap();
            assert_eq!(loaded.model.bias, original.model.bias);
            assert_eq!(loaded.model.weights, original.model.weights);
            assert_eq!(loaded.model.dimension, 2);
            assert!(loaded.model.converged);
            assert_eq!(loaded.features, original.features);
            assert!(!loaded.fold_case);
            if include_alphas {
                assert_eq!(loaded.model.alphas, original.model.alphas);
            } else {
                assert!(loaded.model.alphas.is_empty());
            }
        }
    }

    #[test]
    fn version_mismatch_names_the_expected_version() {
        let err = parse_model("stance-svm v9\ndimension 0\n").unwrap_err();
        assert!(err.to_string().contains("stance-svm v1"));
        assert!(err.to_string().contains("stance-svm v9"));
        assert!(matches!(err, ModelIoError::VersionMismatch { .. }));
        // an arbitrary corrupted first line is a version problem too
        assert!(matches!(
            parse_model("MZ\u{90}garbage"),
            Err(ModelIoError::VersionMismatch { .. })
        ));
    }

    #[test]
    fn truncated_and_malformed_models_are_rejected() {
        let good = render_model(&saved(), true);
        // cut inside the weights section
        let cut: String = good.lines().take(9).map(|l| format!("{l}\n")).collect();
        assert!(parse_model(&cut).is_err());
        assert!(parse_model("stance-svm v1\nbias x\n").is_err());
        assert!(parse_model("stance-svm v1\nnoise\n").is_err());
        let err = parse_model("stance-svm v1\ndimension 1\n").unwrap_err();
        assert!(matches!(err, ModelIoError::MissingField(_)));
    }

    #[test]
    fn trace_lines_carry_sweep_counts_and_objective() {
        let trace = vec![
            SweepRecord {
                sweep: 1,
                changed_pairs: 3,
                dual_objective: 0.5,
            },
            SweepRecord {
                sweep: 2,
                changed_pairs: 0,
                dual_objective: 0.75,
            },
        ];
        let text = render_trace(&trace);
        assert_eq!(text, "sweep,changed_pairs,dual_objective\n1,3,0.5\n2,0,0.75\n");
    }

    #[test]
    fn vocabulary_rows_round_trip() {
        let content = "unigram\tgol\t0\nbigram\tgol var\t1\nflag\thashtag\t2\n";
        let rows = parse_vocabulary_rows(content).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], (String::from("bigram"), String::from("gol var"), 1));
        assert!(parse_vocabulary_rows("unigram\tgol\n").is_err());
        assert!(parse_vocabulary_rows("unigram\tgol\tx\n").is_err());
    }
}
