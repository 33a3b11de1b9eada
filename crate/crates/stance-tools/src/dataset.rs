//! Data set file IO: a five-column CSV plus an optional key=value manifest
//! declaring expected per-cell counts.
//!
//! Row numbers in errors count data records from 1; the header row is not a
//! record.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Read, Write};
use std::path::Path;

use stance_core::corpus::{CorpusError, Dataset, StanceLabel, TargetId, Tweet};

pub const HEADER: [&str; 5] = ["id", "text", "target", "stance_a", "stance_b"];

/// On-disk data set encodings. CSV is the only one so far; the enum is the
/// seam for adding more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DatasetFormat {
    #[default]
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("bad header {found:?}; expected {HEADER:?}")]
    BadHeader { found: Vec<String> },
    #[error("no records")]
    NoRecords,
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("manifest mismatch for {key}: declared {declared}, found {found}")]
    ManifestMismatch {
        key: &'static str,
        declared: usize,
        found: usize,
    },
}

fn row_error(row: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Row {
        row,
        message: message.into(),
    }
}

/// Reads a data set; `version_tag` names it in reports (the CLI passes the
/// file stem).
pub fn parse_dataset(
    reader: impl Read,
    version_tag: &str,
    format: DatasetFormat,
) -> Result<Dataset, DatasetError> {
    let DatasetFormat::Csv = format;
    let mut csv = csv::ReaderBuilder::new().from_reader(reader);
    let header = csv.headers().map_err(|e| row_error(0, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(DatasetError::BadHeader {
            found: header.iter().map(String::from).collect(),
        });
    }
    let mut tweets = Vec::new();
    for (index, record) in csv.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|e| row_error(row, e.to_string()))?;
        if record.len() != HEADER.len() {
            return Err(row_error(
                row,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let id = &record[0];
        if id.is_empty() {
            return Err(row_error(row, "empty id"));
        }
        let target = TargetId::parse_token(&record[2])
            .ok_or_else(|| row_error(row, format!("unknown target {:?}", &record[2])))?;
        let label_a = StanceLabel::parse_token(&record[3])
            .ok_or_else(|| row_error(row, format!("unknown stance {:?}", &record[3])))?;
        let label_b = match &record[4] {
            "" => None,
            token => Some(
                StanceLabel::parse_token(token)
                    .ok_or_else(|| row_error(row, format!("unknown stance {token:?}")))?,
            ),
        };
        tweets.push(Tweet {
            id: String::from(id),
            text: String::from(&record[1]),
            target: target.into(),
            label_a,
            label_b,
        });
    }
    if tweets.is_empty() {
        return Err(DatasetError::NoRecords);
    }
    Ok(Dataset::new(version_tag, tweets)?)
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Dataset, DatasetError> {
    let tag = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| String::from("dataset"));
    let file = File::open(path).map_err(|e| crate::io_at(path, e))?;
    parse_dataset(file, &tag, format)
}

/// Writes the CSV form; loading it back reproduces the data set, and a
/// load/save cycle of a minimally-quoted file is byte-identical.
pub fn write_dataset(ds: &Dataset, writer: impl Write) -> Result<(), DatasetError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(HEADER)
        .map_err(|e| row_error(0, e.to_string()))?;
    for (index, tweet) in ds.tweets().iter().enumerate() {
        csv.write_record([
            tweet.id.as_str(),
            tweet.text.as_str(),
            tweet.target.id.as_token(),
            tweet.label_a.as_token(),
            tweet.label_b.map_or("", |l| l.as_token()),
        ])
        .map_err(|e| row_error(index + 1, e.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<(), DatasetError> {
    write_dataset(ds, File::create(path).map_err(|e| crate::io_at(path, e))?)
}

/// Expected per-(target, stance) counts, as declared by a sidecar manifest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub cells: BTreeMap<(TargetId, StanceLabel), usize>,
    pub total: Option<usize>,
}

const MANIFEST_KEYS: [(&str, TargetId, StanceLabel); 4] = [
    ("target1.favor", TargetId::Target1, StanceLabel::Favor),
    ("target1.against", TargetId::Target1, StanceLabel::Against),
    ("target2.favor", TargetId::Target2, StanceLabel::Favor),
    ("target2.against", TargetId::Target2, StanceLabel::Against),
];

/// Key=value cell counts: `target1.favor=175` etc., plus optional `total`.
/// `#` comments and blank lines are skipped.
pub fn parse_manifest(content: &str) -> Result<Manifest, DatasetError> {
    let mut manifest = Manifest::default();
    for (index, raw) in content.lines().enumerate() {
        let line = index + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let Some((key, value)) = raw.split_once('=') else {
            return Err(DatasetError::Manifest {
                line,
                message: String::from("expected key=value"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let count: usize = value.parse().map_err(|_| DatasetError::Manifest {
            line,
            message: format!("bad count {value:?}"),
        })?;
        let slot = MANIFEST_KEYS.iter().find(|(name, _, _)| *name == key);
        let replaced = if let Some((_, target, label)) = slot {
            manifest.cells.insert((*target, *label), count).is_some()
        } else if key == "total" {
            manifest.total.replace(count).is_some()
        } else {
            return Err(DatasetError::Manifest {
                line,
                message: format!("unknown key {key:?}"),
            });
        };
        if replaced {
            return Err(DatasetError::Manifest {
                line,
                message: format!("duplicate key {key:?}"),
            });
        }
    }
    Ok(manifest)
}

pub fn load_manifest(path: &Path) -> Result<Manifest, DatasetError> {
    parse_manifest(&fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?)
}

/// Checks every declared count against the data set (first annotator).
pub fn validate_manifest(ds: &Dataset, manifest: &Manifest) -> Result<(), DatasetError> {
    for (name, target, label) in MANIFEST_KEYS {
        if let Some(&declared) = manifest.cells.get(&(target, label)) {
            let found = ds.cell_count(target, label);
            if found != declared {
                return Err(DatasetError::ManifestMismatch {
                    key: name,
                    declared,
                    found,
                });
            }
        }
    }
    if let Some(declared) = manifest.total {
        if ds.len() != declared {
            return Err(DatasetError::ManifestMismatch {
                key: "total",
                declared,
                found: ds.len(),
            });
        }
    }
    Ok(())
}
