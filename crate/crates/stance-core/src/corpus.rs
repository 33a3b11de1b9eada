//! Stance-annotated tweet data sets and inter-annotator agreement.
//!
//! A data set is an ordered list of tweets, each labeled toward one of two
//! targets by one or two annotators. Agreement between annotators is
//! summarized by the matching percentage and Cohen's kappa; the default
//! chance model fixes expected agreement at 0.5 (two equiprobable classes),
//! with a marginal-based estimator available as an alternative.

use alloc::string::String;
use alloc::vec::Vec;

use alloc::collections::BTreeSet;

/// Stance toward the target. Only two classes exist here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StanceLabel {
    Favor,
    Against,
}

impl StanceLabel {
    /// Machine token used in data files.
    pub fn as_token(self) -> &'static str {
        match self {
            StanceLabel::Favor => "FAVOR",
            StanceLabel::Against => "AGAINST",
        }
    }

    /// Human-readable class name used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            StanceLabel::Favor => "Favor",
            StanceLabel::Against => "Against",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        match token {
            "FAVOR" => Some(StanceLabel::Favor),
            "AGAINST" => Some(StanceLabel::Against),
            _ => None,
        }
    }

    pub const ALL: [StanceLabel; 2] = [StanceLabel::Favor, StanceLabel::Against];
}

/// Which of the two stance targets a tweet addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetId {
    Target1,
    Target2,
}

impl TargetId {
    pub fn as_token(self) -> &'static str {
        match self {
            TargetId::Target1 => "TARGET1",
            TargetId::Target2 => "TARGET2",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        match token {
            "TARGET1" => Some(TargetId::Target1),
            "TARGET2" => Some(TargetId::Target2),
            _ => None,
        }
    }

    pub const ALL: [TargetId; 2] = [TargetId::Target1, TargetId::Target2];
}

/// A stance target with its display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub id: TargetId,
    pub display_name: String,
}

impl Target {
    pub fn new(id: TargetId, display_name: impl Into<String>) -> Self {
        Self {
            id,
            display_name: display_name.into(),
        }
    }
}

impl From<TargetId> for Target {
    /// Generic display name; loaders may attach a real one.
    fn from(id: TargetId) -> Self {
        let name = match id {
            TargetId::Target1 => "Target-1",
            TargetId::Target2 => "Target-2",
        };
        Target::new(id, name)
    }
}

/// One corpus record. `text` may be empty when a data set ships annotations
/// without the tweet bodies; operations that need text reject such tweets at
/// their own boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: String,
    pub text: String,
    pub target: Target,
    pub label_a: StanceLabel,
    /// Second annotator's label; absent in single-annotator data sets.
    pub label_b: Option<StanceLabel>,
}

/// An ordered, id-unique collection of tweets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub version_tag: String,
    tweets: Vec<Tweet>,
}

/// Agreement statistics for a dual-annotated data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementReport {
    pub n_total: usize,
    pub n_match: usize,
    /// Observed agreement, n_match / n_total.
    pub p_o: f64,
    /// Expected chance agreement.
    pub p_e: f64,
    pub kappa: f64,
}

/// How expected chance agreement is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChanceModel {
    /// Two equiprobable classes: p_e = 0.5.
    #[default]
    Uniform,
    /// Product of the annotators' observed label marginals.
    Marginal,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate tweet id {0:?}")]
    DuplicateId(String),
    #[error("tweet {id:?} has no second annotation")]
    MissingSecondLabel { id: String },
    #[error("no tweets in scope")]
    EmptyScope,
    #[error("{name} = {value} is outside [0, 1]")]
    FractionOutOfRange { name: &'static str, value: f64 },
    #[error("kappa is undefined at p_e = 1")]
    UndefinedKappa,
}

impl Dataset {
    /// Validates id uniqueness; order is preserved.
    pub fn new(
        version_tag: impl Into<String>,
        tweets: Vec<Tweet>,
    ) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        for tweet in &tweets {
            if !seen.insert(tweet.id.as_str()) {
                return Err(CorpusError::DuplicateId(tweet.id.clone()));
            }
        }
        Ok(Self {
            version_tag: version_tag.into(),
            tweets,
        })
    }

    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn for_target(&self, target: TargetId) -> impl Iterator<Item = &Tweet> {
        self.tweets.iter().filter(move |t| t.target.id == target)
    }

    /// First-annotator count for one (target, label) cell.
    pub fn cell_count(&self, target: TargetId, label: StanceLabel) -> usize {
        self.for_target(target).filter(|t| t.label_a == label).count()
    }
}

/// Fraction of tweets whose two annotations agree, optionally restricted to
/// one target.
pub fn matching_percentage(ds: &Dataset, scope: Option<TargetId>) -> Result<f64, CorpusError> {
    let mut n_total = 0usize;
    let mut n_match = 0usize;
    for tweet in ds.tweets() {
        if scope.is_some_and(|t| tweet.target.id != t) {
            continue;
        }
        let label_b = tweet.label_b.ok_or_else(|| CorpusError::MissingSecondLabel {
            id: tweet.id.clone(),
        })?;
        n_total += 1;
        if tweet.label_a == label_b {
            n_match += 1;
        }
    }
    if n_total == 0 {
        return Err(CorpusError::EmptyScope);
    }
    Ok(n_match as f64 / n_total as f64)
}

/// Chance-corrected agreement: (p_o − p_e) / (1 − p_e).
pub fn cohens_kappa(p_o: f64, p_e: f64) -> Result<f64, CorpusError> {
    if !(0.0..=1.0).contains(&p_o) {
        return Err(CorpusError::FractionOutOfRange {
            name: "p_o",
            value: p_o,
        });
    }
    if !(0.0..=1.0).contains(&p_e) {
        return Err(CorpusError::FractionOutOfRange {
            name: "p_e",
            value: p_e,
        });
    }
    if p_e == 1.0 {
        return Err(CorpusError::UndefinedKappa);
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Agreement statistics under the two-equiprobable-classes chance model.
pub fn agreement_report(ds: &Dataset) -> Result<AgreementReport, CorpusError> {
    agreement_report_with(ds, ChanceModel::Uniform)
}

/// Agreement statistics under an explicit chance model.
pub fn agreement_report_with(
    ds: &Dataset,
    chance: ChanceModel,
) -> Result<AgreementReport, CorpusError> {
    let mut n_total = 0usize;
    let mut n_match = 0usize;
    let mut a_favor = 0usize;
    let mut b_favor = 0usize;
    for tweet in ds.tweets() {
        let label_b = tweet.label_b.ok_or_else(|| CorpusError::MissingSecondLabel {
            id: tweet.id.clone(),
        })?;
        n_total += 1;
        if tweet.label_a == label_b {
            n_match += 1;
        }
        if tweet.label_a == StanceLabel::Favor {
            a_favor += 1;
        }
        if label_b == StanceLabel::Favor {
            b_favor += 1;
        }
    }
    if n_total == 0 {
        return Err(CorpusError::EmptyScope);
    }
    let p_o = n_match as f64 / n_total as f64;
    let p_e = match chance {
        ChanceModel::Uniform => 0.5,
        ChanceModel::Marginal => {
            let n = n_total as f64;
            let pa = a_favor as f64 / n;
            let pb = b_favor as f64 / n;
            pa * pb + (1.0 - pa) * (1.0 - pb)
        }
    };
    let kappa = cohens_kappa(p_o, p_e)?;
    Ok(AgreementReport {
        n_total,
        n_match,
        p_o,
        p_e,
        kappa,
    })
}

/// Keeps exactly the tweets whose two annotations agree.
pub fn consensus_subset(ds: &Dataset) -> Result<Dataset, CorpusError> {
    let mut kept = Vec::new();
    for tweet in ds.tweets() {
        let label_b = tweet.label_b.ok_or_else(|| CorpusError::MissingSecondLabel {
            id: tweet.id.clone(),
        })?;
        if tweet.label_a == label_b {
            kept.push(tweet.clone());
        }
    }
    // ids were unique in the input, so the subset cannot fail validation
    Dataset::new(ds.version_tag.clone(), kept)
}
