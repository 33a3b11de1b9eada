//! Stratified k-fold cross-validation and per-class metric tables.
//!
//! Folds are assigned per stance class (shuffle, then round-robin), so every
//! fold holds each class in proportion. Fold results pool into one confusion
//! matrix by default (micro pooling); averaging per-fold metrics is the
//! alternative. The Average row of a report is the arithmetic mean of the
//! two class rows, with F averaged directly rather than recomputed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Dataset, StanceLabel, Target};
use crate::features::{build_vocabulary, vectorize, FeatureConfig, FeatureError, PreparedTweet, Vocabulary};
use crate::svm::{self, LabeledExample, SvmError, TrainConfig};

/// Two-class confusion counts; Favor is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionMatrix {
    pub fn add(&mut self, gold: StanceLabel, predicted: StanceLabel) {
        use StanceLabel::{Against, Favor};
        match (gold, predicted) {
            (Favor, Favor) => self.true_pos += 1,
            (Against, Favor) => self.false_pos += 1,
            (Favor, Against) => self.false_neg += 1,
            (Against, Against) => self.true_neg += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a ConfusionMatrix>>(matrices: I) -> ConfusionMatrix {
        let mut out = ConfusionMatrix::default();
        for m in matrices {
            out.true_pos += m.true_pos;
            out.false_pos += m.false_pos;
            out.false_neg += m.false_neg;
            out.true_neg += m.true_neg;
        }
        out
    }

    /// Metrics treating `class` as the positive class. For Against the
    /// counts swap roles: its false negatives are Favor's false positives.
    pub fn metrics_for(&self, class: StanceLabel) -> ClassMetrics {
        let (tp, fp, fn_) = match class {
            StanceLabel::Favor => (self.true_pos, self.false_pos, self.false_neg),
            StanceLabel::Against => (self.true_neg, self.false_neg, self.false_pos),
        };
        ClassMetrics::from_counts(tp, fp, fn_)
    }
}

/// Precision/recall/F for one class, as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ClassMetrics {
    /// Zero when a denominator is zero; F is the harmonic mean.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            precision,
            recall,
            f1,
        }
    }
}

/// Arithmetic mean of two class rows, each metric averaged directly.
pub fn macro_average(favor: &ClassMetrics, against: &ClassMetrics) -> ClassMetrics {
    ClassMetrics {
        precision: (favor.precision + against.precision) / 2.0,
        recall: (favor.recall + against.recall) / 2.0,
        f1: (favor.f1 + against.f1) / 2.0,
    }
}

/// How fold results combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregationMode {
    /// Sum confusion counts across folds, then compute metrics.
    #[default]
    MicroPool,
    /// Compute metrics per fold, then average them.
    PerFoldMean,
}

/// Cross-validation summary for one classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldReport {
    pub folds: usize,
    pub pooled: ConfusionMatrix,
    pub favor: ClassMetrics,
    pub against: ClassMetrics,
    pub average: ClassMetrics,
    pub mode: AggregationMode,
}

/// One target's CV summary within a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSummary {
    pub target: Target,
    pub report: FoldReport,
}

/// A full run: one summary per target plus the configuration echo.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub entries: Vec<TargetSummary>,
    pub config_echo: String,
    pub k: usize,
    pub seed: u64,
}

/// Per-cell metric differences in percentage points.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRow {
    pub target: String,
    pub row: &'static str,
    pub d_precision: f64,
    pub d_recall: f64,
    pub d_f1: f64,
}

/// Deterministic stratified fold assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub assignment: BTreeMap<String, usize>,
}

impl FoldPlan {
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("k = {k} leaves no held-out data")]
    DegenerateK { k: usize },
    #[error("class {} has {size} members, fewer than k = {k}", label.display_name())]
    ClassTooSmall {
        label: StanceLabel,
        size: usize,
        k: usize,
    },
    #[error("test split is empty")]
    EmptyTestSet,
    #[error("no fold results to aggregate")]
    NoFolds,
    #[error("reports cover different targets")]
    ShapeMismatch,
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Svm(#[from] SvmError),
}

/// Shuffles each class with one seeded stream (Favor first), then deals
/// members round-robin. Fold sizes per class differ by at most one.
pub fn make_folds(ds: &Dataset, k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::DegenerateK { k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = BTreeMap::new();
    for label in StanceLabel::ALL {
        let mut ids: Vec<&str> = ds
            .tweets()
            .iter()
            .filter(|t| t.label_a == label)
            .map(|t| t.id.as_str())
            .collect();
        if ids.len() < k {
            return Err(EvalError::ClassTooSmall {
                label,
                size: ids.len(),
                k,
            });
        }
        ids.shuffle(&mut rng);
        for (j, id) in ids.into_iter().enumerate() {
            assignment.insert(String::from(id), j % k);
        }
    }
    Ok(FoldPlan { k, seed, assignment })
}

/// Builds a vocabulary on the training split, trains one classifier, and
/// scores the test split.
pub fn evaluate_fold(
    train: &[PreparedTweet],
    test: &[PreparedTweet],
    cfg: &FeatureConfig,
    tcfg: &TrainConfig,
) -> Result<ConfusionMatrix, EvalError> {
    let vocab = build_vocabulary(train, cfg)?;
    evaluate_fold_with_vocab(train, test, &vocab, cfg, tcfg)
}

/// [`evaluate_fold`] against a caller-supplied vocabulary (the whole-set
/// compatibility path).
pub fn evaluate_fold_with_vocab(
    train: &[PreparedTweet],
    test: &[PreparedTweet],
    vocab: &Vocabulary,
    cfg: &FeatureConfig,
    tcfg: &TrainConfig,
) -> Result<ConfusionMatrix, EvalError> {
    if test.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let examples: Vec<LabeledExample> = train
        .iter()
        .map(|t| LabeledExample {
            x: vectorize(t, vocab, cfg),
            y: t.label.into(),
        })
        .collect();
    let model = svm::train(&examples, vocab.dim(), tcfg)?;
    let mut matrix = ConfusionMatrix::default();
    for tweet in test {
        let predicted = svm::predict(&model, &vectorize(tweet, vocab, cfg));
        matrix.add(tweet.label, predicted);
    }
    Ok(matrix)
}

/// Micro-pooled aggregation.
pub fn aggregate(matrices: &[ConfusionMatrix]) -> Result<FoldReport, EvalError> {
    aggregate_with(matrices, AggregationMode::MicroPool)
}

/// Aggregation under an explicit mode; the pooled matrix is reported either
/// way.
pub fn aggregate_with(
    matrices: &[ConfusionMatrix],
    mode: AggregationMode,
) -> Result<FoldReport, EvalError> {
    if matrices.is_empty() {
        return Err(EvalError::NoFolds);
    }
    let pooled = ConfusionMatrix::sum(matrices);
    let (favor, against) = match mode {
        AggregationMode::MicroPool => (
            pooled.metrics_for(StanceLabel::Favor),
            pooled.metrics_for(StanceLabel::Against),
        ),
        AggregationMode::PerFoldMean => (
            mean_metrics(matrices, StanceLabel::Favor),
            mean_metrics(matrices, StanceLabel::Against),
        ),
    };
    let average = macro_average(&favor, &against);
    Ok(FoldReport {
        folds: matrices.len(),
        pooled,
        favor,
        against,
        average,
        mode,
    })
}

fn mean_metrics(matrices: &[ConfusionMatrix], class: StanceLabel) -> ClassMetrics {
    let n = matrices.len() as f64;
    let mut sum = ClassMetrics::default();
    for m in matrices {
        let metrics = m.metrics_for(class);
        sum.precision += metrics.precision;
        sum.recall += metrics.recall;
        sum.f1 += metrics.f1;
    }
    ClassMetrics {
        precision: sum.precision / n,
        recall: sum.recall / n,
        f1: sum.f1 / n,
    }
}

/// Per-cell differences (b - a) in percentage points, rows in target order:
/// Favor, Against, Average.
pub fn compare_reports(a: &RunReport, b: &RunReport) -> Result<Vec<DeltaRow>, EvalError> {
    if a.entries.len() != b.entries.len() {
        return Err(EvalError::ShapeMismatch);
    }
    let mut rows = Vec::with_capacity(3 * a.entries.len());
    for (ea, eb) in a.entries.iter().zip(&b.entries) {
        if ea.target.id != eb.target.id {
            return Err(EvalError::ShapeMismatch);
        }
        let cells = [
            ("Favor", &ea.report.favor, &eb.report.favor),
            ("Against", &ea.report.against, &eb.report.against),
            ("Average", &ea.report.average, &eb.report.average),
        ];
        for (row, ma, mb) in cells {
            rows.push(DeltaRow {
                target: eb.target.display_name.clone(),
                row,
                d_precision: (mb.precision - ma.precision) * 100.0,
                d_recall: (mb.recall - ma.recall) * 100.0,
                d_f1: (mb.f1 - ma.f1) * 100.0,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{TargetId, Tweet};
    use crate::text::SpecialFlags;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    fn dataset(favor: usize, against: usize) -> Dataset {
        let mut tweets = Vec::new();
        for i in 0..favor {
            tweets.push(Tweet {
                id: format!("f{i}"),
                text: "lehte".to_string(),
                target: TargetId::Target1.into(),
                label_a: StanceLabel::Favor,
                label_b: None,
            });
        }
        for i in 0..against {
            tweets.push(Tweet {
                id: format!("a{i}"),
                text: "aleyhte".to_string(),
                target: TargetId::Target1.into(),
                label_a: StanceLabel::Against,
                label_b: None,
            });
        }
        Dataset::new("folds", tweets).unwrap()
    }

    fn class_sizes(ds: &Dataset, plan: &FoldPlan) -> Vec<(usize, usize)> {
        let mut sizes = vec![(0usize, 0usize); plan.k];
        for tweet in ds.tweets() {
            let fold = plan.fold_of(&tweet.id).expect("id assigned");
            match tweet.label_a {
                StanceLabel::Favor => sizes[fold].0 += 1,
                StanceLabel::Against => sizes[fold].1 += 1,
            }
        }
        sizes
    }

    #[test]
    fn balanced_folds_for_350_350() {
        let ds = dataset(350, 350);
        let plan = make_folds(&ds, 10, 7).unwrap();
        assert_eq!(plan.assignment.len(), 700);
        for (favor, against) in class_sizes(&ds, &plan) {
            assert_eq!((favor, against), (35, 35));
        }
    }

    #[test]
    fn uneven_classes_spread_by_pigeonhole() {
        let ds = dataset(269, 268);
        let plan = make_folds(&ds, 10, 42).unwrap();
        for (favor, against) in class_sizes(&ds, &plan) {
            assert!((26..=27).contains(&favor));
            assert!((26..=27).contains(&against));
        }
    }

    #[test]
    fn folds_partition_all_ids() {
        let ds = dataset(23, 31);
        let plan = make_folds(&ds, 5, 3).unwrap();
        assert_eq!(plan.assignment.len(), 54);
        for tweet in ds.tweets() {
            assert!(plan.fold_of(&tweet.id).is_some_and(|f| f < 5));
        }
    }

    #[test]
    fn same_seed_same_plan() {
        let ds = dataset(40, 40);
        assert_eq!(make_folds(&ds, 4, 9).unwrap(), make_folds(&ds, 4, 9).unwrap());
    }

    #[test]
    fn degenerate_folds_are_errors() {
        let ds = dataset(20, 20);
        assert_eq!(make_folds(&ds, 1, 0), Err(EvalError::DegenerateK { k: 1 }));
        assert_eq!(
            make_folds(&ds, 25, 0),
            Err(EvalError::ClassTooSmall {
                label: StanceLabel::Favor,
                size: 20,
                k: 25,
            })
        );
    }

    fn prepared(id: &str, label: StanceLabel, tokens: &[&str]) -> PreparedTweet {
        PreparedTweet {
            id: id.to_string(),
            label,
            ngram_tokens: tokens.iter().map(|t| t.to_string()).collect(),
            flags: SpecialFlags::default(),
            ne_terms: Vec::new(),
        }
    }

    fn planted_split() -> (Vec<PreparedTweet>, Vec<PreparedTweet>) {
        let mut train = Vec::new();
        for i in 0..8 {
            train.push(prepared(
                &format!("f{i}"),
                StanceLabel::Favor,
                &["sampiyon", "mac"],
            ));
            train.push(prepared(
                &format!("a{i}"),
                StanceLabel::Against,
                &["rezalet", "mac"],
            ));
        }
        let test = vec![
            prepared("tf", StanceLabel::Favor, &["sampiyon"]),
            prepared("ta", StanceLabel::Against, &["rezalet"]),
        ];
        (train, test)
    }

    #[test]
    fn separable_fixture_classifies_perfectly() {
        let (train, test) = planted_split();
        let matrix =
            evaluate_fold(&train, &test, &FeatureConfig::default(), &TrainConfig::default())
                .unwrap();
        assert_eq!(matrix.false_pos, 0);
        assert_eq!(matrix.false_neg, 0);
        assert_eq!(matrix.total(), 2);
    }

    #[test]
    fn all_favor_predictor_counts_against_as_fp() {
        let (train, _) = planted_split();
        // every test tweet shows only Favor-planted vocabulary
        let test = vec![
            prepared("t0", StanceLabel::Favor, &["sampiyon"]),
            prepared("t1", StanceLabel::Against, &["sampiyon"]),
            prepared("t2", StanceLabel::Against, &["sampiyon"]),
        ];
        let matrix =
            evaluate_fold(&train, &test, &FeatureConfig::default(), &TrainConfig::default())
                .unwrap();
        assert_eq!(matrix.false_neg, 0);
        assert_eq!(matrix.false_pos, 2);
    }

    #[test]
    fn empty_test_split_is_an_error() {
        let (train, _) = planted_split();
        assert!(matches!(
            evaluate_fold(&train, &[], &FeatureConfig::default(), &TrainConfig::default()),
            Err(EvalError::EmptyTestSet)
        ));
    }

    #[test]
    fn confusion_duality() {
        let m = ConfusionMatrix {
            true_pos: 7,
            false_pos: 3,
            false_neg: 2,
            true_neg: 8,
        };
        let favor = m.metrics_for(StanceLabel::Favor);
        let against = m.metrics_for(StanceLabel::Against);
        // fp(Favor) = fn(Against): both are the 3 Against tweets called Favor
        assert_eq!(favor.precision, 7.0 / 10.0);
        assert_eq!(against.recall, 8.0 / 11.0);
        assert_eq!(against.precision, 8.0 / 10.0);
        assert_eq!(favor.recall, 7.0 / 9.0);
    }

    #[test]
    fn micro_pooling_is_count_summation() {
        let a = ConfusionMatrix {
            true_pos: 5,
            false_pos: 1,
            false_neg: 2,
            true_neg: 4,
        };
        let b = ConfusionMatrix {
            true_pos: 3,
            false_pos: 2,
            false_neg: 0,
            true_neg: 5,
        };
        let report = aggregate(&[a, b]).unwrap();
        assert_eq!(report.pooled.true_pos, 8);
        assert_eq!(report.favor.precision, 8.0 / 11.0);
        assert_eq!(report.folds, 2);
    }

    #[test]
    fn identical_folds_pool_to_the_same_report() {
        let m = ConfusionMatrix {
            true_pos: 30,
            false_pos: 5,
            false_neg: 7,
            true_neg: 28,
        };
        let one = aggregate(&[m]).unwrap();
        let many = aggregate(&[m; 10]).unwrap();
        assert_eq!(one.favor, many.favor);
        assert_eq!(one.against, many.against);
        assert_eq!(one.average, many.average);
    }

    #[test]
    fn per_fold_mean_differs_from_pooling_on_uneven_folds() {
        let a = ConfusionMatrix {
            true_pos: 1,
            false_pos: 0,
            false_neg: 3,
            true_neg: 4,
        };
        let b = ConfusionMatrix {
            true_pos: 10,
            false_pos: 0,
            false_neg: 0,
            true_neg: 10,
        };
        let pooled = aggregate_with(&[a, b], AggregationMode::MicroPool).unwrap();
        let meaned = aggregate_with(&[a, b], AggregationMode::PerFoldMean).unwrap();
        assert_eq!(meaned.favor.recall, (0.25 + 1.0) / 2.0);
        assert_eq!(pooled.favor.recall, 11.0 / 14.0);
        assert_ne!(pooled.favor.recall, meaned.favor.recall);
    }

    #[test]
    fn average_row_arithmetic() {
        let favor = ClassMetrics {
            precision: 0.752,
            recall: 0.92,
            f1: 0.828,
        };
        let against = ClassMetrics {
            precision: 0.897,
            recall: 0.697,
            f1: 0.785,
        };
        let average = macro_average(&favor, &against);
        assert_eq!(average.precision, 0.8245);
        assert_eq!(average.f1, 0.8065);
    }

    fn report_with_average_f(f1: f64) -> RunReport {
        let metrics = ClassMetrics {
            precision: 0.5,
            recall: 0.5,
            f1,
        };
        RunReport {
            entries: vec![TargetSummary {
                target: TargetId::Target2.into(),
                report: FoldReport {
                    folds: 10,
                    pooled: ConfusionMatrix::default(),
                    favor: metrics,
                    against: metrics,
                    average: metrics,
                    mode: AggregationMode::MicroPool,
                },
            }],
            config_echo: String::new(),
            k: 10,
            seed: 1,
        }
    }

    #[test]
    fn deltas_in_percentage_points() {
        let a = report_with_average_f(0.795);
        let b = report_with_average_f(0.808);
        let rows = compare_reports(&a, &b).unwrap();
        assert_eq!(rows.len(), 3);
        let average = rows.iter().find(|r| r.row == "Average").unwrap();
        assert!((average.d_f1 - 1.3).abs() < 1e-9);
        assert_eq!(average.d_precision, 0.0);

        let zeros = compare_reports(&a, &a).unwrap();
        assert!(zeros.iter().all(|r| r.d_f1 == 0.0 && r.d_precision == 0.0));
    }

    #[test]
    fn mismatched_reports_are_rejected() {
        let a = report_with_average_f(0.795);
        let mut b = report_with_average_f(0.808);
        b.entries[0].target = TargetId::Target1.into();
        assert_eq!(compare_reports(&a, &b), Err(EvalError::ShapeMismatch));
        b.entries.clear();
        assert_eq!(compare_reports(&a, &b), Err(EvalError::ShapeMismatch));
    }

    #[test]
    fn aggregate_requires_folds() {
        assert_eq!(aggregate(&[]), Err(EvalError::NoFolds));
    }
}
