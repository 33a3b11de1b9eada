//! Text rendering for agreement, cross-validation, recognizer-evaluation,
//! and comparison results. All output is deterministic: same inputs, same
//! bytes.

use stance_core::corpus::{AgreementReport, StanceLabel, TargetId};
use stance_core::eval::{DeltaRow, RunReport};
use stance_core::ner::NerScore;
use stance_core::rounding::{format_decimal, format_percent, RoundingMode};

/// Observed agreement and p_e print at two decimals, kappa at one; kappa is
/// a coefficient but is conventionally quoted as a percentage.
pub fn render_agreement(report: &AgreementReport, mode: RoundingMode) -> String {
    let mut out = String::new();
    out.push_str(&format!("n_total {}\n", report.n_total));
    out.push_str(&format!("n_match {}\n", report.n_match));
    out.push_str(&format!("p_o {}%\n", format_percent(report.p_o, 2, mode)));
    out.push_str(&format!("p_e {}%\n", format_percent(report.p_e, 2, mode)));
    out.push_str(&format!("kappa {}%\n", format_percent(report.kappa, 1, mode)));
    out
}

fn percent_cell(fraction: f64, mode: RoundingMode) -> String {
    format_percent(fraction, 1, mode)
}

/// The cross-validation table: a config echo, then one aligned row per
/// target and class with the macro Average row last.
pub fn render_run_report(run: &RunReport, mode: RoundingMode) -> String {
    let mut out = String::new();
    out.push_str(&format!("config: {}\n", run.config_echo));
    out.push_str(&format!("folds: {}  seed: {}\n\n", run.k, run.seed));
    out.push_str(&format!(
        "{:<10}  {:<8}  {:>6}  {:>6}  {:>6}\n",
        "Target", "Class", "P", "R", "F"
    ));
    for entry in &run.entries {
        let rows = [
            ("Favor", &entry.report.favor),
            ("Against", &entry.report.against),
            ("Average", &entry.report.average),
        ];
        for (class, metrics) in rows {
            out.push_str(&format!(
                "{:<10}  {:<8}  {:>6}  {:>6}  {:>6}\n",
                entry.target.display_name,
                class,
                percent_cell(metrics.precision, mode),
                percent_cell(metrics.recall, mode),
                percent_cell(metrics.f1, mode),
            ));
        }
    }
    out
}

/// The machine-readable variant: `target,class,precision,recall,f1` with the
/// same one-decimal percentages as the table.
pub fn run_report_csv(run: &RunReport, mode: RoundingMode) -> String {
    let mut out = String::from("target,class,precision,recall,f1\n");
    for entry in &run.entries {
        let rows = [
            ("FAVOR", &entry.report.favor),
            ("AGAINST", &entry.report.against),
            ("AVERAGE", &entry.report.average),
        ];
        for (class, metrics) in rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                entry.target.id.as_token(),
                class,
                percent_cell(metrics.precision, mode),
                percent_cell(metrics.recall, mode),
                percent_cell(metrics.f1, mode),
            ));
        }
    }
    out
}

/// One recognizer-evaluation row: a (target, stance) cell or the overall
/// pool.
#[derive(Debug, Clone, PartialEq)]
pub struct NerReportRow {
    pub target: TargetId,
    pub stance: StanceLabel,
    pub score: NerScore,
}

/// Per-cell scores plus the micro-pooled overall row.
pub fn render_ner_report(rows: &[NerReportRow], overall: &NerScore, mode: RoundingMode) -> String {
    let mut out = format!(
        "{:<10}  {:<8}  {:>4}  {:>4}  {:>4}  {:>6}  {:>6}  {:>6}\n",
        "Target", "Stance", "TP", "FP", "FN", "P", "R", "F"
    );
    let mut push_row = |target: &str, stance: &str, score: &NerScore| {
        out.push_str(&format!(
            "{:<10}  {:<8}  {:>4}  {:>4}  {:>4}  {:>6}  {:>6}  {:>6}\n",
            target,
            stance,
            score.true_pos,
            score.false_pos,
            score.false_neg,
            percent_cell(score.precision, mode),
            percent_cell(score.recall, mode),
            percent_cell(score.f1, mode),
        ));
    };
    for row in rows {
        let target = stance_core::corpus::Target::from(row.target);
        push_row(&target.display_name, row.stance.display_name(), &row.score);
    }
    push_row("Overall", "", overall);
    out
}

/// Metric differences in percentage points, sign always shown.
pub fn render_delta_table(rows: &[DeltaRow], mode: RoundingMode) -> String {
    let signed = |pp: f64| {
        let text = format_decimal(pp, 1, mode);
        if text.starts_with('-') {
            text
        } else {
            format!("+{text}")
        }
    };
    let mut out = format!(
        "{:<10}  {:<8}  {:>6}  {:>6}  {:>6}\n",
        "Target", "Class", "dP", "dR", "dF"
    );
    for row in rows {
        out.push_str(&format!(
            "{:<10}  {:<8}  {:>6}  {:>6}  {:>6}\n",
            row.target,
            row.row,
            signed(row.d_precision),
            signed(row.d_recall),
            signed(row.d_f1),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use stance_core::eval::{
        AggregationMode, ClassMetrics, ConfusionMatrix, FoldReport, TargetSummary,
    };

    fn sample_run() -> RunReport {
        let favor = ClassMetrics {
            precision: 0.752,
            recall: 0.920,
            f1: 0.828,
        };
        let against = ClassMetrics {
            precision: 0.897,
            recall: 0.697,
            f1: 0.785,
        };
        let average = stance_core::eval::macro_average(&favor, &against);
        RunReport {
            entries: vec![TargetSummary {
                target: TargetId::Target1.into(),
                report: FoldReport {
                    folds: 10,
                    pooled: ConfusionMatrix::default(),
                    favor,
                    against,
                    average,
                    mode: AggregationMode::MicroPool,
                },
            }],
            config_echo: String::from("features=unigram k=10"),
            k: 10,
            seed: 42,
        }
    }

    #[test]
    fn agreement_rendering_matches_published_style() {
        let report = AgreementReport {
            n_total: 700,
            n_match: 686,
            p_o: 686.0 / 700.0,
            p_e: 0.5,
            kappa: 0.96,
        };
        let text = render_agreement(&report, RoundingMode::HalfUp);
        assert!(text.contains("p_o 98.00%"));
        assert!(text.contains("p_e 50.00%"));
        assert!(text.contains("kappa 96.0%"));
    }

    #[test]
    fn run_table_carries_echo_and_one_decimal_cells() {
        let text = render_run_report(&sample_run(), RoundingMode::HalfUp);
        assert!(text.contains("config: features=unigram k=10"));
        assert!(text.contains("folds: 10  seed: 42"));
        assert!(text.contains("75.2"));
        assert!(text.contains("92.0"));
        // 82.45 mean rounds half-up to 82.5
        assert!(text.contains("82.5"));
        let against_line = text.lines().find(|l| l.contains("Against")).unwrap();
        assert!(against_line.contains("89.7") && against_line.contains("78.5"));
    }

    #[test]
    fn average_f_depends_on_the_documented_mode() {
        let up = render_run_report(&sample_run(), RoundingMode::HalfUp);
        let even = render_run_report(&sample_run(), RoundingMode::HalfEven);
        let f_cell = |text: &str| {
            text.lines()
                .find(|l| l.contains("Average"))
                .unwrap()
                .split_whitespace()
                .last()
                .unwrap()
                .to_string()
        };
        // the 80.65 mean renders 80.7 half-up and 80.6 half-even
        assert_eq!(f_cell(&up), "80.7");
        assert_eq!(f_cell(&even), "80.6");
    }

    #[test]
    fn csv_variant_mirrors_the_table() {
        let csv = run_report_csv(&sample_run(), RoundingMode::HalfUp);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "target,class,precision,recall,f1");
        assert_eq!(lines.next().unwrap(), "TARGET1,FAVOR,75.2,92.0,82.8");
        assert_eq!(lines.next().unwrap(), "TARGET1,AGAINST,89.7,69.7,78.5");
        assert_eq!(lines.next().unwrap(), "TARGET1,AVERAGE,82.5,80.9,80.7");
    }

    #[test]
    fn ner_report_has_cells_and_overall() {
        let rows = vec![NerReportRow {
            target: TargetId::Target1,
            stance: StanceLabel::Favor,
            score: NerScore::from_counts(3, 1, 1),
        }];
        let overall = NerScore::from_counts(3, 1, 1);
        let text = render_ner_report(&rows, &overall, RoundingMode::HalfUp);
        assert!(text.contains("Favor"));
        assert!(text.contains("Overall"));
        assert!(text.contains("75.0"));
    }

    #[test]
    fn deltas_always_show_their_sign() {
        let rows = vec![DeltaRow {
            target: String::from("Target-2"),
            row: "Average",
            d_precision: 0.0,
            d_recall: -0.25,
            d_f1: 1.3,
        }];
        let text = render_delta_table(&rows, RoundingMode::HalfUp);
        assert!(text.contains("+0.0"));
        assert!(text.contains("-0.3") || text.contains("-0.2"));
        assert!(text.contains("+1.3"));
    }
}
