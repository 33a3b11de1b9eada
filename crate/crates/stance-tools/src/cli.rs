//! The `stance` command: agreement statistics, cross-validation experiments,
//! recognizer evaluation, and train/predict round trips.
//!
//! Settings resolve as command-line flag > `--config` file entry > built-in
//! default. All commands are deterministic: the same flags and files produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use stance_core::corpus::{self, Dataset, StanceLabel, TargetId, Tweet};
use stance_core::eval::{self, AggregationMode, EvalError, RunReport, TargetSummary};
use stance_core::features::{self, FeatureConfig, NeSource, PreparedTweet, Vocabulary};
use stance_core::ner::{self, EntitySpan, Gazetteer, NerScore, RecognizerOptions};
use stance_core::rounding::RoundingMode;
use stance_core::svm::{self, TrainConfig};
use stance_core::text::{EmoticonLexicon, StopwordList, Tokenizer};

use crate::model_io::{self, SavedModel};
use crate::report::{self, NerReportRow};
use crate::{config, dataset, resources};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Failures sorted by exit code: bad invocations, bad input files, and bugs.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

macro_rules! data_error_from {
    ($($ty:ty),+) => {
        $(impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError::Data(err.to_string())
            }
        })+
    };
}

data_error_from!(
    dataset::DatasetError,
    resources::ResourceError,
    model_io::ModelIoError,
    corpus::CorpusError,
    ner::NerError,
    features::FeatureError,
    io::Error
);

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> Self {
        match err {
            // flag-shaped problems surface before evaluation starts, so a
            // config error here is a bug
            EvalError::Feature(features::FeatureError::NoFamilyEnabled)
            | EvalError::Feature(features::FeatureError::ZeroMinTermFreq)
            | EvalError::Svm(svm::SvmError::BadConfig(_)) => CliError::Internal(err.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<svm::SvmError> for CliError {
    fn from(err: svm::SvmError) -> Self {
        match err {
            svm::SvmError::BadConfig(_) => CliError::Internal(err.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "stance",
    version,
    about = "Stance classification experiments on dual-target tweet corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inter-annotator agreement: matching percentage and Cohen's kappa
    Kappa(KappaArgs),
    /// Stratified k-fold cross-validation of one classifier per target
    Cv(CvArgs),
    /// Score the gazetteer recognizer against gold entity annotations
    NerEval(NerEvalArgs),
    /// Train one classifier and persist the model and vocabulary
    Train(TrainArgs),
    /// Label tweets (one per line) with a persisted model
    Predict(PredictArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Key=value settings file; command-line flags win
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Percentage rounding: half-up or half-even
    #[arg(long, value_name = "MODE")]
    rounding: Option<String>,
}

#[derive(Args)]
struct KappaArgs {
    /// Data set CSV
    #[arg(long, value_name = "PATH")]
    dataset: PathBuf,
    /// Restrict to one target: 1, 2, or both
    #[arg(long, value_name = "SCOPE")]
    target: Option<String>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct FeatureOpts {
    /// Comma list over unigram,bigram,hashtag,link,emo-pos,emo-neg,ne
    #[arg(long, value_name = "LIST")]
    features: Option<String>,
    /// Where named-entity spans come from: gold or auto
    #[arg(long, value_name = "SOURCE")]
    ne_source: Option<String>,
    /// Drop textual terms below this training frequency
    #[arg(long, value_name = "N")]
    min_term_freq: Option<usize>,
    /// Keep original letter case in n-gram terms
    #[arg(long)]
    no_case_fold: bool,
    /// Stopword file, one entry per line
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Emoticon lexicon file, POS/NEG tab-separated lines
    #[arg(long, value_name = "PATH")]
    emoticons: Option<PathBuf>,
}

#[derive(Args)]
struct TrainOpts {
    /// Soft-margin box constraint
    #[arg(long, value_name = "C")]
    c: Option<f64>,
    /// Optimality tolerance for training
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
}

#[derive(Args)]
struct NerOpts {
    /// Gazetteer file, TYPE tab name lines
    #[arg(long, value_name = "PATH")]
    gazetteer: Option<PathBuf>,
    /// Match gazetteer names case-insensitively
    #[arg(long)]
    relax_caps: bool,
    /// Match gazetteer names with diacritics folded away
    #[arg(long)]
    fold_diacritics: bool,
    /// Match names whose suffixes attach without an apostrophe
    #[arg(long)]
    attached_suffixes: bool,
}

#[derive(Args)]
struct CvArgs {
    /// Data set CSV
    #[arg(long, value_name = "PATH")]
    dataset: PathBuf,
    /// Sidecar manifest of declared per-cell counts to validate
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// Gold entity annotations (tweet_id, start, end, TYPE lines)
    #[arg(long, value_name = "PATH")]
    annotations: Option<PathBuf>,
    /// Number of folds
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Shuffle seed for fold assignment
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Classifier scope: 1, 2, or both
    #[arg(long, value_name = "SCOPE")]
    target: Option<String>,
    /// Build the vocabulary on the whole set instead of per training fold
    #[arg(long)]
    whole_set_vocab: bool,
    /// Average per-fold metrics instead of pooling counts
    #[arg(long)]
    per_fold_mean: bool,
    /// Write the text table here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the machine-readable rows here
    #[arg(long, value_name = "PATH")]
    csv_out: Option<PathBuf>,
    #[command(flatten)]
    feature_opts: FeatureOpts,
    #[command(flatten)]
    train_opts: TrainOpts,
    #[command(flatten)]
    ner_opts: NerOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct NerEvalArgs {
    /// Data set CSV
    #[arg(long, value_name = "PATH")]
    dataset: PathBuf,
    /// Gold entity annotations
    #[arg(long, value_name = "PATH")]
    annotations: PathBuf,
    #[command(flatten)]
    ner_opts: NerOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct TrainArgs {
    /// Data set CSV
    #[arg(long, value_name = "PATH")]
    dataset: PathBuf,
    /// Where the model file goes
    #[arg(long, value_name = "PATH")]
    model_out: PathBuf,
    /// Where the vocabulary dump goes
    #[arg(long, value_name = "PATH")]
    vocab_out: PathBuf,
    /// Also write the per-sweep convergence trace
    #[arg(long, value_name = "PATH")]
    trace_out: Option<PathBuf>,
    /// Keep the per-example alphas in the model file
    #[arg(long)]
    alphas: bool,
    /// Gold entity annotations (for ne-source gold)
    #[arg(long, value_name = "PATH")]
    annotations: Option<PathBuf>,
    /// Classifier scope: 1 or 2 (optional when the data set has one target)
    #[arg(long, value_name = "SCOPE")]
    target: Option<String>,
    #[command(flatten)]
    feature_opts: FeatureOpts,
    #[command(flatten)]
    train_opts: TrainOpts,
    #[command(flatten)]
    ner_opts: NerOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct PredictArgs {
    /// Model file written by train
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Vocabulary dump written by train
    #[arg(long, value_name = "PATH")]
    vocab: PathBuf,
    /// Tweets to label, one per line; stdin when omitted
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Stopword file; use the list the model was trained with
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Emoticon lexicon file; use the one the model was trained with
    #[arg(long, value_name = "PATH")]
    emoticons: Option<PathBuf>,
    #[command(flatten)]
    ner_opts: NerOpts,
    #[command(flatten)]
    common: CommonOpts,
}

/// Parses arguments and runs the selected command, translating the outcome
/// into the documented exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            // clap routes help to stdout and errors to stderr
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Kappa(args) => cmd_kappa(args),
        Command::Cv(args) => cmd_cv(args),
        Command::NerEval(args) => cmd_ner_eval(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}

/// The `--config` file contents; empty when no file was given.
struct Overrides(BTreeMap<String, String>);

impl Overrides {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(path) => Ok(Self(
                config::load_config_file(path).map_err(CliError::Usage)?,
            )),
            None => Ok(Self(BTreeMap::new())),
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T>(
        &self,
        key: &str,
        parse: impl FnOnce(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|value| parse(value).map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
            .transpose()
    }

    /// A boolean switch: the flag asserts true, otherwise the file decides.
    fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        Ok(self.parsed(key, config::parse_bool)?.unwrap_or(false))
    }

    fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.get(key).map(PathBuf::from))
    }
}

fn parse_number<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("bad number {value:?}"))
}

fn resolve_rounding(common: &CommonOpts, over: &Overrides) -> Result<RoundingMode, CliError> {
    match &common.rounding {
        Some(token) => config::parse_rounding(token).map_err(CliError::Usage),
        None => Ok(over
            .parsed("rounding", config::parse_rounding)?
            .unwrap_or(RoundingMode::HalfUp)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TargetFilter {
    One(TargetId),
    Both,
}

fn parse_target_filter(token: &str) -> Result<TargetFilter, String> {
    match token {
        "1" => Ok(TargetFilter::One(TargetId::Target1)),
        "2" => Ok(TargetFilter::One(TargetId::Target2)),
        "both" => Ok(TargetFilter::Both),
        other => Err(format!("bad target {other:?}; expected 1, 2, or both")),
    }
}

fn resolve_target_filter(
    flag: &Option<String>,
    over: &Overrides,
) -> Result<TargetFilter, CliError> {
    match flag {
        Some(token) => parse_target_filter(token).map_err(CliError::Usage),
        None => Ok(over
            .parsed("target", parse_target_filter)?
            .unwrap_or(TargetFilter::Both)),
    }
}

/// The targets a run covers: an explicit target must be populated; `both`
/// narrows to the targets the data set actually has.
fn resolve_targets(filter: TargetFilter, ds: &Dataset) -> Result<Vec<TargetId>, CliError> {
    match filter {
        TargetFilter::One(target) => {
            if ds.for_target(target).next().is_none() {
                return Err(CliError::Data(format!(
                    "no tweets for {}",
                    target.as_token()
                )));
            }
            Ok(vec![target])
        }
        TargetFilter::Both => {
            let present: Vec<TargetId> = TargetId::ALL
                .into_iter()
                .filter(|t| ds.for_target(*t).next().is_some())
                .collect();
            if present.is_empty() {
                return Err(CliError::Data(String::from("data set is empty")));
            }
            Ok(present)
        }
    }
}

fn resolve_features(opts: &FeatureOpts, over: &Overrides) -> Result<FeatureConfig, CliError> {
    let mut cfg = match &opts.features {
        Some(list) => config::parse_features(list).map_err(CliError::Usage)?,
        None => over
            .parsed("features", config::parse_features)?
            .unwrap_or_default(),
    };
    cfg.ne_source = match &opts.ne_source {
        Some(token) => config::parse_ne_source(token).map_err(CliError::Usage)?,
        None => over
            .parsed("ne-source", config::parse_ne_source)?
            .unwrap_or(NeSource::Gold),
    };
    cfg.min_term_freq = match opts.min_term_freq {
        Some(value) => value,
        None => over
            .parsed("min-term-freq", parse_number::<usize>)?
            .unwrap_or(1),
    };
    if cfg.min_term_freq == 0 {
        return Err(CliError::Usage(String::from(
            "min-term-freq must be at least 1",
        )));
    }
    Ok(cfg)
}

fn resolve_train_config(opts: &TrainOpts, over: &Overrides) -> Result<TrainConfig, CliError> {
    let mut cfg = TrainConfig::default();
    if let Some(c) = opts.c {
        cfg.c = c;
    } else if let Some(c) = over.parsed("c", parse_number::<f64>)? {
        cfg.c = c;
    }
    if let Some(tol) = opts.tol {
        cfg.kkt_tol = tol;
    } else if let Some(tol) = over.parsed("tol", parse_number::<f64>)? {
        cfg.kkt_tol = tol;
    }
    cfg.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn resolve_recognizer(opts: &NerOpts, over: &Overrides) -> Result<RecognizerOptions, CliError> {
    Ok(RecognizerOptions {
        relax_capitalization: over.switch(opts.relax_caps, "relax-caps")?,
        fold_diacritics: over.switch(opts.fold_diacritics, "fold-diacritics")?,
        attached_suffixes: over.switch(opts.attached_suffixes, "attached-suffixes")?,
    })
}

/// The shared preprocessing stack: tokenizer, stopwords, emoticons, folding.
struct Pipeline {
    tokenizer: Tokenizer,
    stops: StopwordList,
    lexicon: EmoticonLexicon,
    fold_case: bool,
}

impl Pipeline {
    fn build(opts: &FeatureOpts, over: &Overrides) -> Result<Self, CliError> {
        let stops = match over.path(opts.stopwords.clone(), "stopwords") {
            Some(path) => resources::load_stopwords(&path)?,
            None => StopwordList::default(),
        };
        let lexicon = match over.path(opts.emoticons.clone(), "emoticons") {
            Some(path) => resources::load_emoticons(&path)?,
            None => resources::default_emoticons(),
        };
        let fold_case = !over.switch(opts.no_case_fold, "no-case-fold")?;
        Ok(Self {
            tokenizer: Tokenizer::new(&lexicon),
            stops,
            lexicon,
            fold_case,
        })
    }

    fn with_defaults(fold_case: bool) -> Self {
        let lexicon = resources::default_emoticons();
        Self {
            tokenizer: Tokenizer::new(&lexicon),
            stops: StopwordList::default(),
            lexicon,
            fold_case,
        }
    }

    fn prepare(&self, tweet: &Tweet, ne: Option<&NeProvider>) -> Result<PreparedTweet, CliError> {
        let mut prepared = features::prepare(
            tweet,
            &self.tokenizer,
            &self.stops,
            &self.lexicon,
            self.fold_case,
        );
        if let Some(provider) = ne {
            let spans = provider.spans_for(tweet);
            prepared.ne_terms = features::ne_terms(tweet, &spans)?;
        }
        Ok(prepared)
    }

    /// Classification inputs must carry text.
    fn prepare_all(
        &self,
        tweets: &[&Tweet],
        ne: Option<&NeProvider>,
    ) -> Result<Vec<PreparedTweet>, CliError> {
        let mut prepared = Vec::with_capacity(tweets.len());
        for tweet in tweets {
            if tweet.text.is_empty() {
                return Err(CliError::Data(format!(
                    "tweet {:?} has no text; cannot classify",
                    tweet.id
                )));
            }
            prepared.push(self.prepare(tweet, ne)?);
        }
        Ok(prepared)
    }
}

/// Where named-entity spans come from when the NE family is enabled.
enum NeProvider<'a> {
    Gold(&'a BTreeMap<String, Vec<EntitySpan>>),
    Auto {
        gazetteer: &'a Gazetteer,
        options: RecognizerOptions,
    },
}

impl NeProvider<'_> {
    fn spans_for(&self, tweet: &Tweet) -> Vec<EntitySpan> {
        match self {
            NeProvider::Gold(map) => map.get(&tweet.id).cloned().unwrap_or_default(),
            NeProvider::Auto { gazetteer, options } => {
                ner::recognize(&tweet.text, gazetteer, *options)
            }
        }
    }
}

/// Loads annotations or the gazetteer, whichever the NE source needs.
struct NeInputs {
    annotations: Option<BTreeMap<String, Vec<EntitySpan>>>,
    gazetteer: Option<Gazetteer>,
    options: RecognizerOptions,
}

impl NeInputs {
    fn load(
        cfg: &FeatureConfig,
        annotations_path: Option<PathBuf>,
        ner_opts: &NerOpts,
        over: &Overrides,
        ds: &Dataset,
    ) -> Result<Self, CliError> {
        let options = resolve_recognizer(ner_opts, over)?;
        let mut inputs = Self {
            annotations: None,
            gazetteer: None,
            options,
        };
        if !cfg.use_named_entities {
            return Ok(inputs);
        }
        match cfg.ne_source {
            NeSource::Gold => {
                let path = over
                    .path(annotations_path, "annotations")
                    .ok_or_else(|| {
                        CliError::Usage(String::from(
                            "named-entity features with ne-source gold require --annotations",
                        ))
                    })?;
                inputs.annotations = Some(resources::load_annotations(&path, ds)?);
            }
            NeSource::Auto => {
                let path = over.path(ner_opts.gazetteer.clone(), "gazetteer").ok_or_else(|| {
                    CliError::Usage(String::from(
                        "named-entity features with ne-source auto require --gazetteer",
                    ))
                })?;
                inputs.gazetteer = Some(resources::load_gazetteer(&path)?);
            }
        }
        Ok(inputs)
    }

    fn provider(&self) -> Option<NeProvider<'_>> {
        if let Some(map) = &self.annotations {
            return Some(NeProvider::Gold(map));
        }
        self.gazetteer.as_ref().map(|gazetteer| NeProvider::Auto {
            gazetteer,
            options: self.options,
        })
    }
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => Ok(fs::write(path, content).map_err(|e| crate::io_at(path, e))?),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_kappa(args: KappaArgs) -> Result<(), CliError> {
    let over = Overrides::load(args.common.config.as_deref())?;
    let rounding = resolve_rounding(&args.common, &over)?;
    let filter = resolve_target_filter(&args.target, &over)?;
    let ds = dataset::load_dataset(&args.dataset, dataset::DatasetFormat::Csv)?;
    let scoped = match filter {
        TargetFilter::Both => ds,
        TargetFilter::One(target) => Dataset::new(
            format!("{}:{}", ds.version_tag, target.as_token()),
            ds.for_target(target).cloned().collect(),
        )?,
    };
    let report = corpus::agreement_report(&scoped)?;
    print!("{}", report::render_agreement(&report, rounding));
    Ok(())
}

/// Everything a cross-validation run needs beyond the data itself.
struct CvSettings {
    features: FeatureConfig,
    train: TrainConfig,
    k: usize,
    seed: u64,
    whole_set_vocab: bool,
    mode: AggregationMode,
}

/// One target's cross-validation: stratified folds, one model per fold.
fn run_cv_target(
    ds: &Dataset,
    target: TargetId,
    pipeline: &Pipeline,
    provider: Option<&NeProvider>,
    settings: &CvSettings,
) -> Result<TargetSummary, CliError> {
    let tweets: Vec<&Tweet> = ds.for_target(target).collect();
    let prepared = pipeline.prepare_all(&tweets, provider)?;
    let scoped = Dataset::new(
        format!("{}:{}", ds.version_tag, target.as_token()),
        tweets.into_iter().cloned().collect(),
    )?;
    let plan = eval::make_folds(&scoped, settings.k, settings.seed)?;
    let whole_vocab = if settings.whole_set_vocab {
        Some(features::build_vocabulary(&prepared, &settings.features)?)
    } else {
        None
    };
    let mut matrices = Vec::with_capacity(settings.k);
    for fold in 0..settings.k {
        let (test, train): (Vec<PreparedTweet>, Vec<PreparedTweet>) = prepared
            .iter()
            .cloned()
            .partition(|p| plan.fold_of(&p.id) == Some(fold));
        let matrix = match &whole_vocab {
            Some(vocab) => {
                eval::evaluate_fold_with_vocab(&train, &test, vocab, &settings.features, &settings.train)?
            }
            None => eval::evaluate_fold(&train, &test, &settings.features, &settings.train)?,
        };
        matrices.push(matrix);
    }
    Ok(TargetSummary {
        target: target.into(),
        report: eval::aggregate_with(&matrices, settings.mode)?,
    })
}

fn config_echo(settings: &CvSettings, fold_case: bool, rounding: RoundingMode) -> String {
    format!(
        "features={} ne-source={} min-term-freq={} c={} tol={} vocab={} aggregation={} case-fold={} rounding={}",
        config::render_features(&settings.features),
        config::render_ne_source(settings.features.ne_source),
        settings.features.min_term_freq,
        settings.train.c,
        settings.train.kkt_tol,
        if settings.whole_set_vocab { "whole-set" } else { "per-fold" },
        match settings.mode {
            AggregationMode::MicroPool => "micro",
            AggregationMode::PerFoldMean => "per-fold-mean",
        },
        if fold_case { "on" } else { "off" },
        config::render_rounding(rounding),
    )
}

fn cmd_cv(args: CvArgs) -> Result<(), CliError> {
    let over = Overrides::load(args.common.config.as_deref())?;
    let rounding = resolve_rounding(&args.common, &over)?;
    let fcfg = resolve_features(&args.feature_opts, &over)?;
    let tcfg = resolve_train_config(&args.train_opts, &over)?;
    let filter = resolve_target_filter(&args.target, &over)?;
    let k = match args.k {
        Some(k) => k,
        None => over.parsed("k", parse_number::<usize>)?.unwrap_or(10),
    };
    if k < 2 {
        return Err(CliError::Usage(format!("k = {k} leaves no held-out data")));
    }
    let seed = match args.seed {
        Some(seed) => seed,
        None => over.parsed("seed", parse_number::<u64>)?.unwrap_or(42),
    };
    let settings = CvSettings {
        features: fcfg,
        train: tcfg,
        k,
        seed,
        whole_set_vocab: over.switch(args.whole_set_vocab, "whole-set-vocab")?,
        mode: if over.switch(args.per_fold_mean, "per-fold-mean")? {
            AggregationMode::PerFoldMean
        } else {
            AggregationMode::MicroPool
        },
    };

    let ds = dataset::load_dataset(&args.dataset, dataset::DatasetFormat::Csv)?;
    if let Some(path) = &args.manifest {
        dataset::validate_manifest(&ds, &dataset::load_manifest(path)?)?;
    }
    let pipeline = Pipeline::build(&args.feature_opts, &over)?;
    let ne_inputs = NeInputs::load(
        &settings.features,
        args.annotations.clone(),
        &args.ner_opts,
        &over,
        &ds,
    )?;
    let provider = ne_inputs.provider();

    let mut entries = Vec::new();
    for target in resolve_targets(filter, &ds)? {
        entries.push(run_cv_target(&ds, target, &pipeline, provider.as_ref(), &settings)?);
    }
    let run = RunReport {
        entries,
        config_echo: config_echo(&settings, pipeline.fold_case, rounding),
        k,
        seed,
    };
    write_or_print(args.out.as_deref(), &report::render_run_report(&run, rounding))?;
    if let Some(path) = &args.csv_out {
        fs::write(path, report::run_report_csv(&run, rounding)).map_err(|e| crate::io_at(path, e))?;
    }
    Ok(())
}

fn cmd_ner_eval(args: NerEvalArgs) -> Result<(), CliError> {
    let over = Overrides::load(args.common.config.as_deref())?;
    let rounding = resolve_rounding(&args.common, &over)?;
    let options = resolve_recognizer(&args.ner_opts, &over)?;
    let gazetteer_path = over
        .path(args.ner_opts.gazetteer.clone(), "gazetteer")
        .ok_or_else(|| CliError::Usage(String::from("ner-eval requires --gazetteer")))?;

    let ds = dataset::load_dataset(&args.dataset, dataset::DatasetFormat::Csv)?;
    let gazetteer = resources::load_gazetteer(&gazetteer_path)?;
    let gold = resources::load_annotations(&args.annotations, &ds)?;

    let empty: Vec<EntitySpan> = Vec::new();
    let mut cells: BTreeMap<(TargetId, StanceLabel), (usize, usize, usize)> = BTreeMap::new();
    let mut pooled = (0usize, 0usize, 0usize);
    for tweet in ds.tweets() {
        let predicted = ner::recognize(&tweet.text, &gazetteer, options);
        let gold_spans = gold.get(&tweet.id).unwrap_or(&empty);
        let score = ner::score_exact(gold_spans, &predicted)?;
        let cell = cells.entry((tweet.target.id, tweet.label_a)).or_default();
        cell.0 += score.true_pos;
        cell.1 += score.false_pos;
        cell.2 += score.false_neg;
        pooled.0 += score.true_pos;
        pooled.1 += score.false_pos;
        pooled.2 += score.false_neg;
    }

    let rows: Vec<NerReportRow> = cells
        .into_iter()
        .map(|((target, stance), (tp, fp, fn_))| NerReportRow {
            target,
            stance,
            score: NerScore::from_counts(tp, fp, fn_),
        })
        .collect();
    let overall = NerScore::from_counts(pooled.0, pooled.1, pooled.2);
    print!("{}", report::render_ner_report(&rows, &overall, rounding));
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    let over = Overrides::load(args.common.config.as_deref())?;
    let fcfg = resolve_features(&args.feature_opts, &over)?;
    let tcfg = resolve_train_config(&args.train_opts, &over)?;
    let filter = resolve_target_filter(&args.target, &over)?;

    let ds = dataset::load_dataset(&args.dataset, dataset::DatasetFormat::Csv)?;
    let targets = resolve_targets(filter, &ds)?;
    let [target] = targets.as_slice() else {
        return Err(CliError::Usage(String::from(
            "the data set spans both targets; train one classifier at a time with --target 1 or --target 2",
        )));
    };
    let pipeline = Pipeline::build(&args.feature_opts, &over)?;
    let ne_inputs = NeInputs::load(&fcfg, args.annotations.clone(), &args.ner_opts, &over, &ds)?;
    let provider = ne_inputs.provider();

    let tweets: Vec<&Tweet> = ds.for_target(*target).collect();
    let prepared = pipeline.prepare_all(&tweets, provider.as_ref())?;
    let vocab = features::build_vocabulary(&prepared, &fcfg)?;
    let examples: Vec<svm::LabeledExample> = prepared
        .iter()
        .map(|t| svm::LabeledExample {
            x: features::vectorize(t, &vocab, &fcfg),
            y: t.label.into(),
        })
        .collect();
    let (model, trace) = svm::train_with_trace(&examples, vocab.dim(), &tcfg)?;
    if !model.converged {
        eprintln!("warning: sweep limit reached before convergence; the model is flagged");
    }

    let sweeps = trace.len();
    let converged = model.converged;
    let saved = SavedModel {
        model,
        features: fcfg,
        fold_case: pipeline.fold_case,
    };
    model_io::save_model(&saved, &args.model_out, args.alphas)?;
    model_io::save_vocabulary(&vocab, &args.vocab_out)?;
    if let Some(path) = &args.trace_out {
        model_io::save_trace(&trace, path)?;
    }
    println!(
        "trained {} on {} examples: dimension {}, sweeps {}, converged {}",
        target.as_token(),
        examples.len(),
        vocab.dim(),
        sweeps,
        converged,
    );
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<(), CliError> {
    let over = Overrides::load(args.common.config.as_deref())?;
    let saved = model_io::load_model(&args.model)?;
    let rows = model_io::load_vocabulary_rows(&args.vocab)?;
    let vocab = Vocabulary::from_dump(&saved.features, rows)?;
    if vocab.dim() != saved.model.dimension {
        return Err(CliError::Data(format!(
            "model dimension {} does not match vocabulary dimension {}",
            saved.model.dimension,
            vocab.dim()
        )));
    }

    let mut pipeline = Pipeline::with_defaults(saved.fold_case);
    if let Some(path) = over.path(args.stopwords.clone(), "stopwords") {
        pipeline.stops = resources::load_stopwords(&path)?;
    }
    if let Some(path) = over.path(args.emoticons.clone(), "emoticons") {
        pipeline.lexicon = resources::load_emoticons(&path)?;
        pipeline.tokenizer = Tokenizer::new(&pipeline.lexicon);
    }

    // raw input lines carry no gold spans, so NE features always come from
    // the recognizer here, whatever the model was trained with
    let gazetteer = if saved.features.use_named_entities {
        let path = over
            .path(args.ner_opts.gazetteer.clone(), "gazetteer")
            .ok_or_else(|| {
                CliError::Usage(String::from(
                    "the model uses named-entity features; provide --gazetteer",
                ))
            })?;
        Some(resources::load_gazetteer(&path)?)
    } else {
        None
    };
    let options = resolve_recognizer(&args.ner_opts, &over)?;
    let provider = gazetteer.as_ref().map(|gazetteer| NeProvider::Auto {
        gazetteer,
        options,
    });

    let content = match &args.input {
        Some(path) => fs::read_to_string(path).map_err(|e| crate::io_at(path, e))?,
        None => {
            let mut buffer = String::new();
            io::Read::read_to_string(&mut io::stdin().lock(), &mut buffer)?;
            buffer
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (number, line) in content.lines().enumerate() {
        let tweet = Tweet {
            id: (number + 1).to_string(),
            text: String::from(line),
            target: TargetId::Target1.into(),
            label_a: StanceLabel::Favor,
            label_b: None,
        };
        let prepared = pipeline.prepare(&tweet, provider.as_ref())?;
        let label = svm::predict(
            &saved.model,
            &features::vectorize(&prepared, &vocab, &saved.features),
        );
        use io::Write;
        writeln!(out, "{}", label.as_token()).map_err(|e| CliError::Data(e.to_string()))?;
    }
    Ok(())
}
