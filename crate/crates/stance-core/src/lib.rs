//! Core building blocks for two-class, target-based stance classification of
//! short social-media posts.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`]: stance-annotated tweet collections and dual-annotator
//!   agreement statistics (matching percentage, Cohen's kappa).
//! * [`text`]: tweet tokenization with Turkish-aware case folding, stopword
//!   filtering, and hashtag/link/emoticon detection.
//! * [`features`]: sparse binary feature vectors over unigrams, bigrams,
//!   boolean tweet flags, and named-entity surfaces.
//! * [`ner`]: rule-based gazetteer entity recognition with capitalization
//!   and diacritics relaxation, plus exact-match scoring.
//! * [`svm`]: a soft-margin linear SVM trained from scratch with sequential
//!   minimal optimization.
//! * [`eval`]: stratified k-fold cross-validation and per-class
//!   precision/recall/F reporting.
//!
//! Everything here is pure computation over in-memory data; file formats and
//! the command-line driver live in the companion `stance-tools` crate. The
//! crate is `no_std` (with `alloc`) so the pipeline can be embedded anywhere
//! a heap exists.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod eval;
pub mod features;
pub mod ner;
pub mod rounding;
pub mod svm;
pub mod text;

pub use corpus::{AgreementReport, Dataset, StanceLabel, Target, TargetId, Tweet};
pub use features::{FeatureConfig, PreparedTweet, SparseVector, Vocabulary};
pub use ner::{EntitySpan, EntityType, Gazetteer, NerScore};
pub use svm::{LabeledExample, Sign, SvmModel, TrainConfig};
