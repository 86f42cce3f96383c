//! Toolkit for evaluating gender-inclusive English→Italian translation with
//! neomorphemes on Neo-GATE-format corpora.
//!
//! * [`corpus`] parses and validates corpora of tagged references and
//!   annotation triplets, and computes inter-annotator agreement.
//! * [`paradigm`] defines neomorpheme paradigms (Asterisk, Schwa, or any
//!   user mapping) and adapts tagged references to them.
//! * [`evaluator`] tokenizes hypotheses and computes coverage (COV),
//!   accuracy (ACC), coverage-weighted accuracy (CWA) and mis-generation
//!   (MIS).
//! * [`promptkit`] builds zero-shot, direct, binary and ternary chat prompts
//!   and extracts translations from model output.
//! * [`runner`] sends prompts to a chat-completions endpoint with a JSONL
//!   cache.
//! * [`report`] renders metric reports and run manifests.

pub mod corpus;
pub mod evaluator;
pub mod exec;
pub mod paradigm;
pub mod promptkit;
pub mod report;
pub mod runner;

pub use corpus::{parse_corpus, Corpus, CorpusStats, Entry, Triplet};
pub use evaluator::{compute_metrics, MetricReport};
pub use exec::Execution;
pub use paradigm::{TagsetDefinition, TagsetMapping};
