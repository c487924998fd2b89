//! Algorithmic-complexity estimation and sequence-benchmark toolkit.
//!
//! The crate has three layers:
//!
//! * complexity estimation: exhaustive small-machine enumeration into
//!   frequency tables ([`ctm`]), and string metrics built on top of them or
//!   standing alone ([`metrics`]);
//! * test material: bundled and generated sequence corpora ([`corpus`]),
//!   plus a mini-language for candidate generating programs
//!   ([`candidate`]);
//! * evaluation: scoring of candidate answers ([`scoring`]), sequence
//!   prediction and betting tools ([`predict`]), and a benchmark harness
//!   with replayable model transcripts ([`harness`]).

pub mod candidate;
pub mod corpus;
pub mod ctm;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod predict;
pub mod scoring;

pub use ctm::{
    build_table, census, default_step_budget, simulate_run, BuildOptions, CtmEntry, CtmTable,
    Machine, OutputKey, RunOutcome,
};
pub use corpus::{
    detect_climbers, encode as encode_item, decode as decode_item, generate_class_families,
    generate_random_binary, load_embedded_corpus, Alphabet, ComplexityClass, EncodedItem,
    SequenceItem, Source,
};
pub use metrics::{bdm, deflate_length, lzw_length, shannon_entropy, BdmConfig, RemainderPolicy};
pub use error::{
    CandidateError, CorpusError, CtmError, HarnessError, MetricError, PredictError, ScoringError,
};
pub use candidate::{evaluate_candidate, CandidateRecord, EvaluationRecord, DEFAULT_STEP_BUDGET};
pub use scoring::{affine_positive, fill_phi_positive, phi, score_model, PhiScores, ScoreCard};
pub use harness::{
    emit_report, run_benchmark, Metric, ModelSpec, ReplayRecord, ReplayStore, ReportBundle,
    RunConfig, RunRecord, Transport,
};
