//! Benchmark harness: configuration, prompt rendering, response replay,
//! the evaluation loop, and report emission.
//!
//! The harness turns a corpus plus a set of model transports into ranked
//! score cards. Responses come from replay fixtures or from a live
//! dispatcher the caller wires in; the harness itself never opens a
//! connection and never reads credential values, only the names of the
//! environment variables that hold them. Runs are canonically ordered
//! (model, item, ascending temperature), so a replayed run is
//! reproducible byte for byte all the way into the report bundle.

pub mod config;
pub mod prompt;
pub mod replay;
pub mod report;
pub mod run;

pub use config::{
    Budgets, CorpusSelection, Metric, ModelSpec, RetryPolicy, RunConfig, Transport,
    DEFAULT_TEMPERATURES,
};
pub use prompt::{is_refusal, render_prompt, template, PromptTemplate, TEMPLATES};
pub use replay::{prompt_hash, ReplayRecord, ReplayStore};
pub use report::{
    class_ordering_summary, emit_report, item_metrics, ranking_csv, similarity_table,
    ClassOrderingRow, ItemMetrics, ReportBundle, CLASS_ORDER_BDM_BLOCK_SIZE,
    CLASS_ORDER_ENTROPY_GRANULARITY,
};
pub use run::{
    rank_models, run_benchmark, select_corpus, AnswerCategory, BenchmarkOutput, LiveDispatch,
    LiveRequest, RunRecord, TransportAction, TransportAudit, TransportEvent,
};
