use thiserror::Error;

#[derive(Debug, Error)]
pub enum CtmError {
    #[error("unsupported state count {0}, this enumeration covers 1 through 4 states")]
    UnsupportedStates(u32),
    #[error("step budget {budget} out of range 1..={max}")]
    BudgetOutOfRange { budget: u32, max: u32 },
    #[error(
        "the {states}-state class has {census} machines, above the safety cap {cap}; \
         set allow_large to run it anyway"
    )]
    CensusAboveCap { states: u32, census: u64, cap: u64 },
    #[error("per-run step records unavailable, the table was loaded without a run listing")]
    StepsUnavailable,
    #[error("run records unavailable, build with retain_programs or load a run listing")]
    ProgramsUnavailable,
    #[error("malformed table data: {0}")]
    MalformedTable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("input must be non-empty")]
    EmptyInput,
    #[error("block size must be at least 1")]
    ZeroBlockSize,
    #[error("input length {len} is shorter than granularity {granularity}")]
    InputTooShort { len: usize, granularity: usize },
    #[error("block {block:?} is not covered by the table; no value fabricated")]
    BlockMiss { block: String },
    #[error("input is not a binary string: {0:?}")]
    NotBinary(String),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("bundled corpus data failed its checksum; expected {expected}, computed {actual}")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("fixed-width binary encoding requires non-negative values, found {0}")]
    NegativeValue(i64),
    #[error("unknown encoding {0:?}")]
    UnknownEncoding(String),
    #[error("cannot decode payload: {0}")]
    BadPayload(String),
    #[error("generated families failed the class-ordering check: {0}")]
    OrderingViolated(String),
    #[error("sequence must be non-empty")]
    EmptySequence,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Error)]
pub enum CandidateError {
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("evaluation step budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("recurrence references a({0}) which has no base case")]
    MissingBase(i64),
    #[error("recurrence lag {0} exceeds the supported maximum of 8")]
    LagTooDeep(u64),
    #[error("term indices start at 1, so a(0) and below cannot take a base case")]
    ZeroPosition,
}

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("target complexity must be positive, record {index} has {value}")]
    ZeroTargetComplexity { index: usize, value: f64 },
    #[error("scores must be non-empty")]
    EmptyScores,
    #[error("affine rescale needs alpha > 0 and epsilon > 0")]
    BadAffineParams,
    #[error("class fractions must sum to 1, got {0}")]
    BadRho(f64),
    #[error("malformed evaluation record: {0}")]
    BadRecord(String),
}

#[derive(Debug, Error)]
pub enum PredictError {
    #[error("sequence too short to split: root would be empty")]
    RootEmpty,
    #[error("sequence must be non-empty")]
    EmptySequence,
    #[error("complexity unavailable for prefix {prefix:?}: {source}")]
    ComplexityUnavailable {
        prefix: String,
        source: MetricError,
    },
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown prompt template {0:?}")]
    UnknownTemplate(String),
    #[error("prompt template {template:?} needs a value for slot {slot:?}")]
    MissingSlot { template: String, slot: String },
    #[error("replay file {path:?} line {line}: {msg}")]
    BadReplay { path: String, line: usize, msg: String },
    #[error("transport failure for model {model:?}: {msg}")]
    Transport { model: String, msg: String },
    #[error("no records to report")]
    NoRecords,
    #[error("credential environment variable {0:?} is not set")]
    MissingCredential(String),
    #[error(transparent)]
    Ctm(#[from] CtmError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
