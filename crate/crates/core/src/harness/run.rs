//! End-to-end benchmark execution.
//!
//! One run walks the full model x item x temperature grid: render the
//! prompt, obtain the response (from a replay fixture or a live
//! dispatcher), parse and execute it as a candidate program, classify,
//! measure complexities, and score each model. Records are produced in
//! canonical (model, item, temperature) order, so the walk order can never
//! leak into any artifact. Execution is sequential; callers needing
//! overlap can shard the model list across runs and merge record files.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::candidate::{evaluate_candidate, AnswerKind, EvaluationRecord};
use crate::corpus::{
    encode, generate_class_families, load_embedded_corpus, SequenceItem, ENCODING_FIXED_WIDTH,
};
use crate::ctm::CtmTable;
use crate::error::HarnessError;
use crate::metrics::{bdm, BdmConfig};
use crate::scoring::{fill_phi_positive, score_model, ScoreCard};

use super::config::{Metric, ModelSpec, RunConfig, Transport};
use super::prompt::{is_refusal, render_prompt};
use super::replay::{prompt_hash, ReplayRecord, ReplayStore};

/// Mechanical answer-type breakdown mirroring the transcript review
/// categories: explicit refusals, verbatim prints, executable formulas,
/// and everything else (unparseable, failed, or unanswered).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerCategory {
    NotFound,
    Print,
    Formula,
    Other,
}

/// One cell of the run grid, as written to the record file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model_id: String,
    pub item_id: String,
    pub temperature: f64,
    pub prompt_hash: String,
    /// Absent when no response was obtained at all.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub response_text: Option<String>,
    /// Transport failure or replay miss: scored incorrect, but flagged so
    /// reports can separate "never answered" from "answered wrongly".
    pub unanswered: bool,
    /// An explicit "not found" answer.
    pub refusal: bool,
    pub category: AnswerCategory,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<Vec<i64>>,
    pub eval: EvaluationRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransportAction {
    ReplayHit,
    ReplayMiss,
    LiveAttempt,
    LiveSuccess,
    LiveFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportEvent {
    pub model: String,
    pub action: TransportAction,
    pub detail: String,
}

/// Ordered log of every transport decision. A run whose clients are all
/// replay files must show zero live actions here; tests assert on it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransportAudit {
    pub events: Vec<TransportEvent>,
}

impl TransportAudit {
    fn push(&mut self, model: &str, action: TransportAction, detail: impl Into<String>) {
        self.events.push(TransportEvent { model: model.to_string(), action, detail: detail.into() });
    }

    pub fn network_attempted(&self) -> bool {
        self.events.iter().any(|e| {
            matches!(
                e.action,
                TransportAction::LiveAttempt
                    | TransportAction::LiveSuccess
                    | TransportAction::LiveFailure
            )
        })
    }

    pub fn count(&self, action: TransportAction) -> usize {
        self.events.iter().filter(|e| e.action == action).count()
    }
}

/// One outgoing call, handed to a live dispatcher. The credential is
/// passed as the NAME of the environment variable holding it; this module
/// never reads the secret, so no artifact can embed it.
#[derive(Debug, Clone, PartialEq)]
pub struct LiveRequest {
    pub model_id: String,
    pub endpoint: String,
    pub credential_env: String,
    pub prompt: String,
    pub temperature: f64,
    pub timeout_ms: u64,
}

/// Pluggable transport for http models: given a request, produce the
/// response text or a failure message. The crate ships no network code;
/// binaries wire their own dispatcher in.
pub type LiveDispatch<'a> = dyn Fn(&LiveRequest) -> Result<String, String> + 'a;

#[derive(Debug, Clone)]
pub struct BenchmarkOutput {
    /// Canonical order: model id, then item id, then temperature.
    pub records: Vec<RunRecord>,
    /// Sorted best-first by phi, with positive display scores filled.
    pub cards: Vec<ScoreCard>,
    /// M(D) per item id under the fixed-width-binary encoding.
    pub target_complexity: BTreeMap<String, f64>,
    pub audit: TransportAudit,
    /// Live responses gathered this run, ready to append to a replay file.
    pub live_cache: Vec<ReplayRecord>,
    /// The resolved corpus selection, sorted by id.
    pub items: Vec<SequenceItem>,
}

/// Resolve the configured corpus selection: bundled items of the selected
/// classes (capped per class in bundled order), plus optional generated
/// numeric families.
pub fn select_corpus(
    cfg: &RunConfig,
    table: &CtmTable,
) -> Result<Vec<SequenceItem>, HarnessError> {
    let classes = cfg.corpus.parsed_classes()?;
    let embedded = load_embedded_corpus()?;
    let mut items = Vec::new();
    for &class in &classes {
        let of_class = embedded.iter().filter(|item| item.class == class);
        match cfg.corpus.take_per_class {
            Some(cap) => items.extend(of_class.take(cap).cloned()),
            None => items.extend(of_class.cloned()),
        }
    }
    if cfg.corpus.generated_per_class > 0 {
        let metric_cfg = BdmConfig::for_table(table);
        let generated =
            generate_class_families(cfg.corpus.generated_per_class, cfg.corpus.seed, &metric_cfg)?;
        items.extend(generated.into_iter().filter(|item| classes.contains(&item.class)));
    }
    if items.is_empty() {
        return Err(HarnessError::Config("corpus selection matched no items".into()));
    }
    items.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(items)
}

/// The answer text's bytes as a fixed-width bit string, the same encoding
/// the targets get (width = bit length of the largest byte).
pub fn text_bits(text: &str) -> String {
    let bytes = text.as_bytes();
    let max = bytes.iter().copied().max().unwrap_or(0);
    let width = (8 - max.leading_zeros() as usize).max(1);
    let mut bits = String::with_capacity(bytes.len() * width);
    for &b in bytes {
        for shift in (0..width).rev() {
            bits.push(if (b >> shift) & 1 == 1 { '1' } else { '0' });
        }
    }
    bits
}

fn values_bits(values: &[i64]) -> Option<String> {
    if values.is_empty() || values.iter().any(|&v| v < 0) {
        return None;
    }
    let max = values.iter().copied().max().unwrap_or(0) as u64;
    let width = (64 - max.leading_zeros() as usize).max(1);
    let mut bits = String::with_capacity(values.len() * width);
    for &v in values {
        for shift in (0..width).rev() {
            bits.push(if (v as u64 >> shift) & 1 == 1 { '1' } else { '0' });
        }
    }
    Some(bits)
}

/// M(R): complexity of one answer under the configured metric. Empty or
/// unanswerable material scores 0; only correct-class records feed delta,
/// and those always have real text and output.
fn answer_complexity(
    metric: Metric,
    response_text: &str,
    output: Option<&[i64]>,
    cfg: &BdmConfig,
) -> Result<f64, HarnessError> {
    let bits = match metric {
        Metric::BdmText => text_bits(response_text),
        Metric::BdmOutput => match output.and_then(values_bits) {
            Some(bits) => bits,
            None => text_bits(response_text),
        },
    };
    if bits.is_empty() {
        return Ok(0.0);
    }
    Ok(bdm(&bits, cfg)?)
}

fn epoch_seconds() -> String {
    SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_secs().to_string()
}

fn obtain_response(
    model: &ModelSpec,
    store: Option<&ReplayStore>,
    hash: &str,
    item_id: &str,
    temperature: f64,
    prompt: &str,
    timeout_ms: u64,
    live: Option<&LiveDispatch>,
    audit: &mut TransportAudit,
    live_cache: &mut Vec<ReplayRecord>,
) -> Result<Option<String>, HarnessError> {
    match &model.transport {
        Transport::Replay { .. } => {
            let hit = store.expect("replay stores are preloaded").get(hash, &model.id, temperature);
            match hit {
                Some(record) => {
                    audit.push(&model.id, TransportAction::ReplayHit, item_id);
                    Ok(Some(record.response_text.clone()))
                }
                None => {
                    audit.push(
                        &model.id,
                        TransportAction::ReplayMiss,
                        format!("{item_id} at temperature {temperature}"),
                    );
                    Ok(None)
                }
            }
        }
        Transport::Http { endpoint, credential_env, retry } => {
            let Some(dispatch) = live else {
                audit.push(
                    &model.id,
                    TransportAction::LiveFailure,
                    format!("{item_id}: no live dispatcher wired in"),
                );
                return Ok(None);
            };
            // presence check only; the value stays in the environment
            if std::env::var_os(credential_env).is_none() {
                return Err(HarnessError::MissingCredential(credential_env.clone()));
            }
            let request = LiveRequest {
                model_id: model.id.clone(),
                endpoint: endpoint.clone(),
                credential_env: credential_env.clone(),
                prompt: prompt.to_string(),
                temperature,
                timeout_ms,
            };
            for attempt in 1..=retry.max_attempts {
                audit.push(
                    &model.id,
                    TransportAction::LiveAttempt,
                    format!("{item_id} attempt {attempt}/{}", retry.max_attempts),
                );
                match dispatch(&request) {
                    Ok(text) => {
                        audit.push(&model.id, TransportAction::LiveSuccess, item_id);
                        live_cache.push(ReplayRecord {
                            prompt_hash: hash.to_string(),
                            model: model.id.clone(),
                            temperature,
                            response_text: text.clone(),
                            timestamp: epoch_seconds(),
                        });
                        return Ok(Some(text));
                    }
                    Err(msg) => {
                        audit.push(&model.id, TransportAction::LiveFailure, msg);
                        if attempt < retry.max_attempts && retry.backoff_ms > 0 {
                            std::thread::sleep(std::time::Duration::from_millis(retry.backoff_ms));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Run the whole grid and score every model.
pub fn run_benchmark(
    cfg: &RunConfig,
    table: &CtmTable,
    live: Option<&LiveDispatch>,
) -> Result<BenchmarkOutput, HarnessError> {
    cfg.validate()?;
    let items = select_corpus(cfg, table)?;
    let metric_cfg = BdmConfig::for_table(table);

    let mut target_complexity = BTreeMap::new();
    for item in &items {
        let encoded = encode(item, ENCODING_FIXED_WIDTH)?;
        target_complexity.insert(item.id.clone(), bdm(&encoded.payload, &metric_cfg)?);
    }

    let mut models: Vec<&ModelSpec> = cfg.models.iter().collect();
    models.sort_by(|a, b| a.id.cmp(&b.id));
    let mut temperatures = cfg.temperatures.clone();
    temperatures.sort_by(f64::total_cmp);

    let mut stores: BTreeMap<&str, ReplayStore> = BTreeMap::new();
    for model in &models {
        if let Transport::Replay { path } = &model.transport {
            stores.insert(model.id.as_str(), ReplayStore::load(path)?);
        }
    }

    let mut audit = TransportAudit::default();
    let mut live_cache = Vec::new();
    let mut records = Vec::with_capacity(models.len() * items.len() * temperatures.len());

    for model in &models {
        for item in &items {
            let encoded = encode(item, &cfg.encoding)?;
            let prompt =
                render_prompt(&cfg.prompt_template, &encoded.payload, cfg.language.as_deref())?;
            let hash = prompt_hash(&prompt);
            for &temperature in &temperatures {
                let response = obtain_response(
                    model,
                    stores.get(model.id.as_str()),
                    &hash,
                    &item.id,
                    temperature,
                    &prompt,
                    cfg.budgets.call_timeout_ms,
                    live,
                    &mut audit,
                    &mut live_cache,
                )?;
                let text = response.clone().unwrap_or_default();
                let candidate =
                    evaluate_candidate(&text, item, &model.id, cfg.budgets.execution_steps);
                let complexity = answer_complexity(
                    cfg.metric,
                    &text,
                    candidate.output.as_deref(),
                    &metric_cfg,
                )?;
                let eval = EvaluationRecord {
                    item_id: item.id.clone(),
                    model_id: model.id.clone(),
                    c: candidate.classification.correct,
                    complexity_of_answer: complexity,
                    kind: candidate.classification.kind,
                    aux: candidate.aux.clone(),
                };
                eval.validate()?;
                let refusal = response.as_deref().is_some_and(is_refusal);
                let category = if refusal {
                    AnswerCategory::NotFound
                } else if eval.kind == AnswerKind::Print {
                    AnswerCategory::Print
                } else if candidate.parsed_ok && candidate.output.is_some() {
                    AnswerCategory::Formula
                } else {
                    AnswerCategory::Other
                };
                records.push(RunRecord {
                    model_id: model.id.clone(),
                    item_id: item.id.clone(),
                    temperature,
                    prompt_hash: hash.clone(),
                    unanswered: response.is_none(),
                    refusal,
                    category,
                    output: candidate.output,
                    response_text: response,
                    eval,
                });
            }
        }
    }

    let cards = rank_models(&records, &target_complexity, cfg.alpha, cfg.epsilon)?;

    Ok(BenchmarkOutput { records, cards, target_complexity, audit, live_cache, items })
}

/// Score every model appearing in `records` and rank the cards by phi
/// descending, model id as the tie-break. Also works on records reloaded
/// from a persisted file, so rankings are re-derivable offline.
pub fn rank_models(
    records: &[RunRecord],
    target_complexity: &BTreeMap<String, f64>,
    alpha: f64,
    epsilon: f64,
) -> Result<Vec<ScoreCard>, HarnessError> {
    let model_ids: std::collections::BTreeSet<&str> =
        records.iter().map(|r| r.model_id.as_str()).collect();
    let mut cards = Vec::with_capacity(model_ids.len());
    for model_id in model_ids {
        let evals: Vec<EvaluationRecord> = records
            .iter()
            .filter(|r| r.model_id == model_id)
            .map(|r| r.eval.clone())
            .collect();
        cards.push(score_model(model_id, &evals, target_complexity)?);
    }
    cards.sort_by(|a, b| b.phi.total_cmp(&a.phi).then_with(|| a.model_id.cmp(&b.model_id)));
    fill_phi_positive(&mut cards, alpha, epsilon)?;
    Ok(cards)
}
