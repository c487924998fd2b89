//! Report bundle emission: ranking table, raw records, per-item metric
//! rows, class-ordering summary, prediction similarity tables, and run
//! metadata. All contents are composed in memory before any file is
//! created, and nothing in the bundle depends on wall-clock time, so a
//! replay-driven run always produces a byte-identical bundle.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    encode, load_embedded_corpus, Alphabet, ComplexityClass, SequenceItem, ENCODING_ASCII_CSV,
    ENCODING_FIXED_WIDTH,
};
use crate::ctm::CtmTable;
use crate::error::HarnessError;
use crate::metrics::{
    bdm, deflate_length, lzw_length, preferred_block_size, shannon_entropy, BdmConfig,
    RemainderPolicy, DEFLATE_LEVEL,
};
use crate::predict::{
    bdm_predict_next, digits_string, general_similarity, levenshtein, sort_similarity,
    split_root_target, SplitFraction, PREDICTOR_BLOCK_SIZE,
};

use super::config::RunConfig;
use super::run::{AnswerCategory, BenchmarkOutput, TransportAction};

/// Block size for the class-ordering block-complexity column. At this
/// width the mean rises strictly across the three numeric classes; wide
/// blocks instead get dominated by per-row block diversity and invert the
/// low/medium pair.
pub const CLASS_ORDER_BDM_BLOCK_SIZE: usize = 2;

/// Block length for the class-ordering entropy column, measured over the
/// comma-separated decimal rendering. Single characters are too close to
/// uniform over digit text to separate the classes; digit pairs do.
pub const CLASS_ORDER_ENTROPY_GRANULARITY: usize = 2;

/// The four per-item metric columns: block complexity, block entropy over
/// the decimal rendering, LZW code count, and deflate length, the latter
/// three exactly as defined in [`crate::metrics`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemMetrics {
    pub bdm: f64,
    pub block_entropy: f64,
    pub lzw: usize,
    pub deflate: usize,
}

/// Compute the four class-ordering metrics for one item. Block
/// complexity, LZW, and deflate run over the fixed-width binary payload;
/// entropy runs over the comma-separated decimal payload.
pub fn item_metrics(item: &SequenceItem, table: &CtmTable) -> Result<ItemMetrics, HarnessError> {
    let fwb = encode(item, ENCODING_FIXED_WIDTH)?.payload;
    let csv = encode(item, ENCODING_ASCII_CSV)?.payload;
    let block = CLASS_ORDER_BDM_BLOCK_SIZE.min(preferred_block_size(table));
    let cfg = BdmConfig::new(table, block, RemainderPolicy::Keep)?;
    Ok(ItemMetrics {
        bdm: bdm(&fwb, &cfg)?,
        block_entropy: shannon_entropy(&csv, CLASS_ORDER_ENTROPY_GRANULARITY)?,
        lzw: lzw_length(&fwb),
        deflate: deflate_length(&fwb),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassOrderingRow {
    pub metric: String,
    pub low_mean: f64,
    pub medium_mean: f64,
    pub high_mean: f64,
    pub strictly_increasing: bool,
}

/// Mean of each metric per bundled numeric class, in class order. This is
/// a property of the bundled corpus and the table, not of any particular
/// run, so it is computed over the full numeric corpus every time.
pub fn class_ordering_summary(table: &CtmTable) -> Result<Vec<ClassOrderingRow>, HarnessError> {
    let corpus = load_embedded_corpus()?;
    let mut per_class: BTreeMap<ComplexityClass, Vec<ItemMetrics>> = BTreeMap::new();
    for item in &corpus {
        if matches!(
            item.class,
            ComplexityClass::Low | ComplexityClass::Medium | ComplexityClass::High
        ) {
            per_class.entry(item.class).or_default().push(item_metrics(item, table)?);
        }
    }
    let mean = |class: ComplexityClass, pick: &dyn Fn(&ItemMetrics) -> f64| {
        let rows = &per_class[&class];
        rows.iter().map(|r| pick(r)).sum::<f64>() / rows.len() as f64
    };
    let columns: [(&str, &dyn Fn(&ItemMetrics) -> f64); 4] = [
        ("bdm", &|m| m.bdm),
        ("block-entropy", &|m| m.block_entropy),
        ("lzw", &|m| m.lzw as f64),
        ("deflate", &|m| m.deflate as f64),
    ];
    Ok(columns
        .into_iter()
        .map(|(name, pick)| {
            let low = mean(ComplexityClass::Low, pick);
            let medium = mean(ComplexityClass::Medium, pick);
            let high = mean(ComplexityClass::High, pick);
            ClassOrderingRow {
                metric: name.to_string(),
                low_mean: low,
                medium_mean: medium,
                high_mean: high,
                strictly_increasing: low < medium && medium < high,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EquivalenceReport {
    definition: String,
    /// Fraction of identical-output pairs per model; absent when the model
    /// never produced two executed outputs for any item.
    per_model: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct AuditSummary {
    replay_hits: usize,
    replay_misses: usize,
    live_attempts: usize,
    network_attempted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MetaReport {
    encoding: String,
    metric: String,
    prompt_template: String,
    temperatures: Vec<f64>,
    models: Vec<String>,
    alpha: f64,
    epsilon: f64,
    execution_steps: u64,
    deflate_level: u32,
    record_count: usize,
    expected_records: usize,
    unanswered: usize,
    category_counts: BTreeMap<String, BTreeMap<String, usize>>,
    equivalence: EquivalenceReport,
    audit: AuditSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub ranking_csv: PathBuf,
    pub records_jsonl: PathBuf,
    pub metrics_csv: PathBuf,
    pub metric_ordering_json: PathBuf,
    pub similarity_csv: PathBuf,
    pub meta_json: PathBuf,
}

fn category_name(category: AnswerCategory) -> &'static str {
    match category {
        AnswerCategory::NotFound => "not-found",
        AnswerCategory::Print => "print",
        AnswerCategory::Formula => "formula",
        AnswerCategory::Other => "other",
    }
}

fn equivalence_per_model(output: &BenchmarkOutput) -> BTreeMap<String, Option<f64>> {
    let mut per_model = BTreeMap::new();
    let model_ids: Vec<&str> = output.cards.iter().map(|c| c.model_id.as_str()).collect();
    for model in model_ids {
        let mut identical = 0usize;
        let mut pairs = 0usize;
        for item in &output.items {
            let outputs: Vec<&Vec<i64>> = output
                .records
                .iter()
                .filter(|r| r.model_id == model && r.item_id == item.id)
                .filter_map(|r| r.output.as_ref())
                .collect();
            for i in 0..outputs.len() {
                for j in i + 1..outputs.len() {
                    pairs += 1;
                    if outputs[i] == outputs[j] {
                        identical += 1;
                    }
                }
            }
        }
        let fraction = (pairs > 0).then(|| identical as f64 / pairs as f64);
        per_model.insert(model.to_string(), fraction);
    }
    per_model
}

/// The ranking table as CSV text, one row per card in the given order.
/// Floats print via their shortest round-trip form; a missing positive
/// score prints as an empty field.
pub fn ranking_csv(cards: &[crate::scoring::ScoreCard]) -> String {
    let mut out =
        String::from("id,rho1,rho2,rho3,rho4,delta1,delta2,delta3,phi,phi_positive\n");
    for card in cards {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            card.model_id,
            card.rho[0],
            card.rho[1],
            card.rho[2],
            card.rho[3],
            card.delta[0],
            card.delta[1],
            card.delta[2],
            card.phi,
            card.phi_positive.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}

/// Next-bit prediction quality for every binary item, as CSV text. Each
/// item is split at the four standard fractions; the predictor then fills
/// in the target one bit at a time, feeding its own guesses back in.
pub fn similarity_table(
    items: &[SequenceItem],
    table: &CtmTable,
) -> Result<String, HarnessError> {
    let block = PREDICTOR_BLOCK_SIZE.min(preferred_block_size(table));
    let cfg = BdmConfig::new(table, block, RemainderPolicy::Keep)?;
    let mut out = String::from("id,fraction,sort_similarity,general_similarity,levenshtein\n");
    for item in items {
        if item.alphabet != Alphabet::Binary || item.values.len() < 2 {
            continue;
        }
        for fraction in SplitFraction::ALL {
            let task = split_root_target(item, fraction)?;
            let mut prefix: String = task.root.iter().map(|v| v.to_string()).collect();
            let mut predicted = Vec::with_capacity(task.target.len());
            for _ in 0..task.target.len() {
                let bit = bdm_predict_next(&prefix, &cfg)?;
                prefix.push(if bit == 1 { '1' } else { '0' });
                predicted.push(bit as i64);
            }
            let sort = sort_similarity(&predicted, &task.target);
            let general = general_similarity(&predicted, &task.target);
            let edit = levenshtein(&digits_string(&predicted), &digits_string(&task.target));
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                item.id,
                fraction.as_f64(),
                sort,
                general,
                edit
            ));
        }
    }
    Ok(out)
}

/// Write the full bundle into the configured output directory. Refuses an
/// empty record set before touching the filesystem.
pub fn emit_report(
    output: &BenchmarkOutput,
    cfg: &RunConfig,
    table: &CtmTable,
) -> Result<ReportBundle, HarnessError> {
    if output.records.is_empty() {
        return Err(HarnessError::NoRecords);
    }

    // compose everything first so a late failure leaves no partial bundle
    let ranking = ranking_csv(&output.cards);

    let mut records = String::new();
    for record in &output.records {
        records.push_str(
            &serde_json::to_string(record).expect("record serialization cannot fail"),
        );
        records.push('\n');
    }

    let mut metrics_csv = String::from("id,metric,value\n");
    for item in &output.items {
        let m = item_metrics(item, table)?;
        metrics_csv.push_str(&format!("{},bdm,{}\n", item.id, m.bdm));
        metrics_csv.push_str(&format!("{},block-entropy,{}\n", item.id, m.block_entropy));
        metrics_csv.push_str(&format!("{},lzw,{}\n", item.id, m.lzw));
        metrics_csv.push_str(&format!("{},deflate,{}\n", item.id, m.deflate));
    }

    let ordering = class_ordering_summary(table)?;
    let ordering_json = serde_json::to_string_pretty(&serde_json::json!({
        "conventions": {
            "bdm_block_size": CLASS_ORDER_BDM_BLOCK_SIZE,
            "bdm_rendering": ENCODING_FIXED_WIDTH,
            "entropy_granularity": CLASS_ORDER_ENTROPY_GRANULARITY,
            "entropy_rendering": ENCODING_ASCII_CSV,
            "lzw_rendering": ENCODING_FIXED_WIDTH,
            "deflate_rendering": ENCODING_FIXED_WIDTH,
            "deflate_level": DEFLATE_LEVEL,
        },
        "rows": ordering,
    }))
    .expect("summary serialization cannot fail");

    let similarity = similarity_table(&output.items, table)?;

    let mut category_counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for record in &output.records {
        *category_counts
            .entry(record.model_id.clone())
            .or_default()
            .entry(category_name(record.category).to_string())
            .or_insert(0) += 1;
    }
    let meta = MetaReport {
        encoding: cfg.encoding.clone(),
        metric: serde_json::to_value(cfg.metric)
            .expect("metric name serialization cannot fail")
            .as_str()
            .expect("metric serializes to a string")
            .to_string(),
        prompt_template: cfg.prompt_template.clone(),
        temperatures: {
            let mut t = cfg.temperatures.clone();
            t.sort_by(f64::total_cmp);
            t
        },
        models: output.cards.iter().map(|c| c.model_id.clone()).collect(),
        alpha: cfg.alpha,
        epsilon: cfg.epsilon,
        execution_steps: cfg.budgets.execution_steps,
        deflate_level: DEFLATE_LEVEL,
        record_count: output.records.len(),
        expected_records: cfg.models.len() * output.items.len() * cfg.temperatures.len(),
        unanswered: output.records.iter().filter(|r| r.unanswered).count(),
        category_counts,
        equivalence: EquivalenceReport {
            definition: "identical-executed-output pairs over all pairs of executed answers \
                         for the same item (across temperatures); the denominator is the sum \
                         over items of C(k, 2) with k = executed answers for that item. Items \
                         with fewer than two executed answers contribute no pairs."
                .to_string(),
            per_model: equivalence_per_model(output),
        },
        audit: AuditSummary {
            replay_hits: output.audit.count(TransportAction::ReplayHit),
            replay_misses: output.audit.count(TransportAction::ReplayMiss),
            live_attempts: output.audit.count(TransportAction::LiveAttempt),
            network_attempted: output.audit.network_attempted(),
        },
    };
    let meta_json =
        serde_json::to_string_pretty(&meta).expect("meta serialization cannot fail");

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    let bundle = ReportBundle {
        ranking_csv: dir.join("ranking.csv"),
        records_jsonl: dir.join("records.jsonl"),
        metrics_csv: dir.join("metrics.csv"),
        metric_ordering_json: dir.join("metric-ordering.json"),
        similarity_csv: dir.join("similarity.csv"),
        meta_json: dir.join("meta.json"),
    };
    std::fs::write(&bundle.ranking_csv, ranking)?;
    std::fs::write(&bundle.records_jsonl, records)?;
    std::fs::write(&bundle.metrics_csv, metrics_csv)?;
    std::fs::write(&bundle.metric_ordering_json, ordering_json)?;
    std::fs::write(&bundle.similarity_csv, similarity)?;
    std::fs::write(&bundle.meta_json, meta_json)?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctm::{build_table, BuildOptions};
    use crate::harness::config::{
        Budgets, CorpusSelection, Metric, ModelSpec, Transport,
    };
    use crate::harness::replay::{prompt_hash, ReplayRecord, ReplayStore};
    use crate::harness::run::run_benchmark;
    use crate::harness::prompt::render_prompt;
    use std::path::Path;
    use std::sync::OnceLock;

    fn table22() -> &'static CtmTable {
        static T: OnceLock<CtmTable> = OnceLock::new();
        T.get_or_init(|| build_table(&BuildOptions::new(2, 6)).unwrap())
    }

    fn personas_config(dir: &Path) -> RunConfig {
        let mut cfg = RunConfig {
            corpus: CorpusSelection {
                classes: vec!["climber".into()],
                take_per_class: Some(2),
                generated_per_class: 0,
                seed: 0,
            },
            encoding: "ascii-csv".into(),
            metric: Metric::BdmOutput,
            temperatures: vec![1.0, 0.001],
            prompt_template: "free-form-formula".into(),
            language: None,
            models: Vec::new(),
            budgets: Budgets::default(),
            output_dir: dir.join("out"),
            alpha: 1.0,
            epsilon: 0.001,
        };
        let personas: [(&str, fn(&SequenceItem) -> String); 2] = [
            ("ideal", |_| "a(n) = 0".to_string()),
            ("printer", |item| {
                let parts: Vec<String> =
                    item.values.iter().map(|v| v.to_string()).collect();
                format!("print([{}])", parts.join(", "))
            }),
        ];
        for (id, answer) in personas {
            let mut store = ReplayStore::new();
            let items = crate::harness::run::select_corpus(&cfg, table22()).unwrap();
            for item in &items {
                let payload = encode(item, &cfg.encoding).unwrap().payload;
                let prompt = render_prompt(&cfg.prompt_template, &payload, None).unwrap();
                for &temp in &cfg.temperatures {
                    store
                        .insert(ReplayRecord {
                            prompt_hash: prompt_hash(&prompt),
                            model: id.into(),
                            temperature: temp,
                            response_text: answer(item),
                            timestamp: "2026-08-16T00:00:00Z".into(),
                        })
                        .unwrap();
                }
            }
            let path = dir.join(format!("{id}.jsonl"));
            store.save(&path).unwrap();
            cfg.models.push(ModelSpec {
                id: id.into(),
                transport: Transport::Replay { path },
            });
        }
        cfg
    }

    #[test]
    fn bundle_has_the_fixed_schema_and_the_reference_agent_tops_at_one() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = personas_config(dir.path());
        let output = run_benchmark(&cfg, table22(), None).unwrap();
        let bundle = emit_report(&output, &cfg, table22()).unwrap();

        let ranking = std::fs::read_to_string(&bundle.ranking_csv).unwrap();
        let mut lines = ranking.lines();
        assert_eq!(
            lines.next().unwrap(),
            "id,rho1,rho2,rho3,rho4,delta1,delta2,delta3,phi,phi_positive"
        );
        let top: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(top[0], "ideal");
        assert_eq!(top[8], "1", "correct compressed answers score phi = 1.000 exactly");

        let meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&bundle.meta_json).unwrap()).unwrap();
        assert_eq!(meta["audit"]["network_attempted"], serde_json::json!(false));
        assert_eq!(meta["record_count"], meta["expected_records"]);
        assert_eq!(meta["equivalence"]["per_model"]["printer"], serde_json::json!(1.0));
        assert_eq!(meta["category_counts"]["printer"]["print"], serde_json::json!(4));
        assert_eq!(meta["deflate_level"], serde_json::json!(6));

        // every metrics row parses and covers each selected item four times
        let metrics = std::fs::read_to_string(&bundle.metrics_csv).unwrap();
        let rows: Vec<&str> = metrics.lines().skip(1).collect();
        assert_eq!(rows.len(), output.items.len() * 4);
        for row in rows {
            let fields: Vec<&str> = row.split(',').collect();
            fields[2].parse::<f64>().unwrap();
        }
    }

    #[test]
    fn empty_record_sets_produce_no_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = personas_config(dir.path());
        let output = run_benchmark(&cfg, table22(), None).unwrap();
        let empty = super::super::run::BenchmarkOutput {
            records: Vec::new(),
            ..output
        };
        match emit_report(&empty, &cfg, table22()) {
            Err(HarnessError::NoRecords) => {}
            other => panic!("expected the no-records error, got {other:?}"),
        }
        assert!(!cfg.output_dir.exists(), "no partial bundle may appear");
    }

    #[test]
    fn identical_runs_emit_bit_identical_bundles() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = personas_config(dir.path());
        let output = run_benchmark(&cfg, table22(), None).unwrap();
        let first = emit_report(&output, &cfg, table22()).unwrap();
        let read = |bundle: &ReportBundle| {
            [
                std::fs::read(&bundle.ranking_csv).unwrap(),
                std::fs::read(&bundle.records_jsonl).unwrap(),
                std::fs::read(&bundle.metrics_csv).unwrap(),
                std::fs::read(&bundle.metric_ordering_json).unwrap(),
                std::fs::read(&bundle.similarity_csv).unwrap(),
                std::fs::read(&bundle.meta_json).unwrap(),
            ]
        };
        let first_bytes = read(&first);
        cfg.output_dir = dir.path().join("again");
        let output = run_benchmark(&cfg, table22(), None).unwrap();
        let second = emit_report(&output, &cfg, table22()).unwrap();
        assert_eq!(first_bytes, read(&second));
    }

    #[test]
    fn class_ordering_summary_orders_the_numeric_classes() {
        let rows = class_ordering_summary(table22()).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(
                row.strictly_increasing,
                "{} means {} / {} / {} are not strictly increasing",
                row.metric, row.low_mean, row.medium_mean, row.high_mean
            );
        }
    }

    #[test]
    fn similarity_table_covers_every_binary_item_and_fraction() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = personas_config(dir.path());
        let output = run_benchmark(&cfg, table22(), None).unwrap();
        let bundle = emit_report(&output, &cfg, table22()).unwrap();
        let text = std::fs::read_to_string(&bundle.similarity_csv).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        let binary = output
            .items
            .iter()
            .filter(|i| i.alphabet == Alphabet::Binary)
            .count();
        assert_eq!(rows.len(), binary * 4);
        for row in rows {
            let fields: Vec<&str> = row.split(',').collect();
            let sort: f64 = fields[2].parse().unwrap();
            let general: f64 = fields[3].parse().unwrap();
            assert!((0.0..=1.0).contains(&sort));
            assert!((0.0..=1.0).contains(&general));
            assert!(sort <= general + 1e-12);
        }
    }
}
