//! `seqbench`: build complexity tables, assemble corpora, run benchmark
//! grids from a config file, and re-derive rankings, prediction tables,
//! and full report bundles from persisted records.
//!
//! The binary performs no network calls. Models configured with an http
//! transport are recorded as unanswered unless their responses are
//! already present in a replay fixture; live runs go through the library
//! dispatcher hook so published numbers stay re-derivable offline.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use seqbench_core::corpus::{
    encode, generate_class_families, generate_random_binary, load_embedded_corpus, SequenceItem,
    ENCODING_FIXED_WIDTH,
};
use seqbench_core::ctm::{build_table, census, default_step_budget, BuildOptions, CtmTable};
use seqbench_core::harness::{
    emit_report, rank_models, ranking_csv, run_benchmark, similarity_table, RunConfig, RunRecord,
    Transport,
};
use seqbench_core::metrics::{bdm, BdmConfig};

#[derive(Parser)]
#[command(
    name = "seqbench",
    version,
    about = "Algorithmic-complexity estimation and sequence-benchmark toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a (states, 2) machine class into a complexity table.
    BuildCtm {
        /// Machine states, 1 through 4.
        #[arg(long)]
        states: u32,
        /// Step budget per machine; defaults to the class's halting horizon.
        #[arg(long)]
        budget: Option<u32>,
        /// Where to write the table.
        #[arg(long)]
        output: PathBuf,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        workers: Option<usize>,
        /// Confirm classes above the built-in census safety cap.
        #[arg(long)]
        allow_large: bool,
        /// Also record per-machine runs and write them next to the table.
        #[arg(long)]
        programs: Option<PathBuf>,
    },
    /// Write the test corpus (bundled, generated families, random binary) as JSON.
    GenCorpus {
        #[arg(long)]
        output: PathBuf,
        /// Generated sequences per complexity class family.
        #[arg(long, default_value_t = 0)]
        generated_per_class: usize,
        /// Complexity table, required when generating class families.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Extra uniform random binary sequences.
        #[arg(long, default_value_t = 0)]
        random_count: usize,
        /// Length of each random binary sequence.
        #[arg(long, default_value_t = 11)]
        random_length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the model x item x temperature grid from a config file and
    /// persist records, cards, and the transport audit.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
    /// Recompute the ranking CSV from persisted records.
    Score {
        /// records.jsonl written by evaluate or report.
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        table: PathBuf,
        /// Corpus JSON covering every item in the records.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.001)]
        epsilon: f64,
    },
    /// Run the next-bit predictor over a corpus and write similarity tables.
    Predict {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the grid and emit the full report bundle.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::BuildCtm { states, budget, output, workers, allow_large, programs } => {
            build_ctm(states, budget, &output, workers, allow_large, programs.as_deref())
        }
        Command::GenCorpus {
            output,
            generated_per_class,
            table,
            random_count,
            random_length,
            seed,
        } => gen_corpus(&output, generated_per_class, table.as_deref(), random_count, random_length, seed),
        Command::Evaluate { config, table } => evaluate(&config, &table),
        Command::Score { records, table, corpus, output, alpha, epsilon } => {
            score(&records, &table, &corpus, &output, alpha, epsilon)
        }
        Command::Predict { table, corpus, output } => predict(&table, &corpus, &output),
        Command::Report { config, table } => report(&config, &table),
    }
}

fn load_table(path: &Path) -> anyhow::Result<CtmTable> {
    CtmTable::read_from(path).with_context(|| format!("reading table {}", path.display()))
}

fn load_corpus_file(path: &Path) -> anyhow::Result<Vec<SequenceItem>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading corpus {}", path.display()))?;
    let items: Vec<SequenceItem> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    for item in &items {
        item.validate().with_context(|| format!("corpus item {}", item.id))?;
    }
    Ok(items)
}

fn build_ctm(
    states: u32,
    budget: Option<u32>,
    output: &Path,
    workers: Option<usize>,
    allow_large: bool,
    programs: Option<&Path>,
) -> anyhow::Result<()> {
    let budget = match budget.or_else(|| default_step_budget(states)) {
        Some(b) => b,
        None => bail!("no default step budget for {states} states; pass --budget"),
    };
    let mut opts = BuildOptions::new(states, budget);
    opts.workers = workers;
    opts.allow_large = allow_large;
    opts.retain_programs = programs.is_some();
    let started = Instant::now();
    let table = build_table(&opts)?;
    let elapsed = started.elapsed();
    table.write_to(output)?;
    if let Some(path) = programs {
        table.write_programs_to(path)?;
    }
    let examined = table
        .machines_examined()
        .map(|n| n.to_string())
        .unwrap_or_else(|| "?".to_string());
    println!(
        "({states},2): {examined} machines examined of census {}, {} halting runs, {} distinct outputs, {:.1}s",
        census(states),
        table.total_halting(),
        table.len(),
        elapsed.as_secs_f64()
    );
    println!("table written to {}", output.display());
    Ok(())
}

fn gen_corpus(
    output: &Path,
    generated_per_class: usize,
    table: Option<&Path>,
    random_count: usize,
    random_length: usize,
    seed: u64,
) -> anyhow::Result<()> {
    let mut items = load_embedded_corpus()?;
    if generated_per_class > 0 {
        let Some(table_path) = table else {
            bail!("--generated-per-class needs --table for the class-ordering check");
        };
        let table = load_table(table_path)?;
        let cfg = BdmConfig::for_table(&table);
        items.extend(generate_class_families(generated_per_class, seed, &cfg)?);
    }
    if random_count > 0 {
        items.extend(generate_random_binary(random_length, random_count, seed));
    }
    let json = serde_json::to_string_pretty(&items)?;
    std::fs::write(output, json)?;
    println!("{} items written to {}", items.len(), output.display());
    Ok(())
}

fn warn_on_http_models(cfg: &RunConfig) {
    for model in &cfg.models {
        if let Transport::Http { credential_env, .. } = &model.transport {
            eprintln!(
                "note: model {:?} uses an http endpoint (credential variable {credential_env}); \
                 this binary ships no live client, so its cells will be recorded as unanswered \
                 unless replayed",
                model.id
            );
        }
    }
}

fn write_run_outputs(
    out_dir: &Path,
    output: &seqbench_core::harness::BenchmarkOutput,
) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut records = std::fs::File::create(out_dir.join("records.jsonl"))?;
    for record in &output.records {
        writeln!(records, "{}", serde_json::to_string(record)?)?;
    }
    std::fs::write(
        out_dir.join("cards.json"),
        serde_json::to_string_pretty(&output.cards)?,
    )?;
    std::fs::write(
        out_dir.join("audit.json"),
        serde_json::to_string_pretty(&output.audit)?,
    )?;
    if !output.live_cache.is_empty() {
        let mut cache = std::fs::File::create(out_dir.join("live-cache.jsonl"))?;
        for record in &output.live_cache {
            writeln!(cache, "{}", serde_json::to_string(record)?)?;
        }
    }
    Ok(())
}

fn evaluate(config: &Path, table: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config)?;
    let table = load_table(table)?;
    warn_on_http_models(&cfg);
    let output = run_benchmark(&cfg, &table, None)?;
    write_run_outputs(&cfg.output_dir, &output)?;
    for card in &output.cards {
        println!("{}: phi {:.4}", card.model_id, card.phi);
    }
    println!(
        "{} records written to {}",
        output.records.len(),
        cfg.output_dir.join("records.jsonl").display()
    );
    Ok(())
}

fn target_complexities(
    items: &[SequenceItem],
    table: &CtmTable,
) -> anyhow::Result<BTreeMap<String, f64>> {
    let cfg = BdmConfig::for_table(table);
    let mut map = BTreeMap::new();
    for item in items {
        let payload = encode(item, ENCODING_FIXED_WIDTH)?.payload;
        map.insert(item.id.clone(), bdm(&payload, &cfg)?);
    }
    Ok(map)
}

fn score(
    records_path: &Path,
    table: &Path,
    corpus: &Path,
    output: &Path,
    alpha: f64,
    epsilon: f64,
) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(records_path)
        .with_context(|| format!("reading records {}", records_path.display()))?;
    let mut records = Vec::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(line)
            .with_context(|| format!("{} line {}", records_path.display(), number + 1))?;
        records.push(record);
    }
    if records.is_empty() {
        bail!("{} holds no records", records_path.display());
    }
    let table = load_table(table)?;
    let items = load_corpus_file(corpus)?;
    let targets = target_complexities(&items, &table)?;
    let cards = rank_models(&records, &targets, alpha, epsilon)?;
    std::fs::write(output, ranking_csv(&cards))?;
    println!("{} models ranked into {}", cards.len(), output.display());
    Ok(())
}

fn predict(table: &Path, corpus: &Path, output: &Path) -> anyhow::Result<()> {
    let table = load_table(table)?;
    let items = load_corpus_file(corpus)?;
    let csv = similarity_table(&items, &table)?;
    let rows = csv.lines().count().saturating_sub(1);
    std::fs::write(output, csv)?;
    println!("{rows} prediction rows written to {}", output.display());
    Ok(())
}

fn report(config: &Path, table: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config)?;
    let table = load_table(table)?;
    warn_on_http_models(&cfg);
    let output = run_benchmark(&cfg, &table, None)?;
    let bundle = emit_report(&output, &cfg, &table)?;
    write_run_outputs(&cfg.output_dir, &output)?;
    for path in [
        &bundle.ranking_csv,
        &bundle.records_jsonl,
        &bundle.metrics_csv,
        &bundle.metric_ordering_json,
        &bundle.similarity_csv,
        &bundle.meta_json,
    ] {
        println!("{}", path.display());
    }
    Ok(())
}
