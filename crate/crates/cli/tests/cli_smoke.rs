//! Drives the installed binary end to end: build a small table, write a
//! corpus, replay a fixture through `report`, then re-derive the ranking
//! with `score` and the prediction tables with `predict`.

use std::path::Path;
use std::process::Command;

use seqbench_core::corpus::{encode, load_embedded_corpus, ComplexityClass};
use seqbench_core::harness::{prompt_hash, render_prompt, ReplayRecord, ReplayStore};

fn seqbench(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_seqbench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &std::process::Output, what: &str) {
    assert!(
        out.status.success(),
        "{what} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn full_pipeline_runs_offline() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let out = seqbench(&["build-ctm", "--states", "2", "--output", "table.bin"], root);
    assert_ok(&out, "build-ctm");
    assert!(String::from_utf8_lossy(&out.stdout).contains("10000 machines examined"));

    let out = seqbench(
        &[
            "gen-corpus",
            "--output",
            "corpus.json",
            "--random-count",
            "3",
            "--random-length",
            "11",
            "--seed",
            "7",
        ],
        root,
    );
    assert_ok(&out, "gen-corpus");
    let corpus: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("corpus.json")).unwrap()).unwrap();
    let embedded = load_embedded_corpus().unwrap().len();
    assert_eq!(corpus.as_array().unwrap().len(), embedded + 3);

    // replay fixture answering every prompt with a verbatim print
    let items: Vec<_> = load_embedded_corpus()
        .unwrap()
        .into_iter()
        .filter(|i| i.class == ComplexityClass::Climber)
        .take(2)
        .collect();
    let mut store = ReplayStore::new();
    for item in &items {
        let payload = encode(item, "ascii-csv").unwrap().payload;
        let prompt = render_prompt("free-form-formula", &payload, None).unwrap();
        let listed: Vec<String> = item.values.iter().map(|v| v.to_string()).collect();
        for temp in [1.0, 0.001] {
            store
                .insert(ReplayRecord {
                    prompt_hash: prompt_hash(&prompt),
                    model: "printer".into(),
                    temperature: temp,
                    response_text: format!("print([{}])", listed.join(", ")),
                    timestamp: "2026-08-16T00:00:00Z".into(),
                })
                .unwrap();
        }
    }
    store.save(&root.join("printer.jsonl")).unwrap();

    std::fs::write(
        root.join("run.toml"),
        r#"
encoding = "ascii-csv"
metric = "bdm-text"
temperatures = [1.0, 0.001]
prompt_template = "free-form-formula"
output_dir = "out"
alpha = 1.0
epsilon = 0.001

[corpus]
classes = ["climber"]
take_per_class = 2
generated_per_class = 0
seed = 0

[budgets]
execution_steps = 100000
call_timeout_ms = 30000

[[models]]
id = "printer"
transport = "replay"
path = "printer.jsonl"
"#,
    )
    .unwrap();

    let out = seqbench(
        &["report", "--config", "run.toml", "--table", "table.bin"],
        root,
    );
    assert_ok(&out, "report");
    let ranking = std::fs::read_to_string(root.join("out/ranking.csv")).unwrap();
    assert!(ranking.starts_with("id,rho1,rho2,rho3,rho4,delta1,delta2,delta3,phi,phi_positive\n"));
    assert!(ranking.lines().nth(1).unwrap().starts_with("printer,"));
    for file in ["records.jsonl", "metrics.csv", "metric-ordering.json", "similarity.csv", "meta.json", "cards.json", "audit.json"] {
        assert!(root.join("out").join(file).exists(), "{file} missing");
    }
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("out/meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["audit"]["network_attempted"], serde_json::json!(false));

    // the ranking must be re-derivable from the records alone
    let out = seqbench(
        &[
            "score",
            "--records",
            "out/records.jsonl",
            "--table",
            "table.bin",
            "--corpus",
            "corpus.json",
            "--output",
            "rederived.csv",
        ],
        root,
    );
    assert_ok(&out, "score");
    assert_eq!(
        std::fs::read_to_string(root.join("rederived.csv")).unwrap(),
        ranking,
        "score must reproduce the emitted ranking byte for byte"
    );

    let out = seqbench(
        &[
            "predict",
            "--table",
            "table.bin",
            "--corpus",
            "corpus.json",
            "--output",
            "similarity.csv",
        ],
        root,
    );
    assert_ok(&out, "predict");
    let sim = std::fs::read_to_string(root.join("similarity.csv")).unwrap();
    assert!(sim.starts_with("id,fraction,sort_similarity,general_similarity,levenshtein\n"));
    assert!(sim.lines().count() > 1);
}

#[test]
fn evaluate_writes_records_and_cards() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let out = seqbench(&["build-ctm", "--states", "2", "--output", "table.bin"], root);
    assert_ok(&out, "build-ctm");

    // an empty replay store: every cell is a miss, scored unanswered
    ReplayStore::new().save(&root.join("silent.jsonl")).unwrap();
    std::fs::write(
        root.join("run.toml"),
        r#"
temperatures = [1.0]
output_dir = "out"

[corpus]
classes = ["climber"]
take_per_class = 1
generated_per_class = 0
seed = 0

[[models]]
id = "silent"
transport = "replay"
path = "silent.jsonl"
"#,
    )
    .unwrap();
    let out = seqbench(
        &["evaluate", "--config", "run.toml", "--table", "table.bin"],
        root,
    );
    assert_ok(&out, "evaluate");
    assert!(String::from_utf8_lossy(&out.stdout).contains("silent: phi -1.0000"));
    let records = std::fs::read_to_string(root.join("out/records.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(records.lines().next().unwrap()).unwrap();
    assert_eq!(record["unanswered"], serde_json::json!(true));
    let audit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("out/audit.json")).unwrap())
            .unwrap();
    assert_eq!(audit["events"][0]["action"], serde_json::json!("replay-miss"));
}
