//! Replay fixtures for the four bundled personas. The ignored regen test
//! rewrites them from the current prompt templates; the checked test
//! fails loudly if the shipped files drift from what the templates
//! render, so a template edit cannot silently orphan the fixtures.

use std::path::PathBuf;

use seqbench_core::corpus::{encode, load_embedded_corpus, ComplexityClass, SequenceItem};
use seqbench_core::harness::{prompt_hash, render_prompt, ReplayRecord, ReplayStore};

const TEMPERATURES: [f64; 2] = [1.0, 0.7];

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture_items() -> Vec<SequenceItem> {
    load_embedded_corpus()
        .unwrap()
        .into_iter()
        .filter(|i| i.class == ComplexityClass::Climber)
        .take(4)
        .collect()
}

fn print_answer(item: &SequenceItem) -> String {
    let listed: Vec<String> = item.values.iter().map(|v| v.to_string()).collect();
    format!("print([{}])", listed.join(", "))
}

/// Answer text per persona. The four fixture items are the first four
/// bundled climbers: two all-zero rows, then single-one rows with the 1
/// at 0-based positions 4 and 5. The duplicate zero rows render the same
/// prompt, so any persona must answer them identically at a given
/// temperature; the mixed persona varies by temperature instead.
fn persona_answer(persona: &str, item: &SequenceItem, temp: f64) -> String {
    match (persona, item.id.as_str()) {
        // closed forms with no literal or positional restatement
        ("ideal", "climber-01" | "climber-02") => "a(n) = 0".into(),
        ("ideal", "climber-03") => "a(n) = (n/5)*(5/n)".into(),
        ("ideal", "climber-04") => "a(n) = (n/6)*(6/n)".into(),
        ("print-only", _) => print_answer(item),
        // no indicator can describe an all-zero row, so the persona's
        // guess at the zero rows is a wrong position set
        ("ordinal-only", "climber-01" | "climber-02") => "ones at {0}".into(),
        ("ordinal-only", "climber-03") => "ones at {4}".into(),
        ("ordinal-only", "climber-04") => "ones at {5}".into(),
        ("mixed", "climber-01" | "climber-02") if temp >= 1.0 => "a(n) = 0".into(),
        ("mixed", "climber-01" | "climber-02") => "*not found*".into(),
        ("mixed", "climber-03") => print_answer(item),
        ("mixed", "climber-04") => "a(n) = n".into(),
        (persona, id) => panic!("no scripted answer for {persona} on {id}"),
    }
}

fn build_store(persona: &str, items: &[SequenceItem]) -> ReplayStore {
    let mut store = ReplayStore::new();
    for item in items {
        let payload = encode(item, "ascii-csv").unwrap().payload;
        let prompt = render_prompt("free-form-formula", &payload, None).unwrap();
        for temp in TEMPERATURES {
            store
                .insert(ReplayRecord {
                    prompt_hash: prompt_hash(&prompt),
                    model: persona.into(),
                    temperature: temp,
                    response_text: persona_answer(persona, item, temp),
                    timestamp: "2026-08-16T00:00:00Z".into(),
                })
                .unwrap();
        }
    }
    store
}

pub const PERSONAS: [&str; 4] = ["ideal", "print-only", "ordinal-only", "mixed"];

/// Rewrite the fixture files. Run explicitly after a deliberate template
/// or corpus change: `cargo test -p seqbench-core --test fixtures -- --ignored`.
#[test]
#[ignore = "regenerates shipped fixtures; run only after a deliberate template change"]
fn regenerate_persona_fixtures() {
    let dir = fixture_dir();
    std::fs::create_dir_all(&dir).unwrap();
    let items = fixture_items();
    for persona in PERSONAS {
        build_store(persona, &items).save(&dir.join(format!("{persona}.jsonl"))).unwrap();
        println!("wrote {persona}.jsonl");
    }
}

#[test]
fn shipped_fixtures_match_current_templates() {
    let items = fixture_items();
    assert_eq!(items.len(), 4, "fixture personas script exactly four items");
    for persona in PERSONAS {
        let path = fixture_dir().join(format!("{persona}.jsonl"));
        let shipped = ReplayStore::load(&path).unwrap_or_else(|e| {
            panic!("{persona}.jsonl unreadable ({e}); regenerate with the ignored test")
        });
        let expected = build_store(persona, &items);
        assert_eq!(
            shipped.records(),
            expected.records(),
            "{persona}.jsonl drifted from the current templates; \
             regenerate it deliberately with the ignored test"
        );
    }
}
