//! Built tables must reproduce independently computed reference tables.
//!
//! The fixtures under `tests/data/` were produced by two brute-force
//! enumerators written separately from this crate (one in Python, one in
//! C). Each row is `string,count,complexity_bits`, sorted by (length,
//! lexicographic). Counts must match exactly; complexities to 1e-12.

use seqbench_core::{build_table, BuildOptions};

fn check_against_reference(states: u32, budget: u32, fixture: &str) {
    let table = build_table(&BuildOptions::new(states, budget)).unwrap();
    let raw = std::fs::read_to_string(format!("tests/data/{fixture}")).unwrap();
    let mut rows = 0usize;
    for line in raw.lines() {
        let mut parts = line.split(',');
        let key = parts.next().unwrap();
        let count: u64 = parts.next().unwrap().parse().unwrap();
        let bits: f64 = parts.next().unwrap().parse().unwrap();
        let entry = table
            .entry(key)
            .unwrap_or_else(|| panic!("{key} missing from built table"));
        assert_eq!(entry.count, count, "count for {key}");
        assert!(
            (entry.complexity_bits - bits).abs() <= 1e-12,
            "complexity for {key}: built {} reference {bits}",
            entry.complexity_bits
        );
        rows += 1;
    }
    assert_eq!(table.len(), rows, "built table has extra keys");
}

#[test]
fn two_state_table_matches_reference() {
    check_against_reference(2, 6, "reference_2_2.csv");
}

#[test]
fn three_state_table_matches_reference() {
    check_against_reference(3, 21, "reference_3_2.csv");
}

#[test]
fn three_state_regular_strings_sit_below_their_length_group() {
    let table = build_table(&BuildOptions::new(3, 21)).unwrap();

    // The fully repetitive and the fully alternating strings cost fewer
    // bits than the median of the table keys of their own length.
    for (probe, len) in [("00000", 5), ("0101010", 7)] {
        let mut group: Vec<f64> = table
            .iter()
            .filter(|(k, _)| k.len() == len)
            .map(|(_, e)| e.complexity_bits)
            .collect();
        group.sort_by(|a, b| a.total_cmp(b));
        let median = group[group.len() / 2];
        let k = table.ctm_complexity(probe).unwrap();
        assert!(k < median, "{probe}: {k} not below median {median}");
    }

    // Longer alternations outgrow this table: a miss, not a value.
    assert_eq!(table.ctm_complexity("010101"), None);
    assert_eq!(table.ctm_complexity("0101010101"), None);
}
