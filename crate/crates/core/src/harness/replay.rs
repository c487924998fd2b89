//! Recorded model transcripts, stored as one JSON object per line.
//!
//! A record is keyed by (prompt hash, model, temperature). Benchmarks that
//! run purely from these files are deterministic and need no network; live
//! responses are appended here so every published number can be re-derived
//! offline later.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;

/// Hex SHA-256 of the exact rendered prompt text.
pub fn prompt_hash(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub prompt_hash: String,
    pub model: String,
    pub temperature: f64,
    pub response_text: String,
    pub timestamp: String,
}

#[derive(Debug, Default, Clone)]
pub struct ReplayStore {
    records: Vec<ReplayRecord>,
    // temperature keyed by bit pattern: lookups reuse the exact config value
    index: HashMap<(String, String, u64), usize>,
}

impl ReplayStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[ReplayRecord] {
        &self.records
    }

    /// Add one record. An exact duplicate is ignored; a record that reuses
    /// a key with different response text is a corruption error.
    pub fn insert(&mut self, record: ReplayRecord) -> Result<(), HarnessError> {
        let key =
            (record.prompt_hash.clone(), record.model.clone(), record.temperature.to_bits());
        match self.index.get(&key) {
            Some(&at) if self.records[at].response_text == record.response_text => Ok(()),
            Some(_) => Err(HarnessError::BadReplay {
                path: "(in memory)".into(),
                line: 0,
                msg: format!(
                    "conflicting responses for prompt {}.. model {:?} temperature {}",
                    &record.prompt_hash[..12.min(record.prompt_hash.len())],
                    record.model,
                    record.temperature
                ),
            }),
            None => {
                self.index.insert(key, self.records.len());
                self.records.push(record);
                Ok(())
            }
        }
    }

    pub fn get(&self, prompt_hash: &str, model: &str, temperature: f64) -> Option<&ReplayRecord> {
        let key = (prompt_hash.to_string(), model.to_string(), temperature.to_bits());
        self.index.get(&key).map(|&at| &self.records[at])
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let mut store = Self::new();
        for (number, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: ReplayRecord =
                serde_json::from_str(line).map_err(|e| HarnessError::BadReplay {
                    path: path.display().to_string(),
                    line: number + 1,
                    msg: e.to_string(),
                })?;
            store.insert(record).map_err(|e| match e {
                HarnessError::BadReplay { msg, .. } => HarnessError::BadReplay {
                    path: path.display().to_string(),
                    line: number + 1,
                    msg,
                },
                other => other,
            })?;
        }
        Ok(store)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let mut out = Vec::new();
        for record in &self.records {
            serde_json::to_writer(&mut out, record).expect("record serialization cannot fail");
            out.push(b'\n');
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(&out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(hash: &str, model: &str, temp: f64, text: &str) -> ReplayRecord {
        ReplayRecord {
            prompt_hash: hash.into(),
            model: model.into(),
            temperature: temp,
            response_text: text.into(),
            timestamp: "2026-08-16T00:00:00Z".into(),
        }
    }

    #[test]
    fn prompt_hash_is_stable_sha256() {
        assert_eq!(
            prompt_hash("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_ne!(prompt_hash("a"), prompt_hash("b"));
    }

    #[test]
    fn lookup_distinguishes_every_key_component() {
        let mut store = ReplayStore::new();
        store.insert(record("h1", "m1", 1.0, "alpha")).unwrap();
        store.insert(record("h1", "m1", 0.001, "beta")).unwrap();
        store.insert(record("h1", "m2", 1.0, "gamma")).unwrap();
        store.insert(record("h2", "m1", 1.0, "delta")).unwrap();
        assert_eq!(store.get("h1", "m1", 1.0).unwrap().response_text, "alpha");
        assert_eq!(store.get("h1", "m1", 0.001).unwrap().response_text, "beta");
        assert_eq!(store.get("h1", "m2", 1.0).unwrap().response_text, "gamma");
        assert_eq!(store.get("h2", "m1", 1.0).unwrap().response_text, "delta");
        assert!(store.get("h2", "m2", 1.0).is_none());
    }

    #[test]
    fn duplicate_records_are_idempotent_but_conflicts_fail() {
        let mut store = ReplayStore::new();
        store.insert(record("h", "m", 0.7, "same")).unwrap();
        store.insert(record("h", "m", 0.7, "same")).unwrap();
        assert_eq!(store.len(), 1);
        let err = store.insert(record("h", "m", 0.7, "different")).unwrap_err();
        assert!(matches!(err, HarnessError::BadReplay { .. }));
    }

    #[test]
    fn file_round_trip_preserves_records_and_reports_bad_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fixture.jsonl");
        let mut store = ReplayStore::new();
        store.insert(record("h1", "m", 1.0, "first")).unwrap();
        store.insert(record("h2", "m", 0.2, "second\nwith newline")).unwrap();
        store.save(&path).unwrap();

        let loaded = ReplayStore::load(&path).unwrap();
        assert_eq!(loaded.records(), store.records());

        std::fs::write(&path, "{\"not\": \"a record\"}\n").unwrap();
        match ReplayStore::load(&path) {
            Err(HarnessError::BadReplay { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected a replay parse error, got {other:?}"),
        }
    }
}
