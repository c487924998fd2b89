//! Test sequences: the bundled corpus, seeded generators, climber
//! detection, and the two item encodings.

mod embedded_data;

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ctm::CtmTable;
use crate::error::CorpusError;
use crate::metrics::{bdm, preferred_block_size, BdmConfig, RemainderPolicy};

/// SHA-256 of the canonical rendering of the bundled corpus; the loader
/// recomputes it on every call and refuses drifted data.
const EMBEDDED_DIGEST: &str = "6c6dd4cd385c1766423e2c374d6e613995f42ea0f1cc914f7a6927ce325f5c11";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alphabet {
    Binary,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexityClass {
    Low,
    Medium,
    High,
    Climber,
    RandomBinary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Source {
    Embedded,
    Generated { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceItem {
    pub id: String,
    pub class: ComplexityClass,
    pub alphabet: Alphabet,
    pub values: Vec<i64>,
    pub source: Source,
    /// For bundled items that repeat an earlier row verbatim: the id of the
    /// first occurrence. Duplicates are preserved as printed, not removed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duplicate_of: Option<String>,
}

impl SequenceItem {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.values.is_empty() {
            return Err(CorpusError::EmptySequence);
        }
        if self.alphabet == Alphabet::Binary && !self.values.iter().all(|&v| v == 0 || v == 1) {
            return Err(CorpusError::BadPayload(format!(
                "binary item {} holds a non-bit value",
                self.id
            )));
        }
        Ok(())
    }

    /// The item as a plain character string: bits concatenated for binary
    /// items, decimal comma-separated otherwise.
    pub fn render(&self) -> String {
        match self.alphabet {
            Alphabet::Binary => self.values.iter().map(|v| v.to_string()).collect(),
            Alphabet::Integer => {
                let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
                parts.join(",")
            }
        }
    }
}

fn canonical_digest() -> String {
    let mut h = Sha256::new();
    for (name, rows) in [
        ("climbers", &embedded_data::CLIMBERS[..]),
        ("binary", &embedded_data::BINARY_SEQUENCES[..]),
    ] {
        h.update(name.as_bytes());
        h.update(b"\n");
        for row in rows {
            h.update(row.as_bytes());
            h.update(b"\n");
        }
    }
    for (name, rows) in [
        ("numeric-1", &embedded_data::NUMERIC_LOW[..]),
        ("numeric-2", &embedded_data::NUMERIC_MEDIUM[..]),
        ("numeric-3", &embedded_data::NUMERIC_HIGH[..]),
    ] {
        h.update(name.as_bytes());
        h.update(b"\n");
        for row in rows {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            h.update(line.join(",").as_bytes());
            h.update(b"\n");
        }
    }
    let digest = h.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn mark_duplicates(items: &mut [SequenceItem]) {
    let mut seen: BTreeMap<(ComplexityClass, Vec<i64>), String> = BTreeMap::new();
    for item in items {
        let key = (item.class, item.values.clone());
        match seen.get(&key) {
            Some(first) => item.duplicate_of = Some(first.clone()),
            None => {
                seen.insert(key, item.id.clone());
            }
        }
    }
}

/// The bundled corpus: 24 binary climbers, 100 random binary sequences,
/// and 30 numeric sequences per complexity class, in that order.
pub fn load_embedded_corpus() -> Result<Vec<SequenceItem>, CorpusError> {
    let actual = canonical_digest();
    if actual != EMBEDDED_DIGEST {
        return Err(CorpusError::ChecksumMismatch {
            expected: EMBEDDED_DIGEST.into(),
            actual,
        });
    }
    let mut items = Vec::new();
    let bits = |s: &str| -> Vec<i64> {
        s.chars().map(|c| i64::from(c == '1')).collect()
    };
    for (i, row) in embedded_data::CLIMBERS.iter().enumerate() {
        items.push(SequenceItem {
            id: format!("climber-{:02}", i + 1),
            class: ComplexityClass::Climber,
            alphabet: Alphabet::Binary,
            values: bits(row),
            source: Source::Embedded,
            duplicate_of: None,
        });
    }
    for (i, row) in embedded_data::BINARY_SEQUENCES.iter().enumerate() {
        items.push(SequenceItem {
            id: format!("bin-{:03}", i + 1),
            class: ComplexityClass::RandomBinary,
            alphabet: Alphabet::Binary,
            values: bits(row),
            source: Source::Embedded,
            duplicate_of: None,
        });
    }
    for (class, prefix, rows) in [
        (ComplexityClass::Low, "c1", &embedded_data::NUMERIC_LOW[..]),
        (ComplexityClass::Medium, "c2", &embedded_data::NUMERIC_MEDIUM[..]),
        (ComplexityClass::High, "c3", &embedded_data::NUMERIC_HIGH[..]),
    ] {
        for (i, row) in rows.iter().enumerate() {
            items.push(SequenceItem {
                id: format!("{prefix}-{:02}", i + 1),
                class,
                alphabet: Alphabet::Integer,
                values: row.to_vec(),
                source: Source::Embedded,
                duplicate_of: None,
            });
        }
    }
    mark_duplicates(&mut items);
    for item in &items {
        item.validate()?;
    }
    Ok(items)
}

/// `count` binary sequences of `length` i.i.d. fair bits from a seeded
/// deterministic generator.
pub fn generate_random_binary(length: usize, count: usize, seed: u64) -> Vec<SequenceItem> {
    assert!(length >= 1 && count >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| SequenceItem {
            id: format!("rnd-{seed}-{:03}", i + 1),
            class: ComplexityClass::RandomBinary,
            alphabet: Alphabet::Binary,
            values: (0..length).map(|_| i64::from(rng.next_u32() & 1)).collect(),
            source: Source::Generated { seed },
            duplicate_of: None,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Climber detection.
// ---------------------------------------------------------------------------

/// Complexity score used for grouping: the plain table value when the
/// string is covered, tightened by the best block decomposition over all
/// fully covered block sizes. Taking the minimum is sound because every
/// decomposition is an upper bound on the same quantity.
fn grouping_score(s: &str, table: &CtmTable) -> Result<f64, CorpusError> {
    let mut best = table.ctm_complexity(s).unwrap_or(f64::INFINITY);
    for block_size in 1..=preferred_block_size(table) {
        let cfg = BdmConfig { table, block_size, remainder: RemainderPolicy::Keep };
        best = best.min(bdm(s, &cfg)?);
    }
    Ok(best)
}

/// Linear-interpolated percentile of a sorted slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = p * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Return the candidates that are "climbers" under `table`: strings whose
/// length strictly exceeds the interpolated 90th percentile of lengths in
/// their complexity bucket. A candidate's bucket holds itself, every other
/// candidate, and every table key whose grouping score lies within
/// `epsilon` bits of its own. A candidate alone in its bucket is never a
/// climber. The conventional epsilon is 1.0 bit.
pub fn detect_climbers(
    table: &CtmTable,
    candidates: &[String],
    epsilon: f64,
) -> Result<Vec<String>, CorpusError> {
    let scores: Vec<f64> = candidates
        .iter()
        .map(|c| grouping_score(c, table))
        .collect::<Result<_, _>>()?;
    let key_info: Vec<(usize, f64)> = table
        .iter()
        .map(|(k, e)| (k.len(), e.complexity_bits))
        .collect();

    let mut result = Vec::new();
    for (candidate, &score) in candidates.iter().zip(&scores) {
        let mut lengths: Vec<f64> = vec![candidate.len() as f64];
        for (other, &other_score) in candidates.iter().zip(&scores) {
            if !std::ptr::eq(other, candidate) && (other_score - score).abs() <= epsilon {
                lengths.push(other.len() as f64);
            }
        }
        for &(len, bits) in &key_info {
            if (bits - score).abs() <= epsilon {
                lengths.push(len as f64);
            }
        }
        lengths.sort_by(|a, b| a.total_cmp(b));
        if (candidate.len() as f64) > percentile(&lengths, 0.9) {
            result.push(candidate.clone());
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Item encodings.
// ---------------------------------------------------------------------------

pub const ENCODING_ASCII_CSV: &str = "ascii-csv";
pub const ENCODING_FIXED_WIDTH: &str = "fixed-width-binary";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedItem {
    pub item_id: String,
    pub encoding_name: String,
    pub payload: String,
    /// Per-value bit width under fixed-width-binary; absent for ascii-csv.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub width: Option<usize>,
    pub count: usize,
}

/// Render an item under one of the two supported encodings.
///
/// `ascii-csv` is comma-separated decimal. `fixed-width-binary` renders
/// every value in binary at width = bit length of the maximum element (at
/// least 1), concatenated in order; it refuses negative values.
pub fn encode(item: &SequenceItem, encoding_name: &str) -> Result<EncodedItem, CorpusError> {
    item.validate()?;
    let (payload, width) = match encoding_name {
        ENCODING_ASCII_CSV => {
            let parts: Vec<String> = item.values.iter().map(|v| v.to_string()).collect();
            (parts.join(","), None)
        }
        ENCODING_FIXED_WIDTH => {
            if let Some(&v) = item.values.iter().find(|&&v| v < 0) {
                return Err(CorpusError::NegativeValue(v));
            }
            let max = item.values.iter().copied().max().unwrap_or(0);
            let width = (64 - (max as u64).leading_zeros() as usize).max(1);
            let mut payload = String::with_capacity(width * item.values.len());
            for &v in &item.values {
                for bit in (0..width).rev() {
                    payload.push(if (v as u64 >> bit) & 1 == 1 { '1' } else { '0' });
                }
            }
            (payload, Some(width))
        }
        other => return Err(CorpusError::UnknownEncoding(other.into())),
    };
    Ok(EncodedItem {
        item_id: item.id.clone(),
        encoding_name: encoding_name.into(),
        payload,
        width,
        count: item.values.len(),
    })
}

/// Invert [`encode`].
pub fn decode(encoded: &EncodedItem) -> Result<Vec<i64>, CorpusError> {
    match encoded.encoding_name.as_str() {
        ENCODING_ASCII_CSV => encoded
            .payload
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|e| CorpusError::BadPayload(format!("{part:?}: {e}")))
            })
            .collect(),
        ENCODING_FIXED_WIDTH => {
            let width = encoded
                .width
                .ok_or_else(|| CorpusError::BadPayload("missing width".into()))?;
            if width == 0 || encoded.payload.len() != width * encoded.count {
                return Err(CorpusError::BadPayload(format!(
                    "payload length {} does not match {} values at width {width}",
                    encoded.payload.len(),
                    encoded.count
                )));
            }
            encoded
                .payload
                .as_bytes()
                .chunks_exact(width)
                .map(|chunk| {
                    let mut v: i64 = 0;
                    for &b in chunk {
                        match b {
                            b'0' => v <<= 1,
                            b'1' => v = (v << 1) | 1,
                            _ => {
                                return Err(CorpusError::BadPayload(
                                    "non-binary character in payload".into(),
                                ))
                            }
                        }
                    }
                    Ok(v)
                })
                .collect()
        }
        other => Err(CorpusError::UnknownEncoding(other.into())),
    }
}

// ---------------------------------------------------------------------------
// Generated class families.
// ---------------------------------------------------------------------------

/// Seeded open-ended families mirroring the bundled classes: arithmetic
/// and geometric rows for low, second-order recurrences for medium, sorted
/// uniform draws for high. The batch is admitted only if mean block
/// complexity under `cfg` rises strictly low -> medium -> high.
pub fn generate_class_families(
    per_class: usize,
    seed: u64,
    cfg: &BdmConfig,
) -> Result<Vec<SequenceItem>, CorpusError> {
    assert!(per_class >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |lo: i64, hi: i64| -> i64 { rng.random_range(lo..=hi) };
    let mut items = Vec::new();

    for i in 0..per_class {
        let values: Vec<i64> = if draw(0, 1) == 0 {
            let start = draw(1, 9);
            let step = draw(2, 9);
            (0..10).map(|k| start + step * k).collect()
        } else {
            let base = draw(2, 3);
            let scale = draw(1, 3);
            (0..10).map(|k| scale * base.pow(k)).collect()
        };
        items.push(SequenceItem {
            id: format!("gen-low-{seed}-{:02}", i + 1),
            class: ComplexityClass::Low,
            alphabet: Alphabet::Integer,
            values,
            source: Source::Generated { seed },
            duplicate_of: None,
        });
    }
    for i in 0..per_class {
        let (mut a, mut b) = (draw(1, 5), draw(1, 5));
        let (p, q) = match draw(0, 2) {
            0 => (1, 1), // Fibonacci-style
            1 => (2, 1), // Pell-style
            _ => (1, 2),
        };
        let mut values = vec![a, b];
        for _ in 2..10 {
            let next = p * b + q * a;
            a = b;
            b = next;
            values.push(next);
        }
        items.push(SequenceItem {
            id: format!("gen-med-{seed}-{:02}", i + 1),
            class: ComplexityClass::Medium,
            alphabet: Alphabet::Integer,
            values,
            source: Source::Generated { seed },
            duplicate_of: None,
        });
    }
    for i in 0..per_class {
        let mut values: Vec<i64> = (0..10).map(|_| draw(1, 500)).collect();
        values.sort_unstable();
        items.push(SequenceItem {
            id: format!("gen-high-{seed}-{:02}", i + 1),
            class: ComplexityClass::High,
            alphabet: Alphabet::Integer,
            values,
            source: Source::Generated { seed },
            duplicate_of: None,
        });
    }

    let mean_bdm = |class: ComplexityClass| -> Result<f64, CorpusError> {
        let scores: Vec<f64> = items
            .iter()
            .filter(|item| item.class == class)
            .map(|item| {
                let encoded = encode(item, ENCODING_FIXED_WIDTH)?;
                Ok(bdm(&encoded.payload, cfg)?)
            })
            .collect::<Result<_, CorpusError>>()?;
        Ok(scores.iter().sum::<f64>() / scores.len() as f64)
    };
    let (low, medium, high) = (
        mean_bdm(ComplexityClass::Low)?,
        mean_bdm(ComplexityClass::Medium)?,
        mean_bdm(ComplexityClass::High)?,
    );
    if !(low < medium && medium < high) {
        return Err(CorpusError::OrderingViolated(format!(
            "mean block complexity low={low:.3} medium={medium:.3} high={high:.3}"
        )));
    }
    Ok(items)
}
