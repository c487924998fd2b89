//! String complexity and compressibility metrics: table-backed block
//! decomposition, block Shannon entropy, LZW code counts, and deflate
//! length.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use crate::ctm::CtmTable;
use crate::error::MetricError;

/// How the short tail block left over after partitioning is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemainderPolicy {
    /// Score the tail against the table like any other block (default:
    /// silently discarding data biases comparisons between strings).
    Keep,
    /// Ignore the tail.
    Drop,
}

/// Block-decomposition settings over a fixed table.
#[derive(Debug, Clone, Copy)]
pub struct BdmConfig<'a> {
    pub table: &'a CtmTable,
    pub block_size: usize,
    pub remainder: RemainderPolicy,
}

impl<'a> BdmConfig<'a> {
    pub fn new(
        table: &'a CtmTable,
        block_size: usize,
        remainder: RemainderPolicy,
    ) -> Result<Self, MetricError> {
        if block_size == 0 {
            return Err(MetricError::ZeroBlockSize);
        }
        let max_key = table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        if block_size > max_key {
            return Err(MetricError::BlockMiss {
                block: format!("(no key of length {block_size} exists in the table)"),
            });
        }
        Ok(BdmConfig { table, block_size, remainder })
    }

    /// The widest usable configuration for `table`: the largest block size
    /// (at most 12) such that the table covers every binary string of that
    /// length and every shorter length, so neither blocks nor kept
    /// remainders can miss.
    pub fn for_table(table: &'a CtmTable) -> Self {
        BdmConfig {
            table,
            block_size: preferred_block_size(table),
            remainder: RemainderPolicy::Keep,
        }
    }
}

/// Largest length L ≤ 12 with every binary string of every length ≤ L
/// present in the table. The 3-state table gives 5; the 2-state table 3.
pub fn preferred_block_size(table: &CtmTable) -> usize {
    let mut per_len: BTreeMap<usize, u64> = BTreeMap::new();
    for (key, _) in table.iter() {
        *per_len.entry(key.len()).or_insert(0) += 1;
    }
    let mut best = 0;
    for len in 1..=12usize {
        let full = (len < 64) && per_len.get(&len).copied().unwrap_or(0) == 1u64 << len;
        if full {
            best = len;
        } else {
            break;
        }
    }
    best.max(1)
}

fn check_binary(s: &str) -> Result<(), MetricError> {
    if s.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    if !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(MetricError::NotBinary(s.chars().take(32).collect()));
    }
    Ok(())
}

/// Block-decomposition complexity of a binary string in bits.
///
/// The string is cut into non-overlapping `block_size` blocks (tail per
/// [`RemainderPolicy`]) and the result is the sum over DISTINCT blocks `b`
/// of `ctm_complexity(b) + log2(multiplicity(b))`. A block that appears
/// once contributes no correction term. Any block the table does not cover
/// is an error naming the block; no value is fabricated.
pub fn bdm(s: &str, cfg: &BdmConfig) -> Result<f64, MetricError> {
    check_binary(s)?;
    // ordered map: float summation order must not vary between runs
    let mut multiplicity: BTreeMap<&str, u64> = BTreeMap::new();
    let mut chunks = s.as_bytes().chunks_exact(cfg.block_size);
    for block in chunks.by_ref() {
        *multiplicity.entry(std::str::from_utf8(block).unwrap()).or_insert(0) += 1;
    }
    let tail = chunks.remainder();
    if !tail.is_empty() && cfg.remainder == RemainderPolicy::Keep {
        *multiplicity.entry(std::str::from_utf8(tail).unwrap()).or_insert(0) += 1;
    }
    let mut bits = 0.0;
    for (block, count) in multiplicity {
        let k = cfg.table.ctm_complexity(block).ok_or_else(|| MetricError::BlockMiss {
            block: block.to_string(),
        })?;
        bits += k + (count as f64).log2();
    }
    Ok(bits)
}

/// Empirical Shannon entropy of the non-overlapping `granularity`-sized
/// block distribution, in bits per block. A tail shorter than one block is
/// ignored. Any alphabet is accepted.
pub fn shannon_entropy(s: &str, granularity: usize) -> Result<f64, MetricError> {
    if granularity == 0 {
        return Err(MetricError::ZeroBlockSize);
    }
    if s.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let chars: Vec<char> = s.chars().collect();
    if chars.len() < granularity {
        return Err(MetricError::InputTooShort { len: chars.len(), granularity });
    }
    // ordered for the same reason as in bdm: stable summation order
    let mut freq: BTreeMap<&[char], u64> = BTreeMap::new();
    for block in chars.chunks_exact(granularity) {
        *freq.entry(block).or_insert(0) += 1;
    }
    let total: u64 = freq.values().sum();
    let mut h = 0.0;
    for &count in freq.values() {
        let p = count as f64 / total as f64;
        h -= p * p.log2();
    }
    Ok(h.max(0.0))
}

/// Number of codes standard LZW emits for `s`, with the dictionary
/// initialized to the given alphabet. Deterministic; no code widths or
/// dictionary limits apply because only the count is reported.
pub fn lzw_length_over(s: &str, alphabet: &[char]) -> Result<usize, MetricError> {
    let allowed: HashSet<char> = alphabet.iter().copied().collect();
    if let Some(c) = s.chars().find(|c| !allowed.contains(c)) {
        return Err(MetricError::NotBinary(format!("{c} not in the given alphabet")));
    }
    let mut dict: HashSet<String> = alphabet.iter().map(|c| c.to_string()).collect();
    let mut current = String::new();
    let mut codes = 0usize;
    for c in s.chars() {
        current.push(c);
        if !dict.contains(&current) {
            codes += 1;
            dict.insert(std::mem::take(&mut current));
            current.push(c);
        }
    }
    if !current.is_empty() {
        codes += 1;
    }
    Ok(codes)
}

/// [`lzw_length_over`] with the dictionary initialized to the distinct
/// characters of `s` itself.
pub fn lzw_length(s: &str) -> usize {
    let alphabet: Vec<char> = {
        let mut seen: Vec<char> = s.chars().collect();
        seen.sort_unstable();
        seen.dedup();
        seen
    };
    lzw_length_over(s, &alphabet).expect("own alphabet always covers the input")
}

/// Compression level every deflate measurement uses.
pub const DEFLATE_LEVEL: u32 = 6;

/// Size in bytes of a zlib stream for the empty input at the fixed level:
/// the constant container overhead.
pub const DEFLATE_EMPTY_OVERHEAD: usize = 8;

/// Byte length of `s` compressed as a zlib stream at [`DEFLATE_LEVEL`].
/// Deterministic for a fixed input.
pub fn deflate_length(s: &str) -> usize {
    let mut encoder = flate2::write::ZlibEncoder::new(
        Vec::new(),
        flate2::Compression::new(DEFLATE_LEVEL),
    );
    encoder.write_all(s.as_bytes()).expect("in-memory write cannot fail");
    encoder.finish().expect("in-memory finish cannot fail").len()
}
