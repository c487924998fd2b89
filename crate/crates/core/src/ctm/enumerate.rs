//! Exhaustive enumeration of the (n,2) class into a frequency table.
//!
//! Work is split into fixed index ranges that are simulated independently
//! and merged with commutative integer addition, so the result is
//! bit-identical for any worker count. Program lists are sorted during
//! finalization for the same reason.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ctm::machine::{census, Machine, OutputKey, RunOutcome, TapeScratch, MAX_STEP_BUDGET};
use crate::ctm::table::{CtmEntry, CtmTable};
use crate::error::CtmError;

/// Classes whose census exceeds this need `allow_large`; at desk scale the
/// 4-state class (about 1.1e10 machines) is an hours-long run even with the
/// orbit reduction, and must be asked for explicitly.
pub const LARGE_CENSUS_THRESHOLD: u64 = 100_000_000;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub states: u32,
    pub step_budget: u32,
    /// `None` uses the process-wide thread pool.
    pub workers: Option<usize>,
    /// Record the runs behind every entry (required for run listings and
    /// Levin probabilities of loaded tables).
    pub retain_programs: bool,
    /// Per-string cap on retained runs; entries that hit it are flagged.
    pub program_cap: Option<usize>,
    /// Opt-in for classes above [`LARGE_CENSUS_THRESHOLD`].
    pub allow_large: bool,
    /// Simulate one representative per reflection orbit and credit the
    /// mirror machine's runs alongside. Produces the identical table with
    /// roughly half the simulations. Defaults on for the 4-state class.
    pub symmetry_reduction: bool,
}

impl BuildOptions {
    pub fn new(states: u32, step_budget: u32) -> Self {
        BuildOptions {
            states,
            step_budget,
            workers: None,
            retain_programs: false,
            program_cap: None,
            allow_large: false,
            symmetry_reduction: states == 4,
        }
    }

    fn validate(&self) -> Result<(), CtmError> {
        if !(1..=4).contains(&self.states) {
            return Err(CtmError::UnsupportedStates(self.states));
        }
        if self.step_budget == 0 || self.step_budget > MAX_STEP_BUDGET {
            return Err(CtmError::BudgetOutOfRange {
                budget: self.step_budget,
                max: MAX_STEP_BUDGET,
            });
        }
        let census = census(self.states);
        if census > LARGE_CENSUS_THRESHOLD && !self.allow_large {
            return Err(CtmError::CensusAboveCap {
                states: self.states,
                census,
                cap: LARGE_CENSUS_THRESHOLD,
            });
        }
        Ok(())
    }
}

#[derive(Default)]
struct Accum {
    count: u64,
    halt_steps: BTreeMap<u32, u64>,
    programs: Vec<u64>,
}

struct ChunkResult {
    map: BTreeMap<OutputKey, Accum>,
    examined: u64,
}

/// Build the table for every machine index in `[lo, hi)`.
fn enumerate_range(opts: &BuildOptions, lo: u64, hi: u64) -> ChunkResult {
    let mut map: BTreeMap<OutputKey, Accum> = BTreeMap::new();
    let mut tape = TapeScratch::default();
    let mut examined = 0u64;
    let credit = |map: &mut BTreeMap<OutputKey, Accum>, key: OutputKey, steps: u32, run: u64| {
        let acc = map.entry(key).or_default();
        acc.count += 1;
        *acc.halt_steps.entry(steps).or_insert(0) += 1;
        if opts.retain_programs {
            acc.programs.push(run);
        }
    };
    for index in lo..hi {
        let machine = Machine::from_index(opts.states, index);
        let mirror_index = if opts.symmetry_reduction {
            let mirror = machine.reflection().index();
            if mirror < index {
                continue; // this orbit is credited from its representative
            }
            Some(mirror)
        } else {
            None
        };
        examined += 1;
        let RunOutcome::Halted { steps, output } = machine.run(opts.step_budget, 0, &mut tape)
        else {
            continue;
        };
        // two-sided census: the blank-0 run of this machine, plus the
        // blank-1 run of its complement twin (same steps, complemented
        // output, by the twin bijection)
        credit(&mut map, output, steps, 2 * index);
        let twin = machine.complement_twin().index();
        credit(&mut map, output.complement(), steps, 2 * twin + 1);
        if let Some(mirror) = mirror_index {
            if mirror != index {
                // the mirror machine's run is this run reflected
                let mirrored = output.reversed();
                credit(&mut map, mirrored, steps, 2 * mirror);
                let mirror_twin = Machine::from_index(opts.states, mirror)
                    .complement_twin()
                    .index();
                credit(&mut map, mirrored.complement(), steps, 2 * mirror_twin + 1);
            }
        }
    }
    ChunkResult { map, examined }
}

fn merge(mut a: ChunkResult, b: ChunkResult) -> ChunkResult {
    for (key, acc) in b.map {
        let dst = a.map.entry(key).or_default();
        dst.count += acc.count;
        for (steps, runs) in acc.halt_steps {
            *dst.halt_steps.entry(steps).or_insert(0) += runs;
        }
        dst.programs.extend(acc.programs);
    }
    a.examined += b.examined;
    a
}

/// Enumerate the whole class and return its frequency table.
pub fn build_table(opts: &BuildOptions) -> Result<CtmTable, CtmError> {
    opts.validate()?;
    let census = census(opts.states);
    let ranges: Vec<(u64, u64)> = (0..census)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK).min(census)))
        .collect();

    let run = || {
        ranges
            .par_iter()
            .map(|&(lo, hi)| enumerate_range(opts, lo, hi))
            .reduce(
                || ChunkResult { map: BTreeMap::new(), examined: 0 },
                merge,
            )
    };
    let result = match opts.workers {
        None => run(),
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| CtmError::MalformedTable(format!("thread pool: {e}")))?
            .install(run),
    };

    if result.map.is_empty() {
        return Err(CtmError::MalformedTable(
            "enumeration produced no halting runs".into(),
        ));
    }

    let total: u64 = result.map.values().map(|a| a.count).sum();
    let entries: BTreeMap<OutputKey, CtmEntry> = result
        .map
        .into_iter()
        .map(|(key, mut acc)| {
            acc.programs.sort_unstable();
            let mut truncated = false;
            if let Some(cap) = opts.program_cap {
                if acc.programs.len() > cap {
                    acc.programs.truncate(cap);
                    truncated = true;
                }
            }
            let entry = CtmEntry {
                count: acc.count,
                complexity_bits: -((acc.count as f64 / total as f64).log2()),
                halt_steps: acc.halt_steps,
                programs: acc.programs,
                programs_truncated: truncated,
            };
            (key, entry)
        })
        .collect();

    Ok(CtmTable::from_parts(
        opts.states,
        opts.step_budget,
        Some(result.examined),
        entries,
        true,
        opts.retain_programs,
    ))
}
