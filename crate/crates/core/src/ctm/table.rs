//! Frequency tables over halting runs and the operations defined on them.
//!
//! A table records, for every output string, how many halting runs produced
//! it. The census is two-sided: every machine contributes its blank-0 run,
//! and the blank-1 run of its complement twin is credited at the same time
//! (same step count, complemented output). Run identifiers encode both
//! halves: run `2m` is machine `m` started on the all-0 tape and run
//! `2m + 1` is machine `m` started on the all-1 tape. Because the twin map
//! is a bijection on the class, the two-sided census is exactly
//! complement-symmetric and exactly reversal-symmetric, and the total run
//! count is twice the number of machines that halt from the all-0 tape.
//!
//! `complexity_bits` for a string `s` is `-log2(count(s) / total_halting)`,
//! the standard frequency estimate of algorithmic complexity.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::CtmError;
use crate::ctm::machine::{
    action_count, census, Machine, OutputKey, RunOutcome, TapeScratch, MAX_STEP_BUDGET,
};

/// Step budgets under which the supported classes are fully explored: the
/// longest-running halting machine in each class halts exactly at the
/// budget, so raising it changes nothing.
pub fn default_step_budget(states: u32) -> Option<u32> {
    match states {
        1 => Some(2),
        2 => Some(6),
        3 => Some(21),
        4 => Some(107),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtmEntry {
    pub count: u64,
    pub complexity_bits: f64,
    /// Halting step -> number of runs that halted on that step. Empty when
    /// the table was loaded without per-run data.
    pub halt_steps: BTreeMap<u32, u64>,
    /// Sorted run identifiers, present when built with `retain_programs`.
    pub programs: Vec<u64>,
    /// True when `programs` was cut off at the configured cap.
    pub programs_truncated: bool,
}

#[derive(Debug, Clone)]
pub struct CtmTable {
    states: u32,
    step_budget: u32,
    /// Number of machines in the class, `(4n+2)^(2n)`.
    machine_census: u64,
    /// Number of machines actually simulated; lower than the census when
    /// the reflection orbit reduction was used. `None` for loaded tables.
    machines_examined: Option<u64>,
    total_halting: u64,
    entries: BTreeMap<OutputKey, CtmEntry>,
    has_steps: bool,
    has_programs: bool,
}

impl CtmTable {
    pub(crate) fn from_parts(
        states: u32,
        step_budget: u32,
        machines_examined: Option<u64>,
        entries: BTreeMap<OutputKey, CtmEntry>,
        has_steps: bool,
        has_programs: bool,
    ) -> Self {
        let total_halting = entries.values().map(|e| e.count).sum();
        CtmTable {
            states,
            step_budget,
            machine_census: census(states),
            machines_examined,
            total_halting,
            entries,
            has_steps,
            has_programs,
        }
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn step_budget(&self) -> u32 {
        self.step_budget
    }

    pub fn machine_census(&self) -> u64 {
        self.machine_census
    }

    pub fn machines_examined(&self) -> Option<u64> {
        self.machines_examined
    }

    /// Total number of halting runs in the two-sided census.
    pub fn total_halting(&self) -> u64 {
        self.total_halting
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_steps(&self) -> bool {
        self.has_steps
    }

    pub fn has_programs(&self) -> bool {
        self.has_programs
    }

    /// Entries in (length, lexicographic) key order.
    pub fn iter(&self) -> impl Iterator<Item = (&OutputKey, &CtmEntry)> {
        self.entries.iter()
    }

    pub fn entry(&self, s: &str) -> Option<&CtmEntry> {
        self.entries.get(&OutputKey::parse(s)?)
    }

    pub fn contains(&self, s: &str) -> bool {
        self.entry(s).is_some()
    }

    /// Output frequency `count(s) / total_halting`, `None` when `s` never
    /// occurred (a miss, for the caller to handle; never a fabricated value).
    pub fn probability(&self, s: &str) -> Option<f64> {
        self.entry(s).map(|e| e.count as f64 / self.total_halting as f64)
    }

    /// `-log2(probability)` in bits, `None` on a miss.
    pub fn ctm_complexity(&self, s: &str) -> Option<f64> {
        self.entry(s).map(|e| e.complexity_bits)
    }

    /// Program length in bits charged to every machine in this class:
    /// `ceil(2n * log2(4n+2))`, the size of a machine index.
    pub fn program_length_bits(&self) -> u32 {
        let n = f64::from(self.states);
        (2.0 * n * f64::from(action_count(self.states)).log2()).ceil() as u32
    }

    /// Levin-style probability `sum over runs of 2^(-len - log2(steps))`
    /// where `len` is [`Self::program_length_bits`] and `steps` is the
    /// run's halting step. Returns 0 for strings no run produced. Requires
    /// per-run step records, which file-loaded tables lack unless a run
    /// listing was loaded alongside.
    pub fn levin_probability(&self, s: &str) -> Result<f64, CtmError> {
        if !self.has_steps {
            return Err(CtmError::StepsUnavailable);
        }
        let Some(entry) = self.entry(s) else {
            return Ok(0.0);
        };
        let weight: f64 = entry
            .halt_steps
            .iter()
            .map(|(&steps, &runs)| runs as f64 / f64::from(steps))
            .sum();
        Ok(weight * (-f64::from(self.program_length_bits())).exp2())
    }

    /// Sorted identifiers of the runs that produced `s`; empty for strings
    /// no run produced. Requires a table built with `retain_programs`.
    pub fn program_set(&self, s: &str) -> Result<&[u64], CtmError> {
        if !self.has_programs {
            return Err(CtmError::ProgramsUnavailable);
        }
        Ok(self.entry(s).map(|e| e.programs.as_slice()).unwrap_or(&[]))
    }
}

/// Re-run one recorded run identifier: machine `run_id >> 1` from a blank
/// tape of `run_id & 1` symbols. Returns the halting step and output, or
/// `None` if the run does not halt within the budget.
pub fn simulate_run(states: u32, run_id: u64, step_budget: u32) -> Option<(u32, String)> {
    let index = run_id >> 1;
    let blank = (run_id & 1) as u8;
    if index >= census(states) || step_budget == 0 || step_budget > MAX_STEP_BUDGET {
        return None;
    }
    let mut tape = TapeScratch::default();
    match Machine::from_index(states, index).run(step_budget, blank, &mut tape) {
        RunOutcome::Halted { steps, output } => Some((steps, output.to_string())),
        RunOutcome::OutOfBudget => None,
    }
}

// ---------------------------------------------------------------------------
// Plain-text persistence.
//
// Table file:     ctm-table v1 n=<n> budget=<b> total=<t>
//                 <string>,<count>,<complexity_bits to 12 decimals>
//                 ... rows sorted by (length, lexicographic) ...
//
// Run listing:    ctm-programs v1 n=<n> budget=<b>
//                 <string>,<run_id>,<halt_step>
//                 ... rows sorted by (string length, string, run_id) ...
// ---------------------------------------------------------------------------

impl CtmTable {
    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<(), CtmError> {
        writeln!(
            w,
            "ctm-table v1 n={} budget={} total={}",
            self.states, self.step_budget, self.total_halting
        )?;
        for (key, entry) in &self.entries {
            writeln!(w, "{key},{},{:.12}", entry.count, entry.complexity_bits)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.to_writer(&mut buf).expect("in-memory write cannot fail");
        buf
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CtmError> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self, CtmError> {
        Self::from_reader(BufReader::new(std::fs::File::open(path)?))
    }

    pub fn from_reader<R: BufRead>(r: R) -> Result<Self, CtmError> {
        let bad = |msg: String| CtmError::MalformedTable(msg);
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))??;
        let (states, step_budget, total) = parse_header(&header, "ctm-table")?;
        let total = total.ok_or_else(|| bad("header missing total=".into()))?;

        let mut entries: BTreeMap<OutputKey, CtmEntry> = BTreeMap::new();
        let mut previous: Option<OutputKey> = None;
        let mut sum = 0u64;
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let (Some(key), Some(count), Some(bits), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad(format!("row {}: expected 3 fields", lineno + 2)));
            };
            let key = OutputKey::parse(key)
                .ok_or_else(|| bad(format!("row {}: bad key {key:?}", lineno + 2)))?;
            let count: u64 = count
                .parse()
                .map_err(|_| bad(format!("row {}: bad count", lineno + 2)))?;
            let bits: f64 = bits
                .parse()
                .map_err(|_| bad(format!("row {}: bad complexity", lineno + 2)))?;
            if count == 0 {
                return Err(bad(format!("row {}: zero count", lineno + 2)));
            }
            if let Some(prev) = previous {
                if key <= prev {
                    return Err(bad(format!("row {}: keys out of order", lineno + 2)));
                }
            }
            let expected = -((count as f64 / total as f64).log2());
            if (bits - expected).abs() > 1e-9 {
                return Err(bad(format!(
                    "row {}: complexity {bits} does not match count (expected {expected:.12})",
                    lineno + 2
                )));
            }
            previous = Some(key);
            sum += count;
            entries.insert(
                key,
                CtmEntry {
                    count,
                    complexity_bits: expected,
                    halt_steps: BTreeMap::new(),
                    programs: Vec::new(),
                    programs_truncated: false,
                },
            );
        }
        if sum != total {
            return Err(bad(format!("counts sum to {sum}, header says {total}")));
        }
        if entries.is_empty() {
            return Err(bad("table has no rows".into()));
        }
        Ok(CtmTable::from_parts(states, step_budget, None, entries, false, false))
    }

    /// Write the per-run listing (run identifiers and halting steps).
    /// Requires a table built with `retain_programs`.
    pub fn write_programs_to(&self, path: &Path) -> Result<(), CtmError> {
        if !self.has_programs || !self.has_steps {
            return Err(CtmError::ProgramsUnavailable);
        }
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "ctm-programs v1 n={} budget={}", self.states, self.step_budget)?;
        let mut tape = TapeScratch::default();
        for (key, entry) in &self.entries {
            for &run in &entry.programs {
                // entries keep a step histogram, not per-run steps, so
                // recover each run's halting step by re-simulation
                let machine = Machine::from_index(self.states, run >> 1);
                let steps = match machine.run(self.step_budget, (run & 1) as u8, &mut tape) {
                    RunOutcome::Halted { steps, .. } => steps,
                    RunOutcome::OutOfBudget => {
                        return Err(CtmError::MalformedTable(format!(
                            "recorded run {run} does not halt"
                        )))
                    }
                };
                writeln!(w, "{key},{run},{steps}")?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Attach a per-run listing to a loaded table, restoring step records
    /// and program sets. Rows must match this table's class, budget, and
    /// counts exactly; any shortfall marks the affected entry truncated and
    /// disables step-dependent operations.
    pub fn load_programs_from(&mut self, path: &Path) -> Result<(), CtmError> {
        let bad = |msg: String| CtmError::MalformedTable(msg);
        let r = BufReader::new(std::fs::File::open(path)?);
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad("empty run listing".into()))??;
        let (states, budget, _) = parse_header(&header, "ctm-programs")?;
        if states != self.states || budget != self.step_budget {
            return Err(bad(format!(
                "run listing is for n={states} budget={budget}, table is n={} budget={}",
                self.states, self.step_budget
            )));
        }
        for entry in self.entries.values_mut() {
            entry.programs.clear();
            entry.halt_steps.clear();
            entry.programs_truncated = false;
        }
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let (Some(key), Some(run), Some(steps), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad(format!("row {}: expected 3 fields", lineno + 2)));
            };
            let key = OutputKey::parse(key)
                .ok_or_else(|| bad(format!("row {}: bad key", lineno + 2)))?;
            let run: u64 = run
                .parse()
                .map_err(|_| bad(format!("row {}: bad run id", lineno + 2)))?;
            let steps: u32 = steps
                .parse()
                .map_err(|_| bad(format!("row {}: bad step count", lineno + 2)))?;
            if steps == 0 || steps > self.step_budget {
                return Err(bad(format!("row {}: step count out of range", lineno + 2)));
            }
            let entry = self
                .entries
                .get_mut(&key)
                .ok_or_else(|| bad(format!("row {}: key {key} not in table", lineno + 2)))?;
            entry.programs.push(run);
            *entry.halt_steps.entry(steps).or_insert(0) += 1;
        }
        let mut complete = true;
        for entry in self.entries.values_mut() {
            entry.programs.sort_unstable();
            let listed = entry.programs.len() as u64;
            if listed > entry.count {
                return Err(bad("run listing has more runs than the table counts".into()));
            }
            if listed < entry.count {
                entry.programs_truncated = true;
                complete = false;
            }
        }
        self.has_programs = true;
        // step histograms are only trustworthy when every run is listed
        self.has_steps = complete;
        Ok(())
    }
}

fn parse_header(line: &str, magic: &str) -> Result<(u32, u32, Option<u64>), CtmError> {
    let bad = |msg: String| CtmError::MalformedTable(msg);
    let mut fields = line.split_whitespace();
    if fields.next() != Some(magic) {
        return Err(bad(format!("not a {magic} file")));
    }
    if fields.next() != Some("v1") {
        return Err(bad("unsupported format version".into()));
    }
    let mut states = None;
    let mut budget = None;
    let mut total = None;
    for field in fields {
        if let Some(v) = field.strip_prefix("n=") {
            states = v.parse::<u32>().ok();
        } else if let Some(v) = field.strip_prefix("budget=") {
            budget = v.parse::<u32>().ok();
        } else if let Some(v) = field.strip_prefix("total=") {
            total = v.parse::<u64>().ok();
        } else {
            return Err(bad(format!("unknown header field {field:?}")));
        }
    }
    let states = states.ok_or_else(|| bad("header missing n=".into()))?;
    let budget = budget.ok_or_else(|| bad("header missing budget=".into()))?;
    if !(1..=4).contains(&states) {
        return Err(CtmError::UnsupportedStates(states));
    }
    if budget == 0 || budget > MAX_STEP_BUDGET {
        return Err(bad(format!("budget {budget} out of range")));
    }
    Ok((states, budget, total))
}
