//! Machine encoding for the exhaustive (n,2) enumeration.
//!
//! A machine has `n` working states over the binary tape alphabet. Each of
//! the `2n` (state, read symbol) pairs maps to one of `4n + 2` action codes:
//!
//! * `w*2n + d*n + q` with `w, d` bits and `q < n`: write `w`, move left
//!   (`d = 0`) or right (`d = 1`), switch to state `q`;
//! * `4n + w`: write `w` on the current cell and halt without moving.
//!
//! Executing a halt action costs a step, so a machine whose first action is
//! a halt action halts at step 1 with output length 1.
//!
//! A machine index is the big-endian base-(4n+2) numeral whose digit at
//! position `2q + a` is the action code for (state `q`, read `a`); the pair
//! (state 0, read 0) is the most significant digit. Indices range over
//! `0..(4n+2)^(2n)` and each one denotes a distinct machine. Execution
//! starts in state 0 on an unbounded tape of blank symbols with the head at
//! cell 0.
//!
//! The output of a halting run is the tape content over the contiguous span
//! of cells on which steps started, read left to right. Every cell in that
//! span has been written at least once: the head only leaves a cell after
//! writing to it, and the halt action writes in place.

/// Maximum supported step budget. Outputs are packed into a 128-bit
/// register and a halting run's output span never exceeds its step count.
pub const MAX_STEP_BUDGET: u32 = 120;

/// Number of distinct action codes for an `n`-state machine: `4n + 2`.
pub fn action_count(states: u32) -> u32 {
    4 * states + 2
}

/// Number of machines in the `n`-state class: `(4n+2)^(2n)`.
pub fn census(states: u32) -> u64 {
    u64::from(action_count(states)).pow(2 * states)
}

/// A binary string of length 1..=128 packed big-endian into a `u128`.
///
/// The derived ordering is (length, numeric value), which coincides with
/// (length, lexicographic) because the first character of the string is the
/// most significant packed bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutputKey {
    len: u8,
    bits: u128,
}

impl OutputKey {
    pub fn new(len: u8, bits: u128) -> Self {
        assert!((1..=128).contains(&u32::from(len)), "key length out of range");
        debug_assert!(len == 128 || bits >> len == 0);
        OutputKey { len, bits }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s.is_empty() || s.len() > 128 {
            return None;
        }
        let mut bits = 0u128;
        for c in s.chars() {
            match c {
                '0' => bits <<= 1,
                '1' => bits = (bits << 1) | 1,
                _ => return None,
            }
        }
        Some(OutputKey { len: s.len() as u8, bits })
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn mask(&self) -> u128 {
        if self.len == 128 {
            u128::MAX
        } else {
            (1u128 << self.len) - 1
        }
    }

    /// Bitwise complement of the string, same length.
    pub fn complement(&self) -> Self {
        OutputKey { len: self.len, bits: !self.bits & self.mask() }
    }

    /// Left-right reversal of the string.
    pub fn reversed(&self) -> Self {
        let mut r = 0u128;
        let mut b = self.bits;
        for _ in 0..self.len {
            r = (r << 1) | (b & 1);
            b >>= 1;
        }
        OutputKey { len: self.len, bits: r }
    }
}

impl std::fmt::Display for OutputKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if (self.bits >> i) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A fully specified machine: one action code per (state, read) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Machine {
    states: u32,
    // actions[2q + a] for state q, read symbol a; only the first 2n used
    actions: [u8; 8],
}

impl Machine {
    pub fn from_index(states: u32, index: u64) -> Self {
        debug_assert!((1..=4).contains(&states));
        debug_assert!(index < census(states));
        let base = u64::from(action_count(states));
        let rows = 2 * states as usize;
        let mut actions = [0u8; 8];
        let mut x = index;
        for slot in actions[..rows].iter_mut().rev() {
            *slot = (x % base) as u8;
            x /= base;
        }
        Machine { states, actions }
    }

    pub fn index(&self) -> u64 {
        let base = u64::from(action_count(self.states));
        let rows = 2 * self.states as usize;
        self.actions[..rows].iter().fold(0u64, |acc, &d| acc * base + u64::from(d))
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    fn map_actions(&self, f: impl Fn(usize, usize, u8) -> (usize, u8)) -> Self {
        let rows = 2 * self.states as usize;
        let mut actions = [0u8; 8];
        for q in 0..self.states as usize {
            for a in 0..2 {
                let (slot, code) = f(q, a, self.actions[2 * q + a]);
                debug_assert!(slot < rows);
                actions[slot] = code;
            }
        }
        Machine { states: self.states, actions }
    }

    /// The 0-1 dual machine: read rows swapped per state, writes complemented.
    ///
    /// Running the twin on an all-1 blank tape reproduces this machine's run
    /// on the all-0 blank tape step for step, with every tape cell
    /// complemented. The map is an involution and a bijection on the class,
    /// which is what makes the two-sided blank census below exactly
    /// complement-symmetric.
    pub fn complement_twin(&self) -> Self {
        let n = self.states;
        self.map_actions(|q, a, code| {
            let flipped = if code >= (4 * n) as u8 {
                4 * n as u8 + (1 - (code - 4 * n as u8))
            } else {
                let two_n = (2 * n) as u8;
                let (w, rest) = (code / two_n, code % two_n);
                (1 - w) * two_n + rest
            };
            (2 * q + (1 - a), flipped)
        })
    }

    /// The mirror machine: move directions flipped on regular actions.
    ///
    /// Its blank-tape run mirrors this machine's run, so its output is the
    /// reversal of this machine's output with the same step count.
    pub fn reflection(&self) -> Self {
        let n = self.states;
        self.map_actions(|q, a, code| {
            let flipped = if code >= (4 * n) as u8 {
                code
            } else {
                let two_n = (2 * n) as u8;
                let (w, rest) = (code / two_n, code % two_n);
                let (d, next) = (rest / n as u8, rest % n as u8);
                w * two_n + (1 - d) * n as u8 + next
            };
            (2 * q + a, flipped)
        })
    }
}

/// Reusable tape buffer so enumeration does not allocate per run.
#[derive(Debug, Default)]
pub struct TapeScratch {
    cells: Vec<u8>,
}

/// Result of running one machine on one blank tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Halted { steps: u32, output: OutputKey },
    OutOfBudget,
}

impl Machine {
    /// Run from a blank tape of `blank` symbols until halt or budget
    /// exhaustion. A run that executes its halt action on step
    /// `step_budget` counts as halting.
    pub fn run(&self, step_budget: u32, blank: u8, tape: &mut TapeScratch) -> RunOutcome {
        assert!(step_budget >= 1 && step_budget <= MAX_STEP_BUDGET);
        assert!(blank <= 1);
        let n = self.states as usize;
        let span = 2 * step_budget as usize + 3;
        if tape.cells.len() != span {
            tape.cells.resize(span, blank);
        }
        tape.cells.fill(blank);

        let origin = step_budget as usize + 1;
        let mut head = origin;
        let (mut minp, mut maxp) = (head, head);
        let mut state = 0usize;
        let mut steps = 0u32;
        while steps < step_budget {
            let read = tape.cells[head] as usize;
            let code = self.actions[2 * state + read] as usize;
            steps += 1;
            if head < minp {
                minp = head;
            }
            if head > maxp {
                maxp = head;
            }
            if code >= 4 * n {
                tape.cells[head] = (code - 4 * n) as u8;
                let mut bits = 0u128;
                for &cell in &tape.cells[minp..=maxp] {
                    bits = (bits << 1) | u128::from(cell);
                }
                let len = (maxp - minp + 1) as u8;
                return RunOutcome::Halted { steps, output: OutputKey::new(len, bits) };
            }
            let w = code / (2 * n);
            let rest = code % (2 * n);
            tape.cells[head] = w as u8;
            if rest >= n {
                head += 1;
            } else {
                head -= 1;
            }
            state = rest % n;
        }
        RunOutcome::OutOfBudget
    }
}
