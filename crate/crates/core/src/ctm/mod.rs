//! Exhaustive (n,2) machine enumeration and the frequency tables it yields.

mod enumerate;
mod machine;
mod table;

pub use enumerate::{build_table, BuildOptions, LARGE_CENSUS_THRESHOLD};
pub use machine::{
    action_count, census, Machine, OutputKey, RunOutcome, TapeScratch, MAX_STEP_BUDGET,
};
pub use table::{default_step_budget, simulate_run, CtmEntry, CtmTable};
