//! The dimension-incremental detection algorithm.

mod params;
mod run;
mod schedule;
mod threshold;

pub use params::{local_cap, AlgorithmParams, Strategy};
pub use run::{run, DetectionResult, StepKind, StepStats};
pub use schedule::{increment_schedule, next_stage, MergeStep};
pub use threshold::{select_positions, threshold_select};
