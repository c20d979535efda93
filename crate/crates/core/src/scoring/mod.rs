//! Cyclissity over the file-visit history and the rated-trigger score.

mod machine;
mod rules;
mod summary;
mod visits;

pub use machine::{run_state_machine, EditMark, PatternSymbol, ScoreSample, ScoreTrajectory, Trigger};
pub use rules::{ScoringRules, TriggerKind};
pub use summary::{
    compare, summary, AlignedTrajectory, Analyses, CompareError, CompareInput, ComparisonReport, RecordingSummary,
};
pub use visits::{
    cyclissity, cyclissity_of_paths, cyclissity_series, distinct_files, file_visit_history, focus_target,
    CountMode, CyclissityValue, FileVisit, VisitTracker,
};
