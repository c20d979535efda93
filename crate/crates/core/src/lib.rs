//! Analysis of recorded IDE interactions.
//!
//! A recording is a stream of timestamped editor events. From it this crate
//! derives sessions and idle spans, a track of every event on a global line
//! axis (with code pockets keeping inserted lines in place), aggregated
//! edits, action patterns and work phases, a cyclissity series over file
//! visits and a cumulative behaviour score. [`report::analyze`] runs the
//! whole pipeline; [`render`] draws the results as SVG.
//!
//! Numeric code that has a meaningful exact form is generic over
//! [`num::Scalar`] or [`num::Real`]; the aliases below fix the common
//! instantiations.

pub mod event;
pub mod ingest;
pub mod num;
pub mod patterns;
pub mod render;
pub mod report;
pub mod scoring;
pub mod spatial;
pub mod track;

use num_rational::Ratio;

/// Cyclissity in double precision, as used by reports.
pub type Cyclissity = scoring::CyclissityValue<f64>;
/// Cyclissity in single precision.
pub type Cyclissity32 = scoring::CyclissityValue<f32>;
/// Cyclissity as an exact fraction.
pub type ExactCyclissity = scoring::CyclissityValue<Ratio<u64>>;

pub use event::{Category, Event, EventContext, EventType, LineRange, Payload};
pub use ingest::{load_recording, FileEntry, Recording};
pub use report::{analyze, AnalysisReport, Config};
