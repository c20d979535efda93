//! The interaction track: one point per event on a (time, global line)
//! plane, keystroke aggregation, filtering and level-of-detail reduction.

mod aggregate;
mod build;
mod filter;
mod replay;
mod simplify;

use serde::{Deserialize, Serialize};

use crate::event::{Category, EventType};

pub use aggregate::{aggregate_edits, AggregatedEdit, EditFate, DEFAULT_MAX_GAP_MS};
pub use build::build_track;
pub use filter::{FilterParseError, FilterSpec};
pub use replay::{Replayer, Resolved};
pub use simplify::{simplify, simplify_vertical, tolerance_for_level, vertical_deviation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrackError {
    #[error("event {event_id} references unknown file {path:?}")]
    UnknownFileReference { event_id: u64, path: String },
    #[error(transparent)]
    Filter(#[from] FilterParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub global_pos: u32,
    pub visible_span: Option<(u32, u32)>,
    pub marker: EventType,
    pub category: Category,
    pub file: Option<String>,
    /// True when the position is an inserted line plotted at its anchor.
    pub pocket: bool,
    /// False for events that borrowed the previous point's position.
    pub positional: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Track {
    pub points: Vec<TrackPoint>,
    /// Index pairs into `points`; always `(i, i + 1)`.
    pub edges: Vec<(usize, usize)>,
    /// Categories whose incoming edges are hidden.
    pub edges_disabled: Vec<Category>,
}

impl Track {
    pub fn new(points: Vec<TrackPoint>, edges_disabled: Vec<Category>) -> Self {
        let mut track = Track {
            points,
            edges: Vec::new(),
            edges_disabled,
        };
        track.relink();
        track
    }

    /// Recompute edges between consecutive points.
    pub fn relink(&mut self) {
        self.edges = (1..self.points.len())
            .filter(|&j| !self.edges_disabled.contains(&self.points[j].category))
            .map(|j| (j - 1, j))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn event_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.points.iter().map(|p| p.event_id)
    }
}
