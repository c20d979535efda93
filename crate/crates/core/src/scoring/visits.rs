//! File-visit history and cyclissity.
//!
//! A visit happens whenever focus moves to a file. For a revisit, `P_c` is the
//! number of visits since the previous visit of the same path (1 when nothing
//! came in between) and `N` the current visit's 1-based index, giving
//! `1 - P_c / N`. First visits score exactly 0.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::event::{Event, FileAction, MouseKind, Payload};
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileVisit {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub path: String,
    pub visit_index: u64,
    pub recency_distance: Option<u64>,
    /// Distinct paths visited up to and including this visit.
    pub distinct_so_far: u64,
}

/// What `N` counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    #[default]
    Visits,
    /// Experimental: distinct files so far. Values are clamped at 0.
    DistinctFiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclissityValue<T> {
    pub value: T,
}

impl<T: Scalar> CyclissityValue<T> {
    pub fn zero() -> Self {
        CyclissityValue { value: T::zero() }
    }

    /// `1 - p/n`, floored at 0.
    pub fn from_ratio(p: u64, n: u64) -> Self {
        if n == 0 || p >= n {
            return Self::zero();
        }
        CyclissityValue {
            value: T::one() - T::from_count(p) / T::from_count(n),
        }
    }
}

/// The file an event moves focus to, if it does.
pub fn focus_target(event: &Event) -> Option<&str> {
    match &event.payload {
        Payload::File { path, action: FileAction::Open } => Some(path),
        Payload::Editor { action, .. } if matches!(action.as_str(), "activate" | "focus" | "open") => {
            event.context.file.as_deref()
        }
        Payload::Window { action, .. } if action == "focus" => event.context.file.as_deref(),
        Payload::Scroll { file, .. }
        | Payload::TextSelection { file, .. }
        | Payload::CodeChange { file, .. }
        | Payload::CodeCompletion { file, .. }
        | Payload::EditorTextCursor { file, .. }
        | Payload::Save { file } => Some(file),
        Payload::EditorMouse { file, kind: MouseKind::Click, .. } => Some(file),
        _ => None,
    }
}

/// Incremental visit history; each push is O(1).
#[derive(Debug, Clone, Default)]
pub struct VisitTracker {
    last_seen: HashMap<String, u64>,
    previous: Option<String>,
    count: u64,
}

impl VisitTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record focus on `path`; `None` when it collapses into the previous visit.
    pub fn push(&mut self, event_id: u64, timestamp_ms: u64, path: &str) -> Option<FileVisit> {
        if self.previous.as_deref() == Some(path) {
            return None;
        }
        self.count += 1;
        let recency_distance = self.last_seen.insert(path.to_string(), self.count).map(|prev| self.count - prev);
        self.previous = Some(path.to_string());
        Some(FileVisit {
            event_id,
            timestamp_ms,
            path: path.to_string(),
            visit_index: self.count,
            recency_distance,
            distinct_so_far: self.last_seen.len() as u64,
        })
    }
}

pub fn file_visit_history(events: &[Event]) -> Vec<FileVisit> {
    let mut tracker = VisitTracker::new();
    events
        .iter()
        .filter_map(|e| focus_target(e).and_then(|p| tracker.push(e.id, e.timestamp_ms, p)))
        .collect()
}

pub fn cyclissity<T: Scalar>(visit: &FileVisit, mode: CountMode) -> CyclissityValue<T> {
    match visit.recency_distance {
        None => CyclissityValue::zero(),
        Some(p) => {
            let n = match mode {
                CountMode::Visits => visit.visit_index,
                CountMode::DistinctFiles => visit.distinct_so_far,
            };
            CyclissityValue::from_ratio(p, n)
        }
    }
}

pub fn cyclissity_series<T: Scalar>(history: &[FileVisit], mode: CountMode) -> Vec<CyclissityValue<T>> {
    history.iter().map(|v| cyclissity(v, mode)).collect()
}

/// Cyclissity straight from a sequence of focused paths, collapsing repeats.
pub fn cyclissity_of_paths<T: Scalar, S: AsRef<str>>(paths: &[S], mode: CountMode) -> Vec<CyclissityValue<T>> {
    let mut tracker = VisitTracker::new();
    paths
        .iter()
        .enumerate()
        .filter_map(|(i, p)| tracker.push(i as u64, 0, p.as_ref()))
        .map(|v| cyclissity(&v, mode))
        .collect()
}

pub fn distinct_files(history: &[FileVisit]) -> usize {
    history.iter().map(|v| v.path.as_str()).collect::<HashSet<_>>().len()
}
