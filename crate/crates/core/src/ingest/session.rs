//! Idle detection. An idle is any stretch without a single event.

use serde::{Deserialize, Serialize};

use super::Recording;
use crate::event::Event;

pub const DEFAULT_LONG_IDLE_MS: u64 = 300_000;
pub const DEFAULT_SHORT_IDLE_FLOOR_MS: u64 = 15_000;

/// Contiguous run of events with no gap exceeding the long-idle threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Session<'a> {
    pub session_index: usize,
    pub events: &'a [Event],
    pub start_ms: u64,
    pub end_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdleKind {
    /// Presumed reading period.
    ShortIdle,
    /// Session boundary.
    LongIdle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdleSpan {
    pub start_ms: u64,
    pub end_ms: u64,
    pub duration_ms: u64,
    pub classification: IdleKind,
}

/// Partition the recording at every gap strictly longer than the threshold.
pub fn split_sessions(recording: &Recording, long_idle_threshold_ms: u64) -> Vec<Session<'_>> {
    split_events(&recording.events, long_idle_threshold_ms)
}

pub fn split_events(events: &[Event], long_idle_threshold_ms: u64) -> Vec<Session<'_>> {
    let mut sessions = Vec::new();
    if events.is_empty() {
        return sessions;
    }
    let mut start = 0;
    for i in 1..=events.len() {
        let boundary = i == events.len()
            || events[i].timestamp_ms - events[i - 1].timestamp_ms > long_idle_threshold_ms;
        if boundary {
            let slice = &events[start..i];
            sessions.push(Session {
                session_index: sessions.len(),
                events: slice,
                start_ms: slice[0].timestamp_ms,
                end_ms: slice[slice.len() - 1].timestamp_ms,
            });
            start = i;
        }
    }
    sessions
}

/// Gaps inside a session longer than the floor. Sessions never contain a
/// long idle, so everything reported here is a `ShortIdle`.
pub fn classify_idles(session: &Session<'_>, short_idle_floor_ms: u64) -> Vec<IdleSpan> {
    session
        .events
        .windows(2)
        .filter_map(|w| {
            let gap = w[1].timestamp_ms - w[0].timestamp_ms;
            (gap > short_idle_floor_ms).then(|| IdleSpan {
                start_ms: w[0].timestamp_ms,
                end_ms: w[1].timestamp_ms,
                duration_ms: gap,
                classification: IdleKind::ShortIdle,
            })
        })
        .collect()
}

/// All idles of a recording in time order: short idles within sessions and
/// the long idles separating them.
pub fn recording_idles(recording: &Recording, long_idle_threshold_ms: u64, short_idle_floor_ms: u64) -> Vec<IdleSpan> {
    let sessions = split_sessions(recording, long_idle_threshold_ms);
    let mut spans = Vec::new();
    for (i, s) in sessions.iter().enumerate() {
        if i > 0 {
            let prev_end = sessions[i - 1].end_ms;
            spans.push(IdleSpan {
                start_ms: prev_end,
                end_ms: s.start_ms,
                duration_ms: s.start_ms - prev_end,
                classification: IdleKind::LongIdle,
            });
        }
        spans.extend(classify_idles(s, short_idle_floor_ms));
    }
    spans
}
