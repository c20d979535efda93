//! Action-pattern detectors and phase segmentation.

mod detect;
mod params;
mod phases;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use detect::{
    detect_debugger_use, detect_doc_switch, detect_oscillate, detect_poor_mans_debugger, detect_restart,
    detect_validation_launches, DocMatcher,
};
pub use params::{DetectorParams, OscillateParams, PhaseParams, RestartParams};
pub use phases::segment_phases;

use crate::event::Event;
use crate::scoring::FileVisit;
use crate::track::{AggregatedEdit, Track};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    Oscillate,
    Restart,
    DocSwitch,
    DebuggerUse,
    PoorMansDebugger,
    ValidationLaunch,
}

impl PatternKind {
    pub const ALL: [PatternKind; 6] = [
        PatternKind::Oscillate,
        PatternKind::Restart,
        PatternKind::DocSwitch,
        PatternKind::DebuggerUse,
        PatternKind::PoorMansDebugger,
        PatternKind::ValidationLaunch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternKind::Oscillate => "Oscillate",
            PatternKind::Restart => "Restart",
            PatternKind::DocSwitch => "DocSwitch",
            PatternKind::DebuggerUse => "DebuggerUse",
            PatternKind::PoorMansDebugger => "PoorMansDebugger",
            PatternKind::ValidationLaunch => "ValidationLaunch",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        PatternKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

/// A contiguous stretch of one file, in global lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub file: String,
    pub first: u32,
    pub last: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatch {
    pub kind: PatternKind,
    pub start_event_id: u64,
    pub end_event_id: u64,
    pub start_ms: u64,
    pub end_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub regions: Option<(Region, Region)>,
    pub evidence: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub removed_later: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    Investigation,
    Edit,
    Validation,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Investigation => "Investigation",
            PhaseLabel::Edit => "Edit",
            PhaseLabel::Validation => "Validation",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseLabel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        [PhaseLabel::Investigation, PhaseLabel::Edit, PhaseLabel::Validation]
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSpan {
    pub label: PhaseLabel,
    pub start_event_id: u64,
    pub end_event_id: u64,
    pub start_ms: u64,
    pub end_ms: u64,
}

impl PhaseSpan {
    pub fn duration_ms(&self) -> u64 {
        self.end_ms - self.start_ms
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("doc-switch detection needs at least one doc file pattern")]
    DocFilesUnspecified,
    #[error("invalid detector parameters: {0}")]
    InvalidParams(String),
}

/// Everything the detectors need, computed once per recording.
pub struct DetectorInput<'a> {
    pub events: &'a [Event],
    pub track: &'a Track,
    pub edits: &'a [AggregatedEdit],
    pub history: &'a [FileVisit],
}

/// Run every detector; matches are ordered by (start, end, kind).
pub fn detect_all(input: &DetectorInput<'_>, params: &DetectorParams) -> Result<(Vec<PatternMatch>, Vec<PhaseSpan>), PatternError> {
    params.validate()?;
    let docs = DocMatcher::new(&params.doc_files)?;
    let phases = segment_phases(input.events, input.edits, &params.phase);
    let mut matches = Vec::new();
    matches.extend(detect_oscillate(input.track, input.events, &params.oscillate));
    matches.extend(detect_restart(input.history, &phases, &docs, &params.restart));
    matches.extend(detect_doc_switch(input.history, &docs));
    matches.extend(detect_debugger_use(input.events));
    matches.extend(detect_poor_mans_debugger(input.events, input.edits, &params.pmd_regexes)?);
    matches.extend(detect_validation_launches(input.events, input.edits));
    matches.sort_by_key(|m| (m.start_ms, m.start_event_id, m.end_event_id, m.kind));
    Ok((matches, phases))
}
