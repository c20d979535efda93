use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::event::{parse_event, serialize_event, Event, EventError};

pub const RECORDING_SCHEMA: &str = "tracelens-recording";
pub const RECORDING_VERSION: u64 = 1;

/// One manifest entry: a file and its line count when recording started.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub initial_line_count: u32,
}

impl FileEntry {
    pub fn new(path: impl Into<String>, initial_line_count: u32) -> Self {
        FileEntry {
            path: path.into(),
            initial_line_count,
        }
    }
}

/// A validated recording: manifest plus time-ordered events.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub recording_id: String,
    pub files: Vec<FileEntry>,
    pub events: Vec<Event>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    version: u64,
    recording_id: String,
    files: Vec<FileEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line 1: recording header missing")]
    HeaderMissing,
    #[error("line 1: invalid recording header: {0}")]
    HeaderInvalid(String),
    #[error("line 1: unsupported recording version {0} (expected {RECORDING_VERSION})")]
    VersionUnsupported(u64),
    #[error("line {line}: {source}")]
    Event {
        line: usize,
        #[source]
        source: EventError,
    },
    #[error("line {line}: event id {id} does not exceed previous id {previous}")]
    NonMonotonicId { line: usize, id: u64, previous: u64 },
    #[error("line {line}: timestamp {timestamp_ms} precedes previous timestamp {previous}")]
    NonMonotonicTimestamp { line: usize, timestamp_ms: u64, previous: u64 },
    #[error("line {line}: file {path:?} is not in the recording manifest")]
    UnknownFileReference { line: usize, path: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LoadError {
    /// 1-based line number of the offending record.
    pub fn line(&self) -> Option<usize> {
        match self {
            LoadError::HeaderMissing | LoadError::HeaderInvalid(_) | LoadError::VersionUnsupported(_) => Some(1),
            LoadError::Event { line, .. }
            | LoadError::NonMonotonicId { line, .. }
            | LoadError::NonMonotonicTimestamp { line, .. }
            | LoadError::UnknownFileReference { line, .. } => Some(*line),
            LoadError::Io(_) => None,
        }
    }
}

fn parse_header(line: &str) -> Result<Header, LoadError> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| LoadError::HeaderInvalid(e.to_string()))?;
    if value.get("schema").and_then(|s| s.as_str()) != Some(RECORDING_SCHEMA) {
        return Err(LoadError::HeaderMissing);
    }
    if let Some(v) = value.get("version").and_then(|v| v.as_u64()) {
        if v != RECORDING_VERSION {
            return Err(LoadError::VersionUnsupported(v));
        }
    }
    let header: Header = serde_json::from_value(value).map_err(|e| LoadError::HeaderInvalid(e.to_string()))?;
    let mut seen = BTreeSet::new();
    for f in &header.files {
        if !seen.insert(f.path.as_str()) {
            return Err(LoadError::HeaderInvalid(format!("duplicate manifest path {:?}", f.path)));
        }
    }
    Ok(header)
}

/// Read and fully validate a version-1 recording.
pub fn load_recording<R: BufRead>(source: R) -> Result<Recording, LoadError> {
    let mut lines = source.lines();
    let first = lines.next().ok_or(LoadError::HeaderMissing)??;
    if first.trim().is_empty() {
        return Err(LoadError::HeaderMissing);
    }
    let header = parse_header(&first)?;

    let manifest: BTreeSet<&str> = header.files.iter().map(|f| f.path.as_str()).collect();
    let mut events: Vec<Event> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event = parse_event(&line).map_err(|source| LoadError::Event { line: line_no, source })?;
        if let Some(prev) = events.last() {
            if event.id <= prev.id {
                return Err(LoadError::NonMonotonicId { line: line_no, id: event.id, previous: prev.id });
            }
            if event.timestamp_ms < prev.timestamp_ms {
                return Err(LoadError::NonMonotonicTimestamp {
                    line: line_no,
                    timestamp_ms: event.timestamp_ms,
                    previous: prev.timestamp_ms,
                });
            }
        }
        if let Some(path) = event.referenced_files().into_iter().find(|p| !manifest.contains(p)) {
            return Err(LoadError::UnknownFileReference { line: line_no, path: path.to_string() });
        }
        events.push(event);
    }

    Ok(Recording {
        recording_id: header.recording_id,
        files: header.files,
        events,
    })
}

impl Recording {
    pub fn header_line(&self) -> String {
        let header = Header {
            schema: RECORDING_SCHEMA.to_string(),
            version: RECORDING_VERSION,
            recording_id: self.recording_id.clone(),
            files: self.files.clone(),
        };
        serde_json::to_string(&header).expect("header serializes")
    }

    /// Write header and events, one line each, newline-terminated.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header_line())?;
        for e in &self.events {
            writeln!(out, "{}", serialize_event(e))?;
        }
        Ok(())
    }

    pub fn to_ndjson(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn duration_ms(&self) -> u64 {
        match (self.events.first(), self.events.last()) {
            (Some(a), Some(b)) => b.timestamp_ms - a.timestamp_ms,
            _ => 0,
        }
    }

    pub fn file(&self, path: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.path == path)
    }
}
