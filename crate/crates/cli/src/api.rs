//! Read-only JSON API over a directory of recordings.
//!
//! Routing and serialization live here without any HTTP types so the same
//! responses can be produced in-process; [`crate::server`] only moves bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use tracelens::event::event_to_value;
use tracelens::ingest::{load_recording, FileEntry, Recording};
use tracelens::report::{analyze, track_view, AnalysisReport, Config};
use tracelens::scoring::{compare, CompareInput, RecordingSummary};
use tracelens::spatial::GlobalIndex;
use tracelens::track::FilterSpec;

use crate::CliError;

pub const DEFAULT_EVENT_LIMIT: usize = 1_000;
pub const MAX_EVENT_LIMIT: usize = 10_000;
pub const MAX_LOD: u32 = 32;

pub struct Entry {
    pub recording: Recording,
    pub report: AnalysisReport,
    pub index: GlobalIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    pub body: String,
}

impl ApiResponse {
    fn ok<T: Serialize>(value: &T) -> Self {
        ApiResponse {
            status: 200,
            body: to_body(value),
        }
    }

    fn error(status: u16, code: &str, message: impl Into<String>) -> Self {
        ApiResponse {
            status,
            body: to_body(&json!({"code": code, "message": message.into()})),
        }
    }
}

pub fn to_body<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("API payloads serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordingListItem<'a> {
    pub recording_id: &'a str,
    pub summary: &'a RecordingSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordingDetail<'a> {
    pub recording_id: &'a str,
    pub event_count: usize,
    pub files: &'a [FileEntry],
    pub index: &'a GlobalIndex,
    pub summary: &'a RecordingSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventPage {
    pub total: usize,
    pub offset: usize,
    pub events: Vec<serde_json::Value>,
}

/// Immutable after loading; shared by all request handlers.
pub struct ApiState {
    pub config: Config,
    pub entries: BTreeMap<String, Entry>,
}

fn load_entry(path: &Path, config: &Config) -> Result<Entry, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let recording =
        load_recording(BufReader::new(file)).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let cached = path.with_file_name(format!("{}.report.json", recording.recording_id));
    let report = fs::read_to_string(&cached)
        .ok()
        .and_then(|text| AnalysisReport::from_json(&text).ok())
        .filter(|r| r.is_current(&recording, config));
    let (report, index) = match report {
        Some(r) => {
            let index = tracelens::report::global_index(&recording, config)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            (r, index)
        }
        None => {
            let a = analyze(&recording, config).map_err(|e| CliError::Validation(e.to_string()))?;
            (a.report, a.index)
        }
    };
    Ok(Entry {
        recording,
        report,
        index,
    })
}

impl ApiState {
    /// Load every `*.ndjson` recording in `dir`. Reports cached next to a
    /// recording are reused when they match it and `config`; the directory
    /// is never written to.
    pub fn load_dir(dir: &Path, config: Config) -> Result<Self, CliError> {
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|e| CliError::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ndjson"))
            .collect();
        paths.sort();
        let mut entries = BTreeMap::new();
        for path in paths {
            let entry = load_entry(&path, &config)?;
            let id = entry.recording.recording_id.clone();
            if entries.insert(id.clone(), entry).is_some() {
                return Err(CliError::Validation(format!("duplicate recording id {id:?} in {}", dir.display())));
            }
        }
        Ok(ApiState { config, entries })
    }

    /// Answer `GET path?query`.
    pub fn handle(&self, path: &str, query: &str) -> ApiResponse {
        let params: BTreeMap<String, String> = form_urlencoded::parse(query.as_bytes()).into_owned().collect();
        let segments: Vec<&str> = path.trim_matches('/').split('/').filter(|s| !s.is_empty()).collect();
        match segments.as_slice() {
            ["recordings"] => ApiResponse::ok(&self.list()),
            ["recordings", id] => self.with_entry(id, |e| ApiResponse::ok(&detail(e))),
            ["recordings", id, "events"] => self.with_entry(id, |e| events(e, &params)),
            ["recordings", id, "track"] => self.with_entry(id, |e| track(e, &params)),
            ["recordings", id, "phases"] => self.with_entry(id, |e| ApiResponse::ok(&e.report.phases)),
            ["recordings", id, "patterns"] => self.with_entry(id, |e| ApiResponse::ok(&e.report.patterns)),
            ["recordings", id, "cyclissity"] => self.with_entry(id, |e| ApiResponse::ok(&e.report.cyclissity)),
            ["recordings", id, "trajectory"] => self.with_entry(id, |e| ApiResponse::ok(&e.report.trajectory)),
            ["compare"] => self.compare(&params),
            _ => ApiResponse::error(404, "not_found", format!("no route for {path}")),
        }
    }

    pub fn list(&self) -> Vec<RecordingListItem<'_>> {
        self.entries
            .values()
            .map(|e| RecordingListItem {
                recording_id: &e.recording.recording_id,
                summary: &e.report.summary,
            })
            .collect()
    }

    fn with_entry(&self, id: &str, f: impl FnOnce(&Entry) -> ApiResponse) -> ApiResponse {
        match self.entries.get(id) {
            Some(e) => f(e),
            None => ApiResponse::error(404, "unknown_recording", format!("no recording with id {id:?}")),
        }
    }

    fn compare(&self, params: &BTreeMap<String, String>) -> ApiResponse {
        let Some(ids) = params.get("ids") else {
            return ApiResponse::error(400, "bad_query", "missing ids parameter");
        };
        let mut inputs = Vec::new();
        for id in ids.split(',').filter(|s| !s.is_empty()) {
            match self.entries.get(id) {
                Some(e) => inputs.push(CompareInput {
                    recording: &e.recording,
                    summary: &e.report.summary,
                    trajectory: &e.report.trajectory,
                }),
                None => return ApiResponse::error(404, "unknown_recording", format!("no recording with id {id:?}")),
            }
        }
        match compare(&inputs, &self.config.track.ordering) {
            Ok(report) => ApiResponse::ok(&report),
            Err(e) => ApiResponse::error(400, "bad_query", e.to_string()),
        }
    }
}

pub fn detail(e: &Entry) -> RecordingDetail<'_> {
    RecordingDetail {
        recording_id: &e.recording.recording_id,
        event_count: e.recording.events.len(),
        files: &e.recording.files,
        index: &e.index,
        summary: &e.report.summary,
    }
}

fn parse_num<T: std::str::FromStr>(params: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, ApiResponse> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| ApiResponse::error(400, "bad_query", format!("{key} must be a non-negative integer, got {v:?}"))),
    }
}

/// The filter described by the `filter` and `categories` parameters; both
/// use the filter syntax and their terms are combined.
pub fn parse_filter(params: &BTreeMap<String, String>) -> Result<FilterSpec, ApiResponse> {
    let text: Vec<&str> = ["filter", "categories"]
        .iter()
        .filter_map(|k| params.get(*k).map(String::as_str))
        .filter(|s| !s.is_empty())
        .collect();
    FilterSpec::parse(&text.join(",")).map_err(|e| ApiResponse::error(422, "bad_filter", e.to_string()))
}

pub fn event_page(e: &Entry, filter: &FilterSpec, offset: usize, limit: usize) -> Result<EventPage, String> {
    let compiled = filter.compile().map_err(|e| e.to_string())?;
    let matching: Vec<_> = e.recording.events.iter().filter(|ev| compiled.matches(ev)).collect();
    Ok(EventPage {
        total: matching.len(),
        offset,
        events: matching.iter().skip(offset).take(limit).map(|ev| event_to_value(ev)).collect(),
    })
}

fn events(e: &Entry, params: &BTreeMap<String, String>) -> ApiResponse {
    let run = || -> Result<ApiResponse, ApiResponse> {
        let offset = parse_num(params, "offset", 0usize)?;
        let limit = parse_num(params, "limit", DEFAULT_EVENT_LIMIT)?;
        if limit > MAX_EVENT_LIMIT {
            return Err(ApiResponse::error(400, "bad_query", format!("limit exceeds {MAX_EVENT_LIMIT}")));
        }
        let filter = parse_filter(params)?;
        let page = event_page(e, &filter, offset, limit).map_err(|m| ApiResponse::error(422, "bad_filter", m))?;
        Ok(ApiResponse::ok(&page))
    };
    run().unwrap_or_else(|r| r)
}

fn track(e: &Entry, params: &BTreeMap<String, String>) -> ApiResponse {
    let run = || -> Result<ApiResponse, ApiResponse> {
        let lod = parse_num(params, "lod", 0u32)?;
        if lod > MAX_LOD {
            return Err(ApiResponse::error(400, "bad_query", format!("lod exceeds {MAX_LOD}")));
        }
        let filter = parse_filter(params)?;
        let t = track_view(&e.recording, &e.index, &filter, lod, &e.report.anchors())
            .map_err(|err| ApiResponse::error(422, "bad_filter", err.to_string()))?;
        Ok(ApiResponse::ok(&t))
    };
    run().unwrap_or_else(|r| r)
}
