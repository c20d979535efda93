//! Configuration, the end-to-end analysis pipeline and its report format.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::event::canonical_json;
use crate::ingest::{recording_idles, split_sessions, IdleSpan, Recording, DEFAULT_LONG_IDLE_MS, DEFAULT_SHORT_IDLE_FLOOR_MS};
use crate::patterns::{detect_all, DetectorInput, DetectorParams, PatternError, PatternMatch, PhaseSpan};
use crate::scoring::{
    cyclissity, file_visit_history, run_state_machine, summary, Analyses, RecordingSummary, ScoreTrajectory, ScoringRules,
};
use crate::spatial::{build_order, GlobalIndex, LineMaps, OrderingRule, SpatialError};
use crate::track::{aggregate_edits, build_track, simplify, AggregatedEdit, FilterSpec, Track, TrackError, DEFAULT_MAX_GAP_MS};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub long_idle_ms: u64,
    pub short_idle_floor_ms: u64,
    pub max_gap_ms: u64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            long_idle_ms: DEFAULT_LONG_IDLE_MS,
            short_idle_floor_ms: DEFAULT_SHORT_IDLE_FLOOR_MS,
            max_gap_ms: DEFAULT_MAX_GAP_MS,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackConfig {
    pub ordering: OrderingRule,
}

/// Every tunable of the pipeline. Each section may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub ingest: IngestConfig,
    pub track: TrackConfig,
    pub detectors: DetectorParams,
    pub scoring: ScoringRules,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Files ending in `.json` are read as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let config = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        config
            .detectors
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(config)
    }

    /// Hex digest of the canonical JSON form; equal configs hash equally
    /// whichever syntax they were written in.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        sha256_hex(canonical_json(&value).as_bytes())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn recording_digest(recording: &Recording) -> String {
    sha256_hex(recording.to_ndjson().as_bytes())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub session_index: usize,
    pub start_ms: u64,
    pub end_ms: u64,
    pub first_event_id: u64,
    pub last_event_id: u64,
    pub event_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclissityPoint {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub path: String,
    pub visit_index: u64,
    pub recency_distance: Option<u64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub recording_id: String,
    pub config_hash: String,
    pub recording_digest: String,
    pub sessions: Vec<SessionInfo>,
    pub idles: Vec<IdleSpan>,
    pub edits: Vec<AggregatedEdit>,
    pub phases: Vec<PhaseSpan>,
    pub patterns: Vec<PatternMatch>,
    pub cyclissity: Vec<CyclissityPoint>,
    pub trajectory: ScoreTrajectory,
    pub summary: RecordingSummary,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Whether this report was produced from `recording` under `config`.
    pub fn is_current(&self, recording: &Recording, config: &Config) -> bool {
        self.schema_version == REPORT_SCHEMA_VERSION
            && self.config_hash == config.hash()
            && self.recording_digest == recording_digest(recording)
    }

    /// Event ids that every level of detail keeps.
    pub fn anchors(&self) -> BTreeSet<u64> {
        self.patterns.iter().flat_map(|m| [m.start_event_id, m.end_event_id]).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A finished analysis plus the unfiltered track it was computed on.
pub struct Analysis {
    pub report: AnalysisReport,
    pub index: GlobalIndex,
    pub track: Track,
}

pub fn global_index(recording: &Recording, config: &Config) -> Result<GlobalIndex, SpatialError> {
    Ok(GlobalIndex::new(&build_order(&recording.files, &config.track.ordering)?))
}

pub fn analyze(recording: &Recording, config: &Config) -> Result<Analysis, AnalyzeError> {
    let index = global_index(recording, config)?;
    let events = &recording.events;
    let track = build_track(events, &index, LineMaps::new(&recording.files), &FilterSpec::everything())?;
    let edits = aggregate_edits(events, &recording.files, config.ingest.max_gap_ms);
    let history = file_visit_history(events);
    let (patterns, phases) = detect_all(
        &DetectorInput {
            events,
            track: &track,
            edits: &edits,
            history: &history,
        },
        &config.detectors,
    )?;
    let trajectory = run_state_machine(events, &patterns, &phases, &history, &edits, &config.scoring);
    let sessions: Vec<SessionInfo> = split_sessions(recording, config.ingest.long_idle_ms)
        .iter()
        .map(|s| SessionInfo {
            session_index: s.session_index,
            start_ms: s.start_ms,
            end_ms: s.end_ms,
            first_event_id: s.events[0].id,
            last_event_id: s.events[s.events.len() - 1].id,
            event_count: s.events.len(),
        })
        .collect();
    let mode = config.scoring.count_mode;
    let summary = summary(
        recording,
        &Analyses {
            session_count: sessions.len(),
            history: &history,
            edits: &edits,
            patterns: &patterns,
            phases: &phases,
            trajectory: &trajectory,
            count_mode: mode,
        },
    );
    let cyclissity = history
        .iter()
        .map(|v| CyclissityPoint {
            event_id: v.event_id,
            timestamp_ms: v.timestamp_ms,
            path: v.path.clone(),
            visit_index: v.visit_index,
            recency_distance: v.recency_distance,
            value: cyclissity::<f64>(v, mode).value,
        })
        .collect();
    let report = AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        recording_id: recording.recording_id.clone(),
        config_hash: config.hash(),
        recording_digest: recording_digest(recording),
        sessions,
        idles: recording_idles(recording, config.ingest.long_idle_ms, config.ingest.short_idle_floor_ms),
        edits,
        phases,
        patterns,
        cyclissity,
        trajectory,
        summary,
    };
    Ok(Analysis { report, index, track })
}

/// The track as a viewer asks for it: filtered, then reduced to `lod`.
pub fn track_view(
    recording: &Recording,
    index: &GlobalIndex,
    filter: &FilterSpec,
    lod: u32,
    anchors: &BTreeSet<u64>,
) -> Result<Track, TrackError> {
    let track = build_track(&recording.events, index, LineMaps::new(&recording.files), filter)?;
    Ok(simplify(&track, lod, anchors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::generate;

    #[test]
    fn toml_and_json_configs_hash_alike() {
        let t = Config::from_toml("[scoring]\nrestart_first = 2\n[ingest]\nmax_gap_ms = 1500\n").unwrap();
        let j = Config::from_json(r#"{"ingest": {"max_gap_ms": 1500}, "scoring": {"restart_first": 2}}"#).unwrap();
        assert_eq!(t, j);
        assert_eq!(t.hash(), j.hash());
        assert_ne!(t.hash(), Config::default().hash());
    }

    #[test]
    fn unknown_sections_rejected() {
        assert!(Config::from_toml("[detector]\n").is_err());
        assert!(Config::from_toml("[scoring]\nbogus = 1\n").is_err());
    }

    #[test]
    fn report_round_trips_and_is_deterministic() {
        let (rec, _) = generate("poor-mans-debugger", 3, &Default::default()).unwrap();
        let config = Config::default();
        let a = analyze(&rec, &config).unwrap().report;
        let b = analyze(&rec, &config).unwrap().report;
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(AnalysisReport::from_json(&a.to_json()).unwrap(), a);
        assert!(a.is_current(&rec, &config));
        assert_eq!(a.trajectory.final_score, a.trajectory.triggers.iter().map(|t| t.delta).sum::<i64>());
    }
}
