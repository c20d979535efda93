use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{cyclissity, CountMode, FileVisit, ScoreTrajectory};
use crate::ingest::Recording;
use crate::patterns::{PatternKind, PatternMatch, PhaseSpan};
use crate::spatial::{align_recordings, AlignedIndex, OrderingRule};
use crate::track::AggregatedEdit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordingSummary {
    pub recording_id: String,
    pub duration_ms: u64,
    pub session_count: usize,
    pub distinct_files: usize,
    pub edit_count: usize,
    pub surviving_edit_count: usize,
    pub pattern_counts: BTreeMap<String, usize>,
    pub final_score: i64,
    pub phase_durations_ms: BTreeMap<String, u64>,
    pub mean_cyclissity: f64,
    pub uses_debugger: bool,
}

/// Analyses a summary is computed from.
pub struct Analyses<'a> {
    pub session_count: usize,
    pub history: &'a [FileVisit],
    pub edits: &'a [AggregatedEdit],
    pub patterns: &'a [PatternMatch],
    pub phases: &'a [PhaseSpan],
    pub trajectory: &'a ScoreTrajectory,
    pub count_mode: CountMode,
}

pub fn summary(recording: &Recording, a: &Analyses<'_>) -> RecordingSummary {
    let mut pattern_counts: BTreeMap<String, usize> = PatternKind::ALL.iter().map(|k| (k.to_string(), 0)).collect();
    for m in a.patterns {
        *pattern_counts.get_mut(m.kind.as_str()).expect("all kinds present") += 1;
    }
    let mut phase_durations_ms = BTreeMap::new();
    for p in a.phases {
        *phase_durations_ms.entry(p.label.to_string()).or_insert(0) += p.duration_ms();
    }
    let mean_cyclissity = if a.history.is_empty() {
        0.0
    } else {
        a.history.iter().map(|v| cyclissity::<f64>(v, a.count_mode).value).sum::<f64>() / a.history.len() as f64
    };
    RecordingSummary {
        recording_id: recording.recording_id.clone(),
        duration_ms: recording.duration_ms(),
        session_count: a.session_count,
        distinct_files: super::distinct_files(a.history),
        edit_count: a.edits.len(),
        surviving_edit_count: a.edits.iter().filter(|e| e.is_surviving()).count(),
        uses_debugger: pattern_counts["DebuggerUse"] > 0,
        pattern_counts,
        final_score: a.trajectory.final_score,
        phase_durations_ms,
        mean_cyclissity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompareError {
    #[error("comparison needs at least two recordings, got {0}")]
    TooFewRecordings(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedTrajectory {
    pub recording_id: String,
    /// (ms since recording start, score, distinct files)
    pub samples: Vec<(u64, i64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub recording_ids: Vec<String>,
    /// Metric name to recording ids, best first.
    pub rankings: BTreeMap<String, Vec<String>>,
    /// Metric name to per-recording difference from the first recording.
    pub deltas: BTreeMap<String, Vec<f64>>,
    pub aligned_index: Option<AlignedIndex>,
    pub trajectories: Option<Vec<AlignedTrajectory>>,
    pub warnings: Vec<String>,
}

pub struct CompareInput<'a> {
    pub recording: &'a Recording,
    pub summary: &'a RecordingSummary,
    pub trajectory: &'a ScoreTrajectory,
}

const METRICS: &[(&str, bool)] = &[
    ("final_score", true),
    ("distinct_files", true),
    ("surviving_edit_count", true),
    ("edit_count", true),
    ("mean_cyclissity", true),
    ("duration_ms", false),
    ("session_count", false),
];

fn metric(s: &RecordingSummary, name: &str) -> f64 {
    match name {
        "final_score" => s.final_score as f64,
        "distinct_files" => s.distinct_files as f64,
        "surviving_edit_count" => s.surviving_edit_count as f64,
        "edit_count" => s.edit_count as f64,
        "mean_cyclissity" => s.mean_cyclissity,
        "duration_ms" => s.duration_ms as f64,
        "session_count" => s.session_count as f64,
        other => unreachable!("unknown metric {other}"),
    }
}

/// Rank recordings per metric; align their trajectories when they share a
/// manifest.
pub fn compare(inputs: &[CompareInput<'_>], rule: &OrderingRule) -> Result<ComparisonReport, CompareError> {
    if inputs.len() < 2 {
        return Err(CompareError::TooFewRecordings(inputs.len()));
    }
    let ids: Vec<String> = inputs.iter().map(|i| i.summary.recording_id.clone()).collect();
    let mut rankings = BTreeMap::new();
    let mut deltas = BTreeMap::new();
    for &(name, higher_is_better) in METRICS {
        let values: Vec<f64> = inputs.iter().map(|i| metric(i.summary, name)).collect();
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        order.sort_by(|&a, &b| {
            let ord = values[a].total_cmp(&values[b]);
            if higher_is_better { ord.reverse() } else { ord }
        });
        rankings.insert(name.to_string(), order.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>());
        deltas.insert(name.to_string(), values.iter().map(|v| v - values[0]).collect::<Vec<_>>());
    }
    let recordings: Vec<&Recording> = inputs.iter().map(|i| i.recording).collect();
    let (aligned_index, trajectories, warnings) = match align_recordings(&recordings, rule) {
        Ok(index) => {
            let trajectories = inputs
                .iter()
                .map(|i| {
                    let t0 = i.recording.events.first().map_or(0, |e| e.timestamp_ms);
                    AlignedTrajectory {
                        recording_id: i.summary.recording_id.clone(),
                        samples: i
                            .trajectory
                            .samples
                            .iter()
                            .map(|s| (s.timestamp_ms.saturating_sub(t0), s.cumulative_score, s.distinct_files_so_far))
                            .collect(),
                    }
                })
                .collect();
            (Some(index), Some(trajectories), Vec::new())
        }
        Err(e) => (None, None, vec![format!("trajectories not aligned: {e}")]),
    };
    Ok(ComparisonReport {
        recording_ids: ids,
        rankings,
        deltas,
        aligned_index,
        trajectories,
        warnings,
    })
}
