use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{cyclissity, FileVisit, ScoringRules, TriggerKind};
use crate::event::Event;
use crate::patterns::{PatternKind, PatternMatch, PhaseLabel, PhaseSpan, Region};
use crate::track::{AggregatedEdit, EditFate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trigger {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub kind: TriggerKind,
    pub delta: i64,
    /// Index into the pattern list, for pattern-driven triggers.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pattern: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreSample {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub cumulative_score: i64,
    pub distinct_files_so_far: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditMark {
    pub event_id: u64,
    pub timestamp_ms: u64,
    pub surviving: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSymbol {
    pub pattern: usize,
    pub kind: PatternKind,
    pub event_id: u64,
    pub timestamp_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreTrajectory {
    pub samples: Vec<ScoreSample>,
    pub triggers: Vec<Trigger>,
    pub edits: Vec<EditMark>,
    pub patterns: Vec<PatternSymbol>,
    pub final_score: i64,
}

impl ScoreTrajectory {
    pub fn max_distinct(&self) -> u64 {
        self.samples.last().map_or(0, |s| s.distinct_files_so_far)
    }
}

fn overlaps(a: &Region, b: &Region) -> bool {
    a.file == b.file && a.first <= b.last && b.first <= a.last
}

fn same_pair(a: &(Region, Region), b: &(Region, Region)) -> bool {
    (overlaps(&a.0, &b.0) && overlaps(&a.1, &b.1)) || (overlaps(&a.0, &b.1) && overlaps(&a.1, &b.0))
}

/// Triggers before repetition counting, with zero deltas as placeholders.
fn collect_triggers(
    events: &[Event],
    patterns: &[PatternMatch],
    phases: &[PhaseSpan],
    history: &[FileVisit],
    edits: &[AggregatedEdit],
    rules: &ScoringRules,
) -> Vec<Trigger> {
    let ts_of: HashMap<u64, u64> = events.iter().map(|e| (e.id, e.timestamp_ms)).collect();
    let first_edit_phase = phases.iter().find(|p| p.label == PhaseLabel::Edit).map(|p| p.start_ms);
    let mut out = Vec::new();
    let mut push = |event_id: u64, timestamp_ms: u64, kind: TriggerKind, pattern: Option<usize>| {
        out.push(Trigger {
            event_id,
            timestamp_ms,
            kind,
            delta: 0,
            pattern,
        })
    };
    for v in history {
        if v.recency_distance.is_some() && cyclissity::<f64>(v, rules.count_mode).value >= rules.high_cyclissity_threshold {
            push(v.event_id, v.timestamp_ms, TriggerKind::HighCyclissityRevisit, None);
        }
    }
    for (i, m) in patterns.iter().enumerate() {
        let kind = match m.kind {
            PatternKind::DocSwitch if first_edit_phase.is_none_or(|t| m.end_ms < t) => TriggerKind::DocSwitchBeforeEdit,
            PatternKind::DocSwitch => continue,
            PatternKind::ValidationLaunch => TriggerKind::ValidationLaunch,
            PatternKind::Restart => TriggerKind::Restart,
            PatternKind::Oscillate => TriggerKind::OscillateRepetition,
            PatternKind::PoorMansDebugger => TriggerKind::PoorMansDebuggerRepetition,
            PatternKind::DebuggerUse => TriggerKind::DebuggerUse,
        };
        push(m.end_event_id, m.end_ms, kind, Some(i));
    }
    let mut reverted: BTreeMap<u64, usize> = BTreeMap::new();
    for e in edits {
        match e.fate {
            EditFate::Surviving => push(e.end_event_id, e.end_ms, TriggerKind::SurvivingEdit, None),
            EditFate::Reverted { at_event_id } => *reverted.entry(at_event_id).or_default() += 1,
            _ => {}
        }
    }
    for (at, n) in reverted {
        let t = ts_of.get(&at).copied().unwrap_or(0);
        for _ in 0..n {
            push(at, t, TriggerKind::RevertedEdit, None);
        }
    }
    out
}

/// Accumulate rated triggers into a score trajectory.
///
/// Triggers are sorted by position before repetition counters run, so the
/// result does not depend on the order detectors reported their matches.
pub fn run_state_machine(
    events: &[Event],
    patterns: &[PatternMatch],
    phases: &[PhaseSpan],
    history: &[FileVisit],
    edits: &[AggregatedEdit],
    rules: &ScoringRules,
) -> ScoreTrajectory {
    let mut triggers = collect_triggers(events, patterns, phases, history, edits, rules);
    let sort_key = |t: &Trigger| {
        let p = t.pattern.map(|i| (patterns[i].start_ms, patterns[i].start_event_id));
        (t.timestamp_ms, t.event_id, t.kind, p)
    };
    triggers.sort_by_key(sort_key);

    let mut counts: HashMap<TriggerKind, u32> = HashMap::new();
    let mut pair_counts: Vec<((Region, Region), u32)> = Vec::new();
    for t in &mut triggers {
        let occurrence = match (t.kind, t.pattern.and_then(|i| patterns[i].regions.as_ref())) {
            (TriggerKind::OscillateRepetition, Some(pair)) => match pair_counts.iter_mut().find(|(p, _)| same_pair(p, pair)) {
                Some((_, n)) => {
                    *n += 1;
                    *n
                }
                None => {
                    pair_counts.push((pair.clone(), 1));
                    1
                }
            },
            _ => {
                let n = counts.entry(t.kind).or_default();
                *n += 1;
                *n
            }
        };
        t.delta = rules.delta(t.kind, occurrence);
    }

    let distinct_at: HashMap<u64, u64> = history.iter().map(|v| (v.event_id, v.distinct_so_far)).collect();
    let mut by_event: HashMap<u64, i64> = HashMap::new();
    for t in &triggers {
        *by_event.entry(t.event_id).or_default() += t.delta;
    }
    let mut samples = vec![ScoreSample {
        event_id: events.first().map_or(0, |e| e.id),
        timestamp_ms: events.first().map_or(0, |e| e.timestamp_ms),
        cumulative_score: 0,
        distinct_files_so_far: 0,
    }];
    let (mut score, mut distinct) = (0i64, 0u64);
    for e in events {
        let d = distinct_at.get(&e.id);
        let delta = by_event.get(&e.id);
        if d.is_none() && delta.is_none() {
            continue;
        }
        if let Some(d) = d {
            distinct = distinct.max(*d);
        }
        score += delta.copied().unwrap_or(0);
        samples.push(ScoreSample {
            event_id: e.id,
            timestamp_ms: e.timestamp_ms,
            cumulative_score: score,
            distinct_files_so_far: distinct,
        });
    }

    let mut edit_marks: Vec<EditMark> = edits
        .iter()
        .map(|e| EditMark {
            event_id: e.end_event_id,
            timestamp_ms: e.end_ms,
            surviving: e.is_surviving(),
        })
        .collect();
    edit_marks.sort_by_key(|m| (m.timestamp_ms, m.event_id));
    let symbols = patterns
        .iter()
        .enumerate()
        .map(|(i, m)| PatternSymbol {
            pattern: i,
            kind: m.kind,
            event_id: m.end_event_id,
            timestamp_ms: m.end_ms,
        })
        .collect();
    ScoreTrajectory {
        samples,
        final_score: triggers.iter().map(|t| t.delta).sum(),
        triggers,
        edits: edit_marks,
        patterns: symbols,
    }
}
