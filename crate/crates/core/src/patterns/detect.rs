use std::collections::{BTreeMap, HashMap, HashSet};

use glob::Pattern;
use regex::RegexSet;

use super::{OscillateParams, PatternError, PatternKind, PatternMatch, PhaseLabel, PhaseSpan, Region, RestartParams};
use crate::event::{DebugKind, Event, FileAction, LaunchMode, MouseKind, Payload};
use crate::ingest::{split_events, DEFAULT_LONG_IDLE_MS};
use crate::scoring::{cyclissity, CountMode, FileVisit};
use crate::spatial::OriginalPosition;
use crate::track::{AggregatedEdit, EditFate, Track};

fn single(kind: PatternKind, start: (u64, u64), end: (u64, u64), mut evidence: Vec<u64>) -> PatternMatch {
    evidence.sort_unstable();
    evidence.dedup();
    PatternMatch {
        kind,
        start_event_id: start.0,
        end_event_id: end.0,
        start_ms: start.1,
        end_ms: end.1,
        regions: None,
        evidence,
        removed_later: None,
    }
}

/// Glob set deciding which paths are documentation.
pub struct DocMatcher {
    globs: Vec<Pattern>,
}

impl DocMatcher {
    pub fn new(globs: &[String]) -> Result<Self, PatternError> {
        if globs.is_empty() {
            return Err(PatternError::DocFilesUnspecified);
        }
        let globs = globs
            .iter()
            .map(|g| Pattern::new(g).map_err(|e| PatternError::InvalidParams(format!("doc glob {g:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        Ok(DocMatcher { globs })
    }

    pub fn is_doc(&self, path: &str) -> bool {
        self.globs.iter().any(|g| g.matches(path))
    }
}

fn is_view_point(e: &Event) -> bool {
    matches!(
        e.payload,
        Payload::Scroll { .. }
            | Payload::TextSelection { .. }
            | Payload::EditorTextCursor { .. }
            | Payload::EditorMouse { kind: MouseKind::Click, .. }
            | Payload::File { action: FileAction::Open, .. }
    )
}

struct Stop {
    file: String,
    anchor: u32,
    lo: u32,
    hi: u32,
    arrival: (u64, u64),
}

/// Back-and-forth viewing between two regions.
///
/// Consecutive view positions within `region_gap_lines` of a stop's first
/// position (same file) belong to that stop. A run of stops where every stop
/// is in the same region as the one two before it alternates between two
/// regions; runs with enough switches inside the window become matches.
pub fn detect_oscillate(track: &Track, events: &[Event], params: &OscillateParams) -> Vec<PatternMatch> {
    let by_id: HashMap<u64, &Event> = events.iter().map(|e| (e.id, e)).collect();
    let gap = params.region_gap_lines;
    let mut stops: Vec<Stop> = Vec::new();
    for p in &track.points {
        let (Some(file), true) = (&p.file, p.positional) else { continue };
        if !by_id.get(&p.event_id).is_some_and(|e| is_view_point(e)) {
            continue;
        }
        match stops.last_mut() {
            Some(s) if s.file == *file && s.anchor.abs_diff(p.global_pos) < gap => {
                s.lo = s.lo.min(p.global_pos);
                s.hi = s.hi.max(p.global_pos);
            }
            _ => stops.push(Stop {
                file: file.clone(),
                anchor: p.global_pos,
                lo: p.global_pos,
                hi: p.global_pos,
                arrival: (p.event_id, p.timestamp_ms),
            }),
        }
    }
    let same = |a: &Stop, b: &Stop| a.file == b.file && a.anchor.abs_diff(b.anchor) < gap;

    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < stops.len() {
        let mut j = i + 1;
        while j + 1 < stops.len()
            && same(&stops[j + 1], &stops[j - 1])
            && stops[j + 1].arrival.1 - stops[i].arrival.1 <= params.window_ms
        {
            j += 1;
        }
        if (j - i) as u32 >= params.min_alternations {
            let region = |parity: usize| {
                let members = stops[i..=j].iter().skip(parity).step_by(2);
                let (lo, hi) = members.fold((u32::MAX, 0), |(lo, hi), s| (lo.min(s.lo), hi.max(s.hi)));
                Region {
                    file: stops[i + parity].file.clone(),
                    first: lo,
                    last: hi,
                }
            };
            let mut m = single(
                PatternKind::Oscillate,
                stops[i].arrival,
                stops[j].arrival,
                stops[i..=j].iter().map(|s| s.arrival.0).collect(),
            );
            m.regions = Some((region(0), region(1)));
            out.push(m);
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Going back to the instructions after editing started, followed by a broad
/// scan of files the developer has not been cycling through.
pub fn detect_restart(history: &[FileVisit], phases: &[PhaseSpan], docs: &DocMatcher, params: &RestartParams) -> Vec<PatternMatch> {
    let Some(edit_start) = phases.iter().find(|p| p.label == PhaseLabel::Edit).map(|p| p.start_ms) else {
        return Vec::new();
    };
    let cyc: Vec<f64> = history.iter().map(|v| cyclissity::<f64>(v, CountMode::Visits).value).collect();
    let mut out = Vec::new();
    let mut busy_until: Option<u64> = None;
    for (i, v) in history.iter().enumerate() {
        let opens_doc_run = docs.is_doc(&v.path) && (i == 0 || !docs.is_doc(&history[i - 1].path));
        if !opens_doc_run || v.timestamp_ms < edit_start || busy_until.is_some_and(|t| v.timestamp_ms <= t) {
            continue;
        }
        let horizon = v.timestamp_ms + params.window_ms;
        let window: Vec<usize> = (i + 1..history.len())
            .take_while(|&k| history[k].timestamp_ms <= horizon)
            .filter(|&k| !docs.is_doc(&history[k].path))
            .collect();
        let mut per_file: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for &k in &window {
            per_file.entry(history[k].path.as_str()).or_default().push(cyc[k]);
        }
        let low: HashSet<&str> = per_file
            .iter()
            .filter(|(_, vals)| vals.iter().sum::<f64>() / (vals.len() as f64) < params.low_cyclissity)
            .map(|(p, _)| *p)
            .collect();
        if low.len() < params.breadth_files as usize {
            continue;
        }
        let counted: Vec<usize> = window.into_iter().filter(|&k| low.contains(history[k].path.as_str())).collect();
        let last = &history[*counted.last().expect("breadth is positive")];
        let mut evidence = vec![v.event_id];
        evidence.extend(counted.iter().map(|&k| history[k].event_id));
        out.push(single(
            PatternKind::Restart,
            (v.event_id, v.timestamp_ms),
            (last.event_id, last.timestamp_ms),
            evidence,
        ));
        busy_until = Some(last.timestamp_ms);
    }
    out
}

/// Code file, then one or more doc files, then a code file again.
pub fn detect_doc_switch(history: &[FileVisit], docs: &DocMatcher) -> Vec<PatternMatch> {
    let mut out = Vec::new();
    let mut claimed: Option<u64> = None;
    let mut i = 0;
    while i < history.len() {
        if docs.is_doc(&history[i].path) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < history.len() && docs.is_doc(&history[j].path) {
            j += 1;
        }
        if j == i + 1 || j == history.len() {
            i = j.max(i + 1);
            continue;
        }
        let code = &history[i];
        let back = &history[j];
        let mut evidence: Vec<u64> = history[i + 1..j].iter().map(|v| v.event_id).collect();
        let start = if claimed == Some(code.event_id) {
            &history[i + 1]
        } else {
            evidence.push(code.event_id);
            code
        };
        evidence.push(back.event_id);
        out.push(single(
            PatternKind::DocSwitch,
            (start.event_id, start.timestamp_ms),
            (back.event_id, back.timestamp_ms),
            evidence,
        ));
        claimed = Some(back.event_id);
        i = j;
    }
    out
}

/// Breakpoints set, a debug launch, then a breakpoint hit before the next
/// launch, all in one session.
pub fn detect_debugger_use(events: &[Event]) -> Vec<PatternMatch> {
    let mut out = Vec::new();
    for session in split_events(events, DEFAULT_LONG_IDLE_MS) {
        let evs = session.events;
        let mut pending: Vec<(u64, u64)> = Vec::new();
        for (idx, e) in evs.iter().enumerate() {
            match &e.payload {
                Payload::Debug { kind: DebugKind::BreakpointSet, .. } => pending.push((e.id, e.timestamp_ms)),
                Payload::Launch { mode: LaunchMode::Debug, .. } if !pending.is_empty() => {
                    let hit = evs[idx + 1..]
                        .iter()
                        .take_while(|x| !matches!(x.payload, Payload::Launch { .. }))
                        .find(|x| matches!(x.payload, Payload::Debug { kind: DebugKind::BreakpointHit, .. }));
                    if let Some(hit) = hit {
                        let mut evidence: Vec<u64> = pending.iter().map(|p| p.0).collect();
                        evidence.extend([e.id, hit.id]);
                        out.push(single(PatternKind::DebuggerUse, pending[0], (hit.id, hit.timestamp_ms), evidence));
                        pending.clear();
                    }
                }
                _ => {}
            }
        }
    }
    out
}

fn final_fates(edits: &[AggregatedEdit]) -> HashMap<(&str, &OriginalPosition), EditFate> {
    let mut fates = HashMap::new();
    for e in edits {
        if e.fate != EditFate::Superseded {
            fates.insert((e.file.as_str(), &e.position), e.fate);
        }
    }
    fates
}

/// Output statements typed in and then a launch in the same session.
pub fn detect_poor_mans_debugger(events: &[Event], edits: &[AggregatedEdit], regexes: &[String]) -> Result<Vec<PatternMatch>, PatternError> {
    let set = RegexSet::new(regexes).map_err(|e| PatternError::InvalidParams(format!("pmd regex: {e}")))?;
    let fates = final_fates(edits);
    let mut candidates: Vec<&AggregatedEdit> = edits
        .iter()
        .filter(|e| set.is_match(&e.after) && !set.is_match(&e.before))
        .collect();
    candidates.sort_by_key(|e| (e.start_ms, e.start_event_id));
    let mut claimed = vec![false; candidates.len()];
    let mut out = Vec::new();
    for session in split_events(events, DEFAULT_LONG_IDLE_MS) {
        for launch in session.events.iter().filter(|e| matches!(e.payload, Payload::Launch { .. })) {
            let mine: Vec<usize> = (0..candidates.len())
                .filter(|&k| {
                    let c = candidates[k];
                    !claimed[k] && c.start_ms >= session.start_ms && c.end_event_id < launch.id && c.end_ms <= launch.timestamp_ms
                })
                .collect();
            let Some(&first) = mine.first() else { continue };
            let mut evidence = vec![launch.id];
            let mut removed = false;
            for &k in &mine {
                claimed[k] = true;
                let c = candidates[k];
                evidence.extend([c.start_event_id, c.end_event_id]);
                removed |= matches!(fates.get(&(c.file.as_str(), &c.position)), Some(EditFate::Reverted { .. }));
            }
            let c = candidates[first];
            let mut m = single(
                PatternKind::PoorMansDebugger,
                (c.start_event_id, c.start_ms),
                (launch.id, launch.timestamp_ms),
                evidence,
            );
            m.removed_later = Some(removed);
            out.push(m);
        }
    }
    Ok(out)
}

/// The last edit whose text survives to the end, as (end ms, end event id).
pub fn last_surviving_edit(edits: &[AggregatedEdit]) -> Option<(u64, u64)> {
    edits.iter().filter(|e| e.is_surviving()).map(|e| (e.end_ms, e.end_event_id)).max()
}

/// Launches after the last surviving edit.
pub fn detect_validation_launches(events: &[Event], edits: &[AggregatedEdit]) -> Vec<PatternMatch> {
    let Some(last) = last_surviving_edit(edits) else {
        return Vec::new();
    };
    events
        .iter()
        .filter(|e| matches!(e.payload, Payload::Launch { .. }) && (e.timestamp_ms, e.id) > last)
        .map(|e| single(PatternKind::ValidationLaunch, (e.id, e.timestamp_ms), (e.id, e.timestamp_ms), vec![e.id]))
        .collect()
}
