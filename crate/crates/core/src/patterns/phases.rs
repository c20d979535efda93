use super::detect::last_surviving_edit;
use super::{PhaseLabel, PhaseParams, PhaseSpan};
use crate::event::{Category, Event, Payload};
use crate::track::AggregatedEdit;

struct Coarse {
    label: PhaseLabel,
    start_ms: u64,
    end_ms: u64,
}

fn label_slots(events: &[Event], last_surviving: Option<(u64, u64)>, p: &PhaseParams) -> Vec<Option<PhaseLabel>> {
    let ts: Vec<u64> = events.iter().map(|e| e.timestamp_ms).collect();
    let mut edits = vec![0usize; events.len() + 1];
    let mut launches = vec![0usize; events.len() + 1];
    for (i, e) in events.iter().enumerate() {
        edits[i + 1] = edits[i] + usize::from(e.category() == Category::Edit);
        launches[i + 1] = launches[i] + usize::from(matches!(e.payload, Payload::Launch { .. }));
    }
    let t0 = ts[0];
    let slots = (ts[ts.len() - 1] - t0) / p.step_ms + 1;
    (0..slots)
        .map(|k| {
            let mid = t0 + k * p.step_ms + p.step_ms / 2;
            let w_start = mid.saturating_sub(p.window_ms / 2);
            let w_end = mid + p.window_ms / 2;
            let lo = ts.partition_point(|&t| t < w_start);
            let hi = ts.partition_point(|&t| t < w_end);
            if hi == lo {
                return None;
            }
            if last_surviving.is_some_and(|(ms, _)| w_start > ms) {
                return (launches[hi] > launches[lo]).then_some(PhaseLabel::Validation);
            }
            let d = (edits[hi] - edits[lo]) as f64 / (hi - lo) as f64;
            if d < p.edit_density_low {
                Some(PhaseLabel::Investigation)
            } else if d >= p.edit_density_high {
                Some(PhaseLabel::Edit)
            } else {
                None
            }
        })
        .collect()
}

fn merge(labels: &[Option<PhaseLabel>], t0: u64, step: u64) -> Vec<Coarse> {
    let mut out: Vec<Coarse> = Vec::new();
    let mut prev: Option<PhaseLabel> = None;
    for (k, label) in labels.iter().enumerate() {
        let start_ms = t0 + k as u64 * step;
        match (label, prev) {
            (Some(l), Some(p)) if *l == p => out.last_mut().expect("open span").end_ms = start_ms + step,
            (Some(l), _) => out.push(Coarse {
                label: *l,
                start_ms,
                end_ms: start_ms + step,
            }),
            (None, _) => {}
        }
        prev = *label;
    }
    out
}

/// Label stretches of the recording as Investigation, Edit or Validation.
///
/// Centred windows are labelled by edit density and merged; the merged spans
/// are then snapped to actual events. Edit spans cover the cluster of edit
/// events (gaps under half a window) they overlap, Validation starts right
/// after the last surviving edit, and Investigation fills what its
/// neighbours leave.
pub fn segment_phases(events: &[Event], edits: &[AggregatedEdit], p: &PhaseParams) -> Vec<PhaseSpan> {
    if events.is_empty() {
        return Vec::new();
    }
    let last_surviving = last_surviving_edit(edits);
    let labels = label_slots(events, last_surviving, p);
    let coarse = merge(&labels, events[0].timestamp_ms, p.step_ms);
    let half = p.window_ms / 2;
    let ts: Vec<u64> = events.iter().map(|e| e.timestamp_ms).collect();
    let is_edit: Vec<bool> = events.iter().map(|e| e.category() == Category::Edit).collect();
    let first_at = |t: u64| ts.partition_point(|&x| x < t);
    let validation_from = last_surviving.map_or(0, |last| events.partition_point(|e| (e.timestamp_ms, e.id) <= last));

    // (label, first index, last index), inclusive
    let mut snapped: Vec<(PhaseLabel, usize, usize)> = Vec::new();
    for c in &coarse {
        let lo = first_at(c.start_ms.saturating_sub(half));
        let hi = first_at(c.end_ms + half);
        if lo >= hi {
            continue;
        }
        let span = match c.label {
            PhaseLabel::Edit => {
                let Some(mut a) = (lo..hi).find(|&i| is_edit[i]) else { continue };
                let mut b = (lo..hi).rev().find(|&i| is_edit[i]).expect("found forward");
                while let Some(prev) = (0..a).rev().find(|&i| is_edit[i]).filter(|&i| ts[a] - ts[i] < half) {
                    a = prev;
                }
                while let Some(next) = (b + 1..events.len()).find(|&i| is_edit[i]).filter(|&i| ts[i] - ts[b] < half) {
                    b = next;
                }
                (a, b)
            }
            PhaseLabel::Validation => (lo.max(validation_from), hi - 1),
            PhaseLabel::Investigation => (lo, hi - 1),
        };
        snapped.push((c.label, span.0, span.1));
    }
    for k in 0..snapped.len() {
        if snapped[k].0 == PhaseLabel::Investigation {
            if let Some(next) = snapped.get(k + 1) {
                snapped[k].2 = snapped[k].2.min(next.1.saturating_sub(1));
            }
        }
    }
    let mut out: Vec<PhaseSpan> = Vec::new();
    let mut floor = 0usize;
    for (label, a, b) in snapped {
        let a = a.max(floor);
        if a > b {
            continue;
        }
        let span = PhaseSpan {
            label,
            start_event_id: events[a].id,
            end_event_id: events[b].id,
            start_ms: ts[a],
            end_ms: ts[b],
        };
        if span.duration_ms() < p.min_phase_ms {
            continue;
        }
        floor = b + 1;
        out.push(span);
    }
    out
}
