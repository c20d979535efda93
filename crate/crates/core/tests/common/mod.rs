//! Independent reference implementations and seeded input generators shared
//! by the property tests and the acceptance suite.
#![allow(dead_code)]

pub mod checks;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracelens::event::{Category, Event, EventContext, EventType, Payload};
use tracelens::track::{Track, TrackPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Line genealogy

/// Structural line edit in current line numbers.
#[derive(Debug, Clone, Copy)]
pub enum LineOp {
    Insert { after: u32, count: u32 },
    Delete { start: u32, count: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Origin {
    Original(u32),
    Inserted(usize),
}

/// One record per current line; inserted lines remember which original line
/// they were attached to when created and their ordinal there.
pub struct NaiveGenealogy {
    lines: Vec<Origin>,
    inserted: Vec<(u32, u32)>,
    per_anchor: HashMap<u32, u32>,
}

impl NaiveGenealogy {
    pub fn new(n: u32) -> Self {
        NaiveGenealogy {
            lines: (1..=n).map(Origin::Original).collect(),
            inserted: Vec::new(),
            per_anchor: HashMap::new(),
        }
    }

    pub fn len(&self) -> u32 {
        self.lines.len() as u32
    }

    pub fn apply(&mut self, op: LineOp) {
        match op {
            LineOp::Insert { after, count } => {
                let mut anchor = 0;
                for k in (0..after as usize).rev() {
                    if let Origin::Original(o) = self.lines[k] {
                        anchor = o;
                        break;
                    }
                }
                for c in 0..count {
                    let ordinal = self.per_anchor.entry(anchor).or_insert(0);
                    *ordinal += 1;
                    self.inserted.push((anchor, *ordinal));
                    self.lines
                        .insert(after as usize + c as usize, Origin::Inserted(self.inserted.len() - 1));
                }
            }
            LineOp::Delete { start, count } => {
                for _ in 0..count {
                    self.lines.remove(start as usize - 1);
                }
            }
        }
    }

    /// (anchor, pocket) of current line `line`.
    pub fn origin(&self, line: u32) -> (u32, u32) {
        match self.lines[line as usize - 1] {
            Origin::Original(o) => (o, 0),
            Origin::Inserted(i) => self.inserted[i],
        }
    }
}

/// A random valid sequence of structural edits on a file of `n` lines.
pub fn random_line_script(r: &mut ChaCha8Rng, n: u32, max_ops: usize) -> Vec<LineOp> {
    let mut len = n;
    let ops = r.gen_range(0..=max_ops);
    let mut out = Vec::with_capacity(ops);
    for _ in 0..ops {
        if len > 0 && r.gen_bool(0.45) {
            let start = r.gen_range(1..=len);
            let count = r.gen_range(1..=(len - start + 1).min(4));
            out.push(LineOp::Delete { start, count });
            len -= count;
        } else {
            let after = r.gen_range(0..=len);
            let count = r.gen_range(1..=3);
            out.push(LineOp::Insert { after, count });
            len += count;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Keystroke replay

pub fn code_change(id: u64, t: u64, line: u32, col: u32, ins: &str, del: &str) -> Event {
    Event::new(
        id,
        t,
        Payload::CodeChange {
            file: "F".into(),
            line,
            col,
            inserted: ins.into(),
            deleted: del.into(),
        },
        EventContext::in_file("F"),
    )
}

/// Apply one change to plain line contents, nothing else.
pub fn raw_apply(lines: &mut Vec<String>, line: u32, col: u32, ins: &str, del: &str) {
    let idx = line as usize - 1;
    let mut joined: Vec<char> = Vec::new();
    let span = del.matches('\n').count();
    for (k, l) in lines[idx..=idx + span].iter().enumerate() {
        if k > 0 {
            joined.push('\n');
        }
        joined.extend(l.chars());
    }
    let at = col as usize;
    let removed = del.chars().count();
    assert_eq!(joined[at..at + removed].iter().collect::<String>(), del, "script deletes what is there");
    joined.splice(at..at + removed, ins.chars());
    let text: String = joined.into_iter().collect();
    lines.splice(idx..=idx + span, text.split('\n').map(str::to_string));
}

/// A random keystroke script on file "F" with `n` initially empty lines.
/// Returns the events and the ids of deletions that directly follow an
/// insertion on the same line within `max_gap` ms.
pub fn random_keystroke_script(r: &mut ChaCha8Rng, n: u32, steps: usize, max_gap: u64) -> (Vec<Event>, Vec<u64>) {
    let mut lines = vec![String::new(); n as usize];
    let mut events = Vec::new();
    let mut planted = Vec::new();
    let mut t = 1_000u64;
    let mut last: Option<(u32, bool, u64)> = None;
    let mut focus = r.gen_range(1..=n);
    for step in 0..steps {
        let id = step as u64 + 1;
        t += if r.gen_bool(0.8) { r.gen_range(50..=max_gap) } else { r.gen_range(max_gap + 1..=3 * max_gap) };
        if r.gen_bool(0.1) {
            focus = r.gen_range(1..=lines.len() as u32);
        }
        let line = focus.min(lines.len() as u32);
        let len = lines[line as usize - 1].chars().count() as u32;
        let roll: f64 = r.gen();
        let (col, ins, del): (u32, String, String) = if roll < 0.6 || (len == 0 && roll < 0.9) {
            let c = ["a", "b", "c", "x", "y", "z", "(", ")", ";", " "][r.gen_range(0..10)];
            (r.gen_range(0..=len), c.to_string(), String::new())
        } else if roll < 0.85 && len > 0 {
            let col = r.gen_range(0..len);
            let ch: String = lines[line as usize - 1].chars().nth(col as usize).unwrap().to_string();
            (col, String::new(), ch)
        } else if roll < 0.93 {
            (r.gen_range(0..=len), "\n".to_string(), String::new())
        } else if (line as usize) < lines.len() {
            (len, String::new(), "\n".to_string())
        } else {
            (len, "q".to_string(), String::new())
        };
        if !del.is_empty() && !del.contains('\n') {
            if let Some((l, was_insert, lt)) = last {
                if l == line && was_insert && t - lt <= max_gap {
                    planted.push(id);
                }
            }
        }
        raw_apply(&mut lines, line, col, &ins, &del);
        let single = !ins.contains('\n') && !del.contains('\n');
        last = single.then_some((line, !ins.is_empty(), t));
        if !single {
            focus = focus.min(lines.len() as u32).max(1);
        }
        events.push(code_change(id, t, line, col, &ins, &del));
    }
    (events, planted)
}

// ---------------------------------------------------------------------------
// Cyclissity

/// (P_c, N) recomputed from scratch for the last visit of `prefix`, after
/// collapsing consecutive duplicates. `None` for a first visit.
pub fn brute_recency(prefix: &[String]) -> Option<(u64, u64)> {
    let mut visits: Vec<&String> = Vec::new();
    for p in prefix {
        if visits.last() != Some(&p) {
            visits.push(p);
        }
    }
    let n = visits.len();
    let cur = visits[n - 1];
    let prev = visits[..n - 1].iter().rposition(|v| *v == cur)?;
    Some(((n - 1 - prev) as u64, n as u64))
}

pub fn random_visits(r: &mut ChaCha8Rng, max_len: usize) -> Vec<String> {
    let files = r.gen_range(1..=12);
    let len = r.gen_range(1..=max_len);
    (0..len).map(|_| format!("f{}.java", r.gen_range(0..files))).collect()
}

pub fn focus_events(paths: &[String]) -> Vec<Event> {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            Event::new(
                i as u64 + 1,
                1_000 + i as u64 * 500,
                Payload::File {
                    path: p.clone(),
                    action: tracelens::event::FileAction::Open,
                },
                EventContext::in_file(p.clone()),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Tracks

pub fn random_track(r: &mut ChaCha8Rng, max_len: usize) -> Track {
    let len = r.gen_range(0..=max_len);
    let mut t = 0u64;
    let mut pos: i64 = r.gen_range(1..500);
    let points = (0..len)
        .map(|i| {
            if r.gen_bool(0.85) {
                t += r.gen_range(1..5_000);
            }
            pos = if r.gen_bool(0.1) { r.gen_range(1..2_000) } else { (pos + r.gen_range(-40..=40)).max(1) };
            TrackPoint {
                event_id: i as u64 + 1,
                timestamp_ms: t,
                global_pos: pos as u32,
                visible_span: None,
                marker: EventType::ScrollEvent,
                category: Category::Navigation,
                file: None,
                pocket: false,
                positional: true,
            }
        })
        .collect();
    Track::new(points, Vec::new())
}

/// Largest vertical distance of any original point from the simplified
/// polyline through `kept` (sorted indices into `track.points`).
pub fn max_vertical_deviation(track: &Track, kept: &[usize]) -> f64 {
    let p = &track.points;
    let mut worst = 0.0f64;
    for w in kept.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (xa, xb) = (p[a].timestamp_ms as f64, p[b].timestamp_ms as f64);
        let (ya, yb) = (f64::from(p[a].global_pos), f64::from(p[b].global_pos));
        for (i, q) in p.iter().enumerate().take(b).skip(a + 1) {
            let s = if xb > xa {
                (q.timestamp_ms as f64 - xa) / (xb - xa)
            } else {
                (i - a) as f64 / (b - a) as f64
            };
            worst = worst.max((f64::from(q.global_pos) - (ya + (yb - ya) * s)).abs());
        }
    }
    worst
}
