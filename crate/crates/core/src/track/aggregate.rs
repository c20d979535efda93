//! Keystroke aggregation: runs of single-line `CodeChangeEvent`s on the same
//! line collapse into one edit with the line's before and after text.
//!
//! File contents are unknown to the recorder, so every original line starts
//! out empty and only recorded changes are reflected in the text.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::event::{Event, Payload};
use crate::ingest::FileEntry;
use crate::spatial::{LineMaps, OriginalPosition};

pub const DEFAULT_MAX_GAP_MS: u64 = 2_000;

/// What became of an edit by the end of the recording.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EditFate {
    /// Last edit of its line, and the line still differs from its initial text.
    Surviving,
    /// A later edit rewrote the same line.
    Superseded,
    /// The line ended up back at its initial text, or was deleted.
    Reverted { at_event_id: u64 },
    /// Nothing about the line ever changed.
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregatedEdit {
    pub file: String,
    pub position: OriginalPosition,
    pub start_event_id: u64,
    pub end_event_id: u64,
    pub start_ms: u64,
    pub end_ms: u64,
    pub before: String,
    pub after: String,
    pub keystroke_count: usize,
    pub fate: EditFate,
}

impl AggregatedEdit {
    pub fn is_surviving(&self) -> bool {
        self.fate == EditFate::Surviving
    }
}

struct Open {
    file: String,
    position: OriginalPosition,
    line_idx: usize,
    start_id: u64,
    start_ms: u64,
    last_id: u64,
    last_ms: u64,
    before: String,
    keystrokes: usize,
    has_insertion: bool,
}

fn char_split(s: &str, n: usize) -> (&str, &str) {
    match s.char_indices().nth(n) {
        Some((i, _)) => s.split_at(i),
        None => (s, ""),
    }
}

fn skip_chars(s: &str, n: usize) -> &str {
    char_split(s, n).1
}

struct Aggregator {
    max_gap_ms: u64,
    maps: LineMaps,
    contents: BTreeMap<String, Vec<String>>,
    open: Option<Open>,
    done: Vec<AggregatedEdit>,
    deleted_at: HashMap<OriginalPosition, u64>,
}

impl Aggregator {
    fn close(&mut self) {
        if let Some(g) = self.open.take() {
            let after = self.contents[&g.file][g.line_idx].clone();
            self.done.push(AggregatedEdit {
                file: g.file,
                position: g.position,
                start_event_id: g.start_id,
                end_event_id: g.last_id,
                start_ms: g.start_ms,
                end_ms: g.last_ms,
                before: g.before,
                after,
                keystroke_count: g.keystrokes,
                fate: EditFate::Unchanged,
            });
        }
    }

    fn single(e: &Event, file: &str, position: OriginalPosition, before: String, after: String) -> AggregatedEdit {
        AggregatedEdit {
            file: file.to_string(),
            position,
            start_event_id: e.id,
            end_event_id: e.id,
            start_ms: e.timestamp_ms,
            end_ms: e.timestamp_ms,
            before,
            after,
            keystroke_count: 1,
            fate: EditFate::Unchanged,
        }
    }

    fn step(&mut self, e: &Event) {
        let Payload::CodeChange { file, line, col, inserted, deleted } = &e.payload else {
            return;
        };
        let Some(map) = self.maps.get(file) else {
            return;
        };
        let count = map.current_count();
        let removed = deleted.matches('\n').count();
        if count == 0 {
            // no line to attach text to; keep the genealogy in step only
            let _ = self.maps.get_mut(file).expect("present").apply_change(1, inserted, deleted);
            return;
        }
        let line = (*line).min(count);
        let idx = line as usize - 1;
        if idx + removed >= count as usize {
            return;
        }
        let position = map.map_to_original(line).expect("line in range");
        let gone: Vec<OriginalPosition> = (1..=removed as u32)
            .map(|k| map.map_to_original(line + k).expect("checked range"))
            .collect();

        let lines = &self.contents[file.as_str()];
        let old = lines[idx].clone();
        let parts: Vec<&str> = deleted.split('\n').collect();
        let (head, first_tail) = char_split(&old, *col as usize);
        let rest = if removed == 0 {
            skip_chars(first_tail, parts[0].chars().count())
        } else {
            skip_chars(&lines[idx + removed], parts[removed].chars().count())
        };
        let after_deletion = format!("{head}{rest}");
        let new_text = format!("{head}{inserted}{rest}");
        let multi_line = removed > 0 || inserted.contains('\n');
        let is_deletion = !deleted.is_empty();

        if multi_line {
            self.close();
            for pos in gone {
                self.deleted_at.insert(pos, e.id);
            }
        } else {
            let extends = self.open.as_ref().is_some_and(|g| {
                g.file == *file
                    && g.position == position
                    && e.timestamp_ms - g.last_ms <= self.max_gap_ms
                    && (!is_deletion || !g.has_insertion)
            });
            if extends {
                let g = self.open.as_mut().expect("checked");
                g.keystrokes += 1;
                g.last_id = e.id;
                g.last_ms = e.timestamp_ms;
                g.has_insertion |= !inserted.is_empty();
            } else {
                // A deletion right after typing on the same line ends that
                // group; the new group starts from the post-deletion text.
                let escapes = is_deletion
                    && self.open.as_ref().is_some_and(|g| {
                        g.file == *file && g.position == position && e.timestamp_ms - g.last_ms <= self.max_gap_ms
                    });
                self.close();
                self.open = Some(Open {
                    file: file.clone(),
                    position: position.clone(),
                    line_idx: idx,
                    start_id: e.id,
                    start_ms: e.timestamp_ms,
                    last_id: e.id,
                    last_ms: e.timestamp_ms,
                    before: if escapes { after_deletion } else { old.clone() },
                    keystrokes: 1,
                    has_insertion: !inserted.is_empty(),
                });
            }
        }

        let new_lines: Vec<String> = new_text.split('\n').map(str::to_string).collect();
        let added = new_lines.len() - 1;
        let lines = self.contents.get_mut(file.as_str()).expect("present");
        lines.splice(idx..=idx + removed, new_lines);
        let map = self.maps.get_mut(file).expect("present");
        map.apply_change(line, inserted, deleted).expect("range checked above");

        if multi_line {
            let lines = &self.contents[file.as_str()];
            let map = self.maps.get(file).expect("present");
            if lines[idx] != old {
                self.done.push(Self::single(e, file, position, old, lines[idx].clone()));
            }
            for k in 1..=added {
                let pos = map.map_to_original(line + k as u32).expect("inserted line");
                self.done.push(Self::single(e, file, pos, String::new(), lines[idx + k].clone()));
            }
        }
    }

    fn finish(mut self) -> Vec<AggregatedEdit> {
        self.close();
        let mut chains: BTreeMap<(String, OriginalPosition), Vec<usize>> = BTreeMap::new();
        for (i, g) in self.done.iter().enumerate() {
            chains.entry((g.file.clone(), g.position.clone())).or_default().push(i);
        }
        for ((file, position), members) in chains {
            let changed = members.iter().any(|&i| self.done[i].before != self.done[i].after);
            let initial = self.done[members[0]].before.clone();
            let (&last, earlier) = members.split_last().expect("non-empty chain");
            for &i in earlier {
                self.done[i].fate = EditFate::Superseded;
            }
            let current = self.maps.get(&file).and_then(|m| m.current_line_of(&position));
            self.done[last].fate = match current {
                _ if !changed => EditFate::Unchanged,
                None => EditFate::Reverted {
                    at_event_id: self.deleted_at.get(&position).copied().unwrap_or(self.done[last].end_event_id),
                },
                Some(l) if self.contents[&file][l as usize - 1] == initial => EditFate::Reverted {
                    at_event_id: self.done[last].end_event_id,
                },
                Some(_) => EditFate::Surviving,
            };
        }
        self.done
    }
}

/// Group keystrokes into line edits. Events must be in recording order.
pub fn aggregate_edits(events: &[Event], files: &[FileEntry], max_gap_ms: u64) -> Vec<AggregatedEdit> {
    let mut agg = Aggregator {
        max_gap_ms,
        maps: LineMaps::new(files),
        contents: files
            .iter()
            .map(|f| (f.path.clone(), vec![String::new(); f.initial_line_count as usize]))
            .collect(),
        open: None,
        done: Vec::new(),
        deleted_at: HashMap::new(),
    };
    for e in events {
        agg.step(e);
    }
    agg.finish()
}
