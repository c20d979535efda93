//! Code pockets: line genealogy that keeps original line numbers stable
//! while a file is edited.
//!
//! Every original line `k` is an anchor. Lines inserted later become pocket
//! entries `(k, j)` hanging off the nearest preceding surviving anchor, with
//! `j` counting insertions on that anchor. Deleted anchors are tombstoned and
//! keep their slot on the global axis; deleted pocket lines simply vanish.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SpatialError;
use crate::ingest::FileEntry;

/// Where a current line came from, in original-line coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OriginalPosition {
    pub file: String,
    /// Original line number; 0 is the virtual anchor before line 1.
    pub anchor: u32,
    /// 0 for the anchor line itself, otherwise the insertion ordinal.
    pub pocket: u32,
}

/// A line-structure change expressed in current line numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineDelta {
    /// Insert `count` lines after current line `after` (0 = before line 1).
    Insert { after: u32, count: u32 },
    /// Delete `count` lines starting at current line `start`.
    Delete { start: u32, count: u32 },
}

/// Line deltas implied by a text change at (`line`, col): the deleted text
/// removes the lines it spans after `line`, the inserted text adds one line
/// after `line` per newline.
pub fn deltas_for_change(line: u32, inserted: &str, deleted: &str) -> Vec<LineDelta> {
    let removed = deleted.matches('\n').count() as u32;
    let added = inserted.matches('\n').count() as u32;
    let mut out = Vec::new();
    if removed > 0 {
        out.push(LineDelta::Delete { start: line + 1, count: removed });
    }
    if added > 0 {
        out.push(LineDelta::Insert { after: line, count: added });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    anchor: u32,
    pocket: u32,
}

/// Genealogy of one file's lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMap {
    file: String,
    original_count: u32,
    slots: Vec<Slot>,
    /// index 0 is the virtual anchor and is always alive
    alive: Vec<bool>,
    next_pocket: Vec<u32>,
}

impl LineMap {
    pub fn new(file: impl Into<String>, original_count: u32) -> Self {
        let n = original_count as usize;
        LineMap {
            file: file.into(),
            original_count,
            slots: (1..=original_count).map(|anchor| Slot { anchor, pocket: 0 }).collect(),
            alive: vec![true; n + 1],
            next_pocket: vec![0; n + 1],
        }
    }

    pub fn file(&self) -> &str {
        &self.file
    }

    pub fn original_count(&self) -> u32 {
        self.original_count
    }

    pub fn current_count(&self) -> u32 {
        self.slots.len() as u32
    }

    pub fn is_anchor_alive(&self, anchor: u32) -> bool {
        self.alive.get(anchor as usize).copied().unwrap_or(false)
    }

    fn out_of_range(&self, msg: String) -> SpatialError {
        SpatialError::EditOutOfRange {
            file: self.file.clone(),
            message: msg,
        }
    }

    pub fn apply_edit(&mut self, delta: LineDelta) -> Result<(), SpatialError> {
        let count = self.current_count();
        match delta {
            LineDelta::Insert { after, count: n } => {
                if after > count {
                    return Err(self.out_of_range(format!("insert after line {after} of {count}")));
                }
                let anchor = self.slots[..after as usize]
                    .iter()
                    .rev()
                    .find(|s| s.pocket == 0)
                    .map_or(0, |s| s.anchor);
                let base = &mut self.next_pocket[anchor as usize];
                let new_slots: Vec<Slot> = (0..n)
                    .map(|_| {
                        *base += 1;
                        Slot { anchor, pocket: *base }
                    })
                    .collect();
                let at = after as usize;
                self.slots.splice(at..at, new_slots);
            }
            LineDelta::Delete { start, count: n } => {
                if n == 0 {
                    return Ok(());
                }
                if start == 0 || start + n - 1 > count {
                    return Err(self.out_of_range(format!("delete lines {start}..{} of {count}", start + n - 1)));
                }
                let from = start as usize - 1;
                for slot in self.slots.drain(from..from + n as usize) {
                    if slot.pocket == 0 {
                        self.alive[slot.anchor as usize] = false;
                    }
                }
            }
        }
        Ok(())
    }

    /// Apply the deltas of one text change. All-or-nothing.
    pub fn apply_change(&mut self, line: u32, inserted: &str, deleted: &str) -> Result<(), SpatialError> {
        if line == 0 || line > self.current_count().max(1) {
            return Err(self.out_of_range(format!("change at line {line} of {}", self.current_count())));
        }
        let mut next = self.clone();
        for d in deltas_for_change(line, inserted, deleted) {
            let d = match d {
                // an empty file still has one (virtual) editable line
                LineDelta::Insert { after, count } => LineDelta::Insert {
                    after: after.min(next.current_count()),
                    count,
                },
                other => other,
            };
            next.apply_edit(d)?;
        }
        *self = next;
        Ok(())
    }

    pub fn map_to_original(&self, current_line: u32) -> Result<OriginalPosition, SpatialError> {
        let slot = current_line
            .checked_sub(1)
            .and_then(|i| self.slots.get(i as usize))
            .ok_or_else(|| SpatialError::LineOutOfRange {
                file: self.file.clone(),
                line: current_line,
                max: self.current_count(),
            })?;
        Ok(OriginalPosition {
            file: self.file.clone(),
            anchor: slot.anchor,
            pocket: slot.pocket,
        })
    }

    /// Like [`map_to_original`](Self::map_to_original) but clamps the line
    /// into the current file; `None` only when the file is empty.
    pub fn map_clamped(&self, current_line: u32) -> Option<OriginalPosition> {
        let n = self.current_count();
        (n > 0).then(|| self.map_to_original(current_line.clamp(1, n)).expect("clamped"))
    }

    /// Current line number of an original position, if it still exists.
    pub fn current_line_of(&self, pos: &OriginalPosition) -> Option<u32> {
        self.slots
            .iter()
            .position(|s| s.anchor == pos.anchor && s.pocket == pos.pocket)
            .map(|i| i as u32 + 1)
    }
}

/// Line maps for every file of a manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LineMaps {
    maps: BTreeMap<String, LineMap>,
}

impl LineMaps {
    pub fn new(files: &[FileEntry]) -> Self {
        LineMaps {
            maps: files
                .iter()
                .map(|f| (f.path.clone(), LineMap::new(f.path.clone(), f.initial_line_count)))
                .collect(),
        }
    }

    pub fn get(&self, file: &str) -> Option<&LineMap> {
        self.maps.get(file)
    }

    pub fn get_mut(&mut self, file: &str) -> Option<&mut LineMap> {
        self.maps.get_mut(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(anchor: u32, pocket: u32) -> OriginalPosition {
        OriginalPosition { file: "F".into(), anchor, pocket }
    }

    #[test]
    fn pristine_identity() {
        let m = LineMap::new("F", 20);
        for k in 1..=20 {
            assert_eq!(m.map_to_original(k).unwrap(), pos(k, 0));
        }
        assert!(m.map_to_original(21).is_err());
        assert!(m.map_to_original(0).is_err());
    }

    #[test]
    fn insert_creates_pockets_on_anchor() {
        let mut m = LineMap::new("F", 20);
        m.apply_edit(LineDelta::Insert { after: 10, count: 1 }).unwrap();
        assert_eq!(m.map_to_original(11).unwrap(), pos(10, 1));
        assert_eq!(m.map_to_original(12).unwrap(), pos(11, 0));

        let mut m = LineMap::new("F", 20);
        m.apply_edit(LineDelta::Insert { after: 10, count: 3 }).unwrap();
        assert_eq!(m.map_to_original(12).unwrap(), pos(10, 2));
        assert_eq!(m.current_count(), 23);
    }

    #[test]
    fn delete_tombstones_anchor() {
        let mut m = LineMap::new("F", 20);
        m.apply_edit(LineDelta::Delete { start: 5, count: 1 }).unwrap();
        assert!(!m.is_anchor_alive(5));
        assert_eq!(m.map_to_original(5).unwrap(), pos(6, 0));

        let mut m = LineMap::new("F", 20);
        m.apply_edit(LineDelta::Delete { start: 1, count: 2 }).unwrap();
        assert_eq!(m.map_to_original(1).unwrap(), pos(3, 0));
    }

    #[test]
    fn insert_then_delete_is_noop_for_survivors() {
        let pristine = LineMap::new("F", 15);
        let mut m = pristine.clone();
        m.apply_edit(LineDelta::Insert { after: 7, count: 1 }).unwrap();
        m.apply_edit(LineDelta::Delete { start: 8, count: 1 }).unwrap();
        for k in 1..=15 {
            assert_eq!(m.map_to_original(k).unwrap(), pristine.map_to_original(k).unwrap());
        }
    }

    #[test]
    fn insert_before_first_line_uses_virtual_anchor() {
        let mut m = LineMap::new("F", 3);
        m.apply_edit(LineDelta::Insert { after: 0, count: 2 }).unwrap();
        assert_eq!(m.map_to_original(1).unwrap(), pos(0, 1));
        assert_eq!(m.map_to_original(2).unwrap(), pos(0, 2));
        assert_eq!(m.map_to_original(3).unwrap(), pos(1, 0));
    }

    #[test]
    fn insert_after_pocket_of_dead_anchor_attaches_further_up() {
        let mut m = LineMap::new("F", 5);
        m.apply_edit(LineDelta::Insert { after: 3, count: 1 }).unwrap(); // (3,1) at line 4
        m.apply_edit(LineDelta::Delete { start: 3, count: 1 }).unwrap(); // anchor 3 gone, (3,1) now line 3
        m.apply_edit(LineDelta::Insert { after: 3, count: 1 }).unwrap();
        assert_eq!(m.map_to_original(3).unwrap(), pos(3, 1));
        assert_eq!(m.map_to_original(4).unwrap(), pos(2, 1));
    }

    #[test]
    fn out_of_range_edits_rejected() {
        let mut m = LineMap::new("F", 5);
        assert!(matches!(m.apply_edit(LineDelta::Insert { after: 6, count: 1 }), Err(SpatialError::EditOutOfRange { .. })));
        assert!(m.apply_edit(LineDelta::Delete { start: 5, count: 2 }).is_err());
        assert!(m.apply_edit(LineDelta::Delete { start: 0, count: 1 }).is_err());
        let before = m.clone();
        assert!(m.apply_change(5, "", "\n\n").is_err());
        assert_eq!(m, before);
    }

    #[test]
    fn change_deltas() {
        assert_eq!(deltas_for_change(4, "x", ""), vec![]);
        assert_eq!(deltas_for_change(4, "a\nb\n", ""), vec![LineDelta::Insert { after: 4, count: 2 }]);
        assert_eq!(
            deltas_for_change(4, "z\n", "\nq"),
            vec![LineDelta::Delete { start: 5, count: 1 }, LineDelta::Insert { after: 4, count: 1 }]
        );
    }
}
