//! Walks events in order, resolving each one's position against the line
//! maps as they were at that moment, then applying its edit (if any).

use crate::event::{Event, Payload};
use crate::ingest::FileEntry;
use crate::spatial::{GlobalIndex, LineMaps, OriginalPosition};

/// Position of one event on the global axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolved {
    pub file: String,
    pub original: OriginalPosition,
    pub global: u32,
    pub visible_span: Option<(u32, u32)>,
}

pub struct Replayer<'a> {
    index: &'a GlobalIndex,
    maps: LineMaps,
    skipped_edits: usize,
}

impl<'a> Replayer<'a> {
    pub fn new(index: &'a GlobalIndex, maps: LineMaps) -> Self {
        Replayer { index, maps, skipped_edits: 0 }
    }

    pub fn from_manifest(index: &'a GlobalIndex, files: &[FileEntry]) -> Self {
        Self::new(index, LineMaps::new(files))
    }

    pub fn maps(&self) -> &LineMaps {
        &self.maps
    }

    /// Edits that could not be applied because they pointed past the end of
    /// the file.
    pub fn skipped_edits(&self) -> usize {
        self.skipped_edits
    }

    fn locate(&self, file: &str, current_line: u32) -> Option<(OriginalPosition, u32)> {
        let map = self.maps.get(file)?;
        let original = map.map_clamped(current_line).unwrap_or(OriginalPosition {
            file: file.to_string(),
            anchor: 0,
            pocket: 0,
        });
        let global = self.index.plot_position(&original).ok()?;
        Some((original, global))
    }

    fn span(&self, file: &str, first: u32, last: u32) -> Option<(u32, u32)> {
        let (_, a) = self.locate(file, first)?;
        let (_, b) = self.locate(file, last)?;
        Some((a.min(b), a.max(b)))
    }

    /// Resolve the event's position without applying its edit.
    pub fn resolve(&self, event: &Event) -> Option<Resolved> {
        let (file, line, span) = match &event.payload {
            Payload::Scroll { file, to, .. } => (file.as_str(), to.centroid(), Some((file.as_str(), to.first, to.last))),
            p => {
                let ctx_span = match (&event.context.file, event.context.visible_range) {
                    (Some(f), Some(r)) => Some((f.as_str(), r.first, r.last)),
                    _ => None,
                };
                if let (Some(file), Some(line)) = (p.file(), p.line()) {
                    (file, line, ctx_span.filter(|(f, _, _)| *f == file))
                } else if let Some((f, first, last)) = ctx_span {
                    (f, first + (last - first) / 2, ctx_span)
                } else if let Payload::File { path, .. } = p {
                    (path.as_str(), 1, None)
                } else {
                    return None;
                }
            }
        };
        let (original, global) = self.locate(file, line)?;
        let visible_span = span.and_then(|(f, a, b)| self.span(f, a, b));
        Some(Resolved {
            file: file.to_string(),
            original,
            global,
            visible_span,
        })
    }

    /// Apply the event's line-structure change, if it has one. Returns false
    /// when an edit had to be skipped.
    pub fn apply(&mut self, event: &Event) -> bool {
        if let Payload::CodeChange { file, line, inserted, deleted, .. } = &event.payload {
            if let Some(map) = self.maps.get_mut(file) {
                let line = (*line).min(map.current_count().max(1));
                if map.apply_change(line, inserted, deleted).is_err() {
                    self.skipped_edits += 1;
                    return false;
                }
            }
        }
        true
    }

    pub fn step(&mut self, event: &Event) -> Option<Resolved> {
        let r = self.resolve(event);
        self.apply(event);
        r
    }
}
