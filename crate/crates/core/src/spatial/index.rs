use serde::{Deserialize, Serialize};

use super::{FileOrder, OriginalPosition, SpatialError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub path: String,
    pub offset: u32,
    pub line_count: u32,
}

/// Concatenation of all files' original lines into one 1-based axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalIndex {
    pub entries: Vec<IndexEntry>,
    pub total_lines: u32,
}

impl GlobalIndex {
    pub fn new(order: &FileOrder) -> Self {
        let mut offset = 0u32;
        let entries = order
            .ordered_files
            .iter()
            .map(|f| {
                let e = IndexEntry {
                    path: f.path.clone(),
                    offset,
                    line_count: f.initial_line_count,
                };
                offset += f.initial_line_count;
                e
            })
            .collect();
        GlobalIndex { entries, total_lines: offset }
    }

    pub fn entry(&self, file: &str) -> Option<&IndexEntry> {
        self.entries.iter().find(|e| e.path == file)
    }

    pub fn offset(&self, file: &str) -> Option<u32> {
        self.entry(file).map(|e| e.offset)
    }

    pub fn to_global(&self, file: &str, line: u32) -> Result<u32, SpatialError> {
        let e = self.entry(file).ok_or_else(|| SpatialError::UnknownFile(file.to_string()))?;
        if line == 0 || line > e.line_count {
            return Err(SpatialError::LineOutOfRange {
                file: file.to_string(),
                line,
                max: e.line_count,
            });
        }
        Ok(e.offset + line)
    }

    pub fn from_global(&self, global_line: u32) -> Result<(&str, u32), SpatialError> {
        if global_line == 0 || global_line > self.total_lines {
            return Err(SpatialError::GlobalOutOfRange {
                global_line,
                total_lines: self.total_lines,
            });
        }
        // last entry whose offset is below the target; empty files are skipped
        let idx = self.entries.partition_point(|e| e.offset < global_line) - 1;
        let e = &self.entries[idx];
        Ok((e.path.as_str(), global_line - e.offset))
    }

    /// Axis position a (possibly pocketed) line is plotted at. Pocket lines
    /// collapse onto their anchor; the virtual anchor 0 plots at the file's
    /// first line.
    pub fn plot_position(&self, pos: &OriginalPosition) -> Result<u32, SpatialError> {
        let e = self
            .entry(&pos.file)
            .ok_or_else(|| SpatialError::UnknownFile(pos.file.clone()))?;
        let line = pos.anchor.clamp(1, e.line_count.max(1));
        Ok((e.offset + line).clamp(1, self.total_lines.max(1)))
    }

    /// Global span covered by a file, if it has any lines.
    pub fn file_span(&self, file: &str) -> Option<(u32, u32)> {
        self.entry(file)
            .filter(|e| e.line_count > 0)
            .map(|e| (e.offset + 1, e.offset + e.line_count))
    }
}
