//! Global line index over all files, file-ordering rules, and code-pocket
//! line genealogy.

mod index;
mod linemap;
mod order;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use index::{GlobalIndex, IndexEntry};
pub use linemap::{deltas_for_change, LineDelta, LineMap, LineMaps, OriginalPosition};
pub use order::{build_order, FileOrder, OrderingRule};

use crate::ingest::{FileEntry, Recording};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpatialError {
    #[error("manual file order incomplete: {0}")]
    ManualOrderIncomplete(String),
    #[error("line {line} out of range for {file:?} (1..={max})")]
    LineOutOfRange { file: String, line: u32, max: u32 },
    #[error("unknown file {0:?}")]
    UnknownFile(String),
    #[error("global line {global_line} out of range (1..={total_lines})")]
    GlobalOutOfRange { global_line: u32, total_lines: u32 },
    #[error("edit out of range in {file:?}: {message}")]
    EditOutOfRange { file: String, message: String },
    #[error("recording manifests differ: {0}")]
    ManifestMismatch(String),
}

/// A single global axis shared by several recordings of the same original
/// files. Each recording still replays its own line maps, so one
/// developer's insertions never shift another's positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedIndex {
    pub recording_ids: Vec<String>,
    pub order: FileOrder,
    pub index: GlobalIndex,
}

fn manifest_set(files: &[FileEntry]) -> BTreeSet<&FileEntry> {
    files.iter().collect()
}

pub fn align_recordings(recordings: &[&Recording], rule: &OrderingRule) -> Result<AlignedIndex, SpatialError> {
    let Some(first) = recordings.first() else {
        return Err(SpatialError::ManifestMismatch("no recordings to align".into()));
    };
    let reference = manifest_set(&first.files);
    for rec in &recordings[1..] {
        let other = manifest_set(&rec.files);
        if other != reference {
            let only_a: Vec<String> = reference
                .difference(&other)
                .map(|f| format!("{}:{}", f.path, f.initial_line_count))
                .collect();
            let only_b: Vec<String> = other
                .difference(&reference)
                .map(|f| format!("{}:{}", f.path, f.initial_line_count))
                .collect();
            return Err(SpatialError::ManifestMismatch(format!(
                "{} has {only_a:?}, {} has {only_b:?}",
                first.recording_id, rec.recording_id
            )));
        }
    }
    let order = build_order(&first.files, rule)?;
    let index = GlobalIndex::new(&order);
    Ok(AlignedIndex {
        recording_ids: recordings.iter().map(|r| r.recording_id.clone()).collect(),
        order,
        index,
    })
}
