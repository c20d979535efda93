use crate::event::Event;
use crate::spatial::{GlobalIndex, LineMaps};

use super::{FilterSpec, Replayer, Track, TrackError, TrackPoint};

/// Build the track of `events` against `index`, starting from `maps`.
///
/// Every event is replayed so positions stay correct whatever the filter
/// drops. Events without a position sit at the last resolved position, or at
/// global line 1 before any.
pub fn build_track(events: &[Event], index: &GlobalIndex, maps: LineMaps, filter: &FilterSpec) -> Result<Track, TrackError> {
    let compiled = filter.compile()?;
    let mut replayer = Replayer::new(index, maps);
    let mut points = Vec::new();
    let mut last: (u32, Option<String>) = (1, None);
    for event in events {
        if let Some(path) = event.referenced_files().into_iter().find(|f| index.entry(f).is_none()) {
            return Err(TrackError::UnknownFileReference {
                event_id: event.id,
                path: path.to_string(),
            });
        }
        let resolved = replayer.step(event);
        if let Some(r) = &resolved {
            last = (r.global, Some(r.file.clone()));
        }
        if !compiled.matches(event) {
            continue;
        }
        let point = match resolved {
            Some(r) => TrackPoint {
                event_id: event.id,
                timestamp_ms: event.timestamp_ms,
                global_pos: r.global,
                visible_span: r.visible_span,
                marker: event.event_type(),
                category: event.category(),
                file: Some(r.file),
                pocket: r.original.pocket > 0,
                positional: true,
            },
            None => TrackPoint {
                event_id: event.id,
                timestamp_ms: event.timestamp_ms,
                global_pos: last.0,
                visible_span: None,
                marker: event.event_type(),
                category: event.category(),
                file: last.1.clone(),
                pocket: false,
                positional: false,
            },
        };
        points.push(point);
    }
    points.sort_by_key(|p| (p.timestamp_ms, p.event_id));
    Ok(Track::new(points, filter.edges_disabled.iter().copied().collect()))
}
