//! Per-seed checks returning a description of the first disagreement.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use tracelens::event::Payload;
use tracelens::ingest::{generate, FileEntry, Recording};
use tracelens::scoring::{cyclissity_of_paths, file_visit_history, CountMode, ScoreTrajectory, ScoringRules};
use tracelens::spatial::{LineDelta, LineMap};
use tracelens::track::{aggregate_edits, simplify, tolerance_for_level, AggregatedEdit, EditFate, Track, DEFAULT_MAX_GAP_MS};
use tracelens::{analyze, Config, ExactCyclissity};

use super::*;

fn to_delta(op: LineOp) -> LineDelta {
    match op {
        LineOp::Insert { after, count } => LineDelta::Insert { after, count },
        LineOp::Delete { start, count } => LineDelta::Delete { start, count },
    }
}

pub fn linemap_agrees(map: &LineMap, naive: &NaiveGenealogy) -> Result<(), String> {
    if map.current_count() != naive.len() {
        return Err(format!("count {} vs naive {}", map.current_count(), naive.len()));
    }
    for line in 1..=naive.len() {
        let got = map.map_to_original(line).map_err(|e| e.to_string())?;
        if (got.anchor, got.pocket) != naive.origin(line) {
            return Err(format!("line {line}: {:?} vs naive {:?}", (got.anchor, got.pocket), naive.origin(line)));
        }
        if map.current_line_of(&got) != Some(line) {
            return Err(format!("line {line} does not round-trip"));
        }
    }
    Ok(())
}

/// One random script of up to `max_ops` structural edits, compared after
/// every edit.
pub fn check_line_script(seed: u64, max_ops: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let n = r.gen_range(0..60);
    let mut map = LineMap::new("F", n);
    let mut naive = NaiveGenealogy::new(n);
    for (k, op) in random_line_script(&mut r, n, max_ops).into_iter().enumerate() {
        map.apply_edit(to_delta(op)).map_err(|e| e.to_string())?;
        naive.apply(op);
        linemap_agrees(&map, &naive).map_err(|e| format!("seed {seed}, edit {k}: {e}"))?;
    }
    Ok(())
}

/// Final line contents from raw replay against those obtained by applying
/// each aggregated edit's `after` at its position.
pub fn check_keystroke_script(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let n = 1 + (seed % 12) as u32;
    let (events, planted) = random_keystroke_script(&mut r, n, 150, DEFAULT_MAX_GAP_MS);
    let edits = aggregate_edits(&events, &[FileEntry::new("F", n)], DEFAULT_MAX_GAP_MS);

    let mut raw = vec![String::new(); n as usize];
    let mut map = LineMap::new("F", n);
    for e in &events {
        if let Payload::CodeChange { line, col, inserted, deleted, .. } = &e.payload {
            raw_apply(&mut raw, *line, *col, inserted, deleted);
            map.apply_change(*line, inserted, deleted).map_err(|e| e.to_string())?;
        }
    }
    let mut rewritten: BTreeMap<(u32, u32), &AggregatedEdit> = BTreeMap::new();
    for g in &edits {
        rewritten.insert((g.position.anchor, g.position.pocket), g);
    }
    for (i, text) in raw.iter().enumerate() {
        let p = map.map_to_original(i as u32 + 1).map_err(|e| e.to_string())?;
        let got = rewritten.get(&(p.anchor, p.pocket)).map_or("", |g| g.after.as_str());
        if got != text {
            return Err(format!("seed {seed}: line {} is {text:?} by replay but {got:?} by aggregation", i + 1));
        }
    }
    for id in planted {
        if !edits.iter().any(|g| g.start_event_id == id) {
            return Err(format!("seed {seed}: deletion {id} did not open a new group"));
        }
    }
    for g in &edits {
        if g.fate == EditFate::Surviving && g.before == g.after && edits.iter().filter(|h| h.position == g.position).count() == 1 {
            return Err(format!("seed {seed}: no-op edit marked surviving"));
        }
    }
    Ok(())
}

/// Streaming cyclissity against a from-scratch recomputation at every prefix.
pub fn check_visit_sequence(paths: &[String]) -> Result<(), String> {
    let exact: Vec<ExactCyclissity> = cyclissity_of_paths(paths, CountMode::Visits);
    let floats: Vec<tracelens::Cyclissity> = cyclissity_of_paths(paths, CountMode::Visits);
    let mut k = 0;
    for end in 1..=paths.len() {
        if end > 1 && paths[end - 1] == paths[end - 2] {
            continue;
        }
        let expected = match brute_recency(&paths[..end]) {
            None => num_rational::Ratio::from_integer(0),
            Some((p, n)) => num_rational::Ratio::from_integer(1) - num_rational::Ratio::new(p, n),
        };
        if exact[k].value != expected {
            return Err(format!("prefix {end}: {} vs brute {}", exact[k].value, expected));
        }
        let f = floats[k].value;
        let want = *expected.numer() as f64 / *expected.denom() as f64;
        if !(0.0..=1.0).contains(&f) || (f - want).abs() > 1e-12 {
            return Err(format!("prefix {end}: float {f} out of line with {expected}"));
        }
        k += 1;
    }
    if k != exact.len() {
        return Err(format!("{} visits streamed, {k} expected", exact.len()));
    }
    Ok(())
}

fn kept_indices(track: &Track, simplified: &Track) -> Vec<usize> {
    let ids: BTreeSet<u64> = simplified.event_ids().collect();
    (0..track.points.len()).filter(|&i| ids.contains(&track.points[i].event_id)).collect()
}

/// Nesting, endpoint and anchor retention, and the shape bound for levels 0..=8.
pub fn check_lod(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let track = random_track(&mut r, 400);
    let anchors: BTreeSet<u64> = track.points.iter().filter(|_| r.gen_bool(0.03)).map(|p| p.event_id).collect();
    let mut previous: Option<BTreeSet<u64>> = None;
    for level in 0..=8u32 {
        let s = simplify(&track, level, &anchors);
        let ids: BTreeSet<u64> = s.event_ids().collect();
        if level == 0 && s != track {
            return Err("level 0 is not the identity".into());
        }
        if let Some(prev) = &previous {
            if !ids.is_subset(prev) {
                return Err(format!("seed {seed}: level {level} not nested in level {}", level - 1));
            }
        }
        if let (Some(a), Some(b)) = (track.points.first(), track.points.last()) {
            if !ids.contains(&a.event_id) || !ids.contains(&b.event_id) {
                return Err(format!("seed {seed}: level {level} lost an endpoint"));
            }
        }
        if !anchors.is_subset(&ids) {
            return Err(format!("seed {seed}: level {level} lost an anchor"));
        }
        let dev = max_vertical_deviation(&track, &kept_indices(&track, &s));
        if dev > tolerance_for_level(level) + 1e-9 {
            return Err(format!("seed {seed}: level {level}: deviation {dev} over {}", tolerance_for_level(level)));
        }
        if s.edges.iter().any(|&(i, j)| j != i + 1) {
            return Err("edge between non-consecutive points".into());
        }
        previous = Some(ids);
    }
    Ok(())
}

pub const COMPOSITES: [&str; 5] = [
    "investigate-edit-validate+oscillate",
    "restart+poor-mans-debugger",
    "oscillate+debugger-use+idle-gaps",
    "poor-mans-debugger+restart+oscillate",
    "read-through+investigate-edit-validate+debugger-use",
];

pub fn composite(seed: u64) -> Recording {
    let mut overrides = BTreeMap::new();
    overrides.insert("restarts".to_string(), (1 + seed % 3).to_string());
    overrides.insert("oscillations".to_string(), (1 + seed % 5).to_string());
    overrides.insert("pmd_cycles".to_string(), (1 + seed % 4).to_string());
    generate(COMPOSITES[seed as usize % COMPOSITES.len()], seed, &overrides).unwrap().0
}

pub fn without_penalties(rules: &ScoringRules) -> ScoringRules {
    ScoringRules {
        restart_first: rules.restart_first.max(0),
        restart_repeat: rules.restart_repeat.max(0),
        oscillate_repeat: rules.oscillate_repeat.max(0),
        pmd_repeat: rules.pmd_repeat.max(0),
        reverted_edit: rules.reverted_edit.max(0),
        debugger_use: rules.debugger_use.max(0),
        ..rules.clone()
    }
}

fn trajectory(rec: &Recording, rules: &ScoringRules) -> ScoreTrajectory {
    let config = Config {
        scoring: rules.clone(),
        ..Config::default()
    };
    analyze(rec, &config).unwrap().report.trajectory
}

/// Decomposition, penalty monotonicity, sample consistency and the
/// distinct-files bound on one composite trace.
pub fn check_composite(seed: u64) -> Result<(), String> {
    let rec = composite(seed);
    let rules = ScoringRules::default();
    let tr = trajectory(&rec, &rules);
    let sum: i64 = tr.triggers.iter().map(|t| t.delta).sum();
    if tr.final_score != sum {
        return Err(format!("seed {seed}: final {} but deltas sum to {sum}", tr.final_score));
    }
    if tr.samples.last().map(|s| s.cumulative_score) != Some(tr.final_score) {
        return Err(format!("seed {seed}: last sample disagrees with the final score"));
    }
    let positive: i64 = tr.triggers.iter().map(|t| t.delta.max(0)).sum();
    let relaxed = trajectory(&rec, &without_penalties(&rules));
    if positive < tr.final_score || relaxed.final_score < tr.final_score {
        return Err(format!("seed {seed}: dropping penalties lowered the score"));
    }
    let trigger_ids: HashSet<u64> = tr.triggers.iter().map(|t| t.event_id).collect();
    for w in tr.samples.windows(2) {
        if w[1].distinct_files_so_far < w[0].distinct_files_so_far {
            return Err(format!("seed {seed}: distinct bound decreased at event {}", w[1].event_id));
        }
        if w[1].cumulative_score != w[0].cumulative_score && !trigger_ids.contains(&w[1].event_id) {
            return Err(format!("seed {seed}: score moved at non-trigger event {}", w[1].event_id));
        }
    }
    let history = file_visit_history(&rec.events);
    let order: BTreeMap<u64, usize> = rec.events.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    for s in tr.samples.iter().skip(1) {
        let at = order[&s.event_id];
        let seen: HashSet<&str> = history.iter().filter(|v| order[&v.event_id] <= at).map(|v| v.path.as_str()).collect();
        if seen.len() as u64 != s.distinct_files_so_far {
            return Err(format!("seed {seed}: bound {} vs brute {} at {}", s.distinct_files_so_far, seen.len(), s.event_id));
        }
    }
    Ok(())
}
