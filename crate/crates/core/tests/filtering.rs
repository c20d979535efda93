use proptest::prelude::*;
use tracelens::event::{Category, EventType};
use tracelens::ingest::generate;
use tracelens::report::{global_index, Config};
use tracelens::spatial::LineMaps;
use tracelens::track::{build_track, FilterSpec, TrackError};

fn spec_strategy() -> impl Strategy<Value = FilterSpec> {
    (
        proptest::sample::subsequence(Category::ALL.to_vec(), 0..=6),
        proptest::sample::subsequence(EventType::ALL.to_vec(), 0..=4),
        proptest::option::of(0u64..600_000),
        proptest::option::of(0u64..600_000),
        proptest::option::of(proptest::sample::select(vec!["*.java", "src/core/*", "*.txt"])),
    )
        .prop_map(|(cats, types, a, b, glob)| {
            let mut s = FilterSpec::default();
            s.include_categories.extend(cats);
            s.include_types.extend(types);
            let base = 1_600_000_000_000;
            s.from_ms = a.map(|v| base + v);
            s.to_ms = b.map(|v| base + v.max(a.unwrap_or(0)));
            s.files.extend(glob.map(str::to_string));
            s
        })
}

fn shrink(spec: &FilterSpec, k: usize) -> FilterSpec {
    let mut s = spec.clone();
    match k % 4 {
        0 => {
            if s.include_categories.is_empty() && s.include_types.is_empty() {
                s.include_categories.insert(Category::Navigation);
            } else if let Some(c) = s.include_categories.iter().next().copied() {
                s.include_categories.remove(&c);
                let inner = EventType::ALL.iter().find(|t| t.category() == c).copied();
                s.include_types.extend(inner);
            } else if s.include_types.len() > 1 {
                let t = *s.include_types.iter().next().unwrap();
                s.include_types.remove(&t);
            }
        }
        1 => s.from_ms = Some(s.from_ms.unwrap_or(0) + 60_000).min(s.to_ms.or(Some(u64::MAX))),
        2 => {
            if s.files.is_empty() {
                s.files.push("src/*".into());
            } else {
                s.files.truncate(1);
            }
        }
        _ => s.to_ms = Some(s.to_ms.unwrap_or(u64::MAX).saturating_sub(60_000).max(s.from_ms.unwrap_or(0))),
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn narrowing_a_filter_never_adds_points(spec in spec_strategy(), k in 0usize..8, seed in 0u64..4) {
        let (rec, _) = generate("poor-mans-debugger+oscillate", seed, &Default::default()).unwrap();
        let index = global_index(&rec, &Config::default()).unwrap();
        let wide = build_track(&rec.events, &index, LineMaps::new(&rec.files), &spec).unwrap();
        let narrow_spec = shrink(&spec, k);
        let narrow = build_track(&rec.events, &index, LineMaps::new(&rec.files), &narrow_spec).unwrap();
        let wide_ids: std::collections::BTreeSet<u64> = wide.event_ids().collect();
        prop_assert!(narrow.event_ids().all(|id| wide_ids.contains(&id)), "{} ⊄ {}", narrow_spec, spec);
        let full = build_track(&rec.events, &index, LineMaps::new(&rec.files), &FilterSpec::everything()).unwrap();
        for p in &narrow.points {
            let same = full.points.iter().find(|q| q.event_id == p.event_id).unwrap();
            prop_assert_eq!(same, p);
        }
    }

    #[test]
    fn filter_text_round_trips(spec in spec_strategy()) {
        prop_assert_eq!(FilterSpec::parse(&spec.to_string()).unwrap(), spec);
    }
}

#[test]
fn navigation_only_drops_code_changes() {
    let (rec, _) = generate("investigate-edit-validate", 2, &Default::default()).unwrap();
    let index = global_index(&rec, &Config::default()).unwrap();
    let spec = FilterSpec::parse("Navigation").unwrap();
    let t = build_track(&rec.events, &index, LineMaps::new(&rec.files), &spec).unwrap();
    assert!(!t.is_empty());
    assert!(t.points.iter().all(|p| p.category == Category::Navigation));
}

#[test]
fn unknown_file_is_reported() {
    let (mut rec, _) = generate("read-through", 2, &Default::default()).unwrap();
    let index = global_index(&rec, &Config::default()).unwrap();
    rec.events[5].context.file = Some("missing.java".into());
    let err = build_track(&rec.events, &index, LineMaps::new(&rec.files), &FilterSpec::everything()).unwrap_err();
    assert!(matches!(err, TrackError::UnknownFileReference { path, .. } if path == "missing.java"));
}
