mod common;

use std::collections::BTreeSet;

use common::checks::check_lod;
use common::{random_track, rng};
use proptest::prelude::*;
use tracelens::track::simplify;

proptest! {
    #[test]
    fn lod_guarantees(seed in any::<u64>()) {
        prop_assert_eq!(check_lod(seed), Ok(()));
    }
}

#[test]
fn collinear_track_keeps_endpoints_only() {
    let mut track = random_track(&mut rng(1), 0);
    for i in 0..100u32 {
        let mut p = random_track(&mut rng(2), 1).points.pop().unwrap_or_else(|| panic!("one point"));
        p.event_id = u64::from(i) + 1;
        p.timestamp_ms = u64::from(i) * 1000;
        p.global_pos = 10 + 2 * i;
        track.points.push(p);
    }
    track.relink();
    let s = simplify(&track, 1, &BTreeSet::new());
    assert_eq!(s.event_ids().collect::<Vec<_>>(), vec![1, 100]);
    let s = simplify(&track, 1, &BTreeSet::from([50]));
    assert_eq!(s.event_ids().collect::<Vec<_>>(), vec![1, 50, 100]);
}
