//! Level-of-detail reduction.
//!
//! Each level runs a top-down split on the original polyline with tolerance
//! `2^level` measured as vertical distance to the chord. The split choice at
//! every step does not depend on the tolerance, so a coarser level only stops
//! the recursion earlier and its points are a subset of every finer level.

use std::collections::BTreeSet;

use crate::num::Real;

use super::Track;

pub fn tolerance_for_level(level: u32) -> f64 {
    2f64.powi(level.min(1023) as i32)
}

/// Vertical distance of point `i` from the chord `a`-`b`. When the chord is
/// vertical (equal x) the interpolation runs over index order instead.
pub fn vertical_deviation<T: Real>(xs: &[T], ys: &[T], a: usize, i: usize, b: usize) -> T {
    let s = if xs[b] > xs[a] {
        (xs[i] - xs[a]) / (xs[b] - xs[a])
    } else {
        T::from_usize(i - a).unwrap() / T::from_usize(b - a).unwrap()
    };
    (ys[i] - (ys[a] + (ys[b] - ys[a]) * s)).abs()
}

/// Keep-mask of the points that survive at `tolerance`. The first and last
/// points and every `forced` point are kept.
pub fn simplify_vertical<T: Real>(xs: &[T], ys: &[T], tolerance: T, forced: &[bool]) -> Vec<bool> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut keep: Vec<bool> = (0..n).map(|i| i == 0 || i + 1 == n || forced.get(i).copied().unwrap_or(false)).collect();
    let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let mut stack: Vec<(usize, usize)> = kept.windows(2).map(|w| (w[0], w[1])).collect();
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let mut worst = (a + 1, T::zero());
        for i in a + 1..b {
            let d = vertical_deviation(xs, ys, a, i, b);
            if d > worst.1 {
                worst = (i, d);
            }
        }
        if worst.1 > tolerance {
            keep[worst.0] = true;
            stack.push((a, worst.0));
            stack.push((worst.0, b));
        }
    }
    keep
}

/// The track at a level of detail. Level 0 is the track itself; points whose
/// event id is in `anchors` always survive.
pub fn simplify(track: &Track, level: u32, anchors: &BTreeSet<u64>) -> Track {
    if level == 0 {
        return track.clone();
    }
    let xs: Vec<f64> = track.points.iter().map(|p| p.timestamp_ms as f64).collect();
    let ys: Vec<f64> = track.points.iter().map(|p| p.global_pos as f64).collect();
    let forced: Vec<bool> = track.points.iter().map(|p| anchors.contains(&p.event_id)).collect();
    let keep = simplify_vertical(&xs, &ys, tolerance_for_level(level), &forced);
    let points = track
        .points
        .iter()
        .zip(keep)
        .filter(|&(_, k)| k)
        .map(|(p, _)| p.clone())
        .collect();
    Track::new(points, track.edges_disabled.clone())
}
