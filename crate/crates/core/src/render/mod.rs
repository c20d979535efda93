//! Deterministic SVG output for tracks and score trajectories.
//!
//! Coordinates are written with two decimals and every element appears in a
//! fixed order, so equal inputs give equal bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::event::Category;
use crate::patterns::PatternKind;
use crate::scoring::ScoreTrajectory;
use crate::spatial::GlobalIndex;
use crate::track::{simplify, Track};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Glyph {
    Circle,
    Square,
    Triangle,
    Diamond,
    Cross,
    Plus,
}

impl Glyph {
    pub const ALL: [Glyph; 6] = [Glyph::Circle, Glyph::Square, Glyph::Triangle, Glyph::Diamond, Glyph::Cross, Glyph::Plus];

    fn id(self) -> &'static str {
        match self {
            Glyph::Circle => "g-circle",
            Glyph::Square => "g-square",
            Glyph::Triangle => "g-triangle",
            Glyph::Diamond => "g-diamond",
            Glyph::Cross => "g-cross",
            Glyph::Plus => "g-plus",
        }
    }

    fn shape(self) -> &'static str {
        match self {
            Glyph::Circle => r#"<circle r="3"/>"#,
            Glyph::Square => r#"<rect x="-3" y="-3" width="6" height="6"/>"#,
            Glyph::Triangle => r#"<path d="M0,-3.5L3.5,3L-3.5,3Z"/>"#,
            Glyph::Diamond => r#"<path d="M0,-4L4,0L0,4L-4,0Z"/>"#,
            Glyph::Cross => r#"<path d="M-3,-3L3,3M3,-3L-3,3" fill="none" stroke="currentColor" stroke-width="1.5"/>"#,
            Glyph::Plus => r#"<path d="M0,-4V4M-4,0H4" fill="none" stroke="currentColor" stroke-width="1.5"/>"#,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theme {
    Monochrome,
    #[default]
    Color,
}

impl Theme {
    fn category(self, c: Category) -> &'static str {
        match self {
            Theme::Monochrome => "#000000",
            Theme::Color => match c {
                Category::Activity => "#7f7f7f",
                Category::Execution => "#d62728",
                Category::Edit => "#2ca02c",
                Category::Environment => "#9467bd",
                Category::Navigation => "#1f77b4",
                Category::Solution => "#ff7f0e",
            },
        }
    }

    fn pattern(self, k: PatternKind) -> &'static str {
        match self {
            Theme::Monochrome => "#000000",
            Theme::Color => match k {
                PatternKind::Oscillate => "#e377c2",
                PatternKind::Restart => "#8c564b",
                PatternKind::DocSwitch => "#17becf",
                PatternKind::DebuggerUse => "#9467bd",
                PatternKind::PoorMansDebugger => "#d62728",
                PatternKind::ValidationLaunch => "#2ca02c",
            },
        }
    }

    fn ink(self) -> &'static str {
        match self {
            Theme::Monochrome => "#000000",
            Theme::Color => "#333333",
        }
    }

    fn faint(self) -> &'static str {
        match self {
            Theme::Monochrome => "#bbbbbb",
            Theme::Color => "#c6dbef",
        }
    }
}

pub fn default_symbols() -> BTreeMap<Category, Glyph> {
    BTreeMap::from([
        (Category::Activity, Glyph::Plus),
        (Category::Execution, Glyph::Triangle),
        (Category::Edit, Glyph::Square),
        (Category::Environment, Glyph::Cross),
        (Category::Navigation, Glyph::Circle),
        (Category::Solution, Glyph::Diamond),
    ])
}

fn pattern_glyph(k: PatternKind) -> Glyph {
    match k {
        PatternKind::Oscillate => Glyph::Diamond,
        PatternKind::Restart => Glyph::Cross,
        PatternKind::DocSwitch => Glyph::Circle,
        PatternKind::DebuggerUse => Glyph::Square,
        PatternKind::PoorMansDebugger => Glyph::Plus,
        PatternKind::ValidationLaunch => Glyph::Triangle,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderOptions {
    pub width_px: u32,
    pub height_px: u32,
    pub symbols: BTreeMap<Category, Glyph>,
    /// Inclusive global-line intervals to shade.
    pub highlights: Vec<(u32, u32)>,
    pub lod: u32,
    /// Event ids kept at every level of detail.
    pub anchors: BTreeSet<u64>,
    pub show_edges: BTreeMap<Category, bool>,
    pub theme: Theme,
    /// Draw time upwards instead of downwards.
    pub flip: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width_px: 960,
            height_px: 640,
            symbols: default_symbols(),
            highlights: Vec::new(),
            lod: 0,
            anchors: BTreeSet::new(),
            show_edges: Category::ALL.iter().map(|&c| (c, true)).collect(),
            theme: Theme::Color,
            flip: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderOptionsError {
    #[error("width and height must be positive")]
    EmptyCanvas,
    #[error("no symbol for category {0}")]
    MissingSymbol(Category),
    #[error("highlight [{0}, {1}] is not an interval")]
    BadHighlight(u32, u32),
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), RenderOptionsError> {
        if self.width_px == 0 || self.height_px == 0 {
            return Err(RenderOptionsError::EmptyCanvas);
        }
        if let Some(&c) = Category::ALL.iter().find(|c| !self.symbols.contains_key(c)) {
            return Err(RenderOptionsError::MissingSymbol(c));
        }
        if let Some(&(a, b)) = self.highlights.iter().find(|(a, b)| a > b) {
            return Err(RenderOptionsError::BadHighlight(a, b));
        }
        Ok(())
    }

    fn edges_shown(&self, c: Category) -> bool {
        self.show_edges.get(&c).copied().unwrap_or(true)
    }
}

pub const MARGIN_LEFT: f64 = 48.0;
pub const MARGIN_RIGHT: f64 = 16.0;
pub const MARGIN_TOP: f64 = 28.0;
pub const MARGIN_BOTTOM: f64 = 24.0;

/// Maps global lines and timestamps into the plot area and back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackViewport {
    pub total_lines: u32,
    pub t0: u64,
    pub t1: u64,
    pub width: f64,
    pub height: f64,
    pub flip: bool,
}

impl TrackViewport {
    fn plot_w(&self) -> f64 {
        (self.width - MARGIN_LEFT - MARGIN_RIGHT).max(1.0)
    }

    fn plot_h(&self) -> f64 {
        (self.height - MARGIN_TOP - MARGIN_BOTTOM).max(1.0)
    }

    /// Global line `g` sits at the centre of its slot.
    pub fn x(&self, g: f64) -> f64 {
        let n = f64::from(self.total_lines.max(1));
        MARGIN_LEFT + (g - 0.5) / n * self.plot_w()
    }

    pub fn line_at(&self, x: f64) -> f64 {
        let n = f64::from(self.total_lines.max(1));
        (x - MARGIN_LEFT) / self.plot_w() * n + 0.5
    }

    pub fn y(&self, t: u64) -> f64 {
        let frac = if self.t1 > self.t0 {
            (t - self.t0) as f64 / (self.t1 - self.t0) as f64
        } else {
            0.0
        };
        let frac = if self.flip { 1.0 - frac } else { frac };
        MARGIN_TOP + frac * self.plot_h()
    }
}

fn n(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn open_svg(out: &mut String, w: u32, h: u32, class: &str, glyphs: &BTreeSet<Glyph>) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" class="{class}" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    out.push_str("<defs>\n");
    for g in glyphs {
        let _ = writeln!(out, r#"<g id="{}">{}</g>"#, g.id(), g.shape());
    }
    out.push_str("</defs>\n");
    let _ = writeln!(out, r##"<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##);
}

/// Render `track` against the global line axis of `index`.
pub fn render_track_svg(track: &Track, index: &GlobalIndex, options: &RenderOptions) -> String {
    let track = simplify(track, options.lod, &options.anchors);
    let theme = options.theme;
    let vp = TrackViewport {
        total_lines: index.total_lines,
        t0: track.points.first().map_or(0, |p| p.timestamp_ms),
        t1: track.points.last().map_or(0, |p| p.timestamp_ms),
        width: f64::from(options.width_px),
        height: f64::from(options.height_px),
        flip: options.flip,
    };
    let (top, bottom) = (MARGIN_TOP, vp.height - MARGIN_BOTTOM);
    let glyphs: BTreeSet<Glyph> = options.symbols.values().copied().collect();
    let mut out = String::new();
    open_svg(&mut out, options.width_px, options.height_px, "track", &glyphs);

    out.push_str(r#"<g class="highlights">"#);
    out.push('\n');
    for &(a, b) in &options.highlights {
        let (x0, x1) = (vp.x(f64::from(a) - 0.5), vp.x(f64::from(b) + 0.5));
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#fff3b0" data-lines="{a}-{b}"/>"##,
            n(x0),
            n(top),
            n(x1 - x0),
            n(bottom - top)
        );
    }
    out.push_str("</g>\n");

    let ink = theme.ink();
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="{ink}" stroke-width="1"><line x1="{l}" y1="{t}" x2="{r}" y2="{t}"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}"/></g>"#,
        l = n(MARGIN_LEFT),
        r = n(vp.width - MARGIN_RIGHT),
        t = n(top),
        b = n(bottom),
    );

    out.push_str(r#"<g class="files" font-family="sans-serif" font-size="9">"#);
    out.push('\n');
    for e in &index.entries {
        let x = vp.x(f64::from(e.offset) + 0.5);
        if e.offset > 0 {
            let _ = writeln!(
                out,
                r##"<line class="file-boundary" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#888888" stroke-dasharray="3,3" data-offset="{}"/>"##,
                n(top),
                n(bottom),
                e.offset,
                x = n(x)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{ink}">{}</text>"#,
            n(x + 2.0),
            n(top - 6.0),
            escape(&e.path)
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, r#"<g class="ranges" stroke="{}" stroke-width="1">"#, theme.faint());
    for p in &track.points {
        if let Some((a, b)) = p.visible_span {
            let y = n(vp.y(p.timestamp_ms));
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" data-event="{}"/>"#,
                n(vp.x(f64::from(a))),
                n(vp.x(f64::from(b))),
                p.event_id
            );
        }
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, r#"<g class="edges" stroke="{ink}" stroke-width="0.6" fill="none">"#);
    for &(i, j) in &track.edges {
        let (a, b) = (&track.points[i], &track.points[j]);
        if !options.edges_shown(b.category) {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            n(vp.x(f64::from(a.global_pos))),
            n(vp.y(a.timestamp_ms)),
            n(vp.x(f64::from(b.global_pos))),
            n(vp.y(b.timestamp_ms))
        );
    }
    out.push_str("</g>\n");

    out.push_str(r#"<g class="points">"#);
    out.push('\n');
    for p in &track.points {
        let glyph = options.symbols.get(&p.category).copied().unwrap_or(Glyph::Circle);
        let color = theme.category(p.category);
        let _ = writeln!(
            out,
            r##"<use class="point" xlink:href="#{}" transform="translate({},{})" fill="{color}" color="{color}" data-event="{}" data-line="{}" data-type="{}"/>"##,
            glyph.id(),
            n(vp.x(f64::from(p.global_pos))),
            n(vp.y(p.timestamp_ms)),
            p.event_id,
            p.global_pos,
            p.marker.as_str()
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

struct ScoreViewport {
    t0: u64,
    t1: u64,
    lo: f64,
    hi: f64,
    width: f64,
    height: f64,
    flip: bool,
}

impl ScoreViewport {
    fn x(&self, t: u64) -> f64 {
        let w = (self.width - MARGIN_LEFT - MARGIN_RIGHT).max(1.0);
        let frac = if self.t1 > self.t0 {
            (t - self.t0) as f64 / (self.t1 - self.t0) as f64
        } else {
            0.0
        };
        let frac = if self.flip { 1.0 - frac } else { frac };
        MARGIN_LEFT + frac * w
    }

    fn y(&self, v: f64) -> f64 {
        let h = (self.height - MARGIN_TOP - MARGIN_BOTTOM).max(1.0);
        self.height - MARGIN_BOTTOM - (v - self.lo) / (self.hi - self.lo) * h
    }
}

fn score_at(traj: &ScoreTrajectory, t: u64, id: u64) -> i64 {
    let k = traj.samples.partition_point(|s| (s.timestamp_ms, s.event_id) <= (t, id));
    if k == 0 {
        0
    } else {
        traj.samples[k - 1].cumulative_score
    }
}

/// Render the cumulative score over time inside the band of distinct files
/// visited so far.
pub fn render_score_svg(trajectory: &ScoreTrajectory, options: &RenderOptions) -> String {
    let theme = options.theme;
    let samples = &trajectory.samples;
    let min_score = samples.iter().map(|s| s.cumulative_score).min().unwrap_or(0).min(0);
    let max_v = samples
        .iter()
        .map(|s| s.cumulative_score.max(s.distinct_files_so_far as i64))
        .max()
        .unwrap_or(0)
        .max(1);
    let vp = ScoreViewport {
        t0: samples.first().map_or(0, |s| s.timestamp_ms),
        t1: samples.last().map_or(0, |s| s.timestamp_ms),
        lo: min_score as f64,
        hi: max_v as f64,
        width: f64::from(options.width_px),
        height: f64::from(options.height_px),
        flip: options.flip,
    };
    let glyphs: BTreeSet<Glyph> = trajectory.patterns.iter().map(|p| pattern_glyph(p.kind)).collect();
    let mut out = String::new();
    open_svg(&mut out, options.width_px, options.height_px, "score", &glyphs);
    let ink = theme.ink();

    let mut band = String::new();
    let mut line = String::new();
    let mut prev: Option<(f64, f64, f64)> = None;
    for s in samples {
        let x = vp.x(s.timestamp_ms);
        let d = vp.y(s.distinct_files_so_far as f64);
        let v = vp.y(s.cumulative_score as f64);
        if let Some((_, pd, pv)) = prev {
            let _ = write!(band, " L{},{}", n(x), n(pd));
            if d != pd {
                let _ = write!(band, " L{},{}", n(x), n(d));
            }
            let _ = write!(line, " L{},{}", n(x), n(pv));
            if v != pv {
                let _ = write!(line, " L{},{}", n(x), n(v));
            }
        } else {
            let _ = write!(band, "M{},{} L{},{}", n(x), n(vp.y(0.0)), n(x), n(d));
            let _ = write!(line, "M{},{}", n(x), n(v));
        }
        prev = Some((x, d, v));
    }
    if let Some((x, _, _)) = prev {
        let _ = write!(band, " L{},{} Z", n(x), n(vp.y(0.0)));
    }
    let _ = writeln!(
        out,
        r#"<path class="distinct-band" d="{band}" fill="{}" stroke="none"/>"#,
        theme.faint()
    );
    let zero = n(vp.y(0.0));
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="{ink}" stroke-width="1"><line x1="{}" y1="{zero}" x2="{}" y2="{zero}"/><line x1="{l}" y1="{}" x2="{l}" y2="{}"/></g>"#,
        n(MARGIN_LEFT),
        n(vp.width - MARGIN_RIGHT),
        n(MARGIN_TOP),
        n(vp.height - MARGIN_BOTTOM),
        l = n(MARGIN_LEFT)
    );
    let _ = writeln!(
        out,
        r#"<g class="labels" font-family="sans-serif" font-size="9" fill="{ink}"><text x="4" y="{}">{max_v}</text><text x="4" y="{zero}">0</text></g>"#,
        n(vp.y(max_v as f64))
    );
    let _ = writeln!(out, r#"<path class="score" d="{line}" fill="none" stroke="{ink}" stroke-width="1.5"/>"#);

    out.push_str(r#"<g class="edits" stroke-width="1.5">"#);
    out.push('\n');
    for e in &trajectory.edits {
        let x = vp.x(e.timestamp_ms);
        let y = n(vp.y(score_at(trajectory, e.timestamp_ms, e.event_id) as f64));
        let stroke = if e.surviving { theme.category(Category::Edit) } else { "#999999" };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{stroke}" data-event="{}"/>"#,
            n(x - 4.0),
            n(x + 4.0),
            e.event_id
        );
    }
    out.push_str("</g>\n");

    out.push_str(r#"<g class="patterns">"#);
    out.push('\n');
    for p in &trajectory.patterns {
        let color = theme.pattern(p.kind);
        let _ = writeln!(
            out,
            r##"<use class="pattern" xlink:href="#{}" transform="translate({},{})" fill="{color}" color="{color}" data-kind="{}" data-event="{}"/>"##,
            pattern_glyph(p.kind).id(),
            n(vp.x(p.timestamp_ms)),
            n(vp.y(score_at(trajectory, p.timestamp_ms, p.event_id) as f64)),
            p.kind,
            p.event_id
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
