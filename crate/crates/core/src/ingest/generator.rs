//! Seeded synthetic recordings with known ground truth.
//!
//! A scenario is one or more archetypes joined with `+`. The generator keeps
//! its own log of what it planted (focus changes, typed lines, launches) and
//! writes that down as the truth sidecar; it never inspects the events it
//! produced.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FileEntry, Recording, DEFAULT_LONG_IDLE_MS};
use crate::event::{
    DebugKind, Event, EventContext, FileAction, LaunchMode, LineRange, MouseKind, Payload, RecordingAction,
};
use crate::patterns::{PatternKind, PhaseLabel};

const BASE_MS: u64 = 1_600_000_000_000;
const PAGE: u32 = 30;
const DOC: &str = "instructions.txt";
const NOTES: &str = "notes.md";

const CLASS_NAMES: &[&str] = &[
    "Account", "Billing", "Cart", "Catalog", "Customer", "Discount", "Inventory", "Invoice", "Ledger", "Order",
    "Payment", "Pricing", "Product", "Receipt", "Refund", "Report", "Shipment", "Stock", "Tax", "Warehouse",
    "Audit", "Coupon", "Currency", "Delivery", "Gateway", "Loyalty", "Merchant", "Parser", "Quote", "Session",
];

const CODE_LINES: &[&str] = &[
    "int total = items.stream().mapToInt(Item::cost).sum();",
    "if (balance < amount) { throw new IllegalStateException(); }",
    "result.add(new Entry(key, value));",
    "return cache.computeIfAbsent(id, this::load);",
    "for (Order o : orders) { queue.offer(o); }",
    "long delta = Math.max(0, limit - used);",
    "String name = customer.getName().trim();",
    "boolean valid = checksum(buffer) == expected;",
    "map.merge(code, 1, Integer::sum);",
    "this.rate = rate.setScale(2, RoundingMode.HALF_UP);",
];

const PRINT_LINES: &[&str] = &[
    "System.out.println(\"total=\" + total);",
    "System.out.println(\"state: \" + state);",
    "System.err.println(\"reached branch\");",
    "System.out.printf(\"%d items%n\", items.size());",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Archetype {
    InvestigateEditValidate,
    Oscillate,
    Restart,
    PoorMansDebugger,
    DebuggerUse,
    IdleGaps,
    ReadThrough,
}

impl Archetype {
    pub const ALL: [Archetype; 7] = [
        Archetype::InvestigateEditValidate,
        Archetype::Oscillate,
        Archetype::Restart,
        Archetype::PoorMansDebugger,
        Archetype::DebuggerUse,
        Archetype::IdleGaps,
        Archetype::ReadThrough,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::InvestigateEditValidate => "investigate-edit-validate",
            Archetype::Oscillate => "oscillate",
            Archetype::Restart => "restart",
            Archetype::PoorMansDebugger => "poor-mans-debugger",
            Archetype::DebuggerUse => "debugger-use",
            Archetype::IdleGaps => "idle-gaps",
            Archetype::ReadThrough => "read-through",
        }
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Archetype {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Archetype::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| GenError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("bad scenario parameter {0}")]
    BadParam(String),
}

/// Knobs of the archetypes; all overridable with `key=value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub restarts: u32,
    pub oscillations: u32,
    pub pmd_cycles: u32,
    pub remove_prints: bool,
    pub gap_ms: u64,
    pub debug_rounds: u32,
    /// Keep appending investigate/edit/validate cycles until this many events exist.
    pub min_events: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            restarts: 1,
            oscillations: 1,
            pmd_cycles: 2,
            remove_prints: true,
            gap_ms: 301_000,
            debug_rounds: 1,
            min_events: 0,
        }
    }
}

impl ScenarioParams {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), GenError> {
        let bad = || GenError::BadParam(format!("{key}={value}"));
        fn num<T: FromStr>(v: &str, bad: impl Fn() -> GenError) -> Result<T, GenError> {
            v.parse().map_err(|_| bad())
        }
        match key {
            "restarts" => self.restarts = num(value, bad)?,
            "oscillations" => self.oscillations = num(value, bad)?,
            "pmd_cycles" => self.pmd_cycles = num(value, bad)?,
            "remove_prints" => self.remove_prints = num(value, bad)?,
            "gap_ms" => self.gap_ms = num(value, bad)?,
            "debug_rounds" => self.debug_rounds = num(value, bad)?,
            "min_events" => self.min_events = num(value, bad)?,
            _ => return Err(GenError::BadParam(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthPattern {
    pub kind: PatternKind,
    pub start_id: u64,
    pub end_id: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub removed_later: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthPhase {
    pub label: PhaseLabel,
    pub start_id: u64,
    pub end_id: u64,
    pub start_ms: u64,
    pub end_ms: u64,
}

/// What the generator planted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truth {
    pub scenario: String,
    pub seed: u64,
    pub expected_sessions: usize,
    /// False when filler was appended and only `expected_sessions` holds.
    pub complete: bool,
    pub patterns: Vec<TruthPattern>,
    pub phases: Vec<TruthPhase>,
}

impl Truth {
    pub fn of_kind(&self, kind: PatternKind) -> impl Iterator<Item = &TruthPattern> {
        self.patterns.iter().filter(move |p| p.kind == kind)
    }
}

pub struct Scenario {
    pub archetypes: Vec<Archetype>,
    pub params: ScenarioParams,
}

impl Scenario {
    pub fn parse(name: &str) -> Result<Self, GenError> {
        let archetypes = name
            .split('+')
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<Archetype>, _>>()?;
        if archetypes.is_empty() {
            return Err(GenError::UnknownScenario(name.to_string()));
        }
        Ok(Scenario {
            archetypes,
            params: ScenarioParams::default(),
        })
    }

    pub fn name(&self) -> String {
        self.archetypes.iter().map(|a| a.as_str()).collect::<Vec<_>>().join("+")
    }
}

struct TypedLine {
    last: (u64, u64),
    removed: bool,
}

struct Gen {
    rng: ChaCha8Rng,
    initial: Vec<FileEntry>,
    t: u64,
    next_id: u64,
    events: Vec<Event>,
    content: BTreeMap<String, Vec<String>>,
    tags: BTreeMap<String, Vec<Option<usize>>>,
    view: HashMap<String, LineRange>,
    typed: Vec<TypedLine>,
    focus: Option<(String, u64)>,
    claimed_visit: Option<u64>,
    pending_doc: Option<u64>,
    tour_files: Vec<String>,
    fresh_files: Vec<String>,
    tour_cursor: usize,
    truth: Vec<TruthPattern>,
    launches: Vec<(u64, u64)>,
    long_gaps: usize,
    edit_span: Option<(u64, u64)>,
}

fn is_doc(path: &str) -> bool {
    path.ends_with(".txt") || path.ends_with(".md")
}

impl Gen {
    fn new(seed: u64, restarts: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut names: Vec<&str> = CLASS_NAMES.to_vec();
        names.shuffle(&mut rng);
        let fresh_needed = 4 * restarts + 2;
        let tour_count = 6;
        let mut names = names.into_iter().cycle().enumerate();
        let mut path = |rng: &mut ChaCha8Rng| {
            let (i, n) = names.next().expect("cycle");
            let pkg = ["core", "model", "service"][rng.gen_range(0..3)];
            if i < CLASS_NAMES.len() {
                format!("src/{pkg}/{n}.java")
            } else {
                format!("src/{pkg}/{n}{}.java", i / CLASS_NAMES.len())
            }
        };
        let tour_files: Vec<String> = (0..tour_count).map(|_| path(&mut rng)).collect();
        let fresh_files: Vec<String> = (0..fresh_needed).map(|_| path(&mut rng)).collect();
        let mut content = BTreeMap::new();
        for f in tour_files.iter().chain(&fresh_files) {
            let n = rng.gen_range(260..=420);
            content.insert(f.clone(), vec![String::new(); n]);
        }
        content.insert(DOC.to_string(), vec![String::new(); rng.gen_range(60..=120)]);
        content.insert(NOTES.to_string(), vec![String::new(); rng.gen_range(20..=60)]);
        let tags = content.iter().map(|(k, v)| (k.clone(), vec![None; v.len()])).collect();
        let initial = content.iter().map(|(k, v)| FileEntry::new(k.clone(), v.len() as u32)).collect();
        Gen {
            rng,
            initial,
            t: BASE_MS,
            next_id: 1,
            events: Vec::new(),
            content,
            tags,
            view: HashMap::new(),
            typed: Vec::new(),
            focus: None,
            claimed_visit: None,
            pending_doc: None,
            tour_files,
            fresh_files,
            tour_cursor: 0,
            truth: Vec::new(),
            launches: Vec::new(),
            long_gaps: 0,
            edit_span: None,
        }
    }

    fn wait(&mut self, lo: u64, hi: u64) {
        self.t += self.rng.gen_range(lo..=hi);
    }

    fn emit(&mut self, payload: Payload, context: EventContext) -> (u64, u64) {
        let id = self.next_id;
        self.next_id += 1;
        self.events.push(Event::new(id, self.t, payload, context));
        (id, self.t)
    }

    fn lines(&self, file: &str) -> u32 {
        self.content[file].len() as u32
    }

    fn range_at(&self, file: &str, first: u32) -> LineRange {
        let n = self.lines(file).max(1);
        let first = first.clamp(1, n);
        LineRange::new(first, (first + PAGE - 1).min(n))
    }

    fn ctx(&self, file: &str) -> EventContext {
        let mut c = EventContext::in_file(file);
        c.visible_range = self.view.get(file).copied();
        c
    }

    /// Open `file` showing `first..`; records a visit and any doc switch.
    fn open(&mut self, file: &str, first: u32) -> (u64, u64) {
        let range = self.range_at(file, first);
        self.view.insert(file.to_string(), range);
        let ev = self.emit(
            Payload::File {
                path: file.to_string(),
                action: FileAction::Open,
            },
            self.ctx(file),
        );
        let previous = self.focus.clone();
        if previous.as_ref().map(|(p, _)| p.as_str()) != Some(file) {
            match (&previous, is_doc(file)) {
                (Some((p, start)), true) if !is_doc(p) && self.pending_doc.is_none() => {
                    let start = if self.claimed_visit == Some(*start) { ev.0 } else { *start };
                    self.pending_doc = Some(start);
                }
                (None, true) | (Some(_), true) => {}
                (_, false) => {
                    if let Some(start) = self.pending_doc.take() {
                        self.truth.push(TruthPattern {
                            kind: PatternKind::DocSwitch,
                            start_id: start,
                            end_id: ev.0,
                            removed_later: None,
                        });
                        self.claimed_visit = Some(ev.0);
                    }
                }
            }
            self.focus = Some((file.to_string(), ev.0));
        }
        ev
    }

    fn ensure_focus(&mut self, file: &str, first: u32) {
        if self.focus.as_ref().map(|(p, _)| p.as_str()) != Some(file) {
            self.wait(800, 2_500);
            self.open(file, first);
        }
    }

    fn scroll_to(&mut self, file: &str, first: u32) -> (u64, u64) {
        self.ensure_focus(file, first);
        let from = self.view.get(file).copied().unwrap_or_else(|| self.range_at(file, 1));
        let to = self.range_at(file, first);
        self.view.insert(file.to_string(), to);
        self.emit(
            Payload::Scroll {
                file: file.to_string(),
                from,
                to,
            },
            self.ctx(file),
        )
    }

    fn click(&mut self, file: &str, line: u32) -> (u64, u64) {
        self.ensure_focus(file, line.saturating_sub(10));
        let line = line.clamp(1, self.lines(file));
        self.emit(
            Payload::EditorMouse {
                file: file.to_string(),
                line,
                kind: MouseKind::Click,
                button: Some("left".into()),
            },
            self.ctx(file),
        )
    }

    fn launch(&mut self, mode: LaunchMode) -> (u64, u64) {
        let ev = self.emit(
            Payload::Launch {
                mode,
                target: "app.Main".into(),
            },
            EventContext::default(),
        );
        self.launches.push(ev);
        ev
    }

    fn debug(&mut self, kind: DebugKind, file: &str, line: u32) -> (u64, u64) {
        self.emit(
            Payload::Debug {
                kind,
                file: file.to_string(),
                line,
            },
            self.ctx(file),
        )
    }

    fn view_event(&mut self, name: &str) {
        self.emit(
            Payload::View {
                name: name.into(),
                action: "activate".into(),
            },
            EventContext::default(),
        );
    }

    fn save(&mut self, file: &str) {
        self.emit(Payload::Save { file: file.to_string() }, self.ctx(file));
    }

    fn change(&mut self, file: &str, line: u32, col: u32, inserted: &str, deleted: &str) -> (u64, u64) {
        let ev = self.emit(
            Payload::CodeChange {
                file: file.to_string(),
                line,
                col,
                inserted: inserted.to_string(),
                deleted: deleted.to_string(),
            },
            self.ctx(file),
        );
        let idx = line as usize - 1;
        let lines = self.content.get_mut(file).expect("known file");
        let tags = self.tags.get_mut(file).expect("known file");
        if inserted == "\n" {
            lines.insert(idx + 1, String::new());
            tags.insert(idx + 1, None);
        } else if deleted.starts_with('\n') {
            lines.remove(idx + 1);
            if let Some(Some(k)) = tags.get(idx + 1).copied() {
                self.typed[k].removed = true;
            }
            tags.remove(idx + 1);
        } else {
            let text = &mut lines[idx];
            let at = text.char_indices().nth(col as usize).map_or(text.len(), |(i, _)| i);
            if deleted.is_empty() {
                text.insert_str(at, inserted);
            } else {
                text.replace_range(at..at + deleted.len(), "");
            }
            if let Some(k) = tags[idx] {
                self.typed[k].last = ev;
            }
        }
        self.edit_span = Some((self.edit_span.map_or(ev.0, |s| s.0), ev.0));
        ev
    }

    /// Insert a new line after `after` and type `text` into it. Returns the
    /// first keystroke and the new line's number.
    fn type_line(&mut self, file: &str, after: u32, text: &str, typos: bool) -> ((u64, u64), u32) {
        self.click(file, after);
        self.wait(300, 900);
        let col = self.content[file][after as usize - 1].chars().count() as u32;
        self.change(file, after, col, "\n", "");
        let line = after + 1;
        let k = self.typed.len();
        self.typed.push(TypedLine {
            last: (0, 0),
            removed: false,
        });
        self.tags.get_mut(file).expect("known file")[line as usize - 1] = Some(k);
        let mut first = None;
        for (i, ch) in text.chars().enumerate() {
            self.wait(90, 380);
            if typos && i > 3 && self.rng.gen_bool(0.04) {
                let wrong = "qzxj".chars().nth(self.rng.gen_range(0..4)).expect("in range").to_string();
                let ev = self.change(file, line, i as u32, &wrong, "");
                first.get_or_insert(ev);
                self.wait(150, 600);
                self.change(file, line, i as u32, "", &wrong);
                self.wait(90, 380);
            }
            let ev = self.change(file, line, i as u32, &ch.to_string(), "");
            first.get_or_insert(ev);
        }
        (first.expect("non-empty text"), line)
    }

    fn delete_line(&mut self, file: &str, line: u32) -> (u64, u64) {
        self.click(file, line);
        self.wait(400, 1_200);
        let prev = line - 1;
        let col = self.content[file][prev as usize - 1].chars().count() as u32;
        let gone = format!("\n{}", self.content[file][line as usize - 1]);
        self.change(file, prev, col, "", &gone)
    }

    fn code_line(&mut self) -> &'static str {
        CODE_LINES[self.rng.gen_range(0..CODE_LINES.len())]
    }

    /// Read `file` from `from` down to `to`, a page at a time.
    fn tour(&mut self, file: &str, from: u32, to: u32) {
        self.wait(1_000, 3_000);
        self.open(file, from);
        let mut first = from;
        while first + PAGE <= to.min(self.lines(file)) {
            self.wait(2_500, 7_000);
            if self.rng.gen_bool(0.3) {
                let line = first + self.rng.gen_range(3..PAGE - 3);
                self.click(file, line);
                self.wait(1_000, 3_000);
            }
            first += PAGE;
            self.scroll_to(file, first);
        }
        self.wait(2_000, 5_000);
    }

    fn next_tour_file(&mut self, avoid: &[&str]) -> String {
        loop {
            let f = self.tour_files[self.tour_cursor % self.tour_files.len()].clone();
            self.tour_cursor += 1;
            let current = self.focus.as_ref().map(|(p, _)| p.as_str());
            if !avoid.contains(&f.as_str()) && current != Some(f.as_str()) {
                return f;
            }
        }
    }

    fn short_tour(&mut self, avoid: &[&str]) -> String {
        let f = self.next_tour_file(avoid);
        let start = 1 + PAGE * self.rng.gen_range(0..3);
        self.tour(&f, start, start + 2 * PAGE);
        f
    }

    fn read_doc(&mut self, pages: u32) {
        self.wait(1_000, 3_000);
        self.open(DOC, 1);
        for p in 1..=pages {
            self.wait(4_000, 9_000);
            self.scroll_to(DOC, 1 + p * PAGE);
        }
        self.wait(2_000, 4_000);
    }

    fn intro(&mut self, doc_check: bool) {
        self.emit(
            Payload::Recording {
                action: RecordingAction::Start,
            },
            EventContext::default(),
        );
        self.read_doc(2);
        let first = self.next_tour_file(&[]);
        self.tour(&first, 1, 4 * PAGE + 1);
        if doc_check {
            self.read_doc(1);
        }
        for _ in 0..2 {
            let f = self.next_tour_file(&[]);
            self.tour(&f, 1, 3 * PAGE + 1);
        }
    }

    /// Dense typing in one region for at least `min_ms`.
    fn edit_burst(&mut self, file: &str, region: u32, min_ms: u64) -> u32 {
        self.ensure_focus(file, region.saturating_sub(10));
        let start = self.t;
        let mut at = region;
        while self.t - start < min_ms {
            let text = self.code_line();
            let (_, line) = self.type_line(file, at, text, true);
            at = line + self.rng.gen_range(0..3);
            self.wait(800, 3_000);
            if self.rng.gen_bool(0.3) {
                self.save(file);
            }
        }
        self.save(file);
        at
    }

    fn validation(&mut self, min_ms: u64) {
        let start = self.t;
        self.wait(3_000, 12_000);
        self.launch(LaunchMode::Run);
        self.view_event("Console");
        loop {
            let f = self.next_tour_file(&[]);
            let from = 1 + PAGE * self.rng.gen_range(0..2);
            self.open(&f, from);
            self.wait(3_000, 8_000);
            self.scroll_to(&f, from + PAGE);
            self.wait(3_000, 8_000);
            self.scroll_to(&f, from + 2 * PAGE);
            self.wait(4_000, 10_000);
            self.launch(LaunchMode::Run);
            self.view_event("Console");
            if self.t - start >= min_ms {
                break;
            }
        }
    }

    fn investigate_edit_validate(&mut self) {
        self.short_tour(&[]);
        let f = self.next_tour_file(&[]);
        self.tour(&f, 1, 2 * PAGE + 1);
        let region = self.rng.gen_range(40..120);
        self.edit_burst(&f, region, 170_000);
        self.validation(190_000);
    }

    fn oscillate(&mut self) {
        let a = self.next_tour_file(&[]);
        let cross = self.rng.gen_bool(0.5);
        let b = if cross { self.next_tour_file(&[&a]) } else { a.clone() };
        let x = self.rng.gen_range(1..40);
        let y = if cross { self.rng.gen_range(1..120) } else { self.rng.gen_range(170..230) };
        self.short_tour(&[&a, &b]);
        let switches = self.rng.gen_range(3..=5);
        let mut arrivals = Vec::new();
        for s in 0..=switches {
            self.wait(1_500, 5_000);
            let (file, first) = if s % 2 == 0 { (&a, x) } else { (&b, y) };
            let arrival = if s == 0 || cross {
                self.open(file, first)
            } else {
                self.scroll_to(file, first)
            };
            arrivals.push(arrival);
            for _ in 0..self.rng.gen_range(0..=2) {
                self.wait(2_000, 6_000);
                let line = first + self.rng.gen_range(5..20);
                self.click(file, line);
            }
            self.wait(2_000, 8_000);
        }
        self.truth.push(TruthPattern {
            kind: PatternKind::Oscillate,
            start_id: arrivals[0].0,
            end_id: arrivals[arrivals.len() - 1].0,
            removed_later: None,
        });
        self.short_tour(&[&a, &b]);
    }

    fn restart(&mut self, restarts: u32) {
        let f = self.next_tour_file(&[]);
        let region = self.rng.gen_range(40..120);
        let mut at = self.edit_burst(&f, region, 170_000);
        for _ in 0..restarts {
            self.wait(2_000, 5_000);
            let doc = self.open(DOC, 1);
            self.wait(5_000, 10_000);
            self.scroll_to(DOC, 1 + PAGE);
            let mut last = doc;
            for _ in 0..4 {
                self.wait(4_000, 8_000);
                let fresh = self.fresh_files.pop().expect("enough fresh files");
                last = self.open(&fresh, 1);
                self.wait(8_000, 12_000);
                self.scroll_to(&fresh, 1 + PAGE);
                self.wait(5_000, 9_000);
            }
            self.truth.push(TruthPattern {
                kind: PatternKind::Restart,
                start_id: doc.0,
                end_id: last.0,
                removed_later: None,
            });
            let resume = doc.1 + 125_000;
            if self.t < resume {
                self.t = resume;
            }
            self.open(&f, at.saturating_sub(10).max(1));
            at = self.edit_burst(&f, at, 30_000);
        }
    }

    fn poor_mans_debugger(&mut self, cycles: u32, remove: bool) {
        let f = self.next_tour_file(&[]);
        self.tour(&f, 1, 2 * PAGE + 1);
        let mut at = self.rng.gen_range(40..100);
        let mut prints = Vec::new();
        for _ in 0..cycles {
            let text = PRINT_LINES[self.rng.gen_range(0..PRINT_LINES.len())];
            let (first, line) = self.type_line(&f, at, text, false);
            prints.push(line);
            self.wait(500, 1_500);
            self.save(&f);
            self.wait(1_000, 3_000);
            let launch = self.launch(LaunchMode::Run);
            self.view_event("Console");
            self.truth.push(TruthPattern {
                kind: PatternKind::PoorMansDebugger,
                start_id: first.0,
                end_id: launch.0,
                removed_later: Some(remove),
            });
            self.wait(6_000, 15_000);
            at = line + self.rng.gen_range(2..6);
        }
        if remove {
            for &line in prints.iter().rev() {
                self.delete_line(&f, line);
                self.wait(1_000, 3_000);
            }
        }
        let fix_at = prints[0].saturating_sub(1).max(2);
        let text = self.code_line();
        self.type_line(&f, fix_at, text, true);
        self.save(&f);
        self.wait(1_000, 3_000);
        self.launch(LaunchMode::Run);
        self.view_event("Console");
        self.wait(3_000, 8_000);
    }

    fn debugger_use(&mut self, rounds: u32) {
        let f = self.next_tour_file(&[]);
        self.tour(&f, 1, 2 * PAGE + 1);
        let region = self.rng.gen_range(40..100);
        for _ in 0..rounds {
            let mut sets = Vec::new();
            for k in 0..self.rng.gen_range(1..=2) {
                let line = region + 4 * k;
                self.wait(1_000, 3_000);
                self.click(&f, line);
                self.wait(500, 1_500);
                sets.push((self.debug(DebugKind::BreakpointSet, &f, line), line));
            }
            self.wait(1_000, 3_000);
            self.launch(LaunchMode::Debug);
            self.emit(
                Payload::Perspective {
                    name: "Debug".into(),
                    action: "open".into(),
                },
                EventContext::default(),
            );
            self.wait(2_000, 6_000);
            let hit = self.debug(DebugKind::BreakpointHit, &f, sets[0].1);
            for s in 1..=self.rng.gen_range(2..=4) {
                self.wait(1_500, 4_000);
                self.debug(DebugKind::Step, &f, sets[0].1 + s);
            }
            self.wait(1_000, 3_000);
            for (_, line) in &sets {
                self.debug(DebugKind::BreakpointRemoved, &f, *line);
            }
            self.emit(
                Payload::Perspective {
                    name: "Java".into(),
                    action: "open".into(),
                },
                EventContext::default(),
            );
            self.truth.push(TruthPattern {
                kind: PatternKind::DebuggerUse,
                start_id: sets[0].0 .0,
                end_id: hit.0,
                removed_later: None,
            });
            self.wait(3_000, 8_000);
        }
        let text = self.code_line();
        self.type_line(&f, region, text, true);
        self.save(&f);
        self.wait(1_000, 3_000);
        self.launch(LaunchMode::Run);
        self.view_event("Console");
        self.wait(3_000, 8_000);
    }

    fn idle_gaps(&mut self, gap_ms: u64) {
        self.short_tour(&[]);
        self.t += self.rng.gen_range(20_000..60_000);
        self.short_tour(&[]);
        self.t = self.events.last().map_or(self.t, |e| e.timestamp_ms) + gap_ms;
        if gap_ms > DEFAULT_LONG_IDLE_MS {
            self.long_gaps += 1;
        }
        let file = self.focus.as_ref().map(|(p, _)| p.clone());
        self.emit(
            Payload::Window {
                window_id: "main".into(),
                action: "focus".into(),
            },
            EventContext {
                file,
                ..Default::default()
            },
        );
        self.short_tour(&[]);
    }

    fn read_through(&mut self) {
        for _ in 0..3 {
            let f = self.next_tour_file(&[]);
            self.tour(&f, 1, 5 * PAGE + 1);
        }
    }

    fn finish(mut self, scenario: &Scenario, seed: u64, phases: bool, complete: bool) -> (Recording, Truth) {
        self.wait(2_000, 5_000);
        self.emit(
            Payload::Recording {
                action: RecordingAction::Stop,
            },
            EventContext::default(),
        );
        let last_surviving = self.typed.iter().filter(|t| !t.removed).map(|t| t.last).max();
        if let Some(last) = last_surviving {
            for &(id, ms) in &self.launches {
                if (ms, id) > (last.1, last.0) {
                    self.truth.push(TruthPattern {
                        kind: PatternKind::ValidationLaunch,
                        start_id: id,
                        end_id: id,
                        removed_later: None,
                    });
                }
            }
        }
        let mut phase_truth = Vec::new();
        if let (true, Some((first_edit, last_edit))) = (phases, self.edit_span) {
            let pos = |id: u64| self.events.iter().position(|e| e.id == id).expect("planted id");
            let (a, b) = (pos(first_edit), pos(last_edit));
            let span = |label, i: usize, j: usize| TruthPhase {
                label,
                start_id: self.events[i].id,
                end_id: self.events[j].id,
                start_ms: self.events[i].timestamp_ms,
                end_ms: self.events[j].timestamp_ms,
            };
            phase_truth = vec![
                span(PhaseLabel::Investigation, 0, a - 1),
                span(PhaseLabel::Edit, a, b),
                span(PhaseLabel::Validation, b + 1, self.events.len() - 1),
            ];
        }
        self.truth.sort_by_key(|p| (p.start_id, p.end_id, p.kind));
        let recording = Recording {
            recording_id: format!("{}-{seed}", scenario.name()),
            files: self.initial,
            events: self.events,
        };
        let truth = Truth {
            scenario: scenario.name(),
            seed,
            expected_sessions: 1 + self.long_gaps,
            complete,
            patterns: self.truth,
            phases: phase_truth,
        };
        (recording, truth)
    }
}

/// Generate a recording for `scenario` (archetype names joined with `+`).
pub fn generate(scenario: &str, seed: u64, overrides: &BTreeMap<String, String>) -> Result<(Recording, Truth), GenError> {
    let mut sc = Scenario::parse(scenario)?;
    for (k, v) in overrides {
        sc.params.set(k, v)?;
    }
    Ok(generate_scenario(&sc, seed))
}

pub fn generate_scenario(sc: &Scenario, seed: u64) -> (Recording, Truth) {
    let p = &sc.params;
    let restarts = if sc.archetypes.contains(&Archetype::Restart) { p.restarts as usize } else { 0 };
    let mut g = Gen::new(seed, restarts);
    let pure_iev = sc.archetypes == [Archetype::InvestigateEditValidate];
    g.intro(pure_iev);
    for a in &sc.archetypes {
        match a {
            Archetype::InvestigateEditValidate => g.investigate_edit_validate(),
            Archetype::Oscillate => {
                for _ in 0..p.oscillations {
                    g.oscillate();
                }
            }
            Archetype::Restart => g.restart(p.restarts),
            Archetype::PoorMansDebugger => g.poor_mans_debugger(p.pmd_cycles.max(1), p.remove_prints),
            Archetype::DebuggerUse => g.debugger_use(p.debug_rounds.max(1)),
            Archetype::IdleGaps => g.idle_gaps(p.gap_ms),
            Archetype::ReadThrough => g.read_through(),
        }
    }
    let mut complete = true;
    while g.events.len() + 1 < p.min_events {
        complete = false;
        g.investigate_edit_validate();
    }
    g.finish(sc, seed, pure_iev && complete, complete)
}
