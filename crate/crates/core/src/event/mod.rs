//! Recorder-agnostic event taxonomy and the canonical NDJSON event encoding.
//!
//! Every recorded interaction is an [`Event`]: an id, a UTC millisecond
//! timestamp, a typed [`Payload`] (which fixes the [`EventType`]) and an
//! [`EventContext`] snapshot of the editor. Payload keys the schema does not
//! know are kept in [`Event::extra`] so they survive a round trip.

mod payload;
mod wire;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use payload::{
    DebugKind, FileAction, LaunchMode, MouseKind, Payload, ProjectAction, RecordingAction,
    ResourceAction, TreeAction,
};
pub use wire::{canonical_json, event_to_value, parse_event, serialize_event};

/// The six top-level event categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Activity,
    Execution,
    Edit,
    Environment,
    Navigation,
    Solution,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Activity,
        Category::Execution,
        Category::Edit,
        Category::Environment,
        Category::Navigation,
        Category::Solution,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Activity => "Activity",
            Category::Execution => "Execution",
            Category::Edit => "Edit",
            Category::Environment => "Environment",
            Category::Navigation => "Navigation",
            Category::Solution => "Solution",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Category::ALL.into_iter().find(|c| c.as_str() == s).ok_or(())
    }
}

macro_rules! event_types {
    ($($variant:ident => $category:ident),+ $(,)?) => {
        /// The 23 event types of schema version 1.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum EventType {
            $($variant),+
        }

        impl EventType {
            pub const ALL: [EventType; 23] = [$(EventType::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(EventType::$variant => stringify!($variant)),+
                }
            }

            pub fn category(self) -> Category {
                match self {
                    $(EventType::$variant => Category::$category),+
                }
            }
        }
    };
}

event_types! {
    RecordingEvent => Activity,
    ScrollEvent => Activity,
    TextSelectionEvent => Activity,
    DebugEvent => Execution,
    LaunchEvent => Execution,
    WebBrowserEvent => Execution,
    CodeChangeEvent => Edit,
    CodeCompletionEvent => Edit,
    TextCommentEvent => Edit,
    VoiceCommentEvent => Edit,
    EditorEvent => Environment,
    PerspectiveEvent => Environment,
    ViewEvent => Environment,
    WindowEvent => Environment,
    EditorMouseEvent => Navigation,
    EditorTextCursorEvent => Navigation,
    SearchEvent => Navigation,
    TreeSelectionEvent => Navigation,
    TreeViewerEvent => Navigation,
    FileEvent => Solution,
    ProjectEvent => Solution,
    ResourceEvent => Solution,
    SaveEvent => Solution,
}

/// Category an event type belongs to. Total over all types.
pub fn category_of(event_type: EventType) -> Category {
    event_type.category()
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        EventType::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

/// Inclusive, 1-based line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineRange {
    pub first: u32,
    pub last: u32,
}

impl LineRange {
    pub fn new(first: u32, last: u32) -> Self {
        LineRange { first, last }
    }

    pub fn is_valid(&self) -> bool {
        1 <= self.first && self.first <= self.last
    }

    pub fn centroid(&self) -> u32 {
        self.first + (self.last - self.first) / 2
    }
}

/// Snapshot of the editor at the time an event was captured.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventContext {
    pub file: Option<String>,
    pub visible_range: Option<LineRange>,
    pub visible_tabs: Vec<String>,
    pub focused_window: Option<String>,
}

impl EventContext {
    pub fn in_file(file: impl Into<String>) -> Self {
        EventContext {
            file: Some(file.into()),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(range) = self.visible_range {
            if !range.is_valid() {
                return Err(format!(
                    "visible_range [{}, {}] must satisfy 1 <= first <= last",
                    range.first, range.last
                ));
            }
        }
        if let Some(file) = &self.file {
            if !self.visible_tabs.is_empty() && !self.visible_tabs.contains(file) {
                return Err(format!("file {file:?} is not among visible_tabs"));
            }
        }
        Ok(())
    }
}

/// One recorded interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: u64,
    pub timestamp_ms: u64,
    pub payload: Payload,
    /// Payload keys not defined by the schema, preserved verbatim.
    pub extra: BTreeMap<String, Value>,
    pub context: EventContext,
}

impl Event {
    pub fn new(id: u64, timestamp_ms: u64, payload: Payload, context: EventContext) -> Self {
        Event {
            id,
            timestamp_ms,
            payload,
            extra: BTreeMap::new(),
            context,
        }
    }

    pub fn event_type(&self) -> EventType {
        self.payload.event_type()
    }

    pub fn category(&self) -> Category {
        self.event_type().category()
    }

    /// The file this event is about: the payload's file, else the context file.
    pub fn file(&self) -> Option<&str> {
        self.payload.file().or(self.context.file.as_deref())
    }

    /// Every manifest path this event refers to.
    pub fn referenced_files(&self) -> Vec<&str> {
        let mut files: Vec<&str> = Vec::new();
        if let Some(f) = self.payload.file() {
            files.push(f);
        }
        if let Some(f) = self.context.file.as_deref() {
            files.push(f);
        }
        files.extend(self.context.visible_tabs.iter().map(String::as_str));
        files.sort_unstable();
        files.dedup();
        files
    }
}

/// Errors raised while parsing a single event record.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventError {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("unknown event type {0:?}")]
    UnknownEventType(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("context violation: {0}")]
    ContextViolation(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_categories_and_23_types() {
        assert_eq!(Category::ALL.len(), 6);
        assert_eq!(EventType::ALL.len(), 23);
        for c in Category::ALL {
            assert!(EventType::ALL.iter().any(|t| t.category() == c));
        }
    }

    #[test]
    fn category_examples() {
        assert_eq!(category_of(EventType::SearchEvent), Category::Navigation);
        assert_eq!(category_of(EventType::SaveEvent), Category::Solution);
        assert_eq!(category_of(EventType::CodeChangeEvent), Category::Edit);
        assert_eq!(category_of(EventType::RecordingEvent), Category::Activity);
        assert_eq!(category_of(EventType::LaunchEvent), Category::Execution);
        assert_eq!(category_of(EventType::WindowEvent), Category::Environment);
    }

    #[test]
    fn grouping_matches_catalogue() {
        use EventType::*;
        let groups: [(Category, &[EventType]); 6] = [
            (Category::Activity, &[RecordingEvent, ScrollEvent, TextSelectionEvent]),
            (Category::Execution, &[DebugEvent, LaunchEvent, WebBrowserEvent]),
            (
                Category::Edit,
                &[CodeChangeEvent, CodeCompletionEvent, TextCommentEvent, VoiceCommentEvent],
            ),
            (
                Category::Environment,
                &[EditorEvent, PerspectiveEvent, ViewEvent, WindowEvent],
            ),
            (
                Category::Navigation,
                &[
                    EditorMouseEvent,
                    EditorTextCursorEvent,
                    SearchEvent,
                    TreeSelectionEvent,
                    TreeViewerEvent,
                ],
            ),
            (
                Category::Solution,
                &[FileEvent, ProjectEvent, ResourceEvent, SaveEvent],
            ),
        ];
        let mut seen = 0;
        for (cat, types) in groups {
            for t in types {
                assert_eq!(t.category(), cat, "{t}");
                seen += 1;
            }
        }
        assert_eq!(seen, 23);
    }

    #[test]
    fn names_round_trip() {
        for t in EventType::ALL {
            assert_eq!(t.as_str().parse::<EventType>(), Ok(t));
        }
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>(), Ok(c));
        }
        assert!("BogusEvent".parse::<EventType>().is_err());
    }

    #[test]
    fn context_invariants() {
        let mut ctx = EventContext::in_file("A.java");
        assert!(ctx.validate().is_ok());
        ctx.visible_tabs = vec!["B.java".into()];
        assert!(ctx.validate().is_err());
        ctx.visible_tabs.push("A.java".into());
        assert!(ctx.validate().is_ok());
        ctx.visible_range = Some(LineRange::new(50, 10));
        assert!(ctx.validate().is_err());
        ctx.visible_range = Some(LineRange::new(0, 10));
        assert!(ctx.validate().is_err());
    }
}
