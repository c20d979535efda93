use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::{EventError, EventType, LineRange};

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            fn parse(s: &str) -> Option<Self> {
                match s {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

string_enum!(RecordingAction { Start => "start", Stop => "stop" });
string_enum!(DebugKind {
    BreakpointSet => "breakpoint_set",
    BreakpointRemoved => "breakpoint_removed",
    BreakpointHit => "breakpoint_hit",
    Step => "step",
});
string_enum!(LaunchMode { Run => "run", Debug => "debug" });
string_enum!(MouseKind { Move => "move", Click => "click" });
string_enum!(TreeAction { Collapse => "collapse", Expand => "expand" });
string_enum!(FileAction { Open => "open", Close => "close" });
string_enum!(ProjectAction { Load => "load", Unload => "unload" });
string_enum!(ResourceAction { Create => "create", Delete => "delete", Change => "change" });

/// Type-specific event data. The variant determines the [`EventType`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Recording { action: RecordingAction },
    Scroll { file: String, from: LineRange, to: LineRange },
    TextSelection { file: String, start_line: u32, start_col: u32, end_line: u32, end_col: u32 },
    Debug { kind: DebugKind, file: String, line: u32 },
    Launch { mode: LaunchMode, target: String },
    WebBrowser { url: String, query: Option<String> },
    CodeChange { file: String, line: u32, col: u32, inserted: String, deleted: String },
    CodeCompletion { file: String, line: u32, accepted: bool },
    TextComment { text: String },
    VoiceComment { attachment_ref: String },
    Editor { editor_id: String, action: String },
    Perspective { name: String, action: String },
    View { name: String, action: String },
    Window { window_id: String, action: String },
    EditorMouse { file: String, line: u32, kind: MouseKind, button: Option<String> },
    EditorTextCursor { file: String, line: u32, col: u32 },
    Search { query: String, scope: String },
    TreeSelection { path: String },
    TreeViewer { path: String, action: TreeAction },
    File { path: String, action: FileAction },
    Project { name: String, action: ProjectAction },
    Resource { path: String, action: ResourceAction },
    Save { file: String },
}

impl Payload {
    pub fn event_type(&self) -> EventType {
        use EventType as T;
        match self {
            Payload::Recording { .. } => T::RecordingEvent,
            Payload::Scroll { .. } => T::ScrollEvent,
            Payload::TextSelection { .. } => T::TextSelectionEvent,
            Payload::Debug { .. } => T::DebugEvent,
            Payload::Launch { .. } => T::LaunchEvent,
            Payload::WebBrowser { .. } => T::WebBrowserEvent,
            Payload::CodeChange { .. } => T::CodeChangeEvent,
            Payload::CodeCompletion { .. } => T::CodeCompletionEvent,
            Payload::TextComment { .. } => T::TextCommentEvent,
            Payload::VoiceComment { .. } => T::VoiceCommentEvent,
            Payload::Editor { .. } => T::EditorEvent,
            Payload::Perspective { .. } => T::PerspectiveEvent,
            Payload::View { .. } => T::ViewEvent,
            Payload::Window { .. } => T::WindowEvent,
            Payload::EditorMouse { .. } => T::EditorMouseEvent,
            Payload::EditorTextCursor { .. } => T::EditorTextCursorEvent,
            Payload::Search { .. } => T::SearchEvent,
            Payload::TreeSelection { .. } => T::TreeSelectionEvent,
            Payload::TreeViewer { .. } => T::TreeViewerEvent,
            Payload::File { .. } => T::FileEvent,
            Payload::Project { .. } => T::ProjectEvent,
            Payload::Resource { .. } => T::ResourceEvent,
            Payload::Save { .. } => T::SaveEvent,
        }
    }

    /// Manifest file referenced by the payload, if any. Tree paths are
    /// excluded since they may name directories.
    pub fn file(&self) -> Option<&str> {
        match self {
            Payload::Scroll { file, .. }
            | Payload::TextSelection { file, .. }
            | Payload::Debug { file, .. }
            | Payload::CodeChange { file, .. }
            | Payload::CodeCompletion { file, .. }
            | Payload::EditorMouse { file, .. }
            | Payload::EditorTextCursor { file, .. }
            | Payload::Save { file } => Some(file),
            Payload::File { path, .. } => Some(path),
            _ => None,
        }
    }

    /// Current (post-edit) line the payload points at, if it has one.
    pub fn line(&self) -> Option<u32> {
        match self {
            Payload::Scroll { to, .. } => Some(to.centroid()),
            Payload::TextSelection { start_line, .. } => Some(*start_line),
            Payload::Debug { line, .. }
            | Payload::CodeChange { line, .. }
            | Payload::CodeCompletion { line, .. }
            | Payload::EditorMouse { line, .. }
            | Payload::EditorTextCursor { line, .. } => Some(*line),
            _ => None,
        }
    }

    pub(super) fn to_fields(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        match self {
            Payload::Recording { action } => put("action", action.as_str().into()),
            Payload::Scroll { file, from, to } => {
                put("file", file.as_str().into());
                put("from_first", from.first.into());
                put("from_last", from.last.into());
                put("to_first", to.first.into());
                put("to_last", to.last.into());
            }
            Payload::TextSelection { file, start_line, start_col, end_line, end_col } => {
                put("file", file.as_str().into());
                put("start_line", (*start_line).into());
                put("start_col", (*start_col).into());
                put("end_line", (*end_line).into());
                put("end_col", (*end_col).into());
            }
            Payload::Debug { kind, file, line } => {
                put("kind", kind.as_str().into());
                put("file", file.as_str().into());
                put("line", (*line).into());
            }
            Payload::Launch { mode, target } => {
                put("mode", mode.as_str().into());
                put("target", target.as_str().into());
            }
            Payload::WebBrowser { url, query } => {
                put("url", url.as_str().into());
                if let Some(q) = query {
                    put("query", q.as_str().into());
                }
            }
            Payload::CodeChange { file, line, col, inserted, deleted } => {
                put("file", file.as_str().into());
                put("line", (*line).into());
                put("col", (*col).into());
                put("inserted", inserted.as_str().into());
                put("deleted", deleted.as_str().into());
            }
            Payload::CodeCompletion { file, line, accepted } => {
                put("file", file.as_str().into());
                put("line", (*line).into());
                put("accepted", (*accepted).into());
            }
            Payload::TextComment { text } => put("text", text.as_str().into()),
            Payload::VoiceComment { attachment_ref } => {
                put("attachment_ref", attachment_ref.as_str().into())
            }
            Payload::Editor { editor_id, action } => {
                put("editor_id", editor_id.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::Perspective { name, action } | Payload::View { name, action } => {
                put("name", name.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::Window { window_id, action } => {
                put("window_id", window_id.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::EditorMouse { file, line, kind, button } => {
                put("file", file.as_str().into());
                put("line", (*line).into());
                put("kind", kind.as_str().into());
                if let Some(b) = button {
                    put("button", b.as_str().into());
                }
            }
            Payload::EditorTextCursor { file, line, col } => {
                put("file", file.as_str().into());
                put("line", (*line).into());
                put("col", (*col).into());
            }
            Payload::Search { query, scope } => {
                put("query", query.as_str().into());
                put("scope", scope.as_str().into());
            }
            Payload::TreeSelection { path } => put("path", path.as_str().into()),
            Payload::TreeViewer { path, action } => {
                put("path", path.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::File { path, action } => {
                put("path", path.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::Project { name, action } => {
                put("name", name.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::Resource { path, action } => {
                put("path", path.as_str().into());
                put("action", action.as_str().into());
            }
            Payload::Save { file } => put("file", file.as_str().into()),
        }
        m
    }

    /// Parse the typed payload, consuming known keys and returning the rest.
    pub(super) fn from_fields(
        event_type: EventType,
        fields: Map<String, Value>,
    ) -> Result<(Payload, BTreeMap<String, Value>), EventError> {
        let mut f = Fields { type_name: event_type.as_str(), map: fields };
        use EventType as T;
        let payload = match event_type {
            T::RecordingEvent => Payload::Recording { action: f.choice("action", RecordingAction::parse)? },
            T::ScrollEvent => {
                let file = f.string("file")?;
                let from = f.range("from_first", "from_last")?;
                let to = f.range("to_first", "to_last")?;
                Payload::Scroll { file, from, to }
            }
            T::TextSelectionEvent => {
                let file = f.string("file")?;
                let start_line = f.line("start_line")?;
                let start_col = f.col("start_col")?;
                let end_line = f.line("end_line")?;
                let end_col = f.col("end_col")?;
                if (end_line, end_col) < (start_line, start_col) {
                    return Err(f.violation("selection end precedes start"));
                }
                Payload::TextSelection { file, start_line, start_col, end_line, end_col }
            }
            T::DebugEvent => Payload::Debug {
                kind: f.choice("kind", DebugKind::parse)?,
                file: f.string("file")?,
                line: f.line("line")?,
            },
            T::LaunchEvent => Payload::Launch {
                mode: f.choice("mode", LaunchMode::parse)?,
                target: f.string("target")?,
            },
            T::WebBrowserEvent => Payload::WebBrowser {
                url: f.string("url")?,
                query: f.opt_string("query")?,
            },
            T::CodeChangeEvent => Payload::CodeChange {
                file: f.string("file")?,
                line: f.line("line")?,
                col: f.col("col")?,
                inserted: f.string("inserted")?,
                deleted: f.string("deleted")?,
            },
            T::CodeCompletionEvent => Payload::CodeCompletion {
                file: f.string("file")?,
                line: f.line("line")?,
                accepted: f.boolean("accepted")?,
            },
            T::TextCommentEvent => Payload::TextComment { text: f.string("text")? },
            T::VoiceCommentEvent => Payload::VoiceComment { attachment_ref: f.string("attachment_ref")? },
            T::EditorEvent => Payload::Editor {
                editor_id: f.string("editor_id")?,
                action: f.string("action")?,
            },
            T::PerspectiveEvent => Payload::Perspective {
                name: f.string("name")?,
                action: f.string("action")?,
            },
            T::ViewEvent => Payload::View {
                name: f.string("name")?,
                action: f.string("action")?,
            },
            T::WindowEvent => Payload::Window {
                window_id: f.string("window_id")?,
                action: f.string("action")?,
            },
            T::EditorMouseEvent => Payload::EditorMouse {
                file: f.string("file")?,
                line: f.line("line")?,
                kind: f.choice("kind", MouseKind::parse)?,
                button: f.opt_string("button")?,
            },
            T::EditorTextCursorEvent => Payload::EditorTextCursor {
                file: f.string("file")?,
                line: f.line("line")?,
                col: f.col("col")?,
            },
            T::SearchEvent => Payload::Search {
                query: f.string("query")?,
                scope: f.string("scope")?,
            },
            T::TreeSelectionEvent => Payload::TreeSelection { path: f.string("path")? },
            T::TreeViewerEvent => Payload::TreeViewer {
                path: f.string("path")?,
                action: f.choice("action", TreeAction::parse)?,
            },
            T::FileEvent => Payload::File {
                path: f.string("path")?,
                action: f.choice("action", FileAction::parse)?,
            },
            T::ProjectEvent => Payload::Project {
                name: f.string("name")?,
                action: f.choice("action", ProjectAction::parse)?,
            },
            T::ResourceEvent => Payload::Resource {
                path: f.string("path")?,
                action: f.choice("action", ResourceAction::parse)?,
            },
            T::SaveEvent => Payload::Save { file: f.string("file")? },
        };
        Ok((payload, f.map.into_iter().collect()))
    }
}

struct Fields {
    type_name: &'static str,
    map: Map<String, Value>,
}

impl Fields {
    fn violation(&self, msg: impl std::fmt::Display) -> EventError {
        EventError::SchemaViolation(format!("{}: {msg}", self.type_name))
    }

    fn take(&mut self, key: &str) -> Result<Value, EventError> {
        self.map
            .remove(key)
            .ok_or_else(|| self.violation(format!("missing field {key:?}")))
    }

    fn string(&mut self, key: &str) -> Result<String, EventError> {
        match self.take(key)? {
            Value::String(s) => Ok(s),
            other => Err(self.violation(format!("field {key:?} must be a string, got {other}"))),
        }
    }

    fn opt_string(&mut self, key: &str) -> Result<Option<String>, EventError> {
        if self.map.contains_key(key) {
            self.string(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn boolean(&mut self, key: &str) -> Result<bool, EventError> {
        match self.take(key)? {
            Value::Bool(b) => Ok(b),
            other => Err(self.violation(format!("field {key:?} must be a boolean, got {other}"))),
        }
    }

    fn uint(&mut self, key: &str) -> Result<u32, EventError> {
        let v = self.take(key)?;
        v.as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| self.violation(format!("field {key:?} must be a non-negative integer, got {v}")))
    }

    fn line(&mut self, key: &str) -> Result<u32, EventError> {
        let n = self.uint(key)?;
        if n == 0 {
            return Err(self.violation(format!("field {key:?} is a 1-based line number, got 0")));
        }
        Ok(n)
    }

    fn col(&mut self, key: &str) -> Result<u32, EventError> {
        self.uint(key)
    }

    fn range(&mut self, first: &str, last: &str) -> Result<LineRange, EventError> {
        let r = LineRange::new(self.line(first)?, self.line(last)?);
        if !r.is_valid() {
            return Err(self.violation(format!("{first} > {last}")));
        }
        Ok(r)
    }

    fn choice<T>(&mut self, key: &str, parse: fn(&str) -> Option<T>) -> Result<T, EventError> {
        let s = self.string(key)?;
        parse(&s).ok_or_else(|| self.violation(format!("field {key:?} has unsupported value {s:?}")))
    }
}
