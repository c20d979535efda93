use std::collections::BTreeSet;
use std::fmt;

use glob::Pattern;
use serde::{Deserialize, Serialize};

use crate::event::{Category, Event, EventType};

/// Which events a track keeps and which edges it draws.
///
/// Types and categories are unioned; an empty selection keeps every event.
/// The compact text form is a comma-separated list of tokens:
///
/// * a category or event type name, e.g. `Navigation`, `LaunchEvent`
/// * a millisecond window `t0..t1` (either bound may be omitted)
/// * `files=<glob>`, repeatable
/// * `noedges=<Category>`, repeatable
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub include_types: BTreeSet<EventType>,
    pub include_categories: BTreeSet<Category>,
    pub from_ms: Option<u64>,
    pub to_ms: Option<u64>,
    pub files: Vec<String>,
    pub edges_disabled: BTreeSet<Category>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("filter parse error: {0}")]
pub struct FilterParseError(pub String);

/// A filter with its globs compiled.
pub struct CompiledFilter<'a> {
    spec: &'a FilterSpec,
    globs: Vec<Pattern>,
}

impl CompiledFilter<'_> {
    pub fn matches(&self, event: &Event) -> bool {
        let spec = self.spec;
        let selected = (spec.include_types.is_empty() && spec.include_categories.is_empty())
            || spec.include_types.contains(&event.event_type())
            || spec.include_categories.contains(&event.category());
        if !selected {
            return false;
        }
        if spec.from_ms.is_some_and(|t| event.timestamp_ms < t) || spec.to_ms.is_some_and(|t| event.timestamp_ms > t) {
            return false;
        }
        if self.globs.is_empty() {
            return true;
        }
        event
            .file()
            .is_some_and(|f| self.globs.iter().any(|g| g.matches(f)))
    }
}

impl FilterSpec {
    pub fn everything() -> Self {
        FilterSpec::default()
    }

    pub fn categories(categories: impl IntoIterator<Item = Category>) -> Self {
        FilterSpec {
            include_categories: categories.into_iter().collect(),
            ..FilterSpec::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == FilterSpec::default()
    }

    pub fn compile(&self) -> Result<CompiledFilter<'_>, FilterParseError> {
        let globs = self
            .files
            .iter()
            .map(|g| Pattern::new(g).map_err(|e| FilterParseError(format!("bad glob {g:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        Ok(CompiledFilter { spec: self, globs })
    }

    pub fn matches(&self, event: &Event) -> bool {
        self.compile().map(|c| c.matches(event)).unwrap_or(false)
    }

    pub fn parse(text: &str) -> Result<Self, FilterParseError> {
        let mut spec = FilterSpec::default();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(glob) = token.strip_prefix("files=") {
                Pattern::new(glob).map_err(|e| FilterParseError(format!("bad glob {glob:?}: {e}")))?;
                spec.files.push(glob.to_string());
            } else if let Some(cat) = token.strip_prefix("noedges=") {
                let c = cat
                    .parse::<Category>()
                    .map_err(|_| FilterParseError(format!("unknown category {cat:?}")))?;
                spec.edges_disabled.insert(c);
            } else if let Some((a, b)) = token.split_once("..") {
                let bound = |s: &str| -> Result<Option<u64>, FilterParseError> {
                    if s.is_empty() {
                        return Ok(None);
                    }
                    s.parse()
                        .map(Some)
                        .map_err(|_| FilterParseError(format!("bad time bound {s:?}")))
                };
                spec.from_ms = bound(a)?;
                spec.to_ms = bound(b)?;
                if let (Some(a), Some(b)) = (spec.from_ms, spec.to_ms) {
                    if a > b {
                        return Err(FilterParseError(format!("empty time window {token}")));
                    }
                }
            } else if let Ok(c) = token.parse::<Category>() {
                spec.include_categories.insert(c);
            } else if let Ok(t) = token.parse::<EventType>() {
                spec.include_types.insert(t);
            } else {
                return Err(FilterParseError(format!("unknown filter token {token:?}")));
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens: Vec<String> = Vec::new();
        tokens.extend(self.include_categories.iter().map(|c| c.to_string()));
        tokens.extend(self.include_types.iter().map(|t| t.to_string()));
        if self.from_ms.is_some() || self.to_ms.is_some() {
            let b = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            tokens.push(format!("{}..{}", b(self.from_ms), b(self.to_ms)));
        }
        tokens.extend(self.files.iter().map(|g| format!("files={g}")));
        tokens.extend(self.edges_disabled.iter().map(|c| format!("noedges={c}")));
        f.write_str(&tokens.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{EventContext, Payload};

    #[test]
    fn parse_and_print_round_trip() {
        let text = "Navigation,LaunchEvent,100..2000,files=src/*.java,noedges=Edit";
        let spec = FilterSpec::parse(text).unwrap();
        assert!(spec.include_categories.contains(&Category::Navigation));
        assert!(spec.include_types.contains(&EventType::LaunchEvent));
        assert_eq!((spec.from_ms, spec.to_ms), (Some(100), Some(2000)));
        assert_eq!(FilterSpec::parse(&spec.to_string()).unwrap(), spec);
        assert_eq!(FilterSpec::parse("").unwrap(), FilterSpec::everything());
        assert_eq!(FilterSpec::parse("5..").unwrap().from_ms, Some(5));
    }

    #[test]
    fn parse_errors() {
        for bad in ["Bogus", "noedges=Nope", "x..y", "9..3", "files=[", "Navigation,,nope"] {
            assert!(FilterSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matching() {
        let launch = Event::new(
            1,
            50,
            Payload::Launch {
                mode: crate::event::LaunchMode::Run,
                target: "Main".into(),
            },
            EventContext::default(),
        );
        let save = Event::new(2, 60, Payload::Save { file: "src/A.java".into() }, EventContext::default());
        let nav = FilterSpec::categories([Category::Navigation]);
        assert!(!nav.matches(&launch));
        assert!(FilterSpec::everything().matches(&launch));
        let files = FilterSpec::parse("files=src/*").unwrap();
        assert!(files.matches(&save));
        assert!(!files.matches(&launch));
        let window = FilterSpec::parse("55..100").unwrap();
        assert!(!window.matches(&launch));
        assert!(window.matches(&save));
    }
}
