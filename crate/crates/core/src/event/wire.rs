use std::fmt::Write as _;

use serde_json::{Map, Value};

use super::{Event, EventContext, EventError, EventType, LineRange, Payload};

/// Compact JSON with object keys sorted byte-wise at every depth.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(v, out);
            }
            out.push(']');
        }
        scalar => {
            let _ = write!(out, "{scalar}");
        }
    }
}

fn context_to_value(ctx: &EventContext) -> Value {
    let mut m = Map::new();
    if let Some(file) = &ctx.file {
        m.insert("file".into(), file.as_str().into());
    }
    if let Some(r) = ctx.visible_range {
        m.insert("visible_range".into(), Value::Array(vec![r.first.into(), r.last.into()]));
    }
    if !ctx.visible_tabs.is_empty() {
        m.insert(
            "visible_tabs".into(),
            Value::Array(ctx.visible_tabs.iter().map(|t| Value::from(t.as_str())).collect()),
        );
    }
    if let Some(w) = &ctx.focused_window {
        m.insert("focused_window".into(), w.as_str().into());
    }
    Value::Object(m)
}

/// Event as a JSON object (the structure written by [`serialize_event`]).
pub fn event_to_value(event: &Event) -> Value {
    let mut payload = event.payload.to_fields();
    for (k, v) in &event.extra {
        payload.insert(k.clone(), v.clone());
    }
    let mut m = Map::new();
    m.insert("id".into(), event.id.into());
    m.insert("timestamp_ms".into(), event.timestamp_ms.into());
    m.insert("type".into(), event.event_type().as_str().into());
    m.insert("payload".into(), Value::Object(payload));
    m.insert("context".into(), context_to_value(&event.context));
    Value::Object(m)
}

/// Single canonical NDJSON line (no trailing newline).
pub fn serialize_event(event: &Event) -> String {
    canonical_json(&event_to_value(event))
}

fn malformed(msg: impl Into<String>) -> EventError {
    EventError::MalformedRecord(msg.into())
}

fn parse_context(value: Option<Value>) -> Result<EventContext, EventError> {
    let map = match value {
        None => return Ok(EventContext::default()),
        Some(Value::Object(m)) => m,
        Some(other) => return Err(EventError::SchemaViolation(format!("context must be an object, got {other}"))),
    };
    let mut ctx = EventContext::default();
    for (k, v) in map {
        match (k.as_str(), v) {
            ("file", Value::String(s)) => ctx.file = Some(s),
            ("focused_window", Value::String(s)) => ctx.focused_window = Some(s),
            ("visible_range", Value::Array(items)) => {
                let nums: Option<Vec<u32>> = items
                    .iter()
                    .map(|v| v.as_u64().and_then(|n| u32::try_from(n).ok()))
                    .collect();
                match nums.as_deref() {
                    Some([first, last]) => ctx.visible_range = Some(LineRange::new(*first, *last)),
                    _ => {
                        return Err(EventError::SchemaViolation(
                            "context.visible_range must be a pair of non-negative integers".into(),
                        ))
                    }
                }
            }
            ("visible_tabs", Value::Array(items)) => {
                ctx.visible_tabs = items
                    .into_iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s),
                        other => Err(EventError::SchemaViolation(format!(
                            "context.visible_tabs entries must be strings, got {other}"
                        ))),
                    })
                    .collect::<Result<_, _>>()?;
            }
            (key, v) => {
                return Err(EventError::SchemaViolation(format!(
                    "unexpected context field {key:?} = {v}"
                )))
            }
        }
    }
    ctx.validate().map_err(EventError::ContextViolation)?;
    Ok(ctx)
}

/// Parse and validate one NDJSON event record.
pub fn parse_event(line: &str) -> Result<Event, EventError> {
    let value: Value = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(malformed("record is not a JSON object"));
    };

    let type_name = match map.remove("type") {
        Some(Value::String(s)) => s,
        Some(other) => return Err(EventError::SchemaViolation(format!("type must be a string, got {other}"))),
        None => return Err(EventError::SchemaViolation("missing field \"type\"".into())),
    };
    let event_type: EventType = type_name
        .parse()
        .map_err(|_| EventError::UnknownEventType(type_name.clone()))?;

    let mut uint = |key: &str| -> Result<u64, EventError> {
        match map.remove(key) {
            Some(v) => v.as_u64().ok_or_else(|| {
                EventError::SchemaViolation(format!("{key} must be a non-negative integer, got {v}"))
            }),
            None => Err(EventError::SchemaViolation(format!("missing field {key:?}"))),
        }
    };
    let id = uint("id")?;
    let timestamp_ms = uint("timestamp_ms")?;

    let fields = match map.remove("payload") {
        Some(Value::Object(m)) => m,
        Some(other) => return Err(EventError::SchemaViolation(format!("payload must be an object, got {other}"))),
        None => return Err(EventError::SchemaViolation("missing field \"payload\"".into())),
    };
    let context = parse_context(map.remove("context"))?;
    if let Some(key) = map.keys().next() {
        return Err(EventError::SchemaViolation(format!("unexpected top-level field {key:?}")));
    }

    let (payload, extra): (Payload, _) = Payload::from_fields(event_type, fields)?;
    Ok(Event {
        id,
        timestamp_ms,
        payload,
        extra,
        context,
    })
}
