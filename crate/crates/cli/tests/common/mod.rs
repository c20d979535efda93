//! A small recordings directory, an HTTP client for the API server and the
//! responses each endpoint should produce when computed directly.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use tracelens::event::event_to_value;
use tracelens::ingest::generate;
use tracelens::report::{analyze, track_view, Analysis, Config};
use tracelens::scoring::{compare, CompareInput};
use tracelens::track::FilterSpec;
use tracelens::Recording;
use tracelens_cli::api::{to_body, ApiState, EventPage, RecordingDetail, RecordingListItem};
use tracelens_cli::load_recording_file;

pub const FIXTURE: [(&str, u64); 3] = [("oscillate", 1), ("poor-mans-debugger", 2), ("investigate-edit-validate", 3)];

/// Write the fixture recordings into `dir` and return their paths.
pub fn write_fixture(dir: &Path) -> Vec<PathBuf> {
    FIXTURE
        .iter()
        .map(|(scenario, seed)| {
            let (rec, _) = generate(scenario, *seed, &BTreeMap::new()).unwrap();
            let path = dir.join(format!("{}.ndjson", rec.recording_id));
            std::fs::write(&path, rec.to_ndjson()).unwrap();
            path
        })
        .collect()
}

/// Start the API server for `dir` on an ephemeral port.
pub fn start_server(dir: &Path) -> SocketAddr {
    let state = ApiState::load_dir(dir, Config::default()).unwrap();
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(tracelens_cli::server::serve(state, "127.0.0.1:0".parse().unwrap(), move |a| {
            tx.send(a).unwrap();
        }))
        .unwrap();
    });
    rx.recv().unwrap()
}

/// `GET target` over a fresh connection; returns status and body bytes.
pub fn http_get(addr: SocketAddr, target: &str) -> (u16, String) {
    http_request(addr, "GET", target)
}

pub fn http_request(addr: SocketAddr, method: &str, target: &str) -> (u16, String) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(s, "{method} {target} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).unwrap();
    let text = String::from_utf8(raw).unwrap();
    let (head, body) = text.split_once("\r\n\r\n").unwrap();
    let status = head.split(' ').nth(1).unwrap().parse().unwrap();
    assert!(head.to_ascii_lowercase().contains("content-type: application/json"), "{head}");
    (status, body.to_string())
}

/// Every endpoint with the body computed by calling the library directly.
pub fn expected_responses(paths: &[PathBuf]) -> Vec<(String, String)> {
    let config = Config::default();
    let recs: Vec<Recording> = paths.iter().map(|p| load_recording_file(p).unwrap()).collect();
    let mut order: Vec<usize> = (0..recs.len()).collect();
    order.sort_by(|&a, &b| recs[a].recording_id.cmp(&recs[b].recording_id));
    let analyses: Vec<Analysis> = recs.iter().map(|r| analyze(r, &config).unwrap()).collect();

    let mut out = Vec::new();
    let list: Vec<RecordingListItem<'_>> = order
        .iter()
        .map(|&i| RecordingListItem {
            recording_id: &recs[i].recording_id,
            summary: &analyses[i].report.summary,
        })
        .collect();
    out.push(("/recordings".to_string(), to_body(&list)));

    for (rec, a) in recs.iter().zip(&analyses) {
        let id = &rec.recording_id;
        let report = &a.report;
        let detail = RecordingDetail {
            recording_id: id,
            event_count: rec.events.len(),
            files: &rec.files,
            index: &a.index,
            summary: &report.summary,
        };
        out.push((format!("/recordings/{id}"), to_body(&detail)));

        for (query, filter, offset, limit) in [
            ("", "", 0, 1000),
            ("?offset=5&limit=20&filter=Navigation", "Navigation", 5, 20),
            ("?categories=Edit,Execution&limit=7", "Edit,Execution", 0, 7),
        ] {
            let spec = FilterSpec::parse(filter).unwrap();
            let matching: Vec<_> = rec.events.iter().filter(|e| spec.matches(e)).collect();
            let page = EventPage {
                total: matching.len(),
                offset,
                events: matching.iter().skip(offset).take(limit).map(|e| event_to_value(e)).collect(),
            };
            out.push((format!("/recordings/{id}/events{query}"), to_body(&page)));
        }

        for (query, filter, lod) in [("", "", 0), ("?lod=3&filter=Navigation,Edit", "Navigation,Edit", 3), ("?lod=1&categories=Navigation", "Navigation", 1)] {
            let spec = FilterSpec::parse(filter).unwrap();
            let track = track_view(rec, &a.index, &spec, lod, &report.anchors()).unwrap();
            out.push((format!("/recordings/{id}/track{query}"), serde_json::to_string(&track).unwrap()));
        }
        out.push((format!("/recordings/{id}/phases"), serde_json::to_string(&report.phases).unwrap()));
        out.push((format!("/recordings/{id}/patterns"), serde_json::to_string(&report.patterns).unwrap()));
        out.push((format!("/recordings/{id}/cyclissity"), serde_json::to_string(&report.cyclissity).unwrap()));
        out.push((format!("/recordings/{id}/trajectory"), serde_json::to_string(&report.trajectory).unwrap()));
    }

    let inputs: Vec<CompareInput<'_>> = order
        .iter()
        .map(|&i| CompareInput {
            recording: &recs[i],
            summary: &analyses[i].report.summary,
            trajectory: &analyses[i].report.trajectory,
        })
        .collect();
    let ids: Vec<&str> = order.iter().map(|&i| recs[i].recording_id.as_str()).collect();
    let report = compare(&inputs, &config.track.ordering).unwrap();
    out.push((format!("/compare?ids={}", ids.join(",")), serde_json::to_string(&report).unwrap()));
    out
}

/// Endpoints whose HTTP body differs from the direct computation.
pub fn parity_failures(addr: SocketAddr, expected: &[(String, String)]) -> Vec<String> {
    let mut failures = Vec::new();
    for (target, body) in expected {
        let (status, got) = http_get(addr, target);
        if status != 200 {
            failures.push(format!("{target}: status {status}: {got}"));
        } else if got != *body {
            failures.push(format!("{target}: body differs ({} vs {} bytes)", got.len(), body.len()));
        }
    }
    failures
}
