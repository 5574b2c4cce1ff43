//! Reference stdio oracle adapter.
//!
//! Scores a subset by the fraction of the instance's objects it keeps, for
//! any class. Reads instance object counts from a dataset file.
//!
//! Usage: `lgx-echo-oracle DATASET.jsonl [normal|missing-score|error|sleep|die]`
//!
//! The non-normal modes misbehave on purpose, for exercising client error
//! handling.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use lgx_core::dataset::{read_jsonl, InstanceRecord};
use serde::Deserialize;

#[derive(Deserialize)]
struct Request {
    id: String,
    objects: Vec<String>,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(path) = args.first() else {
        eprintln!("usage: lgx-echo-oracle DATASET.jsonl [normal|missing-score|error|sleep|die]");
        return ExitCode::from(1);
    };
    let mode = args.get(1).map_or("normal", String::as_str);
    let records: Vec<InstanceRecord> = match read_jsonl(Path::new(path)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("lgx-echo-oracle: {e}");
            return ExitCode::from(1);
        }
    };
    let sizes: HashMap<String, usize> = records.into_iter().map(|r| (r.id, r.objects.len())).collect();

    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let reply = match serde_json::from_str::<Request>(&line) {
            Err(e) => serde_json::json!({ "error": format!("bad request: {e}") }),
            Ok(req) => match (mode, sizes.get(&req.id)) {
                ("die", _) => return ExitCode::from(3),
                ("sleep", _) => {
                    std::thread::sleep(Duration::from_secs(30));
                    continue;
                }
                ("error", _) => serde_json::json!({ "error": "refused" }),
                ("missing-score", _) => serde_json::json!({ "value": 1.0 }),
                (_, None) => serde_json::json!({ "error": format!("unknown instance {}", req.id) }),
                (_, Some(&n)) => serde_json::json!({ "score": req.objects.len() as f64 / n as f64 }),
            },
        };
        if writeln!(out, "{reply}").and_then(|_| out.flush()).is_err() {
            break;
        }
    }
    ExitCode::SUCCESS
}
