//! Child-process oracle speaking line-delimited JSON.
//!
//! Request, one per line on the child's stdin:
//! `{"id":"img1","class":"Bedroom","objects":["bed","wall"]}`
//!
//! Response, one per line on its stdout, in request order:
//! `{"score":0.95}` or `{"error":"..."}`.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{Oracle, OracleError, ScoreQuery};
use crate::concept::{ClassLabels, Vocabulary};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Serialize)]
struct Request<'a> {
    id: &'a str,
    class: &'a str,
    objects: Vec<&'a str>,
}

#[derive(Deserialize)]
struct Response {
    score: Option<f64>,
    error: Option<String>,
}

struct Channel {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    /// Set once the stream can no longer be trusted to be in step.
    broken: Option<String>,
}

/// Scores by round-tripping through an adapter process. All requests go
/// through one lock, so concurrent callers are serialized.
pub struct ExternalOracle {
    channel: Mutex<Channel>,
    vocabulary: Vocabulary,
    classes: ClassLabels,
    timeout: Duration,
}

impl ExternalOracle {
    /// Spawns `program args...`. Names for concepts and classes come from
    /// the given tables.
    pub fn spawn(
        program: &str,
        args: &[String],
        vocabulary: Vocabulary,
        classes: ClassLabels,
        timeout: Duration,
    ) -> Result<Self, OracleError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalOracle {
            channel: Mutex::new(Channel { child, stdin, lines: rx, broken: None }),
            vocabulary,
            classes,
            timeout,
        })
    }

    fn request_line(&self, q: &ScoreQuery) -> Result<String, OracleError> {
        if q.class_id.index() >= self.classes.len() {
            return Err(OracleError::UnknownClass(q.class_id.0));
        }
        if let Some(bad) = q.subset.iter().find(|c| !self.vocabulary.contains(*c)) {
            return Err(OracleError::UnknownConcept(bad.0));
        }
        let req = Request {
            id: &q.instance_id,
            class: self.classes.name(q.class_id),
            objects: q.subset.iter().map(|c| self.vocabulary.name(c)).collect(),
        };
        let mut line = serde_json::to_string(&req).map_err(|e| OracleError::Protocol(e.to_string()))?;
        line.push('\n');
        Ok(line)
    }

    fn round_trip(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        if queries.is_empty() {
            return Ok(Vec::new());
        }
        let payload = queries.iter().map(|q| self.request_line(q)).collect::<Result<String, _>>()?;
        let mut ch = self.channel.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(reason) = &ch.broken {
            return Err(OracleError::Protocol(format!("oracle unusable after earlier failure: {reason}")));
        }
        let result = exchange(&mut ch, payload.as_bytes(), queries.len(), self.timeout);
        if let Err(e) = &result {
            // adapter-reported errors keep the stream in step; nothing else does
            if !matches!(e, OracleError::Adapter(_)) {
                ch.broken = Some(e.to_string());
                let _ = ch.child.kill();
            }
        }
        result
    }
}

fn exchange(ch: &mut Channel, payload: &[u8], expected: usize, timeout: Duration) -> Result<Vec<f64>, OracleError> {
    ch.stdin.write_all(payload).and_then(|_| ch.stdin.flush()).map_err(|e| match e.kind() {
        std::io::ErrorKind::BrokenPipe => OracleError::ProcessExited,
        _ => OracleError::Io(e),
    })?;
    let mut scores = Vec::with_capacity(expected);
    let mut first_error = None;
    for _ in 0..expected {
        let line = match ch.lines.recv_timeout(timeout) {
            Ok(line) => line?,
            Err(RecvTimeoutError::Timeout) => return Err(OracleError::Timeout(timeout)),
            Err(RecvTimeoutError::Disconnected) => return Err(OracleError::ProcessExited),
        };
        // keep reading after an adapter error so the stream stays aligned
        match parse_response(&line)? {
            Ok(score) => scores.push(score),
            Err(msg) => {
                first_error.get_or_insert(msg);
            }
        }
    }
    match first_error {
        Some(msg) => Err(OracleError::Adapter(msg)),
        None => Ok(scores),
    }
}

fn parse_response(line: &str) -> Result<Result<f64, String>, OracleError> {
    let resp: Response = serde_json::from_str(line)
        .map_err(|e| OracleError::Protocol(format!("malformed response `{}`: {e}", line.trim())))?;
    match (resp.score, resp.error) {
        (_, Some(msg)) => Ok(Err(msg)),
        (Some(s), None) if s.is_finite() => Ok(Ok(s)),
        (Some(s), None) => Err(OracleError::Protocol(format!("non-finite score {s}"))),
        (None, None) => Err(OracleError::Protocol(format!("response without \"score\": `{}`", line.trim()))),
    }
}

impl Oracle for ExternalOracle {
    fn score(&self, query: &ScoreQuery) -> Result<f64, OracleError> {
        self.round_trip(std::slice::from_ref(query)).map(|v| v[0])
    }

    /// One write of all requests, then the matching responses.
    fn score_batch(&self, queries: &[ScoreQuery]) -> Result<Vec<f64>, OracleError> {
        self.round_trip(queries)
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        let ch = self.channel.get_mut().unwrap_or_else(|p| p.into_inner());
        let _ = ch.child.kill();
        let _ = ch.child.wait();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_encoding_is_exact() {
        let req = Request { id: "img1", class: "Bedroom", objects: vec!["bed", "wall"] };
        assert_eq!(serde_json::to_string(&req).unwrap(), r#"{"id":"img1","class":"Bedroom","objects":["bed","wall"]}"#);
    }

    #[test]
    fn response_parsing() {
        assert_eq!(parse_response(r#"{"score":0.95}"#).unwrap(), Ok(0.95));
        assert_eq!(parse_response(r#"{"error":"bad image"}"#).unwrap(), Err("bad image".to_string()));
        assert!(matches!(parse_response(r#"{"value":1}"#), Err(OracleError::Protocol(_))));
        assert!(matches!(parse_response("nonsense"), Err(OracleError::Protocol(_))));
    }
}
