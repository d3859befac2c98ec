use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Evaluation, Evaluator, Status};
use crate::error::{Error, Result};
use crate::space::{canonical_key, ConfigSpace, DecodedConfig};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

/// One request line: the active variables of a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    pub config: serde_json::Map<String, serde_json::Value>,
    pub targets: u64,
}

/// One response line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub id: u64,
    #[serde(default)]
    pub f1: Option<f64>,
    #[serde(default)]
    pub f2: Option<f64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msg: Option<String>,
}

impl Response {
    pub fn ok(id: u64, f1: f64, f2: f64) -> Self {
        Self {
            id,
            f1: Some(f1),
            f2: Some(f2),
            status: Status::Ok,
            msg: None,
        }
    }

    pub fn error(id: u64, msg: impl Into<String>) -> Self {
        Self {
            id,
            f1: None,
            f2: None,
            status: Status::Error,
            msg: Some(msg.into()),
        }
    }
}

/// Worker-side loop: answers each request line with one response line until
/// the input closes. Unparseable lines are answered with id 0 and an error.
pub fn serve<R: BufRead, W: Write>(
    input: R,
    mut output: W,
    mut handler: impl FnMut(&Request) -> Response,
) -> Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<Request>(&line) {
            Ok(req) => handler(&req),
            Err(e) => Response::error(0, format!("malformed request: {e}")),
        };
        serde_json::to_writer(&mut output, &response)?;
        output.write_all(b"\n")?;
        output.flush()?;
    }
    Ok(())
}

struct Worker {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Worker {
    fn spawn(command: &[String]) -> Result<Self> {
        let (program, args) = command
            .split_first()
            .ok_or_else(|| Error::Protocol("empty worker command".into()))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Self { child, stdin, lines })
    }

    fn round_trip(&mut self, request: &Request, timeout: Duration) -> Result<Response> {
        let mut line = serde_json::to_string(request)?;
        line.push('\n');
        self.stdin.write_all(line.as_bytes())?;
        self.stdin.flush()?;
        let reply = match self.lines.recv_timeout(timeout) {
            Ok(reply) => reply?,
            Err(RecvTimeoutError::Timeout) => return Err(Error::Protocol(format!("no response within {timeout:?}"))),
            Err(RecvTimeoutError::Disconnected) => return Err(Error::Protocol("worker closed its output".into())),
        };
        let response: Response =
            serde_json::from_str(&reply).map_err(|e| Error::Protocol(format!("malformed response: {e}")))?;
        if response.id != request.id {
            return Err(Error::Protocol(format!(
                "response id {} does not match request id {}",
                response.id, request.id
            )));
        }
        Ok(response)
    }
}

impl Drop for Worker {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Evaluator backed by external worker processes speaking line-delimited
/// JSON on their standard streams. Each worker handles one request at a
/// time; a worker that times out or breaks the protocol is restarted.
pub struct ExternalEvaluator {
    space: ConfigSpace,
    command: Vec<String>,
    targets: u64,
    timeout: Duration,
    workers: Vec<Mutex<Option<Worker>>>,
    next_id: AtomicU64,
}

impl ExternalEvaluator {
    pub fn new(
        space: ConfigSpace,
        command: Vec<String>,
        targets: u64,
        workers: usize,
        timeout: Duration,
    ) -> Result<Self> {
        if command.is_empty() {
            return Err(Error::Protocol("empty worker command".into()));
        }
        let workers = (0..workers.max(1))
            .map(|_| Worker::spawn(&command).map(|w| Mutex::new(Some(w))))
            .collect::<Result<_>>()?;
        Ok(Self {
            space,
            command,
            targets,
            timeout,
            workers,
            next_id: AtomicU64::new(1),
        })
    }

    fn evaluate_on(&self, slot: &Mutex<Option<Worker>>, d: &DecodedConfig) -> Evaluation {
        let start = Instant::now();
        let key = canonical_key(d);
        let request = Request {
            id: self.next_id.fetch_add(1, Ordering::Relaxed),
            config: d.to_json_map(),
            targets: self.targets,
        };
        let mut guard = slot.lock().unwrap_or_else(|p| p.into_inner());
        let result = match guard.as_mut() {
            Some(w) => w.round_trip(&request, self.timeout),
            None => Worker::spawn(&self.command).and_then(|w| guard.insert(w).round_trip(&request, self.timeout)),
        };
        match result {
            Ok(resp) => match (resp.status, resp.f1, resp.f2) {
                (Status::Ok, Some(f1), Some(f2)) => Evaluation::ok(key, f1, f2, start.elapsed()),
                (Status::Ok, _, _) => Evaluation::error(key, "ok response without objectives", start.elapsed()),
                (Status::Error, _, _) => Evaluation::error(
                    key,
                    resp.msg.unwrap_or_else(|| "worker reported an error".into()),
                    start.elapsed(),
                ),
            },
            Err(e) => {
                // the worker's stream position is unknown; start a fresh one next time
                *guard = None;
                Evaluation::error(key, e.to_string(), start.elapsed())
            }
        }
    }
}

impl Evaluator for ExternalEvaluator {
    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn evaluate(&self, d: &DecodedConfig) -> Evaluation {
        self.evaluate_on(&self.workers[0], d)
    }

    fn evaluate_batch(&self, batch: &[DecodedConfig]) -> Vec<Evaluation> {
        let w = self.workers.len();
        if w == 1 {
            return batch.iter().map(|d| self.evaluate(d)).collect();
        }
        let mut results: Vec<Option<Evaluation>> = vec![None; batch.len()];
        thread::scope(|s| {
            let handles: Vec<_> = (0..w)
                .map(|k| {
                    let slot = &self.workers[k];
                    s.spawn(move || {
                        (k..batch.len())
                            .step_by(w)
                            .map(|i| (i, self.evaluate_on(slot, &batch[i])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, e) in h.join().expect("evaluation thread panicked") {
                    results[i] = Some(e);
                }
            }
        });
        results.into_iter().map(|e| e.expect("every slot evaluated")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serve_answers_each_line() {
        let input = b"{\"id\":7,\"config\":{\"a\":1},\"targets\":5}\n\nnot json\n";
        let mut out = Vec::new();
        serve(&input[..], &mut out, |req| Response::ok(req.id, 0.31, 61397.0)).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"id":7,"f1":0.31,"f2":61397.0,"status":"ok"}"#);
        let err: Response = serde_json::from_str(lines[1]).unwrap();
        assert_eq!((err.id, err.status), (0, Status::Error));
    }

    #[test]
    fn error_response_omits_objectives() {
        let r: Response = serde_json::from_str(r#"{"id":3,"status":"error","msg":"oom"}"#).unwrap();
        assert_eq!(r, Response::error(3, "oom"));
    }
}
