//! Line-delimited JSON evaluation worker backed by the synthetic surrogate.
//!
//! Reads one request per line on stdin and answers on stdout. The `--mode`
//! flag injects faults for protocol testing.

use std::collections::HashMap;
use std::io::{stdin, stdout};

use clap::{Parser, ValueEnum};
use phmoea_core::eval::{serve, Request, Response, SurrogateEvaluator, SurrogateMode};
use phmoea_core::space::{builtin_space, DecodedConfig, RefinementState};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    /// Evaluate every request.
    Surrogate,
    /// Report an error for every `--every`-th request.
    Fail,
    /// Answer every `--every`-th request with a wrong id.
    WrongId,
    /// Never answer the `--every`-th request.
    Hang,
}

#[derive(Parser)]
#[command(name = "phmoea-worker", version, about = "Surrogate evaluation worker")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Mode::Surrogate)]
    mode: Mode,
    #[arg(long, default_value_t = 1)]
    every: u64,
    #[arg(long, default_value_t = 8)]
    c_in: u64,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    let mut evaluators: HashMap<u64, SurrogateEvaluator> = HashMap::new();
    let mut seen = 0u64;
    let every = cli.every.max(1);
    let handler = |req: &Request| -> Response {
        seen += 1;
        let faulty = seen.is_multiple_of(every);
        match cli.mode {
            Mode::Fail if faulty => return Response::error(req.id, "injected failure"),
            Mode::WrongId if faulty => return Response::ok(req.id + 1_000_000, 0.0, 0.0),
            Mode::Hang if faulty => loop {
                std::thread::park();
            },
            _ => {}
        }
        let ev = evaluators
            .entry(req.targets)
            .or_insert_with(|| SurrogateEvaluator::new(cli.c_in, req.targets, SurrogateMode::Smooth));
        match DecodedConfig::from_json_map(&space, &refine, &req.config).and_then(|d| ev.objectives(&d)) {
            Ok((f1, f2)) => Response::ok(req.id, f1, f2),
            Err(e) => Response::error(req.id, e.to_string()),
        }
    };
    match serve(stdin().lock(), stdout().lock(), handler) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phmoea-worker: {e}");
            std::process::ExitCode::from(3)
        }
    }
}
