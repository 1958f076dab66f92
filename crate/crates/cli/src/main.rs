//! `hamburn`: command-line front end for the burning-number toolkit.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hamburn_core::adversary::{lower_bound_witnessed, trial_rng};
use hamburn_core::experiments::{bs_existence, open_problem_search, SearchMode};
use hamburn_core::hamming::{find_burning_sequence, vertex_count, DEFAULT_VERTEX_CAP};
use hamburn_core::selfcheck::{self, Faults};
use hamburn_core::{
    burning_number, burns, evade, lower_bound, uncovered, upper_bound, BurnSequence, Error,
    SearchLimits, Vertex,
};
use rand::Rng;
use serde_json::{json, Map, Value};

mod output;

use output::{render, Format};

#[derive(Parser, Debug)]
#[command(
    name = "hamburn",
    version,
    about = "Burning numbers of Hamming graphs H(n, q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads for brute-force searches (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Maximum number of vertices an exhaustive routine may enumerate.
    #[arg(long, env = "HAMBURN_CAP", default_value_t = DEFAULT_VERTEX_CAP, global = true)]
    cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form lower and upper bounds, plus the exact value when the
    /// graph is small enough to search.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// Skip graphs with more vertices than this when searching for the
        /// exact value.
        #[arg(long, default_value_t = 1024)]
        exact_limit: u64,
    },
    /// Exact burning number by exhaustive search, with a witness sequence.
    BurnNumber {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// Longest sequence length tried (default n + 1).
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Check whether a sequence of 1-based vertices read from --input burns
    /// H(n, q).
    VerifySequence {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Build an evader for the vertices in --input (a JSON array of 1-based
    /// vertices, at most ⌊(1-1/q)n⌋ of them). Without --input, run --trials
    /// random sequences instead.
    Evade {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-color existence oracle on random ±1 instances.
    BsCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search the q = 3, n = 3k + 1 shifted-distance problem for instances
    /// without a valid w. Symbols are 0-based {0,1,2} internally; vertices
    /// in the report are 1-based like everywhere else (symbol s means s-1).
    Openproblem {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "randomized")]
        mode: String,
        /// Instances to check (randomized default 10000; exhaustive default:
        /// the full symmetry-reduced sweep).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every invariant suite.
    Selfcheck {
        /// Fault injection for testing the suites themselves.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// Exit statuses.
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;

struct Outcome {
    report: Value,
    ok: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Invariant(_) | Error::DegenerateDirection => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(outcome) => {
            let text = render(&outcome.report, cli.format);
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            } else {
                print!("{text}");
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_vertices(path: &PathBuf, q: usize) -> Result<Vec<Vertex>, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("reading {}: {e}", path.display())))?;
    let raw: Vec<Vec<usize>> = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("malformed vertex list: {e}")))?;
    raw.into_iter().map(|s| Vertex::new(s, q)).collect()
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let cap = cli.cap;
    match &cli.command {
        Command::Bounds { n, q, exact_limit } => {
            let (n, q) = (*n, *q);
            let mut report = Map::new();
            report.insert("n".into(), json!(n));
            report.insert("q".into(), json!(q));
            report.insert("upper".into(), json!(upper_bound(n, q)?));
            report.insert(
                "lower".into(),
                if q >= 3 {
                    json!(lower_bound(n, q)?)
                } else {
                    Value::Null
                },
            );
            let size = vertex_count(n, q);
            let exact = if size > cap as u128 {
                report.insert("exact_skipped".into(), json!("capacity"));
                None
            } else if size > *exact_limit as u128 {
                report.insert("exact_skipped".into(), json!("exact-limit"));
                None
            } else {
                burning_number(
                    n,
                    q,
                    SearchLimits {
                        max_len: None,
                        vertex_cap: cap,
                    },
                )?
            };
            if let Some(b) = exact {
                report.insert("exact".into(), json!(b.value));
                report.insert("witness".into(), to_value(&b.witness));
            }
            Ok(Outcome {
                report: Value::Object(report),
                ok: true,
            })
        }
        Command::BurnNumber { n, q, max_len } => {
            let limits = SearchLimits {
                max_len: *max_len,
                vertex_cap: cap,
            };
            let report = match burning_number(*n, *q, limits)? {
                Some(b) => {
                    let below = find_burning_sequence(*n, *q, b.value - 1, cap)?;
                    json!({
                        "n": n,
                        "q": q,
                        "value": b.value,
                        "witness": to_value(&b.witness),
                        "witness_burns": burns(&b.witness, cap)?,
                        "shorter_exists": below.is_some(),
                    })
                }
                None => json!({ "n": n, "q": q, "value": Value::Null, "max_len": max_len }),
            };
            Ok(Outcome { report, ok: true })
        }
        Command::VerifySequence { q, input } => {
            let seq = BurnSequence::new(read_vertices(input, *q)?)?;
            let missing = uncovered(&seq, cap)?;
            Ok(Outcome {
                report: json!({
                    "n": seq.n(),
                    "q": seq.q(),
                    "length": seq.len(),
                    "burns": missing.is_none(),
                    "uncovered": missing.map(|v| to_value(&v)),
                }),
                ok: true,
            })
        }
        Command::Evade {
            n,
            q,
            input,
            trials,
            seed,
        } => match input {
            Some(path) => {
                let vs = read_vertices(path, *q)?;
                let cert = evade(&vs, *n, *q)?;
                let ok = cert.holds() && cert.escapes()?;
                let mut report = to_value(&cert);
                if let Value::Object(m) = &mut report {
                    m.insert("advances".into(), json!(cert.trace.len()));
                    m.insert("slack".into(), json!(cert.slack()));
                    m.insert("holds".into(), json!(ok));
                }
                Ok(Outcome { report, ok })
            }
            None => {
                let r = lower_bound_witnessed(*n, *q, *trials, *seed)?;
                let ok = r.failures == 0;
                Ok(Outcome {
                    report: to_value(&r),
                    ok,
                })
            }
        },
        Command::BsCheck { n, trials, seed } => {
            let mut found = 0;
            let mut missing = Vec::new();
            for t in 0..*trials {
                let mut rng = trial_rng(*seed, t as u64);
                let a: Vec<Vec<i8>> = (0..*n)
                    .map(|_| {
                        (0..*n)
                            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                            .collect()
                    })
                    .collect();
                match bs_existence(&a)? {
                    Some(_) => found += 1,
                    None => missing.push(t),
                }
            }
            let ok = missing.is_empty();
            Ok(Outcome {
                report: json!({
                    "n": n,
                    "trials": trials,
                    "seed": seed,
                    "witnesses_found": found,
                    "instances_without_witness": missing,
                }),
                ok,
            })
        }
        Command::Openproblem {
            k,
            mode,
            budget,
            seed,
        } => {
            let mode: SearchMode = mode.parse()?;
            let r = open_problem_search(*k, mode, *budget, *seed, cap)?;
            // Finding counterexamples is a result, not a failure.
            Ok(Outcome {
                report: to_value(&r),
                ok: true,
            })
        }
        Command::Selfcheck { inject_fault } => {
            let faults = match inject_fault.as_deref() {
                None => Faults::default(),
                Some("color-vector") => Faults {
                    corrupt_color_vector: true,
                },
                Some(other) => {
                    return Err(Error::InvalidArgument(format!("unknown fault {other:?}")))
                }
            };
            let suites = selfcheck::run_all(faults)?;
            let ok = suites.iter().all(|s| s.passed);
            Ok(Outcome {
                report: json!({ "passed": ok, "suites": to_value(&suites) }),
                ok,
            })
        }
    }
}
