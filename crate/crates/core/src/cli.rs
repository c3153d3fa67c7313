//! Command-line front end. `run` maps errors to exit codes: 0 success,
//! 1 domain or usage error, 2 failed verification.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::actions::{parse_action, ActionSpec, State};
use crate::coefficients::{genbin_table, CoeffTable, Coefficients, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::markov::{self, generator, Direction, Generator};
use crate::oracles::{self, check_identity};
use crate::rational;
use crate::simulate::{self, RawTrajectory, Sampler, Summary, Trajectory};

/// Environment variable overriding the default state cap.
pub const CAP_ENV: &str = "MFCHAINS_CAP_STATES";

#[derive(Parser, Debug)]
#[command(name = "mfchains", version, about = "Birth and death chains on Young diagrams")]
struct Cli {
    /// Worker threads for simulation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest state space any command may enumerate.
    #[arg(long, global = true)]
    cap_states: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    /// Action, e.g. `un:n=3`, `sphere:n=5`, `jack:r=2,theta=1/2`.
    #[arg(long)]
    action: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of generalized binomial coefficients.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_weight: u64,
        /// Compute with the independent oracle instead of the closed forms.
        #[arg(long)]
        oracle: bool,
    },
    /// Truncated generator matrix.
    Rates {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        direction: Direction,
        #[arg(long)]
        max_weight: u64,
    },
    /// Transition probabilities, exact (`--x p/q`) or numeric (`--t`).
    Semigroup {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        direction: Direction,
        /// Starting state as a comma list; "" is the zero state.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Single target; omit for the whole row.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, conflicts_with = "t", required_unless_present = "t")]
        x: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        /// Largest target weight of a birth row.
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
    },
    /// Monte Carlo paths as JSON lines, with an optional summary.
    Simulate {
        #[arg(long)]
        action: String,
        #[arg(long)]
        direction: Direction,
        #[arg(long, default_value = "")]
        start: String,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time of the reported marginal (default: the horizon).
        #[arg(long)]
        at: Option<f64>,
        /// Compare the marginal with the exact row.
        #[arg(long)]
        report_tv: bool,
        /// Exit with status 2 if the distance exceeds this.
        #[arg(long, requires = "report_tv")]
        max_tv: Option<f64>,
        /// Trajectory file (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Summary file (default: standard error).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run an identity suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        action: String,
        #[arg(long)]
        max_weight: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// ASCII Young-diagram frames from a trajectory file.
    Diagram {
        #[arg(long)]
        input: PathBuf,
        /// Which line of the file to render.
        #[arg(long, default_value_t = 0)]
        path: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Read back a file written by another subcommand and summarize it.
    Inspect {
        #[arg(long, value_enum)]
        kind: ArtifactKind,
        #[arg(long)]
        input: PathBuf,
        /// Needed for coefficient tables and trajectories.
        #[arg(long)]
        action: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ArtifactKind {
    Coeffs,
    Generator,
    Trajectories,
}

enum Outcome {
    Ok,
    VerificationFailed,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::VerificationFailed) => 2,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            1
        }
    }
}

fn state_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::OutOfRange(format!("{CAP_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    let io_err = |e: io::Error| Error::Format(e.to_string());
    match path {
        Some(p) => fs::write(p, text).map_err(io_err),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io_err)?;
            out.flush().map_err(io_err)
        }
    }
}

fn read_in(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// 17 significant digits in scientific notation.
fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let cap = state_cap(cli.cap_states)?;
    match cli.command {
        Command::Coeffs { common, max_weight, oracle } => {
            let action = parse_action(&common.action)?;
            let table = if oracle {
                oracles::gram_schmidt_genbin(&action, max_weight, cap)?
            } else {
                genbin_table(&action, max_weight, cap)?
            };
            let text = match common.format {
                Format::Json => table.to_json() + "\n",
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.write_csv(&mut buf)?;
                    String::from_utf8(buf).expect("utf-8")
                }
                Format::Text => table
                    .iter()
                    .map(|(l, m, v)| format!("[{l}; {m}] = {}\n", rational::to_pq(v)))
                    .collect(),
            };
            write_out(&common.output, &text)?;
        }
        Command::Rates { common, direction, max_weight } => {
            let action = parse_action(&common.action)?;
            let g = generator(&Coefficients::new(&action), direction, max_weight, cap)?;
            let text = match common.format {
                Format::Json => g.to_json() + "\n",
                Format::Csv => {
                    let mut buf = Vec::new();
                    g.write_csv(&mut buf)?;
                    String::from_utf8(buf).expect("utf-8")
                }
                Format::Text => generator_text(&g),
            };
            write_out(&common.output, &text)?;
        }
        Command::Semigroup { common, direction, from, to, x, t, max_weight } => {
            let action = parse_action(&common.action)?;
            let coeffs = Coefficients::new(&action);
            let alpha = action.parse_state(&from)?;
            let targets: Vec<State> = match &to {
                Some(b) => vec![action.parse_state(b)?],
                None => {
                    let (lo, hi) = match direction {
                        Direction::Birth => (alpha.weight(), max_weight),
                        Direction::Death => (0, alpha.weight()),
                    };
                    let states: Vec<State> = (lo..=hi).flat_map(|w| action.states_of_weight(w)).collect();
                    if states.len() > cap {
                        return Err(Error::ResourceCap { count: states.len(), cap });
                    }
                    states
                }
            };
            let rows: Vec<(State, String)> = match (&x, t) {
                (Some(x), _) => {
                    let x = rational::parse_pq(x)?;
                    semigroup_rows(&targets, |b| {
                        markov::transition_prob(&coeffs, direction, &alpha, b, &x).map(|p| rational::to_pq(&p))
                    })?
                }
                (None, Some(t)) => semigroup_rows(&targets, |b| {
                    markov::transition_prob_t(&coeffs, direction, &alpha, b, t).map(float17)
                })?,
                (None, None) => unreachable!("clap requires one of --x and --t"),
            };
            let rows: Vec<_> = rows.into_iter().filter(|(_, p)| to.is_some() || !is_zero_text(p)).collect();
            let text = match common.format {
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(b, p)| serde_json::json!({"from": alpha, "to": b, "p": p}))
                        .collect();
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
                Format::Csv => {
                    let mut s = String::from("from;to;p\n");
                    for (b, p) in &rows {
                        s.push_str(&format!("{};{};{p}\n", alpha.to_key(), b.to_key()));
                    }
                    s
                }
                Format::Text => rows.iter().map(|(b, p)| format!("{alpha} -> {b}: {p}\n")).collect(),
            };
            write_out(&common.output, &text)?;
        }
        Command::Simulate {
            action,
            direction,
            start,
            t_max,
            paths,
            seed,
            at,
            report_tv,
            max_tv,
            output,
            summary,
        } => {
            let action = parse_action(&action)?;
            let start = action.parse_state(&start)?;
            if paths == 0 {
                return Err(Error::Empty("--paths must be positive".into()));
            }
            let coeffs = Arc::new(Coefficients::new(&action));
            let sampler = Sampler::new(coeffs.clone(), direction);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::OutOfRange(e.to_string()))?;
            let trajectories = pool.install(|| sampler.sample_batch(&start, t_max, seed, paths))?;
            let mut text = String::new();
            for tr in &trajectories {
                text.push_str(&tr.to_json_line());
                text.push('\n');
            }
            write_out(&output, &text)?;

            let at = at.unwrap_or(t_max);
            let marginal = simulate::empirical_marginal(&trajectories, at)?;
            let tv = if report_tv {
                let exact = simulate::exact_row(&coeffs, direction, &start, at, 1e-12)?;
                Some(simulate::tv_distance(&marginal, &exact))
            } else {
                None
            };
            let doc = serde_json::to_string(&Summary::new(&marginal, at, tv)).expect("serializable") + "\n";
            match &summary {
                Some(_) => write_out(&summary, &doc)?,
                None => eprint!("{doc}"),
            }
            if let (Some(tv), Some(limit)) = (tv, max_tv) {
                if tv > limit {
                    eprintln!("total variation {} exceeds {}", float17(tv), float17(limit));
                    return Ok(Outcome::VerificationFailed);
                }
            }
        }
        Command::Verify { suite, action, max_weight, format, output } => {
            let action = parse_action(&action)?;
            action.states_up_to(max_weight, cap)?;
            let report = check_identity(&suite, &action, max_weight)?;
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => {
                    let mut s = String::from("key;pass;lhs;rhs\n");
                    for i in &report.instances {
                        s.push_str(&format!("{};{};{};{}\n", i.key, i.pass, i.lhs, i.rhs));
                    }
                    s
                }
                Format::Text => report.to_text(),
            };
            write_out(&output, &text)?;
            if !report.pass {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Diagram { input, path, output } => {
            let text = read_in(&input)?;
            let line = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .nth(path)
                .ok_or_else(|| Error::Empty(format!("no trajectory at index {path}")))?;
            write_out(&output, &render_frames(&RawTrajectory::from_json_line(line)?))?;
        }
        Command::Inspect { kind, input, action } => {
            let text = read_in(&input)?;
            let need_action = || -> Result<ActionSpec> {
                parse_action(action.as_deref().ok_or_else(|| Error::ActionSyntax("--action is required".into()))?)
            };
            let msg = match kind {
                ArtifactKind::Coeffs => {
                    let t = CoeffTable::from_json(&need_action()?, &text)?;
                    format!("coefficient table for {}: {} entries over {} states\n", t.action, t.len(), t.states.len())
                }
                ArtifactKind::Generator => {
                    let g = Generator::from_json(&text)?;
                    format!(
                        "{} generator for {} up to weight {}: {} states\n",
                        g.direction,
                        g.action,
                        g.max_weight,
                        g.len()
                    )
                }
                ArtifactKind::Trajectories => {
                    let a = need_action()?;
                    let mut count = 0;
                    let mut events = 0;
                    for line in text.lines().filter(|l| !l.trim().is_empty()) {
                        let tr = Trajectory::from_json_line(&a, line)?;
                        count += 1;
                        events += tr.events.len();
                    }
                    format!("{count} trajectories for {a}, {events} events\n")
                }
            };
            write_out(&None, &msg)?;
        }
    }
    Ok(Outcome::Ok)
}

fn is_zero_text(p: &str) -> bool {
    p == "0/1" || p.parse::<f64>().is_ok_and(|v| v == 0.0)
}

fn semigroup_rows(targets: &[State], f: impl Fn(&State) -> Result<String>) -> Result<Vec<(State, String)>> {
    targets.iter().map(|b| Ok((b.clone(), f(b)?))).collect()
}

fn generator_text(g: &Generator) -> String {
    let mut s = String::new();
    for (i, row) in g.rows.iter().enumerate() {
        s.push_str(&format!("{} diag {}", g.states[i], rational::to_pq(&row.diagonal)));
        for (j, v) in &row.off {
            s.push_str(&format!("  -> {} {}", g.states[*j], rational::to_pq(v)));
        }
        if !row.conservative {
            s.push_str("  (boundary)");
        }
        s.push('\n');
    }
    s
}

/// One block per state along the path: a header line, then a `|` followed
/// by one `#` per box for each row (torus coordinates keep their empty rows).
pub fn render_frames(tr: &RawTrajectory) -> String {
    let frame = |t: f64, parts: &[u64]| -> String {
        let mut s = format!("t = {}  {:?}\n", float17(t), parts);
        for &p in parts {
            s.push('|');
            s.push_str(&"#".repeat(p as usize));
            s.push('\n');
        }
        if parts.is_empty() {
            s.push_str("|\n");
        }
        s
    };
    let mut out = frame(0.0, &tr.start);
    for e in &tr.events {
        out.push('\n');
        out.push_str(&frame(e.t, &e.state));
    }
    out
}
