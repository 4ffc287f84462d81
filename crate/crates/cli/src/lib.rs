//! Command-line front end for `hyperdom`: the `hgr` file format, block spec
//! files, corpus verification and command dispatch.
//!
//! [`run`] takes an argument vector and returns the exit code with captured
//! output, so the binary is a thin wrapper and tests can drive commands
//! in-process.

pub mod hgr;
pub mod specfile;
pub mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hyperdom::families::{
    make_f, make_g3, make_h3a, make_hhat3, sample_member, sample_random_hypergraph, FamilyError, MatrixProfile,
    SampleBounds,
};
use hyperdom::recognize::{recognize, BlockDecomposition, RecognizeError, Rejection};
use hyperdom::reduce::{edge_contract, peel, ReduceError};
use hyperdom::{max_matching, min_dominating, min_transversal, Hypergraph, SolveError, VertexId};
use serde::Serialize;
use thiserror::Error;

use crate::hgr::{emit_hgr, parse_hgr, HgrError};
use crate::specfile::{emit_g3_spec, parse_g3_spec, parse_hhat3_spec, SpecError};
use crate::verify::{verify_exhaustive, verify_random, VerifyError, MAX_EXHAUSTIVE_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hyperdom",
    version,
    about = "Matching, domination and transversal numbers of small hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print ν, γ and τ.
    Solve {
        file: PathBuf,
        /// Also print a maximum matching, a minimum dominating set and a minimum transversal.
        #[arg(long)]
        certificates: bool,
    },
    /// Delete edges without a degree-1 vertex until none is left; writes hgr.
    Peel {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract every 3-edge to the pair left after dropping its degree-1 vertex.
    Contract {
        file: PathBuf,
        /// Peel the input first.
        #[arg(long)]
        peel: bool,
    },
    /// Decide whether γ = 2ν.
    Recognize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Structural)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated hypergraph as hgr.
    Generate {
        #[command(subcommand)]
        what: Generate,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Cross-check recognizer, oracle, bound chain and hgr round trip on a corpus.
    Verify {
        #[arg(long, value_name = "K", conflicts_with = "random", required_unless_present = "random",
              value_parser = clap::value_parser!(u8).range(1..=MAX_EXHAUSTIVE_N as i64))]
        exhaustive_n: Option<u8>,
        #[arg(long, value_name = "COUNT", requires = "n")]
        random: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=hyperdom::hypergraph::MAX_VERTICES as i64))]
        n: Option<u8>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..))]
        rank: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: Option<u16>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// The six-vertex hypergraph F.
    F,
    /// H₃(A) from an upper-triangular profile.
    H3a {
        #[arg(long)]
        l: usize,
        /// Upper triangle, row-major, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        entries: Vec<usize>,
    },
    /// A Ĥ₃ member from a spec file with one block.
    Hhat3 {
        #[arg(long)]
        spec: PathBuf,
    },
    /// A G₃ member from a spec file.
    G3 {
        #[arg(long)]
        spec: PathBuf,
    },
    /// A seeded random G₃ member; `--spec-out` also saves its spec.
    Member {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
    /// A seeded random hypergraph with edge sizes 2..=rank and no isolated vertex.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Structural,
    Oracle,
    Both,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Hgr { path: PathBuf, source: HgrError },
    #[error("{path}: {source}")]
    Spec { path: PathBuf, source: SpecError },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Recognize(#[from] RecognizeError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    /// Name of the innermost error variant, e.g. `CountMismatch` or
    /// `IsolatedVertex`.
    pub fn name(&self) -> String {
        let debug = match self {
            CliError::Io { source, .. } => return format!("{:?}", source.kind()),
            CliError::Hgr { source, .. } => format!("{source:?}"),
            CliError::Spec { source, .. } => format!("{source:?}"),
            CliError::Family(e) => format!("{e:?}"),
            CliError::Solve(e) => format!("{e:?}"),
            CliError::Reduce(e) => format!("{e:?}"),
            CliError::Recognize(e) => format!("{e:?}"),
            CliError::Verify(e) => format!("{e:?}"),
            CliError::VerifyFailed => return "VerifyFailed".into(),
        };
        innermost_variant(&debug).to_string()
    }
}

/// Follows `Outer(Inner(..))` wrappers in a derived `Debug` rendering.
fn innermost_variant(debug: &str) -> &str {
    let end = debug
        .find(|c: char| !c.is_alphanumeric() && c != '_')
        .unwrap_or(debug.len());
    let rest = &debug[end..];
    match rest.strip_prefix('(') {
        Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => innermost_variant(inner),
        _ => &debug[..end],
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = Outcome::default();
    match execute(cli.command, &mut out) {
        Ok(()) => out.code = EXIT_OK,
        Err(e) => {
            out.code = EXIT_FAILURE;
            writeln!(out.stderr, "error[{}]: {e}", e.name()).unwrap();
        }
    }
    out
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_hgr(path: &Path) -> Result<Hypergraph, CliError> {
    parse_hgr(&read(path)?).map_err(|source| CliError::Hgr {
        path: path.to_path_buf(),
        source,
    })
}

fn spec_error(path: &Path) -> impl FnOnce(SpecError) -> CliError + '_ {
    move |source| CliError::Spec {
        path: path.to_path_buf(),
        source,
    }
}

fn set(vs: &[VertexId]) -> String {
    let items: Vec<String> = vs.iter().map(u32::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn emit_to(out: &mut Outcome, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            out.stdout.push_str(text);
            Ok(())
        }
    }
}

/// JSON shape of `recognize --json`. Solver values are present when the
/// oracle ran; `blocks` and `reason` when the structural test ran.
#[derive(Debug, Serialize)]
struct RecognizeJson {
    accepted: bool,
    blocks: Option<BlockDecomposition>,
    reason: Option<Rejection>,
    nu: Option<usize>,
    gamma: Option<usize>,
    tau: Option<usize>,
}

fn execute(command: Command, out: &mut Outcome) -> Result<(), CliError> {
    match command {
        Command::Solve { file, certificates } => {
            let h = load_hgr(&file)?;
            let nu = max_matching(&h)?;
            let gamma = min_dominating(&h)?;
            let tau = min_transversal(&h)?;
            writeln!(out.stdout, "nu={} gamma={} tau={}", nu.value, gamma.value, tau.value).unwrap();
            if certificates {
                let m = nu.matching().expect("matching certificate");
                let edges: Vec<String> = m.edges().iter().map(|&i| format!("{:?}", h.edge(i))).collect();
                writeln!(out.stdout, "matching: {}", edges.join(" ")).unwrap();
                writeln!(
                    out.stdout,
                    "dominating: {}",
                    set(gamma.vertices().expect("vertex certificate"))
                )
                .unwrap();
                writeln!(
                    out.stdout,
                    "transversal: {}",
                    set(tau.vertices().expect("vertex certificate"))
                )
                .unwrap();
            }
        }
        Command::Peel { file, output } => {
            let trace = peel(&load_hgr(&file)?)?;
            writeln!(
                out.stderr,
                "deleted {} edges in {} rounds",
                trace.deleted.len(),
                trace.rounds
            )
            .unwrap();
            emit_to(out, output.as_deref(), &emit_hgr(&trace.result))?;
        }
        Command::Contract { file, peel: first } => {
            let mut h = load_hgr(&file)?;
            if first {
                h = peel(&h)?.result;
            }
            let g = edge_contract(&h)?;
            writeln!(out.stdout, "vertices: {}", set(&g.vertices)).unwrap();
            writeln!(out.stdout, "edges: {}", g.edges.len()).unwrap();
            writeln!(out.stdout, "complete: {}", g.is_complete()).unwrap();
            for [a, b] in &g.edges {
                writeln!(out.stdout, "{a} {b}").unwrap();
            }
        }
        Command::Recognize { file, mode, json } => recognize_command(&load_hgr(&file)?, mode, json, out)?,
        Command::Generate { what, output } => {
            let text = generate(what)?;
            emit_to(out, output.as_deref(), &text)?;
        }
        Command::Verify {
            exhaustive_n,
            random,
            n,
            rank,
            seed,
            jobs,
            json,
        } => {
            let jobs = jobs.map(usize::from);
            let summary = match (exhaustive_n, random) {
                (Some(k), _) => verify_exhaustive(k as usize, jobs)?,
                (None, Some(count)) => {
                    let n = n.expect("clap requires --n with --random") as usize;
                    verify_random(count, n, rank as usize, seed, jobs)?
                }
                (None, None) => unreachable!("clap requires one mode"),
            };
            if json {
                writeln!(out.stdout, "{}", serde_json::to_string_pretty(&summary).unwrap()).unwrap();
            } else {
                writeln!(out.stdout, "{summary}").unwrap();
            }
            if !summary.passed() {
                return Err(CliError::VerifyFailed);
            }
        }
    }
    Ok(())
}

fn recognize_command(h: &Hypergraph, mode: Mode, json: bool, out: &mut Outcome) -> Result<(), CliError> {
    let report = match mode {
        Mode::Structural | Mode::Both => Some(recognize(h)?),
        Mode::Oracle => None,
    };
    let values = match mode {
        Mode::Oracle | Mode::Both => {
            if let Some(&v) = h.isolated_vertices().first() {
                return Err(RecognizeError::IsolatedVertex(v).into());
            }
            Some((
                max_matching(h)?.value,
                min_dominating(h)?.value,
                min_transversal(h)?.value,
            ))
        }
        Mode::Structural => None,
    };
    let oracle = values.map(|(nu, gamma, _)| h.rank().ok() == Some(3) && gamma == 2 * nu);
    let accepted = match (&report, oracle) {
        (Some(r), Some(o)) if r.accepted != o => {
            return Err(RecognizeError::Disagreement {
                structural: r.accepted,
                oracle: o,
                instance: h.clone(),
            }
            .into())
        }
        (Some(r), _) => r.accepted,
        (None, Some(o)) => o,
        (None, None) => unreachable!("every mode runs at least one test"),
    };
    let (witness, reason) = report.map_or((None, None), |r| (r.witness, r.reason));
    if json {
        let doc = RecognizeJson {
            accepted,
            blocks: witness,
            reason,
            nu: values.map(|v| v.0),
            gamma: values.map(|v| v.1),
            tau: values.map(|v| v.2),
        };
        writeln!(out.stdout, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        return Ok(());
    }
    if accepted {
        writeln!(out.stdout, "accepted").unwrap();
    } else {
        writeln!(out.stdout, "rejected").unwrap();
    }
    if let Some(w) = &witness {
        for b in &w.hhat_blocks {
            writeln!(out.stdout, "block hhat x={} pairs={}", set(&b.x), b.pairs.len()).unwrap();
        }
        for f in &w.f_blocks {
            writeln!(out.stdout, "block f x={} middles={}", set(&f.x), set(&f.middles)).unwrap();
        }
    }
    if let Some(r) = &reason {
        writeln!(out.stdout, "reason: {}: {}", r.step, r.message).unwrap();
    }
    if let Some((nu, gamma, tau)) = values {
        writeln!(out.stdout, "nu={nu} gamma={gamma} tau={tau}").unwrap();
    }
    Ok(())
}

fn generate(what: Generate) -> Result<String, CliError> {
    let h = match what {
        Generate::F => make_f(),
        Generate::H3a { l, entries } => make_h3a(&MatrixProfile::new(l, entries)?)?,
        Generate::Hhat3 { spec } => make_hhat3(&parse_hhat3_spec(&read(&spec)?).map_err(spec_error(&spec))?)?,
        Generate::G3 { spec } => make_g3(&parse_g3_spec(&read(&spec)?).map_err(spec_error(&spec))?)?.hypergraph,
        Generate::Member { seed, max_n, spec_out } => {
            let bounds = SampleBounds {
                max_n,
                ..SampleBounds::default()
            };
            let (spec, h) = sample_member(&bounds, seed)?;
            if let Some(p) = spec_out {
                write(&p, &emit_g3_spec(&spec))?;
            }
            h
        }
        Generate::Random { n, rank, m, seed } => sample_random_hypergraph(n, rank, m, seed)?,
    };
    Ok(emit_hgr(&h))
}
