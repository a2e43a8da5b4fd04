//! `vring`: batch driver for the vertexring verification suites.
//!
//! Loads Lie presentations, automorphisms, and jet presentations from
//! files (or by builtin name), runs a named suite of exact identity
//! checks, and emits a human-readable summary or a machine-readable
//! record stream. Exit codes: 0 all checks passed, 1 at least one check
//! failed, 2 the inputs were unusable, 3 a bounded solver gave up (the
//! partial report is still emitted). Reports are deterministic for a
//! given configuration: iteration is over canonical bases in canonical
//! order.

use clap::{Args, CommandFactory, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use vertexring::cyclotomic::Cyc;
use vertexring::jets::parse_jet;
use vertexring::laurent::{parse_laurent, parse_scalar, FracLaurent};
use vertexring::lie::{
    aut_order, heisenberg_rank, parse_aut, parse_lie, sl2, sl2_chevalley, sl3, LiePresentation,
};
use vertexring::linalg::Matrix;
use vertexring::poly::Limits;
use vertexring::report::SuiteReport;
use vertexring::scalar::{Field, Rat};
use vertexring::suites::{
    affine_suite, arc_suite, axioms_suite, descent_suite, loop_suite, twistedmod_suite,
    SuiteError,
};

const EXIT_PASS: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Write a rendered report to stdout. A closed pipe (the consumer stopped
/// reading, e.g. `vring ... | head`) is not an error: the exit code still
/// carries the verification outcome, so the write is simply abandoned.
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("cannot write to stdout: {e}");
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vring",
    version,
    about = "Exact verification suites for vertex algebras over differential rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite: axioms | affine | loop | descent | twistedmod | arc.
    Verify {
        /// Suite name.
        suite: String,
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Twisted loop algebra coherence checks (same as `verify loop`).
    Loop {
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Galois descent vs. the twisted loop algebra (same as `verify descent`).
    Descent {
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Jet prolongation, collapse, and adjunction checks (same as `verify arc`).
    Arc {
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Twisted-module pullback checks (same as `verify twistedmod`).
    Pullback {
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Re-render a saved record stream as a text summary.
    Report {
        /// Path to a records file produced with `--report` or `--format records`.
        path: PathBuf,
    },
}

#[derive(Args)]
struct SuiteOpts {
    /// Fractional Laurent ring for the axioms suite, written S<m>.
    #[arg(long, default_value = "S2")]
    ring: String,

    /// Lie presentation: a builtin (sl2, sl3, heis1, heis2) or a .lie file.
    #[arg(long)]
    lie: Option<String>,

    /// Automorphism: a builtin (chevalley, neg, id) or a .aut file.
    #[arg(long)]
    aut: Option<String>,

    /// Jet presentation file for the arc suite.
    #[arg(long)]
    jet: Option<PathBuf>,

    /// Comma-separated variable images for the arc adjunction test
    /// (Laurent expressions in t; pass an empty string for no variables).
    #[arg(long)]
    images: Option<String>,

    /// Level scalar for affine constructions.
    #[arg(long, default_value = "1")]
    level: String,

    /// Degree bound for graded slices and identity triples (total degree).
    #[arg(long, default_value_t = 3)]
    degree: i64,

    /// Mode-window half-width w: identity mode boxes sweep [-w, w-1]
    /// (larger modes only add identically-vanishing instances), other
    /// mode sweeps use [-w, w]; slice exponents span [-(w-1), w-1].
    #[arg(long, default_value_t = 3)]
    window: i64,

    /// Galois/truncation order: the automorphism order for loop, descent,
    /// and pullback suites (default: detected from the automorphism), the
    /// jet truncation for arc, and the derivation order bound for axioms
    /// (default 2).
    #[arg(long)]
    order: Option<u32>,

    /// Ambient cyclotomic conductor; scalars are exact rationals when it
    /// is at most 2, and exact cyclotomics otherwise (default: the
    /// detected automorphism order, or 1 without an automorphism).
    #[arg(long)]
    conductor: Option<u32>,

    /// Depth bound for twisted-module states (pullback suite).
    #[arg(long, default_value_t = 2)]
    depth: usize,

    /// Pair budget for ideal-membership completions in the arc suite.
    #[arg(long)]
    max_pairs: Option<usize>,

    /// Also write the machine-readable record stream to this path.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Stdout format: text | records.
    #[arg(long, default_value = "text")]
    format: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Verify { suite, opts } => run_suite(&suite, &opts),
        Command::Loop { opts } => run_suite("loop", &opts),
        Command::Descent { opts } => run_suite("descent", &opts),
        Command::Arc { opts } => run_suite("arc", &opts),
        Command::Pullback { opts } => run_suite("twistedmod", &opts),
        Command::Report { path } => rerender(&path),
    };
    ExitCode::from(code)
}

fn input_error(msg: &str) -> u8 {
    eprintln!("input error: {msg}");
    EXIT_INPUT
}

fn rerender(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(&format!("cannot read {}: {e}", path.display())),
    };
    let rep = match SuiteReport::from_jsonl(&text) {
        Ok(r) => r,
        Err(e) => return input_error(&format!("cannot parse {}: {e}", path.display())),
    };
    write_stdout(&rep.text_summary());
    if rep.all_pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_suite(suite: &str, opts: &SuiteOpts) -> u8 {
    if !matches!(
        suite,
        "axioms" | "affine" | "loop" | "descent" | "twistedmod" | "arc"
    ) {
        let _ = Cli::command().print_help();
        return input_error(&format!("unknown suite {suite:?}"));
    }
    if !matches!(opts.format.as_str(), "text" | "records") {
        return input_error(&format!("unknown format {:?}", opts.format));
    }
    if opts.degree < 0 {
        return input_error("--degree must be nonnegative");
    }
    if opts.window < 1 {
        return input_error("--window must be at least 1");
    }
    if opts.order == Some(0) {
        return input_error("--order must be positive");
    }
    if opts.conductor == Some(0) {
        return input_error("--conductor must be positive");
    }
    let conductor = match detect_conductor(suite, opts) {
        Ok(c) => c,
        Err(msg) => return input_error(&msg),
    };
    let outcome = if conductor <= 2 {
        run_typed::<Rat>(suite, opts)
    } else {
        run_typed::<Cyc>(suite, opts)
    };
    match outcome {
        Ok(rep) => emit(&rep, opts, EXIT_PASS),
        Err(SuiteError::Input(msg)) => input_error(&msg),
        Err(SuiteError::Resource { message, partial }) => {
            eprintln!("resource limit: {message}");
            let code = emit(&partial, opts, EXIT_RESOURCE);
            if code == EXIT_INPUT {
                code
            } else {
                EXIT_RESOURCE
            }
        }
    }
}

/// Emit the report to stdout (and `--report`); `base` overrides the
/// pass exit code (used to keep exit 3 on partial reports).
fn emit(rep: &SuiteReport, opts: &SuiteOpts, base: u8) -> u8 {
    if let Some(path) = &opts.report {
        if let Err(e) = std::fs::write(path, rep.to_jsonl()) {
            return input_error(&format!("cannot write {}: {e}", path.display()));
        }
    }
    match opts.format.as_str() {
        "records" => write_stdout(&rep.to_jsonl()),
        _ => write_stdout(&rep.text_summary()),
    }
    if base != EXIT_PASS {
        base
    } else if rep.all_pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

/// The ambient conductor: explicit flag, else the detected order of the
/// requested automorphism, else 1.
fn detect_conductor(suite: &str, opts: &SuiteOpts) -> Result<u32, String> {
    if let Some(c) = opts.conductor {
        return Ok(c);
    }
    if !matches!(suite, "loop" | "descent" | "twistedmod") {
        return Ok(1);
    }
    let Some(aut) = &opts.aut else {
        return Ok(1);
    };
    match aut.as_str() {
        "id" => return Ok(1),
        "chevalley" | "neg" => return Ok(2),
        _ => {}
    }
    // Parse over the cyclotomic tower (a superset of the rationals) just
    // to measure the order, then rerun over the right scalars.
    let lie = load_lie::<Cyc>(opts)?;
    let g = load_aut::<Cyc>(aut, lie.dim())?;
    if let Some(o) = opts.order {
        return Ok(o);
    }
    aut_order(&g, 24).map_err(|e| format!("{e}"))
}

fn run_typed<K: Field>(suite: &str, opts: &SuiteOpts) -> Result<SuiteReport, SuiteError> {
    let input = |msg: String| SuiteError::Input(msg);
    match suite {
        "axioms" => {
            let m = parse_ring(&opts.ring).map_err(input)?;
            let hs_max = u64::from(opts.order.unwrap_or(2));
            Ok(axioms_suite::<K>(
                m,
                opts.window,
                -opts.window,
                opts.window - 1,
                hs_max,
            ))
        }
        "affine" => {
            let lie = load_lie::<K>(opts).map_err(input)?;
            let level = parse_scalar::<K>(&opts.level)
                .map_err(|e| input(format!("bad --level: {e}")))?;
            affine_suite(&lie, level, opts.degree, -opts.window, opts.window - 1)
        }
        "loop" | "descent" | "twistedmod" => {
            let lie = load_lie::<K>(opts).map_err(input)?;
            let aut = opts
                .aut
                .as_deref()
                .ok_or_else(|| input("--aut is required for this suite".to_string()))?;
            let g = load_aut::<K>(aut, lie.dim()).map_err(input)?;
            let m = match opts.order {
                Some(o) => o,
                None => aut_order(&g, 24).map_err(|e| input(format!("{e}")))?,
            };
            let level = parse_scalar::<K>(&opts.level)
                .map_err(|e| input(format!("bad --level: {e}")))?;
            let expw = opts.window - 1;
            match suite {
                "loop" => loop_suite(
                    &lie,
                    &g,
                    m,
                    level,
                    opts.degree,
                    expw,
                    -opts.window,
                    opts.window,
                ),
                "descent" => descent_suite(
                    &lie,
                    &g,
                    m,
                    level,
                    opts.degree,
                    expw,
                    -opts.window,
                    opts.window,
                ),
                _ => twistedmod_suite(&lie, &g, m, level, opts.depth, expw, expw),
            }
        }
        "arc" => {
            let jet = opts
                .jet
                .as_ref()
                .ok_or_else(|| input("--jet is required for the arc suite".to_string()))?;
            let text = std::fs::read_to_string(jet)
                .map_err(|e| input(format!("cannot read {}: {e}", jet.display())))?;
            let pres = parse_jet::<K>(&text).map_err(|e| input(format!("{e}")))?;
            let source = jet
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| jet.display().to_string());
            let order = u64::from(opts.order.unwrap_or(2));
            let mut limits = Limits::default();
            if let Some(p) = opts.max_pairs {
                limits.max_pairs = p;
            }
            let images = match &opts.images {
                None => None,
                Some(s) => Some(parse_images::<K>(s).map_err(input)?),
            };
            arc_suite(&pres, &source, order, &limits, images.as_deref())
        }
        _ => unreachable!("suite name validated by the caller"),
    }
}

fn parse_ring(s: &str) -> Result<u32, String> {
    let body = s
        .strip_prefix('S')
        .or_else(|| s.strip_prefix('s'))
        .unwrap_or(s);
    match body.parse::<u32>() {
        Ok(m) if m >= 1 => Ok(m),
        _ => Err(format!(
            "bad --ring {s:?}: expected S<m> with a positive integer m"
        )),
    }
}

fn load_lie<K: Field>(opts: &SuiteOpts) -> Result<LiePresentation<K>, String> {
    let Some(name) = &opts.lie else {
        return Err("--lie is required for this suite".to_string());
    };
    match name.as_str() {
        "sl2" => Ok(sl2()),
        "sl3" => Ok(sl3()),
        "heis1" => Ok(heisenberg_rank(1)),
        "heis2" => Ok(heisenberg_rank(2)),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {path}: {e}"))?;
            parse_lie(&text).map_err(|e| format!("{path}: {e}"))
        }
    }
}

fn load_aut<K: Field>(name: &str, dim: usize) -> Result<Matrix<K>, String> {
    match name {
        "chevalley" => {
            if dim != 3 {
                return Err(format!(
                    "builtin automorphism `chevalley` needs a 3-dimensional algebra, got {dim}"
                ));
            }
            Ok(sl2_chevalley())
        }
        "neg" => Ok(Matrix::from_fn(dim, dim, |i, j| {
            if i == j {
                -K::one()
            } else {
                K::zero()
            }
        })),
        "id" => Ok(Matrix::identity(dim)),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {path}: {e}"))?;
            parse_aut(&text, dim).map_err(|e| format!("{path}: {e}"))
        }
    }
}

fn parse_images<K: Field>(s: &str) -> Result<Vec<FracLaurent<K>>, String> {
    let body = s.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|part| {
            parse_laurent::<K>(part.trim(), 1)
                .map_err(|e| format!("bad image {:?}: {e}", part.trim()))
        })
        .collect()
}
