//! `gradflow`: Galois non-integrability certificates and tame-topology
//! experiments for planar polynomial gradient systems.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use gradflow::algebra::Poly2;
use gradflow::expr::{parse_polynomial, ExprError};
use gradflow::flow::{integrate_flow, Direction, FlowOptions};
use gradflow::galois::{analyze_field, analyze_potential, Analysis};
use gradflow::lift::{cotangent_lift, lifted_field};
use gradflow::tame::{finiteness_experiment, TameOptions};
use gradflow::variational::PlanarField;
use serde::Serialize;

const EXIT_USAGE: u8 = 2;
const EXIT_ANALYSIS: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

/// An error that selects the process exit code.
#[derive(Debug)]
struct Coded {
    code: u8,
    message: String,
}

impl fmt::Display for Coded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Coded {}

fn coded(code: u8, message: impl fmt::Display) -> anyhow::Error {
    anyhow::Error::new(Coded {
        code,
        message: message.to_string(),
    })
}

#[derive(Parser)]
#[command(
    name = "gradflow",
    version,
    about = "Galois non-integrability and tame topology of planar gradient flows"
)]
struct Cli {
    /// Print run summaries on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify (non-)integrability along every rational invariant line.
    Analyze(AnalyzeArgs),
    /// Integrate one gradient trajectory and write it as CSV.
    Flow(FlowArgs),
    /// Count trajectory components against random lines and half-planes.
    Tame(TameArgs),
    /// Print the cotangent lift of a planar field and its Hamiltonian field.
    Lift(LiftArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["potential", "field"])))]
struct AnalyzeArgs {
    /// Potential F(x, y); the field is (F_x, F_y).
    #[arg(long)]
    potential: Option<String>,
    /// Field "P;Q".
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Tolerances {
    #[arg(long, default_value_t = FlowOptions::default().rtol)]
    rtol: f64,
    #[arg(long, default_value_t = FlowOptions::default().atol)]
    atol: f64,
    /// Stop when |grad F| falls below this.
    #[arg(long, default_value_t = FlowOptions::default().critical_threshold)]
    critical_threshold: f64,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long)]
    potential: String,
    /// Start point "x,y".
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    start: (f64, f64),
    #[arg(long, default_value = "descent", value_parser = parse_direction)]
    direction: Direction,
    #[arg(long, default_value_t = FlowOptions::default().t_max)]
    t_max: f64,
    #[arg(long, default_value_t = FlowOptions::default().box_half_width)]
    box_half_width: f64,
    #[command(flatten)]
    tol: Tolerances,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TameArgs {
    #[arg(long)]
    potential: String,
    #[arg(long, default_value_t = 200)]
    n_traj: usize,
    #[arg(long, default_value_t = 50)]
    n_cuts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = TameOptions::default().flow.t_max)]
    t_max: f64,
    #[arg(long, default_value_t = TameOptions::default().flow.box_half_width)]
    box_half_width: f64,
    #[command(flatten)]
    tol: Tolerances,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    /// Field "P;Q".
    #[arg(long)]
    field: String,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let x: f64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad x coordinate {a:?}: {e}"))?;
    let y: f64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad y coordinate {b:?}: {e}"))?;
    Ok((x, y))
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse()
}

fn parse_potential(text: &str) -> Result<Poly2> {
    parse_polynomial(text).map_err(|e| coded(EXIT_USAGE, format!("potential: {e}")))
}

/// Parses "P;Q"; syntax offsets in Q are reported relative to the whole text.
fn parse_field(text: &str) -> Result<PlanarField> {
    let (p, q) = text
        .split_once(';')
        .ok_or_else(|| coded(EXIT_USAGE, format!("field must be \"P;Q\", got {text:?}")))?;
    let shift = |e: ExprError, by: usize| match e {
        ExprError::Syntax { offset, message } => ExprError::Syntax {
            offset: offset + by,
            message,
        },
        ExprError::UnknownSymbol { name, offset } => ExprError::UnknownSymbol {
            name,
            offset: offset + by,
        },
        other => other,
    };
    let p = parse_polynomial(p).map_err(|e| coded(EXIT_USAGE, format!("field: {e}")))?;
    let q = parse_polynomial(q).map_err(|e| {
        coded(
            EXIT_USAGE,
            format!("field: {}", shift(e, text.find(';').unwrap() + 1)),
        )
    })?;
    PlanarField::new(p, q).map_err(|e| coded(EXIT_ANALYSIS, e))
}

fn flow_options(
    tol: &Tolerances,
    t_max: f64,
    box_half_width: f64,
    base: FlowOptions,
) -> Result<FlowOptions> {
    let opts = FlowOptions {
        rtol: tol.rtol,
        atol: tol.atol,
        critical_threshold: tol.critical_threshold,
        t_max,
        box_half_width,
        ..base
    };
    opts.validate().map_err(|e| coded(EXIT_USAGE, e))?;
    Ok(opts)
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn analyze(args: &AnalyzeArgs, verbose: bool) -> Result<()> {
    let result = match (&args.potential, &args.field) {
        (Some(f), None) => analyze_potential(&parse_potential(f)?),
        (None, Some(pq)) => analyze_field(&parse_field(pq)?),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let analysis: Analysis = result.map_err(|e| coded(EXIT_ANALYSIS, e))?;
    write_json(&analysis, &args.out)?;
    if verbose {
        for c in &analysis.certificates {
            eprintln!("line {}: {:?}", c.line, c.verdict);
        }
    }
    if analysis.all_unsupported() {
        return Err(coded(EXIT_ANALYSIS, "no certificate reached a verdict"));
    }
    Ok(())
}

fn flow(args: &FlowArgs, verbose: bool) -> Result<()> {
    let f = parse_potential(&args.potential)?;
    let opts = flow_options(
        &args.tol,
        args.t_max,
        args.box_half_width,
        FlowOptions::default(),
    )?;
    let tr = integrate_flow(&f, args.start, args.direction, &opts)
        .map_err(|e| coded(EXIT_NUMERIC, e))?;
    let mut w = open_out(&args.out)?;
    tr.write_csv(&mut w)?;
    w.flush()?;
    if verbose {
        eprintln!(
            "{:?} after {} accepted and {} rejected steps",
            tr.termination, tr.accepted, tr.rejected
        );
    }
    Ok(())
}

fn tame(args: &TameArgs, verbose: bool) -> Result<()> {
    let f = parse_potential(&args.potential)?;
    let base = TameOptions::default();
    let opts = TameOptions {
        flow: flow_options(&args.tol, args.t_max, args.box_half_width, base.flow)?,
        ..base
    };
    let report = finiteness_experiment(&f, args.n_traj, args.n_cuts, args.seed, &opts)
        .map_err(|e| coded(EXIT_USAGE, e))?;
    write_json(&report, &args.out)?;
    if verbose {
        eprintln!(
            "b0 {:?}, agreement {}, {} failed trajectories",
            report.b0,
            report.agreement,
            report.failures.len()
        );
    }
    if report.b0.is_none() {
        return Err(coded(EXIT_NUMERIC, "every trajectory failed to integrate"));
    }
    Ok(())
}

fn lift(args: &LiftArgs) -> Result<()> {
    let field = parse_field(&args.field)?;
    let h = cotangent_lift(&field);
    let xf = lifted_field(&h);
    let mut out = io::stdout().lock();
    writeln!(out, "f = {h}")?;
    writeln!(out, "X_f = {xf}")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a, cli.verbose),
        Command::Flow(a) => flow(a, cli.verbose),
        Command::Tame(a) => tame(a, cli.verbose),
        Command::Lift(a) => lift(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<Coded>().map_or(1, |c| c.code))
        }
    }
}
