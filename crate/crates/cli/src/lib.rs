//! Argument handling and subcommand dispatch for the `qarrow` binary.
//!
//! Exit codes: 0 on success, 1 on usage or IO errors, 2 when a requested
//! majorization assertion fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qarrow_core::adiabatic::{
    run_farhi_sweep, run_projector_sweep, run_static_sweep, FarhiDomain, Sweep,
};
use qarrow_core::grover::{self, GroverConfig, InitialState};
use qarrow_core::io::{export_lorenz, export_trace, import_trace, report_json, TraceFormat};
use qarrow_core::phase_estimation::{run_qpe, QpeConfig};
use qarrow_core::statevec::MAX_QUBITS;
use qarrow_core::{verify_trace, Trace, TraceReport, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qarrow", version, about = "Majorization traces for Grover, adiabatic and phase-estimation runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grover search from the uniform (or a boosted) superposition
    Grover(GroverArgs),
    /// Adiabatic sweep integrated with fixed-step RK4
    Adiabatic(AdiabaticArgs),
    /// Phase estimation with a snapshot after every gate of the QFT
    Qpe(QpeArgs),
    /// Verdict every step of an existing trace file
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output path (trace for runs, report JSON for verify)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Trace format; guessed from the file extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance on prefix-sum comparisons
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Exit with status 2 if the asserted window is not monotone
    #[arg(long)]
    pub assert_majorization: bool,
    /// End the asserted window at the snapshot with this label
    #[arg(long, value_name = "LABEL")]
    pub assert_through: Option<String>,
    /// Write the Lorenz curves of every snapshot as CSV
    #[arg(long, value_name = "PATH")]
    pub lorenz: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl From<Format> for TraceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => TraceFormat::Json,
            Format::Csv => TraceFormat::Csv,
        }
    }
}

#[derive(Args, Debug)]
pub struct GroverArgs {
    #[arg(long)]
    pub n: usize,
    /// Marked basis state
    #[arg(long, default_value_t = 0)]
    pub target: usize,
    /// Iterations to run; defaults to the optimal count
    #[arg(long)]
    pub iters: Option<usize>,
    /// Start from the uniform state with this amplitude doubled
    #[arg(long, value_name = "INDEX")]
    pub boost: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Projector,
    Farhi,
    Static,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Computational,
    Subspace,
}

#[derive(Args, Debug)]
pub struct AdiabaticArgs {
    #[arg(long, value_enum, default_value_t = Model::Projector)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    /// Total evolution time
    #[arg(long = "T", value_name = "T")]
    pub total_time: f64,
    /// Fixed step; defaults to min(0.01, 0.05/‖H‖)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Probability list verdicted for the Farhi model
    #[arg(long, value_enum, default_value_t = Domain::Computational)]
    pub domain: Domain,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct QpeArgs {
    #[arg(long)]
    pub n: usize,
    /// Eigenphase in [0, 1)
    #[arg(long)]
    pub phi: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Trace file (JSON or CSV)
    pub path: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Grover(a) => grover_cmd(a, out),
        Command::Adiabatic(a) => adiabatic_cmd(a, out),
        Command::Qpe(a) => qpe_cmd(a, out),
        Command::Verify(a) => verify_cmd(a, out),
    }
}

fn check_qubits(n: usize) -> anyhow::Result<()> {
    if n == 0 || n > MAX_QUBITS {
        bail!("--n must be in 1..={MAX_QUBITS}, got {n}");
    }
    Ok(())
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        bail!("--tol must be a non-negative number, got {tol}");
    }
    Ok(())
}

/// Index of the last snapshot in the asserted window.
fn window_end(trace: &Trace, through: Option<&str>, default: usize) -> anyhow::Result<usize> {
    match through {
        Some(label) => trace
            .position(label)
            .with_context(|| format!("no snapshot labelled {label:?}")),
        None => Ok(default.min(trace.len().saturating_sub(1))),
    }
}

/// `None` when the window holds a single snapshot and there is nothing to compare.
fn window_report(trace: &Trace, end: usize, tol: f64) -> anyhow::Result<Option<TraceReport>> {
    if end == 0 {
        return Ok(None);
    }
    Ok(Some(verify_trace(&trace.truncated(end), tol)?))
}

fn output_format(common: &Common, path: &Path) -> TraceFormat {
    common
        .format
        .map(TraceFormat::from)
        .unwrap_or_else(|| TraceFormat::from_path(path))
}

fn write_outputs(trace: &Trace, common: &Common) -> anyhow::Result<()> {
    if let Some(path) = &common.out {
        export_trace(trace, path, output_format(common, path))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &common.lorenz {
        export_lorenz(trace, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn print_window(out: &mut dyn Write, trace: &Trace, end: usize, report: Option<&TraceReport>) -> anyhow::Result<()> {
    let snaps = trace.snapshots();
    write!(out, "window {}..{}: ", snaps[0].label, snaps[end].label)?;
    match report.and_then(|r| r.first_violation.map(|i| (r, i))) {
        None => writeln!(out, "majorization holds at every step")?,
        Some((r, i)) => writeln!(
            out,
            "{} violation(s), first at step {i} ({} -> {})",
            r.violations(),
            snaps[i].label,
            snaps[i + 1].label
        )?,
    }
    Ok(())
}

fn finish(
    trace: &Trace,
    common: &Common,
    default_end: usize,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    check_tol(common.tol)?;
    let end = window_end(trace, common.assert_through.as_deref(), default_end)?;
    let report = window_report(trace, end, common.tol)?;
    write_outputs(trace, common)?;
    print_window(out, trace, end, report.as_ref())?;
    let violated = report.is_some_and(|r| !r.holds());
    Ok(if common.assert_majorization && violated {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn grover_cmd(a: GroverArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    check_qubits(a.n)?;
    let size = 1usize << a.n;
    let m_star = grover::optimal_iterations(size)?;
    let initial = match a.boost {
        Some(idx) => InitialState::Custom(grover::boosted_initial_state(a.n, a.target, idx)?),
        None => InitialState::Symmetric,
    };
    let cfg = GroverConfig {
        n: a.n,
        target: a.target,
        max_iters: a.iters.unwrap_or(m_star),
        initial,
    };
    let trace = grover::run(&cfg)?;
    let last = trace.snapshots().last().expect("grover trace is non-empty");
    writeln!(
        out,
        "grover n={} target={}: {} iterations (optimal {m_star}), success {:.6}",
        a.n,
        a.target,
        cfg.max_iters,
        last.probs.as_slice()[a.target]
    )?;
    finish(&trace, &a.common, m_star, out)
}

fn adiabatic_cmd(a: AdiabaticArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    check_qubits(a.n)?;
    let sweep: Sweep = match a.model {
        Model::Projector => run_projector_sweep(a.n, a.total_time, a.dt)?,
        Model::Static => run_static_sweep(a.n, a.total_time, a.dt)?,
        Model::Farhi => {
            let domain = match a.domain {
                Domain::Computational => FarhiDomain::Computational,
                Domain::Subspace => FarhiDomain::Subspace,
            };
            run_farhi_sweep(a.n, a.total_time, a.dt, domain)?
        }
    };
    writeln!(
        out,
        "{} n={} T={}: final success {:.6}, peak {:.6} at {}, norm drift {:.2e}",
        sweep.trace.algorithm_name(),
        a.n,
        a.total_time,
        sweep.final_success(),
        sweep.success[sweep.peak],
        sweep.trace.snapshots()[sweep.peak].label,
        sweep.max_norm_drift
    )?;
    finish(&sweep.trace, &a.common, sweep.peak, out)
}

fn qpe_cmd(a: QpeArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    check_qubits(a.n)?;
    let trace = run_qpe(&QpeConfig::new(a.n, a.phi)?)?;
    let last = trace.snapshots().last().expect("qpe trace is non-empty").probs.as_slice();
    let (best, p) = last
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (y, p)| if p > acc.1 { (y, p) } else { acc });
    writeln!(
        out,
        "qpe n={} phi={}: {} slices, most likely outcome y={best} (p = {p:.6})",
        a.n,
        a.phi,
        trace.len()
    )?;
    finish(&trace, &a.common, trace.len() - 1, out)
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let common = &a.common;
    check_tol(common.tol)?;
    let format = output_format(common, &a.path);
    let trace = import_trace(&a.path, format).with_context(|| format!("reading {}", a.path.display()))?;
    let end = window_end(&trace, common.assert_through.as_deref(), trace.len().saturating_sub(1))?;
    let report = verify_trace(&trace.truncated(end), common.tol)?;

    let snaps = trace.snapshots();
    for (i, v) in report.step_verdicts.iter().enumerate() {
        writeln!(
            out,
            "step {i}: {} -> {}: {} (worst margin {:.3e})",
            snaps[i].label,
            snaps[i + 1].label,
            v.relation,
            v.worst_margin()
        )?;
    }
    match report.first_violation {
        Some(i) => writeln!(out, "first violation: step {i}")?,
        None => writeln!(out, "first violation: none")?,
    }

    if let Some(path) = &common.out {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("writing {}", path.display()))?);
        writeln!(w, "{}", report_json(&report)?)?;
        w.flush()?;
    }
    if let Some(path) = &common.lorenz {
        export_lorenz(&trace, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.holds() { EXIT_OK } else { EXIT_VIOLATION })
}
