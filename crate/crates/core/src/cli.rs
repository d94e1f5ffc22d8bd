//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::instances::EXAMPLE31_TEXT;
use crate::io::parse_problem;
use crate::oa::{format_iteration, run, OaConfig, OaFailure, OaStatus, SubgradientMode};
use crate::oracle::{brute_force, OracleError, OracleResult, DEFAULT_CAP};
use crate::problem::MinlpProblem;
use crate::scalar::Scalar;
use crate::solution::{status_name, ConfigEcho, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_NO_VERDICT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "oa", version, about = "Outer approximation for convex MINLPs with max-affine data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run outer approximation.
    Solve(SolveArgs),
    /// Enumerate every integer assignment.
    Oracle(OracleArgs),
    /// Run both and compare optimal values.
    Compare(SolveArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Kkt,
    NaiveFirst,
    NaiveLast,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ScalarKind {
    F64,
    Exact,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Problem file, or `example31` for the bundled instance.
    file: String,
    /// Arithmetic: binary floating point or exact rationals.
    #[arg(long, value_enum, default_value_t = ScalarKind::F64)]
    scalar: ScalarKind,
    /// Primal feasibility tolerance of the LP solver.
    #[arg(long, default_value_t = 1e-9)]
    tol_feas: f64,
    /// Piece activity tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol_act: f64,
    /// Emit the machine-readable solution document.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest `|Y|` the enumeration accepts.
    #[arg(long, default_value_t = DEFAULT_CAP as u64)]
    cap: u64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Mode::Kkt)]
    mode: Mode,
    /// Starting assignment, comma separated (e.g. `--initial-y=-1,2`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    initial_y: Option<Vec<i64>>,
    /// Relative margin that replaces the strict bound `θ < UBD`.
    #[arg(long, default_value_t = 1e-6)]
    eps_ubd: f64,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Bound on |θ| while no objective cut exists.
    #[arg(long, default_value_t = 1e12)]
    theta_max: f64,
    /// Integrality tolerance of the master branch and bound.
    #[arg(long, default_value_t = 1e-6)]
    int_tol: f64,
    /// Write the iteration log here instead of standard output.
    #[arg(long)]
    trace: Option<PathBuf>,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    let common = match &cli.command {
        Command::Solve(a) | Command::Compare(a) => &a.common,
        Command::Oracle(a) => &a.common,
    };
    match common.scalar {
        ScalarKind::F64 => dispatch::<f64>(&cli.command, &mut io, "f64"),
        ScalarKind::Exact => dispatch::<BigRational>(&cli.command, &mut io, "exact"),
    }
}

fn load<T: Scalar>(file: &str) -> Result<MinlpProblem<T>, String> {
    let text = if file == "example31" && !Path::new(file).exists() {
        EXAMPLE31_TEXT.to_string()
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?
    };
    parse_problem(&text).map_err(|e| format!("{file}:{e}"))
}

fn oa_config<T: Scalar>(a: &SolveArgs) -> OaConfig<T> {
    let mut cfg = OaConfig::<T>::with_mode(match a.mode {
        Mode::Kkt => SubgradientMode::Kkt,
        Mode::NaiveFirst => SubgradientMode::NaiveFirst,
        Mode::NaiveLast => SubgradientMode::NaiveLast,
    });
    cfg.initial_y = a.initial_y.clone();
    cfg.max_iter = a.max_iter;
    let tol = |v: f64| if T::is_exact() { T::zero() } else { T::cast_f64(v) };
    cfg.subproblem.lp.feas_tol = tol(a.common.tol_feas);
    cfg.master.milp.lp.feas_tol = tol(a.common.tol_feas);
    cfg.subproblem.tol_act = tol(a.common.tol_act);
    cfg.master.milp.int_tol = tol(a.int_tol);
    cfg.master.eps_ubd_rel = T::cast_f64(a.eps_ubd);
    cfg.master.theta_max = T::cast_f64(a.theta_max);
    cfg
}

fn validate(a: &SolveArgs) -> Result<(), String> {
    let checks = [
        (a.eps_ubd > 0.0 && a.eps_ubd.is_finite(), "--eps-ubd must be positive and finite"),
        (a.theta_max > 0.0 && a.theta_max.is_finite(), "--theta-max must be positive and finite"),
        (a.common.tol_feas >= 0.0, "--tol-feas must be nonnegative"),
        (a.common.tol_act >= 0.0, "--tol-act must be nonnegative"),
        (a.int_tol >= 0.0 && a.int_tol < 0.5, "--int-tol must lie in [0, 0.5)"),
        (a.max_iter != Some(0), "--max-iter must be at least 1"),
    ];
    match checks.iter().find(|(ok, _)| !ok) {
        Some((_, msg)) => Err(msg.to_string()),
        None => Ok(()),
    }
}

fn dispatch<T: Scalar>(cmd: &Command, io: &mut Io<'_>, scalar: &str) -> i32 {
    match cmd {
        Command::Solve(a) => solve::<T>(a, io, scalar),
        Command::Oracle(a) => oracle::<T>(a, io),
        Command::Compare(a) => compare::<T>(a, io),
    }
}

fn fail(io: &mut Io<'_>, code: i32, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(io.err, "error: {msg}");
    code
}

fn failure_code(f: &OaFailure) -> i32 {
    match f {
        OaFailure::Config(_) => EXIT_INPUT,
        OaFailure::Subproblem { .. } | OaFailure::Master { .. } => EXIT_NUMERICAL,
    }
}

fn oracle_code(e: &OracleError) -> i32 {
    match e {
        OracleError::TooLarge { .. } => EXIT_INPUT,
        OracleError::Subproblem { .. } => EXIT_NUMERICAL,
    }
}

fn solve<T: Scalar>(a: &SolveArgs, io: &mut Io<'_>, scalar: &str) -> i32 {
    if let Err(msg) = validate(a) {
        return fail(io, EXIT_INPUT, msg);
    }
    let prob = match load::<T>(&a.common.file) {
        Ok(p) => p,
        Err(msg) => return fail(io, EXIT_INPUT, msg),
    };
    let cfg = oa_config::<T>(a);
    let (res, failure) = match run(&prob, &cfg) {
        Ok(r) => (r, None),
        Err(e) => (*e.partial, Some(e.failure)),
    };
    let log: String = res
        .trace
        .iter()
        .map(|r| format_iteration(r) + "\n")
        .collect();
    match &a.trace {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &log) {
                return fail(io, EXIT_INPUT, format!("{}: {e}", path.display()));
            }
        }
        None if !a.common.json => {
            let _ = io.out.write_all(log.as_bytes());
        }
        None => {}
    }
    if let Some(f) = failure {
        return fail(io, failure_code(&f), f);
    }
    let sol = SolutionFile::from_oa(&res, ConfigEcho::of(&cfg, cfg.effective_max_iter(&prob), scalar));
    let text = if a.common.json { sol.to_json() + "\n" } else { sol.to_text() };
    let _ = io.out.write_all(text.as_bytes());
    match res.status {
        OaStatus::Optimal | OaStatus::Infeasible => EXIT_OK,
        OaStatus::IterLimit | OaStatus::CycleDetected => EXIT_NO_VERDICT,
    }
}

fn oracle<T: Scalar>(a: &OracleArgs, io: &mut Io<'_>) -> i32 {
    let prob = match load::<T>(&a.common.file) {
        Ok(p) => p,
        Err(msg) => return fail(io, EXIT_INPUT, msg),
    };
    let cfg = oa_config::<T>(&SolveArgs::defaults_for(&a.common));
    match brute_force(&prob, &cfg.subproblem, a.cap as u128) {
        Ok(r) => {
            let sol = SolutionFile::from_oracle(&r);
            let text = if a.common.json { sol.to_json() + "\n" } else { sol.to_text() };
            let _ = io.out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => fail(io, oracle_code(&e), e),
    }
}

fn compare<T: Scalar>(a: &SolveArgs, io: &mut Io<'_>) -> i32 {
    if let Err(msg) = validate(a) {
        return fail(io, EXIT_INPUT, msg);
    }
    let prob = match load::<T>(&a.common.file) {
        Ok(p) => p,
        Err(msg) => return fail(io, EXIT_INPUT, msg),
    };
    let cfg = oa_config::<T>(a);
    let (oa, oracle): (_, Result<OracleResult<T>, _>) =
        rayon::join(|| run(&prob, &cfg), || brute_force(&prob, &cfg.subproblem, DEFAULT_CAP));
    let oa = match oa {
        Ok(r) => r,
        Err(e) => return fail(io, failure_code(&e.failure), e.failure),
    };
    let oracle = match oracle {
        Ok(r) => r,
        Err(e) => return fail(io, oracle_code(&e), e),
    };
    let show = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |v| format!("{v:.16e}"));
    let oa_value = oa.incumbent.as_ref().map(|i| i.value.approx_f64());
    let or_value = oracle.value.as_ref().map(Scalar::approx_f64);
    let _ = writeln!(io.out, "oa: {} {}", status_name(oa.status), show(oa_value));
    let _ = writeln!(io.out, "oracle: {} {}", if or_value.is_some() { "Optimal" } else { "Infeasible" }, show(or_value));
    if !matches!(oa.status, OaStatus::Optimal | OaStatus::Infeasible) {
        let _ = writeln!(io.out, "delta: none");
        return EXIT_NO_VERDICT;
    }
    match (oa_value, or_value) {
        (None, None) => {
            let _ = writeln!(io.out, "delta: 0\nagree: yes");
            EXIT_OK
        }
        (Some(u), Some(v)) => {
            let delta = (u - v).abs();
            let tol = 1e-5 + a.eps_ubd * v.abs().max(1.0);
            let agree = delta <= tol;
            let _ = writeln!(io.out, "delta: {delta:.16e}\nagree: {}", if agree { "yes" } else { "no" });
            if agree {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        _ => {
            let _ = writeln!(io.out, "delta: none\nagree: no");
            EXIT_MISMATCH
        }
    }
}

impl SolveArgs {
    fn defaults_for(common: &CommonArgs) -> Self {
        SolveArgs {
            common: CommonArgs {
                file: common.file.clone(),
                scalar: common.scalar,
                tol_feas: common.tol_feas,
                tol_act: common.tol_act,
                json: common.json,
            },
            mode: Mode::Kkt,
            initial_y: None,
            eps_ubd: 1e-6,
            max_iter: None,
            theta_max: 1e12,
            int_tol: 1e-6,
            trace: None,
        }
    }
}
