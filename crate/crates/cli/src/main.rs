use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cuweno::analysis::{self, critical_point_study, exact_reference, timing_report, CRITICAL_RESOLUTIONS};
use cuweno::coeffgen::{tables, verify_tables, write_csv, write_text};
use cuweno::output::{self, num, RunMetadata};
use cuweno::problems::{preset, Domain, ProblemError, ProblemSpec, PRESETS};
use cuweno::solver::{run_observed, RunOptions, RunReport, Solution, SolverError};
use cuweno::weno::{SchemeKind, TauVariant};

#[derive(Parser)]
#[command(name = "cuweno", version, about = "Central-upwind WENO-ZA solvers for hyperbolic conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark problem or an analysis study.
    Run(RunArgs),
    /// List built-in problems and schemes.
    List,
    /// Print the exact coefficient tables for substencil width r.
    Coeffs(CoeffArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Study {
    CriticalPoints,
    Adr,
    Timing,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tau {
    Tau,
    TauPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Built-in problem name (see `cuweno list`).
    #[arg(long)]
    problem: Option<String>,
    /// Problem definition in TOML.
    #[arg(long, conflicts_with = "problem")]
    spec: Option<PathBuf>,
    /// Scheme name, e.g. za6, z7, ct6.
    #[arg(long)]
    scheme: Option<String>,
    /// Replace the order of the chosen scheme family.
    #[arg(long)]
    order: Option<usize>,
    /// Weight power p.
    #[arg(long = "p")]
    power: Option<f64>,
    /// Constant epsilon in the weights.
    #[arg(long)]
    eps: Option<f64>,
    /// Use epsilon = dx^e instead of a constant.
    #[arg(long)]
    eps_exponent: Option<f64>,
    #[arg(long, value_enum)]
    tau: Option<Tau>,
    /// Affine-invariant weights.
    #[arg(long)]
    ai: bool,
    #[arg(long)]
    cfl: Option<f64>,
    /// Cells of a 1D problem.
    #[arg(short = 'N', long = "N")]
    cells: Option<usize>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write the solution every k steps.
    #[arg(long)]
    every: Option<usize>,
    #[arg(long, value_enum)]
    study: Option<Study>,
    /// Positivity limiter; a bare flag means on.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "on")]
    positivity: Option<Toggle>,
    /// Characteristic-wise reconstruction for the Euler equations.
    #[arg(long, value_enum)]
    characteristic: Option<Toggle>,
    /// Critical-point orders for the critical-points study.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    ncp: Vec<u32>,
    /// Wavenumber samples for the ADR study.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Wave amplitude for the ADR study.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Schemes compared by the timing study; the first is the reference.
    #[arg(long, value_delimiter = ',', default_value = "z7,za6")]
    schemes: Vec<String>,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    #[arg(short = 'r', long, default_value_t = 3)]
    r: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Check the tables against their defining identities and published values.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Io(io::Error),
    Solver(SolverError),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 1,
            Failure::Solver(SolverError::NonFinite { .. }) => 3,
            Failure::Solver(SolverError::Unphysical { .. } | SolverError::Positivity { .. }) => 4,
            Failure::Solver(SolverError::Problem(_) | SolverError::Config(_)) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "{m}"),
            Failure::Io(e) => write!(f, "i/o: {e}"),
            Failure::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Problem(p) => Failure::Config(p.to_string()),
            SolverError::Config(m) => Failure::Config(m),
            other => Failure::Solver(other),
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::List => list(),
        Command::Coeffs(args) => coeffs(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CUWENO_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Failure::Config(format!("CUWENO_THREADS = `{v}` is not a count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(config)
}

fn list() -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    writeln!(out, "problems:")?;
    for p in PRESETS {
        writeln!(out, "  {:<18} {}", p.name, p.description)?;
    }
    writeln!(out, "schemes:")?;
    for name in SchemeKind::catalog() {
        let kind: SchemeKind = name.parse().map_err(config)?;
        writeln!(out, "  {:<6} {}", name, kind.label())?;
    }
    Ok(())
}

fn coeffs(args: &CoeffArgs) -> Result<(), Failure> {
    let t = tables(args.r).map_err(config)?;
    let mut out = io::stdout().lock();
    match args.format {
        Format::Text => write_text(t, &mut out)?,
        Format::Csv => write_csv(t, &mut out)?,
    }
    if args.verify {
        let report = verify_tables(args.r).map_err(config)?;
        if let Some(c) = report.first_failure() {
            return Err(Failure::Config(format!("check `{}` failed: {}", c.name, c.detail.clone().unwrap_or_default())));
        }
        eprintln!("verified {} checks for r = {}", report.checks.len(), args.r);
    }
    Ok(())
}

fn with_order(scheme: &str, order: usize) -> String {
    format!("{}{order}", scheme.trim_end_matches(|c: char| c.is_ascii_digit()))
}

/// Scheme named on the command line with every weight override applied.
fn scheme_from_args(args: &RunArgs, fallback: &str, base: Option<cuweno::weno::WeightParams>) -> Result<SchemeKind, Failure> {
    let mut name = args.scheme.clone().unwrap_or_else(|| fallback.to_string());
    if let Some(o) = args.order {
        name = with_order(&name, o);
    }
    let kind: SchemeKind = name.parse().map_err(config)?;
    let mut w = base.unwrap_or(kind.params);
    if let Some(p) = args.power {
        w.power = p;
    }
    if let Some(e) = args.eps {
        w.eps = e;
    }
    if args.eps_exponent.is_some() {
        w.eps_exponent = args.eps_exponent;
    }
    if let Some(t) = args.tau {
        w.tau_variant = match t {
            Tau::Tau => TauVariant::Tau,
            Tau::TauPrime => TauVariant::TauPrime,
        };
    }
    if args.ai {
        w.affine_invariant = true;
    }
    w.validate().map_err(config)?;
    Ok(kind.with_params(w))
}

fn resolve_spec(args: &RunArgs, default_problem: Option<&str>) -> Result<ProblemSpec, Failure> {
    let mut spec = match (&args.problem, &args.spec) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            ProblemSpec::from_toml(&text)?
        }
        (None, None) => match default_problem {
            Some(name) => preset(name)?,
            None => return Err(Failure::Config("give --problem <name> or --spec <file>".into())),
        },
    };
    let keep_weights = args.scheme.is_none() && args.order.is_none();
    let current = spec.scheme.clone();
    let kind = scheme_from_args(args, &current, if keep_weights { spec.weights } else { None })?;
    spec.scheme = kind.name();
    spec.weights = Some(kind.params);
    if let Some(c) = args.cfl {
        spec.cfl = c;
    }
    if let Some(t) = args.t_final {
        spec.t_final = t;
    }
    if let Some(p) = args.positivity {
        spec.positivity = p == Toggle::On;
    }
    if let Some(c) = args.characteristic {
        spec.characteristic = c == Toggle::On;
    }
    spec = match &spec.domain {
        Domain::OneD { .. } => {
            if args.nx.is_some() || args.ny.is_some() {
                return Err(Failure::Config(format!("`{}` is one-dimensional; use -N", spec.name)));
            }
            match args.cells {
                Some(n) => spec.with_cells(n),
                None => spec,
            }
        }
        Domain::TwoD { grid, .. } => {
            if args.cells.is_some() {
                return Err(Failure::Config(format!("`{}` is two-dimensional; use --nx/--ny", spec.name)));
            }
            let (nx, ny) = (args.nx.unwrap_or(grid.nx), args.ny.unwrap_or(grid.ny));
            spec.with_cells_2d(nx, ny)
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?))
}

fn save_solution(path: &Path, sol: &Solution) -> Result<(), Failure> {
    let mut w = create(path)?;
    output::write_solution(&mut w, sol)?;
    w.flush()?;
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    if args.every == Some(0) {
        return Err(Failure::Config("--every must be at least 1".into()));
    }
    match args.study {
        None => run_problem(args),
        Some(Study::CriticalPoints) => study_critical(args),
        Some(Study::Adr) => study_adr(args),
        Some(Study::Timing) => study_timing(args),
    }
}

fn run_problem(args: &RunArgs) -> Result<(), Failure> {
    let spec = resolve_spec(args, None)?;
    fs::create_dir_all(&args.out)?;
    let stem = spec.name.clone();
    let opts = RunOptions { snapshot_every: args.every, dt_cap: None };
    let mut snap_err = None;
    let result = run_observed(&spec, &opts, |step, sol| {
        if snap_err.is_none() {
            let path = args.out.join(format!("{stem}_step{step:06}.csv"));
            snap_err = save_solution(&path, sol).err();
        }
    });
    if let Some(e) = snap_err {
        return Err(e);
    }
    let (sol, report) = result?;
    save_solution(&args.out.join(format!("{stem}.csv")), &sol)?;
    fs::write(args.out.join(format!("{stem}.meta.toml")), RunMetadata::new(&spec, &report).to_toml())?;
    if let Some(exact) = exact_reference(&spec, sol.t) {
        let value = sol.density();
        let err: Vec<f64> = value.iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
        let mut w = create(&args.out.join(format!("{stem}_error.csv")))?;
        output::write_error_profile(&mut w, &sol.x(), &value, &err)?;
        w.flush()?;
    }
    println!(
        "{}: {} t={} steps={} min_density={} wall={:.3}s -> {}",
        spec.name,
        report.scheme,
        report.t,
        report.steps,
        report.min_density,
        report.wall_seconds,
        args.out.display()
    );
    Ok(())
}

fn study_critical(args: &RunArgs) -> Result<(), Failure> {
    let kind = scheme_from_args(args, "za6", None)?;
    fs::create_dir_all(&args.out)?;
    let path = args.out.join("critical_points.csv");
    let mut w = create(&path)?;
    writeln!(w, "n_cp,inv_dx,error,order")?;
    println!("{} p={} critical-point convergence", kind.name(), kind.params.power);
    for &n in &args.ncp {
        let rows = critical_point_study(n, kind, &CRITICAL_RESOLUTIONS).map_err(config)?;
        for r in &rows {
            let order = r.order.map(num).unwrap_or_default();
            writeln!(w, "{n},{},{},{order}", r.inv_dx, num(r.error))?;
            println!(
                "  n_cp={n} 1/dx={:<4} error={:.2e} order={}",
                r.inv_dx,
                r.error,
                r.order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into())
            );
        }
    }
    w.flush()?;
    println!("-> {}", path.display());
    Ok(())
}

fn study_adr(args: &RunArgs) -> Result<(), Failure> {
    let kind = scheme_from_args(args, "za6", None)?;
    let pts = analysis::adr(kind, args.samples, args.amplitude).map_err(config)?;
    fs::create_dir_all(&args.out)?;
    let tag = match kind.params.tau_variant {
        TauVariant::Tau => "",
        TauVariant::TauPrime => "_tau_prime",
    };
    let path = args.out.join(format!("adr_{}{tag}.csv", kind.name()));
    let mut w = create(&path)?;
    output::write_adr(&mut w, &pts)?;
    w.flush()?;
    let max_im = pts.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
    println!("{}: {} samples, max Im = {max_im:.3e} -> {}", kind.name(), pts.len(), path.display());
    Ok(())
}

fn study_timing(args: &RunArgs) -> Result<(), Failure> {
    if args.schemes.is_empty() {
        return Err(Failure::Config("--schemes needs at least one scheme".into()));
    }
    let mut reports: Vec<RunReport> = Vec::new();
    for name in &args.schemes {
        let mut sub = args.clone();
        sub.scheme = Some(name.clone());
        sub.order = None;
        let spec = resolve_spec(&sub, Some("rivp3"))?;
        let (_, report) = cuweno::solver::run(&spec, &RunOptions::default())?;
        println!("  {:<6} steps={} wall={:.3}s", report.scheme, report.steps, report.wall_seconds);
        reports.push(report);
    }
    let rows = timing_report(&reports, 0);
    fs::create_dir_all(&args.out)?;
    let path = args.out.join("timing.csv");
    let mut w = create(&path)?;
    output::write_timing(&mut w, &rows)?;
    w.flush()?;
    for r in &rows {
        println!("{:<6} {:>10.3}s {:>8.2e} s/stage {:>+7.1}%", r.scheme, r.wall_seconds, r.seconds_per_stage, r.speedup_percent);
    }
    println!("-> {}", path.display());
    Ok(())
}
