//! `reslab` command-line front end.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and maps the
//! outcome to an exit code: `0` on success, `2` for rejected input (usage
//! errors, invalid values, unreadable files) and `3` when a numerical method
//! fails to converge.

pub mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reslab::airy_model::{self, BoundaryCondition, ModelOperatorSpec, Suite};
use reslab::csfun::{self, AiryKind};
use reslab::geometry::{self, Ellipsoid};
use reslab::resonance::{self, ResonanceQuery};
use reslab::roots::Rect;
use reslab::scaling::{self, BallDistanceHessian, ContourSpec};
use reslab::C64;
use serde::Serialize;
use serde_json::json;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "RESLAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] reslab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "reslab",
    version,
    about = "Ball resonances, cubic barriers and Airy-model bounds"
)]
struct Cli {
    /// Print summaries as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zeros of Ai or Ai′ on the negative real axis, as positive magnitudes.
    AiryZeros(AiryZerosArgs),
    /// Resonances of a ball; writes resonances.csv/.json and barrier.json.
    Ball(BallArgs),
    /// Barrier constant S from a minimum curvature or an ellipsoid.
    Barrier(BarrierArgs),
    /// Check a resonances.csv against the barrier Im ζ = −S|ζ|^{1/3} + C.
    Verify(VerifyArgs),
    /// Fit the first-string slope S over a mode range of a resonances.csv.
    Fit(FitArgs),
    /// Airy-model operator checks.
    Model(ModelArgs),
    /// Argument window of the scaled Laplacian symbol outside a ball.
    Symbol(SymbolArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Ai,
    AiPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Dirichlet,
    Neumann,
    Robin,
}

impl BcArg {
    fn build(self, gamma: Option<f64>) -> Result<BoundaryCondition<f64>, CliError> {
        let bc = match (self, gamma) {
            (BcArg::Robin, Some(g)) => BoundaryCondition::robin(g),
            (BcArg::Robin, None) => return Err(CliError::Usage("--bc robin requires --gamma".into())),
            (_, Some(_)) => return Err(CliError::Usage("--gamma applies only to --bc robin".into())),
            (BcArg::Dirichlet, None) => BoundaryCondition::dirichlet(),
            (BcArg::Neumann, None) => BoundaryCondition::neumann(),
        };
        bc.validate()?;
        Ok(bc)
    }
}

#[derive(Debug, Args)]
struct AiryZerosArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    count: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Debug, Args)]
struct BallArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, value_enum)]
    bc: BcArg,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    l_min: usize,
    #[arg(long)]
    l_max: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Fixed search window `re_min,re_max,im_min,im_max` for every mode.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("surface").required(true).multiple(false)))]
struct BarrierArgs {
    /// Minimum principal curvature of the obstacle boundary.
    #[arg(long, allow_negative_numbers = true, group = "surface")]
    min_curvature: Option<f64>,
    /// Ellipsoid semi-axes `a,b,c`.
    #[arg(long, allow_negative_numbers = true, group = "surface", value_delimiter = ',')]
    ellipsoid: Option<Vec<f64>>,
    /// Chart grid size for the curvature scan.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Use the Dirichlet constant (first zero of Ai instead of Ai′).
    #[arg(long)]
    dirichlet: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    l_lo: usize,
    #[arg(long)]
    l_hi: usize,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("task").required(true).multiple(false)))]
struct ModelArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, value_enum, default_value = "neumann")]
    bc: BcArg,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Grid size.
    #[arg(long)]
    n: Option<usize>,
    /// Run an inequality suite (e.g. `ei:dh0`).
    #[arg(long, group = "task")]
    suite: Option<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// First eigenvalues of the Airy realisation `D_s² + s`.
    #[arg(long, group = "task")]
    eigs: Option<usize>,
    /// Smallest singular value of the frozen operator minus ω₀.
    #[arg(long, group = "task")]
    sigma_min: bool,
    /// Lowest eigenvalue of the penalised Airy form at scale h.
    #[arg(long, group = "task")]
    rayleigh: bool,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega_re: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    omega_im: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    r_val: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    q_val: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    t_max: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    eta_weight: f64,
    /// Penalty coefficients `c_d0` and `c_00` for `--rayleigh`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c_d0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c_00: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HessPreset {
    Ball,
}

#[derive(Debug, Args)]
struct SymbolArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.3)]
    theta: f64,
    #[arg(long, value_enum, default_value = "ball")]
    hess: HessPreset,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.1)]
    delta: f64,
    /// Inverse interval length `L` of the contour.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

/// Runs `reslab` on `argv` (including the program name) and returns the exit
/// code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        if n > 0 {
            // A pool may already exist when dispatch runs more than once in a process.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn emit<S: Serialize>(json: bool, value: &S, text: String) -> Result<String, CliError> {
    if json {
        Ok(String::from_utf8(io::pretty_json(value)?).expect("serde_json emits UTF-8"))
    } else {
        Ok(text)
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::AiryZeros(a) => airy_zeros(cli.json, a),
        Command::Ball(a) => ball(cli.json, a),
        Command::Barrier(a) => barrier(cli.json, a),
        Command::Verify(a) => verify(cli.json, a),
        Command::Fit(a) => fit(cli.json, a),
        Command::Model(a) => model(cli.json, a),
        Command::Symbol(a) => symbol(cli.json, a),
    }
}

fn airy_zeros(json: bool, a: &AiryZerosArgs) -> Result<String, CliError> {
    let kind = match a.kind {
        KindArg::Ai => AiryKind::Ai,
        KindArg::AiPrime => AiryKind::AiPrime,
    };
    let zeros = csfun::airy_zeros::<f64>(kind, a.count, a.tol)?;
    let text = zeros.iter().map(|z| format!("{z:.5}\n")).collect();
    emit(json, &json!({ "zeros": zeros }), text)
}

fn ball(json: bool, a: &BallArgs) -> Result<String, CliError> {
    let bc = a.bc.build(a.gamma)?;
    let mut query = ResonanceQuery::new(a.radius, bc, a.l_min, a.l_max).with_tol(a.tol);
    if let Some(w) = &a.window {
        expect_len("--window", w, 4)?;
        query = query.with_window(Rect::new(w[0], w[1], w[2], w[3])?);
    }
    query.validate()?;
    let set = resonance::ball_resonances(&query)?;
    let s = query.sphere_barrier()?;
    let report = resonance::verify_barrier(&set, s, None)?;

    io::write_atomic(&a.out.join(io::RESONANCE_CSV), &io::resonance_csv(&set)?)?;
    io::write_atomic(&a.out.join(io::RESONANCE_JSON), &io::pretty_json(&set)?)?;
    io::write_atomic(&a.out.join(io::BARRIER_JSON), &io::barrier_json(&report)?)?;

    let mut text = format!(
        "{} zeros over l = {}..={} ({} resonances)\n",
        set.entries.len(),
        a.l_min,
        a.l_max,
        set.resonances().count()
    );
    if set.entries.len() <= 20 {
        for e in &set.entries {
            text += &format!("l = {:3}  zeta = {}  [{}]\n", e.l, fmt_c(e.zeta), e.class.as_str());
        }
    }
    text += &format!("S = {:.5}  C_fit = {:.6}\n", report.s, report.c_fit);
    if let (Some(sf), Some(se)) = (report.s_fit, report.stderr) {
        text += &format!("S_fit = {sf:.5} +/- {se:.1e}\n");
    }
    text += &format!("wrote {}\n", a.out.display());
    emit(json, &report, text)
}

fn expect_len(flag: &str, values: &[f64], n: usize) -> Result<(), CliError> {
    if values.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{flag} takes {n} comma-separated values, got {}",
            values.len()
        )))
    }
}

fn fmt_c(z: C64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{:.10} {sign} {:.10}i", z.re, z.im.abs())
}

fn barrier(json: bool, a: &BarrierArgs) -> Result<String, CliError> {
    let min_k = match (a.min_curvature, &a.ellipsoid) {
        (Some(k), _) => k,
        (None, Some(abc)) => {
            expect_len("--ellipsoid", abc, 3)?;
            let e = Ellipsoid::new(abc[0], abc[1], abc[2])?;
            geometry::min_curvature(&e, a.grid)?
        }
        (None, None) => unreachable!("clap enforces the surface group"),
    };
    let s = if a.dirichlet {
        geometry::barrier_constant_dirichlet(min_k)?
    } else {
        geometry::barrier_constant(min_k)?
    };
    let text = format!("S = {s:.5}\n");
    emit(json, &json!({ "S": s, "min_curvature": min_k }), text)
}

fn verify(json: bool, a: &VerifyArgs) -> Result<String, CliError> {
    let set = io::read_resonance_csv(&a.input)?;
    let report = resonance::verify_barrier(&set, a.s, a.c)?;
    let mut text = format!(
        "S = {:.5}  C_fit = {:.6}  entries = {}\n",
        report.s, report.c_fit, report.n_entries
    );
    if let Some(c) = a.c {
        text += &format!("violations of C = {c}: {}\n", report.violations.len());
        for e in &report.violations {
            text += &format!("  l = {:3}  zeta = {}\n", e.l, fmt_c(e.zeta));
        }
    }
    let value = json!({
        "S": report.s,
        "C": a.c,
        "C_fit": report.c_fit,
        "n_entries": report.n_entries,
        "l_range": report.l_range,
        "violations": report.violations,
    });
    emit(json, &value, text)
}

fn fit(json: bool, a: &FitArgs) -> Result<String, CliError> {
    let set = io::read_resonance_csv(&a.input)?;
    let (s_fit, stderr) = resonance::fit_cubic_slope(&set, a.l_lo, a.l_hi)?;
    let text = format!("S_fit = {s_fit}\nstderr = {stderr}\n");
    emit(
        json,
        &json!({ "S_fit": s_fit, "stderr": stderr, "l_lo": a.l_lo, "l_hi": a.l_hi }),
        text,
    )
}

fn model(json: bool, a: &ModelArgs) -> Result<String, CliError> {
    let bc = a.bc.build(a.gamma)?;
    if let Some(id) = &a.suite {
        let suite = Suite::parse(id)?;
        let report = airy_model::check_inequalities(suite, a.h, a.trials, a.seed)?;
        let mut text = format!(
            "{} h = {:e} trials = {} seed = {}: {}\n",
            report.suite,
            report.h,
            report.n,
            report.seed,
            if report.passed { "PASS" } else { "FAIL" }
        );
        if report.exact {
            text += &format!(
                "worst margin = {:.6e} (relative {:.6e}) at trial {}\n",
                report.worst_margin, report.worst_relative_margin, report.argmin_trial
            );
        }
        for (k, v) in &report.fitted_constants {
            text += &format!("{k} = {v:.6}\n");
        }
        return emit(json, &report, text);
    }
    if let Some(count) = a.eigs {
        let n = a.n.unwrap_or(2000);
        let eigs = airy_model::airy_realization_eigs(bc, count, n)?;
        let text = eigs.iter().map(|v| format!("{v:.8}\n")).collect();
        return emit(
            json,
            &json!({ "bc": io::bc_name(bc.kind), "n": 2 * n, "eigenvalues": eigs }),
            text,
        );
    }
    if a.sigma_min {
        let mut spec = ModelOperatorSpec::new(a.h, a.t_max, a.q_val, bc);
        spec.r_val = a.r_val;
        spec.eta_weight = a.eta_weight;
        let n = a.n.unwrap_or(2000);
        let op = airy_model::frozen_operator(&spec, n)?;
        let omega = C64::new(a.omega_re, a.omega_im);
        let sigma = airy_model::sigma_min(&op, omega)?;
        let text = format!(
            "sigma_min = {sigma:.8}\nexcess over Im omega = {:.8e}\n",
            sigma - a.omega_im
        );
        return emit(
            json,
            &json!({ "h": a.h, "n": 2 * n, "omega": [a.omega_re, a.omega_im], "sigma_min": sigma }),
            text,
        );
    }
    if a.rayleigh {
        let n = a.n.unwrap_or(2000);
        let lam = airy_model::min_rayleigh(bc, a.h, (a.c_d0, a.c_00), n)?;
        let scaled = lam / a.h.powf(2.0 / 3.0);
        let text = format!("min_rayleigh = {lam:.8e}\nscaled by h^(2/3) = {scaled:.8}\n");
        return emit(
            json,
            &json!({ "h": a.h, "n": n, "min_rayleigh": lam, "scaled": scaled }),
            text,
        );
    }
    unreachable!("clap enforces the task group")
}

fn symbol(json: bool, a: &SymbolArgs) -> Result<String, CliError> {
    let HessPreset::Ball = a.hess;
    let spec = ContourSpec::with_defaults(a.theta, a.l)?;
    let field = BallDistanceHessian::new(a.radius)?;
    let report = scaling::arg_window_check(&spec, &field, a.delta, a.samples)?;
    let text = format!("epsilon = {:.8}\nworst t = {:.6}\n", report.epsilon, report.worst_t);
    emit(json, &report, text)
}
