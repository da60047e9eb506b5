//! Command-line front end.
//!
//! Every command reads a config file and writes CSV to standard output.
//! Floats are printed with nine significant digits in lowercase scientific
//! notation. Exit codes: 0 success, 2 config or usage error, 3 missing
//! roots, 4 finite-difference mismatch.
//!
//! [`run`] does all the work and returns the produced text, so the binary
//! is a thin wrapper and tests can drive the commands in process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{parse_formulation, RunConfig, SweepParam, SweepSpec};
use crate::fd::{discretize, oracle_frequencies};
use crate::model::{Formulation, ValidatedModel};
use crate::reference;
use crate::solver::{mode_shape, natural_frequencies, Spectrum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ROOTS: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

/// Environment variable consulted when `--threads` is not given.
pub const THREADS_ENV: &str = "ARCHFREQ_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "archfreq",
    version,
    about = "Natural frequencies of stepped, cracked nano-arches"
)]
pub struct Cli {
    /// Worker threads (default: ARCHFREQ_THREADS, else one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Override the config's [model].formulation (reduced or consistent).
    #[arg(long, global = true, value_parser = parse_formulation)]
    pub formulation: Option<Formulation>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Natural frequencies in the configured window.
    Solve { config: PathBuf },
    /// Frequencies over a range of one parameter.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: Option<SweepParam>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Sampled mode shape, normalized to max |x| = 1.
    Modeshape {
        config: PathBuf,
        /// 1-based mode number.
        #[arg(long, default_value_t = 1)]
        mode: usize,
        /// Samples per segment, endpoints included.
        #[arg(long, default_value_t = 51)]
        samples: usize,
    },
    /// Compare determinant roots with a finite-difference solution.
    OracleCheck {
        config: PathBuf,
        /// Grid nodes per radian (default: [solver].oracle_nodes).
        #[arg(long)]
        nodes: Option<usize>,
        /// Largest accepted relative difference (default: [solver].oracle_threshold).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Compare against the tabulated uniform-arch normalized frequencies.
    Table1 {
        config: PathBuf,
        /// Use the radius fitted to the tabulated ratios instead of [geometry].radius.
        #[arg(long)]
        fit_radius: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String, stderr: String) -> Self {
        Self {
            stdout,
            stderr,
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code,
        }
    }
}

/// Exit code and message of a failed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure(pub i32, pub String);

impl From<Failure> for Output {
    fn from(Failure(code, message): Failure) -> Self {
        Output::fail(code, message)
    }
}

impl<E: std::fmt::Display> From<(i32, E)> for Failure {
    fn from((code, e): (i32, E)) -> Self {
        Failure(code, e.to_string())
    }
}

pub type CmdResult = std::result::Result<Output, Failure>;

pub fn fmt_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Output::ok(text, String::new())
            };
        }
    };
    execute(&cli)
}

fn thread_count(cli: &Cli) -> std::result::Result<usize, String> {
    if let Some(n) = cli.threads {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got '{v}'")),
        _ => Ok(0),
    }
}

/// Runs a parsed command on a pool of the requested size.
pub fn execute(cli: &Cli) -> Output {
    let threads = match thread_count(cli) {
        Ok(n) => n,
        Err(e) => return Output::fail(EXIT_CONFIG, e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Output::fail(EXIT_CONFIG, e),
    };
    let result = pool.install(|| match &cli.command {
        Command::Solve { config } => cmd_solve(&load(config, cli)?),
        Command::Sweep {
            config,
            param,
            from,
            to,
            steps,
        } => {
            let c = load(config, cli)?;
            let spec = sweep_spec(&c, *param, *from, *to, *steps)?;
            cmd_sweep(&c, &spec)
        }
        Command::Modeshape {
            config,
            mode,
            samples,
        } => cmd_modeshape(&load(config, cli)?, *mode, *samples),
        Command::OracleCheck {
            config,
            nodes,
            threshold,
        } => {
            let c = load(config, cli)?;
            let nodes = nodes.unwrap_or(c.solver.oracle_nodes);
            let threshold = threshold.unwrap_or(c.solver.oracle_threshold);
            cmd_oracle_check(&c, nodes, threshold)
        }
        Command::Table1 { config, fit_radius } => cmd_table1(&load(config, cli)?, *fit_radius),
    });
    result.unwrap_or_else(Output::from)
}

fn load(path: &PathBuf, cli: &Cli) -> std::result::Result<RunConfig, Failure> {
    let mut config = RunConfig::load(path)
        .map_err(|e| Failure(EXIT_CONFIG, format!("{}\n{e}", path.display())))?;
    if let Some(f) = cli.formulation {
        config.options.formulation = f;
    }
    Ok(config)
}

fn prepare(config: &RunConfig) -> std::result::Result<ValidatedModel, Failure> {
    config
        .validated()
        .map_err(|e| Failure(EXIT_CONFIG, e.to_string()))
}

fn solve(v: &ValidatedModel) -> std::result::Result<Spectrum, Failure> {
    natural_frequencies(&v.model, &v.solver).map_err(|e| Failure(EXIT_ROOTS, e.to_string()))
}

fn shortfall_warning(v: &ValidatedModel, spectrum: &Spectrum, stderr: &mut String) {
    if !spectrum.is_complete() {
        let _ = writeln!(
            stderr,
            "warning: found {} of {} requested modes in [{}, {}] rad/s",
            spectrum.modes.len(),
            spectrum.requested,
            fmt_float(v.solver.omega_min),
            fmt_float(v.solver.omega_max)
        );
    }
}

fn crack_notes(v: &ValidatedModel, stderr: &mut String) {
    for i in 0..v.model.geometry().interface_count() {
        if let Some(crack) = v.model.resolved_crack(i) {
            if crack.fracture.is_some() {
                let name = match crack.spec.shape_function {
                    crate::ShapeFunction::RizosPolynomial => "polynomial (Rizos)",
                    crate::ShapeFunction::TadaTrigonometric => "trigonometric (Tada)",
                };
                let _ = writeln!(
                    stderr,
                    "note: crack at interface {i} uses the {name} shape function, C = {} rad/(N m)",
                    fmt_float(crack.compliance)
                );
            }
        }
    }
}

/// `mode_index,omega_rad_s,omega_bar,K_seg0,…,residual`.
pub fn cmd_solve(config: &RunConfig) -> CmdResult {
    let v = prepare(config)?;
    let spectrum = solve(&v)?;
    let mut stderr = String::new();
    crack_notes(&v, &mut stderr);
    if spectrum.modes.is_empty() {
        return Err(Failure(
            EXIT_ROOTS,
            format!(
                "no natural frequency found in [{}, {}] rad/s",
                fmt_float(v.solver.omega_min),
                fmt_float(v.solver.omega_max)
            ),
        ));
    }
    shortfall_warning(&v, &spectrum, &mut stderr);
    let mut out = String::from("mode_index,omega_rad_s,omega_bar");
    for j in 0..v.model.segment_count() {
        let _ = write!(out, ",K_seg{j}");
    }
    out.push_str(",residual\n");
    for m in &spectrum.modes {
        let _ = write!(
            out,
            "{},{},{}",
            m.mode_index,
            fmt_float(m.omega),
            fmt_float(m.omega_bar)
        );
        for k in &m.k_values {
            let _ = write!(out, ",{}", fmt_float(*k));
        }
        let _ = writeln!(out, ",{}", fmt_float(m.residual));
    }
    Ok(Output::ok(out, stderr))
}

fn sweep_spec(
    config: &RunConfig,
    param: Option<SweepParam>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
) -> std::result::Result<SweepSpec, Failure> {
    let base = config.sweep;
    let spec = (|| {
        Some(SweepSpec {
            param: param.or(base.map(|s| s.param))?,
            from: from.or(base.map(|s| s.from))?,
            to: to.or(base.map(|s| s.to))?,
            steps: steps.or(base.map(|s| s.steps))?,
        })
    })()
    .ok_or_else(|| {
        Failure(
            EXIT_CONFIG,
            "sweep needs --param, --from, --to and --steps or a [sweep] section".into(),
        )
    })?;
    spec.check()
        .map_err(|e| Failure(EXIT_CONFIG, format!("invalid sweep range: {e}")))?;
    Ok(spec)
}

/// `param_value,mode_index,omega_rad_s,omega_bar`, ordered by parameter value.
pub fn cmd_sweep(config: &RunConfig, spec: &SweepSpec) -> CmdResult {
    let values = spec.values();
    let points: Vec<std::result::Result<(ValidatedModel, Spectrum), Failure>> = values
        .par_iter()
        .map(|&value| {
            let c = config
                .with_param(spec.param, value)
                .map_err(|e| Failure(EXIT_CONFIG, e))?;
            let v = c.validated().map_err(|e| {
                Failure(
                    EXIT_CONFIG,
                    format!("{} = {}: {e}", spec.param, fmt_float(value)),
                )
            })?;
            let s = solve(&v)?;
            Ok((v, s))
        })
        .collect();
    let mut out = String::from("param_value,mode_index,omega_rad_s,omega_bar\n");
    let mut stderr = String::new();
    let mut rows = 0;
    for (value, point) in values.iter().zip(points) {
        let (v, spectrum) = point?;
        if !spectrum.is_complete() {
            let _ = write!(stderr, "{} = {}: ", spec.param, fmt_float(*value));
            shortfall_warning(&v, &spectrum, &mut stderr);
        }
        for m in &spectrum.modes {
            rows += 1;
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_float(*value),
                m.mode_index,
                fmt_float(m.omega),
                fmt_float(m.omega_bar)
            );
        }
    }
    if rows == 0 {
        return Err(Failure(
            EXIT_ROOTS,
            "no natural frequency found at any sweep point".into(),
        ));
    }
    Ok(Output::ok(out, stderr))
}

/// `phi,x` for `samples` points per segment; interface angles appear once per side.
pub fn cmd_modeshape(config: &RunConfig, mode: usize, samples: usize) -> CmdResult {
    if samples < 2 {
        return Err(Failure(EXIT_CONFIG, "--samples must be at least 2".into()));
    }
    if mode == 0 {
        return Err(Failure(EXIT_CONFIG, "--mode is 1-based".into()));
    }
    let v = prepare(config)?;
    let spectrum = solve(&v)?;
    let Some(m) = spectrum.modes.get(mode - 1) else {
        return Err(Failure(
            EXIT_ROOTS,
            format!(
                "mode {mode} not found ({} modes in the window)",
                spectrum.modes.len()
            ),
        ));
    };
    let shape = mode_shape(&v.model, m.omega, samples).map_err(|e| (EXIT_ROOTS, e))?;
    let mut out = String::from("phi,x\n");
    for s in &shape.samples {
        let _ = writeln!(out, "{},{}", fmt_float(s.phi), fmt_float(s.x));
    }
    Ok(Output::ok(out, String::new()))
}

/// `mode,omega_det,omega_fd,rel_err`; exit 4 when any difference exceeds `threshold`.
pub fn cmd_oracle_check(config: &RunConfig, nodes: usize, threshold: f64) -> CmdResult {
    let v = prepare(config)?;
    let spectrum = solve(&v)?;
    if spectrum.modes.is_empty() {
        return Err(Failure(
            EXIT_ROOTS,
            "no natural frequency found to compare".into(),
        ));
    }
    let pair = discretize(&v.model, nodes).map_err(|e| (EXIT_CONFIG, e))?;
    let fd = oracle_frequencies(&pair, spectrum.modes.len(), v.solver.omega_min)
        .map_err(|e| (EXIT_ORACLE, e))?;
    let mut out = String::from("mode,omega_det,omega_fd,rel_err\n");
    let mut worst: f64 = 0.0;
    for (m, w) in spectrum.modes.iter().zip(&fd) {
        let rel = (w - m.omega).abs() / m.omega;
        worst = worst.max(rel);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            m.mode_index,
            fmt_float(m.omega),
            fmt_float(*w),
            fmt_float(rel)
        );
    }
    let mut stderr = String::new();
    let mut code = EXIT_OK;
    if fd.len() < spectrum.modes.len() {
        let _ = writeln!(
            stderr,
            "error: finite-difference model gave {} of {} modes",
            fd.len(),
            spectrum.modes.len()
        );
        code = EXIT_ORACLE;
    }
    if worst > threshold {
        let _ = writeln!(
            stderr,
            "error: largest relative difference {} exceeds threshold {}",
            fmt_float(worst),
            fmt_float(threshold)
        );
        code = EXIT_ORACLE;
    }
    Ok(Output {
        stdout: out,
        stderr,
        code,
    })
}

/// One row per tabulated η: computed and tabulated ω̄, ratios and deviations.
pub fn cmd_table1(config: &RunConfig, fit_radius: bool) -> CmdResult {
    if config.options.formulation != Formulation::Consistent {
        return Err(Failure(
            EXIT_CONFIG,
            "table1 requires formulation = consistent; the reduced equation does not \
             reproduce the tabulated ratios"
                .into(),
        ));
    }
    if config.geometry.segments.len() != 1 || !config.cracks.is_empty() {
        return Err(Failure(
            EXIT_CONFIG,
            "table1 requires a uniform arch (one thickness, no [crack] sections)".into(),
        ));
    }
    let mut base = config.clone();
    if fit_radius {
        base.geometry.radius = reference::fit_radius(base.geometry.central_angle);
    }
    let radius = base.geometry.radius;
    let computed: Vec<std::result::Result<f64, Failure>> = reference::ETA_NM2
        .par_iter()
        .map(|&eta| {
            let mut c = base.clone();
            c.material.nonlocal_eta = eta * 1e-18;
            let v = prepare(&c)?;
            let s = solve(&v)?;
            s.modes
                .first()
                .map(|m| m.omega_bar)
                .ok_or_else(|| Failure(EXIT_ROOTS, format!("no first mode for eta = {eta} nm^2")))
        })
        .collect();
    let computed = computed
        .into_iter()
        .collect::<std::result::Result<Vec<f64>, Failure>>()?;
    let table_ratios = reference::ratios();
    let mut out = String::from(
        "eta_nm2,omega_bar,ratio,table_omega_bar,table_ratio,rel_dev_omega_bar,rel_dev_ratio,radius_m\n",
    );
    for i in 0..computed.len() {
        let ratio = computed[i] / computed[0];
        let table = reference::OMEGA_BAR[i];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_float(reference::ETA_NM2[i]),
            fmt_float(computed[i]),
            fmt_float(ratio),
            fmt_float(table),
            fmt_float(table_ratios[i]),
            fmt_float(computed[i] / table - 1.0),
            fmt_float(ratio / table_ratios[i] - 1.0),
            fmt_float(radius)
        );
    }
    Ok(Output::ok(out, String::new()))
}
