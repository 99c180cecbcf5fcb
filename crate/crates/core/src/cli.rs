//! Command-line front end. Units are converted here and nowhere else:
//! frequencies arrive in eV, distances in nm.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 convergence failure,
//! 3 domain error. Failures print a single `error[<kind>]: <reason>` line on
//! standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{find_peak, limit_diagnostics, sweep, LimitExperiment, SweepFamily, SweepScale, SweepSpec};
use crate::error::{Error, Result};
use crate::kernel::{shape_factor, Orientation};
use crate::output::{self, parse_number, ResultRow, Surface, RESULT_HEADER};
use crate::quadrature::{EtaTransform, QuadratureConfig, UTransform};
use crate::units::CONSTANTS;
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything that shapes a run besides the subcommand arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub quadrature: QuadratureConfig,
    pub format: OutputFormat,
    /// `None` lets the thread pool size itself.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { quadrature: QuadratureConfig::default(), format: OutputFormat::Csv, threads: None }
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let q = &mut self.quadrature;
        let bad = |what: &str| Error::Parse(format!("invalid value '{value}' for {what}"));
        match key {
            "rel_tol" => q.rel_tol = parse_number(value)?,
            "abs_tol" => q.abs_tol = parse_number(value)?,
            "max_subdivisions" => q.max_subdivisions = value.parse().map_err(|_| bad(key))?,
            "extrapolation_order" => q.extrapolation_order = value.parse().map_err(|_| bad(key))?,
            "regulator_sequence" => {
                q.regulator_sequence = value.split(',').map(parse_number).collect::<Result<Vec<_>>>()?;
            }
            "eta_transform" => {
                q.eta_transform = match value {
                    "reciprocal" => EtaTransform::Reciprocal,
                    "rational_stretch" => EtaTransform::RationalStretch,
                    _ => return Err(bad(key)),
                }
            }
            "u_transform" => {
                q.u_transform = match value {
                    "exp_weighted" => UTransform::ExpWeighted,
                    "tanh_sinh" => UTransform::TanhSinh,
                    _ => return Err(bad(key)),
                }
            }
            "format" => self.format = OutputFormat::from_str(value, true).map_err(|_| bad(key))?,
            "threads" => {
                self.threads = if value == "auto" { None } else { Some(value.parse().map_err(|_| bad(key))?) };
            }
            other => return Err(Error::Parse(format!("unknown configuration key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a line-based `key = value` file. Blank lines and `#` comments are ignored.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected 'key = value'", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config file {}: {e}", path.display())))?;
        self.apply_file_contents(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "spinshift", about = "Surface-induced shift of the electron spin magnetic moment", disable_version_flag = true)]
struct Cli {
    /// Print version, the real-axis TE constant and the physical constants.
    #[arg(long = "version", action = ArgAction::SetTrue)]
    version: bool,
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for sweeps and verification.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    rel_tol: Option<String>,
    #[arg(long, global = true)]
    abs_tol: Option<String>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Nondispersive,
    Plasma,
    Lorentz,
    Perfect,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrientationArg {
    Perp,
    Para,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Perp => Orientation::Perp,
            OrientationArg::Para => Orientation::Para,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Lorentz,
    Nondispersive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Sqrt,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentArg {
    NInfinityGrowth,
    OmegaTZeroVsPlasma,
    PlasmaSmallDistancePower,
    NonDispersiveDistancePower,
}

#[derive(Debug, Args)]
struct ShiftArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Refractive index (nondispersive).
    #[arg(long)]
    n: Option<String>,
    /// Plasma frequency in eV (plasma, lorentz).
    #[arg(long)]
    omega_p: Option<String>,
    /// Resonance frequency in eV (lorentz).
    #[arg(long)]
    omega_t: Option<String>,
    /// Distance from the surface in nm.
    #[arg(long)]
    z: String,
    #[arg(long, value_enum)]
    orientation: OrientationArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Dimensionless omega_T z.
    #[arg(long)]
    omega_t_z: String,
    /// `LO:HI:POINTS`.
    #[arg(long)]
    chi0: String,
    #[arg(long, value_enum)]
    orientation: OrientationArg,
    #[arg(long, value_enum, default_value = "lorentz")]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "linear")]
    scale: ScaleArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One shift evaluation.
    Shift(ShiftArgs),
    /// Lorentz and matched non-dispersive curves over chi0.
    Sweep(SweepArgs),
    /// Peak of |S| over chi0 at fixed omega_T z.
    Peak {
        #[arg(long)]
        omega_t_z: String,
        #[arg(long, value_enum)]
        orientation: OrientationArg,
    },
    /// Limit experiments.
    Limits {
        #[arg(long, value_enum)]
        experiment: ExperimentArg,
    },
    /// Acceptance battery; exit status 0 iff every criterion passes.
    Verify {
        #[arg(long)]
        fast: bool,
    },
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Config(_) => 1,
        Error::Convergence { .. } => 2,
        Error::Domain(_) | Error::NoPeak { .. } => 3,
    }
}

/// Runs the CLI with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let reason = e.kind().to_string();
            let detail = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "error[usage]: {reason}: {detail}");
            return 1;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
            exit_code(&e)
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(t) = cli.threads {
        config.threads = Some(t);
    }
    if let Some(v) = &cli.rel_tol {
        config.quadrature.rel_tol = parse_number(v)?;
    }
    if let Some(v) = &cli.abs_tol {
        config.quadrature.abs_tol = parse_number(v)?;
    }
    if let Some(v) = cli.max_subdivisions {
        config.quadrature.max_subdivisions = v;
    }
    config.validate()?;
    Ok(config)
}

fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?
            .install(job),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    if cli.version {
        writeln!(out, "{}", output::version_text()).map_err(io)?;
        return Ok(0);
    }
    let config = build_config(&cli)?;
    let Some(command) = cli.command else {
        return Err(Error::Parse("a subcommand is required (shift, sweep, peak, limits, verify)".into()));
    };
    let config_json = serde_json::to_value(&config).map_err(|e| Error::Config(e.to_string()))?;
    let q = &config.quadrature;
    match command {
        Command::Shift(args) => {
            let surface = surface_from_args(&args)?;
            let z = parse_number(&args.z)?;
            let orientation = Orientation::from(args.orientation);
            let query = crate::kernel::Query::new(surface.to_model(&CONSTANTS), z, orientation);
            let result = shape_factor(&query, q)?;
            let row = ResultRow::new(surface, z, orientation, &result);
            match config.format {
                OutputFormat::Csv => writeln!(out, "{RESULT_HEADER}\n{}", row.to_csv()),
                OutputFormat::Json => writeln!(out, "{}", row.to_json(&CONSTANTS, config_json)),
            }
            .map_err(io)?;
        }
        Command::Sweep(args) => {
            let omega_t_z = parse_number(&args.omega_t_z)?;
            let (lo, hi, points) = parse_range(&args.chi0)?;
            let spec = SweepSpec {
                family: match args.family {
                    FamilyArg::Lorentz => SweepFamily::LorentzAtFixedOmegaTz,
                    FamilyArg::Nondispersive => SweepFamily::NonDispersive,
                },
                omega_t_z,
                chi0_range: (lo, hi),
                points,
                orientation: args.orientation.into(),
                scale: match args.scale {
                    ScaleArg::Linear => SweepScale::Linear,
                    ScaleArg::Sqrt => SweepScale::SqrtChi0,
                },
            };
            let pts = with_threads(config.threads, || sweep(&spec, q))?;
            match config.format {
                OutputFormat::Csv => write!(out, "{}", output::sweep_csv(&pts)),
                OutputFormat::Json => writeln!(out, "{}", json!({ "sweep": spec, "points": pts, "constants": CONSTANTS, "config": config_json })),
            }
            .map_err(io)?;
        }
        Command::Peak { omega_t_z, orientation } => {
            let omega_t_z = parse_number(&omega_t_z)?;
            let orientation = Orientation::from(orientation);
            let peak = with_threads(config.threads, || find_peak(omega_t_z, orientation, q))?;
            match config.format {
                OutputFormat::Csv => write!(out, "{}", output::peak_csv(omega_t_z, orientation, &peak)),
                OutputFormat::Json => writeln!(out, "{}", json!({ "omega_T_z": omega_t_z, "orientation": orientation, "peak": peak, "config": config_json })),
            }
            .map_err(io)?;
        }
        Command::Limits { experiment } => {
            let experiment = match experiment {
                ExperimentArg::NInfinityGrowth => LimitExperiment::NInfinityGrowth,
                ExperimentArg::OmegaTZeroVsPlasma => LimitExperiment::OmegaTZeroVsPlasma,
                ExperimentArg::PlasmaSmallDistancePower => LimitExperiment::PlasmaSmallDistancePower,
                ExperimentArg::NonDispersiveDistancePower => LimitExperiment::NonDispersiveDistancePower,
            };
            let report = with_threads(config.threads, || limit_diagnostics(experiment, q))?;
            match config.format {
                OutputFormat::Csv => write!(out, "{}", output::limits_csv(&report)),
                OutputFormat::Json => writeln!(out, "{}", json!({ "report": report, "config": config_json })),
            }
            .map_err(io)?;
        }
        Command::Verify { fast } => {
            let outcomes = with_threads(config.threads, || Ok(verify::run_all(fast)))?;
            let mut all = true;
            for o in &outcomes {
                writeln!(out, "{}", o.line()).map_err(io)?;
                all &= o.pass;
            }
            return Ok(if all { 0 } else { 4 });
        }
    }
    Ok(0)
}

fn surface_from_args(args: &ShiftArgs) -> Result<Surface> {
    let need = |v: &Option<String>, flag: &str| -> Result<f64> {
        let token = v
            .as_deref()
            .ok_or_else(|| Error::Parse(format!("--{flag} is required for model {:?}", args.model).to_lowercase()))?;
        parse_number(token)
    };
    let surface = match args.model {
        ModelArg::Nondispersive => Surface::NonDispersive { n: need(&args.n, "n")? },
        ModelArg::Plasma => Surface::Plasma { omega_p_ev: need(&args.omega_p, "omega-p")? },
        ModelArg::Lorentz => Surface::Lorentz {
            omega_p_ev: need(&args.omega_p, "omega-p")?,
            omega_t_ev: need(&args.omega_t, "omega-t")?,
        },
        ModelArg::Perfect => Surface::Perfect,
    };
    Ok(surface)
}

/// `LO:HI:POINTS`.
pub fn parse_range(token: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = token.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected LO:HI:POINTS, got '{token}'")));
    }
    let points = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad point count '{}'", parts[2])))?;
    Ok((parse_number(parts[0])?, parse_number(parts[1])?, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("spinshift").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_file_parsing() {
        let mut c = RunConfig::default();
        c.apply_file_contents("# tolerances\nrel_tol = 1e-6\nformat = json\nthreads = 2\nregulator_sequence = 0.5, 0.25, 0.125, 0.0625\n")
            .unwrap();
        assert_eq!(c.quadrature.rel_tol, 1e-6);
        assert_eq!(c.format, OutputFormat::Json);
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.quadrature.regulator_sequence.len(), 4);
        assert!(c.apply_file_contents("bogus = 1").is_err());
        assert!(c.apply_file_contents("rel_tol 1").is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:100:11").unwrap(), (0.0, 100.0, 11));
        assert!(parse_range("0:100").is_err());
    }

    #[test]
    fn vacuum_shift() {
        let (code, out, _) = run_capture(&["shift", "--model", "nondispersive", "--n", "1", "--z", "10", "--orientation", "perp"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!((fields[8], fields[9]), ("0", "0"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["shift", "--model", "plasma", "--z", "10", "--orientation", "perp"]).0, 1);
        assert_eq!(run_capture(&["shift", "--model", "nondispersive", "--n", "x", "--z", "1", "--orientation", "perp"]).0, 1);
        let (code, _, err) = run_capture(&["shift", "--model", "nondispersive", "--n", "0.5", "--z", "1", "--orientation", "perp"]);
        assert_eq!(code, 3);
        assert!(err.starts_with("error[domain]:") && err.trim_end().lines().count() == 1, "{err}");
        let (code, _, _) = run_capture(&["--max-subdivisions", "1", "--rel-tol", "1e-14", "shift", "--model", "lorentz", "--omega-p", "1", "--omega-t", "0.01", "--z", "10", "--orientation", "perp"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn version_lists_constants() {
        let (code, out, _) = run_capture(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains("te_real_axis_constant = -1"));
        assert!(out.contains("hbar_c_eV_nm = 197.3269804"));
    }
}
