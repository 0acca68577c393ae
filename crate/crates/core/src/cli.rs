//! Command-line front end: spectrum caching and CSV/JSON tables.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::asymptotics::{fermi_energy_weyl, riemann_zeta, tc_upper_bound};
use crate::bessel::{self, BesselOrder, ZeroIndex};
use crate::cache::{self, Cache};
use crate::error::Error;
use crate::spectrum::Spectrum;
use crate::thermo::{self, Statistics};
use crate::weyl::{gamma_half_integer, unit_ball_volume, weyl_residual};

/// Exit status for invalid arguments or unusable files.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: u8 = 3;
/// Exit status when the spectrum cutoff cannot support the request.
pub const EXIT_CUTOFF: u8 = 4;

/// Multiples of the largest temperature kept between the chemical potential and the cutoff.
pub const AUTO_TAIL_WIDTH: f64 = 60.0;
const AUTO_ATTEMPTS: usize = 8;
const AUTO_GROWTH: f64 = 1.5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Run { context: String, source: Error },
}

impl CliError {
    fn run(context: impl Into<String>, source: Error) -> Self {
        CliError::Run { context: context.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Run { source, .. } => match source {
                Error::Io(_) | Error::Format(_) | Error::UnsupportedDimension(_) => EXIT_CONFIG,
                Error::Cutoff(_) | Error::Capacity(_) | Error::Range(_) => EXIT_CUTOFF,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError::run("error", source)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Spectrum cutoff: a fixed energy or sized from the request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EMax {
    Auto,
    Fixed(f64),
}

impl FromStr for EMax {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(EMax::Auto);
        }
        match s.parse::<f64>() {
            Ok(e) if e > 0.0 && e.is_finite() => Ok(EMax::Fixed(e)),
            _ => Err(format!("expected a positive energy or `auto`, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Bose,
    Fermi,
}

impl From<StatArg> for Statistics {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Bose => Statistics::Bose,
            StatArg::Fermi => Statistics::Fermi,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperball", version, about = "Ideal quantum gases in a D-dimensional spherical box")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or load the single-particle spectrum and store it in the cache format.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Particle numbers the spectrum must hold (used by `--emax auto`).
        #[arg(long, value_delimiter = ',')]
        n: Vec<f64>,
    },
    /// Thermodynamic quantities on a temperature grid at fixed N.
    Thermo {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        stat: StatArg,
        #[arg(long)]
        n: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bose condensation temperature for each N.
    TcScan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<f64>,
    },
    /// Fermi energy for each N against the Weyl estimate.
    FermiScan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Exact staircase against the two-term Weyl estimate on a wavenumber grid.
    Weyl {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        kmin: f64,
        #[arg(long)]
        kmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub dim: u32,
    /// Spectrum cutoff in units of E_s, or `auto`.
    #[arg(long, default_value = "auto")]
    pub emax: EMax,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, env = "HYPERBALL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

/// Temperatures in units of the reference temperature (T_F for fermions, T_c for bosons).
#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Logarithmic spacing.
    #[arg(long)]
    pub log: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize, log: bool) -> CliResult<Self> {
        let spacing = if log { Spacing::Log } else { Spacing::Linear };
        if points == 0 {
            return Err(CliError::Config("grid needs at least one point".into()));
        }
        if !(min > 0.0) || !max.is_finite() || !(min <= max) {
            return Err(CliError::Config(format!("grid bounds must satisfy 0 < min ≤ max, got [{min}, {max}]")));
        }
        Ok(Self { min, max, points, spacing })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}

/// Validated settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub dim: u32,
    pub stat: Statistics,
    pub n: Vec<f64>,
    pub t_grid: Option<Grid>,
    pub e_max: EMax,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    fn from_common(common: &CommonArgs, stat: Statistics, n: Vec<f64>) -> CliResult<Self> {
        if common.dim < 2 {
            return Err(CliError::Config(format!("--dim must be at least 2, got {}", common.dim)));
        }
        if let Some(bad) = n.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
            return Err(CliError::Config(format!("particle numbers must be positive, got {bad}")));
        }
        Ok(Self {
            dim: common.dim,
            stat,
            n,
            t_grid: None,
            e_max: common.emax,
            output_path: common.out.clone(),
            format: common.format,
            cache_dir: common.cache_dir.clone(),
        })
    }

    fn n_max(&self) -> f64 {
        self.n.iter().copied().fold(0.0, f64::max)
    }

    fn spectrum(&self, e_max: f64) -> crate::Result<Spectrum> {
        match &self.cache_dir {
            Some(dir) => Cache::new(dir)?.get_or_build(self.dim, e_max),
            None => Spectrum::build(self.dim, e_max),
        }
    }

    /// Run `job` on a spectrum; under `--emax auto` grow the cutoff while it
    /// reports an inadequate cutoff.
    fn with_spectrum<T>(
        &self,
        estimate: f64,
        job: impl Fn(&Spectrum) -> CliResult<T>,
    ) -> CliResult<T> {
        match self.e_max {
            EMax::Fixed(e) => job(&self.spectrum(e).map_err(|err| CliError::run("building spectrum", err))?),
            EMax::Auto => {
                let mut e = estimate;
                for attempt in 1..=AUTO_ATTEMPTS {
                    let spec = self.spectrum(e).map_err(|err| CliError::run("building spectrum", err))?;
                    match job(&spec) {
                        Err(CliError::Run { source: Error::Cutoff(_) | Error::Capacity(_), .. })
                            if attempt < AUTO_ATTEMPTS =>
                        {
                            e *= AUTO_GROWTH;
                        }
                        other => return other,
                    }
                }
                unreachable!("the final attempt returns")
            }
        }
    }
}

/// Energy of the lowest level in dimension `dim`.
pub fn ground_energy(dim: u32) -> crate::Result<f64> {
    let j = bessel::zero(BesselOrder::from_twice(dim - 2), ZeroIndex::new(1)?)?;
    Ok(j * j)
}

/// Thermodynamic-limit estimate of `T_c` (D ≥ 3) or the upper bound (D = 2).
pub fn critical_temperature_estimate(dim: u32, n: f64) -> crate::Result<f64> {
    if dim == 2 {
        return tc_upper_bound(2, n);
    }
    // N = c_D a Γ(a) ζ(a) T^a with a = D/2 and c_D = ω_D²/(2π)^D
    let a = f64::from(dim) / 2.0;
    let omega = unit_ball_volume(dim);
    let c = omega * omega / (2.0 * std::f64::consts::PI).powi(dim as i32);
    Ok((n / (c * a * gamma_half_integer(dim) * riemann_zeta(a)?)).powf(1.0 / a))
}

/// Cutoff estimate `max(μ + 60·T_max, 1.5·E_F, 2·E_0)` from closed-form estimates
/// of `μ`, `E_F` and the reference temperature.
pub fn auto_e_max(dim: u32, stat: Statistics, n: f64, t_max_over_ref: f64) -> crate::Result<f64> {
    let e_f = fermi_energy_weyl(dim, n);
    let (mu, t_ref) = match stat {
        Statistics::Fermi => (e_f, e_f),
        // the wall removes low states and pushes the finite-N T_c above the bulk value
        Statistics::Bose => (0.0, 1.5 * critical_temperature_estimate(dim, n)?),
    };
    Ok((mu + AUTO_TAIL_WIDTH * t_max_over_ref * t_ref).max(1.5 * e_f).max(2.0 * ground_energy(dim)?))
}

/// `T_F(n)` for fermions, `T_c(n)` for bosons.
pub fn reference_temperature(spec: &Spectrum, stat: Statistics, n: f64) -> crate::Result<f64> {
    match stat {
        Statistics::Fermi => thermo::fermi_temperature(spec, n.ceil() as u64),
        Statistics::Bose => thermo::critical_temperature(spec, n),
    }
}

#[derive(Clone, Debug)]
enum Cell {
    Float(f64),
    Int(u64),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

pub const THERMO_HEADER: &[&str] = &[
    "T_over_Ts",
    "T_over_Tref",
    "mu_over_Es",
    "N",
    "E_over_Es",
    "W_over_Es",
    "S_over_kB",
    "P",
    "Cv_over_kB",
    "condensate_fraction",
];
pub const TC_HEADER: &[&str] = &["N", "Tc_over_Ts", "bound"];
pub const FERMI_HEADER: &[&str] = &["N", "EF_over_Es", "weyl_prediction"];
pub const WEYL_HEADER: &[&str] = &["k", "exact", "weyl", "residual"];

impl Table {
    fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                let io = |e: csv::Error| CliError::run("writing CSV", Error::Io(e.into()));
                w.write_record(self.header).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text)).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::run("writing CSV", Error::Io(e.into_error())))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows)
                    .map_err(|e| CliError::run("writing JSON", Error::Io(e.into())))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn emit(bytes: &[u8], path: Option<&PathBuf>) -> CliResult<()> {
    let context = |p: &str| format!("writing {p}");
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::run(context(&p.display().to_string()), e.into())),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::run(context("standard output"), e.into())),
    }
}

/// Evaluate grid points concurrently; the first failure in grid order wins.
fn ordered<T: Send, U: Sync>(
    points: &[U],
    f: impl Fn(&U) -> CliResult<T> + Sync + Send,
) -> CliResult<Vec<T>> {
    points.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

fn cmd_spectrum(cfg: &RunConfig) -> CliResult<()> {
    if cfg.output_path.is_none() && cfg.cache_dir.is_none() {
        return Err(CliError::Config("spectrum needs --out or --cache-dir".into()));
    }
    if cfg.e_max == EMax::Auto && cfg.n.is_empty() {
        return Err(CliError::Config("`--emax auto` needs --n to size the spectrum".into()));
    }
    let estimate = if cfg.n.is_empty() { 0.0 } else { auto_e_max(cfg.dim, Statistics::Fermi, cfg.n_max(), 0.0)? };
    let spec = cfg.with_spectrum(estimate, |spec| {
        for &n in &cfg.n {
            spec.fermi_energy(n.ceil() as u64).map_err(|e| CliError::run(format!("holding N = {n}"), e))?;
        }
        Ok(spec.clone())
    })?;
    if let Some(dir) = &cfg.cache_dir {
        let stored = Cache::new(dir).and_then(|c| c.store(&spec));
        let path = stored.map_err(|e| CliError::run(format!("caching into {}", dir.display()), e))?;
        eprintln!("cached {}", path.display());
    }
    if let Some(path) = &cfg.output_path {
        cache::write(&spec, path).map_err(|e| CliError::run(format!("writing {}", path.display()), e))?;
    }
    let ground = spec.ground();
    println!("dim {}", spec.dim());
    println!("e_max {}", spec.e_max());
    println!("levels {}", spec.levels().len());
    println!("total_states {}", spec.total_states());
    println!("ground_energy {:.16e}", ground.energy);
    Ok(())
}

fn cmd_thermo(cfg: &RunConfig) -> CliResult<()> {
    let grid = cfg.t_grid.as_ref().expect("thermo config carries a grid");
    let n = cfg.n[0];
    let ts = grid.values();
    let estimate = auto_e_max(cfg.dim, cfg.stat, n, grid.max)?;
    let table = cfg.with_spectrum(estimate, |spec| {
        let t_ref = reference_temperature(spec, cfg.stat, n)
            .map_err(|e| CliError::run(format!("reference temperature for N = {n}"), e))?;
        let rows = ordered(&ts, |&t| {
            let temperature = t * t_ref;
            let p = thermo::thermo_point(spec, n, temperature, cfg.stat, true).map_err(|e| {
                CliError::run(format!("grid point T/T_ref = {t} (T = {temperature})"), e)
            })?;
            Ok(vec![
                Cell::Float(temperature),
                Cell::Float(t),
                Cell::Float(p.mu),
                Cell::Float(p.n_achieved),
                Cell::Float(p.energy),
                Cell::Float(p.grand_potential),
                Cell::Float(p.entropy),
                Cell::Float(p.pressure),
                p.heat_capacity.into(),
                p.condensate_fraction.into(),
            ])
        })?;
        Ok(Table { header: THERMO_HEADER, rows })
    })?;
    emit(&table.render(cfg.format)?, cfg.output_path.as_ref())
}

fn cmd_tc_scan(cfg: &RunConfig) -> CliResult<()> {
    let estimate = auto_e_max(cfg.dim, Statistics::Bose, cfg.n_max(), 1.0)?;
    let table = cfg.with_spectrum(estimate, |spec| {
        let rows = ordered(&cfg.n, |&n| {
            let tc = thermo::critical_temperature(spec, n)
                .map_err(|e| CliError::run(format!("grid point N = {n}"), e))?;
            Ok(vec![Cell::Float(n), Cell::Float(tc), tc_upper_bound(cfg.dim, n).ok().into()])
        })?;
        Ok(Table { header: TC_HEADER, rows })
    })?;
    emit(&table.render(cfg.format)?, cfg.output_path.as_ref())
}

fn cmd_fermi_scan(cfg: &RunConfig, ns: &[u64]) -> CliResult<()> {
    let estimate = auto_e_max(cfg.dim, Statistics::Fermi, cfg.n_max(), 0.0)?;
    let table = cfg.with_spectrum(estimate, |spec| {
        let rows = ns
            .iter()
            .map(|&n| {
                let ef = spec.fermi_energy(n).map_err(|e| CliError::run(format!("grid point N = {n}"), e))?;
                Ok(vec![Cell::Int(n), Cell::Float(ef), Cell::Float(fermi_energy_weyl(cfg.dim, n as f64))])
            })
            .collect::<CliResult<_>>()?;
        Ok(Table { header: FERMI_HEADER, rows })
    })?;
    emit(&table.render(cfg.format)?, cfg.output_path.as_ref())
}

fn cmd_weyl(cfg: &RunConfig, ks: &Grid) -> CliResult<()> {
    let k = ks.values();
    let e_max = ks.max * ks.max;
    let table = cfg.with_spectrum(e_max.max(2.0 * ground_energy(cfg.dim)?), |spec| {
        let rows = weyl_residual(spec, &k)
            .map_err(|e| CliError::run(format!("wavenumber grid up to k = {}", ks.max), e))?
            .into_iter()
            .map(|p| vec![Cell::Float(p.k), Cell::Int(p.exact), Cell::Float(p.weyl), Cell::Float(p.residual)])
            .collect();
        Ok(Table { header: WEYL_HEADER, rows })
    })?;
    emit(&table.render(cfg.format)?, cfg.output_path.as_ref())
}

/// Execute a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum { common, n } => cmd_spectrum(&RunConfig::from_common(&common, Statistics::Fermi, n)?),
        Command::Thermo { common, stat, n, grid } => {
            let mut cfg = RunConfig::from_common(&common, stat.into(), vec![n])?;
            cfg.t_grid = Some(Grid::new(grid.tmin, grid.tmax, grid.points, grid.log)?);
            cmd_thermo(&cfg)
        }
        Command::TcScan { common, n } => cmd_tc_scan(&RunConfig::from_common(&common, Statistics::Bose, n)?),
        Command::FermiScan { common, n } => {
            if n.contains(&0) {
                return Err(CliError::Config("particle numbers must be positive".into()));
            }
            let as_real = n.iter().map(|&v| v as f64).collect();
            cmd_fermi_scan(&RunConfig::from_common(&common, Statistics::Fermi, as_real)?, &n)
        }
        Command::Weyl { common, kmin, kmax, points, log } => {
            let cfg = RunConfig::from_common(&common, Statistics::Fermi, Vec::new())?;
            cmd_weyl(&cfg, &Grid::new(kmin, kmax, points, log)?)
        }
    }
}

/// Process entry point: parse arguments, run, map failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperball: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
