//! Command-line interface: argument definitions and command execution.
//!
//! Every command writes `<out>.csv`; `--format json` adds a JSON summary
//! (request, results) and `--format svg` a plot, where the command has one.
//! Depths are given in units of the beam radius `w0`, wavevectors in units
//! of the configured reference `k0`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thermophase_core::compensation::{
    discrimination_report, eigenmode_rms, find_magic_wavevectors, scan_total_phase, PhasePoint,
    ScanWindow,
};
use thermophase_core::composite::{noise_ratio_scaled, optimal_alpha_scaled, transverse_penalty};
use thermophase_core::fdt::{
    correlation_n_scaled, strain_correlation_scaled, surface_psd, QuadratureSettings,
};
use thermophase_core::{BeamSubstrate, Error as CoreError, StrainModel};

use crate::config::{Config, ConfigError};
use crate::figure::{write_figure, FigureError, FigureKind};
use crate::table::{fmt_sig, Table};

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "thermophase", version, about = "Thermal phase noise of coated mirrors")]
pub struct Cli {
    /// Configuration file (JSON); the bundled example is used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output base path; the extension is replaced per format. Defaults to
    /// the command name in the current directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Extra outputs besides CSV (comma separated or repeated).
    #[arg(long, global = true, value_enum, value_delimiter = ',')]
    pub format: Vec<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Normalized δθ, δβ, δΦ and transmission across a wavevector window.
    StackScan(ScanArgs),
    /// Wavevectors where δΦ vanishes (plus the scan they were bracketed on).
    Magic(ScanArgs),
    /// Null each of two mirrors in turn and report the other's residual.
    Discriminate(DiscriminateArgs),
    /// Displacement correlation N(z1, z2) and C(z1, z2).
    FdtCorr(CorrArgs),
    /// Coherent-to-total strain ratio Q(z1; z2, dz2).
    FdtQ(StrainArgs),
    /// Residual noise ratio Ϝ(z2) of a mirror with an embedded reflector.
    NoiseRatio(NoiseArgs),
    /// Surface displacement spectral density of the beam substrate.
    Psd(PsdArgs),
    /// Equipartition amplitude of a configured eigenmode.
    Eigenmode(ModeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::StackScan(_) => "stack-scan",
            Command::Magic(_) => "magic",
            Command::Discriminate(_) => "discriminate",
            Command::FdtCorr(_) => "fdt-corr",
            Command::FdtQ(_) => "fdt-q",
            Command::NoiseRatio(_) => "noise-ratio",
            Command::Psd(_) => "psd",
            Command::Eigenmode(_) => "eigenmode",
        }
    }

    fn figure(&self) -> Option<FigureKind> {
        match self {
            Command::StackScan(_) | Command::Magic(_) => Some(FigureKind::PhaseScan),
            Command::FdtCorr(_) => Some(FigureKind::Correlation),
            Command::FdtQ(_) => Some(FigureKind::StrainRatio),
            Command::NoiseRatio(_) => Some(FigureKind::NoiseRatio),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Window { lo, hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StrainArg {
    Geometric,
    Photoelastic,
}

impl From<StrainArg> for StrainModel {
    fn from(a: StrainArg) -> Self {
        match a {
            StrainArg::Geometric => StrainModel::Geometric,
            StrainArg::Photoelastic => StrainModel::Photoelastic,
        }
    }
}

/// Strain coupling and wavevector grid shared by the coating commands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Coupling {
    /// Strain per unit surface displacement ζ, 1/m (overrides --mode).
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<f64>,
    /// Eigenmode supplying ζ; defaults to the first configured mode.
    #[arg(long)]
    pub mode: Option<String>,
    /// Window in units of k0, `lo,hi`.
    #[arg(long, value_parser = parse_window, default_value = "0.995,1.005")]
    pub window: Window,
    /// Grid points across the window.
    #[arg(long, default_value_t = 4096)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = StrainArg::Photoelastic)]
    pub strain_model: StrainArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    /// Stack name from the configuration.
    #[arg(long)]
    pub stack: String,
    #[command(flatten)]
    pub coupling: Coupling,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscriminateArgs {
    /// Mirror nulled at the upper root.
    #[arg(long, default_value = "mirror-A")]
    pub stack_a: String,
    /// Mirror nulled at the lower root.
    #[arg(long, default_value = "mirror-B")]
    pub stack_b: String,
    #[command(flatten)]
    pub coupling: Coupling,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorrArgs {
    /// First depth, units of w0.
    #[arg(long, default_value_t = 0.0)]
    pub z1: f64,
    /// Second depth, units of w0; omit to scan [0, z2-max].
    #[arg(long)]
    pub z2: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub z2_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Poisson ratio override for the beam substrate.
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StrainArgs {
    /// Depth of the displacement, units of w0; omit to scan [0, z1-max].
    #[arg(long)]
    pub z1: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub z1_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Slice start, units of w0.
    #[arg(long, default_value_t = 2.0)]
    pub z2: f64,
    /// Slice thickness, units of w0.
    #[arg(long, default_value_t = 1e-3)]
    pub dz2: f64,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlphaSpec {
    Value(f64),
    /// The minimizing α at each depth.
    Optimal,
}

fn parse_alpha(s: &str) -> Result<AlphaSpec, String> {
    match s.trim() {
        "opt" | "min" => Ok(AlphaSpec::Optimal),
        t => t
            .parse::<f64>()
            .map(AlphaSpec::Value)
            .map_err(|_| format!("`{t}` is neither a number nor `opt`")),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NoiseArgs {
    /// Sensitivity weights α, or `opt` for the optimum at each depth.
    #[arg(long, value_parser = parse_alpha, value_delimiter = ',', default_value = "0,0.7,opt")]
    pub alpha: Vec<AlphaSpec>,
    /// Single depth of the embedded reflector, units of w0.
    #[arg(long)]
    pub z2: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub z2_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Coefficient of a linear transverse-strain penalty `coeff·z2/w0`;
    /// adds the `transverse` and `F_with_transverse` columns.
    #[arg(long)]
    pub transverse_coeff: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PsdArgs {
    /// Frequencies, Hz.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    pub frequency: Vec<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModeArgs {
    /// Eigenmode name; defaults to the first configured mode.
    #[arg(long)]
    pub mode: Option<String>,
    /// Temperature override, K.
    #[arg(long)]
    pub temperature: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(CoreError),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error(transparent)]
    Figure(#[from] FigureError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e)
        } else {
            RunError::Input(e)
        }
    }
}

impl RunError {
    /// 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// One line for standard output.
    pub summary: String,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

struct Computed {
    table: Table,
    summary: String,
    details: Value,
    warnings: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, RunError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::bundled(),
    };
    let figure = if cli.format.contains(&OutputFormat::Svg) {
        Some(cli.command.figure().ok_or_else(|| {
            RunError::Usage(format!("`{}` has no figure; drop `svg` from --format", cli.command.name()))
        })?)
    } else {
        None
    };

    let computed = match &cli.command {
        Command::StackScan(a) => stack_scan(&config, a)?,
        Command::Magic(a) => magic(&config, a)?,
        Command::Discriminate(a) => discriminate(&config, a)?,
        Command::FdtCorr(a) => fdt_corr(&config, a)?,
        Command::FdtQ(a) => fdt_q(&config, a)?,
        Command::NoiseRatio(a) => noise_ratio(&config, a)?,
        Command::Psd(a) => psd(&config, a)?,
        Command::Eigenmode(a) => eigenmode(&config, a)?,
    };

    let base = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(cli.command.name()));
    let mut files = Vec::new();
    let csv_path = base.with_extension("csv");
    write(&csv_path, computed.table.to_csv())?;
    files.push(csv_path);
    if cli.format.contains(&OutputFormat::Json) {
        let doc = json!({
            "command": cli.command.name(),
            "request": cli,
            "summary": computed.summary,
            "results": computed.details,
            "columns": computed.table.columns,
            "rows": computed.table.rows.len(),
        });
        let path = base.with_extension("json");
        write(&path, serde_json::to_string_pretty(&doc).expect("json") + "\n")?;
        files.push(path);
    }
    if let Some(kind) = figure {
        let path = base.with_extension("svg");
        write_figure(&computed.table, kind, &path)?;
        files.push(path);
    }
    Ok(Outcome {
        summary: computed.summary,
        warnings: computed.warnings,
        files,
    })
}

fn write(path: &Path, contents: String) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn quadrature() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn beam_with(config: &Config, sigma: Option<f64>) -> Result<BeamSubstrate, RunError> {
    match sigma {
        Some(s) => Ok(config.beam.with_sigma(s)?),
        None => Ok(config.beam.clone()),
    }
}

/// `n` evenly spaced values on `[0, max]`.
fn depth_grid(max: f64, n: usize, name: &str) -> Result<Vec<f64>, RunError> {
    if n < 2 {
        return Err(RunError::Usage(format!("--points must be >= 2 for a {name} scan")));
    }
    if !(max.is_finite() && max > 0.0) {
        return Err(RunError::Usage(format!("--{name}-max must be > 0")));
    }
    Ok((0..n).map(|i| max * i as f64 / (n - 1) as f64).collect())
}

fn resolve_zeta(config: &Config, c: &Coupling) -> Result<(f64, String), RunError> {
    if let Some(z) = c.zeta {
        return Ok((z, "--zeta".into()));
    }
    let named = match &c.mode {
        Some(name) => config.mode(name)?,
        None => config
            .modes
            .first()
            .ok_or_else(|| RunError::Usage("no --zeta given and no modes configured".into()))?,
    };
    Ok((named.mode.zeta, format!("mode {}", named.name)))
}

fn window(c: &Coupling) -> Result<ScanWindow, RunError> {
    Ok(ScanWindow::new(c.window.lo, c.window.hi, c.points)?)
}

fn phase_table(points: &[PhasePoint]) -> Table {
    let mut t = Table::new(["k_over_k0", "delta_theta", "delta_beta", "delta_phi", "T"]);
    for p in points {
        t.push(vec![p.k_over_k0, p.delta_theta, p.delta_beta, p.delta_phi, p.transmission]);
    }
    t
}

fn stack_scan(config: &Config, a: &ScanArgs) -> Result<Computed, RunError> {
    let named = config.stack(&a.stack)?;
    let (zeta, source) = resolve_zeta(config, &a.coupling)?;
    let grid = window(&a.coupling)?.grid();
    let scan = scan_total_phase(&named.stack, zeta, &grid, a.coupling.strain_model.into())?;
    let peak = scan
        .iter()
        .max_by(|x, y| x.transmission.total_cmp(&y.transmission))
        .expect("non-empty grid");
    Ok(Computed {
        summary: format!(
            "{}: {} points, zeta {} ({source}), max T {:.4e} at k/k0 {}",
            a.stack,
            scan.len(),
            zeta,
            peak.transmission,
            fmt_sig(peak.k_over_k0)
        ),
        details: json!({ "stack": a.stack, "zeta_per_m": zeta, "max_T": peak.transmission,
                         "max_T_k_over_k0": peak.k_over_k0 }),
        table: phase_table(&scan),
        warnings: Vec::new(),
    })
}

fn magic(config: &Config, a: &ScanArgs) -> Result<Computed, RunError> {
    let named = config.stack(&a.stack)?;
    let (zeta, _) = resolve_zeta(config, &a.coupling)?;
    let model = a.coupling.strain_model.into();
    let w = window(&a.coupling)?;
    let found = find_magic_wavevectors(&named.stack, zeta, w, model)?;
    let scan = scan_total_phase(&named.stack, zeta, &w.grid(), model)?;
    let n = found.roots.len();
    let mut summary = format!("{n} root{}", if n == 1 { "" } else { "s" });
    if n > 0 {
        let list: Vec<String> = found.roots.iter().map(|r| fmt_sig(*r)).collect();
        summary.push_str(&format!(": k/k0 = {}", list.join(", ")));
    }
    Ok(Computed {
        summary,
        details: json!({ "stack": a.stack, "zeta_per_m": zeta, "roots_k_over_k0": found.roots,
                         "bracketing_grid_points": found.grid_points }),
        table: phase_table(&scan),
        warnings: Vec::new(),
    })
}

fn discriminate(config: &Config, a: &DiscriminateArgs) -> Result<Computed, RunError> {
    let sa = config.stack(&a.stack_a)?;
    let sb = config.stack(&a.stack_b)?;
    let (zeta, _) = resolve_zeta(config, &a.coupling)?;
    let model: StrainModel = a.coupling.strain_model.into();
    let w = window(&a.coupling)?;
    let grid = w.grid();
    let scan_a = scan_total_phase(&sa.stack, zeta, &grid, model)?;
    let scan_b = scan_total_phase(&sb.stack, zeta, &grid, model)?;
    let mut table = Table::new(["k_over_k0", "delta_theta", "delta_phi_a", "delta_phi_b", "T_a", "T_b"]);
    for (pa, pb) in scan_a.iter().zip(&scan_b) {
        table.push(vec![pa.k_over_k0, pa.delta_theta, pa.delta_phi, pb.delta_phi, pa.transmission, pb.transmission]);
    }
    let (summary, details) = match discrimination_report(&sa.stack, &sb.stack, zeta, w, model) {
        Ok(r) => (
            format!(
                "k-(B) = {}, k+(A) = {}; |dPhi_A(k-B)| = {:.4}, |dPhi_B(k+A)| = {:.4}; at k0: A {:.4}, B {:.4}",
                fmt_sig(r.k_minus_b),
                fmt_sig(r.k_plus_a),
                r.cross_noise_a_at_kb,
                r.cross_noise_b_at_ka,
                r.residual_a_at_k0,
                r.residual_b_at_k0
            ),
            json!({
                "k_minus_b": r.k_minus_b, "k_plus_a": r.k_plus_a,
                "cross_noise_a_at_kb": r.cross_noise_a_at_kb,
                "cross_noise_b_at_ka": r.cross_noise_b_at_ka,
                "residual_a_at_k0": r.residual_a_at_k0,
                "residual_b_at_k0": r.residual_b_at_k0,
            }),
        ),
        // An empty root set is a valid answer, not a failure.
        Err(CoreError::NoMagicRoot { mirror }) => (
            format!("mirror {mirror} has no magic root in the window"),
            json!({ "missing_root": mirror }),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(Computed { table, summary, details, warnings: Vec::new() })
}

fn fdt_corr(config: &Config, a: &CorrArgs) -> Result<Computed, RunError> {
    let beam = beam_with(config, a.sigma)?;
    let s = beam.sigma();
    let q = quadrature();
    let depths = match a.z2 {
        Some(z) => vec![z],
        None => depth_grid(a.z2_max, a.points, "z2")?,
    };
    let n11 = correlation_n_scaled(a.z1, a.z1, s, &q)?.value;
    let mut table = Table::new(["z1_over_w0", "z2_over_w0", "N", "N_err", "N_z2z2", "C"]);
    for &z2 in &depths {
        let n12 = correlation_n_scaled(a.z1, z2, s, &q)?;
        let n22 = correlation_n_scaled(z2, z2, s, &q)?.value;
        table.push(vec![a.z1, z2, n12.value, n12.est_error, n22, n12.value / (n11 * n22).sqrt()]);
    }
    let last = table.rows.last().expect("at least one depth");
    let summary = if depths.len() == 1 {
        format!("N({}, {}) = {:.6} (C = {:.6}, sigma {s})", a.z1, last[1], last[2], last[5])
    } else {
        format!(
            "{} depths, z1 = {}: C(z1, {z}) = {:.6}, N({z}, {z}) = {:.6} (sigma {s})",
            depths.len(),
            a.z1,
            last[5],
            last[4],
            z = last[1]
        )
    };
    Ok(Computed {
        details: json!({ "sigma": s, "z1_over_w0": a.z1 }),
        table,
        summary,
        warnings: Vec::new(),
    })
}

fn fdt_q(config: &Config, a: &StrainArgs) -> Result<Computed, RunError> {
    let beam = beam_with(config, a.sigma)?;
    let s = beam.sigma();
    let q = quadrature();
    let depths = match a.z1 {
        Some(z) => vec![z],
        None => depth_grid(a.z1_max, a.points, "z1")?,
    };
    let mut table = Table::new([
        "z1_over_w0",
        "z2_over_w0",
        "dz2_over_w0",
        "coherent",
        "total",
        "Q",
        "Q_over_sqrt_dz2",
    ]);
    for &z1 in &depths {
        let r = strain_correlation_scaled(z1, a.z2, a.dz2, s, &q)?;
        table.push(vec![z1, a.z2, a.dz2, r.coherent, r.total, r.ratio, r.ratio / a.dz2.sqrt()]);
    }
    let q_col = table.column("Q").expect("column");
    let max = q_col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(Computed {
        summary: format!(
            "{} depths, z2 = {}, dz2 = {}: max |Q| = {:.6} (sigma {s})",
            depths.len(),
            a.z2,
            a.dz2,
            max
        ),
        details: json!({ "sigma": s, "z2_over_w0": a.z2, "dz2_over_w0": a.dz2, "max_abs_Q": max }),
        table,
        warnings: Vec::new(),
    })
}

fn noise_ratio(config: &Config, a: &NoiseArgs) -> Result<Computed, RunError> {
    let beam = beam_with(config, a.sigma)?;
    let s = beam.sigma();
    let q = quadrature();
    if a.alpha.is_empty() {
        return Err(RunError::Usage("--alpha needs at least one value".into()));
    }
    let depths = match a.z2 {
        Some(z) => vec![z],
        None => depth_grid(a.z2_max, a.points, "z2")?,
    };
    let mut columns = vec!["z2_over_w0", "series", "alpha", "F"];
    if a.transverse_coeff.is_some() {
        columns.extend(["transverse", "F_with_transverse"]);
    }
    let mut table = Table::new(columns);
    for (series, spec) in a.alpha.iter().enumerate() {
        for &z in &depths {
            let alpha = match spec {
                AlphaSpec::Value(v) => *v,
                AlphaSpec::Optimal => optimal_alpha_scaled(z, s, &q)?.alpha_min,
            };
            let f = noise_ratio_scaled(z, alpha, s, &q)?;
            let mut row = vec![z, series as f64, alpha, f];
            if let Some(c) = a.transverse_coeff {
                let p = transverse_penalty(z * beam.w0, beam.w0, c)?;
                row.extend([p, f + p]);
            }
            table.push(row);
        }
    }
    let zmax = *depths.last().expect("depth");
    let opt = optimal_alpha_scaled(zmax, s, &q)?;
    let mut warnings = Vec::new();
    let rayleigh = beam.substrate.n * config.k0 * beam.w0 * beam.w0 / 2.0;
    if zmax * beam.w0 >= rayleigh {
        warnings.push(format!(
            "z2 = {zmax} w0 reaches the Rayleigh range in the substrate ({:.1} w0); a fixed w0 is a poor approximation there",
            rayleigh / beam.w0
        ));
    }
    Ok(Computed {
        summary: format!(
            "{} rows; at z2 = {zmax} w0: F_min = {:.4} at alpha_min = {:.4} (sigma {s})",
            table.rows.len(),
            opt.f_min,
            opt.alpha_min
        ),
        details: json!({ "sigma": s, "z2_over_w0": zmax, "alpha_min": opt.alpha_min, "F_min": opt.f_min }),
        table,
        warnings,
    })
}

fn psd(config: &Config, a: &PsdArgs) -> Result<Computed, RunError> {
    let beam = beam_with(config, a.sigma)?;
    let mut table = Table::new(["frequency_hz", "omega_rad_s", "psd_m2_per_rad_s"]);
    for &f in &a.frequency {
        let omega = 2.0 * std::f64::consts::PI * f;
        table.push(vec![f, omega, surface_psd(omega, &beam)?]);
    }
    let first = &table.rows[0];
    Ok(Computed {
        summary: format!(
            "S_q({} Hz) = {:.6e} m^2/(rad/s) for {}, w0 = {} m, T = {} K",
            first[0], first[2], beam.substrate.name, beam.w0, beam.temperature
        ),
        details: json!({ "substrate": beam.substrate.name, "w0_m": beam.w0, "temperature_K": beam.temperature }),
        table,
        warnings: Vec::new(),
    })
}

fn eigenmode(config: &Config, a: &ModeArgs) -> Result<Computed, RunError> {
    let named = match &a.mode {
        Some(name) => config.mode(name)?,
        None => config
            .modes
            .first()
            .ok_or_else(|| RunError::Usage("no modes configured".into()))?,
    };
    let t = a.temperature.unwrap_or(config.beam.temperature);
    let m = &named.mode;
    let rms = eigenmode_rms(m, t)?;
    let mut table = Table::new(["omega0_rad_s", "M0_kg", "zeta_per_m", "temperature_K", "rms_m", "strain_rms"]);
    table.push(vec![m.omega0, m.effective_mass, m.zeta, t, rms, (m.zeta * rms).abs()]);
    Ok(Computed {
        summary: format!("{}: rms displacement {:.4e} m at {t} K", named.name, rms),
        details: json!({ "mode": named.name, "rms_m": rms }),
        table,
        warnings: Vec::new(),
    })
}
