//! Command-line front end.
//!
//! Every command builds a [`RunConfig`], runs it with [`run`] and gets back
//! a human-readable report plus a CSV table. Powers cross this boundary in
//! dBm and are linear milliwatts everywhere else.

pub mod format;
pub mod profile;

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::antenna::{
    beamwidth_from_elements, check_scan_angle, elements_from_beamwidth, gain_from_beamwidth,
    to_db, BeamShape, BeamSpec, UlaGeometry,
};
use crate::cluster::{
    profile_to_fitted, total_power_discrete, FittedGaussianCluster, GaussianCluster, Spectrum,
};
use crate::error::{Error, Result};
use crate::optimizer::{optimize_misaligned, percentile_plan, received_power};

pub use format::{fmt_g, from_dbm, to_dbm, CsvTable};
pub use profile::ingest_profile;

pub const TABLE1_ETAS: [f64; 6] = [0.999, 0.99, 0.95, 0.9, 0.75, 0.5];
pub const DEFAULT_SIGMA: f64 = 5.0;
pub const DEFAULT_V: f64 = 9.23;
pub const DEFAULT_PHI0: f64 = 53.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Gain,
    Rho,
    Optimize,
    Percentile,
    Table1,
    Sweep,
    Fit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Model {
    /// Normal spectrum with total power and sigma.
    #[default]
    Std11ad,
    /// Gaussian u exp(-(phi - x)^2 / v^2) fitted to a ray-traced profile.
    Rticm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ShapeArg {
    #[default]
    Rect,
    Tri,
}

impl From<ShapeArg> for BeamShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Rect => BeamShape::Rectangular,
            ShapeArg::Tri => BeamShape::Triangular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Axis {
    #[default]
    Beamwidth,
    Elements,
}

/// Half-open `lo:hi:step` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let count = if self.hi > self.lo {
            ((self.hi - self.lo) / self.step - 1e-9).ceil().max(0.0) as usize
        } else {
            0
        };
        (0..count).map(move |k| self.lo + k as f64 * self.step)
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("{t:?} is not a finite number"))
        };
        let r = Range {
            lo: parse(lo)?,
            hi: parse(hi)?,
            step: parse(step)?,
        };
        if !(r.step > 0.0) {
            return Err(format!("step must be positive, got {}", r.step));
        }
        Ok(r)
    }
}

/// Parameters shared by every command.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunConfig {
    #[arg(skip = CommandKind::Gain)]
    pub command: CommandKind,
    #[arg(long, value_enum, default_value_t = Model::Std11ad)]
    pub model: Model,
    #[arg(long, value_enum, default_value_t = ShapeArg::Rect)]
    pub shape: ShapeArg,
    /// Cluster angular standard deviation, degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Fitted Gaussian width, degrees (sigma = v / sqrt 2).
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Fitted Gaussian peak, mW per degree.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Total cluster power, dBm (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub ptot_dbm: Option<f64>,
    /// Misalignment between beam and cluster centre, degrees. Repeatable.
    #[arg(long, allow_negative_numbers = true, default_values_t = [0.0])]
    pub delta: Vec<f64>,
    /// Cluster centre, degrees; sets the misalignment to |x - phi0|.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "delta")]
    pub x: Option<f64>,
    /// Scan angle, degrees from the array axis.
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_PHI0)]
    pub phi0: f64,
    /// Power fraction of the narrow-beam limit. Repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Vec<f64>,
    /// Sweep range lo:hi:step (half-open).
    #[arg(long)]
    pub range: Option<Range>,
    /// Default sweep step, degrees.
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Angle/power profile CSV.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Write the CSV table here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Array size for `gain`.
    #[arg(long)]
    pub elements: Option<u64>,
    /// Half-power beamwidth for `gain` and `rho`, degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub beamwidth: Option<f64>,
    /// Sweep over beamwidth or element count.
    #[arg(long, value_enum, default_value_t = Axis::Beamwidth)]
    pub axis: Axis,
    /// Print the CSV table instead of the report.
    #[arg(long)]
    pub csv: bool,
}

impl RunConfig {
    /// Defaults for `command`, as if no flags were given.
    pub fn new(command: CommandKind) -> Self {
        let mut cfg = Cli::parse_from(["mmwave-beamwidth", "gain"]).into_config();
        cfg.command = command;
        cfg
    }
}

#[derive(Debug, Parser)]
#[command(name = "mmwave-beamwidth", version, about = "Beamwidth and array-size selection for clustered mmWave channels")]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Gain, beamwidth and element count of a half-wavelength ULA.
    Gain(RunConfig),
    /// Captured fraction and received power for one beamwidth.
    Rho(RunConfig),
    /// Power-maximising beamwidth under misalignment.
    Optimize(RunConfig),
    /// Beamwidth reaching a fraction eta of the narrow-beam limit.
    Percentile(RunConfig),
    /// Percentile beamwidths and array sizes for both cluster models.
    Table1(RunConfig),
    /// Received power against beamwidth or element count.
    Sweep(RunConfig),
    /// Fit a Gaussian to an angle/power profile.
    Fit(RunConfig),
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (kind, mut cfg) = match self.command {
            Sub::Gain(c) => (CommandKind::Gain, c),
            Sub::Rho(c) => (CommandKind::Rho, c),
            Sub::Optimize(c) => (CommandKind::Optimize, c),
            Sub::Percentile(c) => (CommandKind::Percentile, c),
            Sub::Table1(c) => (CommandKind::Table1, c),
            Sub::Sweep(c) => (CommandKind::Sweep, c),
            Sub::Fit(c) => (CommandKind::Fit, c),
        };
        cfg.command = kind;
        cfg
    }
}

/// Either continuous cluster description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterModel {
    Standard(GaussianCluster),
    Fitted(FittedGaussianCluster),
}

impl Spectrum for ClusterModel {
    fn total_power(&self) -> f64 {
        match self {
            ClusterModel::Standard(c) => c.total_power,
            ClusterModel::Fitted(c) => c.total_power(),
        }
    }
    fn sigma(&self) -> f64 {
        match self {
            ClusterModel::Standard(c) => c.sigma,
            ClusterModel::Fitted(c) => c.sigma(),
        }
    }
    fn center_aoa(&self) -> f64 {
        match self {
            ClusterModel::Standard(c) => c.center_aoa,
            ClusterModel::Fitted(c) => c.x,
        }
    }
    fn extracted_power(&self, beam: &BeamSpec) -> Result<f64> {
        match self {
            ClusterModel::Standard(c) => c.extracted_power(beam),
            ClusterModel::Fitted(c) => c.extracted_power(beam),
        }
    }
    fn recentered(&self, center_aoa: f64) -> Self {
        match self {
            ClusterModel::Standard(c) => ClusterModel::Standard(c.recentered(center_aoa)),
            ClusterModel::Fitted(c) => ClusterModel::Fitted(c.recentered(center_aoa)),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Build the cluster described by the model flags, centred at `center`.
pub fn resolve_model(cfg: &RunConfig, center: f64) -> Result<ClusterModel> {
    match cfg.model {
        Model::Std11ad => {
            if cfg.profile.is_some() || cfg.u.is_some() {
                return Err(config_err("--profile and --u need --model rticm"));
            }
            let sigma = match (cfg.sigma, cfg.v) {
                (Some(s), None) => s,
                (None, Some(v)) => v / SQRT_2,
                (Some(_), Some(_)) => return Err(config_err("give --sigma or --v, not both")),
                (None, None) => return Err(config_err("--sigma (or --v) is required")),
            };
            let p = from_dbm(cfg.ptot_dbm.unwrap_or(0.0));
            Ok(ClusterModel::Standard(GaussianCluster::new(p, sigma, center)?))
        }
        Model::Rticm => {
            if let Some(path) = &cfg.profile {
                if cfg.u.is_some() || cfg.v.is_some() || cfg.sigma.is_some() || cfg.ptot_dbm.is_some() {
                    return Err(config_err("--profile replaces --u, --v, --sigma and --ptot-dbm"));
                }
                let fitted = profile_to_fitted(&ingest_profile(path)?)?;
                return Ok(ClusterModel::Fitted(fitted.recentered(center)));
            }
            let v = match (cfg.v, cfg.sigma) {
                (Some(v), None) => v,
                (None, Some(s)) => s * SQRT_2,
                (Some(_), Some(_)) => return Err(config_err("give --v or --sigma, not both")),
                (None, None) => return Err(config_err("--v (or --sigma, or --profile) is required")),
            };
            let u = match (cfg.u, cfg.ptot_dbm) {
                (Some(_), Some(_)) => return Err(config_err("give --u or --ptot-dbm, not both")),
                (Some(u), None) => u,
                (None, p) => from_dbm(p.unwrap_or(0.0)) / (v * PI.sqrt()),
            };
            Ok(ClusterModel::Fitted(FittedGaussianCluster::new(u, v, center)?))
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub table: CsvTable,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    check_scan_angle(cfg.phi0)?;
    if let Some(x) = cfg.x {
        if !x.is_finite() {
            return Err(Error::Domain(format!("cluster centre must be finite, got {x}")));
        }
        // Extraction is symmetric in the sign of the offset.
        let mut cfg = cfg.clone();
        cfg.delta = vec![(x - cfg.phi0).abs()];
        cfg.x = None;
        return run(&cfg);
    }
    if !(cfg.grid_step > 0.0) || !cfg.grid_step.is_finite() {
        return Err(config_err(format!("--grid-step must be positive, got {}", cfg.grid_step)));
    }
    match cfg.command {
        CommandKind::Gain => cmd_gain(cfg),
        CommandKind::Rho => cmd_rho(cfg),
        CommandKind::Optimize => cmd_optimize(cfg),
        CommandKind::Percentile => cmd_percentile(cfg),
        CommandKind::Table1 => cmd_table1(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
        CommandKind::Fit => cmd_fit(cfg),
    }
}

/// Parse `args`, run, print and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Error::Config(String::new()).exit_code() } else { 0 };
        }
    };
    let cfg = cli.into_config();
    let outcome = run(&cfg).and_then(|out| {
        if let Some(path) = &cfg.output {
            out.table.write_to(path)?;
        }
        Ok(out)
    });
    match outcome {
        Ok(out) => {
            if cfg.csv {
                match out.table.to_bytes() {
                    Ok(bytes) => print!("{}", String::from_utf8_lossy(&bytes)),
                    Err(e) => return report_error(&e),
                }
            } else {
                print!("{}", out.report);
            }
            0
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error[{}]: {e}", e.category());
    e.exit_code()
}

fn cmd_gain(cfg: &RunConfig) -> Result<Outcome> {
    let (n, bw, gain) = match (cfg.elements, cfg.beamwidth) {
        (Some(n), None) => {
            let ula = UlaGeometry::new(n)?;
            (n, beamwidth_from_elements(&ula, cfg.phi0)?, n as f64)
        }
        (None, Some(bw)) => (
            elements_from_beamwidth(bw, cfg.phi0)?,
            bw,
            gain_from_beamwidth(bw, cfg.phi0)?,
        ),
        _ => return Err(config_err("gain needs exactly one of --elements or --beamwidth")),
    };
    let mut table = CsvTable::new(&["phi0_deg", "elements", "beamwidth_deg", "gain", "gain_db"]);
    table.push(vec![fmt_g(cfg.phi0), n.to_string(), fmt_g(bw), fmt_g(gain), fmt_g(to_db(gain))]);
    let report = format!(
        "scan angle  {:.2} deg\nbeamwidth   {bw:.4} deg\ngain        {gain:.4} ({:.2} dBi)\nelements    {n}\n",
        cfg.phi0,
        to_db(gain)
    );
    Ok(Outcome { report, table })
}

fn cmd_rho(cfg: &RunConfig) -> Result<Outcome> {
    let bw = cfg
        .beamwidth
        .ok_or_else(|| config_err("rho needs --beamwidth"))?;
    let shape = BeamShape::from(cfg.shape);
    let mut table = CsvTable::new(&["delta_deg", "beamwidth_deg", "rho", "extracted_dbm", "received_dbm"]);
    let mut report = String::new();
    for &delta in &cfg.delta {
        check_delta(delta)?;
        let cluster = resolve_model(cfg, cfg.phi0 + delta)?;
        let beam = BeamSpec::new(shape, bw, cfg.phi0)?;
        let extracted = cluster.extracted_power(&beam)?;
        let rho = extracted / cluster.total_power();
        let received = received_power(&cluster, &beam)?;
        table.push(vec![
            fmt_g(delta),
            fmt_g(bw),
            fmt_g(rho),
            fmt_g(to_dbm(extracted)),
            fmt_g(to_dbm(received)),
        ]);
        let _ = writeln!(
            report,
            "delta {delta:>6.2} deg  rho {rho:.6}  extracted {:.3} dBm  received {:.3} dBm",
            to_dbm(extracted),
            to_dbm(received)
        );
    }
    Ok(Outcome { report, table })
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("misalignment must be >= 0, got {delta}")));
    }
    Ok(())
}

fn cmd_optimize(cfg: &RunConfig) -> Result<Outcome> {
    let shape = BeamShape::from(cfg.shape);
    let mut table = CsvTable::new(&[
        "delta_deg",
        "regime",
        "beamwidth_opt_deg",
        "n_elements",
        "p_max_dbm",
        "second_derivative_ok",
        "grid_fallback",
    ]);
    let mut report = String::new();
    for &delta in &cfg.delta {
        check_delta(delta)?;
        let cluster = resolve_model(cfg, cfg.phi0)?;
        let opt = optimize_misaligned(&cluster, cfg.phi0, delta, shape)?;
        let n = opt.n_elements.map_or("inf".to_string(), |n| n.to_string());
        table.push(vec![
            fmt_g(delta),
            opt.regime.as_str().to_string(),
            fmt_g(opt.beamwidth_opt),
            n.clone(),
            fmt_g(to_dbm(opt.p_max)),
            opt.second_derivative_ok.to_string(),
            opt.grid_fallback.to_string(),
        ]);
        let _ = writeln!(
            report,
            "delta {delta:.2} deg: regime {}, optimum beamwidth {:.4} deg, N = {n}, P_max = {:.3} dBm",
            opt.regime.as_str(),
            opt.beamwidth_opt,
            to_dbm(opt.p_max)
        );
        if opt.n_elements.is_none() {
            let _ = writeln!(report, "  unbounded array; see `percentile` for a realisable beamwidth");
        }
        if opt.grid_fallback {
            let _ = writeln!(report, "  no sign change found; optimum taken from a grid scan");
        }
        if !opt.second_derivative_ok {
            let _ = writeln!(report, "  warning: curvature check failed at the optimum");
        }
    }
    Ok(Outcome { report, table })
}

fn cmd_percentile(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.shape != ShapeArg::Rect {
        return Err(config_err("percentile beamwidths are defined for --shape rect"));
    }
    if cfg.eta.is_empty() {
        return Err(config_err("percentile needs at least one --eta"));
    }
    let cluster = resolve_model(cfg, cfg.phi0)?;
    let mut table = CsvTable::new(&[
        "eta",
        "beamwidth_exact_deg",
        "beamwidth_approx_deg",
        "approx_in_support",
        "n_elements",
        "p_eta_dbm",
    ]);
    let mut report = String::new();
    for &eta in &cfg.eta {
        let p = percentile_plan(&cluster, cfg.phi0, eta)?;
        table.push(vec![
            fmt_g(eta),
            fmt_g(p.beamwidth_exact),
            fmt_g(p.beamwidth_approx),
            p.approx_in_support.to_string(),
            p.n_elements.to_string(),
            fmt_g(to_dbm(p.p_eta)),
        ]);
        let _ = writeln!(
            report,
            "eta {eta}: beamwidth {:.1} deg (approx {:.2}{}), N = {}, P_eta = {:.3} dBm",
            p.beamwidth_exact,
            p.beamwidth_approx,
            if p.approx_in_support { "" } else { ", outside support" },
            p.n_elements,
            to_dbm(p.p_eta)
        );
    }
    Ok(Outcome { report, table })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub eta: f64,
    pub beamwidth_st: f64,
    pub n_st: u64,
    pub beamwidth_rt: f64,
    pub n_rt: u64,
}

/// Percentile beamwidths and element counts for a standard cluster of
/// spread `sigma` and a fitted cluster of width `v`.
pub fn table1(sigma: f64, v: f64, phi0: f64, etas: &[f64]) -> Result<Vec<Table1Row>> {
    let st = GaussianCluster::new(1.0, sigma, phi0)?;
    let rt = FittedGaussianCluster::new(1.0, v, phi0)?;
    etas.iter()
        .map(|&eta| {
            let a = percentile_plan(&st, phi0, eta)?;
            let b = percentile_plan(&rt, phi0, eta)?;
            Ok(Table1Row {
                eta,
                beamwidth_st: a.beamwidth_exact,
                n_st: a.n_elements,
                beamwidth_rt: b.beamwidth_exact,
                n_rt: b.n_elements,
            })
        })
        .collect()
}

fn cmd_table1(cfg: &RunConfig) -> Result<Outcome> {
    let sigma = cfg.sigma.unwrap_or(DEFAULT_SIGMA);
    let v = cfg.v.unwrap_or(DEFAULT_V);
    let etas: &[f64] = if cfg.eta.is_empty() { &TABLE1_ETAS } else { &cfg.eta };
    let rows = table1(sigma, v, cfg.phi0, etas)?;
    let mut table = CsvTable::new(&["eta", "beamwidth_st_deg", "n_st", "beamwidth_rt_deg", "n_rt"]);
    let mut report = format!(
        "sigma = {sigma} deg, v = {v} deg, phi0 = {} deg\n{:>7} {:>9} {:>6} {:>9} {:>6}\n",
        cfg.phi0, "eta", "bw_st", "N_st", "bw_rt", "N_rt"
    );
    for r in &rows {
        table.push(vec![
            fmt_g(r.eta),
            fmt_g(r.beamwidth_st),
            r.n_st.to_string(),
            fmt_g(r.beamwidth_rt),
            r.n_rt.to_string(),
        ]);
        let _ = writeln!(
            report,
            "{:>7} {:>9.1} {:>6} {:>9.1} {:>6}",
            r.eta, r.beamwidth_st, r.n_st, r.beamwidth_rt, r.n_rt
        );
    }
    Ok(Outcome { report, table })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub beamwidth: f64,
    pub n_elements: u64,
    pub gain_db: f64,
    pub rho: f64,
    pub received_power_dbm: f64,
}

/// One row per point of `range` and per misalignment. On the elements axis
/// the range values are array sizes.
pub fn sweep_rows(
    cluster: &ClusterModel,
    shape: BeamShape,
    phi0: f64,
    deltas: &[f64],
    axis: Axis,
    range: &Range,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &delta in deltas {
        check_delta(delta)?;
        let placed = cluster.recentered(phi0 + delta);
        for x in range.values() {
            let (bw, n) = match axis {
                Axis::Beamwidth => (x, elements_from_beamwidth(x, phi0)?),
                Axis::Elements => {
                    if x.fract() != 0.0 {
                        return Err(config_err(format!("element counts must be integers, got {x}")));
                    }
                    let ula = UlaGeometry::new(x as u64)?;
                    (beamwidth_from_elements(&ula, phi0)?, x as u64)
                }
            };
            let beam = BeamSpec::new(shape, bw, phi0)?;
            let gain = gain_from_beamwidth(bw, phi0)?;
            let extracted = placed.extracted_power(&beam)?;
            rows.push(SweepRow {
                delta,
                beamwidth: bw,
                n_elements: n,
                gain_db: to_db(gain),
                rho: extracted / placed.total_power(),
                received_power_dbm: to_dbm(gain * extracted),
            });
        }
    }
    Ok(rows)
}

fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let cluster = resolve_model(cfg, cfg.phi0)?;
    let range = match (cfg.range, cfg.axis) {
        (Some(r), _) => r,
        (None, Axis::Beamwidth) => {
            let widest = cfg.delta.iter().copied().fold(0.0, f64::max);
            Range {
                lo: cfg.grid_step,
                hi: 10.0 * (cluster.sigma() + widest),
                step: cfg.grid_step,
            }
        }
        (None, Axis::Elements) => return Err(config_err("--axis elements needs --range")),
    };
    let rows = sweep_rows(&cluster, cfg.shape.into(), cfg.phi0, &cfg.delta, cfg.axis, &range)?;
    let mut table = CsvTable::new(&[
        "delta_deg",
        "beamwidth_deg",
        "n_elements",
        "gain_db",
        "rho",
        "received_dbm",
    ]);
    for r in &rows {
        table.push(vec![
            fmt_g(r.delta),
            fmt_g(r.beamwidth),
            r.n_elements.to_string(),
            fmt_g(r.gain_db),
            fmt_g(r.rho),
            fmt_g(r.received_power_dbm),
        ]);
    }
    let mut report = String::new();
    for &delta in &cfg.delta {
        let best = rows
            .iter()
            .filter(|r| r.delta == delta)
            .max_by(|a, b| a.received_power_dbm.total_cmp(&b.received_power_dbm));
        match best {
            Some(b) => {
                let _ = writeln!(
                    report,
                    "delta {delta:.2} deg: {} points, peak {:.3} dBm at {:.3} deg (N = {})",
                    rows.iter().filter(|r| r.delta == delta).count(),
                    b.received_power_dbm,
                    b.beamwidth,
                    b.n_elements
                );
            }
            None => {
                let _ = writeln!(report, "delta {delta:.2} deg: empty range");
            }
        }
    }
    Ok(Outcome { report, table })
}

fn cmd_fit(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg
        .profile
        .as_ref()
        .ok_or_else(|| config_err("fit needs --profile"))?;
    let profile = ingest_profile(path)?;
    let samples: Vec<(f64, f64)> = profile
        .ray_angles()
        .zip(profile.ray_amplitudes_sq().iter().copied())
        .collect();
    let fit = crate::numerics::fit_gaussian(&samples)?;
    let fitted = FittedGaussianCluster::new(fit.u, fit.v, fit.x)?;
    let discrete_total = total_power_discrete(&profile);
    let mut table = CsvTable::new(&[
        "u", "v", "x", "sigma", "rss", "fitted_total_dbm", "discrete_total_dbm", "specular_dbm",
    ]);
    table.push(vec![
        fmt_g(fit.u),
        fmt_g(fit.v),
        fmt_g(fit.x),
        fmt_g(fitted.sigma()),
        fmt_g(fit.rss),
        fmt_g(to_dbm(fitted.total_power())),
        fmt_g(to_dbm(discrete_total)),
        fmt_g(to_dbm(profile.specular_power())),
    ]);
    let report = format!(
        "rays        {} over {:.2} deg (spacing {:.4} deg)\n\
         u           {:.6e} mW/deg\n\
         v           {:.4} deg (sigma {:.4} deg)\n\
         x           {:.4} deg\n\
         rss         {:.3e}\n\
         diffuse fit {:.3} dBm\n\
         discrete    {:.3} dBm total, specular {:.3} dBm\n",
        profile.ray_count(),
        profile.angle_spread(),
        profile.ray_spacing(),
        fit.u,
        fit.v,
        fitted.sigma(),
        fit.x,
        fit.rss,
        to_dbm(fitted.total_power()),
        to_dbm(discrete_total),
        to_dbm(profile.specular_power()),
    );
    Ok(Outcome { report, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: Range = "0.1:1:0.1".parse().unwrap();
        let v: Vec<f64> = r.values().collect();
        assert_eq!(v.len(), 9);
        assert!((v[8] - 0.9).abs() < 1e-12);
        assert_eq!("5:5:1".parse::<Range>().unwrap().values().count(), 0);
        assert_eq!("5:1:1".parse::<Range>().unwrap().values().count(), 0);
        assert!("1:2".parse::<Range>().is_err());
        assert!("1:2:0".parse::<Range>().is_err());
        assert!("a:2:1".parse::<Range>().is_err());
    }

    #[test]
    fn model_resolution() {
        let mut cfg = RunConfig::new(CommandKind::Rho);
        assert!(matches!(resolve_model(&cfg, 53.0), Err(Error::Config(_))));
        cfg.sigma = Some(5.0);
        cfg.v = Some(7.0);
        assert!(matches!(resolve_model(&cfg, 53.0), Err(Error::Config(_))));
        cfg.v = None;
        assert_eq!(resolve_model(&cfg, 53.0).unwrap().sigma(), 5.0);
        cfg.sigma = Some(-1.0);
        assert!(matches!(resolve_model(&cfg, 53.0), Err(Error::Domain(_))));

        let mut cfg = RunConfig::new(CommandKind::Rho);
        cfg.model = Model::Rticm;
        cfg.v = Some(9.23);
        cfg.u = Some(6.43e-5);
        let m = resolve_model(&cfg, 53.0).unwrap();
        assert!((m.total_power() - 6.43e-5 * 9.23 * PI.sqrt()).abs() < 1e-18);
        cfg.u = None;
        cfg.ptot_dbm = Some(0.0);
        assert!((resolve_model(&cfg, 53.0).unwrap().total_power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table1_defaults() {
        let rows = table1(DEFAULT_SIGMA, DEFAULT_V, DEFAULT_PHI0, &TABLE1_ETAS).unwrap();
        let r = rows[2];
        assert_eq!((r.n_st, r.n_rt), (23, 18));
        assert!((r.beamwidth_st - 5.6).abs() < 0.05 && (r.beamwidth_rt - 7.3).abs() < 0.05);
        let r = rows[4];
        assert_eq!((r.n_st, r.n_rt), (10, 7));
    }

    #[test]
    fn commands_run() {
        let mut cfg = RunConfig::new(CommandKind::Optimize);
        cfg.sigma = Some(5.0);
        cfg.delta = vec![8.0];
        let out = run(&cfg).unwrap();
        assert_eq!(out.table.rows[0][1], "covers_center");

        let mut cfg = RunConfig::new(CommandKind::Sweep);
        cfg.sigma = Some(5.0);
        cfg.range = Some("1:1:0.5".parse().unwrap());
        let out = run(&cfg).unwrap();
        assert!(out.table.rows.is_empty());
        assert_eq!(out.table.header.len(), 6);

        let mut cfg = RunConfig::new(CommandKind::Gain);
        cfg.elements = Some(16);
        cfg.phi0 = 90.0;
        assert_eq!(run(&cfg).unwrap().table.rows[0][2], "6.34375");
        cfg.phi0 = 200.0;
        assert!(matches!(run(&cfg), Err(Error::Domain(_))));
    }
}
