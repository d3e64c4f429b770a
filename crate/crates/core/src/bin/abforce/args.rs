//! Command-line definitions.
//!
//! Every command's parameters are one flat struct that doubles as the JSON
//! schema of the report's `parameters` echo and of `--config` files, so a
//! report can be replayed exactly. Precedence: flags, then config, then
//! defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "abforce",
    version,
    about = "Semi-classical forces on an electron passing a solenoid"
)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Leave the generation time out of the output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// JSON parameter file (a report's `parameters` object, or a whole report).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every closed-form quantity for one flux, energy and impact parameter.
    #[command(allow_negative_numbers = true)]
    Analytic(AnalyticParams),
    /// Integrate one passage and dump the (t, x, v) samples.
    #[command(allow_negative_numbers = true)]
    Trajectory(TrajectoryParams),
    /// Recompute the experiment comparison table and report deviations.
    #[command(allow_negative_numbers = true)]
    Table1(Table1Params),
    /// Classify the fringe-test outcome regime of a record or custom experiment.
    #[command(allow_negative_numbers = true)]
    Regimes(RegimesParams),
    /// Delay versus solenoid current, with and without an iron core.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analytic(_) => "analytic",
            Command::Trajectory(_) => "trajectory",
            Command::Table1(_) => "table1",
            Command::Regimes(_) => "regimes",
            Command::Sweep(_) => "sweep",
        }
    }
}

/// Flux given directly or through a solenoid.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct FluxParams {
    /// Enclosed flux in G·cm².
    #[arg(long)]
    #[serde(rename = "flux_Gcm2")]
    pub flux_gcm2: Option<f64>,

    /// Enclosed flux in Wb.
    #[arg(long)]
    #[serde(rename = "flux_Wb")]
    pub flux_wb: Option<f64>,

    /// Solenoid current in A (flux from the solenoid geometry).
    #[arg(long)]
    #[serde(rename = "current_A")]
    pub current: Option<f64>,

    /// Solenoid radius in mm [default with --current: 1.25].
    #[arg(long)]
    pub solenoid_r_mm: Option<f64>,

    /// Winding density in turns per mm [default with --current: 3].
    #[arg(long)]
    pub n_per_mm: Option<f64>,

    /// Relative permeability of the core [default with --current: 1].
    #[arg(long)]
    #[serde(rename = "mu_r_dimless")]
    pub mu_r: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct AnalyticParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub flux: FluxParams,

    /// Electron kinetic energy in keV.
    #[arg(long)]
    #[serde(rename = "energy_keV")]
    pub energy_kev: Option<f64>,

    /// Energy spread in eV (adds the coherence length).
    #[arg(long)]
    #[serde(rename = "energy_spread_eV")]
    pub energy_spread_ev: Option<f64>,

    /// Impact parameter in µm; negative for the lower side.
    #[arg(long)]
    #[serde(rename = "y_e_um")]
    pub ye_um: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct TrajectoryParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub flux: FluxParams,

    /// Electron kinetic energy in keV.
    #[arg(long)]
    #[serde(rename = "energy_keV")]
    pub energy_kev: Option<f64>,

    /// Impact parameter in µm; negative for the lower side.
    #[arg(long)]
    #[serde(rename = "y_e_um")]
    pub ye_um: Option<f64>,

    /// Half-width of the integration window in units of |y_e| [default: 1e4].
    #[arg(long)]
    #[serde(rename = "window_factor_dimless")]
    pub window_factor: Option<f64>,

    /// Relative tolerance [default: 1e-10].
    #[arg(long)]
    #[serde(rename = "relative_tolerance_dimless")]
    pub rtol: Option<f64>,

    /// Absolute position tolerance in m [default: 1e-24].
    #[arg(long)]
    #[serde(rename = "absolute_tolerance_m")]
    pub atol_m: Option<f64>,

    /// Step budget [default: 1000000].
    #[arg(long)]
    #[serde(rename = "max_steps_count")]
    pub max_steps: Option<usize>,

    /// Add the analytic contribution of the truncated tails [default: on].
    #[arg(long, value_enum)]
    pub tail_correction: Option<OnOff>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct Table1Params {
    /// Catalog JSON to use instead of the builtin table.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct RegimesParams {
    /// Record name; all records when neither this nor custom parameters are given.
    #[arg(long)]
    pub record: Option<String>,

    /// Catalog JSON to look records up in instead of the builtin table.
    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// Impact parameter in µm, overriding the record's.
    #[arg(long)]
    #[serde(rename = "y_e_um")]
    pub ye_um: Option<f64>,

    /// Custom experiment: electron energy in keV.
    #[arg(long)]
    #[serde(rename = "energy_keV")]
    pub energy_kev: Option<f64>,

    /// Custom experiment: coherence length in nm.
    #[arg(long)]
    #[serde(rename = "Lcoh_nm")]
    pub lcoh_nm: Option<f64>,

    /// Custom experiment: energy spread in eV (instead of --lcoh-nm).
    #[arg(long)]
    #[serde(rename = "energy_spread_eV")]
    pub energy_spread_ev: Option<f64>,

    /// Custom experiment: enclosed flux in G·cm².
    #[arg(long)]
    #[serde(rename = "flux_Gcm2")]
    pub flux_gcm2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreMode {
    WithCore,
    WithoutCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    Classical,
    Semiclassical,
    Numeric,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct SweepParams {
    /// Smallest current in A [default: 0].
    #[arg(long)]
    #[serde(rename = "current_min_A")]
    pub current_min: Option<f64>,

    /// Largest current in A.
    #[arg(long)]
    #[serde(rename = "current_max_A")]
    pub current_max: Option<f64>,

    /// Number of currents, endpoints included [default: 11].
    #[arg(long)]
    #[serde(rename = "steps_count")]
    pub steps: Option<usize>,

    /// Core configurations to evaluate [default: with-core,without-core].
    #[arg(long, value_enum, value_delimiter = ',')]
    pub modes: Option<Vec<CoreMode>>,

    /// Relative permeability of the iron core [default: 150].
    #[arg(long)]
    #[serde(rename = "mu_r_core_dimless")]
    pub mu_r_core: Option<f64>,

    /// Electron kinetic energy in keV (required).
    #[arg(long)]
    #[serde(rename = "energy_keV")]
    pub energy_kev: Option<f64>,

    /// Solenoid radius in mm [default: 1.25].
    #[arg(long)]
    pub solenoid_r_mm: Option<f64>,

    /// Winding density in turns per mm [default: 3].
    #[arg(long)]
    pub n_per_mm: Option<f64>,

    /// Impact parameter in µm (required).
    #[arg(long)]
    #[serde(rename = "y_e_um")]
    pub ye_um: Option<f64>,

    /// Delay columns to compute [default: classical,semiclassical,numeric].
    #[arg(long, value_enum, value_delimiter = ',')]
    pub outputs: Option<Vec<SweepOutput>>,
}
