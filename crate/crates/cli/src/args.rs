use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "lescat", version, about = "Low-energy scattering observables from radial integration")]
pub struct Cli {
    /// JSON file with the same keys as the flags; flags given on the command
    /// line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scattering length, effective range and node count.
    Compute(ComputeArgs),
    /// Normalized zero-energy u(r) as CSV.
    Wavefunction(WavefunctionArgs),
    /// Tune two parameters to a target (a, r0).
    Tune(TuneArgs),
    /// a, r0 and nodes over a parameter grid.
    Scan(ScanArgs),
    /// Phase shifts over a grid of wave numbers.
    Phaseshift(PhaseArgs),
    /// Zero- and finite-range bound-state energies.
    Bound(BoundArgs),
    /// Recompute a reference table and compare.
    Table(TableArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute(_) => "compute",
            Command::Wavefunction(_) => "wavefunction",
            Command::Tune(_) => "tune",
            Command::Scan(_) => "scan",
            Command::Phaseshift(_) => "phaseshift",
            Command::Bound(_) => "bound",
            Command::Table(_) => "table",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct PotentialArgs {
    /// well, mpt, gaussian, lj or tabulated.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Pöschl-Teller strength as λ instead of v.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub c12: Option<f64>,
    #[arg(long)]
    pub c6: Option<f64>,
    /// Tabulated potential: JSON with arrays "r" and "v".
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SolverArgs {
    /// Step size [default: 1e-4].
    #[arg(long)]
    pub dr: Option<f64>,
    /// numerov or central [default: numerov].
    #[arg(long)]
    pub method: Option<String>,
    /// simpson or trapezoid [default: simpson].
    #[arg(long)]
    pub rule: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct UnitArgs {
    /// dimensionless, fm or angstrom [default: dimensionless].
    #[arg(long)]
    pub units: Option<String>,
    /// The length unit ℓ of the dimensionless scheme, in `units`.
    #[arg(long)]
    pub length_scale: Option<f64>,
    /// Reduced-mass preset: nn, np or he4-dimer.
    #[arg(long)]
    pub mass: Option<String>,
    /// Reduced mass m_r c² in MeV (overrides --mass).
    #[arg(long)]
    pub reduced_mass: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ComputeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub units: UnitArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct WavefunctionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Continue past R with the outside solution 1 - r/a up to here.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Keep every n-th grid point.
    #[arg(long)]
    pub stride: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct TuneArgs {
    /// Starting parameters; without them a default start for the family is used.
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Target as TuneTarget JSON.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Target scattering length, a number or "unitary".
    #[arg(long, allow_hyphen_values = true)]
    #[serde(deserialize_with = "number_or_text")]
    pub a: Option<String>,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub tol_a: Option<f64>,
    #[arg(long)]
    pub tol_r0: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Include every outer iterate in the output.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ScanArgs {
    /// well, mpt, gaussian or lj.
    #[arg(long)]
    pub potential: Option<String>,
    /// strength (v or C6) or size (μ or C12).
    #[arg(long)]
    pub vary: Option<String>,
    /// Value of the parameter that is not varied.
    #[arg(long)]
    pub fixed: Option<f64>,
    /// Explicit grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct PhaseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Partial wave [default: 0].
    #[arg(long)]
    pub l: Option<u32>,
    /// Wave numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<f64>,
    #[arg(long)]
    pub k_from: Option<f64>,
    #[arg(long)]
    pub k_to: Option<f64>,
    #[arg(long)]
    pub k_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct BoundArgs {
    /// deuteron or he4-dimer.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub units: UnitArgs,
    /// mev or mk [default: mev].
    #[arg(long)]
    pub energy_unit: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct TableArgs {
    /// 1, 3 or 4.
    pub table: Option<u32>,
    /// Check the output of `compute` against the table instead.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

/// Accepts `-18.5` as well as `"-18.5"` or `"unitary"`.
fn number_or_text<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(match Option::<Value>::deserialize(d)? {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(Value::Number(n)) => Some(n.to_string()),
        Some(other) => return Err(serde::de::Error::custom(format!("expected a number or \"unitary\", got {other}"))),
    })
}

/// Fills unset flags from a config object. Keys must be flag names.
pub fn merge_config<T>(flags: &T, config: &Map<String, Value>) -> Result<T, Failure>
where
    T: Serialize + DeserializeOwned + Default,
{
    let known = match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    if let Some(bad) = config.keys().find(|k| !known.contains_key(*k)) {
        return Err(Failure::config(format!("unknown config key '{bad}'")));
    }
    let mut merged = config.clone();
    if let Ok(Value::Object(given)) = serde_json::to_value(flags) {
        for (k, v) in given {
            let unset = match &v {
                Value::Null | Value::Bool(false) => true,
                Value::Array(a) => a.is_empty(),
                _ => false,
            };
            if !unset {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::config(format!("bad config: {e}")))
}
