//! Command-line flags. Every flag can also come from a JSON config file
//! (`--config`), keyed by the flag name with `_` for `-`; flags given on the
//! command line win.

use std::path::{Path, PathBuf};

use aqo_core::sampler::{QmcConfig, SamplePointRule, SamplerConfig, SamplerKind};
use aqo_core::spectrum::{Method, ProfileConfig, SolverConfig};
use aqo_core::tuner::{BetaRule, TunerConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Environment override for the default dense-solver qubit cap.
pub const ENV_DENSE_CAP: &str = "AQO_DENSE_CAP";
/// Environment override for the default iterative-solver qubit cap.
pub const ENV_ITERATIVE_CAP: &str = "AQO_ITERATIVE_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "aqo",
    version,
    about = "Hard MIS instances, annealing spectra and transverse-field tuning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Generate hard instances with a planted unique MIS.
    Generate(GenerateArgs),
    /// Gap profile, ground-state tracks and adiabatic time of one instance.
    Spectrum(SpectrumArgs),
    /// Local-minima clusters and second-order crossing predictions.
    Analyze(AnalyzeArgs),
    /// Run the tuning loop on one instance.
    Tune(TuneArgs),
    /// Run the tuning loop over a corpus directory.
    Batch(BatchArgs),
    /// Re-execute a command from its manifest and compare outputs.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerArg {
    Exact,
    Qmc,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SolverOpts {
    /// Largest qubit count for dense diagonalization [env AQO_DENSE_CAP].
    #[arg(long)]
    pub dense_cap: Option<usize>,
    /// Largest qubit count for the iterative solver [env AQO_ITERATIVE_CAP].
    #[arg(long)]
    pub iterative_cap: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Relative residual tolerance of the eigensolver.
    #[arg(long)]
    pub residual_tol: Option<f64>,
}

fn env_cap(name: &str) -> CliResult<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{name}={v} is not a qubit count"))),
        Err(_) => Ok(None),
    }
}

impl SolverOpts {
    pub fn apply(&self, mut cfg: SolverConfig) -> CliResult<SolverConfig> {
        if let Some(c) = self.dense_cap.or(env_cap(ENV_DENSE_CAP)?) {
            cfg.dense_cap = c;
        }
        if let Some(c) = self.iterative_cap.or(env_cap(ENV_ITERATIVE_CAP)?) {
            cfg.iterative_cap = c;
        }
        if let Some(m) = self.method {
            cfg.method = match m {
                MethodArg::Auto => Method::Auto,
                MethodArg::Dense => Method::Dense,
                MethodArg::Iterative => Method::Iterative,
            };
        }
        if let Some(t) = self.residual_tol {
            if !(t > 0.0) {
                return Err(CliError::Usage("--residual-tol must be positive".into()));
            }
            cfg.residual_tol = t;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ProfileOpts {
    /// Points of the uniform s grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Levels kept per grid point.
    #[arg(long)]
    pub levels: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverOpts,
}

impl ProfileOpts {
    pub fn config(&self) -> CliResult<ProfileConfig> {
        let mut cfg = ProfileConfig::default();
        if let Some(g) = self.grid {
            cfg.grid_size = g;
        }
        if let Some(l) = self.levels {
            if l < 2 {
                return Err(CliError::Usage("--levels must be at least 2".into()));
            }
            cfg.levels = l;
        }
        cfg.solver = self.solver.apply(cfg.solver)?;
        Ok(cfg)
    }

    /// Solver settings for single-point solves (tight default tolerance).
    pub fn point_solver(&self) -> CliResult<SolverConfig> {
        self.solver.apply(SolverConfig::default())
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SamplerOpts {
    #[arg(long, value_enum)]
    pub sampler: Option<SamplerArg>,
    /// Samples per evaluation.
    #[arg(long)]
    pub r: Option<usize>,
    /// Sample at the last grid point left of s* with gap >= rho * g_min.
    #[arg(long, conflicts_with = "offset")]
    pub rho: Option<f64>,
    /// Sample at s* - offset.
    #[arg(long)]
    pub offset: Option<f64>,
    #[arg(long)]
    pub qmc_slices: Option<usize>,
    #[arg(long)]
    pub qmc_beta: Option<f64>,
    #[arg(long)]
    pub qmc_burn_in: Option<usize>,
    #[arg(long)]
    pub qmc_sweeps: Option<usize>,
    #[arg(long)]
    pub qmc_chains: Option<usize>,
}

impl SamplerOpts {
    pub fn config(&self, seed: u64) -> CliResult<SamplerConfig> {
        let mut cfg = SamplerConfig {
            seed,
            ..SamplerConfig::default()
        };
        if let Some(k) = self.sampler {
            cfg.kind = match k {
                SamplerArg::Exact => SamplerKind::Exact,
                SamplerArg::Qmc => SamplerKind::Qmc,
            };
        }
        if let Some(r) = self.r {
            cfg.r = r;
        }
        match (self.rho, self.offset) {
            (Some(_), Some(_)) => return Err(CliError::Usage("--rho and --offset are exclusive".into())),
            (Some(rho), None) => cfg.point_rule = SamplePointRule::GapRatio { rho },
            (None, Some(delta)) => cfg.point_rule = SamplePointRule::FixedOffset { delta },
            (None, None) => {}
        }
        let q = &mut cfg.qmc;
        *q = QmcConfig {
            slices: self.qmc_slices.unwrap_or(q.slices),
            beta: self.qmc_beta.unwrap_or(q.beta),
            burn_in: self.qmc_burn_in.unwrap_or(q.burn_in),
            sweeps_between: self.qmc_sweeps.unwrap_or(q.sweeps_between),
            chains: self.qmc_chains.unwrap_or(q.chains),
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct TuneOpts {
    /// Largest number of Δ updates.
    #[arg(long)]
    pub max_iter: Option<u32>,
    /// Adiabatic-time success threshold (defaults to the desk calibration).
    #[arg(long, conflicts_with = "no_time_gate")]
    pub t_a_max: Option<f64>,
    /// Disable the adiabatic-time success test.
    #[arg(long)]
    #[serde(default)]
    pub no_time_gate: bool,
    /// Global-basin probability threshold.
    #[arg(long)]
    pub p_min: Option<f64>,
    /// Fixed update weight instead of 1/(κ+1).
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Write ground-state <σz> tracks for every iteration.
    #[arg(long)]
    #[serde(default)]
    pub tracks: bool,
    /// Jump size that counts as a track discontinuity.
    #[arg(long)]
    pub jump_threshold: Option<f64>,
    /// Root seed for sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Wall-clock budget in seconds; runs stop after the iteration that
    /// crosses it.
    #[arg(long)]
    pub time_budget: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub profile: ProfileOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampler: SamplerOpts,
}

impl TuneOpts {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn tuner_config(&self) -> CliResult<TunerConfig> {
        let mut cfg = TunerConfig::desk();
        if let Some(m) = self.max_iter {
            cfg.max_iterations = m;
        }
        if self.no_time_gate {
            cfg.t_a_max = None;
        } else if let Some(t) = self.t_a_max {
            cfg.t_a_max = Some(t);
        }
        if let Some(p) = self.p_min {
            cfg.p_min = p;
        }
        if let Some(b) = self.beta {
            cfg.beta_rule = BetaRule::Fixed(b);
        }
        if let Some(d) = self.delta_min {
            cfg.delta_min = d;
        }
        if let Some(d) = self.delta_max {
            cfg.delta_max = d;
        }
        if let Some(r) = self.sampler.r {
            cfg.r = r;
        }
        if let Some(j) = self.jump_threshold {
            cfg.jump_threshold = j;
        }
        cfg.record_tracks = self.tracks;
        cfg.profile = self.profile.config()?;
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Node count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Random edges placed before the planting steps.
    #[arg(long)]
    pub edges: Option<usize>,
    /// Size of the planted MIS.
    #[arg(long)]
    pub mis: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Penalty constant c of the cost function.
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Attempts per instance, each with a derived seed.
    #[arg(long)]
    pub max_attempts: Option<u32>,
    /// Node cap for the exhaustive census check.
    #[arg(long)]
    pub census_cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Schedule JSON; linear when absent.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Transverse fields as `{version, delta: [...]}`; all ones when absent.
    #[arg(long)]
    pub delta: Option<PathBuf>,
    #[arg(long)]
    pub jump_threshold: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub profile: ProfileOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<PathBuf>,
    /// Compare against clusters of every smaller size, not just MIS size - 1.
    #[arg(long)]
    #[serde(default)]
    pub all_sizes: bool,
    #[arg(long)]
    pub census_cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct TuneArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tune: TuneOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct BatchArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Directory of instance files.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Instances tuned in parallel.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tune: TuneOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory for the fresh outputs.
    #[arg(long)]
    pub out: PathBuf,
}

/// Overlays command-line values onto the config file, if any. Unset
/// options and `false` switches do not override the file.
pub fn merge_config<T: Serialize + DeserializeOwned>(cli: &T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(serde_json::from_value(serde_json::to_value(cli)?)?);
    };
    let Value::Object(known) = serde_json::to_value(cli)? else {
        return Err(CliError::Internal("flags do not serialize to an object".into()));
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    let Value::Object(mut merged) = serde_json::from_str(&text).map_err(|e| CliError::read(path, e))? else {
        return Err(CliError::read(path, "config must be a JSON object"));
    };
    if let Some(k) = merged.keys().find(|k| !known.contains_key(*k)) {
        return Err(CliError::Usage(format!("{}: unknown config key `{k}`", path.display())));
    }
    for (k, v) in known {
        if !(v.is_null() || v == Value::Bool(false)) {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::read(path, e))
}

pub fn required<'a, T>(v: &'a Option<T>, flag: &str) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_fills_and_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"n": 12, "edges": 14, "count": 3, "seed": 5}"#).unwrap();
        let cli = GenerateArgs {
            seed: Some(9),
            ..GenerateArgs::default()
        };
        let m = merge_config(&cli, Some(&path)).unwrap();
        assert_eq!((m.n, m.edges, m.count, m.seed), (Some(12), Some(14), Some(3), Some(9)));
    }

    #[test]
    fn nested_options_are_flat_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(
            &path,
            r#"{"grid": 11, "iterative_cap": 14, "rho": 3.0, "tracks": true}"#,
        )
        .unwrap();
        let m = merge_config(&TuneArgs::default(), Some(&path)).unwrap();
        assert_eq!(m.tune.profile.grid, Some(11));
        assert_eq!(m.tune.profile.solver.iterative_cap, Some(14));
        assert_eq!(m.tune.sampler.rho, Some(3.0));
        assert!(m.tune.tracks);
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"nodes": 12}"#).unwrap();
        assert!(matches!(
            merge_config(&GenerateArgs::default(), Some(&path)),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn rho_and_offset_exclusive() {
        let o = SamplerOpts {
            rho: Some(3.0),
            offset: Some(0.05),
            ..SamplerOpts::default()
        };
        assert!(matches!(o.config(0), Err(CliError::Usage(_))));
    }
}
