//! Command-line flags, the JSON run configuration, and their merge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use harvestkit::quadrature::QuadSpec;
use harvestkit::sweep_opt::{Axis, AxisName, Quantity, Spacing};
use harvestkit::{Params, Spec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::table::Format;

/// Environment variable consulted when neither a flag nor the config sets the worker count.
pub const WORKERS_ENV: &str = "HARVESTKIT_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "harvestkit",
    version,
    about = "Entanglement harvesting from a massive scalar field"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Mean detector gap (equal gaps unless --delta-omega is set)
    #[arg(
        long,
        global = true,
        visible_alias = "omega-bar",
        allow_negative_numbers = true
    )]
    pub omega: Option<f64>,
    /// Half the difference of the two gaps
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta_omega: Option<f64>,
    /// Field mass
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Detector size
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Detector separation
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub ell: Option<f64>,
    /// Coupling constant
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (falls back to HARVESTKIT_WORKERS)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate the density matrix and negativity at one parameter point
    Eval,
    /// Evaluate a quantity over a parameter grid
    Sweep {
        /// Axis as name:min:max:count[:log], repeatable; last axis varies fastest
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// negativity, n_plus, L, absM, re_m, im_m or signalling_fraction
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Maximize the negativity or locate its threshold
    Optimize {
        #[command(subcommand)]
        target: Target,
    },
    /// Data behind a numbered figure (1, 3-12, A1)
    Figure { id: String },
    /// Fit the gap-offset constants and compare with the reference values
    FitCheck,
    /// Run the oracle and invariant checks
    Verify,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Target {
    /// Best gap on [0.1, ell]
    Omega {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Best mass on [0, mu_max]
    Mu {
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 2.0)]
        mu_max: f64,
        /// Re-optimize the gap at every mass
        #[arg(long)]
        optimize_gap: bool,
    },
    /// Smallest gap with non-zero negativity
    Threshold {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// Axis entry of the JSON configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

/// Contents of a `--config` file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(alias = "omega_bar")]
    pub omega: Option<f64>,
    pub delta_omega: Option<f64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub ell: Option<f64>,
    pub lambda: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub axes: Vec<AxisConfig>,
    pub quantity: Option<String>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub params: Params,
    pub quad: Spec,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub axes: Vec<AxisConfig>,
    pub quantity: Option<String>,
}

pub const DEFAULT_OMEGA: f64 = 2.0;
pub const DEFAULT_SIGMA: f64 = 0.2;
pub const DEFAULT_ELL: f64 = 5.0;

fn workers_from_env() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map(Some).map_err(|_| {
            CliError::Config(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))
        }),
        _ => Ok(None),
    }
}

impl Settings {
    /// Merges flags over the config file over defaults and validates the result.
    pub fn resolve(opts: &Options) -> CliResult<Self> {
        let file = match &opts.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let pick =
            |flag: Option<f64>, conf: Option<f64>, default: f64| flag.or(conf).unwrap_or(default);
        let omega = pick(opts.omega, file.omega, DEFAULT_OMEGA);
        let params = Params::new(
            omega,
            pick(opts.mu, file.mu, 0.0),
            pick(opts.sigma, file.sigma, DEFAULT_SIGMA),
            pick(opts.ell, file.ell, DEFAULT_ELL),
        )?
        .with_gap_split(pick(opts.delta_omega, file.delta_omega, 0.0))
        .with_coupling(pick(opts.lambda, file.lambda, 1.0));
        params.validate()?;
        let default = QuadSpec::default();
        let quad = QuadSpec::new(
            pick(opts.rel_tol, file.rel_tol, default.rel_tol),
            pick(opts.abs_tol, file.abs_tol, default.abs_tol),
        )?;
        let workers = match opts.workers.or(file.workers) {
            Some(n) => Some(n),
            None => workers_from_env()?,
        };
        if workers == Some(0) {
            return Err(CliError::Config("worker count must be positive".into()));
        }
        Ok(Self {
            params,
            quad,
            format: opts.format.or(file.format).unwrap_or_default(),
            out: opts.out.clone().or(file.out),
            workers,
            axes: file.axes,
            quantity: file.quantity,
        })
    }

    /// Runs `f` on a pool with the configured number of workers.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> CliResult<R> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            b = b.num_threads(n);
        }
        let pool = b
            .build()
            .map_err(|e| CliError::Config(format!("cannot start workers: {e}")))?;
        Ok(pool.install(f))
    }
}

pub fn parse_quantity(s: &str) -> CliResult<Quantity> {
    Quantity::parse(s).ok_or_else(|| {
        let known: Vec<&str> = Quantity::ALL.iter().map(|q| q.as_str()).collect();
        CliError::Config(format!(
            "unknown quantity {s:?} (expected one of {})",
            known.join(", ")
        ))
    })
}

fn parse_axis_name(s: &str) -> CliResult<AxisName> {
    AxisName::parse(s).ok_or_else(|| {
        let known: Vec<&str> = AxisName::ALL.iter().map(|a| a.as_str()).collect();
        CliError::Config(format!(
            "unknown axis {s:?} (expected one of {})",
            known.join(", ")
        ))
    })
}

/// Parses `name:min:max:count[:log]`.
pub fn parse_axis_flag(s: &str) -> CliResult<AxisConfig> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || {
        CliError::Config(format!(
            "axis {s:?} must look like name:min:max:count[:log]"
        ))
    };
    if !(parts.len() == 4 || parts.len() == 5 && parts[4] == "log") {
        return Err(bad());
    }
    Ok(AxisConfig {
        name: parts[0].to_string(),
        min: parts[1].parse().map_err(|_| bad())?,
        max: parts[2].parse().map_err(|_| bad())?,
        count: parts[3].parse().map_err(|_| bad())?,
        log: parts.len() == 5,
    })
}

impl AxisConfig {
    pub fn to_axis(&self) -> CliResult<Axis<f64>> {
        let axis = Axis {
            name: parse_axis_name(&self.name)?,
            min: self.min,
            max: self.max,
            count: self.count,
            spacing: if self.log {
                Spacing::Log
            } else {
                Spacing::Linear
            },
        };
        axis.validate()?;
        Ok(axis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_flags() {
        let a = parse_axis_flag("mu:0:2:41").unwrap();
        assert_eq!(
            (a.name.as_str(), a.min, a.max, a.count, a.log),
            ("mu", 0.0, 2.0, 41, false)
        );
        assert!(parse_axis_flag("sigma:0.01:1:5:log").unwrap().log);
        assert!(parse_axis_flag("mu:0:2").is_err());
        assert!(parse_axis_flag("mu:0:2:4:lin").is_err());
        assert!(parse_axis_flag("nope:0:2:4").unwrap().to_axis().is_err());
        assert!(parse_axis_flag("mu:2:0:4").unwrap().to_axis().is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{"omega_bar": 3.0, "mu": 0.4, "rel_tol": 1e-8, "workers": 3}"#,
        )
        .unwrap();
        let opts = Options {
            mu: Some(0.7),
            config: Some(path),
            ..Options::default()
        };
        let s = Settings::resolve(&opts).unwrap();
        assert_eq!(s.params.gap_mean, 3.0);
        assert_eq!(s.params.mass, 0.7);
        assert_eq!(s.quad.rel_tol, 1e-8);
        assert_eq!(s.workers, Some(3));
        assert_eq!(s.params.separation, DEFAULT_ELL);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"omgea": 3.0}"#).unwrap();
        let opts = Options {
            config: Some(path),
            ..Options::default()
        };
        assert!(matches!(Settings::resolve(&opts), Err(CliError::Config(_))));
    }
}
