//! Run configuration: a JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::aggregate::{FnMethod, WeightScheme};
use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::report::Format;

/// Smallest Monte Carlo sample accepted from the command line.
pub const MIN_MC_COUNT: usize = 10_000;

/// Default ROC levels for `premium`.
pub const DEFAULT_TAU: [f64; 2] = [0.06, 0.10];

/// The JSON config file. Every field is optional; flags fill in or override.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<String>,
    pub weights: Option<Vec<f64>>,
    pub grid: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
    pub mc: Option<McConfig>,
    pub fn_method: Option<String>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overridden_by(self, flags: RunConfig) -> RunConfig {
        let mc = match (self.mc, flags.mc) {
            (Some(a), Some(b)) => Some(McConfig {
                count: b.count.or(a.count),
                seed: b.seed.or(a.seed),
            }),
            (a, b) => b.or(a),
        };
        let output = match (self.output, flags.output) {
            (Some(a), Some(b)) => Some(OutputConfig {
                format: b.format.or(a.format),
                path: b.path.or(a.path),
            }),
            (a, b) => b.or(a),
        };
        RunConfig {
            model: flags.model.or(self.model),
            weights: flags.weights.or(self.weights),
            grid: flags.grid.or(self.grid),
            tau: flags.tau.or(self.tau),
            mc,
            fn_method: flags.fn_method.or(self.fn_method),
            output,
        }
    }
}

/// Seeded Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mc {
    pub count: usize,
    pub seed: u64,
}

/// Whether the grid holds levels `x > 0` or probabilities `p ∈ (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Levels,
    Probabilities,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Job {
    pub model: TailModel,
    pub weights: WeightScheme,
    pub grid: Vec<f64>,
    pub tau: Vec<f64>,
    pub mc: Option<Mc>,
    pub fn_method: FnMethod,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// Output settings alone, for commands that take no model.
pub fn resolve_output(cfg: &RunConfig) -> (Format, Option<PathBuf>) {
    let out = cfg.output.clone().unwrap_or_default();
    (out.format.unwrap_or_default(), out.path)
}

impl Job {
    pub fn resolve(cfg: RunConfig, kind: GridKind) -> Result<Self> {
        let (format, out) = resolve_output(&cfg);
        let Some(spec) = cfg.model else {
            return config_err("no model given (--model or \"model\" in the config)");
        };
        let model: TailModel = spec.parse().map_err(|e| match e {
            Error::Domain(m) => Error::Domain(m),
            other => Error::Config(other.to_string()),
        })?;
        let Some(raw) = cfg.weights else {
            return config_err("no weights given (--weights or \"weights\" in the config)");
        };
        let weights = WeightScheme::new(raw).map_err(|e| Error::Config(e.to_string()))?;

        let grid = cfg.grid.unwrap_or_default();
        if grid.is_empty() {
            return config_err("grid must not be empty");
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return config_err("grid must be strictly ascending");
        }
        let ok = |v: &f64| match kind {
            GridKind::Levels => v.is_finite() && *v > 0.0,
            GridKind::Probabilities => *v > 0.0 && *v < 1.0,
        };
        if let Some(bad) = grid.iter().find(|v| !ok(v)) {
            return config_err(match kind {
                GridKind::Levels => format!("grid values must be positive, got {bad}"),
                GridKind::Probabilities => format!("grid values must lie in (0,1), got {bad}"),
            });
        }

        let tau = cfg.tau.unwrap_or_else(|| DEFAULT_TAU.to_vec());
        if tau.is_empty() {
            return config_err("tau list must not be empty");
        }
        if let Some(bad) = tau.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return config_err(format!("tau values must lie in (0,1), got {bad}"));
        }

        let mc = match cfg.mc {
            None => None,
            Some(McConfig { count: Some(count), seed: Some(seed) }) => {
                if count < MIN_MC_COUNT {
                    return config_err(format!("Monte Carlo count must be at least {MIN_MC_COUNT}, got {count}"));
                }
                Some(Mc { count, seed })
            }
            Some(McConfig { count: None, seed: None }) => None,
            Some(_) => return config_err("Monte Carlo needs both a count and an explicit seed"),
        };

        let fn_method = match cfg.fn_method.as_deref().map(str::trim) {
            None if weights.n() == 2 => FnMethod::ExactN2,
            None | Some("asymptotic") => FnMethod::Asymptotic,
            Some("exact_n2") => FnMethod::ExactN2,
            Some("monte_carlo") => match mc {
                // an independent stream for S_{n−1}(c)
                Some(m) => FnMethod::MonteCarlo { count: m.count, seed: m.seed.wrapping_add(1) },
                None => return config_err("fn_method monte_carlo needs --mc-count and --seed"),
            },
            Some(other) => {
                return config_err(format!("unknown fn_method '{other}' (exact_n2|monte_carlo|asymptotic)"))
            }
        };

        Ok(Job { model, weights, grid, tau, mc, fn_method, format, out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig {
            model: Some("std_pareto:alpha=1".into()),
            weights: Some(vec![1.0, 1.0]),
            grid: Some(vec![10.0, 100.0]),
            ..Default::default()
        }
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig::from_json(
            r#"{"model":"burr:a=0.8,b=2.5","weights":[0.5,1],"grid":[0.99],"mc":{"count":20000,"seed":3},"output":{"format":"json"}}"#,
        )
        .unwrap();
        let flags = RunConfig {
            grid: Some(vec![0.995]),
            mc: Some(McConfig { count: None, seed: Some(9) }),
            ..Default::default()
        };
        let cfg = file.overridden_by(flags);
        assert_eq!(cfg.grid, Some(vec![0.995]));
        assert_eq!(cfg.mc, Some(McConfig { count: Some(20000), seed: Some(9) }));
        let job = Job::resolve(cfg, GridKind::Probabilities).unwrap();
        assert_eq!(job.format, Format::Json);
        assert_eq!(job.fn_method, FnMethod::ExactN2);
        assert_eq!(job.tau, DEFAULT_TAU.to_vec());
    }

    #[test]
    fn rejects_bad_configs() {
        let is_config = |cfg: RunConfig, kind| matches!(Job::resolve(cfg, kind), Err(Error::Config(_)));
        assert!(is_config(RunConfig { grid: Some(vec![]), ..base() }, GridKind::Levels));
        assert!(is_config(RunConfig { grid: Some(vec![100.0, 10.0]), ..base() }, GridKind::Levels));
        assert!(is_config(base(), GridKind::Probabilities));
        assert!(is_config(
            RunConfig { mc: Some(McConfig { count: Some(100), seed: Some(1) }), ..base() },
            GridKind::Levels
        ));
        assert!(is_config(
            RunConfig { mc: Some(McConfig { count: Some(100_000), seed: None }), ..base() },
            GridKind::Levels
        ));
        assert!(is_config(RunConfig { fn_method: Some("monte_carlo".into()), ..base() }, GridKind::Levels));
        assert!(is_config(RunConfig { model: Some("nope:x=1".into()), ..base() }, GridKind::Levels));
        assert!(RunConfig::from_json(r#"{"modle":"x"}"#).is_err());
        assert!(matches!(
            Job::resolve(RunConfig { model: Some("burr:a=-1,b=2".into()), ..base() }, GridKind::Levels),
            Err(Error::Domain(_))
        ));
    }
}
