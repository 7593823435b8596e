//! Sweep configuration: a flat key=value file plus CLI overrides.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::ar1d::ArModel1D;
use crate::criteria::{beta_bounds, Criterion};
use crate::error::{Error, Result};
use crate::support::Support;

/// 1-D grid of beta values, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl BetaGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = BetaGrid { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.start && self.start <= self.stop && self.stop <= 1.0) {
            return Err(Error::Config(format!(
                "beta grid must satisfy 0 <= start <= stop <= 1, got {}:{}:{}",
                self.start, self.stop, self.step
            )));
        }
        if self.step <= 0.0 || self.step.is_nan() {
            return Err(Error::Config(format!(
                "beta grid step must be positive, got {}",
                self.step
            )));
        }
        Ok(())
    }

    /// The grid points start, start+step, ..., up to stop (inclusive
    /// within floating-point slack).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for BetaGrid {
    type Err = Error;

    /// Parses the `START:STOP:STEP` form used by `--beta-grid`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(Error::Config(format!(
                "beta grid must be START:STOP:STEP, got {s:?}"
            )));
        };
        let parse = |v: &str, what: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid beta grid {what} {v:?}")))
        };
        BetaGrid::new(
            parse(start, "start")?,
            parse(stop, "stop")?,
            parse(step, "step")?,
        )
    }
}

/// Everything a Monte-Carlo sweep needs.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Series length per replicate.
    pub n: usize,
    /// Number of Monte-Carlo replicates.
    pub runs: usize,
    /// The data-generating model.
    pub true_model: ArModel1D,
    /// Largest candidate lag m.
    pub max_order: usize,
    pub beta_grid: BetaGrid,
    /// Replicate r is seeded with base_seed + r.
    pub base_seed: u64,
    /// Target of the success statistics: the classical method succeeds
    /// when it picks the order max(success_support), the Nishii method
    /// when it returns exactly this set.
    pub success_support: Support,
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        SweepConfig::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Parses the key=value format. Required keys: n, runs, max_order,
    /// coeffs, sigma2. Optional: beta_grid (default 0:1:0.01), seed
    /// (default 1), success_support (default: the lags of the nonzero
    /// coefficients).
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut runs = None;
        let mut max_order = None;
        let mut coeffs: Option<Vec<f64>> = None;
        let mut sigma2 = None;
        let mut beta_grid = BetaGrid {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        };
        let mut base_seed = 1u64;
        let mut success_support: Option<Support> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key=value, got {line:?}",
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| {
                Error::Config(format!("line {}: invalid {what} {value:?}", lineno + 1))
            };
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
                "runs" => runs = Some(value.parse::<usize>().map_err(|_| bad("runs"))?),
                "max_order" => {
                    max_order = Some(value.parse::<usize>().map_err(|_| bad("max_order"))?)
                }
                "coeffs" => {
                    let parsed: std::result::Result<Vec<f64>, _> =
                        value.split(',').map(|v| v.trim().parse::<f64>()).collect();
                    coeffs = Some(parsed.map_err(|_| bad("coeffs"))?);
                }
                "sigma2" => sigma2 = Some(value.parse::<f64>().map_err(|_| bad("sigma2"))?),
                "beta_grid" => beta_grid = value.parse()?,
                "seed" => base_seed = value.parse::<u64>().map_err(|_| bad("seed"))?,
                "success_support" => {
                    let parsed: std::result::Result<Vec<usize>, _> = value
                        .split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect();
                    let lags = parsed.map_err(|_| bad("success_support"))?;
                    if lags.contains(&0) {
                        return Err(bad("success_support"));
                    }
                    success_support = Some(Support::new(lags));
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }

        let n = n.ok_or_else(|| Error::Config("missing key n".into()))?;
        let runs = runs.ok_or_else(|| Error::Config("missing key runs".into()))?;
        let max_order = max_order.ok_or_else(|| Error::Config("missing key max_order".into()))?;
        let coeffs = coeffs.ok_or_else(|| Error::Config("missing key coeffs".into()))?;
        let sigma2 = sigma2.ok_or_else(|| Error::Config("missing key sigma2".into()))?;
        let true_model =
            ArModel1D::from_dense(&coeffs, sigma2).map_err(|e| Error::Config(e.to_string()))?;
        let success_support = success_support.unwrap_or_else(|| true_model.support().clone());

        let cfg = SweepConfig {
            n,
            runs,
            true_model,
            max_order,
            beta_grid,
            base_seed,
            success_support,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-checks the cross-field invariants (called again after CLI
    /// overrides).
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Config(format!(
                "n must be at least 3 for the phi_beta penalty, got {}",
                self.n
            )));
        }
        if self.runs < 1 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.max_order < 1 || self.max_order >= self.n {
            return Err(Error::Config(format!(
                "max_order must be in 1..n, got {} with n = {}",
                self.max_order, self.n
            )));
        }
        if self.true_model.max_lag() > self.max_order {
            return Err(Error::Config(format!(
                "true model lag {} exceeds max_order {}",
                self.true_model.max_lag(),
                self.max_order
            )));
        }
        if self.success_support.max_lag().unwrap_or(0) > self.max_order {
            return Err(Error::Config(format!(
                "success_support lag {} exceeds max_order {}",
                self.success_support.max_lag().unwrap_or(0),
                self.max_order
            )));
        }
        self.beta_grid.validate()
    }
}

/// A criterion as named on the command line; `phibetamin` depends on the
/// sample size and is resolved once it is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriterionSpec {
    Aic,
    Bic,
    Phi,
    PhiBeta(f64),
    PhiBetaMin,
}

impl CriterionSpec {
    pub fn resolve(self, n: usize) -> Result<Criterion> {
        Ok(match self {
            CriterionSpec::Aic => Criterion::Aic,
            CriterionSpec::Bic => Criterion::Bic,
            CriterionSpec::Phi => Criterion::phi(),
            CriterionSpec::PhiBeta(beta) => Criterion::phi_beta(beta),
            CriterionSpec::PhiBetaMin => Criterion::phi_beta(beta_bounds(n)?.0),
        })
    }
}

impl FromStr for CriterionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aic" => Ok(CriterionSpec::Aic),
            "bic" => Ok(CriterionSpec::Bic),
            "phi" => Ok(CriterionSpec::Phi),
            "phibetamin" => Ok(CriterionSpec::PhiBetaMin),
            _ => {
                if let Some(beta) = s.strip_prefix("phibeta:") {
                    let beta = beta
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("invalid beta in criterion {s:?}")))?;
                    if !(0.0..=1.0).contains(&beta) {
                        return Err(Error::Config(format!("beta must be in [0, 1], got {beta}")));
                    }
                    Ok(CriterionSpec::PhiBeta(beta))
                } else {
                    Err(Error::Config(format!(
                        "unknown criterion {s:?}; expected aic, bic, phi, phibeta:BETA or phibetamin"
                    )))
                }
            }
        }
    }
}
