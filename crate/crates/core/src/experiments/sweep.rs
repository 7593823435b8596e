//! Monte-Carlo beta sweeps: success rates, prediction error variance and
//! Kullback distance of both selection methods across the penalty
//! exponent grid.

use std::collections::HashMap;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::ar1d::{autocovariance, simulate, stability_check, ArFitCache, ArIcEvaluator};
use crate::criteria::{beta_bounds, beta_equivalent, BetaTarget, Criterion};
use crate::error::{Error, Result};
use crate::experiments::config::SweepConfig;
use crate::metrics::kullback;
use crate::selection::{select_classical, select_nishii};
use crate::support::Support;

/// Transient samples discarded before each simulated series.
const BURN_IN: usize = 1000;

/// The Kullback report stops before the classical method starts to
/// underparametrize.
const KULLBACK_BETA_CAP: f64 = 0.35;

/// Reference beta values drawn on the plots; absent when the sample size
/// is too small for the defining formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Markers {
    pub beta_aic: Option<f64>,
    pub beta_bic: Option<f64>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
}

/// Aggregated results at one beta value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub classical_success_pct: f64,
    pub nishii_success_pct: f64,
    pub mean_pev_classical: f64,
    pub mean_pev_nishii: f64,
    /// Present only in the Kullback report.
    pub mean_kullback_classical: Option<f64>,
    pub mean_kullback_nishii: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub markers: Markers,
    pub rows: Vec<SweepRow>,
}

/// One replicate's outcome at one beta value.
struct Point {
    classical_ok: bool,
    nishii_ok: bool,
    pev_classical: f64,
    pev_nishii: f64,
    kullback_classical: Option<f64>,
    kullback_nishii: Option<f64>,
}

/// Runs the full sweep over the configured grid. Each replicate simulates
/// one series and reuses it for every beta, so the curves are comparable
/// point to point.
pub fn run_beta_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    sweep_impl(cfg, cfg.beta_grid.points(), false)
}

/// Runs the sweep with Kullback columns, on the grid truncated to
/// beta <= 0.35.
pub fn run_kullback_report(cfg: &SweepConfig) -> Result<SweepReport> {
    let betas: Vec<f64> = cfg
        .beta_grid
        .points()
        .into_iter()
        .filter(|&b| b <= KULLBACK_BETA_CAP + 1e-12)
        .collect();
    sweep_impl(cfg, betas, true)
}

fn sweep_impl(cfg: &SweepConfig, betas: Vec<f64>, with_kullback: bool) -> Result<SweepReport> {
    cfg.validate()?;
    let stability = stability_check(&cfg.true_model);
    if !stability.stable {
        return Err(Error::Unstable {
            modulus: stability.min_root_modulus,
        });
    }

    let per_replicate: Vec<Vec<Point>> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| replicate(cfg, &betas, r, with_kullback))
        .collect::<Result<_>>()?;

    let runs = cfg.runs as f64;
    let rows = betas
        .iter()
        .enumerate()
        .map(|(i, &beta)| {
            let points = per_replicate.iter().map(|rep| &rep[i]);
            let mut classical_hits = 0u64;
            let mut nishii_hits = 0u64;
            let mut pev_c = 0.0;
            let mut pev_n = 0.0;
            let mut ku_c = 0.0;
            let mut ku_n = 0.0;
            for p in points {
                classical_hits += p.classical_ok as u64;
                nishii_hits += p.nishii_ok as u64;
                pev_c += p.pev_classical;
                pev_n += p.pev_nishii;
                ku_c += p.kullback_classical.unwrap_or(0.0);
                ku_n += p.kullback_nishii.unwrap_or(0.0);
            }
            SweepRow {
                beta,
                classical_success_pct: classical_hits as f64 / runs * 100.0,
                nishii_success_pct: nishii_hits as f64 / runs * 100.0,
                mean_pev_classical: pev_c / runs,
                mean_pev_nishii: pev_n / runs,
                mean_kullback_classical: with_kullback.then_some(ku_c / runs),
                mean_kullback_nishii: with_kullback.then_some(ku_n / runs),
            }
        })
        .collect();

    Ok(SweepReport {
        markers: markers_for(cfg.n),
        rows,
    })
}

pub fn markers_for(n: usize) -> Markers {
    let bounds = beta_bounds(n).ok();
    Markers {
        beta_aic: beta_equivalent(BetaTarget::Aic, n).ok(),
        beta_bic: beta_equivalent(BetaTarget::Bic, n).ok(),
        beta_min: bounds.map(|b| b.0),
        beta_max: bounds.map(|b| b.1),
    }
}

fn replicate(
    cfg: &SweepConfig,
    betas: &[f64],
    index: usize,
    with_kullback: bool,
) -> Result<Vec<Point>> {
    let seed = cfg.base_seed.wrapping_add(index as u64);
    let series = simulate(&cfg.true_model, cfg.n, seed, BURN_IN)?;
    let acov = autocovariance(&series, cfg.max_order)?;
    let cache = ArFitCache::new(acov, cfg.max_order)?;
    let success_order = cfg.success_support.max_lag().unwrap_or(0);

    // The handful of models actually chosen across the grid is small;
    // each gets its Kullback distance computed once.
    let mut kullback_memo: HashMap<Support, f64> = HashMap::new();
    let mut kullback_for = |chosen: &Support| -> Result<f64> {
        if let Some(&k) = kullback_memo.get(chosen) {
            return Ok(k);
        }
        let est = cache.model_for_support(chosen)?;
        let k = kullback(&cfg.true_model, &est, cfg.n)?;
        kullback_memo.insert(chosen.clone(), k);
        Ok(k)
    };

    betas
        .iter()
        .map(|&beta| {
            let evaluator = ArIcEvaluator::new(&cache, Criterion::phi_beta(beta));
            let classical = select_classical(&evaluator)?;
            let nishii = select_nishii(&evaluator)?;
            let k_hat = classical.chosen.max_lag().unwrap_or(0);
            let (kullback_classical, kullback_nishii) = if with_kullback {
                (
                    Some(kullback_for(&classical.chosen)?),
                    Some(kullback_for(&nishii.chosen)?),
                )
            } else {
                (None, None)
            };
            Ok(Point {
                classical_ok: k_hat == success_order,
                nishii_ok: nishii.chosen == cfg.success_support,
                pev_classical: cache.support_fit(&classical.chosen)?.sigma2,
                pev_nishii: cache.support_fit(&nishii.chosen)?.sigma2,
                kullback_classical,
                kullback_nishii,
            })
        })
        .collect()
}

/// Writes the sweep CSV: marker comment lines, a header, then one
/// fixed-format row per beta. Kullback columns are left empty when the
/// report does not carry them.
pub fn write_sweep_csv<W: Write + ?Sized>(report: &SweepReport, out: &mut W) -> io::Result<()> {
    let m = &report.markers;
    for (name, value) in [
        ("beta_aic", m.beta_aic),
        ("beta_bic", m.beta_bic),
        ("beta_min", m.beta_min),
        ("beta_max", m.beta_max),
    ] {
        if let Some(v) = value {
            writeln!(out, "# {name}={v:.6}")?;
        }
    }
    writeln!(
        out,
        "beta,classical_success_pct,nishii_success_pct,mean_pev_classical,\
         mean_pev_nishii,mean_kullback_classical,mean_kullback_nishii"
    )?;
    for row in &report.rows {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            row.beta,
            row.classical_success_pct,
            row.nishii_success_pct,
            row.mean_pev_classical,
            row.mean_pev_nishii,
            opt(row.mean_kullback_classical),
            opt(row.mean_kullback_nishii),
        )?;
    }
    Ok(())
}
