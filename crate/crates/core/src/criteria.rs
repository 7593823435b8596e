//! Penalty functions for the information-criterion family.
//!
//! An information criterion scores a candidate model as
//! `fit_term + size * alpha(n)` where `alpha` depends on the criterion:
//! AIC uses 2, BIC uses ln n, and the phi_beta family uses n^beta * ln ln n.
//! phi_beta contains the others: for a given sample size there is a beta
//! that reproduces the AIC penalty and one that reproduces BIC, and beta = 0
//! is the phi criterion. Natural logarithms throughout; the equivalences
//! only hold in a single consistent base.

use crate::error::{Error, Result};

/// Penalty family used to score model complexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    Aic,
    Bic,
    /// `alpha(n) = n^beta * ln ln n`. The usual sweep range is
    /// 0 <= beta <= 1 (beta = 0 is the phi criterion), but negative
    /// values are accepted so the AIC-equivalent beta of large samples
    /// can still be evaluated.
    PhiBeta {
        beta: f64,
    },
}

impl Criterion {
    /// The phi criterion, i.e. phi_beta with beta = 0.
    pub fn phi() -> Self {
        Criterion::PhiBeta { beta: 0.0 }
    }

    pub fn phi_beta(beta: f64) -> Self {
        Criterion::PhiBeta { beta }
    }

    /// Smallest sample size the penalty is defined for.
    fn min_n(self) -> usize {
        match self {
            Criterion::Aic => 1,
            // ln ln n must be strictly positive (and BIC is kept on the
            // same footing so every criterion sees the same domain).
            Criterion::Bic | Criterion::PhiBeta { .. } => 3,
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Criterion::Aic => write!(f, "aic"),
            Criterion::Bic => write!(f, "bic"),
            Criterion::PhiBeta { beta } if *beta == 0.0 => write!(f, "phi"),
            Criterion::PhiBeta { beta } => write!(f, "phibeta:{beta}"),
        }
    }
}

/// Which classical criterion a phi_beta value should reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaTarget {
    Aic,
    Bic,
}

/// Per-parameter penalty `alpha(n)`.
///
/// Returns 2 for AIC, ln n for BIC and n^beta * ln ln n for phi_beta.
pub fn penalty(c: Criterion, n: usize) -> Result<f64> {
    if n < c.min_n() {
        return Err(Error::Domain(format!(
            "penalty({c}) needs n >= {}, got n = {n}",
            c.min_n()
        )));
    }
    let nf = n as f64;
    Ok(match c {
        Criterion::Aic => 2.0,
        Criterion::Bic => nf.ln(),
        Criterion::PhiBeta { beta } => nf.powf(beta) * nf.ln().ln(),
    })
}

/// The beta for which phi_beta matches the AIC or BIC penalty at sample size n.
///
/// `beta_aic = (ln 2 - ln ln ln n) / ln n` and
/// `beta_bic = (ln ln n - ln ln ln n) / ln n`. The AIC value turns negative
/// for n >= 1619.
pub fn beta_equivalent(target: BetaTarget, n: usize) -> Result<f64> {
    // ln n > e keeps the third log iterate strictly positive.
    if n < 16 {
        return Err(Error::Domain(format!(
            "beta_equivalent needs n >= 16, got n = {n}"
        )));
    }
    let ln_n = (n as f64).ln();
    let lll = ln_n.ln().ln();
    Ok(match target {
        BetaTarget::Aic => (2.0f64.ln() - lll) / ln_n,
        BetaTarget::Bic => (ln_n.ln() - lll) / ln_n,
    })
}

/// Proposed admissible range for beta: `ln ln n / ln n` and its complement.
pub fn beta_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "beta_bounds needs n >= 3, got n = {n}"
        )));
    }
    let ln_n = (n as f64).ln();
    let beta_min = ln_n.ln() / ln_n;
    Ok((beta_min, 1.0 - beta_min))
}

/// Criterion value `fit_term + size * penalty(c, n)`.
///
/// `fit_term` is the model-family goodness term (for AR models,
/// `n * ln(sigma2_hat)` with constants dropped).
pub fn ic_value(fit_term: f64, size: usize, c: Criterion, n: usize) -> Result<f64> {
    Ok(fit_term + size as f64 * penalty(c, n)?)
}
