//! Quality metrics for fitted models: prediction error variance and the
//! Kullback divergence between the Gaussian processes induced by two AR
//! models over a finite window.

use crate::ar1d::{autocovariance, fit_support, ArModel1D};
use crate::error::{Error, Result};
use crate::support::Support;

/// Prediction error variance of a support fitted to an observed series:
/// the residual variance of the Yule-Walker fit on that support.
pub fn pev(series: &[f64], support: &Support) -> Result<f64> {
    let max_lag = support.max_lag().unwrap_or(0);
    let acov = autocovariance(series, max_lag)?;
    Ok(fit_support(&acov, support)?.sigma2)
}

/// Kullback divergence K(true || est) between the zero-mean Gaussian
/// vectors of length `n` generated by the two models.
///
/// With A the unit-diagonal banded whitening matrix of a model (row t
/// encodes `x_t + sum a_i x_{t-i}`), the covariances are
/// `sigma2 A^-1 A^-T` and the divergence reduces to
///
/// ```text
/// K = -n/2 + n ln(sigma_est / sigma_true)
///     + (sigma2_true / (2 sigma2_est)) * ||A_est A_true^-1||_F^2
/// ```
///
/// The Frobenius norm is accumulated column by column with one banded
/// forward substitution each, so the cost is O(n^2 (k + k_est)) time and
/// O(n) memory; no n-by-n matrix is formed.
pub fn kullback(true_model: &ArModel1D, est_model: &ArModel1D, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("kullback needs n >= 1".into()));
    }
    let dense = |m: &ArModel1D| {
        let mut a = vec![0.0f64; m.max_lag() + 1];
        for (lag, c) in m.terms() {
            a[lag] = c;
        }
        a
    };
    let a_true = dense(true_model);
    let a_est = dense(est_model);
    let k_true = a_true.len() - 1;
    let k_est = a_est.len() - 1;

    let mut frob2 = 0.0f64;
    let mut y = vec![0.0f64; n];
    for j in 0..n {
        // Forward substitution for column j of A_true^-1.
        y[j] = 1.0;
        for t in (j + 1)..n {
            let mut acc = 0.0;
            for i in 1..=k_true.min(t - j) {
                acc -= a_true[i] * y[t - i];
            }
            y[t] = acc;
        }
        // Norm of A_est applied to that column.
        for t in j..n {
            let mut z = y[t];
            for i in 1..=k_est.min(t - j) {
                z += a_est[i] * y[t - i];
            }
            frob2 += z * z;
        }
    }

    let s2_true = true_model.sigma2();
    let s2_est = est_model.sigma2();
    Ok(-(n as f64) / 2.0
        + n as f64 * (s2_est / s2_true).ln() / 2.0
        + s2_true / (2.0 * s2_est) * frob2)
}
