//! 1-D Gaussian autoregressive models: simulation, autocovariance
//! estimation, Yule-Walker fits for nested orders and arbitrary lag
//! supports, and the AR goodness-of-fit term for information criteria.
//!
//! Sign convention follows the regression form
//! `X_t = -sum_{i in S} a_i X_{t-i} + E_t`, so the Yule-Walker system is
//! `R a = -r` and the fitted variance is `r(0) + sum_i a_i r(i)`.

use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::criteria::{penalty, Criterion};
use crate::error::{Error, Result};
use crate::selection::IcEvaluator;
use crate::support::Support;

const STABILITY_MARGIN: f64 = 1e-12;

/// A 1-D AR model: coefficients on a lag support plus innovation variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel1D {
    support: Support,
    coeffs: Vec<f64>,
    sigma2: f64,
}

impl ArModel1D {
    /// `coeffs[i]` is the coefficient of `support.lags()[i]`.
    pub fn new(support: Support, coeffs: Vec<f64>, sigma2: f64) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(Error::Domain(format!(
                "support has {} lags but {} coefficients were given",
                support.len(),
                coeffs.len()
            )));
        }
        if sigma2 <= 0.0 || sigma2.is_nan() {
            return Err(Error::Domain(format!(
                "innovation variance must be positive, got {sigma2}"
            )));
        }
        Ok(ArModel1D {
            support,
            coeffs,
            sigma2,
        })
    }

    /// Builds a model from a dense coefficient list for lags 1..=len;
    /// zero entries are dropped from the support.
    pub fn from_dense(dense: &[f64], sigma2: f64) -> Result<Self> {
        let mut lags = Vec::new();
        let mut coeffs = Vec::new();
        for (i, &a) in dense.iter().enumerate() {
            if a != 0.0 {
                lags.push(i + 1);
                coeffs.push(a);
            }
        }
        ArModel1D::new(Support::new(lags), coeffs, sigma2)
    }

    /// White noise with the given variance.
    pub fn white_noise(sigma2: f64) -> Result<Self> {
        ArModel1D::new(Support::empty(), Vec::new(), sigma2)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn max_lag(&self) -> usize {
        self.support.max_lag().unwrap_or(0)
    }

    /// Lag/coefficient pairs in increasing lag order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().zip(self.coeffs.iter().copied())
    }
}

/// Result of a stability check: whether every characteristic root lies
/// strictly outside the unit circle, and the smallest root modulus found.
#[derive(Debug, Clone, Copy)]
pub struct Stability {
    pub stable: bool,
    pub min_root_modulus: f64,
}

/// Checks the roots of `1 + sum_{i in S} a_i z^i`.
///
/// The model is accepted when the smallest root modulus exceeds
/// `1 + 1e-12`. An empty (or all-zero) polynomial has no roots and is
/// reported with an infinite modulus.
pub fn stability_check(model: &ArModel1D) -> Stability {
    let mut poly = vec![0.0; model.max_lag() + 1];
    poly[0] = 1.0;
    for (lag, a) in model.terms() {
        poly[lag] = a;
    }
    while poly.len() > 1 && *poly.last().unwrap() == 0.0 {
        poly.pop();
    }
    let degree = poly.len() - 1;
    if degree == 0 {
        return Stability {
            stable: true,
            min_root_modulus: f64::INFINITY,
        };
    }

    // Companion matrix of the monic polynomial; its eigenvalues are the roots.
    let lead = poly[degree];
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for row in 1..degree {
        companion[(row, row - 1)] = 1.0;
    }
    for row in 0..degree {
        companion[(row, degree - 1)] = -poly[row] / lead;
    }
    let eigen = companion.complex_eigenvalues();
    let min_modulus = eigen.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    Stability {
        stable: min_modulus > 1.0 + STABILITY_MARGIN,
        min_root_modulus: min_modulus,
    }
}

/// Draws `n` samples of the model by the causal recursion
/// `X_t = -sum a_i X_{t-i} + E_t`, zero-initialized, after discarding
/// `burn_in` transient samples. Deterministic for a given seed.
pub fn simulate(model: &ArModel1D, n: usize, seed: u64, burn_in: usize) -> Result<Vec<f64>> {
    let stability = stability_check(model);
    if !stability.stable {
        return Err(Error::Unstable {
            modulus: stability.min_root_modulus,
        });
    }
    if n == 0 {
        return Err(Error::Domain("simulate needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, model.sigma2.sqrt())
        .map_err(|e| Error::Domain(format!("invalid innovation distribution: {e}")))?;

    let total = burn_in + n;
    let mut x = vec![0.0f64; total];
    for t in 0..total {
        let mut value = noise.sample(&mut rng);
        for (lag, a) in model.terms() {
            if lag <= t {
                value -= a * x[t - lag];
            }
        }
        x[t] = value;
    }
    x.drain(..burn_in);
    Ok(x)
}

/// Biased, mean-removed autocovariance estimates r(0..=max_lag).
#[derive(Debug, Clone, PartialEq)]
pub struct Autocovariance {
    values: Vec<f64>,
    n: usize,
}

impl Autocovariance {
    /// Wraps precomputed values (mainly for tests and synthetic inputs).
    pub fn from_values(values: Vec<f64>, n: usize) -> Self {
        assert!(!values.is_empty());
        Autocovariance { values, n }
    }

    pub fn r(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// Sample size the estimate came from.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Estimates `r(k) = (1/n) sum_{t} (x_t - mean)(x_{t+k} - mean)`.
///
/// The biased divisor keeps the sequence positive semidefinite, so every
/// Yule-Walker system downstream stays solvable.
pub fn autocovariance(series: &[f64], max_lag: usize) -> Result<Autocovariance> {
    let n = series.len();
    if n == 0 {
        return Err(Error::Domain("autocovariance of an empty series".into()));
    }
    if max_lag >= n {
        return Err(Error::Domain(format!(
            "max_lag {max_lag} must be smaller than the series length {n}"
        )));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let mut values = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag {
        let sum: f64 = centered[..n - k]
            .iter()
            .zip(&centered[k..])
            .map(|(a, b)| a * b)
            .sum();
        values.push(sum / n as f64);
    }
    Ok(Autocovariance { values, n })
}

/// AR coefficients fitted on some support, plus the residual variance.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedAr {
    /// Aligned with the lags of the support (or 1..=k for an order fit).
    pub coeffs: Vec<f64>,
    pub sigma2: f64,
}

/// Levinson-Durbin ladder: fits of every nested order 0..=max_order.
///
/// `result[k]` is the order-k Yule-Walker solution; order 0 is the
/// white-noise fit with `sigma2 = r(0)`.
pub fn fit_orders_up_to(acov: &Autocovariance, max_order: usize) -> Result<Vec<FittedAr>> {
    if max_order > acov.max_lag() {
        return Err(Error::Domain(format!(
            "order {max_order} exceeds the available autocovariance lag {}",
            acov.max_lag()
        )));
    }
    let r = &acov.values;
    let mut fits = Vec::with_capacity(max_order + 1);
    fits.push(FittedAr {
        coeffs: Vec::new(),
        sigma2: r[0],
    });

    // phi holds the order-(i-1) coefficients in the plus convention
    // X_t = sum phi_j X_{t-j}; the public coefficients are their negation.
    let mut phi: Vec<f64> = Vec::with_capacity(max_order);
    let mut err = r[0];
    for i in 1..=max_order {
        if err <= 0.0 {
            return Err(Error::Singular { dim: i });
        }
        let mut acc = r[i];
        for j in 1..i {
            acc -= phi[j - 1] * r[i - j];
        }
        let kappa = acc / err;
        let prev = phi.clone();
        phi.push(kappa);
        for j in 1..i {
            phi[j - 1] = prev[j - 1] - kappa * prev[i - 1 - j];
        }
        err *= 1.0 - kappa * kappa;
        fits.push(FittedAr {
            coeffs: phi.iter().map(|p| -p).collect(),
            sigma2: err,
        });
    }
    Ok(fits)
}

/// Order-k Yule-Walker fit (coefficients for lags 1..=k).
pub fn fit_order(acov: &Autocovariance, k: usize) -> Result<FittedAr> {
    Ok(fit_orders_up_to(acov, k)?.pop().unwrap())
}

/// Restricted normal equations on an arbitrary lag support:
/// `M[u][v] = r(|S_u - S_v|)`, right-hand side `-r(S_u)`, and
/// `sigma2 = r(0) + sum_i a_i r(S_i)`.
pub fn fit_support(acov: &Autocovariance, support: &Support) -> Result<FittedAr> {
    if let Some(max) = support.max_lag() {
        if max > acov.max_lag() {
            return Err(Error::Domain(format!(
                "support lag {max} exceeds the available autocovariance lag {}",
                acov.max_lag()
            )));
        }
    }
    if support.is_empty() {
        return Ok(FittedAr {
            coeffs: Vec::new(),
            sigma2: acov.r(0),
        });
    }
    let lags = support.lags();
    let dim = lags.len();
    let m = DMatrix::from_fn(dim, dim, |u, v| acov.r(lags[u].abs_diff(lags[v])));
    let rhs = DVector::from_fn(dim, |u, _| -acov.r(lags[u]));
    let a = solve_spd(m, rhs).ok_or(Error::Singular { dim })?;
    let sigma2 = acov.r(0)
        + a.iter()
            .zip(lags)
            .map(|(ai, &lag)| ai * acov.r(lag))
            .sum::<f64>();
    Ok(FittedAr {
        coeffs: a.iter().copied().collect(),
        sigma2,
    })
}

/// Cholesky solve with an LU fallback for borderline systems.
pub(crate) fn solve_spd(m: DMatrix<f64>, rhs: DVector<f64>) -> Option<DVector<f64>> {
    if let Some(chol) = m.clone().cholesky() {
        return Some(chol.solve(&rhs));
    }
    m.lu().solve(&rhs)
}

/// AR criterion value `n ln(sigma2) + size * alpha(n)`: the log-likelihood
/// term with model-independent constants dropped, plus the penalty.
pub fn ar_ic_term(sigma2: f64, size: usize, c: Criterion, n: usize) -> Result<f64> {
    if sigma2 <= 0.0 || sigma2.is_nan() {
        return Err(Error::DegenerateVariance { sigma2 });
    }
    Ok(n as f64 * sigma2.ln() + size as f64 * penalty(c, n)?)
}

/// IC of the nested model of order k.
pub fn ic_order_1d(acov: &Autocovariance, k: usize, c: Criterion, n: usize) -> Result<f64> {
    ar_ic_term(fit_order(acov, k)?.sigma2, k, c, n)
}

/// IC of the model restricted to an arbitrary support.
pub fn ic_support_1d(acov: &Autocovariance, s: &Support, c: Criterion, n: usize) -> Result<f64> {
    ar_ic_term(fit_support(acov, s)?.sigma2, s.len(), c, n)
}

/// Fit cache for one observed series: the Levinson ladder is computed once
/// and arbitrary-support fits are memoized, so sweeping many criteria over
/// the same data never refits a model.
pub struct ArFitCache {
    acov: Autocovariance,
    order_fits: Vec<FittedAr>,
    support_fits: RefCell<HashMap<Support, FittedAr>>,
}

impl ArFitCache {
    pub fn new(acov: Autocovariance, max_order: usize) -> Result<Self> {
        let order_fits = fit_orders_up_to(&acov, max_order)?;
        Ok(ArFitCache {
            acov,
            order_fits,
            support_fits: RefCell::new(HashMap::new()),
        })
    }

    pub fn acov(&self) -> &Autocovariance {
        &self.acov
    }

    pub fn n(&self) -> usize {
        self.acov.n()
    }

    pub fn max_order(&self) -> usize {
        self.order_fits.len() - 1
    }

    pub fn order_fit(&self, k: usize) -> &FittedAr {
        &self.order_fits[k]
    }

    pub fn support_fit(&self, s: &Support) -> Result<FittedAr> {
        if let Some(fit) = self.support_fits.borrow().get(s) {
            return Ok(fit.clone());
        }
        let fit = fit_support(&self.acov, s)?;
        self.support_fits
            .borrow_mut()
            .insert(s.clone(), fit.clone());
        Ok(fit)
    }

    /// The fitted model of nested order k, as a standalone model.
    pub fn model_for_order(&self, k: usize) -> Result<ArModel1D> {
        let fit = &self.order_fits[k];
        if fit.sigma2 <= 0.0 || fit.sigma2.is_nan() {
            return Err(Error::DegenerateVariance { sigma2: fit.sigma2 });
        }
        ArModel1D::new(
            if k == 0 {
                Support::empty()
            } else {
                Support::full(k)
            },
            fit.coeffs.clone(),
            fit.sigma2,
        )
    }

    /// The fitted model on an arbitrary support, as a standalone model.
    pub fn model_for_support(&self, s: &Support) -> Result<ArModel1D> {
        let fit = self.support_fit(s)?;
        if fit.sigma2 <= 0.0 || fit.sigma2.is_nan() {
            return Err(Error::DegenerateVariance { sigma2: fit.sigma2 });
        }
        ArModel1D::new(s.clone(), fit.coeffs, fit.sigma2)
    }
}

/// IC evaluator backed by Yule-Walker fits of one series.
pub struct ArIcEvaluator<'a> {
    cache: &'a ArFitCache,
    criterion: Criterion,
}

impl<'a> ArIcEvaluator<'a> {
    pub fn new(cache: &'a ArFitCache, criterion: Criterion) -> Self {
        ArIcEvaluator { cache, criterion }
    }
}

impl IcEvaluator for ArIcEvaluator<'_> {
    fn universe_size(&self) -> usize {
        self.cache.max_order()
    }

    fn ic_order(&self, k: usize) -> Result<f64> {
        ar_ic_term(
            self.cache.order_fit(k).sigma2,
            k,
            self.criterion,
            self.cache.n(),
        )
    }

    fn ic_support(&self, s: &Support) -> Result<f64> {
        ar_ic_term(
            self.cache.support_fit(s)?.sigma2,
            s.len(),
            self.criterion,
            self.cache.n(),
        )
    }
}
