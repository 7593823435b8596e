//! Shared fixtures for unit tests.

use nalgebra::{DMatrix, DVector};

use crate::ar1d::ArModel1D;

/// The sparse AR(15) benchmark model: a_1 = 0.5, a_2 = 0.4, a_15 = 0.45,
/// unit innovation variance.
pub(crate) fn ar15_model() -> ArModel1D {
    let mut dense = vec![0.0; 15];
    dense[0] = 0.5;
    dense[1] = 0.4;
    dense[14] = 0.45;
    ArModel1D::from_dense(&dense, 1.0).unwrap()
}

/// Theoretical autocovariances r(0..=max_lag) of a stable AR model, from
/// the inverse Yule-Walker system of the true coefficients.
pub(crate) fn theoretical_acov(model: &ArModel1D, max_lag: usize) -> Vec<f64> {
    let k = model.max_lag().max(max_lag);
    let mut a = vec![0.0; k + 1];
    a[0] = 1.0;
    for (lag, c) in model.terms() {
        a[lag] = c;
    }
    // Unknowns r(0..=k): r(0) + sum a_i r(i) = sigma2 and, for j >= 1,
    // r(j) + sum a_i r(|j-i|) = 0.
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    m[(0, 0)] = 1.0;
    for i in 1..=k {
        m[(0, i)] += a[i];
    }
    rhs[0] = model.sigma2();
    for j in 1..=k {
        m[(j, j)] += 1.0;
        for i in 1..=k {
            m[(j, i.abs_diff(j))] += a[i];
        }
    }
    let r = m.lu().solve(&rhs).unwrap();
    r.iter().take(max_lag + 1).copied().collect()
}
