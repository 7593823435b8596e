//! Information-criterion model selection for autoregressive models.
//!
//! The crate implements the phi_beta family of penalized likelihood
//! criteria together with the classical AIC and BIC, three selection
//! strategies of different search cost, Monte-Carlo sweep experiments
//! over the penalty exponent beta, and quarter-plane AR support
//! selection on 2-D images.

pub mod ar1d;
pub mod ar2d;
pub mod criteria;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod selection;
pub mod support;

#[cfg(test)]
pub(crate) mod testutil;

pub use criteria::{beta_bounds, beta_equivalent, penalty, BetaTarget, Criterion};
pub use error::{Error, Result};
pub use support::Support;
