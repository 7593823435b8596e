//! Model selection strategies over an abstract criterion evaluator.
//!
//! The three searches differ only in which candidate family they scan:
//! every lag subset (exhaustive), nested orders (classical), or the
//! leave-one-out family around the full model (Nishii). All of them report
//! a weighted operation count, the total number of coefficients fitted
//! during the search, which makes the cost ordering between strategies
//! directly observable.

use crate::error::{Error, Result};
use crate::support::Support;

/// Largest universe the exhaustive search accepts (2^25 subsets).
pub const MAX_EXHAUSTIVE_UNIVERSE: usize = 25;

/// Criterion values of candidate models over a lag universe {1, ..., m}.
///
/// Implementations own the data and the criterion; strategies only ask for
/// IC values, so the same search code drives 1-D orders, 1-D supports and
/// (through an adapter) 2-D quarter-plane supports.
pub trait IcEvaluator {
    /// The largest lag m under consideration.
    fn universe_size(&self) -> usize;

    /// IC of the nested model using all lags 1..=k.
    fn ic_order(&self, k: usize) -> Result<f64>;

    /// IC of the model restricted to an arbitrary subset of {1, ..., m}.
    fn ic_support(&self, s: &Support) -> Result<f64>;
}

/// Outcome of one selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Chosen lag set; the classical strategy reports the full set
    /// {1, ..., k_hat}.
    pub chosen: Support,
    /// IC of the chosen model.
    pub ic_value: f64,
    /// Coefficients fitted while searching (the reporting evaluation of
    /// the final Nishii model is not part of the search and not counted).
    pub weighted_ops: u64,
}

/// Scans all 2^m subsets of {1, ..., m} and keeps the IC minimizer.
///
/// Exact ties go to the smaller support, then lexicographically smaller
/// lag list. Universes beyond [`MAX_EXHAUSTIVE_UNIVERSE`] are refused.
pub fn select_exhaustive<E: IcEvaluator + ?Sized>(evaluator: &E) -> Result<SelectionResult> {
    let m = evaluator.universe_size();
    if m > MAX_EXHAUSTIVE_UNIVERSE {
        return Err(Error::UniverseTooLarge {
            m,
            limit: MAX_EXHAUSTIVE_UNIVERSE,
        });
    }
    let mut best: Option<(f64, Support)> = None;
    let mut weighted_ops = 0u64;
    for mask in 0u64..(1u64 << m) {
        let lags: Vec<usize> = (1..=m).filter(|lag| mask >> (lag - 1) & 1 == 1).collect();
        let s = Support::new(lags);
        weighted_ops += s.len() as u64;
        let ic = evaluator.ic_support(&s)?;
        let better = match &best {
            None => true,
            Some((best_ic, best_s)) => {
                ic < *best_ic
                    || (ic == *best_ic && (s.len(), s.lags()) < (best_s.len(), best_s.lags()))
            }
        };
        if better {
            best = Some((ic, s));
        }
    }
    let (ic_value, chosen) = best.unwrap();
    Ok(SelectionResult {
        chosen,
        ic_value,
        weighted_ops,
    })
}

/// Scans the nested orders k = 0, ..., m and keeps the IC minimizer;
/// ties go to the smaller order.
pub fn select_classical<E: IcEvaluator + ?Sized>(evaluator: &E) -> Result<SelectionResult> {
    let m = evaluator.universe_size();
    let mut best_k = 0usize;
    let mut best_ic = f64::INFINITY;
    let mut weighted_ops = 0u64;
    for k in 0..=m {
        weighted_ops += k as u64;
        let ic = evaluator.ic_order(k)?;
        if ic < best_ic {
            best_ic = ic;
            best_k = k;
        }
    }
    Ok(SelectionResult {
        chosen: Support::full(best_k),
        ic_value: best_ic,
        weighted_ops,
    })
}

/// Nishii's complexity-reduction test: starting from the full model, lag j
/// is kept exactly when removing it strictly increases the criterion.
///
/// The search costs m + 1 evaluations (the full model plus one per
/// dropped lag); when the kept set differs from the full model, one extra
/// evaluation reports its IC.
pub fn select_nishii<E: IcEvaluator + ?Sized>(evaluator: &E) -> Result<SelectionResult> {
    let m = evaluator.universe_size();
    let full = Support::full(m);
    let mut weighted_ops = m as u64;
    let ic_ref = evaluator.ic_support(&full)?;
    let mut kept = Vec::new();
    for j in 1..=m {
        let without = full.without(j);
        weighted_ops += without.len() as u64;
        if evaluator.ic_support(&without)? > ic_ref {
            kept.push(j);
        }
    }
    let chosen = Support::new(kept);
    let ic_value = if chosen == full {
        ic_ref
    } else {
        evaluator.ic_support(&chosen)?
    };
    Ok(SelectionResult {
        chosen,
        ic_value,
        weighted_ops,
    })
}
