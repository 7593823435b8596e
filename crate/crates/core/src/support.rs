//! Sets of active lag indices.

use std::fmt;

/// An ordered set of positive lag indices, the support of a 1-D AR model.
///
/// Lag 0 is never a regressor; the empty support is the white-noise model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Support(Vec<usize>);

impl Support {
    /// Builds a support from arbitrary lag indices; sorts and deduplicates.
    ///
    /// Panics if any index is 0 (a programming error, not a data error).
    pub fn new<I: IntoIterator<Item = usize>>(lags: I) -> Self {
        let mut v: Vec<usize> = lags.into_iter().collect();
        assert!(!v.contains(&0), "lag 0 is not a valid AR regressor");
        v.sort_unstable();
        v.dedup();
        Support(v)
    }

    pub fn empty() -> Self {
        Support(Vec::new())
    }

    /// The full universe {1, ..., m}.
    pub fn full(m: usize) -> Self {
        Support((1..=m).collect())
    }

    /// This support with one lag removed (no-op if absent).
    pub fn without(&self, lag: usize) -> Self {
        Support(self.0.iter().copied().filter(|&l| l != lag).collect())
    }

    pub fn lags(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lag: usize) -> bool {
        self.0.binary_search(&lag).is_ok()
    }

    pub fn max_lag(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset_of(&self, other: &Support) -> bool {
        self.0.iter().all(|l| other.contains(*l))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, lag) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{lag}")?;
        }
        write!(f, "}}")
    }
}

impl From<Vec<usize>> for Support {
    fn from(v: Vec<usize>) -> Self {
        Support::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_dedups() {
        let s = Support::new([15, 1, 2, 2, 1]);
        assert_eq!(s.lags(), &[1, 2, 15]);
        assert_eq!(s.max_lag(), Some(15));
        assert_eq!(s.to_string(), "{1,2,15}");
    }

    #[test]
    fn subset_and_removal() {
        let full = Support::full(5);
        assert_eq!(full.len(), 5);
        let dropped = full.without(3);
        assert_eq!(dropped.lags(), &[1, 2, 4, 5]);
        assert!(dropped.is_subset_of(&full));
        assert!(!full.is_subset_of(&dropped));
        assert!(Support::empty().is_subset_of(&dropped));
    }

    #[test]
    #[should_panic]
    fn rejects_lag_zero() {
        let _ = Support::new([0, 1]);
    }
}
