//! 2-D quarter-plane AR models on images.
//!
//! A pixel is predicted from one of the two causal quarter planes: QP1
//! looks up and to the left of the current site, QP2 up and to the right.
//! Index pairs are (i1, i2) = (horizontal lag, vertical lag), so the
//! predictor of X(x, y) at pair (i1, i2) is X(x - i1, y - i2). QP1 pairs
//! have i1 >= 0, QP2 pairs i1 <= 0, both with i2 >= 0; central symmetry
//! of the autocovariance makes the remaining two quarter planes
//! redundant.

mod pgm;

pub use pgm::load_pgm;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ar1d::solve_spd;
use crate::criteria::{penalty, Criterion};
use crate::error::{Error, Result};
use crate::selection::{select_nishii, IcEvaluator};
use crate::support::Support;
use nalgebra::{DMatrix, DVector};

/// The two causal quarter-plane orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QpOrientation {
    Qp1,
    Qp2,
}

impl std::fmt::Display for QpOrientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            QpOrientation::Qp1 => "QP1",
            QpOrientation::Qp2 => "QP2",
        })
    }
}

/// A set of (i1, i2) prediction lags inside one quarter plane.
///
/// Pairs are kept sorted by (i2, i1) (raster order of the predictor
/// sites); (0, 0) is never a member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Support2D {
    orientation: QpOrientation,
    pairs: Vec<(i32, i32)>,
}

impl Support2D {
    /// Builds a support from arbitrary pairs, sorting and deduplicating.
    ///
    /// Panics if a pair lies outside the quarter plane or equals (0, 0);
    /// supports are built by this crate's own enumeration code, so a bad
    /// pair is a programming error.
    pub fn new(orientation: QpOrientation, pairs: impl IntoIterator<Item = (i32, i32)>) -> Self {
        let mut pairs: Vec<(i32, i32)> = pairs.into_iter().collect();
        for &(i1, i2) in &pairs {
            assert!((i1, i2) != (0, 0), "(0, 0) cannot be a prediction lag");
            assert!(
                i2 >= 0,
                "vertical lag must be non-negative, got ({i1}, {i2})"
            );
            match orientation {
                QpOrientation::Qp1 => {
                    assert!(i1 >= 0, "QP1 pair must have i1 >= 0, got ({i1}, {i2})")
                }
                QpOrientation::Qp2 => {
                    assert!(i1 <= 0, "QP2 pair must have i1 <= 0, got ({i1}, {i2})")
                }
            }
        }
        pairs.sort_by_key(|&(i1, i2)| (i2, i1));
        pairs.dedup();
        Support2D { orientation, pairs }
    }

    pub fn empty(orientation: QpOrientation) -> Self {
        Support2D {
            orientation,
            pairs: Vec::new(),
        }
    }

    pub fn orientation(&self) -> QpOrientation {
        self.orientation
    }

    pub fn pairs(&self) -> &[(i32, i32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (i32, i32)) -> bool {
        self.pairs
            .binary_search_by_key(&(pair.1, pair.0), |&(i1, i2)| (i2, i1))
            .is_ok()
    }

    /// Mirrors every pair into the other orientation (i1 negated).
    pub fn mirrored(&self) -> Self {
        let orientation = match self.orientation {
            QpOrientation::Qp1 => QpOrientation::Qp2,
            QpOrientation::Qp2 => QpOrientation::Qp1,
        };
        Support2D::new(orientation, self.pairs.iter().map(|&(i1, i2)| (-i1, i2)))
    }
}

impl std::fmt::Display for Support2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (i1, i2)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i1},{i2})")?;
        }
        write!(f, "}}")
    }
}

/// The full quarter-plane rectangle of order (k1, k2) minus the origin:
/// (k1+1)(k2+1) - 1 pairs.
pub fn qp_support(orientation: QpOrientation, k1: usize, k2: usize) -> Support2D {
    let k1 = k1 as i32;
    let k2 = k2 as i32;
    let mut pairs = Vec::with_capacity(((k1 + 1) * (k2 + 1) - 1) as usize);
    for i2 in 0..=k2 {
        for i1 in 0..=k1 {
            if (i1, i2) == (0, 0) {
                continue;
            }
            match orientation {
                QpOrientation::Qp1 => pairs.push((i1, i2)),
                QpOrientation::Qp2 => pairs.push((-i1, i2)),
            }
        }
    }
    Support2D::new(orientation, pairs)
}

/// A grayscale image held as row-major reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert!(width >= 1 && height >= 1, "image must have pixels");
        assert_eq!(data.len(), width * height);
        Image {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn pixels(&self) -> &[f64] {
        &self.data
    }

    /// Left-right mirror image.
    pub fn flipped_horizontal(&self) -> Image {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks(self.width) {
            data.extend(row.iter().rev());
        }
        Image::new(self.width, self.height, data)
    }
}

/// A 2-D quarter-plane AR model:
/// `X(x, y) = -sum a_(i1,i2) X(x - i1, y - i2) + E(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel2D {
    support: Support2D,
    coeffs: Vec<f64>,
    sigma2: f64,
}

impl ArModel2D {
    /// Builds a model from explicit (pair, coefficient) terms, keeping
    /// each coefficient attached to its pair regardless of input order.
    pub fn from_terms(
        orientation: QpOrientation,
        terms: impl IntoIterator<Item = ((i32, i32), f64)>,
        sigma2: f64,
    ) -> Result<Self> {
        let mut terms: Vec<((i32, i32), f64)> = terms.into_iter().collect();
        terms.sort_by_key(|&((i1, i2), _)| (i2, i1));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("duplicate pair in model terms".into()));
        }
        let coeffs = terms.iter().map(|&(_, a)| a).collect();
        let support = Support2D::new(orientation, terms.into_iter().map(|(p, _)| p));
        ArModel2D::new(support, coeffs, sigma2)
    }

    /// `coeffs[i]` belongs to `support.pairs()[i]` (the sorted order).
    pub fn new(support: Support2D, coeffs: Vec<f64>, sigma2: f64) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(Error::Domain(format!(
                "support has {} pairs but {} coefficients were given",
                support.len(),
                coeffs.len()
            )));
        }
        if sigma2 <= 0.0 || sigma2.is_nan() {
            return Err(Error::Domain(format!(
                "innovation variance must be positive, got {sigma2}"
            )));
        }
        Ok(ArModel2D {
            support,
            coeffs,
            sigma2,
        })
    }

    pub fn support(&self) -> &Support2D {
        &self.support
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), f64)> + '_ {
        self.support
            .pairs()
            .iter()
            .copied()
            .zip(self.coeffs.iter().copied())
    }

    pub fn coeff(&self, pair: (i32, i32)) -> Option<f64> {
        self.support
            .pairs()
            .iter()
            .position(|&p| p == pair)
            .map(|i| self.coeffs[i])
    }
}

/// Biased, mean-removed 2-D autocovariance table over
/// l1 in [-m1, m1], l2 in [0, m2]; values at l2 < 0 come from the
/// central symmetry r(-l1, -l2) = r(l1, l2).
#[derive(Debug, Clone)]
pub struct Acov2D {
    m1: usize,
    m2: usize,
    values: Vec<f64>,
    n: usize,
}

impl Acov2D {
    /// Builds a table from an explicit lag function (synthetic inputs and
    /// tests); `f` is sampled on l1 in [-m1, m1], l2 in [0, m2].
    pub fn from_fn(m1: usize, m2: usize, n: usize, f: impl Fn(i32, i32) -> f64) -> Self {
        let mut values = Vec::with_capacity((2 * m1 + 1) * (m2 + 1));
        for l2 in 0..=m2 as i32 {
            for l1 in -(m1 as i32)..=m1 as i32 {
                values.push(f(l1, l2));
            }
        }
        Acov2D { m1, m2, values, n }
    }

    pub fn r(&self, l1: i32, l2: i32) -> f64 {
        let (l1, l2) = if l2 < 0 { (-l1, -l2) } else { (l1, l2) };
        debug_assert!(l1.unsigned_abs() as usize <= self.m1 && l2 as usize <= self.m2);
        let row = l2 as usize;
        let col = (l1 + self.m1 as i32) as usize;
        self.values[row * (2 * self.m1 + 1) + col]
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    /// Pixel count of the source image.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Estimates the autocovariance table of an image with the biased
/// divisor (1 / pixel count) after mean removal.
pub fn acov2d(img: &Image, m1: usize, m2: usize) -> Result<Acov2D> {
    let (w, h) = (img.width(), img.height());
    if m1 >= w || m2 >= h {
        return Err(Error::Domain(format!(
            "lag window ({m1}, {m2}) too large for a {w}x{h} image"
        )));
    }
    let n = w * h;
    let mean = img.pixels().iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = img.pixels().iter().map(|p| p - mean).collect();

    let mut values = Vec::with_capacity((2 * m1 + 1) * (m2 + 1));
    for l2 in 0..=m2 {
        for l1 in -(m1 as i32)..=m1 as i32 {
            let (x_lo, x_hi) = if l1 >= 0 {
                (0, w - l1 as usize)
            } else {
                ((-l1) as usize, w)
            };
            let mut sum = 0.0;
            for y in 0..h - l2 {
                let row = y * w;
                let shifted = (y + l2) * w;
                for x in x_lo..x_hi {
                    sum += d[row + x] * d[shifted + (x as i32 + l1) as usize];
                }
            }
            values.push(sum / n as f64);
        }
    }
    Ok(Acov2D { m1, m2, values, n })
}

/// A 2-D support fit: coefficients aligned with the support pairs plus
/// the prediction error variance.
#[derive(Debug, Clone, PartialEq)]
pub struct Fitted2D {
    pub coeffs: Vec<f64>,
    pub sigma2: f64,
}

/// Solves the normal equations of a quarter-plane support:
/// `M[u][v] = r(S_u - S_v)`, right-hand side `-r(S_u)`, and
/// `sigma2 = r(0,0) + sum a_u r(S_u)`.
pub fn fit_support_2d(acov: &Acov2D, support: &Support2D) -> Result<Fitted2D> {
    for &(i1, i2) in support.pairs() {
        if i1.unsigned_abs() as usize > acov.m1() || i2 as usize > acov.m2() {
            return Err(Error::Domain(format!(
                "support pair ({i1}, {i2}) outside the autocovariance window"
            )));
        }
    }
    if support.is_empty() {
        return Ok(Fitted2D {
            coeffs: Vec::new(),
            sigma2: acov.r(0, 0),
        });
    }
    let pairs = support.pairs();
    let dim = pairs.len();
    let m = DMatrix::from_fn(dim, dim, |u, v| {
        acov.r(pairs[u].0 - pairs[v].0, pairs[u].1 - pairs[v].1)
    });
    let rhs = DVector::from_fn(dim, |u, _| -acov.r(pairs[u].0, pairs[u].1));
    let a = solve_spd(m, rhs).ok_or(Error::Singular { dim })?;
    let sigma2 = acov.r(0, 0)
        + a.iter()
            .zip(pairs)
            .map(|(ai, &(i1, i2))| ai * acov.r(i1, i2))
            .sum::<f64>();
    Ok(Fitted2D {
        coeffs: a.iter().copied().collect(),
        sigma2,
    })
}

/// IC of a quarter-plane support: `N ln(sigma2) + |S| alpha(N)` with N
/// the pixel count. A rectangular order (k1, k2) therefore carries the
/// size term (k1+1)(k2+1) - 1, the variance parameter being dropped as a
/// model-independent constant exactly as in 1-D.
pub fn ic_2d(acov: &Acov2D, support: &Support2D, c: Criterion, n: usize) -> Result<f64> {
    let fit = fit_support_2d(acov, support)?;
    if fit.sigma2 <= 0.0 || fit.sigma2.is_nan() {
        return Err(Error::DegenerateVariance { sigma2: fit.sigma2 });
    }
    Ok(n as f64 * fit.sigma2.ln() + support.len() as f64 * penalty(c, n)?)
}

/// Classical 2-D selection: scans every rectangular order
/// (k1, k2) in [0, m1] x [0, m2] and keeps the IC minimizer. Ties go to
/// the smaller parameter count, then to the lexicographically smaller
/// order.
pub fn select_classical_2d(
    img: &Image,
    m1: usize,
    m2: usize,
    c: Criterion,
    orientation: QpOrientation,
) -> Result<(usize, usize)> {
    let acov = acov2d(img, m1, m2)?;
    classical_scan_2d(&acov, m1, m2, c, orientation)
}

/// The scan itself, reusable when the autocovariance table is shared.
pub fn classical_scan_2d(
    acov: &Acov2D,
    m1: usize,
    m2: usize,
    c: Criterion,
    orientation: QpOrientation,
) -> Result<(usize, usize)> {
    let n = acov.n();
    let mut best: Option<(f64, usize, (usize, usize))> = None;
    for k1 in 0..=m1 {
        for k2 in 0..=m2 {
            let support = qp_support(orientation, k1, k2);
            let ic = ic_2d(acov, &support, c, n)?;
            let size = support.len();
            let better = match &best {
                None => true,
                Some((best_ic, best_size, best_order)) => {
                    ic < *best_ic
                        || (ic == *best_ic && (size, (k1, k2)) < (*best_size, *best_order))
                }
            };
            if better {
                best = Some((ic, size, (k1, k2)));
            }
        }
    }
    Ok(best.unwrap().2)
}

/// Adapter that lets the generic Nishii search walk a quarter-plane
/// universe: element j of {1, ..., m} is the j-th pair of the full
/// support.
struct QpEvaluator<'a> {
    acov: &'a Acov2D,
    orientation: QpOrientation,
    universe: Vec<(i32, i32)>,
    criterion: Criterion,
}

impl QpEvaluator<'_> {
    fn support_for(&self, s: &Support) -> Support2D {
        Support2D::new(self.orientation, s.iter().map(|idx| self.universe[idx - 1]))
    }
}

impl IcEvaluator for QpEvaluator<'_> {
    fn universe_size(&self) -> usize {
        self.universe.len()
    }

    fn ic_order(&self, k: usize) -> Result<f64> {
        self.ic_support(&Support::full(k))
    }

    fn ic_support(&self, s: &Support) -> Result<f64> {
        let support = self.support_for(s);
        ic_2d(self.acov, &support, self.criterion, self.acov.n())
    }
}

/// Nishii selection over the full quarter-plane universe of order
/// (m1, m2): a pair survives exactly when freezing its coefficient to
/// zero strictly raises the criterion above the full-model reference.
pub fn select_nishii_2d(
    img: &Image,
    m1: usize,
    m2: usize,
    c: Criterion,
    orientation: QpOrientation,
) -> Result<Support2D> {
    let acov = acov2d(img, m1, m2)?;
    nishii_scan_2d(&acov, m1, m2, c, orientation)
}

/// The Nishii scan itself, reusable when the table is shared.
pub fn nishii_scan_2d(
    acov: &Acov2D,
    m1: usize,
    m2: usize,
    c: Criterion,
    orientation: QpOrientation,
) -> Result<Support2D> {
    let evaluator = QpEvaluator {
        acov,
        orientation,
        universe: qp_support(orientation, m1, m2).pairs().to_vec(),
        criterion: c,
    };
    let result = select_nishii(&evaluator)?;
    Ok(evaluator.support_for(&result.chosen))
}

/// Draws a QP1 random field by the raster-order causal recursion with
/// zero boundary conditions, then crops the first `margin` rows and
/// columns to shed the boundary transient. Deterministic per seed.
///
/// Stability of 2-D quarter-plane filters is not checked; callers should
/// keep coefficient mass below 1 (sum of |a| < 1 is a convenient
/// sufficient condition).
pub fn simulate_2d(
    model: &ArModel2D,
    height: usize,
    width: usize,
    seed: u64,
    margin: usize,
) -> Result<Image> {
    if model.support().orientation() != QpOrientation::Qp1 {
        return Err(Error::Domain(
            "simulate_2d generates QP1 fields; flip the result for QP2".into(),
        ));
    }
    if height == 0 || width == 0 {
        return Err(Error::Domain("simulate_2d needs a non-empty image".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, model.sigma2().sqrt())
        .map_err(|e| Error::Domain(format!("invalid innovation distribution: {e}")))?;

    let (total_w, total_h) = (width + margin, height + margin);
    let mut field = vec![0.0f64; total_w * total_h];
    for y in 0..total_h {
        for x in 0..total_w {
            let mut value = noise.sample(&mut rng);
            for ((i1, i2), a) in model.terms() {
                let (sx, sy) = (x as i32 - i1, y as i32 - i2);
                if sx >= 0 && sy >= 0 && (sx as usize) < total_w {
                    value -= a * field[sy as usize * total_w + sx as usize];
                }
            }
            field[y * total_w + x] = value;
        }
    }

    let mut data = Vec::with_capacity(width * height);
    for y in margin..total_h {
        let row = y * total_w;
        data.extend_from_slice(&field[row + margin..row + total_w]);
    }
    Ok(Image::new(width, height, data))
}
