//! Texture support maps: both quarter-plane orientations fitted with both
//! selection methods, rendered as ASCII grids and CSV rows.

use std::io::{self, Write};

use crate::ar2d::{
    acov2d, classical_scan_2d, nishii_scan_2d, qp_support, Image, QpOrientation, Support2D,
};
use crate::criteria::Criterion;
use crate::error::Result;

/// Which search produced a support map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Classical,
    Nishii,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Classical => "classical",
            Method::Nishii => "nishii",
        })
    }
}

/// One of the four support maps of an image.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureResult {
    pub orientation: QpOrientation,
    pub method: Method,
    /// Scan bounds (m1, m2).
    pub universe: (usize, usize),
    /// Retained sites: the selected rectangle for the classical method,
    /// the surviving index set for Nishii.
    pub kept: Support2D,
    /// The selected rectangular order (classical only).
    pub order: Option<(usize, usize)>,
}

/// Fits all four orientation/method combinations on one shared
/// autocovariance table.
pub fn run_texture(img: &Image, m1: usize, m2: usize, c: Criterion) -> Result<Vec<TextureResult>> {
    let acov = acov2d(img, m1, m2)?;
    let mut results = Vec::with_capacity(4);
    for orientation in [QpOrientation::Qp1, QpOrientation::Qp2] {
        let (k1, k2) = classical_scan_2d(&acov, m1, m2, c, orientation)?;
        results.push(TextureResult {
            orientation,
            method: Method::Classical,
            universe: (m1, m2),
            kept: qp_support(orientation, k1, k2),
            order: Some((k1, k2)),
        });
        results.push(TextureResult {
            orientation,
            method: Method::Nishii,
            universe: (m1, m2),
            kept: nishii_scan_2d(&acov, m1, m2, c, orientation)?,
            order: None,
        });
    }
    Ok(results)
}

/// Renders a support map as a character grid: '#' kept, '.' dropped, 'X'
/// the predicted site. Rows run from i2 = m2 at the top down to the
/// current row; QP1 maps put the current site bottom-right, QP2 maps
/// bottom-left, so the two orientations sit naturally side by side.
pub fn ascii_map(result: &TextureResult) -> String {
    let (m1, m2) = result.universe;
    let mut grid = String::with_capacity((m1 + 2) * (m2 + 1));
    for i2 in (0..=m2 as i32).rev() {
        let columns: Vec<i32> = match result.orientation {
            QpOrientation::Qp1 => (0..=m1 as i32).rev().collect(),
            QpOrientation::Qp2 => (0..=m1 as i32).map(|i| -i).collect(),
        };
        for i1 in columns {
            grid.push(if (i1, i2) == (0, 0) {
                'X'
            } else if result.kept.contains((i1, i2)) {
                '#'
            } else {
                '.'
            });
        }
        grid.push('\n');
    }
    grid
}

/// Writes the `orientation,method,i1,i2,kept` rows for every site of
/// every map.
pub fn write_texture_csv<W: Write + ?Sized>(
    results: &[TextureResult],
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "orientation,method,i1,i2,kept")?;
    for result in results {
        let (m1, m2) = result.universe;
        for &(i1, i2) in qp_support(result.orientation, m1, m2).pairs() {
            writeln!(
                out,
                "{},{},{},{},{}",
                result.orientation,
                result.method,
                i1,
                i2,
                result.kept.contains((i1, i2)) as u8
            )?;
        }
    }
    Ok(())
}
