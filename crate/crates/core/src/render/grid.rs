//! Deformed-grid figures: every horizontal and vertical grid line of a
//! rectangular region is sampled, pushed through a transformation, and
//! collected as polylines with the landmark markers overlaid.

use crate::error::{Error, Result};
use crate::registration::{Point2, Rect, Transformation};
use crate::render::svg::FigureDoc;

/// Sampling layout for a deformed-grid figure.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub region: Rect,
    /// Grid lines per axis.
    pub n_lines: usize,
    /// Sample points per line.
    pub samples: usize,
}

impl GridSpec {
    pub fn new(region: Rect, n_lines: usize, samples: usize) -> Result<GridSpec> {
        if n_lines < 2 || samples < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 lines and 2 samples, got {n_lines} lines, {samples} samples"
            )));
        }
        Ok(GridSpec {
            region,
            n_lines,
            samples,
        })
    }
}

/// Renders the deformed grid. Horizontal lines are emitted first (bottom to
/// top), then vertical lines (left to right); landmark markers come from the
/// transformation's fit (source as circles, source+displacement as stars).
pub fn deform_grid(t: &Transformation, g: &GridSpec) -> FigureDoc {
    let r = g.region;
    let fx = |i: usize| r.xmin + (r.xmax - r.xmin) * i as f64 / (g.samples - 1) as f64;
    let fy = |i: usize| r.ymin + (r.ymax - r.ymin) * i as f64 / (g.samples - 1) as f64;
    let lx = |i: usize| r.xmin + (r.xmax - r.xmin) * i as f64 / (g.n_lines - 1) as f64;
    let ly = |i: usize| r.ymin + (r.ymax - r.ymin) * i as f64 / (g.n_lines - 1) as f64;

    let mut polylines = Vec::with_capacity(2 * g.n_lines);
    for line in 0..g.n_lines {
        let y = ly(line);
        polylines.push(
            (0..g.samples)
                .map(|i| t.evaluate(Point2::new(fx(i), y)))
                .collect(),
        );
    }
    for line in 0..g.n_lines {
        let x = lx(line);
        polylines.push(
            (0..g.samples)
                .map(|i| t.evaluate(Point2::new(x, fy(i))))
                .collect(),
        );
    }

    let source_marks = t.centers().to_vec();
    let target_marks = t.centers().iter().map(|&c| t.evaluate(c)).collect();

    FigureDoc {
        region: r,
        polylines,
        source_marks,
        target_marks,
    }
}
