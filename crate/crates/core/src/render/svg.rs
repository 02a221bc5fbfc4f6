//! Deterministic SVG 1.1 emission for deformed-grid figures.
//!
//! The figure region maps to a fixed 600x600 viewbox with the y axis pointing
//! up (flipped relative to SVG's native orientation). Element order is fixed:
//! grid polylines first, then source markers (circles), then target markers
//! (stars), so identical inputs produce byte-identical documents.

use crate::registration::{Point2, Rect};

const VIEW: f64 = 600.0;
/// Extra margin so deformations slightly outside the region stay visible.
const MARGIN: f64 = 20.0;

/// A vector figure: deformed grid polylines plus landmark markers.
#[derive(Debug, Clone)]
pub struct FigureDoc {
    pub region: Rect,
    pub polylines: Vec<Vec<Point2>>,
    /// Source landmarks, drawn as circles.
    pub source_marks: Vec<Point2>,
    /// Target landmarks, drawn as stars.
    pub target_marks: Vec<Point2>,
}

impl FigureDoc {
    pub fn to_svg(&self) -> String {
        let r = self.region;
        let scale = (VIEW - 2.0 * MARGIN) / (r.xmax - r.xmin).max(r.ymax - r.ymin);
        let map = |p: Point2| -> (f64, f64) {
            (
                MARGIN + (p.x - r.xmin) * scale,
                VIEW - MARGIN - (p.y - r.ymin) * scale,
            )
        };

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{VIEW}\" height=\"{VIEW}\" viewBox=\"0 0 {VIEW} {VIEW}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

        for line in &self.polylines {
            out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"");
            let mut first = true;
            for &p in line {
                let (x, y) = map(p);
                if !first {
                    out.push(' ');
                }
                out.push_str(&format!("{},{}", fmt(x), fmt(y)));
                first = false;
            }
            out.push_str("\"/>\n");
        }

        for &p in &self.source_marks {
            let (x, y) = map(p);
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n",
                fmt(x),
                fmt(y)
            ));
        }
        for &p in &self.target_marks {
            let (x, y) = map(p);
            out.push_str(&star_path(x, y));
        }

        out.push_str("</svg>\n");
        out
    }
}

/// Six-pointed asterisk star marker.
fn star_path(cx: f64, cy: f64) -> String {
    let r = 6.0;
    let mut d = String::new();
    for k in 0..3 {
        let angle = std::f64::consts::PI * k as f64 / 3.0;
        let (dx, dy) = (r * angle.cos(), r * angle.sin());
        d.push_str(&format!(
            "M{},{} L{},{} ",
            fmt(cx - dx),
            fmt(cy - dy),
            fmt(cx + dx),
            fmt(cy + dy)
        ));
    }
    format!(
        "<path d=\"{}\" stroke=\"green\" stroke-width=\"1.5\" fill=\"none\"/>\n",
        d.trim_end()
    )
}

/// Fixed 4-decimal coordinate formatting keeps output deterministic across
/// platforms.
fn fmt(v: f64) -> String {
    format!("{v:.4}")
}
