//! Landmark-based registration: fitting the CSRBF displacement interpolant,
//! evaluating the transformation and its analytic Jacobian, and sampling
//! Jacobian-determinant fields.
//!
//! The transformation is identity plus interpolated displacement,
//! `H(x) = x + R(x)` with `R_k(x) = sum_j alpha_{jk} Phi(||x - x_j||)`;
//! the coefficients solve one SPD linear system per coordinate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::linalg::{cholesky_in_place, cholesky_solve};

/// A point in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Point2 {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Paired source/target landmark sets.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkCorrespondence {
    source: Vec<Point2>,
    target: Vec<Point2>,
}

impl LandmarkCorrespondence {
    pub fn new(source: Vec<Point2>, target: Vec<Point2>) -> Result<LandmarkCorrespondence> {
        if source.is_empty() {
            return Err(Error::InvalidInput(
                "at least one landmark pair required".into(),
            ));
        }
        if source.len() != target.len() {
            return Err(Error::InvalidInput(format!(
                "landmark count mismatch: {} source vs {} target",
                source.len(),
                target.len()
            )));
        }
        for p in source.iter().chain(target.iter()) {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidInput(
                    "landmark coordinates must be finite".into(),
                ));
            }
        }
        for i in 0..source.len() {
            for j in (i + 1)..source.len() {
                if source[i].dist(source[j]) == 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "duplicate source landmarks at indices {i} and {j}"
                    )));
                }
            }
        }
        Ok(LandmarkCorrespondence { source, target })
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> &[Point2] {
        &self.source
    }

    pub fn target(&self) -> &[Point2] {
        &self.target
    }

    /// Largest per-landmark coordinate shift, the `Delta` of the support-size
    /// analysis: `max_j max(|dx_j|, |dy_j|)`.
    pub fn max_shift(&self) -> f64 {
        self.source
            .iter()
            .zip(&self.target)
            .map(|(s, t)| (t.x - s.x).abs().max((t.y - s.y).abs()))
            .fold(0.0, f64::max)
    }

    /// The reversed correspondence (targets as sources), used for backward
    /// warping. Fails if the target landmarks are not pairwise distinct.
    pub fn reversed(&self) -> Result<LandmarkCorrespondence> {
        LandmarkCorrespondence::new(self.target.clone(), self.source.clone())
    }
}

/// A fitted identity-plus-displacement transformation.
#[derive(Debug, Clone)]
pub struct Transformation {
    kernel: Kernel,
    centers: Vec<Point2>,
    /// Per-center displacement coefficients `(alpha_{j1}, alpha_{j2})`.
    coefficients: Vec<[f64; 2]>,
}

/// Solves the two interpolation systems `A alpha_k = d_k` with
/// `A_ij = Phi(||x_i - x_j||)` and `d_k` the displacement coordinates.
pub fn fit(kernel: Kernel, lm: &LandmarkCorrespondence) -> Result<Transformation> {
    let n = lm.len();
    let src = lm.source();
    let tgt = lm.target();

    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = kernel.value(src[i].dist(src[j]));
        }
    }
    cholesky_in_place(&mut a, n)?;

    let mut dx: Vec<f64> = (0..n).map(|j| tgt[j].x - src[j].x).collect();
    let mut dy: Vec<f64> = (0..n).map(|j| tgt[j].y - src[j].y).collect();
    cholesky_solve(&a, n, &mut dx);
    cholesky_solve(&a, n, &mut dy);

    Ok(Transformation {
        kernel,
        centers: src.to_vec(),
        coefficients: dx.into_iter().zip(dy).map(|(x, y)| [x, y]).collect(),
    })
}

/// Distances below this are collapsed to the center itself when evaluating
/// gradients; `dPhi/dr` vanishes at 0, so the limit is exact.
const CENTER_RADIUS: f64 = 1e-14;

impl Transformation {
    /// An explicit identity map (empty coefficient set) over the given kernel.
    pub fn identity(kernel: Kernel) -> Transformation {
        Transformation {
            kernel,
            centers: Vec::new(),
            coefficients: Vec::new(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn coefficients(&self) -> &[[f64; 2]] {
        &self.coefficients
    }

    /// `H(x) = x + sum_j alpha_j Phi(||x - x_j||)`. Exactly `x` outside the
    /// union of the kernel supports.
    pub fn evaluate(&self, p: Point2) -> Point2 {
        let mut out = p;
        for (center, coeff) in self.centers.iter().zip(&self.coefficients) {
            let w = self.kernel.value(p.dist(*center));
            out.x += coeff[0] * w;
            out.y += coeff[1] * w;
        }
        out
    }

    /// Analytic Jacobian `J = I + sum_j alpha_j (grad Phi)^T`, row-major.
    pub fn jacobian(&self, p: Point2) -> [[f64; 2]; 2] {
        let mut j = [[1.0, 0.0], [0.0, 1.0]];
        for (center, coeff) in self.centers.iter().zip(&self.coefficients) {
            let r = p.dist(*center);
            if r < CENTER_RADIUS || r >= self.kernel.support() {
                continue;
            }
            let g = self.kernel.deriv(r) / r;
            let gx = g * (p.x - center.x);
            let gy = g * (p.y - center.y);
            j[0][0] += coeff[0] * gx;
            j[0][1] += coeff[0] * gy;
            j[1][0] += coeff[1] * gx;
            j[1][1] += coeff[1] * gy;
        }
        j
    }

    pub fn jacobian_det(&self, p: Point2) -> f64 {
        let j = self.jacobian(p);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// Samples `det(J)` on a regular grid over `region` and reports the
    /// topology statistics. Rows are computed in parallel; every entry is
    /// independent, so the result is identical to the sequential order.
    pub fn det_field(&self, region: Rect, nx: usize, ny: usize) -> Result<JacobianField> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidInput(format!(
                "det field resolution must be at least 2x2, got {nx}x{ny}"
            )));
        }
        let sx = (region.xmax - region.xmin) / (nx - 1) as f64;
        let sy = (region.ymax - region.ymin) / (ny - 1) as f64;

        let rows: Vec<Vec<f64>> = (0..ny)
            .into_par_iter()
            .map(|iy| {
                let y = region.ymin + iy as f64 * sy;
                (0..nx)
                    .map(|ix| self.jacobian_det(Point2::new(region.xmin + ix as f64 * sx, y)))
                    .collect()
            })
            .collect();

        let mut det_values = Vec::with_capacity(nx * ny);
        let mut min_det = f64::INFINITY;
        let mut argmin = Point2::new(region.xmin, region.ymin);
        let mut negatives = 0usize;
        for (iy, row) in rows.iter().enumerate() {
            for (ix, &d) in row.iter().enumerate() {
                if d < min_det {
                    min_det = d;
                    argmin =
                        Point2::new(region.xmin + ix as f64 * sx, region.ymin + iy as f64 * sy);
                }
                if d < 0.0 {
                    negatives += 1;
                }
                det_values.push(d);
            }
        }

        Ok(JacobianField {
            region,
            nx,
            ny,
            det_values,
            min_det,
            argmin,
            negative_fraction: negatives as f64 / (nx * ny) as f64,
        })
    }
}

/// Axis-aligned rectangle with positive area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Rect> {
        if !(xmax > xmin && ymax > ymin) {
            return Err(Error::InvalidInput(format!(
                "degenerate region [{xmin},{xmax}]x[{ymin},{ymax}]"
            )));
        }
        Ok(Rect {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }

    /// The unit square `[0,1] x [0,1]`.
    pub fn unit() -> Rect {
        Rect {
            xmin: 0.0,
            ymin: 0.0,
            xmax: 1.0,
            ymax: 1.0,
        }
    }
}

/// Sampled Jacobian-determinant field plus its topology report.
#[derive(Debug, Clone)]
pub struct JacobianField {
    pub region: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `ny` rows of `nx` values, y increasing by row.
    pub det_values: Vec<f64>,
    pub min_det: f64,
    pub argmin: Point2,
    pub negative_fraction: f64,
}

impl JacobianField {
    /// Whether the sampled field indicates a topology-preserving map.
    pub fn preserves_topology(&self) -> bool {
        self.min_det > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Kernel, KernelFamily};

    fn kernel(c: f64) -> Kernel {
        Kernel::new(KernelFamily::GNEITING_SEVEN_HALVES, c).unwrap()
    }

    #[test]
    fn one_landmark_coefficients_are_the_displacement() {
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
                .unwrap();
        let t = fit(kernel(1.0), &lm).unwrap();
        assert!((t.coefficients()[0][0] - 0.1).abs() < 1e-15);
        assert!((t.coefficients()[0][1] - 0.2).abs() < 1e-15);
        let q = t.evaluate(Point2::new(0.5, 0.5));
        assert!((q.x - 0.6).abs() < 1e-15);
        assert!((q.y - 0.7).abs() < 1e-15);
    }

    #[test]
    fn identical_landmarks_give_identity_map() {
        let pts = vec![
            Point2::new(0.1, 0.2),
            Point2::new(0.8, 0.3),
            Point2::new(0.4, 0.9),
        ];
        let t = fit(
            kernel(2.0),
            &LandmarkCorrespondence::new(pts.clone(), pts).unwrap(),
        )
        .unwrap();
        for c in t.coefficients() {
            assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
        }
        let p = Point2::new(0.33, 0.77);
        assert_eq!(t.evaluate(p), p);
    }

    #[test]
    fn evaluate_is_identity_outside_supports() {
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
                .unwrap();
        let t = fit(kernel(0.3), &lm).unwrap();
        let p = Point2::new(0.9, 0.9); // distance ~0.57 > 0.3
        assert_eq!(t.evaluate(p), p);
        assert_eq!(t.jacobian(p), [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn jacobian_is_identity_at_a_center() {
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
                .unwrap();
        let t = fit(kernel(1.0), &lm).unwrap();
        assert_eq!(t.jacobian(Point2::new(0.5, 0.5)), [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn rejects_malformed_correspondences() {
        assert!(LandmarkCorrespondence::new(vec![], vec![]).is_err());
        assert!(LandmarkCorrespondence::new(
            vec![Point2::new(0.0, 0.0)],
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)]
        )
        .is_err());
        assert!(LandmarkCorrespondence::new(
            vec![Point2::new(0.0, 0.0), Point2::new(0.0, 0.0)],
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)]
        )
        .is_err());
    }

    #[test]
    fn near_duplicate_centers_report_conditioning_error() {
        let lm = LandmarkCorrespondence::new(
            vec![Point2::new(0.5, 0.5), Point2::new(0.5, 0.5 + 1e-13)],
            vec![Point2::new(0.6, 0.5), Point2::new(0.6, 0.5 + 1e-13)],
        )
        .unwrap();
        match fit(kernel(1.0), &lm) {
            Err(Error::NotPositiveDefinite { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected conditioning error, got {other:?}"),
        }
    }

    #[test]
    fn det_field_of_identity_is_one_everywhere() {
        let t = Transformation::identity(kernel(1.0));
        let f = t.det_field(Rect::unit(), 16, 16).unwrap();
        assert!(f.det_values.iter().all(|&d| d == 1.0));
        assert_eq!(f.min_det, 1.0);
        assert_eq!(f.negative_fraction, 0.0);
        assert!(f.preserves_topology());
    }

    #[test]
    fn det_field_topology_contrast_matches_figure_parameters() {
        let lm =
            LandmarkCorrespondence::new(vec![Point2::new(0.5, 0.5)], vec![Point2::new(0.6, 0.7)])
                .unwrap();
        let ok = fit(kernel(1.02), &lm).unwrap();
        assert!(ok.det_field(Rect::unit(), 200, 200).unwrap().min_det > 0.0);
        let bad = fit(kernel(0.15), &lm).unwrap();
        let f = bad.det_field(Rect::unit(), 200, 200).unwrap();
        assert!(f.min_det < 0.0);
        assert!(f.negative_fraction > 0.0);
    }

    #[test]
    fn det_field_rejects_degenerate_inputs() {
        assert!(Rect::new(0.0, 0.0, 0.0, 1.0).is_err());
        let t = Transformation::identity(kernel(1.0));
        assert!(t.det_field(Rect::unit(), 1, 10).is_err());
    }
}
