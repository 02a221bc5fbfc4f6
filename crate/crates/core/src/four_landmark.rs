//! Closed-form analysis of the symmetric four-landmark (rhombus) case.
//!
//! Source landmarks sit at the vertices of the unit rhombus
//! `P = {(0,1), (-1,0), (0,-1), (1,0)}`; only the bottom vertex is shifted
//! down by `delta`. The interpolation coefficients then have closed forms in
//! `alpha = Phi(sqrt(2))` and `beta = Phi(2)`, and the Jacobian determinant
//! along the upper axis `(0, y)` admits a support-independent asymptotic form
//! as the support grows.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::registration::Point2;

/// Source vertices of the unit rhombus, in the order top, left, bottom, right.
pub const RHOMBUS_SOURCES: [Point2; 4] = [
    Point2 { x: 0.0, y: 1.0 },
    Point2 { x: -1.0, y: 0.0 },
    Point2 { x: 0.0, y: -1.0 },
    Point2 { x: 1.0, y: 0.0 },
];

/// Target vertices: identical except the bottom vertex shifted down by `delta`.
pub fn rhombus_targets(delta: f64) -> [Point2; 4] {
    let mut t = RHOMBUS_SOURCES;
    t[2].y = -1.0 - delta;
    t
}

/// A concrete rhombus configuration: shift magnitude and kernel.
#[derive(Debug, Clone, Copy)]
pub struct RhombusCase {
    pub delta: f64,
    pub kernel: Kernel,
}

impl RhombusCase {
    pub fn new(delta: f64, kernel: Kernel) -> Result<RhombusCase> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "rhombus shift delta must be nonnegative, got {delta}"
            )));
        }
        Ok(RhombusCase { delta, kernel })
    }

    /// Kernel value at the adjacent-vertex distance `sqrt(2)`.
    pub fn alpha(&self) -> f64 {
        self.kernel.value(std::f64::consts::SQRT_2)
    }

    /// Kernel value at the opposite-vertex distance `2`.
    pub fn beta(&self) -> f64 {
        self.kernel.value(2.0)
    }
}

/// Closed-form interpolation coefficients of the rhombus case. The x-system
/// is homogeneous, so all first-coordinate coefficients vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhombusCoefficients {
    /// `c_{2,1} .. c_{2,4}` in vertex order; `c2[1] == c2[3]` by symmetry.
    pub c2: [f64; 4],
}

/// Below this magnitude the closed-form denominators are treated as vanished.
/// `(1+beta)^2 - 4 alpha^2` decays like `1/c^3`, so this caps usable supports
/// near `c ~ 1e4` in the unit rhombus frame.
const DENOMINATOR_EPS: f64 = 1e-13;

/// Evaluates the closed-form coefficient solution of the two 4x4 systems.
pub fn rhombus_coefficients(case: &RhombusCase) -> Result<RhombusCoefficients> {
    let a = case.alpha();
    let b = case.beta();
    let d = case.delta;
    let inner = (1.0 + b) * (1.0 + b) - 4.0 * a * a;
    if inner.abs() < DENOMINATOR_EPS || (1.0 - b).abs() < DENOMINATOR_EPS {
        return Err(Error::SingularConfiguration(format!(
            "closed-form denominators vanish (1-beta={:.3e}, (1+beta)^2-4alpha^2={:.3e}); \
             support too large for the unit rhombus frame",
            1.0 - b,
            inner
        )));
    }
    let c21 = (b * b + b - 2.0 * a * a) * d / ((1.0 - b) * inner);
    let c22 = a * d / inner;
    let c23 = -(1.0 + b - 2.0 * a * a) * d / ((1.0 - b) * inner);
    Ok(RhombusCoefficients {
        c2: [c21, c22, c23, c22],
    })
}

/// Exact Jacobian determinant of the rhombus transformation at `(0, y)`,
/// `y > 1`, using the closed-form coefficients and analytic kernel
/// derivatives (no Taylor truncation).
pub fn axis_det(case: &RhombusCase, y: f64) -> Result<f64> {
    if !(y > 1.0) {
        return Err(Error::InvalidInput(format!(
            "axis position must satisfy y > 1, got {y}"
        )));
    }
    let coeffs = rhombus_coefficients(case)?;
    let mut det = 1.0;
    for (p, c2) in RHOMBUS_SOURCES.iter().zip(coeffs.c2) {
        let r = Point2::new(0.0, y).dist(*p);
        if r > 0.0 {
            det += c2 * case.kernel.deriv(r) * (y - p.y) / r;
        }
    }
    Ok(det)
}

/// The shared asymptotic constant of both Gneiting coefficient chains,
/// `(3/8) / (2 - sqrt(2)) = 0.6402...`.
pub fn asymptotic_constant() -> f64 {
    (3.0 / 8.0) / (2.0 - std::f64::consts::SQRT_2)
}

/// Large-support limit of the axis determinant,
/// `det(J(0,y)) ~ 1 - 0.6402 delta (y^2 + 1 - y sqrt(y^2 + 1))`.
pub fn asymptotic_axis_det(delta: f64, y: f64) -> f64 {
    1.0 - asymptotic_constant() * delta * (y * y + 1.0 - y * (y * y + 1.0).sqrt())
}

/// One row of the determinant comparison table behind the cross-family
/// equivalence figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Row {
    pub y: f64,
    pub kernel: String,
    pub det: f64,
}

/// Exact axis determinants per kernel family per sample position, all at the
/// same support size and shift.
pub fn figure2_table(
    families: &[crate::kernels::KernelFamily],
    c: f64,
    delta: f64,
    y_samples: &[f64],
) -> Result<Vec<Figure2Row>> {
    let mut rows = Vec::with_capacity(families.len() * y_samples.len());
    for family in families {
        let case = RhombusCase::new(delta, Kernel::new(*family, c)?)?;
        for &y in y_samples {
            rows.push(Figure2Row {
                y,
                kernel: family.label(),
                det: axis_det(&case, y)?,
            });
        }
    }
    Ok(rows)
}
