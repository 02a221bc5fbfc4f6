//! Minimum support sizes under the one-landmark topology-preservation
//! condition.
//!
//! For a single landmark shifted by `(dx, dy)` the Jacobian determinant of the
//! transformation stays positive whenever `Delta * dPhi/dr > -1/sqrt(2)` with
//! `Delta = max(dx, dy)` (the worst shift direction is the diagonal). The
//! binding quantity per family is therefore the most negative radial slope at
//! unit support; the minimum admissible support scales linearly with `Delta`.

use crate::error::{Error, Result};
use crate::kernels::KernelFamily;

/// Per-family extremal slope data and the resulting support bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBound {
    pub family: KernelFamily,
    /// Location of the most negative radial slope, as a fraction of `c`.
    pub r_star_over_c: f64,
    /// Value of `dPhi/dr` at `r_star` for unit support (negative).
    pub slope_min: f64,
    /// `c_min / Delta = sqrt(2) * |slope_min|`.
    pub c_min_over_delta: f64,
}

/// Location and value of the minimum of `dPhi/dr` on `(0, 1)` at unit support.
///
/// Closed forms are used where available (Wendland `r* = 1/4`, the two named
/// Gneiting instances via their exact radicals); Wu and general Gneiting
/// exponents fall back to a bracketed golden-section minimization.
pub fn deriv_minimum(family: KernelFamily) -> (f64, f64) {
    let r_star = match family {
        KernelFamily::Wendland31 => 0.25,
        f if f == KernelFamily::GNEITING_SEVEN_HALVES => 4.0 * (29.0 - 301.0_f64.sqrt()) / 270.0,
        f if f == KernelFamily::GNEITING_FIVE => (19.0 - 145.0_f64.sqrt()) / 54.0,
        _ => {
            // Coarse scan to bracket the global minimum (the Gneiting slope is
            // not unimodal on (0,1)), then golden-section refinement.
            let n = 10_000;
            let mut best = (1, f64::INFINITY);
            for i in 1..n {
                let v = family.deriv_scaled(i as f64 / n as f64);
                if v < best.1 {
                    best = (i, v);
                }
            }
            let a = (best.0 - 1) as f64 / n as f64;
            let b = (best.0 + 1) as f64 / n as f64;
            golden_section_min(|s| family.deriv_scaled(s), a, b, 1e-12)
        }
    };
    (r_star, family.deriv_scaled(r_star))
}

/// The full support bound record for one family.
pub fn support_bound(family: KernelFamily) -> SupportBound {
    let (r_star_over_c, slope_min) = deriv_minimum(family);
    SupportBound {
        family,
        r_star_over_c,
        slope_min,
        c_min_over_delta: std::f64::consts::SQRT_2 * slope_min.abs(),
    }
}

/// Infimum of admissible support sizes for a maximal coordinate shift `delta`.
///
/// The topology condition holds strictly for every `c > c_min`; callers that
/// need a safe concrete value should multiply by a safety factor.
pub fn min_support(family: KernelFamily, delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "landmark shift delta must be positive, got {delta}"
        )));
    }
    Ok(support_bound(family).c_min_over_delta * delta)
}

/// Golden-section search for the minimizer of `f` on `[a, b]`.
fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}
