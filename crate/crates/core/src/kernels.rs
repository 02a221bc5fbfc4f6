//! Compactly supported radial basis functions (CSRBFs).
//!
//! Three families are provided: Wendland's `phi_{3,1}`, Wu's `psi_{1,2}` and
//! the oscillatory Gneiting family `tau_{2,l}` for any exponent `l >= 7/2`.
//! All kernels are normalized so that the value is 1 at the origin and 0 at
//! and beyond the support radius `c`; evaluation happens internally in the
//! scaled variable `s = r / c`, which makes scale covariance structural.

use crate::error::{Error, Result};

/// One of the supported CSRBF families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// Wendland `phi_{3,1}(r) = (1 - s)_+^4 (4 s + 1)`.
    Wendland31,
    /// Wu `psi_{1,2}(r) = (1 - s)_+^4 (1 + 4 s + 3 s^2 + 3/4 s^3)`.
    Wu12,
    /// Gneiting `tau_{2,l}(r) = (1 - s)_+^l (1 + l s - (l+1)(l+4)/2 s^2)`,
    /// strictly positive definite on the plane for `l >= 7/2`.
    Gneiting { exponent: f64 },
}

/// Smallest exponent for which the Gneiting family is positive definite in 2D.
pub const GNEITING_MIN_EXPONENT: f64 = 3.5;

impl KernelFamily {
    pub const GNEITING_SEVEN_HALVES: KernelFamily = KernelFamily::Gneiting { exponent: 3.5 };
    pub const GNEITING_FIVE: KernelFamily = KernelFamily::Gneiting { exponent: 5.0 };

    /// The four families studied side by side throughout the analysis.
    pub const ALL: [KernelFamily; 4] = [
        KernelFamily::Wendland31,
        KernelFamily::Wu12,
        KernelFamily::GNEITING_SEVEN_HALVES,
        KernelFamily::GNEITING_FIVE,
    ];

    /// A Gneiting family member with the given exponent.
    pub fn gneiting(exponent: f64) -> Result<KernelFamily> {
        if !exponent.is_finite() || exponent < GNEITING_MIN_EXPONENT {
            return Err(Error::InvalidInput(format!(
                "Gneiting exponent must be >= 7/2, got {exponent}"
            )));
        }
        Ok(KernelFamily::Gneiting { exponent })
    }

    /// Stable identifier used in CLI flags and CSV output.
    pub fn label(&self) -> String {
        match *self {
            KernelFamily::Wendland31 => "wendland".to_string(),
            KernelFamily::Wu12 => "wu".to_string(),
            KernelFamily::Gneiting { exponent } => {
                if exponent == 3.5 {
                    "gneiting-7-2".to_string()
                } else if exponent == 5.0 {
                    "gneiting-5".to_string()
                } else {
                    format!("gneiting-l{exponent}")
                }
            }
        }
    }

    /// Kernel value at the scaled radius `s = r / c`, for `s >= 0`.
    pub fn value_scaled(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 0.0;
        }
        let t = 1.0 - s;
        match *self {
            KernelFamily::Wendland31 => t.powi(4) * (4.0 * s + 1.0),
            KernelFamily::Wu12 => t.powi(4) * (1.0 + s * (4.0 + s * (3.0 + s * 0.75))),
            KernelFamily::Gneiting { exponent: l } => {
                let a = (l + 1.0) * (l + 4.0) / 2.0;
                truncated_pow(t, l) * (1.0 + l * s - a * s * s)
            }
        }
    }

    /// Radial derivative `d/ds` of the scaled kernel, for `s >= 0`.
    pub fn deriv_scaled(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 0.0;
        }
        let t = 1.0 - s;
        match *self {
            KernelFamily::Wendland31 => -20.0 * s * t.powi(3),
            KernelFamily::Wu12 => -(7.0 / 4.0) * s * t.powi(3) * (8.0 + s * (9.0 + 3.0 * s)),
            KernelFamily::Gneiting { exponent: l } => {
                let a = (l + 1.0) * (l + 4.0) / 2.0;
                s * truncated_pow(t, l - 1.0) * (a * (l + 2.0) * s - (l * l + l + 2.0 * a))
            }
        }
    }
}

/// `t_+^l` with `t` clamped to `[0, inf)` first, so floating-point drift just
/// below the support boundary cannot produce NaN for fractional exponents.
/// Half-integer exponents go through `sqrt` instead of `powf`.
fn truncated_pow(t: f64, l: f64) -> f64 {
    let t = t.max(0.0);
    if l.fract() == 0.0 {
        t.powi(l as i32)
    } else if (2.0 * l).fract() == 0.0 {
        t.powi(l.floor() as i32) * t.sqrt()
    } else {
        t.powf(l)
    }
}

/// A CSRBF family member together with its support size `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    family: KernelFamily,
    support: f64,
}

impl Kernel {
    pub fn new(family: KernelFamily, support: f64) -> Result<Kernel> {
        if let KernelFamily::Gneiting { exponent } = family {
            KernelFamily::gneiting(exponent)?;
        }
        if !support.is_finite() || support <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "support size must be positive, got {support}"
            )));
        }
        Ok(Kernel { family, support })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    /// Kernel value at radius `r >= 0`. Zero for `r >= c`.
    pub fn value(&self, r: f64) -> f64 {
        self.family.value_scaled(r / self.support)
    }

    /// Radial derivative `dPhi/dr` at `r >= 0`. Zero for `r >= c` and at `r = 0`.
    pub fn deriv(&self, r: f64) -> f64 {
        self.family.deriv_scaled(r / self.support) / self.support
    }
}

/// Applies the turning-bands operator `phi_{m-2}(r) = phi_m(r) + r phi_m'(r)/(m-2)`
/// with `m = 4` to the base function `(1-s)_+^{l+1} ((l+1) s + 1)`.
///
/// This reconstructs the Gneiting family from its Wendland ancestor by an
/// independent route and is used as an oracle for `value_scaled`.
pub fn turning_bands_reference(l: f64, s: f64) -> Result<f64> {
    if !l.is_finite() || l < GNEITING_MIN_EXPONENT {
        return Err(Error::InvalidInput(format!(
            "turning-bands exponent must be >= 7/2, got {l}"
        )));
    }
    if s >= 1.0 {
        return Ok(0.0);
    }
    let t = 1.0 - s;
    let base = truncated_pow(t, l + 1.0) * ((l + 1.0) * s + 1.0);
    let base_deriv = -(l + 1.0) * (l + 2.0) * s * truncated_pow(t, l);
    Ok(base + s * base_deriv / 2.0)
}

/// Cubic Taylor expansion `1 + a2 s^2 + a3 s^3` of a kernel around the origin
/// (the linear coefficient vanishes for every in-scope family).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorApprox {
    pub a2: f64,
    pub a3: f64,
}

impl TaylorApprox {
    /// Expansion coefficients for the two named Gneiting instances.
    pub fn for_family(family: KernelFamily) -> Result<TaylorApprox> {
        match family {
            f if f == KernelFamily::GNEITING_SEVEN_HALVES => Ok(TaylorApprox {
                a2: -99.0 / 4.0,
                a3: 1155.0 / 16.0,
            }),
            f if f == KernelFamily::GNEITING_FIVE => Ok(TaylorApprox {
                a2: -42.0,
                a3: 175.0,
            }),
            other => Err(Error::InvalidInput(format!(
                "no Taylor expansion tabulated for {}",
                other.label()
            ))),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        1.0 + self.a2 * s * s + self.a3 * s * s * s
    }
}

/// Cubic Taylor value of a named Gneiting kernel at scaled radius `s`.
pub fn taylor_value(family: KernelFamily, s: f64) -> Result<f64> {
    Ok(TaylorApprox::for_family(family)?.value(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin_is_one() {
        for family in KernelFamily::ALL {
            let k = Kernel::new(family, 1.0).unwrap();
            assert_eq!(k.value(0.0), 1.0, "{}", family.label());
        }
    }

    #[test]
    fn value_vanishes_at_and_beyond_support() {
        for family in KernelFamily::ALL {
            let k = Kernel::new(family, 2.5).unwrap();
            for r in [2.5, 3.0, 100.0] {
                assert_eq!(k.value(r), 0.0, "{}", family.label());
                assert_eq!(k.deriv(r), 0.0, "{}", family.label());
            }
        }
    }

    #[test]
    fn gneiting_five_hand_evaluated_point() {
        // (0.5)^5 * (1 + 2.5 - 6.75)
        let k = Kernel::new(KernelFamily::GNEITING_FIVE, 1.0).unwrap();
        assert!((k.value(0.5) - (-0.1015625)).abs() < 1e-15);
    }

    #[test]
    fn wendland_hand_evaluated_point() {
        // (0.5)^4 * 3 at r = 1 with c = 2
        let k = Kernel::new(KernelFamily::Wendland31, 2.0).unwrap();
        assert!((k.value(1.0) - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn wendland_derivative_closed_form_point() {
        let k = Kernel::new(KernelFamily::Wendland31, 1.0).unwrap();
        assert!((k.deriv(0.25) - (-2.109375)).abs() < 1e-12);
    }

    #[test]
    fn gneiting_deriv_matches_printed_closed_forms() {
        // tau_{2,7/2}: -(99 r / 16 c^2) (1 - r/c)^{5/2} (8 - 15 r/c)
        let k = Kernel::new(KernelFamily::GNEITING_SEVEN_HALVES, 1.0).unwrap();
        for r in [0.05f64, 0.17, 0.4, 0.53, 0.8, 0.99] {
            let expected =
                -(99.0 * r / 16.0) * (1.0 - r).powi(2) * (1.0 - r).sqrt() * (8.0 - 15.0 * r);
            assert!((k.deriv(r) - expected).abs() < 1e-12, "r={r}");
        }
        // tau_{2,5}: -(21 r / c^2) (1 - r/c)^4 (4 - 9 r/c)
        let k = Kernel::new(KernelFamily::GNEITING_FIVE, 1.0).unwrap();
        for r in [0.05f64, 0.13, 0.4, 0.45, 0.8, 0.99] {
            let expected = -(21.0 * r) * (1.0 - r).powi(4) * (4.0 - 9.0 * r);
            assert!((k.deriv(r) - expected).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn deriv_is_zero_at_origin() {
        for family in KernelFamily::ALL {
            let k = Kernel::new(family, 1.0).unwrap();
            assert_eq!(k.deriv(0.0), 0.0);
        }
    }

    #[test]
    fn c1_continuity_at_support_boundary() {
        for family in KernelFamily::ALL {
            let k = Kernel::new(family, 1.0).unwrap();
            for eps in [1e-3, 1e-6] {
                // generous slope bound; both value and deriv go to 0 linearly or faster
                let bound = 50.0 * eps;
                assert!(
                    k.value(1.0 - eps).abs() <= bound,
                    "{} value",
                    family.label()
                );
                assert!(
                    k.deriv(1.0 - eps).abs() <= bound,
                    "{} deriv",
                    family.label()
                );
            }
        }
    }

    #[test]
    fn gneiting_oscillates_wendland_and_wu_do_not() {
        let scan_min = |family: KernelFamily| {
            let k = Kernel::new(family, 1.0).unwrap();
            (0..=10_000)
                .map(|i| k.value(i as f64 / 10_000.0))
                .fold(f64::INFINITY, f64::min)
        };
        assert!(scan_min(KernelFamily::GNEITING_SEVEN_HALVES) < 0.0);
        assert!(scan_min(KernelFamily::GNEITING_FIVE) < 0.0);
        assert!(scan_min(KernelFamily::Wendland31) >= 0.0);
        assert!(scan_min(KernelFamily::Wu12) >= 0.0);
    }

    #[test]
    fn turning_bands_equals_gneiting_closed_form() {
        for l in [3.5, 5.0, 6.0] {
            let family = KernelFamily::gneiting(l).unwrap();
            for i in 0..=2000 {
                let s = i as f64 / 2000.0;
                let tb = turning_bands_reference(l, s).unwrap();
                assert!((family.value_scaled(s) - tb).abs() <= 1e-12, "l={l} s={s}");
            }
        }
    }

    #[test]
    fn turning_bands_rejects_small_exponent() {
        assert!(turning_bands_reference(3.0, 0.5).is_err());
    }

    #[test]
    fn gneiting_constructor_rejects_small_exponent() {
        assert!(KernelFamily::gneiting(3.49).is_err());
        assert!(KernelFamily::gneiting(f64::NAN).is_err());
        assert!(KernelFamily::gneiting(3.5).is_ok());
    }

    #[test]
    fn taylor_values_match_hand_evaluation() {
        let g72 = KernelFamily::GNEITING_SEVEN_HALVES;
        let g5 = KernelFamily::GNEITING_FIVE;
        assert_eq!(taylor_value(g72, 0.0).unwrap(), 1.0);
        assert!((taylor_value(g72, 0.01).unwrap() - 0.9975971875).abs() < 1e-15);
        assert!((taylor_value(g5, 0.01).unwrap() - 0.995975).abs() < 1e-15);
        assert!(taylor_value(KernelFamily::Wendland31, 0.01).is_err());
    }

    #[test]
    fn taylor_matches_kernel_to_fourth_order() {
        // |Phi(s) - T(s)| <= C s^4 for s <= 0.1. The constant is frozen from a
        // one-time fit with margin; the check fails if a linear or quadratic
        // discrepancy sneaks in.
        for family in [
            KernelFamily::GNEITING_SEVEN_HALVES,
            KernelFamily::GNEITING_FIVE,
        ] {
            let c_bound = 800.0;
            for i in 1..=1000 {
                let s = 0.1 * i as f64 / 1000.0;
                let err = (family.value_scaled(s) - taylor_value(family, s).unwrap()).abs();
                assert!(
                    err <= c_bound * s.powi(4),
                    "{} s={s} err={err}",
                    family.label()
                );
            }
        }
    }

    #[test]
    fn scale_covariance() {
        for family in KernelFamily::ALL {
            let k1 = Kernel::new(family, 1.0).unwrap();
            let kc = Kernel::new(family, 3.7).unwrap();
            for i in 0..=100 {
                let r = 4.0 * i as f64 / 100.0;
                assert!((kc.value(r) - k1.value(r / 3.7)).abs() < 1e-14);
                assert!((kc.deriv(r) - k1.deriv(r / 3.7) / 3.7).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn deriv_matches_finite_differences() {
        let h = 1e-6;
        for family in KernelFamily::ALL {
            let k = Kernel::new(family, 1.0).unwrap();
            for i in 1..1000 {
                let r = i as f64 / 1000.0;
                let fd = (k.value(r + h) - k.value(r - h)) / (2.0 * h);
                let d = k.deriv(r);
                assert!(
                    (d - fd).abs() <= 1e-6 * (1.0 + d.abs()),
                    "{} r={r} analytic={d} fd={fd}",
                    family.label()
                );
            }
        }
    }
}
