//! The k–h–a–b dictionary and the geodesic invariants A(k), T(k), M(k), H(k).
//!
//! A unit-speed geodesic with principal constants `(a, b)` has modulus
//! `k = sqrt((1 - 2|ab|) / (1 + 2|ab|))` and average height
//! `h = log|b/a| / 2`. In terms of the complete elliptic integrals,
//!
//! ```text
//! A(k) = arctanh(k)                        amplitude of the z-oscillation
//! T(k) = sqrt(8(1+k^2)) K(k)               period of the z-oscillation
//! M(k) = sqrt(8(1+k^2)) (2E - (1-k^2)K) / (1-k^2)   axis-drift factor
//! H(k) = (4E - 2(1-k^2)K) / sqrt(1-k^2)    horizontal drift invariant
//! ```
//!
//! with `H = sqrt(|ab|) M` identically. T, M, H are strictly increasing
//! real-analytic diffeomorphisms of `[0, 1)` onto `[sqrt(2)π, ∞)` (T, M)
//! and `[π, ∞)` (H).
//!
//! As in [`crate::elliptic`], the cores are parameterized by
//! `mc = 1 - k^2` so the `k -> 1` regime keeps full relative precision.

use std::f64::consts::PI;

use crate::elliptic::{agm, complementary_parameter, complete_elliptic_mc};
use crate::{Error, Result};

/// Derivative formulas carry a removable `1/k`; below this threshold they
/// are refused rather than series-expanded.
const K_DERIVATIVE_FLOOR: f64 = 1e-8;

/// The invariants of one modulus value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSet {
    pub k: f64,
    /// A(k) = arctanh(k), half-width of the z-oscillation (height units).
    pub amplitude: f64,
    /// T(k), the period of the z-oscillation (arclength units).
    pub period: f64,
    /// M(k), the drift factor along the cylinder axis.
    pub axis_drift: f64,
    /// H(k) = sqrt(|ab|) M(k), the horizontal drift invariant.
    pub horizontal_drift: f64,
}

/// The dictionary between `(a, b)` magnitudes and `(k, h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusDict {
    pub k: f64,
    pub h: f64,
    /// |a| = e^{-h} sqrt((1-k^2) / (2(1+k^2)))
    pub abs_a: f64,
    /// |b| = e^{h} sqrt((1-k^2) / (2(1+k^2)))
    pub abs_b: f64,
    /// 2|ab| = (1-k^2) / (1+k^2)
    pub two_abs_ab: f64,
}

/// `2|ab|` as a function of the complementary parameter `mc = 1 - k^2`.
pub(crate) fn two_ab_from_mc(mc: f64) -> f64 {
    mc / (2.0 - mc)
}

/// Modulus of a unit-speed geodesic from its principal constants.
/// Signs of `a`, `b` are irrelevant. `k = 0` iff `2|ab| = 1`, `k = 1` iff
/// `ab = 0`.
pub fn modulus_from_ab(a: f64, b: f64) -> Result<f64> {
    let two_ab = 2.0 * (a * b).abs();
    if two_ab > 1.0 + 1e-9 {
        return Err(Error::Admissibility { two_ab });
    }
    let two_ab = two_ab.min(1.0);
    Ok(((1.0 - two_ab) / (1.0 + two_ab)).sqrt())
}

/// Magnitudes `|a|`, `|b|` realizing modulus `k` at average height `h`.
/// The signs of `a` and `b` are not determined by `(k, h)`; they can be
/// adjusted by reflection isometries.
pub fn ab_from_kh(k: f64, h: f64) -> Result<ModulusDict> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    let mc = complementary_parameter(k);
    let root = (mc / (2.0 * (2.0 - mc))).sqrt();
    Ok(ModulusDict {
        k,
        h,
        abs_a: (-h).exp() * root,
        abs_b: h.exp() * root,
        two_abs_ab: two_ab_from_mc(mc),
    })
}

/// Amplitude `A(k) = arctanh(k)` of the vertical oscillation; equivalently
/// `arccosh(1 / (2|ab|)) / 2`.
pub fn amplitude(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    Ok(k.atanh())
}

fn invariants_from_mc(mc: f64) -> Result<(f64, f64, f64)> {
    let (big_k, big_e) = complete_elliptic_mc(mc)?;
    let scale = (8.0 * (2.0 - mc)).sqrt();
    let period = scale * big_k;
    let axis_drift = scale * (2.0 * big_e - mc * big_k) / mc;
    let horizontal_drift = 2.0 * (2.0 * big_e - mc * big_k) / mc.sqrt();
    Ok((period, axis_drift, horizontal_drift))
}

/// T, M, H as functions of the complementary parameter `mc = 1 - k^2`.
/// Precision-preserving core for the `k -> 1` regime.
pub fn invariant_set_mc(mc: f64) -> Result<(f64, f64, f64)> {
    if !(mc > 0.0) || mc > 1.0 {
        return Err(Error::Domain(format!("complementary parameter must lie in (0, 1], got {mc}")));
    }
    invariants_from_mc(mc)
}

/// All invariants at modulus `k ∈ [0, 1)`.
pub fn invariant_set(k: f64) -> Result<InvariantSet> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    let (period, axis_drift, horizontal_drift) = invariants_from_mc(complementary_parameter(k))?;
    Ok(InvariantSet { k, amplitude: k.atanh(), period, axis_drift, horizontal_drift })
}

/// Derivatives `(T'(k), M'(k), H'(k))` in closed form.
///
/// Refuses `k < 1e-8`, where the removable `1/k` factor would demand a
/// series expansion.
pub fn invariant_derivatives(k: f64) -> Result<(f64, f64, f64)> {
    if !(k >= K_DERIVATIVE_FLOOR && k < 1.0) {
        return Err(Error::Domain(format!(
            "derivatives require {K_DERIVATIVE_FLOOR} <= k < 1, got {k}"
        )));
    }
    let mc = complementary_parameter(k);
    let (big_k, big_e) = complete_elliptic_mc(mc)?;
    let opk2 = 2.0 - mc; // 1 + k^2
    let dt = (8.0 / opk2).sqrt() * (opk2 * big_e - mc * big_k) / (k * mc);
    let dh = 2.0 * (opk2 * big_e - mc * big_k) / (k * mc.powf(1.5));
    let dm = (8.0 * opk2).sqrt()
        * ((big_e - mc * big_k) / (k * mc)
            + k * (4.0 - mc) * (2.0 * big_e - mc * big_k) / (opk2 * mc * mc));
    Ok((dt, dm, dh))
}

/// `M'(k)` written through `M` and `T` themselves:
/// `M' = (M - T)/(2k) + k(3 + k^2) M / ((1-k^2)(1+k^2))`.
/// Algebraically identical to the closed form in
/// [`invariant_derivatives`]; kept as a cross-check route.
pub fn axis_drift_derivative_alt(k: f64) -> Result<f64> {
    if !(k >= K_DERIVATIVE_FLOOR && k < 1.0) {
        return Err(Error::Domain(format!(
            "derivatives require {K_DERIVATIVE_FLOOR} <= k < 1, got {k}"
        )));
    }
    let mc = complementary_parameter(k);
    let (period, axis_drift, _) = invariants_from_mc(mc)?;
    Ok((axis_drift - period) / (2.0 * k) + k * (4.0 - mc) * axis_drift / (mc * (2.0 - mc)))
}

/// Inverts a function of `mc` that decreases from `value_at_one` (at
/// `mc = 1`, i.e. `k = 0`) to infinity as `mc -> 0`. Bracketing bisection
/// in log(mc), refined by safeguarded Newton with the supplied derivative.
fn invert_decreasing_mc(
    f: &dyn Fn(f64) -> f64,
    df_dmc: &dyn Fn(f64) -> f64,
    target: f64,
    value_at_one: f64,
    guess: f64,
) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::Domain(format!("target must be finite, got {target}")));
    }
    if target < value_at_one - 1e-12 * value_at_one.max(1.0) {
        return Err(Error::BelowRange { target, infimum: value_at_one });
    }
    if target <= value_at_one {
        return Ok(1.0);
    }
    // Bracket [lo, hi] with f(lo) >= target >= f(hi).
    let mut hi = 1.0_f64;
    let mut lo = guess.clamp(1e-300, 0.5);
    while f(lo) < target {
        lo *= 0.25;
        if lo < 1e-300 {
            return Err(Error::SearchFailure("inversion bracket collapsed".into()));
        }
    }
    let mut mc = (lo * hi).sqrt();
    for _ in 0..200 {
        let g = f(mc) - target;
        if g >= 0.0 {
            lo = mc;
        } else {
            hi = mc;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
        // Newton step in mc, kept inside the bracket; fall back to a
        // log-space bisection step otherwise.
        let d = df_dmc(mc);
        let newton = mc - g / d;
        mc = if d.is_finite() && d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            (lo * hi).sqrt()
        };
        if (f(mc) - target).abs() <= 1e-14 * target.max(1.0) {
            return Ok(mc);
        }
    }
    Ok(0.5 * (lo + hi))
}

fn horizontal_drift_mc(mc: f64) -> f64 {
    invariants_from_mc(mc).map(|(_, _, h)| h).unwrap_or(f64::NAN)
}

fn period_mc(mc: f64) -> f64 {
    invariants_from_mc(mc).map(|(t, _, _)| t).unwrap_or(f64::NAN)
}

fn d_horizontal_drift_dmc(mc: f64) -> f64 {
    if 1.0 - mc < 1e-10 {
        return f64::NAN; // force the bisection fallback near k = 0
    }
    let (big_k, big_e) = match complete_elliptic_mc(mc) {
        Ok(p) => p,
        Err(_) => return f64::NAN,
    };
    let de = (big_k - big_e) / (2.0 * (1.0 - mc));
    let dk = -(big_e - mc * big_k) / (2.0 * mc * (1.0 - mc));
    let num = 2.0 * big_e - mc * big_k;
    2.0 * ((2.0 * de - big_k - mc * dk) / mc.sqrt() - 0.5 * num / mc.powf(1.5))
}

fn d_period_dmc(mc: f64) -> f64 {
    if 1.0 - mc < 1e-10 {
        return f64::NAN;
    }
    let (big_k, big_e) = match complete_elliptic_mc(mc) {
        Ok(p) => p,
        Err(_) => return f64::NAN,
    };
    let dk = -(big_e - mc * big_k) / (2.0 * mc * (1.0 - mc));
    let scale = (8.0 * (2.0 - mc)).sqrt();
    -0.5 * (8.0 / (8.0 * (2.0 - mc))).sqrt() * 2.0 * big_k + scale * dk
}

/// Inverse of `H` in the complementary parameter: the unique `mc` with
/// `H(mc) = target`, for `target >= π`.
pub fn invert_horizontal_drift_mc(target: f64) -> Result<f64> {
    // H ~ 4 / sqrt(mc) as mc -> 0 seeds the bracket.
    let guess = (4.0 / target) * (4.0 / target);
    invert_decreasing_mc(&horizontal_drift_mc, &d_horizontal_drift_dmc, target, PI, guess)
}

/// The unique `k` with `H(k) = target`, for `target >= π`.
///
/// Accuracy is limited by the spacing of `f64` moduli near `k = 1`; for
/// targets so large that this matters, use
/// [`invert_horizontal_drift_mc`].
pub fn invert_horizontal_drift(target: f64) -> Result<f64> {
    let mc = invert_horizontal_drift_mc(target)?;
    Ok((1.0 - mc).max(0.0).sqrt())
}

/// Inverse of `T` in the complementary parameter, for
/// `target >= sqrt(2) π`.
pub fn invert_period_mc(target: f64) -> Result<f64> {
    // T ~ 4 K ~ 4 log(4 / sqrt(mc)), so mc ~ 16 exp(-target / 2).
    let guess = 16.0 * (-target / 2.0).exp();
    invert_decreasing_mc(&period_mc, &d_period_dmc, target, std::f64::consts::SQRT_2 * PI, guess)
}

/// The unique `k` with `T(k) = target`, for `target >= sqrt(2) π`.
pub fn invert_period(target: f64) -> Result<f64> {
    let mc = invert_period_mc(target)?;
    Ok((1.0 - mc).max(0.0).sqrt())
}

/// The AGM representation of the period:
/// `T = π / AGM(sqrt(|ab|), sqrt(1 + 2|ab|) / 2)`.
pub fn agm_period(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus must lie in [0, 1), got {k}")));
    }
    let two_ab = two_ab_from_mc(complementary_parameter(k));
    Ok(PI / agm((0.5 * two_ab).sqrt(), 0.5 * (1.0 + two_ab).sqrt())?)
}

/// [`agm_period`] parameterized by the principal constants directly.
pub fn agm_period_from_ab(a: f64, b: f64) -> Result<f64> {
    let two_ab = 2.0 * (a * b).abs();
    if two_ab > 1.0 + 1e-9 {
        return Err(Error::Admissibility { two_ab });
    }
    if two_ab == 0.0 {
        return Err(Error::Domain("period requires ab != 0".into()));
    }
    let two_ab = two_ab.min(1.0);
    Ok(PI / agm((0.5 * two_ab).sqrt(), 0.5 * (1.0 + two_ab).sqrt())?)
}
