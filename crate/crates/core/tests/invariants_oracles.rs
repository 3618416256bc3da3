//! Singular-quadrature oracles for T(k) and M(k), finite-difference
//! checks of the derivative formulas, inversion round trips, and the
//! k -> 0 / k -> 1 limit behavior.

mod common;

use common::{central_diff, quad};
use sol_geodesics::invariants::{
    ab_from_kh, agm_period, amplitude, invariant_derivatives, invariant_set, invariant_set_mc,
    invert_horizontal_drift, invert_period,
};
use std::f64::consts::{FRAC_PI_2, PI};

/// Direct quadrature of the period integral
/// `T = 4 ∫_0^{A(k)} dz / sqrt(1 - 2|ab| cosh 2z)`, with the singular
/// endpoint removed by `z = log((1+ku)/(1-ku))/2` followed by `u = sin θ`.
/// The integrand is evaluated through `z(u)` itself, not through the
/// algebraically simplified elliptic form.
fn period_quadrature(k: f64) -> f64 {
    let two_ab = (1.0 - k * k) / (1.0 + k * k);
    quad(
        &|theta: f64| {
            let u = theta.sin();
            let z = 0.5 * ((1.0 + k * u) / (1.0 - k * u)).ln();
            let dz_du = k / (1.0 - k * k * u * u);
            let radicand = (1.0 - two_ab * (2.0 * z).cosh()).max(0.0);
            if radicand == 0.0 {
                return 0.0;
            }
            4.0 * dz_du * theta.cos() / radicand.sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-10,
    )
}

/// Direct quadrature of the drift integral
/// `M = 4 ∫_0^{A(k)} cosh(2z) dz / sqrt(1 - 2|ab| cosh 2z)` under the
/// same substitution.
fn axis_drift_quadrature(k: f64) -> f64 {
    let two_ab = (1.0 - k * k) / (1.0 + k * k);
    quad(
        &|theta: f64| {
            let u = theta.sin();
            let z = 0.5 * ((1.0 + k * u) / (1.0 - k * u)).ln();
            let dz_du = k / (1.0 - k * k * u * u);
            let ch = (2.0 * z).cosh();
            let radicand = (1.0 - two_ab * ch).max(0.0);
            if radicand == 0.0 {
                return 0.0;
            }
            4.0 * ch * dz_du * theta.cos() / radicand.sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-10,
    )
}

#[test]
fn elliptic_forms_match_singular_quadrature() {
    for i in 1..=9 {
        let k = i as f64 / 10.0;
        let inv = invariant_set(k).unwrap();
        let t_direct = period_quadrature(k);
        let m_direct = axis_drift_quadrature(k);
        assert!(
            (inv.period - t_direct).abs() < 1e-8,
            "T at k = {k}: {} vs {t_direct}",
            inv.period
        );
        assert!(
            (inv.axis_drift - m_direct).abs() < 1e-8,
            "M at k = {k}: {} vs {m_direct}",
            inv.axis_drift
        );
    }
}

#[test]
fn agm_period_matches_elliptic_form() {
    for &k in &[0.01, 0.3, 0.5, 0.9, 0.99] {
        let t = invariant_set(k).unwrap().period;
        let t_agm = agm_period(k).unwrap();
        assert!((t - t_agm).abs() <= 1e-12 * t, "k = {k}");
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let h = 1e-6;
    for &k in &[0.2, 0.5, 0.8] {
        let (dt, dm, dh_) = invariant_derivatives(k).unwrap();
        let fd_t = central_diff(&|x| invariant_set(x).unwrap().period, k, h);
        let fd_m = central_diff(&|x| invariant_set(x).unwrap().axis_drift, k, h);
        let fd_h = central_diff(&|x| invariant_set(x).unwrap().horizontal_drift, k, h);
        assert!((dt - fd_t).abs() <= 1e-6 * dt.abs(), "T' at {k}: {dt} vs {fd_t}");
        assert!((dm - fd_m).abs() <= 1e-6 * dm.abs(), "M' at {k}: {dm} vs {fd_m}");
        assert!((dh_ - fd_h).abs() <= 1e-6 * dh_.abs(), "H' at {k}: {dh_} vs {fd_h}");
    }
}

#[test]
fn derivatives_positive_on_grid() {
    for i in 1..50 {
        let k = i as f64 / 50.0;
        let (dt, dm, dh) = invariant_derivatives(k).unwrap();
        assert!(dt > 0.0 && dm > 0.0 && dh > 0.0, "monotone increasing at k = {k}");
    }
}

#[test]
fn amplitude_satisfies_potential_normalization() {
    // 2 U_{a,b}(h ± A(k)) = 1 for any realization of k
    for &(k, h) in &[(0.4, 0.7), (0.8, -1.2)] {
        let d = ab_from_kh(k, h).unwrap();
        let a_k = amplitude(k).unwrap();
        for z in [h + a_k, h - a_k] {
            let u = sol_geodesics::geometry::potential(d.abs_a, d.abs_b, z);
            assert!((2.0 * u - 1.0).abs() < 1e-12, "k = {k}, z = {z}");
        }
    }
}

#[test]
fn drift_squared_identity() {
    // H(k)^2 = |ab| M(k)^2 identically
    for i in 1..20 {
        let k = i as f64 / 20.0;
        let inv = invariant_set(k).unwrap();
        let ab = 0.5 * ab_from_kh(k, 0.0).unwrap().two_abs_ab;
        let lhs = inv.horizontal_drift * inv.horizontal_drift;
        let rhs = ab * inv.axis_drift * inv.axis_drift;
        assert!((lhs - rhs).abs() <= 1e-12 * lhs, "k = {k}");
    }
}

#[test]
fn inversion_round_trips() {
    let h07 = invariant_set(0.7).unwrap().horizontal_drift;
    assert!((invert_horizontal_drift(h07).unwrap() - 0.7).abs() < 1e-10);
    assert!(invert_horizontal_drift(PI).unwrap() == 0.0);
    let t_at = invariant_set(0.35).unwrap().period;
    assert!((invert_period(t_at).unwrap() - 0.35).abs() < 1e-10);
    assert!(invert_period(std::f64::consts::SQRT_2 * PI).unwrap() == 0.0);
}

#[test]
fn limits_toward_k_one_monotone() {
    // sqrt(1-k^2) H -> 4, (1-k^2) M -> 8, 2T/|log(1-k^2)| -> 4, with
    // monotone approach over k = 1 - 10^{-m}, m = 4..10
    let mut prev_h = f64::NEG_INFINITY;
    let mut prev_m = f64::NEG_INFINITY;
    let mut prev_t = f64::INFINITY;
    for m in 4..=10 {
        let k = 1.0 - 10f64.powi(-m);
        let mc = (1.0 - k) * (1.0 + k);
        let (t, md, hd) = invariant_set_mc(mc).unwrap();
        let q_h = mc.sqrt() * hd;
        let q_m = mc * md;
        let q_t = 2.0 * t / mc.ln().abs();
        assert!(q_h > prev_h, "sqrt(1-k^2) H increases toward 4 (m = {m})");
        assert!(q_m > prev_m, "(1-k^2) M increases toward 8 (m = {m})");
        assert!(q_t < prev_t, "2T/|log(1-k^2)| decreases toward 4 (m = {m})");
        assert!(q_h < 4.0 && q_m < 8.0 && q_t > 4.0);
        prev_h = q_h;
        prev_m = q_m;
        prev_t = q_t;
    }
    // the algebraic limits are tight for H and M already at m = 10
    assert!((4.0 - prev_h) < 1e-6);
    assert!((8.0 - prev_m) < 1e-6);
}
