//! Partner geodesics and the rendez-vous phenomenon.
//!
//! The partner of a generic geodesic γ at time `t1` starts at `γ(t1)`
//! with the vertically flipped velocity `(ẋ, ẏ, -ż)`. It shares the
//! principal constants `(a, b)`, hence modulus and average height, while
//! `c* = c - 2ż(t1)`. Both wind around their cylinders by the same
//! displacement `sgn(ab) M(k) (b, a, 0)` per period, so they meet again
//! at `t1 + T(k)`: two distinct arcs of equal length joining the same
//! endpoints whenever `ż(t1) ≠ 0`. At a critical time the two arcs
//! coalesce and the limit produces a Jacobi field vanishing at both
//! `γ(t1)` and `γ(t1 + T)` — a conjugate pair.

use crate::flow::{GeodesicClass, GeodesicPath, GeodesicSpec};
use crate::geometry::TangentVec;
use crate::{Error, Result};

/// A geodesic and its partner at the pairing time `t1`.
#[derive(Debug, Clone)]
pub struct PartnerPair {
    pub original: GeodesicSpec,
    /// Spec whose time `0` is the state of the pair at `t1`.
    pub partner: GeodesicSpec,
    pub t1: f64,
}

/// Constructs the partner of `spec` at `t1` from initial data: same
/// point, vertically flipped velocity. Requires a generic geodesic.
pub fn partner_at(spec: &GeodesicSpec, t1: f64, tol: f64) -> Result<PartnerPair> {
    if spec.class != GeodesicClass::Generic {
        return Err(Error::WrongClass { class: spec.class });
    }
    let path = GeodesicPath::build(spec, t1.min(0.0), t1.max(0.0), tol)?;
    let v = path.velocity(t1);
    let partner = GeodesicSpec::from_initial(v.vertical_flip())?;
    Ok(PartnerPair { original: *spec, partner, t1 })
}

/// The one-period displacement `γ(t0 + T) - γ(t0) = sgn(ab) M(k) (b, a, 0)`,
/// independent of `t0`. The z-component vanishes.
pub fn period_displacement(spec: &GeodesicSpec) -> Result<[f64; 3]> {
    if spec.class != GeodesicClass::Generic {
        return Err(Error::WrongClass { class: spec.class });
    }
    let inv = crate::invariants::invariant_set(spec.k)?;
    let (a, b) = (spec.constants.a, spec.constants.b);
    let sgn = (a * b).signum();
    Ok([sgn * inv.axis_drift * b, sgn * inv.axis_drift * a, 0.0])
}

/// Outcome of running a geodesic and its partner over one period.
#[derive(Debug, Clone, Copy)]
pub struct RendezvousReport {
    /// Coordinate distance between the two endpoints at `t1 + T`.
    pub meet_error: f64,
    /// Whether the two arcs are distinct curves (initial velocities differ).
    pub distinct: bool,
}

/// Integrates `spec` and its partner from `t1` to `t1 + T(k)` and
/// measures how closely they meet again.
pub fn rendezvous_check(spec: &GeodesicSpec, t1: f64, tol: f64) -> Result<RendezvousReport> {
    let pair = partner_at(spec, t1, tol)?;
    let period = spec.period().expect("generic geodesic has a period");

    let orig_path = GeodesicPath::build(spec, t1.min(0.0), t1 + period, tol)?;
    let partner_path = GeodesicPath::build(&pair.partner, 0.0, period, tol)?;

    let end_orig = orig_path.point(t1 + period);
    let end_partner = partner_path.point(period);
    let v1 = orig_path.velocity(t1);
    let v2 = pair.partner.initial;
    let distinct = (v1.dz - v2.dz).abs() > 1e-12;
    Ok(RendezvousReport { meet_error: end_orig.coord_dist(&end_partner), distinct })
}

/// Finite-difference Jacobi defects at a critical pairing time.
#[derive(Debug, Clone, Copy)]
pub struct JacobiDefects {
    /// `|J(t1)|` of the finite-difference field (metric norm).
    pub at_start: f64,
    /// `|J(t1 + T)|`.
    pub at_period: f64,
    /// `max_t |J(t)|` over a grid of `[t1, t1 + T]`.
    pub field_max: f64,
}

/// Builds the one-parameter family of partner geodesics
///
/// ```text
/// ψ(t, s) = (2x(t1+s) - x(2(t1+s) - t),  2y(t1+s) - y(2(t1+s) - t),  z(2(t1+s) - t))
/// ```
///
/// whose `s`-derivative at `s = 0` is a Jacobi field along γ vanishing at
/// `t1` and `t1 + T` when `t1` is critical. The field is approximated by
/// central differences in `s` with step `ds`; both endpoint defects
/// shrink as `O(ds^2)` relative to the field maximum.
pub fn jacobi_endpoint_defect(spec: &GeodesicSpec, t1: f64, ds: f64) -> Result<JacobiDefects> {
    if spec.class != GeodesicClass::Generic {
        return Err(Error::WrongClass { class: spec.class });
    }
    if !(1e-6..=1e-3).contains(&ds) {
        return Err(Error::Domain(format!("ds = {ds} outside [1e-6, 1e-3]")));
    }
    let tol = 1e-12;
    let probe = GeodesicPath::build(spec, t1.min(0.0), t1.max(0.0), tol)?;
    let zdot1 = probe.state(t1).zdot;
    if zdot1.abs() > 1e-10 {
        return Err(Error::NotCritical { t1, zdot: zdot1 });
    }
    let period = spec.period().expect("generic");

    // ψ(t, ±ds) for t in [t1, t1+T] samples γ on [t1 - T - 2ds, t1 + 2ds].
    let lo = (t1 - period - 2.0 * ds).min(0.0);
    let hi = (t1 + 2.0 * ds).max(0.0);
    let path = GeodesicPath::build(spec, lo, hi, tol)?;

    let psi = |t: f64, s: f64| -> [f64; 3] {
        let at_shift = path.state(t1 + s);
        let reflected = path.state(2.0 * (t1 + s) - t);
        [
            2.0 * at_shift.x - reflected.x,
            2.0 * at_shift.y - reflected.y,
            reflected.z,
        ]
    };
    let field = |t: f64| -> TangentVec {
        let plus = psi(t, ds);
        let minus = psi(t, -ds);
        let base = path.point(2.0 * t1 - t); // ψ(t, 0) = γ(t) by reflection symmetry
        TangentVec::new(
            base,
            (plus[0] - minus[0]) / (2.0 * ds),
            (plus[1] - minus[1]) / (2.0 * ds),
            (plus[2] - minus[2]) / (2.0 * ds),
        )
    };

    let at_start = field(t1).norm();
    let at_period = field(t1 + period).norm();
    let mut field_max = 0.0f64;
    let n = 128;
    for i in 0..=n {
        let t = t1 + period * i as f64 / n as f64;
        field_max = field_max.max(field(t).norm());
    }
    Ok(JacobiDefects { at_start, at_period, field_max })
}
