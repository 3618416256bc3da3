//! Geodesic flow in SOL: classification, closed forms, adaptive
//! integration, Grayson cylinders, and the framing fields ξ, η.
//!
//! A unit-speed geodesic `γ(t) = (x, y, z)` satisfies
//!
//! ```text
//! ẋ = a e^{2z},   ẏ = b e^{-2z},   z̈ = -a^2 e^{2z} + b^2 e^{-2z},
//! ```
//!
//! with first integrals `a = e^{-2z} ẋ`, `b = e^{2z} ẏ` and
//! `c = a x - b y + ż`. The z-equation is the pendulum-like oscillator
//! `z̈ = -U'_{a,b}(z)` with `U_{a,b}(z) = (a^2 e^{2z} + b^2 e^{-2z})/2`,
//! and unit speed pins `2U + ż^2 = 1` along the flow.
//!
//! The integrator state is `(x, y, z, ż)`; `ẋ` and `ẏ` are reconstructed
//! from the constants, so the principal first integrals hold exactly and
//! only the z-oscillator accumulates error. Degenerate classes (vertical,
//! horizontal, hyperbolic) bypass the integrator and use closed forms.

use serde::Serialize;

use crate::geometry::{average_height, potential, Point, TangentVec};
use crate::invariants::{amplitude, invariant_set, modulus_from_ab};
use crate::ode::{integrate_dense, DenseOutput};
use crate::rootfind::brent;
use crate::{Error, Result};

/// Unit-speed tolerance accepted by spec constructors.
pub const UNIT_SPEED_TOL: f64 = 1e-10;

/// `2|ab|` within this distance of 1 classifies as horizontal.
const HORIZONTAL_TIE: f64 = 1e-12;

/// Integration tolerances accepted by [`integrate`].
pub const TOL_RANGE: (f64, f64) = (1e-13, 1e-6);

/// Classification of a geodesic by its constants of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicClass {
    /// `a = b = 0`: a vertical line.
    Vertical,
    /// `2|ab| = 1`, `k = 0`: a horizontal line bisecting the axes.
    Horizontal,
    /// Exactly one of `a`, `b` vanishes: lies in a vertical hyperbolic plane.
    Hyperbolic,
    /// `0 < 2|ab| < 1`, `0 < k < 1`.
    Generic,
}

impl std::fmt::Display for GeodesicClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GeodesicClass::Vertical => "vertical",
            GeodesicClass::Horizontal => "horizontal",
            GeodesicClass::Hyperbolic => "hyperbolic",
            GeodesicClass::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// The first integrals `(a, b, c)` of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MotionConstants {
    /// Extracts the constants from initial data:
    /// `a = e^{-2z} dx`, `b = e^{2z} dy`, `c = a x - b y + dz`.
    pub fn from_initial(v: &TangentVec) -> MotionConstants {
        let z = v.base.z;
        let a = (-2.0 * z).exp() * v.dx;
        let b = (2.0 * z).exp() * v.dy;
        MotionConstants { a, b, c: a * v.base.x - b * v.base.y + v.dz }
    }
}

/// Classifies by the principal constants, applying the horizontal
/// tie-break, and returns `(class, k)`.
pub fn classify(a: f64, b: f64) -> Result<(GeodesicClass, f64)> {
    if a == 0.0 && b == 0.0 {
        return Ok((GeodesicClass::Vertical, 1.0));
    }
    if a == 0.0 || b == 0.0 {
        return Ok((GeodesicClass::Hyperbolic, 1.0));
    }
    let two_ab = 2.0 * (a * b).abs();
    if two_ab >= 1.0 - HORIZONTAL_TIE {
        if two_ab > 1.0 + 1e-9 {
            return Err(Error::Admissibility { two_ab });
        }
        return Ok((GeodesicClass::Horizontal, 0.0));
    }
    Ok((GeodesicClass::Generic, modulus_from_ab(a, b)?))
}

/// A fully determined unit-speed geodesic: classification tag, constants,
/// modulus, average height, and the initial state at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSpec {
    pub constants: MotionConstants,
    pub class: GeodesicClass,
    pub k: f64,
    /// Average height `h = log|b/a| / 2`; `None` when `ab = 0`.
    pub h: Option<f64>,
    /// State at `t = 0`; the base point is the initial point.
    pub initial: TangentVec,
}

impl GeodesicSpec {
    /// Builds a spec from a point and a unit tangent vector (the base
    /// point of `v`). Callers must normalize; a non-unit `v` is an error.
    pub fn from_initial(v: TangentVec) -> Result<GeodesicSpec> {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_SPEED_TOL {
            return Err(Error::NonUnitSpeed { norm });
        }
        let constants = MotionConstants::from_initial(&v);
        let (class, k) = classify(constants.a, constants.b)?;
        Ok(GeodesicSpec {
            constants,
            class,
            k,
            h: average_height(constants.a, constants.b),
            initial: v,
        })
    }

    /// Builds the geodesic with modulus `k` and average height `h` on the
    /// cylinder with parameter `c`, starting at a critical point
    /// (`z = h + A(k)`, `ż = 0`) on the critical line `ax - by = c`.
    /// `k = 0` yields the horizontal line at height `h`.
    pub fn from_modulus(k: f64, h: f64, c: f64, sign_a: f64, sign_b: f64) -> Result<GeodesicSpec> {
        let dict = crate::invariants::ab_from_kh(k, h)?;
        let a = sign_a.signum() * dict.abs_a;
        let b = sign_b.signum() * dict.abs_b;
        let denom = a * a + b * b;
        let x0 = c * a / denom + 0.0; // + 0.0 normalizes -0
        let y0 = -c * b / denom + 0.0;
        let z0 = if k == 0.0 { h } else { h + amplitude(k)? };
        let base = Point::new(x0, y0, z0);
        let v = TangentVec::new(base, a * (2.0 * z0).exp(), b * (-2.0 * z0).exp(), 0.0);
        GeodesicSpec::from_initial(v)
    }

    /// Oscillation period `T(k)`; only generic geodesics are periodic.
    pub fn period(&self) -> Option<f64> {
        match self.class {
            GeodesicClass::Generic => invariant_set(self.k).ok().map(|i| i.period),
            _ => None,
        }
    }
}

/// Kinematic state of the flow at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub zdot: f64,
}

impl FlowState {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y, self.z)
    }

    /// Velocity with `ẋ, ẏ` reconstructed from the constants.
    pub fn velocity(&self, constants: &MotionConstants) -> TangentVec {
        TangentVec::new(
            self.point(),
            constants.a * (2.0 * self.z).exp(),
            constants.b * (-2.0 * self.z).exp(),
            self.zdot,
        )
    }
}

/// Hyperbolic geodesics run in a vertical totally geodesic plane; the
/// closed form is a semicircle in horocyclic coordinates.
#[derive(Debug, Clone, Copy)]
enum HyperbolicArc {
    /// `b = 0`: motion in `{y = const}` with `z = -log(|a| cosh(t - t_apex))`.
    AlongX { a: f64, y_const: f64, x_apex: f64, t_apex: f64 },
    /// `a = 0`: motion in `{x = const}` with `z = log(|b| cosh(t - t_apex))`.
    AlongY { b: f64, x_const: f64, y_apex: f64, t_apex: f64 },
}

impl HyperbolicArc {
    fn state(&self, t: f64) -> FlowState {
        match *self {
            HyperbolicArc::AlongX { a, y_const, x_apex, t_apex } => {
                let tau = t - t_apex;
                FlowState {
                    t,
                    x: x_apex + tau.tanh() / a,
                    y: y_const,
                    z: -(a.abs() * tau.cosh()).ln(),
                    zdot: -tau.tanh(),
                }
            }
            HyperbolicArc::AlongY { b, x_const, y_apex, t_apex } => {
                let tau = t - t_apex;
                FlowState {
                    t,
                    x: x_const,
                    y: y_apex + tau.tanh() / b,
                    z: (b.abs() * tau.cosh()).ln(),
                    zdot: tau.tanh(),
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum PathRepr {
    Vertical { sign: f64 },
    Horizontal { xdot: f64, ydot: f64 },
    Hyperbolic(HyperbolicArc),
    Dense { forward: Option<DenseOutput<4>>, backward: Option<DenseOutput<4>> },
}

/// A geodesic realized over a time span, with dense evaluation at any
/// time inside it. Generic geodesics are integrated adaptively; the
/// special classes evaluate their closed forms.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub spec: GeodesicSpec,
    repr: PathRepr,
    t_min: f64,
    t_max: f64,
}

impl GeodesicPath {
    /// Realizes `spec` over `[t_min, t_max]` (which need not contain 0;
    /// integration always starts from the initial state at `t = 0`).
    pub fn build(spec: &GeodesicSpec, t_min: f64, t_max: f64, tol: f64) -> Result<GeodesicPath> {
        if !(t_min <= t_max) {
            return Err(Error::Domain(format!("empty time span [{t_min}, {t_max}]")));
        }
        if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
            return Err(Error::Domain(format!(
                "tolerance {tol} outside [{}, {}]",
                TOL_RANGE.0, TOL_RANGE.1
            )));
        }
        let v = spec.initial;
        let (a, b) = (spec.constants.a, spec.constants.b);
        let repr = match spec.class {
            GeodesicClass::Vertical => PathRepr::Vertical { sign: v.dz.signum() },
            GeodesicClass::Horizontal => PathRepr::Horizontal { xdot: v.dx, ydot: v.dy },
            GeodesicClass::Hyperbolic => {
                let dz0 = v.dz.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                if b == 0.0 {
                    let t_apex = dz0.atanh();
                    PathRepr::Hyperbolic(HyperbolicArc::AlongX {
                        a,
                        y_const: v.base.y,
                        x_apex: v.base.x + dz0 / a,
                        t_apex,
                    })
                } else {
                    let t_apex = -dz0.atanh();
                    PathRepr::Hyperbolic(HyperbolicArc::AlongY {
                        b,
                        x_const: v.base.x,
                        y_apex: v.base.y - dz0 / b,
                        t_apex,
                    })
                }
            }
            GeodesicClass::Generic => {
                let rhs = move |_t: f64, s: &[f64; 4]| {
                    let e2z = (2.0 * s[2]).exp();
                    [a * e2z, b / e2z, s[3], -a * a * e2z + b * b / e2z]
                };
                let y0 = [v.base.x, v.base.y, v.base.z, v.dz];
                let forward = if t_max > 0.0 {
                    Some(integrate_dense(&rhs, 0.0, t_max, y0, tol, tol, 4_000_000)?)
                } else {
                    None
                };
                let backward = if t_min < 0.0 {
                    Some(integrate_dense(&rhs, 0.0, t_min, y0, tol, tol, 4_000_000)?)
                } else {
                    None
                };
                PathRepr::Dense { forward, backward }
            }
        };
        Ok(GeodesicPath { spec: *spec, repr, t_min: t_min.min(0.0), t_max: t_max.max(0.0) })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Kinematic state at time `t ∈ [t_min, t_max]`.
    pub fn state(&self, t: f64) -> FlowState {
        let v = self.spec.initial;
        match &self.repr {
            PathRepr::Vertical { sign } => FlowState {
                t,
                x: v.base.x,
                y: v.base.y,
                z: v.base.z + sign * t,
                zdot: *sign,
            },
            PathRepr::Horizontal { xdot, ydot } => FlowState {
                t,
                x: v.base.x + xdot * t,
                y: v.base.y + ydot * t,
                z: v.base.z,
                zdot: 0.0,
            },
            PathRepr::Hyperbolic(arc) => arc.state(t),
            PathRepr::Dense { forward, backward } => {
                if t == 0.0 {
                    return FlowState { t, x: v.base.x, y: v.base.y, z: v.base.z, zdot: v.dz };
                }
                let out = if t > 0.0 { forward } else { backward };
                let s = out
                    .as_ref()
                    .expect("time outside the built span")
                    .eval(t);
                FlowState { t, x: s[0], y: s[1], z: s[2], zdot: s[3] }
            }
        }
    }

    pub fn point(&self, t: f64) -> Point {
        self.state(t).point()
    }

    pub fn velocity(&self, t: f64) -> TangentVec {
        self.state(t).velocity(&self.spec.constants)
    }

    /// Accepted-step times inside `[lo, hi]` for adaptive sampling;
    /// closed-form classes fall back to a uniform grid.
    fn natural_times(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut ts = vec![lo];
        if let PathRepr::Dense { forward, backward } = &self.repr {
            let mut interior: Vec<f64> = Vec::new();
            if let Some(bwd) = backward {
                interior.extend(bwd.step_times());
            }
            if let Some(fwd) = forward {
                interior.extend(fwd.step_times());
            }
            interior.retain(|&t| t > lo && t < hi);
            interior.sort_by(|p, q| p.partial_cmp(q).unwrap());
            interior.dedup();
            ts.extend(interior);
        } else {
            let n = 32;
            for i in 1..n {
                ts.push(lo + (hi - lo) * i as f64 / n as f64);
            }
        }
        if hi > lo {
            ts.push(hi);
        }
        ts
    }
}

/// Per-sample diagnostics attached to exported trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub zdot: f64,
    /// `2U_{a,b}(z) + ż^2 - 1`; zero for exact unit-speed motion.
    pub res_speed: f64,
    /// `(ax - by - c)^2 + 2U_{a,b}(z) - 1`; zero on the Grayson cylinder.
    pub res_grayson: f64,
    /// Drifts of the first integrals. `a` and `b` enter the integration
    /// as exact inputs, so their drifts vanish identically; `c` is
    /// reconstructed from the state and measures real integration error.
    #[serde(skip)]
    pub drift_a: f64,
    #[serde(skip)]
    pub drift_b: f64,
    #[serde(skip)]
    pub drift_c: f64,
}

/// Metadata identifying the geodesic a trajectory samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub h: Option<f64>,
    pub class: GeodesicClass,
    pub tol: f64,
}

/// Time-ordered samples of one geodesic with residual diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub meta: TrajectoryMeta,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Largest diagnostic magnitude over all samples.
    pub fn worst_residual(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |w, s| {
            w.max(s.res_speed.abs()).max(s.res_grayson.abs()).max(s.drift_c.abs())
        })
    }
}

fn sample_state(spec: &GeodesicSpec, s: &FlowState) -> TrajectorySample {
    let (a, b, c) = (spec.constants.a, spec.constants.b, spec.constants.c);
    let two_u = 2.0 * potential(a, b, s.z);
    let axby = a * s.x - b * s.y;
    TrajectorySample {
        t: s.t,
        x: s.x,
        y: s.y,
        z: s.z,
        zdot: s.zdot,
        res_speed: two_u + s.zdot * s.zdot - 1.0,
        res_grayson: (axby - c) * (axby - c) + two_u - 1.0,
        drift_a: 0.0,
        drift_b: 0.0,
        drift_c: axby + s.zdot - c,
    }
}

/// Samples a built path at the given times, attaching diagnostics.
pub fn sample_path(path: &GeodesicPath, times: &[f64], tol: f64) -> Trajectory {
    let spec = &path.spec;
    let samples = times.iter().map(|&t| sample_state(spec, &path.state(t))).collect();
    Trajectory {
        meta: TrajectoryMeta {
            a: spec.constants.a,
            b: spec.constants.b,
            c: spec.constants.c,
            k: spec.k,
            h: spec.h,
            class: spec.class,
            tol,
        },
        samples,
    }
}

/// Integrates the flow over `[t0, t1]` and checks that every sample keeps
/// the unit-speed and Grayson identities and the `c` drift within
/// `10 * tol`. A budget violation is an integration failure carrying the
/// worst residual.
pub fn integrate(spec: &GeodesicSpec, t0: f64, t1: f64, tol: f64) -> Result<Trajectory> {
    let path = GeodesicPath::build(spec, t0.min(t1), t0.max(t1), tol)?;
    let times = path.natural_times(t0.min(t1), t0.max(t1));
    let traj = sample_path(&path, &times, tol);
    let worst = traj.worst_residual();
    if worst > 10.0 * tol {
        return Err(Error::IntegrationFailure { worst_residual: worst });
    }
    Ok(traj)
}

/// The hyperbolic geodesic through apex `(x0, 0, -log a)` in the plane
/// `{y = 0}`: `x(t) = x0 + tanh(t)/a`, `z(t) = -log(a cosh t)`, unit
/// speed identically. Requires `a > 0`; reach the other sign and axis
/// cases through isometries.
pub fn hyperbolic_closed_form(a: f64, x0: f64, t: f64) -> Result<(Point, TangentVec)> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("hyperbolic closed form requires a > 0, got {a}")));
    }
    let z = -(a * t.cosh()).ln();
    let p = Point::new(x0 + t.tanh() / a, 0.0, z);
    let v = TangentVec::new(p, a * (2.0 * z).exp(), 0.0, -t.tanh());
    Ok((p, v))
}

/// The invariant surface `(ax - by - c)^2 + 2U_{a,b}(z) = 1` that guides
/// a generic geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraysonCylinder {
    pub constants: MotionConstants,
    pub k: f64,
    pub h: f64,
}

impl GraysonCylinder {
    /// Requires `0 < 2|ab| < 1` (a generic cylinder).
    pub fn new(a: f64, b: f64, c: f64) -> Result<GraysonCylinder> {
        let two_ab = 2.0 * (a * b).abs();
        if two_ab == 0.0 || two_ab >= 1.0 {
            return Err(Error::Domain(format!(
                "Grayson cylinder requires 0 < 2|ab| < 1, got {two_ab}"
            )));
        }
        Ok(GraysonCylinder {
            constants: MotionConstants { a, b, c },
            k: modulus_from_ab(a, b)?,
            h: average_height(a, b).expect("ab != 0"),
        })
    }

    pub fn from_spec(spec: &GeodesicSpec) -> Result<GraysonCylinder> {
        if spec.class != GeodesicClass::Generic {
            return Err(Error::WrongClass { class: spec.class });
        }
        GraysonCylinder::new(spec.constants.a, spec.constants.b, spec.constants.c)
    }

    /// Half-height `A(k)` of the cylinder.
    pub fn amplitude(&self) -> f64 {
        self.k.atanh()
    }
}

/// Defect of the defining equation at `p`: zero iff `p` lies on the
/// cylinder.
pub fn grayson_residual(cyl: &GraysonCylinder, p: &Point) -> f64 {
    let MotionConstants { a, b, c } = cyl.constants;
    let axby = a * p.x - b * p.y;
    (axby - c) * (axby - c) + 2.0 * potential(a, b, p.z) - 1.0
}

/// The framing fields at a point of the cylinder:
/// `ξ = a e^{2z} ∂x + b e^{-2z} ∂y + (c - ax + by) ∂z` (unit, tangent to
/// the geodesic foliation) and `η = b ∂x + a ∂y` (along the horizontal
/// rulings), together with the cosine of their angle
/// `cos θ = 2ab / sqrt(1 - (ax - by - c)^2)`.
pub fn frame_fields(cyl: &GraysonCylinder, p: &Point) -> Result<(TangentVec, TangentVec, f64)> {
    let residual = grayson_residual(cyl, p);
    if residual.abs() > 1e-8 {
        return Err(Error::OffCylinder { residual });
    }
    let MotionConstants { a, b, c } = cyl.constants;
    let xi = TangentVec::new(
        *p,
        a * (2.0 * p.z).exp(),
        b * (-2.0 * p.z).exp(),
        c - a * p.x + b * p.y,
    );
    let eta = TangentVec::new(*p, b, a, 0.0);
    let axby_c = a * p.x - b * p.y - c;
    let cos_theta = 2.0 * a * b / (1.0 - axby_c * axby_c).sqrt();
    Ok((xi, eta, cos_theta))
}

/// The Grayson cylinders with principal parameters `(a, b)` through `p`:
/// two when `|z - h| < A(k)`, one (coalesced) when `|z - h| = A(k)`, none
/// when `p` is outside the height band. Requires `0 < 2|ab| < 1`.
pub fn cylinders_through(a: f64, b: f64, p: &Point) -> Result<Vec<GraysonCylinder>> {
    let two_ab = 2.0 * (a * b).abs();
    if two_ab == 0.0 || two_ab >= 1.0 {
        return Err(Error::Domain(format!(
            "cylinders_through requires 0 < 2|ab| < 1, got {two_ab}"
        )));
    }
    let disc = 1.0 - 2.0 * potential(a, b, p.z);
    let axby = a * p.x - b * p.y;
    if disc < -1e-12 {
        return Ok(Vec::new());
    }
    if disc.abs() <= 1e-12 {
        return Ok(vec![GraysonCylinder::new(a, b, axby)?]);
    }
    let r = disc.sqrt();
    Ok(vec![
        GraysonCylinder::new(a, b, axby + r)?,
        GraysonCylinder::new(a, b, axby - r)?,
    ])
}

/// Normal form of a generic geodesic: isometries and a time shift carry
/// it to the model geodesic of its modulus, starting at
/// `(0, 0, A(k))` with velocity `(a e^{2A}, a e^{-2A}, 0)`, `a = b > 0`.
/// Two generic geodesics are geometrically equivalent iff their normal
/// forms agree, i.e. iff they share the modulus.
pub fn normal_form(spec: &GeodesicSpec, tol: f64) -> Result<GeodesicSpec> {
    use crate::geometry::Isometry;

    if spec.class != GeodesicClass::Generic {
        return Err(Error::WrongClass { class: spec.class });
    }
    let h = spec.h.expect("generic geodesic has a height");

    // (i) vertical lift to equatorial plane z = 0; (ii) reflections to
    // a, b > 0. The lift multiplies (a, b) by (e^h, e^-h).
    let lifted = Isometry::vertical_lift(-h).apply_tangent(spec.initial);
    let cl = MotionConstants::from_initial(&lifted);
    let oriented = Isometry::sign_change(cl.a < 0.0, cl.b < 0.0).apply_tangent(lifted);
    let co = MotionConstants::from_initial(&oriented);

    // (iii) horizontal translation moving the cylinder axis through the
    // origin, i.e. c -> 0.
    let denom = co.a * co.a + co.b * co.b;
    let trans = Isometry::horizontal_translation(-co.c * co.a / denom, co.c * co.b / denom);
    let centered = trans.apply_tangent(oriented);

    // (iv) shift time to the first critical point at the top of the band.
    let normalized = GeodesicSpec::from_initial(centered)?;
    let period = normalized.period().expect("generic");
    let path = GeodesicPath::build(&normalized, 0.0, 1.25 * period, tol)?;
    let t_crit = first_top_critical_time(&path, period)?;
    let at_crit = path.velocity(t_crit);

    // (v) slide along the axis so the critical point is (0, 0, A(k)).
    let slide = Isometry::horizontal_translation(-at_crit.base.x, -at_crit.base.y);
    GeodesicSpec::from_initial(slide.apply_tangent(at_crit))
}

/// First `t >= 0` with `ż = 0` and `z` at the top of the oscillation.
fn first_top_critical_time(path: &GeodesicPath, period: f64) -> Result<f64> {
    let h = path.spec.h.expect("generic");
    let n = 256;
    let mut prev = path.state(0.0);
    if prev.zdot.abs() < 1e-14 && prev.z > h {
        return Ok(0.0);
    }
    for i in 1..=n {
        let t = 1.1 * period * i as f64 / n as f64;
        let s = path.state(t);
        if prev.zdot == 0.0 || (prev.zdot > 0.0) != (s.zdot > 0.0) {
            let root = brent(&|u| path.state(u).zdot, prev.t, s.t, 1e-14)
                .ok_or_else(|| Error::SearchFailure("critical-time bracket lost".into()))?;
            if path.state(root).z > h {
                return Ok(root);
            }
        }
        prev = s;
    }
    Err(Error::SearchFailure("no top critical point within one period".into()))
}
