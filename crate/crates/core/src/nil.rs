//! Closed-form geodesics of the Heisenberg (NIL) geometry.
//!
//! NIL is `R^3` with the left-invariant metric
//! `ds^2 = dx^2 + dy^2 + (dz - x dy)^2`. The Lagrangian yields two
//! constants of motion `c = ż - x ẏ` and `b = (1 + x^2) ẏ - x ż`, and
//! the system closes as
//!
//! ```text
//! ẏ = b + c x,   ż = c + b x + c x^2,   ẍ = -c^2 x - b c,
//! ```
//!
//! with `ẋ^2 + ẏ^2 + c^2 = 1` along unit-speed geodesics. For `c ≠ 0`
//! the solutions are helices winding around vertical cylinders of radius
//! `A = sqrt(1 - c^2) / |c|`; for `c = 0` they are parabolas in vertical
//! planes (lines when `ab = 0`).

use crate::geometry::Point;
use crate::{Error, Result};

/// `|c|` below this is treated as the degenerate parabolic branch; the
/// helix radius `sqrt(1-c^2)/|c|` is no longer representable usefully.
const C_DEGENERATE: f64 = 1e-12;

/// A NIL geodesic in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NilGeodesic {
    /// `c ≠ 0`: `x = x0 + A cos(ct - φ)`, `y = y0 + A sin(ct - φ)`,
    /// `z = z0 + (c + cA²/2) t + (A²/4) sin(2(ct - φ)) - (bA/c) sin(ct - φ)`,
    /// with `x0 = -b/c`. The degenerate `A = 0` vertical fiber uses
    /// `φ = 0` by convention.
    Helix { b: f64, c: f64, amplitude: f64, phase: f64, base: Point },
    /// `c = 0`: `x = a t + x0`, `y = b t + y0`,
    /// `z = (ab/2) t² + b x0 t + z0`, with `a = ẋ` constant and
    /// `a² + b² = 1`; a straight line when `ab = 0`.
    Parabola { a: f64, b: f64, base: Point },
}

/// Squared NIL metric norm of `(dx, dy, dz)` at `p`.
pub fn nil_speed_sq(p: &Point, dx: f64, dy: f64, dz: f64) -> f64 {
    let vertical = dz - p.x * dy;
    dx * dx + dy * dy + vertical * vertical
}

/// Extracts the constants of motion from unit-speed initial data and
/// solves for the closed-form parameters.
pub fn nil_from_initial(p: &Point, dx: f64, dy: f64, dz: f64) -> Result<NilGeodesic> {
    let norm = nil_speed_sq(p, dx, dy, dz).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitSpeed { norm });
    }
    let c = dz - p.x * dy;
    let b = (1.0 + p.x * p.x) * dy - p.x * dz;
    if c.abs() <= C_DEGENERATE {
        return Ok(NilGeodesic::Parabola { a: dx, b, base: *p });
    }
    // A cos φ = x(0) + b/c = ẏ(0)/c and A sin φ = ẋ(0)/c recover the
    // phase; A agrees with sqrt(1 - c^2)/|c| by the unit-speed relation.
    let cos_part = p.x + b / c;
    let sin_part = dx / c;
    let amplitude = cos_part.hypot(sin_part);
    let phase = if amplitude == 0.0 { 0.0 } else { sin_part.atan2(cos_part) };
    let y0 = p.y + amplitude * phase.sin();
    let z0 = p.z + (amplitude * amplitude / 4.0) * (2.0 * phase).sin()
        - (b * amplitude / c) * phase.sin();
    Ok(NilGeodesic::Helix {
        b,
        c,
        amplitude,
        phase,
        base: Point::new(-b / c, y0, z0),
    })
}

/// Evaluates the closed form at time `t`, returning the point and the
/// velocity `(ẋ, ẏ, ż)`.
pub fn nil_eval(g: &NilGeodesic, t: f64) -> (Point, [f64; 3]) {
    match *g {
        NilGeodesic::Helix { b, c, amplitude: amp, phase, base } => {
            let w = c * t - phase;
            let x = base.x + amp * w.cos();
            let y = base.y + amp * w.sin();
            let z = base.z
                + (c + c * amp * amp / 2.0) * t
                + (amp * amp / 4.0) * (2.0 * w).sin()
                - (b * amp / c) * w.sin();
            let xdot = -amp * c * w.sin();
            let ydot = b + c * x;
            let zdot = c + b * x + c * x * x;
            (Point::new(x, y, z), [xdot, ydot, zdot])
        }
        NilGeodesic::Parabola { a, b, base } => {
            let x = a * t + base.x;
            let y = b * t + base.y;
            let z = (a * b / 2.0) * t * t + b * base.x * t + base.z;
            (Point::new(x, y, z), [a, b, b * x])
        }
    }
}

impl NilGeodesic {
    /// The constant `b`.
    pub fn b(&self) -> f64 {
        match *self {
            NilGeodesic::Helix { b, .. } => b,
            NilGeodesic::Parabola { b, .. } => b,
        }
    }

    /// The constant `c` (zero on the parabolic branch).
    pub fn c(&self) -> f64 {
        match *self {
            NilGeodesic::Helix { c, .. } => c,
            NilGeodesic::Parabola { .. } => 0.0,
        }
    }
}
