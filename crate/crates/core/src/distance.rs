//! Distances in SOL: exact special cases, cut lengths, multi-start
//! geodesic shooting, and the logarithmic ground-plane asymptotics.
//!
//! The cut length caps the search: a generic segment is minimizing iff
//! its length does not exceed the period `T(k)` of its modulus, the
//! horizontal cut length is `sqrt(2) π` (the global injectivity radius),
//! and vertical/hyperbolic geodesics minimize forever inside their
//! totally geodesic planes. The two-point solver reduces `p` to the
//! origin by a left translation, shoots over unit initial directions
//! `(a, b, c)` with the arc time capped at the candidate's cut length,
//! and polishes with damped Gauss-Newton on the endpoint miss.

use std::f64::consts::PI;

use crate::flow::{GeodesicClass, GeodesicPath, GeodesicSpec};
use crate::geometry::{Isometry, Point, TangentVec};
use crate::invariants::{invariant_set_mc, invert_horizontal_drift_mc, two_ab_from_mc};
use crate::rootfind::{brent, golden_min};
use crate::{Error, Result};

const SQRT2_PI: f64 = std::f64::consts::SQRT_2 * PI;

/// How a distance value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMethod {
    /// Both points on one vertical line.
    Vertical,
    /// Both points in one vertical totally geodesic plane.
    HyperbolicClosedForm,
    /// General two-point problem solved by shooting.
    Shooting,
}

/// A distance value together with the minimizing segment that realizes it.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    /// Arclength of the minimizing segment.
    pub value: f64,
    /// Geodesic whose restriction to `[0, witness_time]` is the witness.
    pub witness: GeodesicSpec,
    pub witness_time: f64,
    pub method: DistanceMethod,
    /// Coordinate endpoint miss of the witness: zero for closed forms,
    /// and at most `tol * max(1, |coords of translated target|)` for
    /// shooting results.
    pub residual: f64,
}

/// Cut length by class: `∞` for vertical and hyperbolic geodesics,
/// `T(k)` for generic ones, `sqrt(2) π` for horizontal ones. `k` is
/// required exactly when the class is generic.
pub fn cut_length(class: GeodesicClass, k: Option<f64>) -> Result<f64> {
    match class {
        GeodesicClass::Vertical | GeodesicClass::Hyperbolic => Ok(f64::INFINITY),
        GeodesicClass::Horizontal => Ok(SQRT2_PI),
        GeodesicClass::Generic => {
            let k = k.ok_or_else(|| {
                Error::Domain("cut length of a generic geodesic requires its modulus".into())
            })?;
            Ok(crate::invariants::invariant_set(k)?.period)
        }
    }
}

/// The staircase construction: an explicit path from the origin to
/// `(p, p, 0)` of length `4 log(p/2) + 4`, against the direct diagonal
/// chord of length `sqrt(2) p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaircaseBound {
    pub bound: f64,
    pub chord: f64,
}

/// Upper bound `4 log(p/2) + 4` for `d(O, (p, p, 0))`, valid for
/// `p >= 2` (the optimal landing height `log(p/2)` must be nonnegative).
pub fn staircase_bound(p: f64) -> Result<StaircaseBound> {
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("staircase bound requires p >= 2, got {p}")));
    }
    Ok(StaircaseBound {
        bound: 4.0 * (p / 2.0).ln() + 4.0,
        chord: std::f64::consts::SQRT_2 * p,
    })
}

/// Hyperbolic-plane distance in horocyclic coordinates `(u, v = e^z)`:
/// `arccosh(1 + ((Δu)^2 + (Δv)^2) / (2 v1 v2))`.
fn h2_distance(u1: f64, v1: f64, u2: f64, v2: f64) -> f64 {
    let du = u2 - u1;
    let dv = v2 - v1;
    (1.0 + (du * du + dv * dv) / (2.0 * v1 * v2)).acosh()
}

/// Witness geodesic inside `{y = y0}` from `p` to `q` (which must share
/// `y` and differ in `x`): the H² semicircle through both points.
fn hyperbolic_witness(p: &Point, q: &Point) -> Result<(GeodesicSpec, f64)> {
    let (u1, v1) = (p.x, p.z.exp());
    let (u2, v2) = (q.x, q.z.exp());
    let u0 = (u1 * u1 + v1 * v1 - u2 * u2 - v2 * v2) / (2.0 * (u1 - u2));
    let r = ((u1 - u0) * (u1 - u0) + v1 * v1).sqrt();
    let a = 1.0 / r;
    let tau1 = ((u1 - u0) / r).atanh();
    let tau2 = ((u2 - u0) / r).atanh();
    let sigma = (tau2 - tau1).signum();
    // unit-speed parametrization: x = u0 + tanh(τ)/a, z = -log(a cosh τ)
    let sech1 = 1.0 / tau1.cosh();
    let v = TangentVec::new(
        *p,
        sigma * sech1 * sech1 / a,
        0.0,
        -sigma * tau1.tanh(),
    );
    Ok((GeodesicSpec::from_initial(v.normalized())?, (tau2 - tau1).abs()))
}

/// Exact distance when the pair admits one: same vertical line
/// (`|Δz|`), or one shared coordinate plane `{y = const}` / `{x = const}`
/// (totally geodesic hyperbolic planes). Returns `None` otherwise.
pub fn dist_special(p: &Point, q: &Point) -> Option<DistanceResult> {
    if p == q {
        let up = TangentVec::new(*p, 0.0, 0.0, 1.0);
        return Some(DistanceResult {
            value: 0.0,
            witness: GeodesicSpec::from_initial(up).ok()?,
            witness_time: 0.0,
            method: DistanceMethod::Vertical,
            residual: 0.0,
        });
    }
    if p.x == q.x && p.y == q.y {
        let dir = (q.z - p.z).signum();
        let v = TangentVec::new(*p, 0.0, 0.0, dir);
        return Some(DistanceResult {
            value: (q.z - p.z).abs(),
            witness: GeodesicSpec::from_initial(v).ok()?,
            witness_time: (q.z - p.z).abs(),
            method: DistanceMethod::Vertical,
            residual: 0.0,
        });
    }
    if p.y == q.y {
        let value = h2_distance(p.x, p.z.exp(), q.x, q.z.exp());
        let (witness, time) = hyperbolic_witness(p, q).ok()?;
        return Some(DistanceResult {
            value,
            witness,
            witness_time: time,
            method: DistanceMethod::HyperbolicClosedForm,
            residual: 0.0,
        });
    }
    if p.x == q.x {
        // swap-flip into {y = const}, solve, and map the witness back
        let flip = Isometry::swap_flip();
        let (pf, qf) = (flip.apply_point(*p), flip.apply_point(*q));
        let value = h2_distance(pf.x, pf.z.exp(), qf.x, qf.z.exp());
        let (witness_f, time) = hyperbolic_witness(&pf, &qf).ok()?;
        let v_back = flip.apply_tangent(witness_f.initial);
        return Some(DistanceResult {
            value,
            witness: GeodesicSpec::from_initial(v_back).ok()?,
            witness_time: time,
            method: DistanceMethod::HyperbolicClosedForm,
            residual: 0.0,
        });
    }
    None
}

/// Parameters of the ground-plane asymptotic construction: the geodesic
/// from the origin that reaches `λ(cos θ, sin θ, 0)` in exactly one
/// period, so that `d(0, P_λ) = T(k)`.
#[derive(Debug, Clone, Copy)]
pub struct GroundAsymptotic {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `T(k)`, the distance to the target.
    pub period: f64,
    /// `M(k) a - λ sin θ`, internal consistency of the drift equations.
    pub ma_error: f64,
    /// `M(k) b - λ cos θ`.
    pub mb_error: f64,
}

/// Threshold `λ*(θ) = H(k_θ) / sqrt(sin θ cos θ)` with
/// `k_θ = sqrt((1 - 2 sin θ cos θ) / (1 + 2 sin θ cos θ))`, below which
/// the construction has no admissible unit vector.
pub fn lambda_star(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::Domain(format!("theta must lie in (0, π/2), got {theta}")));
    }
    let sc = theta.sin() * theta.cos();
    // mc_θ = 1 - k_θ^2 = 4 sc / (1 + 2 sc)
    let mc = 4.0 * sc / (1.0 + 2.0 * sc);
    let (_, _, h) = invariant_set_mc(mc)?;
    Ok(h / sc.sqrt())
}

/// Solves `H(k) = λ sqrt(sin θ cos θ)` and builds the unit direction
/// `(a, b, c)` whose geodesic lands on `P_λ = λ(cos θ, sin θ, 0)` after
/// one period. Errors when `λ` is below `λ*(θ)`.
pub fn ground_asymptotic(theta: f64, lambda: f64) -> Result<GroundAsymptotic> {
    let lam_star = lambda_star(theta)?;
    if lambda < lam_star * (1.0 - 1e-12) {
        return Err(Error::BelowLambdaStar { lambda, lambda_star: lam_star });
    }
    let sc = theta.sin() * theta.cos();
    let target = lambda * sc.sqrt();
    let mc = invert_horizontal_drift_mc(target)?;
    let (period, axis_drift, _) = invariant_set_mc(mc)?;
    let ab = 0.5 * two_ab_from_mc(mc);
    let a = (theta.tan() * ab).sqrt();
    let b = (ab / theta.tan()).sqrt();
    let c = (1.0 - a * a - b * b).max(0.0).sqrt();
    Ok(GroundAsymptotic {
        k: (1.0 - mc).max(0.0).sqrt(),
        a,
        b,
        c,
        period,
        ma_error: axis_drift * a - lambda * theta.sin(),
        mb_error: axis_drift * b - lambda * theta.cos(),
    })
}

/// Locates the first conjugate time along the horizontal geodesic
/// `α(t) = (t/sqrt(2), t/sqrt(2), 0)` by minimizing the norm of a
/// finite-difference Jacobi field obtained from the family of geodesics
/// whose initial direction tilts vertically. The returned time equals
/// `sqrt(2) π` up to the O(ds²) differencing bias.
pub fn horizontal_conjugate_time() -> Result<f64> {
    let s = 1e-4;
    let tol = 1e-12;
    let t_hi = 5.5;
    let dir = |sgn: f64| {
        let c = (sgn * s).cos() / std::f64::consts::SQRT_2;
        TangentVec::new(Point::ORIGIN, c, c, (sgn * s).sin())
    };
    let plus = GeodesicPath::build(&GeodesicSpec::from_initial(dir(1.0))?, 0.0, t_hi, tol)?;
    let minus = GeodesicPath::build(&GeodesicSpec::from_initial(dir(-1.0))?, 0.0, t_hi, tol)?;
    let field_norm = |t: f64| -> f64 {
        let sp = plus.state(t);
        let sm = minus.state(t);
        let (jx, jy, jz) =
            ((sp.x - sm.x) / (2.0 * s), (sp.y - sm.y) / (2.0 * s), (sp.z - sm.z) / (2.0 * s));
        // the base curve stays at z = 0, so the metric norm is Euclidean
        (jx * jx + jy * jy + jz * jz).sqrt()
    };
    let t_star = golden_min(&field_norm, 3.5, t_hi, 1e-12);
    if field_norm(t_star) > 1e-4 {
        return Err(Error::SearchFailure(format!(
            "no Jacobi-field zero inside the bracket; min |J| = {}",
            field_norm(t_star)
        )));
    }
    Ok(t_star)
}

// ---------------------------------------------------------------------
// Two-point shooting
// ---------------------------------------------------------------------

/// Multi-start budget; Fibonacci-lattice directions are deterministic.
const N_STARTS: usize = 40;
/// Starts kept for Gauss-Newton polishing after the coarse screen.
const N_POLISH: usize = 12;
const MAX_GN_ITERS: usize = 40;
/// Margin added to the cut-length time cap.
const CAP_MARGIN: f64 = 1e-6;

fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Orthonormal basis of the tangent plane at `d` on the sphere.
fn tangent_basis(d: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if d[0].abs() < 0.8 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize3([
        pick[1] * d[2] - pick[2] * d[1],
        pick[2] * d[0] - pick[0] * d[2],
        pick[0] * d[1] - pick[1] * d[0],
    ]);
    let e2 = [
        d[1] * e1[2] - d[2] * e1[1],
        d[2] * e1[0] - d[0] * e1[2],
        d[0] * e1[1] - d[1] * e1[0],
    ];
    (e1, e2)
}

fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

struct Shooter {
    target: Point,
    tol_int: f64,
    /// A priori upper bound for the distance (explicit broken path).
    upper_bound: f64,
}

#[derive(Clone)]
struct Candidate {
    dir: [f64; 3],
    tau: f64,
    miss: f64,
}

impl Shooter {
    fn new(target: Point) -> Shooter {
        // Broken path: hyperbolic arc in x, then in y, then vertical.
        let ub = 2.0 * (target.x.abs() / 2.0).asinh()
            + 2.0 * (target.y.abs() / 2.0).asinh()
            + target.z.abs()
            + 1e-9;
        Shooter { target, tol_int: 1e-11, upper_bound: ub }
    }

    fn spec_for(&self, dir: [f64; 3]) -> Result<GeodesicSpec> {
        let d = normalize3(dir);
        GeodesicSpec::from_initial(TangentVec::new(Point::ORIGIN, d[0], d[1], d[2]))
    }

    /// Time cap for a candidate direction: its cut length (plus margin),
    /// clipped by the a priori upper bound.
    fn cap(&self, spec: &GeodesicSpec) -> f64 {
        let cut = cut_length(spec.class, Some(spec.k)).unwrap_or(f64::INFINITY);
        (cut + CAP_MARGIN).min(self.upper_bound + 1.0)
    }

    fn path_for(&self, spec: &GeodesicSpec, cap: f64) -> Result<GeodesicPath> {
        GeodesicPath::build(spec, 0.0, cap, self.tol_int)
    }

    fn miss_at(&self, path: &GeodesicPath, tau: f64) -> f64 {
        path.point(tau).coord_dist(&self.target)
    }

    /// Seed for targets dominated by vertical separation. The witness
    /// there spends its y-motion low (where `e^{-2z} ~ 1`) and its
    /// x-motion high, so `a = x'/∫e^{2z} dt` can sit far below any
    /// finite-difference resolution on the direction sphere. A Picard
    /// iteration on the integrals measured from the actual trajectory,
    /// with the arc time pinned by the crossing `z(τ) = z'`, recovers
    /// the direction at the right scale. Expects `target.z > 0`; callers
    /// mirror negative altitudes through the swap-flip.
    fn vertical_dominant_seed(&self) -> Option<Candidate> {
        let t = self.target;
        if t.z <= 0.5 {
            return None;
        }
        // split estimate from the z(s) ≈ s ascent profile
        let mut a = 2.0 * t.x * (-2.0 * t.z).exp();
        let mut b = 2.0 * t.y / (1.0 - (-2.0 * t.z).exp());
        let mut best: Option<Candidate> = None;
        for _ in 0..12 {
            if a * a + b * b >= 0.99 {
                return best;
            }
            let c = (1.0 - a * a - b * b).sqrt();
            let spec = self.spec_for([a, b, c]).ok()?;
            let cap = self.cap(&spec);
            let path = self.path_for(&spec, cap).ok()?;
            // first upward crossing of the target altitude
            let mut bracket = None;
            let n = 96;
            let mut prev = 0.0;
            for i in 1..=n {
                let s = cap * i as f64 / n as f64;
                if path.state(s).z >= t.z {
                    bracket = Some((prev, s));
                    break;
                }
                prev = s;
            }
            let (lo, hi) = bracket?;
            let tau = brent(&|s| path.state(s).z - t.z, lo, hi, 1e-13)?;
            let hit = path.point(tau);
            let miss = hit.coord_dist(&t);
            if best.as_ref().is_none_or(|c| miss < c.miss) {
                best = Some(Candidate { dir: [a, b, c], tau, miss });
            }
            if miss <= 1e-13 * (1.0 + t.z) {
                break;
            }
            // measured integrals refine the split
            if a != 0.0 && hit.x != 0.0 {
                a = t.x / (hit.x / a);
            }
            if b != 0.0 && hit.y != 0.0 {
                b = t.y / (hit.y / b);
            }
        }
        best
    }

    /// Coarse screen of one direction: best miss over a uniform τ grid.
    fn screen(&self, dir: [f64; 3]) -> Option<Candidate> {
        let spec = self.spec_for(dir).ok()?;
        let cap = self.cap(&spec);
        let path = self.path_for(&spec, cap).ok()?;
        let n = 64;
        let mut best = Candidate { dir, tau: cap, miss: f64::INFINITY };
        for i in 1..=n {
            let tau = cap * i as f64 / n as f64;
            let miss = self.miss_at(&path, tau);
            if miss < best.miss {
                best = Candidate { dir, tau, miss };
            }
        }
        Some(best)
    }

    /// Damped Gauss-Newton on (two tangent direction parameters, τ).
    fn polish(&self, start: &Candidate, tol_miss: f64) -> Option<Candidate> {
        let mut dir = normalize3(start.dir);
        let mut tau = start.tau;
        let mut lambda = 1e-3;
        let fd = 1e-6;

        let eval = |dir: [f64; 3], tau: f64| -> Option<(f64, Point, TangentVec, f64)> {
            let spec = self.spec_for(dir).ok()?;
            let cap = self.cap(&spec);
            let t = tau.clamp(1e-9, cap);
            let path = self.path_for(&spec, t).ok()?;
            let p = path.point(t);
            let v = path.velocity(t);
            Some((p.coord_dist(&self.target), p, v, cap))
        };

        let (mut miss, mut endpoint, mut vel, mut cap) = eval(dir, tau)?;
        for _ in 0..MAX_GN_ITERS {
            if miss <= 0.3 * tol_miss {
                break;
            }
            let (e1, e2) = tangent_basis(dir);
            let column = |e: [f64; 3]| -> Option<[f64; 3]> {
                let dp = normalize3([dir[0] + fd * e[0], dir[1] + fd * e[1], dir[2] + fd * e[2]]);
                let dm = normalize3([dir[0] - fd * e[0], dir[1] - fd * e[1], dir[2] - fd * e[2]]);
                let (_, pp, _, _) = eval(dp, tau)?;
                let (_, pm, _, _) = eval(dm, tau)?;
                Some([
                    (pp.x - pm.x) / (2.0 * fd),
                    (pp.y - pm.y) / (2.0 * fd),
                    (pp.z - pm.z) / (2.0 * fd),
                ])
            };
            let j1 = column(e1)?;
            let j2 = column(e2)?;
            let j3 = [vel.dx, vel.dy, vel.dz];
            let f = [
                endpoint.x - self.target.x,
                endpoint.y - self.target.y,
                endpoint.z - self.target.z,
            ];
            // normal equations with Levenberg damping
            let cols = [j1, j2, j3];
            let mut jtj = [[0.0f64; 4]; 3];
            for r in 0..3 {
                for c in 0..3 {
                    jtj[r][c] = (0..3).map(|i| cols[r][i] * cols[c][i]).sum();
                }
                jtj[r][3] = -(0..3).map(|i| cols[r][i] * f[i]).sum::<f64>();
            }
            let mut improved = false;
            for _ in 0..8 {
                let mut damped = jtj;
                for r in 0..3 {
                    damped[r][r] += lambda * (1.0 + jtj[r][r]);
                }
                let Some(step) = solve3(damped) else { break };
                let new_dir = normalize3([
                    dir[0] + step[0] * e1[0] + step[1] * e2[0],
                    dir[1] + step[0] * e1[1] + step[1] * e2[1],
                    dir[2] + step[0] * e1[2] + step[1] * e2[2],
                ]);
                let new_tau = (tau + step[2]).clamp(1e-9, cap + 1.0);
                if let Some((m, p, v, cp)) = eval(new_dir, new_tau) {
                    if m < miss {
                        dir = new_dir;
                        tau = new_tau.min(cp);
                        miss = m;
                        endpoint = p;
                        vel = v;
                        cap = cp;
                        lambda = (lambda / 3.0).max(1e-12);
                        improved = true;
                        break;
                    }
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        Some(Candidate { dir, tau, miss })
    }
}

/// One verified shot: a polished direction whose endpoint lands within
/// the miss tolerance inside its cut-length cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifiedShot {
    pub time: f64,
    pub miss: f64,
}

/// Two-point distance by multi-start shooting from `p` (reduced to the
/// origin by a left translation) toward `q`. The best verified witness —
/// endpoint miss within `tol * max(1, |q'|)` and arc time within the
/// candidate's cut length — is returned; its initial data are translated
/// back to `p`.
pub fn shoot_distance(p: &Point, q: &Point, tol: f64) -> Result<DistanceResult> {
    shoot_distance_report(p, q, tol).map(|(best, _)| best)
}

/// [`shoot_distance`] together with every verified shot. Because the arc
/// time is capped at the candidate's cut length, every verified shot is
/// a minimizing segment; below the injectivity radius `sqrt(2) π` they
/// must all agree on the time.
pub fn shoot_distance_report(
    p: &Point,
    q: &Point,
    tol: f64,
) -> Result<(DistanceResult, Vec<VerifiedShot>)> {
    let target = p.group_inverse().group_mul(q);
    if target == Point::ORIGIN {
        let best = dist_special(p, q).ok_or(Error::SolverFailure { best_miss: 0.0 })?;
        return Ok((best, vec![VerifiedShot { time: 0.0, miss: 0.0 }]));
    }
    let shooter = Shooter::new(target);
    let scale = (target.x.abs().max(target.y.abs()).max(target.z.abs())).max(1.0);
    let tol_miss = tol * scale;

    let mut seeds: Vec<Candidate> = Vec::new();
    // chord direction
    seeds.push(Candidate {
        dir: normalize3([target.x, target.y, target.z]),
        tau: (target.x * target.x + target.y * target.y + target.z * target.z).sqrt(),
        miss: f64::INFINITY,
    });
    // ground-plane asymptotic seed for equal-altitude targets
    if target.z == 0.0 && target.x != 0.0 && target.y != 0.0 {
        let lambda = target.x.hypot(target.y);
        let theta = (target.y.abs()).atan2(target.x.abs());
        if let Ok(ga) = ground_asymptotic(theta, lambda) {
            seeds.push(Candidate {
                dir: [target.x.signum() * ga.a, target.y.signum() * ga.b, ga.c],
                tau: ga.period,
                miss: f64::INFINITY,
            });
        }
    }
    // vertical-dominant split seed; negative altitudes mirror through
    // the swap-flip isometry (x,y,z) -> (y,x,-z)
    if target.z > 0.5 {
        if let Some(c) = shooter.vertical_dominant_seed() {
            seeds.push(c);
        }
    } else if target.z < -0.5 {
        let mirrored = Shooter::new(Point::new(target.y, target.x, -target.z));
        if let Some(c) = mirrored.vertical_dominant_seed() {
            // map the witness back through the (involutive) swap-flip
            let back = [c.dir[1], c.dir[0], -c.dir[2]];
            let tau = c.tau;
            if let Ok(spec) = shooter.spec_for(back) {
                let cap = shooter.cap(&spec);
                let tau = tau.clamp(1e-9, cap);
                if let Ok(path) = shooter.path_for(&spec, tau) {
                    seeds.push(Candidate { dir: back, tau, miss: shooter.miss_at(&path, tau) });
                }
            }
        }
    }
    // exact horizontal candidate on the diagonals of a horizontal plane
    if target.z == 0.0 && target.x != 0.0 && target.x.abs() == target.y.abs() {
        let tau = std::f64::consts::SQRT_2 * target.x.abs();
        if tau <= SQRT2_PI + CAP_MARGIN {
            let s = 0.5f64.sqrt();
            seeds.push(Candidate {
                dir: [target.x.signum() * s, target.y.signum() * s, 0.0],
                tau,
                miss: f64::INFINITY,
            });
        }
    }

    // coarse screen of the lattice, keep the most promising starts
    let mut screened: Vec<Candidate> =
        fibonacci_sphere(N_STARTS).into_iter().filter_map(|d| shooter.screen(d)).collect();
    screened.sort_by(|a, b| a.miss.total_cmp(&b.miss));
    screened.truncate(N_POLISH);
    seeds.extend(screened);

    let mut best: Option<Candidate> = None;
    let mut verified: Vec<VerifiedShot> = Vec::new();
    let mut best_miss_seen = f64::INFINITY;
    for seed in &seeds {
        // seeds carrying only (dir, τ) get their miss evaluated first
        let seeded = if seed.miss.is_finite() {
            seed.clone()
        } else {
            let Ok(spec) = shooter.spec_for(seed.dir) else { continue };
            let cap = shooter.cap(&spec);
            let tau = seed.tau.clamp(1e-9, cap);
            let Ok(path) = shooter.path_for(&spec, tau) else { continue };
            Candidate { dir: seed.dir, tau, miss: shooter.miss_at(&path, tau) }
        };
        let polished = match shooter.polish(&seeded, tol_miss) {
            Some(c) => c,
            None => continue,
        };
        best_miss_seen = best_miss_seen.min(polished.miss);
        if polished.miss <= tol_miss {
            verified.push(VerifiedShot { time: polished.tau, miss: polished.miss });
            let better = match &best {
                Some(b) => polished.tau < b.tau,
                None => true,
            };
            if better {
                best = Some(polished);
            }
        }
    }

    let Some(winner) = best else {
        return Err(Error::SolverFailure { best_miss: best_miss_seen });
    };
    // translate the witness back so it starts at p
    let spec_origin = shooter.spec_for(winner.dir)?;
    let back = Isometry::left_translation(*p);
    let witness = GeodesicSpec::from_initial(back.apply_tangent(spec_origin.initial))?;
    let best = DistanceResult {
        value: winner.tau,
        witness,
        witness_time: winner.tau,
        method: DistanceMethod::Shooting,
        residual: winner.miss,
    };
    Ok((best, verified))
}

/// Two-point distance: exact closed forms when the pair lies in a common
/// totally geodesic plane or vertical line, multi-start shooting
/// otherwise. Symmetric in `(p, q)` within `tol`.
pub fn distance(p: &Point, q: &Point, tol: f64) -> Result<DistanceResult> {
    if let Some(special) = dist_special(p, q) {
        return Ok(special);
    }
    shoot_distance(p, q, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_lengths_by_class() {
        assert_eq!(cut_length(GeodesicClass::Vertical, None).unwrap(), f64::INFINITY);
        assert_eq!(cut_length(GeodesicClass::Hyperbolic, None).unwrap(), f64::INFINITY);
        assert!((cut_length(GeodesicClass::Horizontal, None).unwrap() - SQRT2_PI).abs() < 1e-15);
        let t03 = crate::invariants::invariant_set(0.3).unwrap().period;
        assert!((cut_length(GeodesicClass::Generic, Some(0.3)).unwrap() - t03).abs() < 1e-15);
        assert!(cut_length(GeodesicClass::Generic, None).is_err());
    }

    #[test]
    fn staircase_values() {
        assert!((staircase_bound(2.0).unwrap().bound - 4.0).abs() < 1e-15);
        let s6 = staircase_bound(6.0).unwrap();
        assert!(s6.bound < s6.chord, "L(6) < sqrt(2)*6");
        let p = 2.0 * std::f64::consts::E * std::f64::consts::E;
        assert!((staircase_bound(p).unwrap().bound - 12.0).abs() < 1e-12);
        assert!(staircase_bound(1.5).is_err());
    }

    #[test]
    fn special_vertical_and_hyperbolic() {
        let o = Point::ORIGIN;
        let r = dist_special(&o, &Point::new(0.0, 0.0, 5.0)).unwrap();
        assert_eq!(r.value, 5.0);
        assert_eq!(r.method, DistanceMethod::Vertical);

        // (0,0,0) -> (λ,0,0) is 2 arcsinh(λ/2)
        let lambda = 2.0;
        let r = dist_special(&o, &Point::new(lambda, 0.0, 0.0)).unwrap();
        assert!((r.value - 2.0 * (lambda / 2.0f64).asinh()).abs() < 1e-12);
        assert_eq!(r.method, DistanceMethod::HyperbolicClosedForm);

        // swap-flip symmetry: (0,λ,0) at the same distance
        let ry = dist_special(&o, &Point::new(0.0, lambda, 0.0)).unwrap();
        assert!((ry.value - r.value).abs() < 1e-12);

        // witness endpoint actually reaches the target
        let path = GeodesicPath::build(&r.witness, 0.0, r.witness_time, 1e-11).unwrap();
        assert!(path.point(r.witness_time).coord_dist(&Point::new(lambda, 0.0, 0.0)) < 1e-9);

        assert!(dist_special(&o, &Point::new(1.0, 2.0, 0.5)).is_none());
    }

    #[test]
    fn hyperbolic_witness_general_altitudes() {
        let p = Point::new(-0.4, 1.0, 0.3);
        let q = Point::new(2.0, 1.0, -0.8);
        let r = dist_special(&p, &q).unwrap();
        let path = GeodesicPath::build(&r.witness, 0.0, r.witness_time, 1e-11).unwrap();
        assert!(path.point(r.witness_time).coord_dist(&q) < 1e-9);
        assert!((path.point(0.0).coord_dist(&p)) < 1e-12);
    }

    #[test]
    fn shooting_matches_hyperbolic_closed_form() {
        let o = Point::ORIGIN;
        let q = Point::new(3.0, 0.0, 0.0);
        let exact = 2.0 * (1.5f64).asinh();
        let shot = shoot_distance(&o, &q, 1e-8).unwrap();
        assert!(
            (shot.value - exact).abs() < 1e-6,
            "shooting {} vs closed form {exact}",
            shot.value
        );
        assert!(shot.residual <= 1e-8 * 3.0);
    }

    #[test]
    fn distance_is_symmetric_generic_pair() {
        let p = Point::new(0.3, -0.2, 0.1);
        let q = Point::new(1.1, 0.9, -0.4);
        let d1 = distance(&p, &q, 1e-8).unwrap();
        let d2 = distance(&q, &p, 1e-8).unwrap();
        assert!((d1.value - d2.value).abs() < 1e-7, "{} vs {}", d1.value, d2.value);
    }

    #[test]
    fn conjugate_diagonal_point() {
        let r = distance(&Point::ORIGIN, &Point::new(PI, PI, 0.0), 1e-6).unwrap();
        assert!((r.value - SQRT2_PI).abs() < 1e-4, "d(0, (π,π,0)) = {}", r.value);
    }

    #[test]
    fn lambda_star_at_quarter_pi() {
        let ls = lambda_star(PI / 4.0).unwrap();
        assert!((ls - SQRT2_PI).abs() < 1e-10);
        let below = ground_asymptotic(PI / 4.0, 4.0);
        assert!(matches!(below, Err(Error::BelowLambdaStar { .. })));
    }

    #[test]
    fn ground_asymptotic_drift_equations() {
        for &lambda in &[100.0, 1000.0] {
            let ga = ground_asymptotic(PI / 4.0, lambda).unwrap();
            assert!(ga.ma_error.abs() < 1e-8, "Ma residual {}", ga.ma_error);
            assert!(ga.mb_error.abs() < 1e-8, "Mb residual {}", ga.mb_error);
            assert!((ga.a * ga.a + ga.b * ga.b + ga.c * ga.c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn horizontal_conjugate_time_near_sqrt2_pi() {
        let t = horizontal_conjugate_time().unwrap();
        assert!((t - SQRT2_PI).abs() < 1e-3, "conjugate time {t}");
    }
}
