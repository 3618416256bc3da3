//! NIL closed forms against independent integration of the
//! Euler-Lagrange system `ẍ = -c²x - bc`, `ẏ = b + cx`,
//! `ż = c + bx + cx²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sol_geodesics::geometry::Point;
use sol_geodesics::nil::{nil_eval, nil_from_initial, nil_speed_sq, NilGeodesic};
use sol_geodesics::ode::integrate_dense;

/// Random unit-speed initial data with a well-conditioned helix
/// (|c| away from 0 and 1 keeps the radius and pitch moderate).
fn random_initial(rng: &mut ChaCha8Rng) -> (Point, [f64; 3]) {
    loop {
        let p = Point::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let raw = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = nil_speed_sq(&p, raw[0], raw[1], raw[2]).sqrt();
        if n < 1e-3 {
            continue;
        }
        let v = [raw[0] / n, raw[1] / n, raw[2] / n];
        let c = v[2] - p.x * v[1];
        if c.abs() > 0.1 && c.abs() < 0.9 {
            return (p, v);
        }
    }
}

#[test]
fn closed_form_matches_ode_integration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x61e0);
    for trial in 0..5 {
        let (p, v) = random_initial(&mut rng);
        let geo = nil_from_initial(&p, v[0], v[1], v[2]).unwrap();
        let (b, c) = (geo.b(), geo.c());

        // state (x, xdot, y, z)
        let rhs = move |_t: f64, s: &[f64; 4]| {
            [s[1], -c * c * s[0] - b * c, b + c * s[0], c + b * s[0] + c * s[0] * s[0]]
        };
        let out = integrate_dense(&rhs, 0.0, 10.0, [p.x, v[0], p.y, p.z], 1e-11, 1e-11, 1_000_000)
            .unwrap();

        for i in 0..=50 {
            let t = 10.0 * i as f64 / 50.0;
            let ode = out.eval(t);
            let (pt, vel) = nil_eval(&geo, t);
            assert!((pt.x - ode[0]).abs() < 1e-8, "trial {trial}, x at t = {t}");
            assert!((pt.y - ode[2]).abs() < 1e-8, "trial {trial}, y at t = {t}");
            assert!((pt.z - ode[3]).abs() < 1e-8, "trial {trial}, z at t = {t}");
            assert!((vel[0] - ode[1]).abs() < 1e-8, "trial {trial}, xdot at t = {t}");

            // constants of motion along the ODE trajectory
            let x = ode[0];
            let xdot = ode[1];
            let ydot = b + c * x;
            let zdot = c + b * x + c * x * x;
            let c_ode = zdot - x * ydot;
            let b_ode = (1.0 + x * x) * ydot - x * zdot;
            assert!((c_ode - c).abs() < 1e-9, "c conserved");
            assert!((b_ode - b).abs() < 1e-9, "b conserved");
            // horizontal speed identity
            assert!((xdot * xdot + ydot * ydot + c * c - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn closed_form_identities_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..5 {
        let (p, v) = random_initial(&mut rng);
        let geo = nil_from_initial(&p, v[0], v[1], v[2]).unwrap();
        let (b, c) = (geo.b(), geo.c());
        let NilGeodesic::Helix { amplitude, base, .. } = geo else {
            panic!("expected a helix");
        };
        assert!((amplitude - (1.0 - c * c).sqrt() / c.abs()).abs() < 1e-12);
        for i in 0..=20 {
            let t = 10.0 * i as f64 / 20.0;
            let (pt, vel) = nil_eval(&geo, t);
            assert!((nil_speed_sq(&pt, vel[0], vel[1], vel[2]) - 1.0).abs() < 1e-12);
            let r2 = (pt.x + b / c) * (pt.x + b / c) + (pt.y - base.y) * (pt.y - base.y);
            assert!((r2 - amplitude * amplitude).abs() < 1e-12);
        }
    }
}
