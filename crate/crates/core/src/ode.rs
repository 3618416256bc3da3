//! Adaptive Dormand–Prince 5(4) integration with quartic dense output.
//!
//! The classic DOPRI5 pair: seven stages, FSAL, embedded 4th-order error
//! estimate, and the standard fourth-order interpolant between accepted
//! steps. Error control uses the componentwise scale
//! `atol + rtol * max(|y0|, |y1|)` with an RMS norm. Integration runs in
//! either time direction.

use crate::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Error coefficients: 5th-order weights minus the embedded 4th-order ones.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense-output weights for the fourth-order interpolant.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

/// One accepted step with its interpolation coefficients.
#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1 * (self.rcont[2][i]
                            + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        y
    }
}

/// Continuous solution over one integration span.
#[derive(Debug, Clone)]
pub struct DenseOutput<const N: usize> {
    steps: Vec<DenseStep<N>>,
    t_start: f64,
    t_end: f64,
    y_start: [f64; N],
    y_end: [f64; N],
    /// Number of accepted steps.
    pub n_steps: usize,
}

impl<const N: usize> DenseOutput<N> {
    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn end_state(&self) -> [f64; N] {
        self.y_end
    }

    /// Interpolated state at `t`, which must lie within the integrated
    /// span (inclusive, with a small tolerance for endpoint round-off).
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() {
            return self.y_start;
        }
        let dir = (self.t_end - self.t_start).signum();
        let span = (self.t_end - self.t_start).abs();
        debug_assert!(
            (t - self.t_start) * dir >= -1e-9 * span.max(1.0)
                && (t - self.t_end) * dir <= 1e-9 * span.max(1.0),
            "dense eval at t = {t} outside [{}, {}]",
            self.t_start,
            self.t_end
        );
        // Binary search for the step whose interval contains t.
        let mut lo = 0usize;
        let mut hi = self.steps.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let step = &self.steps[mid];
            if (t - (step.t0 + step.h)) * dir > 0.0 {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.steps[lo].eval(t)
    }

    /// Endpoint times of the accepted steps, including `t_start`.
    pub fn step_times(&self) -> Vec<f64> {
        let mut ts = Vec::with_capacity(self.steps.len() + 1);
        ts.push(self.t_start);
        for s in &self.steps {
            ts.push(s.t0 + s.h);
        }
        ts
    }
}

/// Integrates `dy/dt = rhs(t, y)` from `(t0, y0)` to `t1` (either
/// direction) with per-component error scale `atol + rtol*max(|y|)`.
pub fn integrate_dense<const N: usize>(
    rhs: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    t1: f64,
    y0: [f64; N],
    rtol: f64,
    atol: f64,
    max_steps: usize,
) -> Result<DenseOutput<N>> {
    if t0 == t1 {
        return Ok(DenseOutput {
            steps: Vec::new(),
            t_start: t0,
            t_end: t1,
            y_start: y0,
            y_end: y0,
            n_steps: 0,
        });
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);

    // Initial step: conservative fraction of the span, capped by the
    // state/derivative scale.
    let ynorm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let fnorm = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = dir
        * (0.01 * (ynorm + 1.0) / (fnorm + 1.0))
            .min(0.1 * span)
            .max(1e-10 * span);

    let mut steps = Vec::new();
    let mut rejected_err = 0.0f64;

    for _ in 0..max_steps {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }

        let mut y2 = [0.0; N];
        for i in 0..N {
            y2[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = rhs(t + C[1] * h, &y2);
        let mut y3 = [0.0; N];
        for i in 0..N {
            y3[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = rhs(t + C[2] * h, &y3);
        let mut y4 = [0.0; N];
        for i in 0..N {
            y4[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = rhs(t + C[3] * h, &y4);
        let mut y5 = [0.0; N];
        for i in 0..N {
            y5[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = rhs(t + C[4] * h, &y5);
        let mut y6 = [0.0; N];
        for i in 0..N {
            y6[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = rhs(t + C[5] * h, &y6);
        let mut ynew = [0.0; N];
        for i in 0..N {
            ynew[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let k7 = rhs(t + h, &ynew);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = atol + rtol * y[i].abs().max(ynew[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            // Accept: store the interpolant and advance (FSAL).
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let dy = ynew[i] - y[i];
                let bspl = h * k1[i] - dy;
                rcont[0][i] = y[i];
                rcont[1][i] = dy;
                rcont[2][i] = bspl;
                rcont[3][i] = dy - h * k7[i] - bspl;
                rcont[4][i] = h
                    * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]);
            }
            steps.push(DenseStep { t0: t, h, rcont });
            t += h;
            y = ynew;
            k1 = k7;
            if (t - t1) * dir >= 0.0 {
                return Ok(DenseOutput {
                    n_steps: steps.len(),
                    steps,
                    t_start: t0,
                    t_end: t1,
                    y_start: y0,
                    y_end: y,
                });
            }
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE);
        } else {
            rejected_err = rejected_err.max(err);
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, 1.0);
            if h.abs() < 1e-14 * span {
                return Err(Error::IntegrationFailure { worst_residual: err });
            }
        }
    }
    Err(Error::IntegrationFailure { worst_residual: rejected_err.max(1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_endpoint_and_dense() {
        let rhs = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let out =
            integrate_dense(&rhs, 0.0, 2.0 * std::f64::consts::PI, [1.0, 0.0], 1e-11, 1e-11, 100_000)
                .unwrap();
        let [x, v] = out.end_state();
        assert!((x - 1.0).abs() < 1e-9, "x(2π) = {x}");
        assert!(v.abs() < 1e-9, "v(2π) = {v}");
        // dense output against the exact solution at awkward interior times
        for &t in &[0.1, 0.777, 2.3, 4.0, 6.0] {
            let y = out.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-9, "dense x({t})");
            assert!((y[1] + t.sin()).abs() < 1e-9, "dense v({t})");
        }
    }

    #[test]
    fn backward_integration() {
        let rhs = |_t: f64, y: &[f64; 1]| [y[0]];
        let out = integrate_dense(&rhs, 0.0, -1.0, [1.0], 1e-12, 1e-12, 100_000).unwrap();
        assert!((out.end_state()[0] - (-1.0f64).exp()).abs() < 1e-11);
        let mid = out.eval(-0.5);
        assert!((mid[0] - (-0.5f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn tolerance_is_respected() {
        // stiff-ish exponential decay; endpoint must track the requested rtol
        let rhs = |_t: f64, y: &[f64; 1]| [-10.0 * y[0]];
        let out = integrate_dense(&rhs, 0.0, 2.0, [1.0], 1e-10, 1e-12, 1_000_000).unwrap();
        let exact = (-20.0f64).exp();
        assert!((out.end_state()[0] - exact).abs() < 1e-10);
    }

    #[test]
    fn step_budget_exhaustion_is_an_error() {
        let rhs = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let res = integrate_dense(&rhs, 0.0, 1000.0, [1.0, 0.0], 1e-12, 1e-12, 10);
        assert!(matches!(res, Err(crate::Error::IntegrationFailure { .. })));
    }
}
