//! Dormand–Prince 5(4) integrator with dense output.
//!
//! Works on fixed-size states `[f64; N]` and integrates in either direction.
//! Sample points are reported through the continuous extension, so callers
//! get values on their own grid regardless of the accepted step sizes.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Integration halts once an accepted step is shorter than `min_step_rel * max(|t|, 1e-300)`.
    pub min_step_rel: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            min_step_rel: 1e-14,
            max_steps: 200_000,
        }
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    Completed,
    /// The caller's blow-up predicate fired at this `t`.
    BlowUp(f64),
    /// The step size collapsed below the floor at this `t`.
    StepCollapse(f64),
}

#[derive(Debug, Clone)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// Values at the requested samples reached before stopping.
    pub samples: Vec<(f64, [f64; N])>,
    pub stop: Stop,
    pub steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end`.
///
/// `samples` must be ordered in the direction of integration. `blow_up` is
/// checked after every accepted step.
pub fn integrate<const N: usize, F, B>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    samples: &[f64],
    opts: &OdeOptions,
    blow_up: B,
) -> Result<Outcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    B: Fn(f64, &[f64; N]) -> bool,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut out = Outcome {
        t: t0,
        y: y0,
        samples: Vec::with_capacity(samples.len()),
        stop: Stop::Completed,
        steps: 0,
    };
    let mut next_sample = 0;
    while next_sample < samples.len() && (samples[next_sample] - t0) * dir <= 0.0 {
        if samples[next_sample] == t0 {
            out.samples.push((t0, y0));
        }
        next_sample += 1;
    }
    if span == 0.0 {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y)?;

    let scale = |y: &[f64; N], i: usize| opts.atol + opts.rtol * y[i].abs();
    let d0 = (0..N).map(|i| (y[i] / scale(&y, i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
    let d1 = (0..N).map(|i| (k1[i] / scale(&y, i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(span).max(span * 1e-12);

    let mut prev_rejected = false;
    loop {
        if out.steps >= opts.max_steps {
            return Err(Error::Convergence {
                what: "ODE integrator",
                detail: format!("exceeded {} steps at t = {t}", opts.max_steps),
            });
        }
        let remaining = (t_end - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = h * dir;
        let k2 = rhs(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
        let k3 = rhs(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = rhs(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = rhs(
            t + C5 * hs,
            &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = rhs(
            t + hs,
            &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { t_end } else { t + hs };
        let k7 = rhs(t_new, &y_new)?;

        let mut err = 0.0;
        let mut finite = true;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
            finite &= y_new[i].is_finite();
        }
        let err = if finite { (err / N as f64).sqrt() } else { f64::INFINITY };

        if err <= 1.0 {
            out.steps += 1;
            // Dense output on [t, t_new].
            while next_sample < samples.len() {
                let s = samples[next_sample];
                if (s - t_new) * dir > 0.0 {
                    break;
                }
                let theta = (s - t) / hs;
                let th1 = 1.0 - theta;
                let mut ys = [0.0; N];
                for i in 0..N {
                    let r2 = y_new[i] - y[i];
                    let r3 = hs * k1[i] - r2;
                    let r4 = r2 - hs * k7[i] - r3;
                    let r5 = hs
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                    ys[i] = y[i] + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
                }
                out.samples.push((s, ys));
                next_sample += 1;
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            out.t = t;
            out.y = y;
            if blow_up(t, &y) {
                out.stop = Stop::BlowUp(t);
                return Ok(out);
            }
            if last {
                return Ok(out);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= if prev_rejected { fac.min(1.0) } else { fac };
            prev_rejected = false;
        } else {
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= fac;
            prev_rejected = true;
        }
        if h < opts.min_step_rel * t.abs().max(1e-300) {
            out.stop = Stop::StepCollapse(t);
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_with_dense_samples() {
        let samples: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let out = integrate(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], 2.0, &samples, &opts, |_, _| false)
            .unwrap();
        assert_eq!(out.stop, Stop::Completed);
        assert_eq!(out.samples.len(), samples.len());
        for (t, y) in &out.samples {
            assert!((y[0] - t.exp()).abs() < 1e-10 * t.exp(), "t={t} y={}", y[0]);
        }
    }

    #[test]
    fn backward_harmonic_oscillator() {
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let samples = [2.0, 1.0, 0.0, -1.5];
        let out = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            2.0,
            [2f64.sin(), 2f64.cos()],
            -1.5,
            &samples,
            &opts,
            |_, _| false,
        )
        .unwrap();
        for (t, y) in &out.samples {
            assert!((y[0] - t.sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn finite_time_blow_up_is_flagged() {
        // y' = y^2, y(0) = 1 blows up at t = 1.
        let out = integrate(
            |_, y: &[f64; 1]| Ok([y[0] * y[0]]),
            0.0,
            [1.0],
            2.0,
            &[],
            &OdeOptions::default(),
            |_, y| y[0].abs() > 1e12,
        )
        .unwrap();
        match out.stop {
            Stop::BlowUp(t) | Stop::StepCollapse(t) => assert!((t - 1.0).abs() < 1e-6, "t={t}"),
            Stop::Completed => panic!("no blow-up detected"),
        }
    }
}
