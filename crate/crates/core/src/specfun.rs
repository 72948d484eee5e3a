//! Special functions: Gamma, Bessel J of real order and its zeros, the
//! ratio J_{ν+1}/J_ν, and the Gauss hypergeometric function on z ≤ 0.

use crate::error::{domain, Error, Result};
use crate::ode::{self, OdeOptions};
use std::f64::consts::PI;

/// Largest Bessel order accepted.
pub const BESSEL_NU_MAX: f64 = 50.0;
/// Largest Bessel argument accepted.
pub const BESSEL_X_MAX: f64 = 200.0;
/// Largest zero index accepted by [`bessel_zero`].
pub const BESSEL_K_MAX: usize = 20;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1).
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Γ(x) by the Lanczos approximation, with reflection for x < 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("gamma", format!("non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { what: "gamma", at: x });
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    if x == x.round() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(z))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma", format!("argument {x} must be positive")));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos branch in its accurate range.
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

fn check_bessel_box(nu: f64, x: f64) -> Result<()> {
    if !(0.0..=BESSEL_NU_MAX).contains(&nu) || !nu.is_finite() {
        return Err(Error::UnsupportedRange {
            what: "bessel_j",
            detail: format!("order {nu} outside [0, {BESSEL_NU_MAX}]"),
        });
    }
    if !(0.0..=BESSEL_X_MAX).contains(&x) || !x.is_finite() {
        return Err(Error::UnsupportedRange {
            what: "bessel_j",
            detail: format!("argument {x} outside [0, {BESSEL_X_MAX}]"),
        });
    }
    Ok(())
}

/// Natural log of the largest ascending-series term of J_ν(x).
fn series_peak_log(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    // (k+1)(ν+k+1) = q at the peak.
    let b = nu + 2.0;
    let disc = b * b - 4.0 * (nu + 1.0 - q);
    let k = if disc > 0.0 { ((-b + disc.sqrt()) / 2.0).max(0.0).round() } else { 0.0 };
    let lg_k = ln_gamma(k + 1.0).unwrap_or(0.0);
    let lg_nk = ln_gamma(nu + k + 1.0).unwrap_or(0.0);
    (nu + 2.0 * k) * (0.5 * x).ln() - lg_k - lg_nk
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let log_t0 = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0).expect("nu >= 0");
    if log_t0 < -740.0 {
        return 0.0;
    }
    let q = 0.25 * x * x;
    let mut term = log_t0.exp();
    let mut acc = NeumaierSum::default();
    acc.add(term);
    let mut k = 0.0;
    loop {
        term *= -q / ((k + 1.0) * (nu + k + 1.0));
        acc.add(term);
        k += 1.0;
        if k * (nu + k) > q && term.abs() <= 1e-17 * acc.value().abs() {
            break;
        }
        if term == 0.0 || k > 2000.0 {
            break;
        }
    }
    acc.value()
}

/// (J_ν(x), J_{ν+1}(x)) by Miller's backward recurrence, normalized through
/// (x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! J_{μ+2k}(x) with μ = ν − ⌊ν⌋.
fn bessel_j_miller(nu: f64, x: f64) -> (f64, f64) {
    let n = nu.floor();
    let mu = nu - n;
    let n = n as usize;
    let top = (n as f64 + 1.0).max(x) + 30.0 + 8.0 * x.max(1.0).cbrt();
    let mut m = top.ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut f_next = 0.0; // f_{k+1}
    let mut f_cur = 1e-30; // f_k
    let mut jn = if m == n { f_cur } else { 0.0 };
    let mut jn1 = if m == n + 1 { f_cur } else { 0.0 };
    // Coefficients (μ+2j) r_j, r_j = Γ(μ+j)/(j! Γ(μ+1)), for j ≥ 1.
    let half = m / 2;
    let mut weights = vec![0.0; half + 1];
    weights[0] = 1.0;
    let mut r = 1.0;
    for (j, w) in weights.iter_mut().enumerate().skip(1) {
        if j > 1 {
            r *= (mu + (j - 1) as f64) / j as f64;
        }
        *w = (mu + 2.0 * j as f64) * r;
    }
    let mut sum = if m % 2 == 0 { weights[half] * f_cur } else { 0.0 };
    let mut k = m;
    while k > 0 {
        let f_prev = 2.0 * (mu + k as f64) / x * f_cur - f_next;
        k -= 1;
        f_next = f_cur;
        f_cur = f_prev;
        if k == n {
            jn = f_cur;
        }
        if k == n + 1 {
            jn1 = f_cur;
        }
        if k % 2 == 0 {
            sum += weights[k / 2] * f_cur;
        }
        if f_cur.abs() > 1e200 {
            let s = 1e-200;
            f_cur *= s;
            f_next *= s;
            sum *= s;
            jn *= s;
            jn1 *= s;
        }
    }
    let lhs = (mu * (0.5 * x).ln() - ln_gamma(mu + 1.0).expect("mu >= 0")).exp();
    let scale = lhs / sum;
    (jn * scale, jn1 * scale)
}

fn use_series(nu: f64, x: f64) -> bool {
    series_peak_log(nu, x) < 3.0 * std::f64::consts::LN_10
}

fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if use_series(nu, x) {
        bessel_j_series(nu, x)
    } else {
        bessel_j_miller(nu, x).0
    }
}

fn bessel_j_pair(nu: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if nu == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    if use_series(nu, x) {
        (bessel_j_series(nu, x), bessel_j_series(nu + 1.0, x))
    } else {
        bessel_j_miller(nu, x)
    }
}

/// J_ν(x) for 0 ≤ ν ≤ 50, 0 ≤ x ≤ 200.
///
/// The ascending series (compensated) is used while its largest term stays
/// below 1e3; past that, Miller's backward recurrence takes over.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_bessel_box(nu, x)?;
    Ok(bessel_j_unchecked(nu, x))
}

/// dJ_ν/dx = (ν/x) J_ν − J_{ν+1}; at x = 0 the one-sided limit.
pub fn bessel_j_deriv(nu: f64, x: f64) -> Result<f64> {
    check_bessel_box(nu, x)?;
    if x == 0.0 {
        return if nu == 0.0 || nu > 1.0 {
            Ok(0.0)
        } else if nu == 1.0 {
            Ok(0.5)
        } else {
            Err(domain("bessel_j derivative", format!("unbounded at x = 0 for order {nu}")))
        };
    }
    let (j, j1) = bessel_j_pair(nu, x);
    Ok(nu / x * j - j1)
}

fn mcmahon(nu: f64, k: usize) -> f64 {
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    let mu = 4.0 * nu * nu;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
}

/// k-th positive zero j_{ν,k} of J_ν, for ν ≤ 50 and k ≤ 20.
///
/// Zeros are bracketed by a sign scan starting at √(ν(ν+2)) (a lower bound
/// for j_{ν,1}); each bracket is refined by Newton iteration started from
/// the McMahon estimate when it falls inside, with bisection as the safeguard.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    if !(0.0..=BESSEL_NU_MAX).contains(&nu) || !nu.is_finite() {
        return Err(Error::UnsupportedRange {
            what: "bessel_zero",
            detail: format!("order {nu} outside [0, {BESSEL_NU_MAX}]"),
        });
    }
    if k == 0 || k > BESSEL_K_MAX {
        return Err(Error::UnsupportedRange {
            what: "bessel_zero",
            detail: format!("index {k} outside [1, {BESSEL_K_MAX}]"),
        });
    }
    let step = 0.5;
    let mut a = (nu * (nu + 2.0)).sqrt();
    let mut fa = bessel_j_unchecked(nu, a);
    let mut found = 0;
    loop {
        let b = a + step;
        if b > BESSEL_X_MAX {
            return Err(Error::UnsupportedRange {
                what: "bessel_zero",
                detail: format!("zero {k} of order {nu} lies beyond {BESSEL_X_MAX}"),
            });
        }
        let fb = bessel_j_unchecked(nu, b);
        if fb == 0.0 {
            found += 1;
            if found == k {
                return Ok(b);
            }
        } else if fa * fb < 0.0 {
            found += 1;
            if found == k {
                return refine_zero(nu, k, a, b, fa);
            }
        }
        a = b;
        fa = fb;
    }
}

fn refine_zero(nu: f64, k: usize, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    let sa = fa.signum();
    let guess = mcmahon(nu, k);
    let mut x = if guess > a && guess < b { guess } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let (j, j1) = bessel_j_pair(nu, x);
        if j == 0.0 {
            return Ok(x);
        }
        if j.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let dj = nu / x * j - j1;
        let newton = x - j / dj;
        let next = if dj != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || (b - a) <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence {
        what: "bessel_zero",
        detail: format!("no convergence for order {nu}, index {k}"),
    })
}

/// J_{ν+1}(x)/J_ν(x) for 0 < x < j_{ν,1}.
pub fn bessel_ratio(nu: f64, x: f64) -> Result<f64> {
    check_bessel_box(nu, x)?;
    if !(x > 0.0) {
        return Err(domain("besselratio", format!("argument {x} must be positive")));
    }
    if x * x > nu * (nu + 2.0) {
        let j1 = bessel_zero(nu, 1)?;
        if x >= j1 {
            return Err(domain(
                "besselratio",
                format!("argument {x} at or past the first zero {j1} of J_{nu}"),
            ));
        }
    }
    let (j, j1) = bessel_j_pair(nu, x);
    if !(j > 0.0) {
        return Err(domain("besselratio", format!("J_{nu}({x}) is not positive")));
    }
    Ok(j1 / j)
}

/// d/dx of J_{ν+1}/J_ν, from the Riccati identity r' = 1 − (2ν+1) r / x + r².
pub fn bessel_ratio_deriv(nu: f64, x: f64) -> Result<f64> {
    let r = bessel_ratio(nu, x)?;
    Ok(1.0 - (2.0 * nu + 1.0) * r / x + r * r)
}

// ---------------------------------------------------------------------------
// Gauss hypergeometric function

const HYP_SERIES_MAX_W: f64 = 0.75;
const HYP_MAX_TERMS: usize = 20_000;

fn nonpositive_integer_degree(x: f64) -> Option<usize> {
    if is_nonpositive_integer(x) && x > -1e6 {
        Some((-x) as usize)
    } else {
        None
    }
}

/// Σ (a)_k (b)_k / ((c)_k k!) w^k, with the condition number Σ|terms| / |Σ terms|.
fn hyp_series(a: f64, b: f64, c: f64, w: f64) -> Result<(f64, f64)> {
    let terminate = match (nonpositive_integer_degree(a), nonpositive_integer_degree(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        (None, None) => None,
    };
    let mut term = 1.0f64;
    let mut sum = NeumaierSum::default();
    let mut abs_sum = 1.0;
    sum.add(1.0);
    let mut k = 0usize;
    loop {
        if let Some(m) = terminate {
            if k >= m {
                break;
            }
        }
        if k >= HYP_MAX_TERMS {
            return Err(Error::Convergence {
                what: "hyp2f1",
                detail: format!("series at w = {w} did not converge in {HYP_MAX_TERMS} terms"),
            });
        }
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        sum.add(term);
        abs_sum += term.abs();
        k += 1;
        if terminate.is_none() {
            if term == 0.0 {
                break;
            }
            // Past the turning point the tail is bounded by a geometric series.
            let next_ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * w).abs();
            if next_ratio < 1.0 && term.abs() / (1.0 - next_ratio) <= 1e-17 * sum.value().abs() {
                break;
            }
        }
    }
    let value = sum.value();
    Ok((value, abs_sum / value.abs()))
}

/// F(a', b'; c; w) for 0 ≤ w < 1 and its condition estimate; past w = 3/4 the
/// series value at 3/4 is continued by integrating the hypergeometric
/// equation in s = −ln(1−w).
fn hyp_unit_interval(a: f64, b: f64, c: f64, w: f64, one_minus_w: f64) -> Result<(f64, f64)> {
    let terminating = nonpositive_integer_degree(a).is_some() || nonpositive_integer_degree(b).is_some();
    if w <= HYP_SERIES_MAX_W || terminating {
        return hyp_series(a, b, c, w);
    }
    let w0 = HYP_SERIES_MAX_W;
    let (y0, cond0) = hyp_series(a, b, c, w0)?;
    let dy0 = if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b / c * hyp_series(a + 1.0, b + 1.0, c + 1.0, w0)?.0
    };
    let s0 = -(1.0 - w0).ln();
    let s1 = -one_minus_w.ln();
    let opts = OdeOptions {
        rtol: 1e-13,
        atol: 1e-300,
        min_step_rel: 1e-15,
        max_steps: 500_000,
    };
    let out = ode::integrate(
        |s, y: &[f64; 2]| {
            let one_minus_w = (-s).exp();
            let w = 1.0 - one_minus_w;
            let ys = y[1];
            let yss = -ys * (1.0 + (c - (a + b + 1.0) * w) / w) + a * b * one_minus_w / w * y[0];
            Ok([ys, yss])
        },
        s0,
        [y0, (1.0 - w0) * dy0],
        s1,
        &[],
        &opts,
        |_, y| !y[0].is_finite() || y[0].abs() > 1e250,
    )?;
    match out.stop {
        ode::Stop::Completed => Ok((out.y[0], cond0)),
        other => Err(Error::Convergence {
            what: "hyp2f1",
            detail: format!("continuation stopped early: {other:?}"),
        }),
    }
}

fn check_hyp_args(a: f64, b: f64, c: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(domain("hyp2f1", "non-finite argument"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { what: "hyp2f1", at: c });
    }
    if z > 0.0 {
        return Err(domain("hyp2f1", format!("z = {z} must be ≤ 0")));
    }
    Ok(())
}

/// Largest tolerated cancellation ratio; beyond it fewer than ten digits survive.
const HYP_MAX_CONDITION: f64 = 1e6;

/// Standard Gauss hypergeometric F(a, b; c; z) for z ≤ 0.
///
/// Candidates are the two Pfaff forms
/// (1−z)^{−a} F(a, c−b; c; w) and (1−z)^{−b} F(c−a, b; c; w), w = z/(z−1),
/// plus the direct series when |z| ≤ 1/2. Terminating forms are summed
/// exactly; otherwise the candidate with the smallest cancellation ratio is
/// kept. Past w = 3/4 the mapped function is continued by ODE integration.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_hyp_args(a, b, c, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let one_minus_z = 1.0 - z;
    let w = z / (z - 1.0);
    let one_minus_w = 1.0 / one_minus_z;
    let s1 = one_minus_z.ln();

    let mut best: Option<(f64, f64)> = None;
    let mut last_err = None;
    let mut consider = |r: Result<(f64, f64)>| match r {
        Ok((v, cond)) if v.is_finite() => {
            if best.map_or(true, |(_, c0)| cond < c0) {
                best = Some((v, cond));
            }
        }
        Ok(_) => {}
        Err(e) => last_err = Some(e),
    };

    let a_terminates = nonpositive_integer_degree(a).is_some() || nonpositive_integer_degree(c - b).is_some();
    let b_terminates = nonpositive_integer_degree(b).is_some() || nonpositive_integer_degree(c - a).is_some();
    if a_terminates || !b_terminates {
        consider(hyp_unit_interval(a, c - b, c, w, one_minus_w).map(|(y, k)| (one_minus_z.powf(-a) * y, k)));
    }
    // The b-form grows like (1−z)^{b−a} near w = 1; skip it where that overflows.
    if (b_terminates || (b - a) * s1 < 600.0) && !(a_terminates && !b_terminates) {
        consider(hyp_unit_interval(c - a, b, c, w, one_minus_w).map(|(y, k)| (one_minus_z.powf(-b) * y, k)));
    }
    if z >= -0.5 {
        consider(hyp_series(a, b, c, z));
    }
    match best {
        Some((v, cond)) if cond <= HYP_MAX_CONDITION => Ok(v),
        Some((_, cond)) => Err(Error::Convergence {
            what: "hyp2f1",
            detail: format!("cancellation ratio {cond:.3e} at ({a}, {b}; {c}; {z}) exceeds {HYP_MAX_CONDITION:e}"),
        }),
        None => Err(last_err.unwrap_or(Error::Convergence {
            what: "hyp2f1",
            detail: format!("no usable evaluation at ({a}, {b}; {c}; {z})"),
        })),
    }
}

/// dF/dz = (ab/c) F(a+1, b+1; c+1; z).
pub fn hyp2f1_deriv(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_hyp_args(a, b, c, z)?;
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    Ok(a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}
