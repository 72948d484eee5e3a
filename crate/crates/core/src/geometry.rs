//! Radial kernel of the model space forms M_κ^n, κ ≤ 0.

use crate::error::{domain, Error, Result};
use crate::exprdsl::{ParamBinding, ScalarExpr};
use crate::specfun::gamma;
use std::f64::consts::PI;

/// Below this value of √−κ·t the hyperbolic functions switch to Taylor series.
pub const TAYLOR_CUTOFF: f64 = 0.1;

/// Curvature bound κ ≤ 0, dimension n ≥ 2 and exponent p > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGeometry {
    kappa: f64,
    n: u32,
    p: f64,
}

impl ModelGeometry {
    pub fn new(kappa: f64, n: u32, p: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa > 0.0 {
            return Err(Error::Parameter(format!(
                "kappa = {kappa}: only nonpositive curvature is supported"
            )));
        }
        if n < 2 {
            return Err(Error::Parameter(format!("n = {n}: dimension must be at least 2")));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!("p = {p}: exponent must exceed 1")));
        }
        Ok(Self { kappa, n, p })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent p′ = p/(p−1).
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Same curvature and dimension, different exponent.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.kappa, self.n, p)
    }

    pub fn ct(&self, t: f64) -> Result<f64> {
        ct_k(self.kappa, t)
    }

    pub fn s(&self, t: f64) -> Result<f64> {
        s_k(self.kappa, t)
    }

    /// s_κ′(t) = cosh(√−κ t).
    pub fn s_prime(&self, t: f64) -> Result<f64> {
        s_prime_k(self.kappa, t)
    }

    pub fn d_deficit(&self, t: f64) -> Result<f64> {
        deficit_k(self.kappa, t)
    }

    /// s_κ(t)^{n−1}.
    pub fn volume_density(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain("volume_density", format!("t = {t} must be positive")));
        }
        Ok(self.s(t)?.powi(self.n as i32 - 1))
    }

    /// ω_n = π^{n/2}/Γ(1 + n/2), the volume of the Euclidean unit ball.
    pub fn omega_n(&self) -> f64 {
        let h = 0.5 * self.n as f64;
        PI.powf(h) / gamma(1.0 + h).expect("positive argument")
    }

    /// n·ω_n, the area of the unit sphere.
    pub fn sphere_area(&self) -> f64 {
        self.n as f64 * self.omega_n()
    }

    /// Volume n ω_n ∫_0^R s_κ^{n−1}.
    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(domain("ball_volume", format!("R = {r} must be positive and finite")));
        }
        if self.kappa == 0.0 {
            return Ok(self.omega_n() * r.powi(self.n as i32));
        }
        let a = (-self.kappa).sqrt();
        let m = self.n as usize - 1;
        Ok(self.sphere_area() * sinh_power_integral(m, a * r) / a.powi(self.n as i32))
    }

    /// Laplace comparison function L(t) of the given kind.
    pub fn comparison_l(&self, kind: &Comparison, t: f64, binding: &ParamBinding) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain("comparison_L", format!("t = {t} must be positive")));
        }
        let nm1 = self.n as f64 - 1.0;
        match kind {
            Comparison::ConstantCurvature => Ok(nm1 * self.ct(t)?),
            Comparison::ConstantFloor => {
                if self.kappa == 0.0 {
                    Err(Error::Parameter(
                        "constant_floor comparison needs kappa < 0".to_string(),
                    ))
                } else {
                    Ok(nm1 * (-self.kappa).sqrt())
                }
            }
            Comparison::Psi(psi) => {
                let (v, d) = psi.eval_d(t, binding)?;
                if !(v > 0.0) {
                    return Err(domain("comparison_L", format!("psi({t}) = {v} is not positive")));
                }
                Ok(nm1 * d / v)
            }
        }
    }
}

/// Kinds of Laplace comparison function.
#[derive(Debug, Clone, PartialEq)]
pub enum Comparison {
    /// (n−1) ct_κ(t), exact on the model space.
    ConstantCurvature,
    /// (n−1)√−κ, the McKean floor.
    ConstantFloor,
    /// (n−1) ψ′/ψ for a user-supplied ψ.
    Psi(ScalarExpr),
}

impl Comparison {
    pub fn tag(&self) -> &'static str {
        match self {
            Comparison::ConstantCurvature => "constant_curvature",
            Comparison::ConstantFloor => "constant_floor",
            Comparison::Psi(_) => "psi",
        }
    }
}

fn check_kappa(kappa: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa > 0.0 {
        return Err(Error::Parameter(format!(
            "kappa = {kappa}: only nonpositive curvature is supported"
        )));
    }
    Ok((-kappa).sqrt())
}

/// Radial variable ρ realising a one-dimensional profile on M_κ^n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialVariable {
    /// ρ = distance to a point; |∇ρ| = 1, Δρ = (n−1)ct_κ(ρ).
    Distance,
    /// ρ = R − r on the ball of radius R about a point; Δρ = −(n−1)ct_κ(R − ρ).
    DistanceToSphere { radius: f64 },
}

impl RadialVariable {
    /// Range of ρ.
    pub fn range(&self) -> (f64, f64) {
        match *self {
            Self::Distance => (0.0, f64::INFINITY),
            Self::DistanceToSphere { radius } => (0.0, radius),
        }
    }

    fn radius_of(&self, t: f64) -> f64 {
        match *self {
            Self::Distance => t,
            Self::DistanceToSphere { radius } => radius - t,
        }
    }

    /// Area of the level set {ρ = t}: n ω_n s_κ(r)^{n−1}.
    pub fn density(&self, geo: &ModelGeometry, t: f64) -> Result<f64> {
        let r = self.radius_of(t);
        if !(r > 0.0) {
            return Err(domain("density", format!("rho = {t} outside the range")));
        }
        Ok(geo.sphere_area() * geo.volume_density(r)?)
    }

    /// Δρ at ρ = t.
    pub fn laplacian(&self, geo: &ModelGeometry, t: f64) -> Result<f64> {
        let lap = (geo.n() as f64 - 1.0) * geo.ct(self.radius_of(t))?;
        Ok(match self {
            Self::Distance => lap,
            Self::DistanceToSphere { .. } => -lap,
        })
    }
}

/// ln s_κ(t), finite for arbitrarily large t.
pub fn ln_s_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t > 0.0) {
        return Err(domain("ln s", format!("t = {t} must be positive")));
    }
    let x = a * t;
    if a == 0.0 || x < 20.0 {
        return Ok(s_k(kappa, t)?.ln());
    }
    Ok(x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p() - a.ln())
}

/// ct_κ(t): 1/t for κ = 0, √−κ coth(√−κ t) for κ < 0.
pub fn ct_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t > 0.0) {
        return Err(domain("ct", format!("t = {t} must be positive")));
    }
    if a == 0.0 {
        return Ok(1.0 / t);
    }
    let x = a * t;
    if x < TAYLOR_CUTOFF {
        let x2 = x * x;
        let series = 1.0 + x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0))));
        return Ok(series / t);
    }
    Ok(a / x.tanh())
}

/// ct_κ′(t) = −κ − ct_κ(t)².
pub fn ct_prime_k(kappa: f64, t: f64) -> Result<f64> {
    let c = ct_k(kappa, t)?;
    Ok(-kappa - c * c)
}

/// s_κ(t): t for κ = 0, sinh(√−κ t)/√−κ for κ < 0.
pub fn s_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t >= 0.0) {
        return Err(domain("s", format!("t = {t} must be nonnegative")));
    }
    if a == 0.0 {
        return Ok(t);
    }
    let x = a * t;
    if x < TAYLOR_CUTOFF {
        let x2 = x * x;
        let series = 1.0
            + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 * (1.0 / 362_880.0))));
        return Ok(t * series);
    }
    Ok(x.sinh() / a)
}

/// s_κ′(t) = cosh(√−κ t).
pub fn s_prime_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t >= 0.0) {
        return Err(domain("s", format!("t = {t} must be nonnegative")));
    }
    Ok((a * t).cosh())
}

/// D_κ(t) = t ct_κ(t) − 1 with D_κ(0) = 0.
pub fn deficit_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t >= 0.0) {
        return Err(domain("D", format!("t = {t} must be nonnegative")));
    }
    if a == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let x = a * t;
    if x < TAYLOR_CUTOFF {
        return Ok(x * x * deficit_series_over_x2(x * x));
    }
    Ok(x / x.tanh() - 1.0)
}

/// D_κ(t)/t², finite at t = 0 where it equals −κ/3.
pub fn deficit_over_t2_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t >= 0.0) {
        return Err(domain("D", format!("t = {t} must be nonnegative")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let x = a * t;
    if x < TAYLOR_CUTOFF {
        return Ok(a * a * deficit_series_over_x2(x * x));
    }
    Ok((x / x.tanh() - 1.0) / (t * t))
}

/// D′_κ(t) = ct_κ + t ct_κ′.
pub fn deficit_prime_k(kappa: f64, t: f64) -> Result<f64> {
    let a = check_kappa(kappa)?;
    if !(t >= 0.0) {
        return Err(domain("D", format!("t = {t} must be nonnegative")));
    }
    if a == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let x = a * t;
    if x < TAYLOR_CUTOFF {
        // d/dt of a² t² (1/3 − x²/45 + 2x⁴/945 − x⁶/4725 + 2x⁸/93555).
        let x2 = x * x;
        let poly = 2.0 / 3.0 + x2 * (-4.0 / 45.0 + x2 * (12.0 / 945.0 + x2 * (-8.0 / 4725.0 + x2 * (20.0 / 93_555.0))));
        return Ok(a * x * poly);
    }
    let c = ct_k(kappa, t)?;
    Ok(c + t * (-kappa - c * c))
}

fn deficit_series_over_x2(x2: f64) -> f64 {
    1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * (2.0 / 93_555.0))))
}

/// ∫_0^X sinh^m(x) dx.
fn sinh_power_integral(m: usize, x: f64) -> f64 {
    if x < 1.0 {
        // sinh^m x = x^m (sinh x / x)^m, expanded as a power series in x².
        const K: usize = 30;
        let base: Vec<f64> = (0..K)
            .scan(1.0, |f, k| {
                let v = *f;
                *f /= ((2 * k + 2) * (2 * k + 3)) as f64;
                Some(v)
            })
            .collect();
        let mut coeffs = vec![0.0; K];
        coeffs[0] = 1.0;
        for _ in 0..m {
            let mut next = vec![0.0; K];
            for i in 0..K {
                if coeffs[i] == 0.0 {
                    continue;
                }
                for j in 0..K - i {
                    next[i + j] += coeffs[i] * base[j];
                }
            }
            coeffs = next;
        }
        let x2 = x * x;
        let mut acc = 0.0;
        let mut pw = x.powi(m as i32 + 1);
        for (k, c) in coeffs.iter().enumerate() {
            acc += c * pw / (m + 2 * k + 1) as f64;
            pw *= x2;
        }
        return acc;
    }
    // I_m = sinh^{m−1} cosh / m − (m−1)/m I_{m−2}.
    let (sh, ch) = (x.sinh(), x.cosh());
    let mut i_prev = x; // I_0
    let mut i_cur = ch - 1.0; // I_1
    if m == 0 {
        return i_prev;
    }
    let mut k = 1;
    while k < m {
        let kk = k + 1;
        let next = sh.powi(kk as i32 - 1) * ch / kk as f64 - (kk as f64 - 1.0) / kk as f64 * i_prev;
        i_prev = i_cur;
        i_cur = next;
        k += 1;
    }
    i_cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(kappa: f64, n: u32) -> ModelGeometry {
        ModelGeometry::new(kappa, n, 2.0).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelGeometry::new(0.5, 3, 2.0).is_err());
        assert!(ModelGeometry::new(0.0, 1, 2.0).is_err());
        assert!(ModelGeometry::new(0.0, 3, 1.0).is_err());
        assert!(geo(0.0, 3).ct(0.0).is_err());
        assert!(geo(-1.0, 3).s(-1.0).is_err());
    }

    #[test]
    fn flat_branches() {
        let g = geo(0.0, 3);
        assert_eq!(g.ct(2.0).unwrap(), 0.5);
        assert_eq!(g.s(3.0).unwrap(), 3.0);
        assert_eq!(g.d_deficit(7.0).unwrap(), 0.0);
        assert_eq!(g.volume_density(2.0).unwrap(), 4.0);
        assert_eq!(geo(0.0, 2).volume_density(5.0).unwrap(), 5.0);
    }

    #[test]
    fn hyperbolic_values_against_exponential_oracle() {
        // coth(1) and sinh(1) from exp(1) directly.
        let e = 1f64.exp();
        let coth1 = (e + 1.0 / e) / (e - 1.0 / e);
        let sinh1 = 0.5 * (e - 1.0 / e);
        let g = geo(-1.0, 2);
        assert!((g.ct(1.0).unwrap() - coth1).abs() < 1e-14);
        assert!((g.ct(1.0).unwrap() - 1.313_035_285_5).abs() < 1e-10);
        assert!((g.s(1.0).unwrap() - sinh1).abs() < 1e-14);
        assert!((g.d_deficit(1.0).unwrap() - (coth1 - 1.0)).abs() < 1e-14);
        assert!((g.volume_density(1.0).unwrap() - sinh1).abs() < 1e-14);
        assert_eq!(g.s(0.0).unwrap(), 0.0);
        let far = g.ct(50.0).unwrap();
        assert!((1.0..=1.0 + 1e-12).contains(&far));
    }

    #[test]
    fn taylor_branch_is_continuous() {
        for kappa in [-1.0, -2.0, -0.3] {
            let a: f64 = (-kappa as f64).sqrt();
            let t = TAYLOR_CUTOFF / a;
            let lo = t * (1.0 - 1e-12);
            let hi = t * (1.0 + 1e-12);
            for f in [ct_k, s_k, deficit_k, deficit_over_t2_k, deficit_prime_k] {
                let (x, y) = (f(kappa, lo).unwrap(), f(kappa, hi).unwrap());
                assert!((x - y).abs() <= 5e-12 * x.abs().max(1e-300), "{x} vs {y}");
            }
        }
        assert_eq!(deficit_k(-1.0, 0.0).unwrap(), 0.0);
        assert!((deficit_over_t2_k(-3.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deficit_derivative_matches_difference_quotient() {
        for &t in &[0.01, 0.05, 0.3, 2.0] {
            let h = 1e-6 * t;
            let fd = (deficit_k(-1.0, t + h).unwrap() - deficit_k(-1.0, t - h).unwrap()) / (2.0 * h);
            assert!((fd - deficit_prime_k(-1.0, t).unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn ball_volumes() {
        assert!((geo(0.0, 2).ball_volume(1.0).unwrap() - PI).abs() < 1e-14);
        assert!((geo(0.0, 3).ball_volume(2.0).unwrap() - 4.0 * PI / 3.0 * 8.0).abs() < 1e-12);
        let e = 1f64.exp();
        let cosh1 = 0.5 * (e + 1.0 / e);
        let v = geo(-1.0, 2).ball_volume(1.0).unwrap();
        assert!((v - 2.0 * PI * (cosh1 - 1.0)).abs() < 1e-13);
        assert!((v - 3.412_276_265).abs() < 1e-8);
    }

    #[test]
    fn comparison_functions() {
        let b = ParamBinding::new();
        let g = geo(0.0, 3);
        assert_eq!(g.comparison_l(&Comparison::ConstantCurvature, 1.0, &b).unwrap(), 2.0);
        assert!(g.comparison_l(&Comparison::ConstantFloor, 1.0, &b).is_err());
        let h = geo(-1.0, 4);
        assert_eq!(h.comparison_l(&Comparison::ConstantFloor, 9.0, &b).unwrap(), 3.0);
        let psi = Comparison::Psi(ScalarExpr::parse("sinh(t)").unwrap());
        let v = geo(-1.0, 2).comparison_l(&psi, 1.0, &b).unwrap();
        assert!((v - 1.0 / 1f64.tanh()).abs() < 1e-14);
        let neg = Comparison::Psi(ScalarExpr::parse("-t").unwrap());
        assert!(g.comparison_l(&neg, 1.0, &b).is_err());
    }
}
