//! Radial test functions, integral margins of Hardy-type inequalities,
//! sharpness sweeps and the radial Dirichlet eigenvalue.

use crate::catalog::Instance;
use crate::error::{Error, Result};
use crate::exprdsl::{ParamBinding, ScalarExpr};
use crate::geometry::{deficit_k, ln_s_k, ModelGeometry, RadialVariable};
use crate::quadrature::{integrate, QuadOptions, QuadResult};
use rayon::prelude::*;

/// Smallest admissible inner radius of a power cutoff.
pub const MIN_CUTOFF_RADIUS: f64 = 1e-100;

#[derive(Debug, Clone)]
pub enum TestKind {
    /// (1 − x²)² with x = (t − center)/width, zero outside |x| < 1.
    CompactBump { center: f64, width: f64 },
    /// t^{−d+ε} φ(ln t), φ a trapezoid in ln t rising on [ln r0, ln r1] and
    /// falling on [ln r2, ln R].
    PowerCutoff { decay: f64, eps: f64, r0: f64, r: f64 },
    /// exp(−t^γ/p).
    Gaussian { gamma: f64, p: f64 },
    /// (1 + t^γ)^e.
    Talenti { gamma: f64, exponent: f64 },
    /// User profile in t, supported in [0, hi].
    Dsl { expr: ScalarExpr, binding: ParamBinding, hi: f64 },
}

/// Radial profile u(λt).
#[derive(Debug, Clone)]
pub struct RadialTestFunction {
    pub kind: TestKind,
    pub scale: f64,
}

impl RadialTestFunction {
    fn new(kind: TestKind) -> Self {
        Self { kind, scale: 1.0 }
    }

    pub fn compact_bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !(center > 0.0) || !center.is_finite() || !width.is_finite() {
            return Err(Error::Parameter(format!("bump center {center}, width {width}")));
        }
        Ok(Self::new(TestKind::CompactBump { center, width }))
    }

    /// Cutoff of t^{−d+ε} between r0 and R.
    pub fn power_cutoff(decay: f64, eps: f64, r0: f64, r: f64) -> Result<Self> {
        if !(r0 >= MIN_CUTOFF_RADIUS) || !(r > r0) || !r.is_finite() {
            return Err(Error::Parameter(format!(
                "power cutoff needs {MIN_CUTOFF_RADIUS:e} <= r0 < R < inf, got r0 = {r0}, R = {r}"
            )));
        }
        if !decay.is_finite() || !eps.is_finite() {
            return Err(Error::Parameter("power cutoff exponents must be finite".into()));
        }
        Ok(Self::new(TestKind::PowerCutoff { decay, eps, r0, r }))
    }

    /// exp(−t^γ/p) with γ = 1 + α/(p−1).
    pub fn gaussian(alpha: f64, p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::Parameter(format!("p = {p} must exceed 1")));
        }
        let gamma = 1.0 + alpha / (p - 1.0);
        if !(gamma > 0.0) {
            return Err(Error::Parameter(format!("alpha = {alpha} gives gamma = {gamma} <= 0")));
        }
        Ok(Self::new(TestKind::Gaussian { gamma, p }))
    }

    /// (1 + t^γ)^{(p−1)/(p−r)} with γ = 1 + α/(p−1).
    pub fn talenti(alpha: f64, p: f64, r: f64) -> Result<Self> {
        if !(p > 1.0) || !(r > p) {
            return Err(Error::Parameter(format!("talenti profile needs r > p > 1, got p = {p}, r = {r}")));
        }
        let gamma = 1.0 + alpha / (p - 1.0);
        if !(gamma > 0.0) {
            return Err(Error::Parameter(format!("alpha = {alpha} gives gamma = {gamma} <= 0")));
        }
        Ok(Self::new(TestKind::Talenti { gamma, exponent: (p - 1.0) / (p - r) }))
    }

    /// Profile given by an expression in t, taken to vanish beyond `hi`.
    pub fn dsl(expr: ScalarExpr, binding: ParamBinding, hi: f64) -> Result<Self> {
        if !(hi > 0.0) || !hi.is_finite() {
            return Err(Error::Parameter(format!("support bound {hi} must be positive and finite")));
        }
        let end = expr.eval(hi, &binding)?;
        let peak = (1..=64)
            .map(|k| expr.eval(hi * k as f64 / 64.0, &binding).map(f64::abs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if end.abs() > 1e-10 * (1.0 + peak) {
            return Err(Error::Contract(format!("u({hi}) = {end} must vanish at the end of the support")));
        }
        Ok(Self::new(TestKind::Dsl { expr, binding, hi }))
    }

    /// u(λt).
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Parameter(format!("scale {lambda} must be positive")));
        }
        Ok(Self { kind: self.kind.clone(), scale: self.scale * lambda })
    }

    fn unscaled_support(&self) -> (f64, f64) {
        match &self.kind {
            TestKind::CompactBump { center, width } => ((center - width).max(0.0), center + width),
            TestKind::PowerCutoff { r0, r, .. } => (*r0, *r),
            TestKind::Gaussian { .. } | TestKind::Talenti { .. } => (0.0, f64::INFINITY),
            TestKind::Dsl { hi, .. } => (0.0, *hi),
        }
    }

    /// Closed interval outside which u vanishes.
    pub fn support(&self) -> (f64, f64) {
        let (a, b) = self.unscaled_support();
        (a / self.scale, b / self.scale)
    }

    /// Points where u is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let raw = match &self.kind {
            TestKind::CompactBump { center, .. } => vec![*center],
            TestKind::PowerCutoff { r0, r, .. } => {
                let (r1, r2) = cutoff_corners(*r0, *r);
                vec![r1, r2]
            }
            _ => vec![],
        };
        raw.into_iter().map(|x| x / self.scale).collect()
    }

    /// (u(t), u′(t)).
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let x = self.scale * t;
        let (u, du) = self.eval_unscaled(x)?;
        Ok((u, self.scale * du))
    }

    fn eval_unscaled(&self, t: f64) -> Result<(f64, f64)> {
        match &self.kind {
            TestKind::CompactBump { center, width } => {
                let x = (t - center) / width;
                if x.abs() >= 1.0 {
                    return Ok((0.0, 0.0));
                }
                let b = 1.0 - x * x;
                Ok((b * b, -4.0 * x * b / width))
            }
            TestKind::PowerCutoff { decay, eps, r0, r } => {
                if t <= *r0 || t >= *r {
                    return Ok((0.0, 0.0));
                }
                let (phi, dphi) = trapezoid(t.ln(), r0.ln(), r.ln());
                let e = eps - decay;
                let pw = t.powf(e);
                Ok((pw * phi, pw / t * (e * phi + dphi)))
            }
            TestKind::Gaussian { gamma, p } => {
                let tg = t.powf(*gamma);
                let u = (-tg / p).exp();
                if u == 0.0 {
                    return Ok((0.0, 0.0));
                }
                Ok((u, -(gamma / p) * t.powf(gamma - 1.0) * u))
            }
            TestKind::Talenti { gamma, exponent } => {
                let tg = t.powf(*gamma);
                let base = 1.0 + tg;
                Ok((base.powf(*exponent), exponent * gamma * t.powf(gamma - 1.0) * base.powf(exponent - 1.0)))
            }
            TestKind::Dsl { expr, binding, hi } => {
                if t >= *hi {
                    return Ok((0.0, 0.0));
                }
                expr.eval_d(t, binding)
            }
        }
    }
}

fn cutoff_corners(r0: f64, r: f64) -> (f64, f64) {
    let (l0, l3) = (r0.ln(), r.ln());
    let q = 0.25 * (l3 - l0);
    ((l0 + q).exp(), (l3 - q).exp())
}

/// Trapezoid in s on [s0, s3] with corners at the quarter points: (φ, dφ/ds).
fn trapezoid(s: f64, s0: f64, s3: f64) -> (f64, f64) {
    let q = 0.25 * (s3 - s0);
    if s <= s0 || s >= s3 {
        (0.0, 0.0)
    } else if s < s0 + q {
        ((s - s0) / q, 1.0 / q)
    } else if s > s3 - q {
        ((s3 - s) / q, -1.0 / q)
    } else {
        (1.0, 0.0)
    }
}

/// Geometry together with the radial variable profiles are written in.
#[derive(Debug, Clone, Copy)]
pub struct RadialSetting {
    pub geo: ModelGeometry,
    pub rho: RadialVariable,
}

impl RadialSetting {
    pub fn centered(geo: ModelGeometry) -> Self {
        Self { geo, rho: RadialVariable::Distance }
    }

    pub fn of(instance: &Instance) -> Self {
        Self { geo: instance.spec.geo, rho: instance.rho }
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

/// ∫_0^R f(t) n ω_n s_κ(t)^{n−1} dt; a negative `singular_hint` grades the mesh toward 0.
pub fn radial_integral<F>(geo: &ModelGeometry, f: F, r: f64, singular_hint: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let area = geo.sphere_area();
    integrate(
        |t| {
            let v = f(t)?;
            if v == 0.0 {
                return Ok(0.0);
            }
            Ok(v * area * geo.volume_density(t)?)
        },
        0.0,
        r,
        &[],
        singular_hint < 0.0,
        &quad_opts(),
    )
}

/// ∫ g(t, u, u′) dμ over the support of u.
fn integrate_profile<F>(setting: &RadialSetting, u: &RadialTestFunction, g: F) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    let (mut a, mut b) = u.support();
    let (lo, hi) = setting.rho.range();
    a = a.max(lo);
    b = b.min(hi);
    if !(b > a) {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    integrate(
        |t| {
            let (v, dv) = u.eval(t)?;
            if v == 0.0 && dv == 0.0 {
                return Ok(0.0);
            }
            let x = g(t, v, dv)?;
            if x == 0.0 {
                return Ok(0.0);
            }
            Ok(x * setting.rho.density(&setting.geo, t)?)
        },
        a,
        b,
        &u.breakpoints(),
        a == 0.0,
        &quad_opts(),
    )
}

/// lhs − rhs relative to |rhs|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityMargin {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Absolute quadrature error estimate of lhs − rhs.
    pub quad_error: f64,
}

impl InequalityMargin {
    pub fn new(lhs: f64, rhs: f64, quad_error: f64) -> Self {
        let scale = rhs.abs().max(1e-300);
        Self { lhs, rhs, margin: (lhs - rhs) / scale, quad_error }
    }

    /// Relative error bound on `margin`.
    pub fn relative_error(&self) -> f64 {
        self.quad_error / self.rhs.abs().max(1e-300)
    }

    /// Negative beyond ten times the error estimate.
    pub fn is_violated(&self) -> bool {
        self.margin < -10.0 * (self.relative_error() + 1e-12)
    }
}

/// J^{1−p}|I|^p − (pI − (p−1)J), nonnegative by Young's inequality.
pub fn young_gap(i: f64, j: f64, p: f64) -> f64 {
    j.powf(1.0 - p) * i.abs().powf(p) - (p * i - (p - 1.0) * j)
}

/// Young gap nonnegative up to 1e−9 relative to the terms involved.
pub fn young_consistent(i: f64, j: f64, p: f64) -> bool {
    if !(j > 0.0) {
        return false;
    }
    let scale = j.powf(1.0 - p) * i.abs().powf(p) + p * i.abs() + (p - 1.0) * j;
    young_gap(i, j, p) >= -1e-9 * scale.max(1e-300)
}

/// Entry form: ∫ w|u′|^p dμ ≥ ∫ W w |u|^p dμ.
pub fn additive_margin(instance: &Instance, u: &RadialTestFunction) -> Result<InequalityMargin> {
    let spec = &instance.spec;
    let setting = RadialSetting::of(instance);
    let p = spec.geo.p();
    let b = spec.binding();
    check_within(u, spec.lo, spec.hi)?;
    check_comparison(instance, &setting, u)?;
    let lhs = integrate_profile(&setting, u, |t, _, du| {
        if du == 0.0 {
            return Ok(0.0);
        }
        Ok(spec.w.eval(t, &b)? * du.abs().powf(p))
    })?;
    let rhs = integrate_profile(&setting, u, |t, v, _| {
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(spec.big_w.eval(t, &b)? * spec.w.eval(t, &b)? * v.abs().powf(p))
    })?;
    Ok(InequalityMargin::new(lhs.value, rhs.value, lhs.error + rhs.error))
}

/// The radial realization must satisfy G·(Δρ − L) ≥ 0 on the support of u.
fn check_comparison(instance: &Instance, setting: &RadialSetting, u: &RadialTestFunction) -> Result<()> {
    let spec = &instance.spec;
    let b = spec.binding();
    let (lo, hi) = u.support();
    let (lo, hi) = (lo.max(spec.lo), hi.min(spec.hi).min(setting.rho.range().1));
    for k in 1..64 {
        let t = lo + (hi - lo) * k as f64 / 64.0;
        let g = instance.g.eval(t, &b)?;
        let lap = setting.rho.laplacian(&setting.geo, t)?;
        let l = spec.l_value(t, &b)?;
        if g * (lap - l) < -1e-9 * g.abs() * (lap.abs() + l.abs()) {
            return Err(Error::Hypothesis(format!(
                "radial realization violates the Laplacian comparison at t = {t}: G = {g}, Laplacian {lap} vs L = {l}"
            )));
        }
    }
    Ok(())
}

fn check_within(u: &RadialTestFunction, lo: f64, hi: f64) -> Result<()> {
    let (a, b) = u.support();
    if a < lo || b > hi {
        return Err(Error::Hypothesis(format!(
            "test function supported in [{a}, {b}], outside the interval ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// Weight w, vector-field profile G and nonlinearity H(s), each an expression
/// in the variable `t` (H is evaluated at t = s).
#[derive(Debug, Clone)]
pub struct GenericPair {
    pub w: ScalarExpr,
    pub g: ScalarExpr,
    pub h: ScalarExpr,
    pub binding: ParamBinding,
}

/// Integrals entering the generic margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    /// ∫ w|u′|^p dμ.
    pub energy: f64,
    /// ∫ [(G′w + Gw′) + G w Δρ] H(u) dμ.
    pub i: f64,
    /// ∫ |G|^{p′} w |H′(u)|^{p′} dμ.
    pub j: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericMargin {
    pub margin: InequalityMargin,
    pub functionals: Functionals,
    pub young_consistent: bool,
}

fn full_binding(geo: &ModelGeometry, b: &ParamBinding) -> ParamBinding {
    let mut out = b.clone();
    out.set("kappa", geo.kappa());
    out.set("n", geo.n() as f64);
    out.set("p", geo.p());
    out
}

/// Evaluates the generic functionals; H must satisfy H(0) = H′(0) = 0.
pub fn functionals(setting: &RadialSetting, pair: &GenericPair, u: &RadialTestFunction) -> Result<Functionals> {
    let geo = &setting.geo;
    let p = geo.p();
    let pc = geo.p_conj();
    let b = full_binding(geo, &pair.binding);
    let (h0, dh0) = pair.h.eval_d(0.0, &b)?;
    if h0.abs() > 1e-14 || dh0.abs() > 1e-12 {
        return Err(Error::Contract(format!("H(0) = {h0}, H'(0) = {dh0}; both must vanish")));
    }
    let energy = integrate_profile(setting, u, |t, _, du| {
        if du == 0.0 {
            return Ok(0.0);
        }
        Ok(pair.w.eval(t, &b)? * du.abs().powf(p))
    })?;
    let i = integrate_profile(setting, u, |t, v, _| {
        let h = pair.h.eval(v, &b)?;
        if h == 0.0 {
            return Ok(0.0);
        }
        let (g, dg) = pair.g.eval_d(t, &b)?;
        let (w, dw) = pair.w.eval_d(t, &b)?;
        let lap = setting.rho.laplacian(geo, t)?;
        Ok((dg * w + g * dw + g * w * lap) * h)
    })?;
    let j = integrate_profile(setting, u, |t, v, _| {
        let (_, dh) = pair.h.eval_d(v, &b)?;
        if dh == 0.0 {
            return Ok(0.0);
        }
        let g = pair.g.eval(t, &b)?;
        Ok(g.abs().powf(pc) * pair.w.eval(t, &b)? * dh.abs().powf(pc))
    })?;
    Ok(Functionals { energy: energy.value, i: i.value, j: j.value, error: energy.error + i.error + j.error })
}

/// ∫ w|u′|^p ≥ pI − (p−1)J.
pub fn additive_margin_generic(
    setting: &RadialSetting,
    pair: &GenericPair,
    u: &RadialTestFunction,
) -> Result<GenericMargin> {
    let p = setting.geo.p();
    let f = functionals(setting, pair, u)?;
    let rhs = p * f.i - (p - 1.0) * f.j;
    Ok(GenericMargin {
        margin: InequalityMargin::new(f.energy, rhs, f.error * (1.0 + p)),
        functionals: f,
        young_consistent: young_consistent(f.i, f.j, p),
    })
}

/// ∫ w|u′|^p ≥ |I|^p / J^{p−1}.
pub fn multiplicative_margin_generic(
    setting: &RadialSetting,
    pair: &GenericPair,
    u: &RadialTestFunction,
) -> Result<GenericMargin> {
    let p = setting.geo.p();
    let f = functionals(setting, pair, u)?;
    require_positive_j(f.j, f.error)?;
    let rhs = f.i.abs().powf(p) / f.j.powf(p - 1.0);
    let rel = f.error / f.i.abs().max(1e-300) * p + f.error / f.j * (p - 1.0);
    Ok(GenericMargin {
        margin: InequalityMargin::new(f.energy, rhs, f.error + rel * rhs),
        functionals: f,
        young_consistent: young_consistent(f.i, f.j, p),
    })
}

fn require_positive_j(j: f64, err: f64) -> Result<()> {
    if !(j > err) {
        return Err(Error::Numeric(format!("J = {j} within quadrature error {err}: margin indeterminate")));
    }
    Ok(())
}

/// Multiplicative inequalities with a closed-form vector field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplicativeMode {
    /// G = t^α, H = |s|^p/p, w = 1.
    UncertaintyPrinciple { alpha: f64 },
    /// G = t^α, H = |s|^r/r, w = 1.
    Ckn { alpha: f64, r: f64 },
    /// p = 2, G = 1, H = s_c(s)², κ < 0.
    CknFura { c: f64 },
}

impl MultiplicativeMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::UncertaintyPrinciple { .. } => "uncertainty_principle",
            Self::Ckn { .. } => "ckn",
            Self::CknFura { .. } => "ckn_fura",
        }
    }

    /// Constant the achieved quotient is compared with.
    pub fn sharp_constant(&self, geo: &ModelGeometry) -> f64 {
        let n = geo.n() as f64;
        match *self {
            Self::UncertaintyPrinciple { alpha } => (n + alpha - 1.0) / geo.p(),
            Self::Ckn { alpha, r } => (n + alpha - 1.0) / r,
            Self::CknFura { .. } => 1.0,
        }
    }

    pub fn check_hypotheses(&self, geo: &ModelGeometry) -> Result<()> {
        let (n, p) = (geo.n() as f64, geo.p());
        match *self {
            Self::UncertaintyPrinciple { alpha } => {
                if !(p < n && alpha > 1.0 - p && alpha <= 1.0) {
                    return Err(Error::Hypothesis(format!(
                        "uncertainty principle needs 1 < p < n and 1 - p < alpha <= 1, got n = {n}, p = {p}, alpha = {alpha}"
                    )));
                }
            }
            Self::Ckn { alpha, r } => {
                let lhs = p * (n + alpha - 1.0);
                let mid = r * (n - p);
                if !(r > p && alpha + p > 1.0 && lhs > mid && mid > 0.0 && alpha <= 1.0) {
                    return Err(Error::Hypothesis(format!(
                        "CKN needs r > p > 1, alpha + p > 1, alpha <= 1 and p(n+alpha-1) > r(n-p) > 0, got n = {n}, p = {p}, r = {r}, alpha = {alpha}"
                    )));
                }
            }
            Self::CknFura { .. } => {
                if p != 2.0 || !(geo.kappa() < 0.0) {
                    return Err(Error::Hypothesis(format!(
                        "this inequality needs p = 2 and kappa < 0, got p = {p}, kappa = {}",
                        geo.kappa()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplicativeReport {
    pub margin: InequalityMargin,
    pub i: f64,
    pub j: f64,
    /// Achieved quotient, to be compared with `sharp_constant`.
    pub quotient: f64,
    pub sharp_constant: f64,
    pub young_consistent: bool,
}

/// s_c(s): sinh(√−c s)/√−c, s or sin(√c s)/√c.
pub fn s_c(c: f64, s: f64) -> f64 {
    if c < 0.0 {
        let a = (-c).sqrt();
        (a * s).sinh() / a
    } else if c == 0.0 {
        s
    } else {
        let a = c.sqrt();
        (a * s).sin() / a
    }
}

/// Margin of a multiplicative inequality on the centred model space.
pub fn multiplicative_margin(
    geo: &ModelGeometry,
    mode: MultiplicativeMode,
    u: &RadialTestFunction,
) -> Result<MultiplicativeReport> {
    mode.check_hypotheses(geo)?;
    let setting = RadialSetting::centered(*geo);
    let (n, p) = (geo.n() as f64, geo.p());
    let pc = geo.p_conj();
    let kappa = geo.kappa();
    let sharp = mode.sharp_constant(geo);
    let energy = integrate_profile(&setting, u, |_, _, du| Ok(du.abs().powf(p)))?;
    match mode {
        MultiplicativeMode::UncertaintyPrinciple { alpha } | MultiplicativeMode::Ckn { alpha, .. } => {
            let (q, jq) = match mode {
                MultiplicativeMode::Ckn { r, .. } => (r, pc * (r - 1.0)),
                _ => (p, p),
            };
            let k = integrate_profile(&setting, u, |t, v, _| {
                let d = deficit_k(kappa, t)?;
                Ok((1.0 + (n - 1.0) * d / (n + alpha - 1.0)) * t.powf(alpha - 1.0) * v.abs().powf(q))
            })?;
            let j = integrate_profile(&setting, u, |t, v, _| Ok(t.powf(pc * alpha) * v.abs().powf(jq)))?;
            require_positive_j(j.value, j.error)?;
            let i = sharp * k.value;
            let lhs = energy.value.powf(1.0 / p) * j.value.powf(1.0 / pc);
            let rel = energy.error / energy.value.max(1e-300) / p + j.error / j.value / pc;
            let err = lhs * rel + sharp * k.error;
            let quotient = lhs / k.value;
            Ok(MultiplicativeReport {
                margin: InequalityMargin::new(lhs, i, err),
                i,
                j: j.value,
                quotient,
                sharp_constant: sharp,
                young_consistent: young_consistent(i, j.value, p),
            })
        }
        MultiplicativeMode::CknFura { c } => {
            let a = integrate_profile(&setting, u, |_, v, _| Ok(s_c(c, v).powi(2)))?;
            let b = integrate_profile(&setting, u, |_, v, _| Ok(s_c(c, 2.0 * v).powi(2)))?;
            require_positive_j(b.value, b.error)?;
            let i = (n - 1.0) * (-kappa).sqrt() * a.value;
            let rhs = i * i / b.value;
            let err = energy.error + rhs * (2.0 * a.error / a.value.max(1e-300) + b.error / b.value);
            Ok(MultiplicativeReport {
                margin: InequalityMargin::new(energy.value, rhs, err),
                i,
                j: b.value,
                quotient: energy.value / rhs,
                sharp_constant: sharp,
                young_consistent: young_consistent(i, b.value, 2.0),
            })
        }
    }
}

/// ∫|u0′|^p dμ against (γ/p)^p ∫ t^{p′α} u0^p dμ for the gaussian u0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
}

pub fn extremal_identity_check(geo: &ModelGeometry, alpha: f64) -> Result<ExtremalCheck> {
    let (p, kappa) = (geo.p(), geo.kappa());
    let gamma = 1.0 + alpha / (p - 1.0);
    // Integrability of u0 and its energy: γ > 0 on R^n, γ > 1 when κ < 0.
    let floor = if kappa < 0.0 { 1.0 } else { 0.0 };
    if !(gamma > floor) || !alpha.is_finite() {
        return Err(Error::Hypothesis(format!(
            "extremal identity needs gamma = 1 + alpha/(p-1) > {floor} for kappa = {kappa}, got gamma = {gamma} (alpha = {alpha}, p = {p})"
        )));
    }
    let u = RadialTestFunction::gaussian(alpha, p)?;
    let pc = geo.p_conj();
    let setting = RadialSetting::centered(*geo);
    let lhs = integrate_profile(&setting, &u, |_, _, du| Ok(du.abs().powf(p)))?;
    let rhs = integrate_profile(&setting, &u, |t, v, _| Ok(t.powf(pc * alpha) * v.abs().powf(p)))?;
    let rhs = (gamma / p).powf(p) * rhs.value;
    Ok(ExtremalCheck { lhs: lhs.value, rhs, discrepancy: (lhs.value - rhs).abs() / rhs.abs() })
}

/// Inequality a sweep is run against.
#[derive(Debug, Clone)]
pub enum SweepTarget {
    Entry(Box<Instance>),
    Multiplicative { geo: ModelGeometry, mode: MultiplicativeMode },
    /// Generic (G, H) pair in additive or multiplicative form.
    Generic { setting: RadialSetting, pair: Box<GenericPair>, multiplicative: bool },
}

impl SweepTarget {
    pub fn name(&self) -> String {
        match self {
            Self::Entry(inst) => inst.name.to_string(),
            Self::Multiplicative { mode, .. } => mode.name().to_string(),
            Self::Generic { multiplicative: true, .. } => "generic_multiplicative".to_string(),
            Self::Generic { .. } => "generic_additive".to_string(),
        }
    }

    pub fn sharp_constant(&self) -> f64 {
        match self {
            Self::Entry(inst) => inst.sharp_constant,
            Self::Multiplicative { geo, mode } => mode.sharp_constant(geo),
            Self::Generic { .. } => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub param: f64,
    pub u: RadialTestFunction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub family_param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub quad_error: f64,
    /// Achieved quotient, comparable with the sharp constant.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedMember {
    pub family_param: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub inequality: String,
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<SkippedMember>,
    pub min_margin: f64,
    /// Infimum of the achieved quotient over the family.
    pub ratio_extremum: f64,
    pub sharp_constant: f64,
}

fn evaluate_member(target: &SweepTarget, u: &RadialTestFunction) -> Result<(InequalityMargin, f64)> {
    match target {
        SweepTarget::Entry(inst) => {
            if inst.spec.homogeneity.is_some() && u.support().0 <= 0.0 {
                return Err(Error::Hypothesis("test function must vanish near the origin".into()));
            }
            let m = additive_margin(inst, u)?;
            Ok((m, inst.sharp_constant * m.lhs / m.rhs))
        }
        SweepTarget::Multiplicative { geo, mode } => {
            let r = multiplicative_margin(geo, *mode, u)?;
            Ok((r.margin, r.quotient))
        }
        SweepTarget::Generic { setting, pair, multiplicative } => {
            let r = if *multiplicative {
                multiplicative_margin_generic(setting, pair, u)?
            } else {
                additive_margin_generic(setting, pair, u)?
            };
            if !(r.margin.rhs > 0.0) {
                return Err(Error::Numeric(format!(
                    "right-hand side {} is not positive, no quotient to report",
                    r.margin.rhs
                )));
            }
            Ok((r.margin, r.margin.lhs / r.margin.rhs))
        }
    }
}

/// Evaluates every family member; inadmissible members are skipped with a note.
pub fn sharpness_sweep(target: &SweepTarget, family: &[FamilyMember]) -> SweepReport {
    let results: Vec<_> = family
        .par_iter()
        .map(|m| (m.param, evaluate_member(target, &m.u)))
        .collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (param, r) in results {
        match r {
            Ok((m, ratio)) if m.margin.is_finite() && ratio.is_finite() => rows.push(SweepRow {
                family_param: param,
                lhs: m.lhs,
                rhs: m.rhs,
                margin: m.margin,
                quad_error: m.quad_error,
                ratio,
            }),
            Ok(_) => skipped.push(SkippedMember { family_param: param, note: "non-finite margin".into() }),
            Err(e) => skipped.push(SkippedMember { family_param: param, note: e.to_string() }),
        }
    }
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let ratio_extremum = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    SweepReport {
        inequality: target.name(),
        rows,
        skipped,
        min_margin,
        ratio_extremum,
        sharp_constant: target.sharp_constant(),
    }
}

/// Power cutoffs t^{−d+ε} with d = (n+α−p)/p, one member per (ε, r0) pair.
/// The family parameter is ε + 1/ln(R/r0).
pub fn power_cutoff_family(n: f64, p: f64, alpha: f64, eps: &[f64], r0: &[f64], r: f64) -> Result<Vec<FamilyMember>> {
    let d = (n + alpha - p) / p;
    let mut out = Vec::new();
    for &e in eps {
        for &a in r0 {
            out.push(FamilyMember {
                param: e + 1.0 / (r / a).ln(),
                u: RadialTestFunction::power_cutoff(d, e, a, r)?,
            });
        }
    }
    Ok(out)
}

/// Result of the radial Dirichlet eigenvalue solve on B(R).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    /// Richardson extrapolation (4λ(2N) − λ(N))/3.
    pub lambda1: f64,
    pub lambda_coarse: f64,
    pub lambda_fine: f64,
    pub cells: usize,
    /// (λ(N) − λ(2N)) / (λ(2N) − λ(4N)).
    pub convergence_ratio: f64,
    /// (t_i, v_i) on the 2N grid, normalised to max v = 1.
    pub eigenfunction: Vec<(f64, f64)>,
}

/// Smallest Dirichlet eigenvalue of −Δ (p = 2) for radial functions on B(R).
pub fn spectral_lambda1(geo: &ModelGeometry, r: f64, cells: usize) -> Result<SpectralResult> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Parameter(format!("R = {r} must be positive and finite")));
    }
    if cells < 200 {
        return Err(Error::Parameter(format!("N = {cells}: at least 200 cells required")));
    }
    let (l1, _) = radial_dirichlet(geo, r, cells, false)?;
    let (l2, v) = radial_dirichlet(geo, r, 2 * cells, true)?;
    let (l4, _) = radial_dirichlet(geo, r, 4 * cells, false)?;
    let ratio = (l1 - l2) / (l2 - l4);
    Ok(SpectralResult {
        lambda1: (4.0 * l2 - l1) / 3.0,
        lambda_coarse: l1,
        lambda_fine: l2,
        cells,
        convergence_ratio: ratio,
        eigenfunction: v,
    })
}

/// Cell-centred finite volumes for −(σv′)′ = λσv, σ = s_κ^{n−1}, symmetrised
/// by σ^{1/2}; returns λ and optionally the eigenvector.
fn radial_dirichlet(geo: &ModelGeometry, r: f64, cells: usize, want_vector: bool) -> Result<(f64, Vec<(f64, f64)>)> {
    let h = r / cells as f64;
    let m = geo.n() as f64 - 1.0;
    let kappa = geo.kappa();
    let ln_sigma = |t: f64| -> Result<f64> { Ok(m * ln_s_k(kappa, t)?) };
    let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let ls: Vec<f64> = centers.iter().map(|&t| ln_sigma(t)).collect::<Result<_>>()?;
    // Faces 1..=cells; face 0 sits at the origin where σ = 0.
    let lf: Vec<f64> = (1..=cells).map(|i| ln_sigma(i as f64 * h)).collect::<Result<_>>()?;
    let h2 = h * h;
    let mut diag = vec![0.0; cells];
    let mut off = vec![0.0; cells - 1];
    for i in 0..cells {
        let left = if i == 0 { 0.0 } else { (lf[i - 1] - ls[i]).exp() };
        let right_face = (lf[i] - ls[i]).exp();
        let right = if i + 1 == cells { 2.0 * right_face } else { right_face };
        diag[i] = (left + right) / h2;
        if i + 1 < cells {
            off[i] = -(lf[i] - 0.5 * (ls[i] + ls[i + 1])).exp() / h2;
        }
    }
    let lambda = smallest_eigenvalue(&diag, &off)?;
    if !want_vector {
        return Ok((lambda, Vec::new()));
    }
    let mut x = vec![1.0; cells];
    let shift = lambda * (1.0 - 1e-10);
    for _ in 0..3 {
        x = thomas(&diag, &off, shift, &x)?;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    let mut v: Vec<f64> = x.iter().zip(&ls).map(|(y, l)| y * (-0.5 * l).exp()).collect();
    let peak = v.iter().copied().fold(0.0_f64, |a, b| if b.abs() > a.abs() { b } else { a });
    v.iter_mut().for_each(|y| *y /= peak);
    Ok((lambda, centers.into_iter().zip(v).collect()))
}

/// Number of eigenvalues below x of the symmetric tridiagonal matrix.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            let prev = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn smallest_eigenvalue(diag: &[f64], off: &[f64]) -> Result<f64> {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let rad = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - rad);
        hi = hi.max(diag[i] + rad);
    }
    lo = lo.min(0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1e-300) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence { what: "Sturm bisection", detail: format!("bracket [{lo}, {hi}]") })
}

/// Solves (T − μI)x = b for symmetric tridiagonal T.
fn thomas(diag: &[f64], off: &[f64], mu: f64, b: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0] - mu;
    for i in 0..n {
        if i > 0 {
            denom = diag[i] - mu - off[i - 1] * c[i - 1];
        }
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Numeric("singular tridiagonal pivot".into()));
        }
        c[i] = if i + 1 < n { off[i] / denom } else { 0.0 };
        d[i] = (b[i] - if i > 0 { off[i - 1] * d[i - 1] } else { 0.0 }) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

/// Radial Euclidean bump used where a C¹ profile inside (a, b) is needed.
pub fn bump_inside(a: f64, b: f64) -> Result<RadialTestFunction> {
    RadialTestFunction::compact_bump(0.5 * (a + b), 0.5 * (b - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::instantiate;
    use std::f64::consts::PI;

    fn geo(kappa: f64, n: u32, p: f64) -> ModelGeometry {
        ModelGeometry::new(kappa, n, p).unwrap()
    }

    #[test]
    fn radial_integral_oracles() {
        let v = radial_integral(&geo(0.0, 2, 2.0), |t| Ok(t), 1.0, 0.0).unwrap().value;
        assert!((v - 2.0 * PI / 3.0).abs() < 1e-13, "{v}");
        let v = radial_integral(&geo(0.0, 3, 2.0), |_| Ok(1.0), 2.0, 0.0).unwrap().value;
        assert!((v - 4.0 * PI / 3.0 * 8.0).abs() < 1e-12, "{v}");
        let v = radial_integral(&geo(-1.0, 2, 2.0), |_| Ok(1.0), 1.0, 0.0).unwrap().value;
        assert!((v - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 1e-13, "{v}");
    }

    #[test]
    fn power_cutoff_quotient_matches_closed_form() {
        // For p = 2, ε = 0 the quotient is 1/4 + 12/Λ², Λ = ln(R/r0).
        let inst = instantiate(
            "hardy",
            &ParamBinding::new().with("kappa", 0.0).with("n", 3.0).with("p", 2.0).with("alpha", 0.0),
        )
        .unwrap();
        for r0 in [1e-6, 1e-20, 1e-60] {
            let u = RadialTestFunction::power_cutoff(0.5, 0.0, r0, 1.0).unwrap();
            let m = additive_margin(&inst, &u).unwrap();
            let lam = (1.0 / r0).ln();
            let q = inst.sharp_constant * m.lhs / m.rhs;
            assert!((q - (0.25 + 12.0 / (lam * lam))).abs() < 1e-9, "{r0}: {q}");
        }
    }

    #[test]
    fn hardy_cutoff_margin_nonnegative() {
        let inst = instantiate("hardy", &ParamBinding::new().with("n", 3.0).with("p", 2.0)).unwrap();
        let u = RadialTestFunction::power_cutoff(0.5, 0.1, 0.01, 1.0).unwrap();
        assert!(additive_margin(&inst, &u).unwrap().margin >= 0.0);
    }

    #[test]
    fn mckean_bump_rayleigh_quotient() {
        let inst = instantiate("mckean", &ParamBinding::new().with("kappa", -1.0).with("n", 2.0).with("p", 2.0))
            .unwrap();
        let u = bump_inside(0.5, 6.0).unwrap();
        let m = additive_margin(&inst, &u).unwrap();
        let setting = RadialSetting::of(&inst);
        let l2 = integrate_profile(&setting, &u, |_, v, _| Ok(v * v)).unwrap().value;
        assert!(m.lhs / l2 >= 0.25, "{}", m.lhs / l2);
    }

    #[test]
    fn quadratic_h_with_zero_field_gives_zero() {
        let setting = RadialSetting::centered(geo(-1.0, 3, 2.0));
        let pair = GenericPair {
            w: ScalarExpr::constant(1.0),
            g: ScalarExpr::constant(0.0),
            h: ScalarExpr::parse("t^2/2").unwrap(),
            binding: ParamBinding::new(),
        };
        let m = additive_margin_generic(&setting, &pair, &bump_inside(0.2, 2.0).unwrap()).unwrap();
        assert_eq!(m.margin.rhs, 0.0);
    }

    #[test]
    fn h_must_vanish_to_second_order() {
        let setting = RadialSetting::centered(geo(0.0, 3, 2.0));
        let pair = GenericPair {
            w: ScalarExpr::constant(1.0),
            g: ScalarExpr::constant(1.0),
            h: ScalarExpr::parse("t").unwrap(),
            binding: ParamBinding::new(),
        };
        let r = functionals(&setting, &pair, &bump_inside(0.2, 2.0).unwrap());
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn uncertainty_principle_gaussian_equality_and_scaling() {
        let g = geo(0.0, 3, 2.0);
        let mode = MultiplicativeMode::UncertaintyPrinciple { alpha: 1.0 };
        let u = RadialTestFunction::gaussian(1.0, 2.0).unwrap();
        let base = multiplicative_margin(&g, mode, &u).unwrap();
        assert!(base.margin.margin.abs() <= 1e-6, "{base:?}");
        for lam in [0.5, 2.0, 4.0] {
            let r = multiplicative_margin(&g, mode, &u.scaled(lam).unwrap()).unwrap();
            assert!((r.margin.margin - base.margin.margin).abs() <= 1e-8, "{lam}: {r:?}");
        }
    }

    #[test]
    fn ckn_talenti_attains_constant() {
        let g = geo(0.0, 3, 2.0);
        let mode = MultiplicativeMode::Ckn { alpha: 1.0, r: 3.0 };
        let u = RadialTestFunction::talenti(1.0, 2.0, 3.0).unwrap();
        let r = multiplicative_margin(&g, mode, &u).unwrap();
        assert!((r.quotient / r.sharp_constant - 1.0).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn extremal_identity() {
        for (k, n, p, a) in [(0.0, 3, 2.0, 1.0), (-1.0, 2, 2.0, 1.0), (-1.0, 4, 3.0, 0.5), (0.0, 3, 2.0, -0.5)] {
            let c = extremal_identity_check(&geo(k, n, p), a).unwrap();
            assert!(c.discrepancy <= 1e-8, "{c:?}");
        }
        assert!(matches!(extremal_identity_check(&geo(-1.0, 3, 2.0), 0.0), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn euclidean_disk_eigenvalue() {
        // j_{0,1}² = 5.783185962946784.
        let s = spectral_lambda1(&geo(0.0, 2, 2.0), 1.0, 200).unwrap();
        assert!((s.lambda1 / 5.783185962946784 - 1.0).abs() < 2e-3, "{s:?}");
        assert!(s.convergence_ratio >= 3.5, "{}", s.convergence_ratio);
        // π² on the unit ball of R³.
        let s = spectral_lambda1(&geo(0.0, 3, 2.0), 1.0, 200).unwrap();
        assert!((s.lambda1 / (PI * PI) - 1.0).abs() < 1e-5, "{}", s.lambda1);
    }

    #[test]
    fn hyperbolic_eigenvalue_large_ball() {
        let s = spectral_lambda1(&geo(-1.0, 2, 2.0), 40.0, 400).unwrap();
        assert!(s.lambda1 >= 0.25 && s.lambda1 <= 0.26, "{}", s.lambda1);
        // H³: λ₁(B_R) = 1 + π²/R².
        let s = spectral_lambda1(&geo(-1.0, 3, 2.0), 2.0, 200).unwrap();
        assert!((s.lambda1 - (1.0 + PI * PI / 4.0)).abs() < 1e-5, "{}", s.lambda1);
    }

    #[test]
    fn young_gap_is_nonnegative() {
        for (i, j, p) in [(1.0, 1.0, 2.0), (3.0, 0.5, 1.5), (-2.0, 4.0, 3.0)] {
            assert!(young_consistent(i, j, p));
        }
        assert!(young_gap(1.0, 1.0, 2.0).abs() < 1e-15);
    }
}
