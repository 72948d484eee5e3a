//! Riccati-pair residuals, grid certification, the equality IVP, the
//! Bessel ↔ Riccati maps and the one-parameter constant optimization.

use crate::error::{domain, Error, Result};
use crate::exprdsl::{fd_step_radial, ParamBinding, ScalarExpr};
use crate::geometry::{Comparison, ModelGeometry};
use crate::ode::{self, OdeOptions, Stop};
use crate::quadrature::{self, QuadOptions};
use rayon::prelude::*;

/// A scalar function of t with its first derivative.
pub trait Profile: Sync {
    fn eval_d(&self, t: f64) -> Result<(f64, f64)>;

    fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.eval_d(t)?.0)
    }
}

/// Expression together with the binding it is evaluated under.
#[derive(Debug, Clone)]
pub struct BoundExpr {
    pub expr: ScalarExpr,
    pub binding: ParamBinding,
}

impl BoundExpr {
    pub fn new(expr: ScalarExpr, binding: ParamBinding) -> Self {
        Self { expr, binding }
    }
}

impl Profile for BoundExpr {
    fn eval_d(&self, t: f64) -> Result<(f64, f64)> {
        self.expr.eval_d(t, &self.binding)
    }

    fn eval(&self, t: f64) -> Result<f64> {
        self.expr.eval(t, &self.binding)
    }
}

/// Lower bound L for the Laplacian of ρ.
#[derive(Debug, Clone, PartialEq)]
pub enum LSpec {
    Model(Comparison),
    Expr(ScalarExpr),
}

/// Sign condition imposed on G.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRequirement {
    Free,
    NonNegative,
    NonPositive,
}

#[derive(Debug, Clone)]
pub struct RiccatiPairSpec {
    pub geo: ModelGeometry,
    pub lo: f64,
    pub hi: f64,
    pub w: ScalarExpr,
    pub l: LSpec,
    pub big_w: ScalarExpr,
    pub sign: SignRequirement,
    /// Extra parameters; kappa, n and p are taken from `geo`.
    pub params: ParamBinding,
    /// Degree h such that every residual term is O(t^{−h}) near 0.
    pub homogeneity: Option<f64>,
}

impl RiccatiPairSpec {
    /// Spec with G ≥ 0 required and no extra parameters.
    pub fn new(
        geo: ModelGeometry,
        lo: f64,
        hi: f64,
        w: ScalarExpr,
        l: LSpec,
        big_w: ScalarExpr,
    ) -> Result<Self> {
        if !(lo >= 0.0) || !(hi > lo) || lo.is_infinite() {
            return Err(Error::Parameter(format!("invalid interval ({lo}, {hi})")));
        }
        Ok(Self {
            geo,
            lo,
            hi,
            w,
            l,
            big_w,
            sign: SignRequirement::NonNegative,
            params: ParamBinding::new(),
            homogeneity: None,
        })
    }

    pub fn with_params(mut self, params: ParamBinding) -> Self {
        self.params = params;
        self
    }

    pub fn with_sign(mut self, sign: SignRequirement) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_homogeneity(mut self, h: Option<f64>) -> Self {
        self.homogeneity = h;
        self
    }

    /// Parameters plus kappa, n, p.
    pub fn binding(&self) -> ParamBinding {
        let mut b = self.params.clone();
        b.set("kappa", self.geo.kappa());
        b.set("n", self.geo.n() as f64);
        b.set("p", self.geo.p());
        b
    }

    pub fn bind(&self, expr: &ScalarExpr) -> BoundExpr {
        BoundExpr::new(expr.clone(), self.binding())
    }

    pub fn l_value(&self, t: f64, b: &ParamBinding) -> Result<f64> {
        match &self.l {
            LSpec::Model(kind) => self.geo.comparison_l(kind, t, b),
            LSpec::Expr(e) => e.eval(t, b),
        }
    }

    /// w′/w at t; w must be positive.
    pub fn weight_log_derivative(&self, t: f64, b: &ParamBinding) -> Result<f64> {
        let (w, dw) = self.w.eval_d(t, b)?;
        if !(w > 0.0) {
            return Err(domain("w", format!("weight {w} is not positive at t = {t}")));
        }
        Ok(dw / w)
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }
}

/// Residual terms at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub t: f64,
    pub residual: f64,
    pub g: f64,
    pub big_w: f64,
}

fn residual_with(spec: &RiccatiPairSpec, g: &dyn Profile, t: f64, b: &ParamBinding) -> Result<ResidualPoint> {
    let (gv, gd) = g.eval_d(t)?;
    let coeff = spec.weight_log_derivative(t, b)? + spec.l_value(t, b)?;
    let big_w = spec.big_w.eval(t, b)?;
    let p = spec.geo.p();
    let pc = spec.geo.p_conj();
    let residual = gd + coeff * gv - (p - 1.0) * gv.abs().powf(pc) - big_w;
    if !residual.is_finite() {
        return Err(Error::Numeric(format!("non-finite residual at t = {t}")));
    }
    Ok(ResidualPoint { t, residual, g: gv, big_w })
}

/// G′ + (w′/w + L)G − (p−1)|G|^{p′} − W at t.
pub fn residual(spec: &RiccatiPairSpec, g: &dyn Profile, t: f64) -> Result<f64> {
    Ok(residual_point(spec, g, t)?.residual)
}

pub fn residual_point(spec: &RiccatiPairSpec, g: &dyn Profile, t: f64) -> Result<ResidualPoint> {
    if !spec.contains(t) {
        return Err(domain("residual", format!("t = {t} outside ({}, {})", spec.lo, spec.hi)));
    }
    residual_with(spec, g, t, &spec.binding())
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridPolicy {
    Log,
    Uniform,
    Custom(Vec<f64>),
}

/// Relative insets of the grid ends in u = t/(1+t) coordinates.
pub const GRID_INSET_LO: f64 = 1e-6;
pub const GRID_INSET_HI: f64 = 1e-4;
/// Extra points placed in [t_lo, t_lo·(1+1e−3)].
pub const REFINEMENT_POINTS: usize = 16;
pub const MIN_GRID_POINTS: usize = 512;

fn to_u(t: f64) -> f64 {
    if t.is_infinite() {
        1.0
    } else {
        t / (1.0 + t)
    }
}

fn from_u(u: f64) -> f64 {
    u / (1.0 - u)
}

/// Effective sampled range of the interval (lo, hi).
pub fn grid_range(lo: f64, hi: f64) -> (f64, f64) {
    let (ua, ub) = (to_u(lo), to_u(hi));
    let du = ub - ua;
    (from_u(ua + GRID_INSET_LO * du), from_u(ub - GRID_INSET_HI * du))
}

/// Sorted certification grid; `points` is raised to at least 512.
pub fn certification_grid(lo: f64, hi: f64, policy: &GridPolicy, points: usize) -> Result<Vec<f64>> {
    if let GridPolicy::Custom(ts) = policy {
        let mut g: Vec<f64> = ts.iter().copied().filter(|t| *t > lo && *t < hi).collect();
        if g.len() != ts.len() {
            return Err(Error::Parameter("custom grid points must lie inside the interval".into()));
        }
        g.sort_by(f64::total_cmp);
        g.dedup();
        return Ok(g);
    }
    let n = points.max(MIN_GRID_POINTS);
    let (a, b) = grid_range(lo, hi);
    let mut grid: Vec<f64> = match policy {
        GridPolicy::Log => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
        GridPolicy::Uniform => {
            let (ua, ub) = (to_u(a), to_u(b));
            (0..n)
                .map(|i| from_u(ua + (ub - ua) * i as f64 / (n - 1) as f64))
                .collect()
        }
        GridPolicy::Custom(_) => unreachable!(),
    };
    grid[0] = a;
    grid[n - 1] = b;
    for k in 1..=REFINEMENT_POINTS {
        grid.push(a * (1.0 + 1e-3 * k as f64 / REFINEMENT_POINTS as f64));
    }
    grid.retain(|t| *t > lo && *t < hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Certified,
    Failed { t_witness: f64 },
    Inconclusive { t: f64, reason: String },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Failed { .. } => "failed",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub g_values: Vec<f64>,
    pub w_values: Vec<f64>,
    pub min_residual: f64,
    /// max |residual| / (1 + |W|) over the grid.
    pub max_relative_residual: f64,
    /// t^h·residual with h the homogeneity hint (or raw residuals without a hint).
    pub scaled_residuals: Vec<f64>,
    pub min_g: f64,
    pub max_g: f64,
    /// Grid point with the smallest tolerance-relative margin.
    pub worst_t: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    pub sign: SignRequirement,
}

/// Evaluate the residual on a grid and decide.
///
/// Certified iff residual ≥ −tol·(1 + |W|) at every point and the sign
/// requirement holds within tol.
pub fn certify(
    spec: &RiccatiPairSpec,
    g: &dyn Profile,
    policy: &GridPolicy,
    points: usize,
    tol: f64,
) -> Result<CertificationReport> {
    let grid = certification_grid(spec.lo, spec.hi, policy, points)?;
    let b = spec.binding();
    let evaluated: Vec<Result<(ResidualPoint, f64)>> = grid
        .par_iter()
        .map(|&t| {
            let rp = residual_with(spec, g, t, &b)?;
            let w = spec.w.eval(t, &b)?;
            Ok((rp, w))
        })
        .collect();

    let mut report = CertificationReport {
        grid: grid.clone(),
        residuals: Vec::with_capacity(grid.len()),
        g_values: Vec::with_capacity(grid.len()),
        w_values: Vec::with_capacity(grid.len()),
        min_residual: f64::INFINITY,
        max_relative_residual: 0.0,
        scaled_residuals: Vec::with_capacity(grid.len()),
        min_g: f64::INFINITY,
        max_g: f64::NEG_INFINITY,
        worst_t: f64::NAN,
        verdict: Verdict::Certified,
        tolerance_used: tol,
        sign: spec.sign,
    };
    let mut worst_margin = f64::INFINITY;
    let mut failure: Option<f64> = None;
    for (t, r) in grid.iter().zip(evaluated) {
        let (rp, w) = match r {
            Ok(v) => v,
            Err(e) => {
                report.verdict = Verdict::Inconclusive { t: *t, reason: e.to_string() };
                report.grid.truncate(report.residuals.len());
                return Ok(report);
            }
        };
        if !(w > 0.0) || rp.big_w < 0.0 {
            report.verdict = Verdict::Inconclusive {
                t: *t,
                reason: format!("positivity of w or W violated (w = {w}, W = {})", rp.big_w),
            };
            report.grid.truncate(report.residuals.len());
            return Ok(report);
        }
        let scale = 1.0 + rp.big_w.abs();
        let margin = rp.residual / scale;
        report.residuals.push(rp.residual);
        report.g_values.push(rp.g);
        report.w_values.push(rp.big_w);
        report.scaled_residuals.push(match spec.homogeneity {
            Some(h) => t.powf(h) * rp.residual,
            None => rp.residual,
        });
        report.min_residual = report.min_residual.min(rp.residual);
        report.max_relative_residual = report.max_relative_residual.max(margin.abs());
        report.min_g = report.min_g.min(rp.g);
        report.max_g = report.max_g.max(rp.g);
        let sign_margin = match spec.sign {
            SignRequirement::Free => f64::INFINITY,
            SignRequirement::NonNegative => rp.g,
            SignRequirement::NonPositive => -rp.g,
        };
        let m = margin.min(sign_margin);
        if m < worst_margin {
            worst_margin = m;
            report.worst_t = *t;
        }
        if failure.is_none() && (margin < -tol || sign_margin < -tol) {
            failure = Some(*t);
        }
    }
    if let Some(t_witness) = failure {
        report.verdict = Verdict::Failed { t_witness };
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// (t, G) in increasing t.
    pub samples: Vec<(f64, f64)>,
    pub stop: Stop,
    /// Location where |G| exceeded 1e12 or the step collapsed.
    pub blow_up_at: Option<f64>,
}

pub const BLOW_UP_THRESHOLD: f64 = 1e12;

/// Integrate G′ = W + (p−1)|G|^{p′} − (w′/w + L)G from (t0, G0).
///
/// Samples on the far side of t0 in the chosen direction are ignored.
pub fn solve_ivp(
    spec: &RiccatiPairSpec,
    t0: f64,
    g0: f64,
    direction: Direction,
    samples: &[f64],
) -> Result<Trajectory> {
    if !spec.contains(t0) {
        return Err(domain("solve_ivp", format!("t0 = {t0} is not interior")));
    }
    let b = spec.binding();
    let p = spec.geo.p();
    let pc = spec.geo.p_conj();
    let mut ts: Vec<f64> = samples
        .iter()
        .copied()
        .filter(|t| match direction {
            Direction::Forward => *t >= t0 && *t < spec.hi,
            Direction::Backward => *t <= t0 && *t > spec.lo,
        })
        .collect();
    ts.sort_by(f64::total_cmp);
    if direction == Direction::Backward {
        ts.reverse();
    }
    let t_end = match direction {
        Direction::Forward if spec.hi.is_finite() => spec.hi,
        Direction::Forward => *ts.last().unwrap_or(&(t0 * 2.0)),
        Direction::Backward if spec.lo > 0.0 => spec.lo,
        Direction::Backward => *ts.last().unwrap_or(&(t0 * 0.5)),
    };
    let rhs = |t: f64, y: &[f64; 1]| -> Result<[f64; 1]> {
        let g = y[0];
        let coeff = spec.weight_log_derivative(t, &b)? + spec.l_value(t, &b)?;
        let w = spec.big_w.eval(t, &b)?;
        Ok([w + (p - 1.0) * g.abs().powf(pc) - coeff * g])
    };
    let opts = OdeOptions { rtol: 1e-10, atol: 1e-14, min_step_rel: 1e-14, max_steps: 500_000 };
    let out = ode::integrate(rhs, t0, [g0], t_end, &ts, &opts, |_, y| {
        y[0].abs() > BLOW_UP_THRESHOLD
    })?;
    let mut samples: Vec<(f64, f64)> = out.samples.iter().map(|(t, y)| (*t, y[0])).collect();
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    let blow_up_at = match out.stop {
        Stop::BlowUp(t) | Stop::StepCollapse(t) => Some(t),
        Stop::Completed => None,
    };
    Ok(Trajectory { samples, stop: out.stop, blow_up_at })
}

/// G = −|y′|^{p−2} y′ / y^{p−1} for a positive profile y.
///
/// G′ is a central difference of G with step 1e−5·(1+|t|).
pub struct BesselToRiccati<P: Profile> {
    pub y: P,
    pub p: f64,
}

pub fn bessel_to_riccati<P: Profile>(y: P, p: f64) -> BesselToRiccati<P> {
    BesselToRiccati { y, p }
}

impl<P: Profile> BesselToRiccati<P> {
    fn g_at(&self, t: f64) -> Result<f64> {
        let (y, dy) = self.y.eval_d(t)?;
        if !(y > 0.0) {
            return Err(domain("bessel_to_riccati", format!("y({t}) = {y} is not positive")));
        }
        Ok(-dy.abs().powf(self.p - 2.0) * dy / y.powf(self.p - 1.0))
    }
}

impl<P: Profile> Profile for BesselToRiccati<P> {
    fn eval_d(&self, t: f64) -> Result<(f64, f64)> {
        let g = self.g_at(t)?;
        let h = fd_step_radial(t);
        let d = (self.g_at(t + h)? - self.g_at(t - h)?) / (2.0 * h);
        Ok((g, d))
    }

    fn eval(&self, t: f64) -> Result<f64> {
        self.g_at(t)
    }
}

/// y(t) = exp(−∫_{anchor}^t sgn(G)|G|^{1/(p−1)}).
pub struct RiccatiToBessel<P: Profile> {
    pub g: P,
    pub p: f64,
    pub anchor: f64,
}

pub fn riccati_to_bessel<P: Profile>(g: P, p: f64, anchor: f64) -> RiccatiToBessel<P> {
    RiccatiToBessel { g, p, anchor }
}

impl<P: Profile> RiccatiToBessel<P> {
    fn phi(&self, t: f64) -> Result<f64> {
        let g = self.g.eval(t)?;
        Ok(g.signum() * g.abs().powf(1.0 / (self.p - 1.0)))
    }

    /// ln y(t). Tends to ±∞ when the integral diverges at a boundary.
    pub fn log_y(&self, t: f64) -> Result<f64> {
        if t == self.anchor {
            return Ok(0.0);
        }
        let (a, b, sign) = if t > self.anchor { (self.anchor, t, 1.0) } else { (t, self.anchor, -1.0) };
        let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_subdivisions: 2000 };
        let r = quadrature::integrate(|s| self.phi(s), a, b, &[], false, &opts)?;
        Ok(-sign * r.value)
    }
}

impl<P: Profile> Profile for RiccatiToBessel<P> {
    fn eval_d(&self, t: f64) -> Result<(f64, f64)> {
        let ly = self.log_y(t)?;
        let y = ly.exp();
        if !(y > 0.0) || !y.is_finite() {
            return Err(domain(
                "riccati_to_bessel",
                format!("ln y({t}) = {ly}: y leaves the representable range"),
            ));
        }
        Ok((y, -y * self.phi(t)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantOptimum {
    pub c_star: f64,
    pub value: f64,
    /// Golden-section estimate of the maximizer and maximum.
    pub c_search: f64,
    pub value_search: f64,
}

/// Maximize c·b − (p−1)c^{p′}a^p over c > 0.
pub fn optimize_constant(a: f64, b: f64, p: f64) -> Result<ConstantOptimum> {
    if !(a > 0.0) || !(b > 0.0) || !(p > 1.0) {
        return Err(Error::Parameter(format!("need a, b > 0 and p > 1 (got {a}, {b}, {p})")));
    }
    let pc = p / (p - 1.0);
    let f = |c: f64| c * b - (p - 1.0) * c.powf(pc) * a.powf(p);
    let c_star = (b / (p * a.powf(p))).powf(p - 1.0);
    let value = b.powf(p) / (p.powf(p) * a.powf(p * (p - 1.0)));

    // Golden section on x = ln c; f∘exp is unimodal.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-80.0f64, 80.0f64);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1.exp()), f(x2.exp()));
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2.exp());
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1.exp());
        }
    }
    let c_search = (0.5 * (lo + hi)).exp();
    Ok(ConstantOptimum { c_star, value, c_search, value_search: f(c_search) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hardy_spec() -> RiccatiPairSpec {
        let geo = ModelGeometry::new(0.0, 3, 2.0).unwrap();
        RiccatiPairSpec::new(
            geo,
            0.0,
            f64::INFINITY,
            ScalarExpr::parse("t^0").unwrap(),
            LSpec::Expr(ScalarExpr::parse("2/t").unwrap()),
            ScalarExpr::parse("1/(4*t^2)").unwrap(),
        )
        .unwrap()
        .with_homogeneity(Some(2.0))
    }

    fn g(src: &str, spec: &RiccatiPairSpec) -> BoundExpr {
        spec.bind(&ScalarExpr::parse(src).unwrap())
    }

    #[test]
    fn hardy_residual_vanishes() {
        let s = hardy_spec();
        let r = residual(&s, &g("1/(2*t)", &s), 1.0).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn mckean_residual_vanishes() {
        let geo = ModelGeometry::new(-1.0, 2, 2.0).unwrap();
        let s = RiccatiPairSpec::new(
            geo,
            0.0,
            f64::INFINITY,
            ScalarExpr::parse("1").unwrap(),
            LSpec::Model(Comparison::ConstantFloor),
            ScalarExpr::parse("0.25").unwrap(),
        )
        .unwrap();
        for t in [0.1, 1.0, 30.0] {
            assert!(residual(&s, &g("0.5", &s), t).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn zero_g_gives_minus_w() {
        let s = hardy_spec();
        let r = residual(&s, &g("0", &s), 2.0).unwrap();
        assert_eq!(r, -1.0 / 16.0);
    }

    #[test]
    fn certify_hardy_and_scaled_failure() {
        let s = hardy_spec();
        let rep = certify(&s, &g("1/(2*t)", &s), &GridPolicy::Log, 512, 1e-8).unwrap();
        assert_eq!(rep.verdict, Verdict::Certified);
        assert!(rep.grid.len() >= 512);
        assert!(rep.max_relative_residual < 1e-12);
        let bad = certify(&s, &g("1.5/(2*t)", &s), &GridPolicy::Log, 512, 1e-8).unwrap();
        assert!(matches!(bad.verdict, Verdict::Failed { .. }));
        let r1 = residual(&s, &g("1.5/(2*t)", &s), 1.0).unwrap();
        assert!((r1 - (-0.75 + 1.5 - 0.5625 - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn certify_reports_evaluation_failure_as_inconclusive() {
        let s = hardy_spec();
        let rep = certify(&s, &g("log(1 - t)", &s), &GridPolicy::Log, 512, 1e-8).unwrap();
        assert!(matches!(rep.verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn grid_shape() {
        let grid = certification_grid(0.0, f64::INFINITY, &GridPolicy::Log, 512).unwrap();
        assert!(grid.len() >= 512 + REFINEMENT_POINTS - 1);
        assert!(grid[0] > 0.0 && grid[0] < 1.1e-6);
        assert!(*grid.last().unwrap() > 9e3);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        let u = certification_grid(1.0, 2.0, &GridPolicy::Uniform, 600).unwrap();
        assert!(u[0] > 1.0 && *u.last().unwrap() < 2.0);
    }

    #[test]
    fn ivp_reproduces_hardy_solution() {
        let s = hardy_spec();
        let samples: Vec<f64> = (0..=40).map(|i| 10f64.powf(-1.0 + i as f64 / 20.0)).collect();
        let fwd = solve_ivp(&s, 1.0, 0.5, Direction::Forward, &samples).unwrap();
        let bwd = solve_ivp(&s, 1.0, 0.5, Direction::Backward, &samples).unwrap();
        assert!(fwd.blow_up_at.is_none() && bwd.blow_up_at.is_none());
        for (t, gv) in fwd.samples.iter().chain(bwd.samples.iter()) {
            assert!((gv - 0.5 / t).abs() < 1e-8 * (0.5 / t), "t={t} G={gv}");
        }
        assert_eq!(fwd.samples.len() + bwd.samples.len(), samples.len() + 1);
    }

    #[test]
    fn bessel_riccati_maps() {
        let b = ParamBinding::new().with("kappa", -1.0);
        let y = BoundExpr::new(ScalarExpr::parse("t^(-0.5)").unwrap(), b.clone());
        let gmap = bessel_to_riccati(y, 2.0);
        assert!((gmap.eval(3.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let y = BoundExpr::new(ScalarExpr::parse("s(t)^(-0.5)").unwrap(), b.clone());
        let gmap = bessel_to_riccati(y, 2.0);
        assert!((gmap.eval(1.3).unwrap() - 0.5 / 1.3f64.tanh()).abs() < 1e-14);
        let one = bessel_to_riccati(BoundExpr::new(ScalarExpr::parse("1").unwrap(), b.clone()), 2.0);
        assert_eq!(one.eval_d(2.0).unwrap(), (0.0, 0.0));

        let inv = riccati_to_bessel(BoundExpr::new(ScalarExpr::parse("1/(2*t)").unwrap(), b.clone()), 2.0, 1.0);
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let y = inv.eval(t).unwrap();
            assert!((y - t.powf(-0.5)).abs() < 1e-9 * t.powf(-0.5), "t={t} y={y}");
        }
        let flat = riccati_to_bessel(BoundExpr::new(ScalarExpr::parse("0").unwrap(), b), 2.0, 1.0);
        assert_eq!(flat.eval(3.0).unwrap(), 1.0);
    }

    #[test]
    fn optimum_closed_forms() {
        let o = optimize_constant(1.0, 2.0, 2.0).unwrap();
        assert!((o.c_star - 1.0).abs() < 1e-15 && (o.value - 1.0).abs() < 1e-15);
        assert!((o.value_search - o.value).abs() < 1e-8);
        assert!((optimize_constant(1.0, 1.0, 2.0).unwrap().value - 0.25).abs() < 1e-15);
        assert!(optimize_constant(0.0, 1.0, 2.0).is_err());
    }
}
