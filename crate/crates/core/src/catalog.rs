//! Named admissible-G constructions with their sharp constants.

use crate::error::{Error, Result};
use crate::exprdsl::{fd_step_radial, ParamBinding, ScalarExpr};
use crate::geometry::{Comparison, ModelGeometry, RadialVariable};
use crate::riccati::{certification_grid, GridPolicy, LSpec, RiccatiPairSpec, SignRequirement};
use crate::specfun::bessel_zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    /// Default value; `None` means required or derived from other parameters.
    pub default: Option<f64>,
    pub constraint: &'static str,
}

const fn ps(name: &'static str, default: Option<f64>, constraint: &'static str) -> ParamSpec {
    ParamSpec { name, default, constraint }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    /// G ≥ 0 is guaranteed, or no sign condition is needed.
    Proven,
    /// G ≥ 0 is only checked on the sampled grid.
    Unproven,
}

/// A fully built catalog entry.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: &'static str,
    pub spec: RiccatiPairSpec,
    pub g: ScalarExpr,
    pub sharp_constant: f64,
    pub equality_expected: bool,
    pub model_exact_l: bool,
    pub positivity: Positivity,
    /// Radial variable the profile is written in.
    pub rho: RadialVariable,
}

#[derive(Debug, Clone)]
pub struct EntrySummary {
    pub name: &'static str,
    pub citation: &'static str,
    pub params: &'static [ParamSpec],
    /// Names of expression-valued parameters (e.g. `psi`).
    pub expr_params: &'static [&'static str],
}

type Exprs = BTreeMap<String, ScalarExpr>;
type Build = fn(&Args) -> Result<Instance>;

struct Entry {
    name: &'static str,
    citation: &'static str,
    params: &'static [ParamSpec],
    expr_params: &'static [&'static str],
    build: Build,
}

const CATALOG: &[Entry] = &[
    Entry {
        name: "caccioppoli",
        citation: "Caccioppoli-type inequality (D'Ambrosio–Dipierro), ρ = distance to the boundary",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "p > 1"),
            ps("alpha", Some(0.0), "alpha != p - 1"),
            ps("R", Some(1.0), "R > 0 (inradius)"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: caccioppoli,
    },
    Entry {
        name: "caccioppoli_improved",
        citation: "Improved Caccioppoli inequality with logarithmic remainder (Brezis–Marcus type)",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "1 < p <= 2"),
            ps("R", Some(1.0), "R > 0 (inradius)"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: caccioppoli_improved,
    },
    Entry {
        name: "hardy",
        citation: "Weighted L^p Hardy inequality (Carron; Kombe–Özaydin)",
        params: &[
            ps("n", Some(3.0), "n >= 2"),
            ps("p", Some(2.0), "p > 1"),
            ps("alpha", Some(0.0), "C + 1 + alpha > p"),
            ps("C", None, "C > 0, defaults to n - 1"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: hardy,
    },
    Entry {
        name: "hardy_log",
        citation: "Hardy inequality with logarithmic weight on the unit ball (Edmunds–Triebel type)",
        params: &[
            ps("n", Some(3.0), "n >= p"),
            ps("p", Some(2.0), "1 < p <= n"),
            ps("alpha", Some(0.0), "alpha + 1 < p"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: hardy_log,
    },
    Entry {
        name: "acr",
        citation: "Adimurthi–Chaudhuri–Ramaswamy improved Hardy inequality",
        params: &[
            ps("n", Some(3.0), "n >= 3"),
            ps("p", Some(2.0), "p = 2"),
            ps("D", Some(1.0), "D > 0 (domain radius about x0)"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: acr,
    },
    Entry {
        name: "brezis_vazquez",
        citation: "Brezis–Vázquez improved Hardy inequality, Bessel interpolation in nu",
        params: &[
            ps("n", Some(3.0), "n >= 2"),
            ps("p", Some(2.0), "p = 2"),
            ps("nu", Some(0.0), "0 <= nu <= (n - 2)/2"),
            ps("D", Some(1.0), "D > 0 (domain radius about x0)"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: brezis_vazquez,
    },
    Entry {
        name: "faber_krahn",
        citation: "Faber–Krahn inequality, first Dirichlet eigenvalue of a ball",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "p = 2"),
            ps("R", Some(1.0), "R > 0 (ball radius)"),
            ps("kappa", Some(0.0), "kappa <= 0"),
        ],
        expr_params: &[],
        build: faber_krahn,
    },
    Entry {
        name: "mckean",
        citation: "McKean spectral gap estimate",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "p > 1"),
            ps("kappa", Some(-1.0), "kappa < 0"),
        ],
        expr_params: &[],
        build: mckean,
    },
    Entry {
        name: "mckean_improved",
        citation: "McKean spectral gap with coth remainder",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "p > 1"),
            ps("kappa", Some(-1.0), "kappa < 0"),
        ],
        expr_params: &[],
        build: mckean_improved,
    },
    Entry {
        name: "interpolation",
        citation: "Interpolation between the Hardy inequality and the McKean gap (Berchio–Ganguly–Grillo–Pinchover; Akutagawa–Kumura)",
        params: &[
            ps("n", Some(3.0), "n >= 3"),
            ps("p", Some(2.0), "p = 2"),
            ps("kappa", Some(-1.0), "kappa < 0"),
            ps("lambda", None, "n - 2 <= lambda <= (n - 1)^2/4, defaults to n - 2"),
        ],
        expr_params: &[],
        build: interpolation,
    },
    Entry {
        name: "akutagawa_kumura",
        citation: "Akutagawa–Kumura inequality outside a geodesic ball",
        params: &[
            ps("n", Some(3.0), "n >= 2"),
            ps("p", Some(2.0), "p = 2"),
            ps("kappa", Some(-1.0), "kappa < 0"),
            ps("R", Some(1.0), "R > 0 (excised ball radius)"),
        ],
        expr_params: &[],
        build: akutagawa_kumura,
    },
    Entry {
        name: "greene_wu_psi",
        citation: "Hardy–McKean inequality under a pointwise radial curvature bound (Greene–Wu comparison; Berchio–Ganguly–Grillo)",
        params: &[
            ps("n", Some(3.0), "n >= 3"),
            ps("p", Some(2.0), "p = 2"),
            ps("kappa", Some(-1.0), "kappa <= 0 (used by s, ct, D inside psi)"),
            ps("T", Some(500.0), "T > 0 (upper end of the sampled range)"),
        ],
        expr_params: &["psi"],
        build: greene_wu_psi,
    },
    Entry {
        name: "ghoussoub_moradifam",
        citation: "Ghoussoub–Moradifam weighted Hardy inequality, weight (a + b t^alpha)^beta / t^(2m)",
        params: &[
            ps("n", Some(3.0), "n >= 2"),
            ps("p", Some(2.0), "p = 2"),
            ps("kappa", Some(0.0), "kappa <= 0"),
            ps("a", Some(1.0), "a > 0"),
            ps("b", Some(1.0), "b > 0"),
            ps("alpha", Some(1.0), "alpha != 0, alpha*beta > 0 or beta = 0"),
            ps("beta", Some(1.0), "alpha*beta > 0 or beta = 0"),
            ps("m", Some(0.0), "m <= (n - 2)/2"),
        ],
        expr_params: &[],
        build: ghoussoub_moradifam,
    },
    Entry {
        name: "carvalho_cavalcante",
        citation: "Carvalho–Cavalcante lower bound for the first p-Laplacian eigenvalue",
        params: &[
            ps("n", Some(2.0), "n >= 2"),
            ps("p", Some(2.0), "p > 1"),
            ps("kappa", Some(-1.0), "kappa <= 0"),
            ps("a", Some(1.0), "a > 0 (bound on |grad rho|)"),
            ps("b", Some(1.0), "b > 0 (floor of the p-Laplacian of rho)"),
        ],
        expr_params: &[],
        build: carvalho_cavalcante,
    },
];

pub fn list_catalog() -> Vec<EntrySummary> {
    CATALOG
        .iter()
        .map(|e| EntrySummary {
            name: e.name,
            citation: e.citation,
            params: e.params,
            expr_params: e.expr_params,
        })
        .collect()
}

pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

pub fn summary(name: &str) -> Result<EntrySummary> {
    list_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::NotFound(name.to_string()))
}

pub fn instantiate(name: &str, params: &ParamBinding) -> Result<Instance> {
    instantiate_with_exprs(name, params, &Exprs::new())
}

/// Like [`instantiate`], with expression-valued parameters such as `psi`.
pub fn instantiate_with_exprs(name: &str, params: &ParamBinding, exprs: &Exprs) -> Result<Instance> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::NotFound(name.to_string()))?;
    for (k, _) in params.iter() {
        if !entry.params.iter().any(|p| p.name == k) {
            return Err(Error::Parameter(format!("`{name}` has no parameter `{k}`")));
        }
    }
    for k in exprs.keys() {
        if !entry.expr_params.contains(&k.as_str()) {
            return Err(Error::Parameter(format!("`{name}` has no expression parameter `{k}`")));
        }
    }
    let mut resolved = ParamBinding::new();
    for p in entry.params {
        if let Some(v) = params.get(p.name).or(p.default) {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("{} = {v} is not finite", p.name)));
            }
            resolved.set(p.name, v);
        }
    }
    (entry.build)(&Args { name: entry.name, p: resolved, exprs })
}

struct Args<'a> {
    name: &'static str,
    p: ParamBinding,
    exprs: &'a Exprs,
}

impl Args<'_> {
    fn get(&self, k: &str) -> f64 {
        self.p.get(k).unwrap_or(f64::NAN)
    }

    fn geometry(&self) -> Result<ModelGeometry> {
        let n = self.get("n");
        if n.fract() != 0.0 || n < 2.0 || n > 1e6 {
            return Err(Error::Hypothesis(format!("n = {n} must be an integer >= 2")));
        }
        ModelGeometry::new(self.get("kappa"), n as u32, self.get("p"))
    }
}

fn require(ok: bool, predicate: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Hypothesis(predicate.to_string()))
    }
}

fn p_is_two(a: &Args) -> Result<()> {
    require(a.get("p") == 2.0, "p = 2")
}

struct Draft<'a> {
    args: &'a Args<'a>,
    geo: ModelGeometry,
    lo: f64,
    hi: f64,
    w: String,
    l: LSpec,
    big_w: String,
    g: String,
    extra: ParamBinding,
    sign: SignRequirement,
    homogeneity: Option<f64>,
    sharp: f64,
    model_exact_l: bool,
    positivity: Positivity,
    rho: RadialVariable,
}

impl<'a> Draft<'a> {
    fn new(args: &'a Args<'a>, geo: ModelGeometry, lo: f64, hi: f64) -> Self {
        Self {
            args,
            geo,
            lo,
            hi,
            w: "1".into(),
            l: LSpec::Expr(ScalarExpr::constant(0.0)),
            big_w: "0".into(),
            g: "0".into(),
            extra: ParamBinding::new(),
            sign: SignRequirement::NonNegative,
            homogeneity: None,
            sharp: f64::NAN,
            model_exact_l: false,
            positivity: Positivity::Proven,
            rho: RadialVariable::Distance,
        }
    }

    fn l_expr(mut self, src: &str) -> Result<Self> {
        self.l = LSpec::Expr(ScalarExpr::parse(src)?);
        Ok(self)
    }

    fn l_model(mut self, kind: Comparison) -> Self {
        self.model_exact_l = kind == Comparison::ConstantCurvature;
        if self.model_exact_l {
            self.sign = SignRequirement::Free;
        }
        self.l = LSpec::Model(kind);
        self
    }

    /// L = (n−1)/t: exact on Euclidean space, a lower bound otherwise.
    fn l_euclidean(mut self) -> Result<Self> {
        self = self.l_expr("(n-1)/t")?;
        if self.geo.kappa() == 0.0 {
            self.model_exact_l = true;
            self.sign = SignRequirement::Free;
        }
        Ok(self)
    }

    fn bind(mut self, k: &str, v: f64) -> Self {
        self.extra.set(k, v);
        self
    }

    fn build(self) -> Result<Instance> {
        let mut params = self.args.p.clone();
        params.extend(&self.extra);
        let mut kept = ParamBinding::new();
        for (k, v) in params.iter() {
            if !matches!(k, "kappa" | "n" | "p") {
                kept.set(k, v);
            }
        }
        let spec = RiccatiPairSpec::new(
            self.geo,
            self.lo,
            self.hi,
            ScalarExpr::parse(&self.w)?,
            self.l,
            ScalarExpr::parse(&self.big_w)?,
        )?
        .with_params(kept)
        .with_sign(self.sign)
        .with_homogeneity(self.homogeneity);
        let g = ScalarExpr::parse(&self.g)?;
        let b = spec.binding();
        let mut needed: Vec<&String> = g.params_required().iter().collect();
        needed.extend(spec.w.params_required());
        needed.extend(spec.big_w.params_required());
        if let LSpec::Expr(e) = &spec.l {
            needed.extend(e.params_required());
        }
        for k in needed {
            b.require(k)?;
        }
        Ok(Instance {
            name: self.args.name,
            spec,
            g,
            sharp_constant: self.sharp,
            equality_expected: true,
            model_exact_l: self.model_exact_l,
            positivity: self.positivity,
            rho: self.rho,
        })
    }
}

fn caccioppoli(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    let (p, alpha, r) = (a.get("p"), a.get("alpha"), a.get("R"));
    require(r > 0.0, "R > 0")?;
    let q = p - 1.0 - alpha;
    require(q != 0.0, "alpha != p - 1")?;
    let k = q * q.abs().powf(p - 2.0) / p.powf(p - 1.0);
    let mut d = Draft::new(a, geo, 0.0, r)
        .l_expr("0")?
        .bind("k", k)
        .bind("sharp", (q.abs() / p).powf(p));
    d.w = "t^alpha".into();
    d.g = "-k*t^(1-p)".into();
    d.big_w = "sharp*t^(-p)".into();
    // −(p−1−α)Δρ ≥ 0: G carries the sign of α − (p−1) and L ≡ 0 bounds Δρ on that side.
    d.sign = if q > 0.0 { SignRequirement::NonPositive } else { SignRequirement::NonNegative };
    if q > 0.0 {
        d.rho = RadialVariable::DistanceToSphere { radius: r };
    }
    d.homogeneity = Some(p);
    d.sharp = (q.abs() / p).powf(p);
    d.build()
}

fn caccioppoli_improved(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    let (p, r) = (a.get("p"), a.get("R"));
    require(p > 1.0 && p <= 2.0, "1 < p <= 2")?;
    require(r > 0.0, "R > 0")?;
    let sharp = ((p - 1.0) / p).powf(p);
    let mut d = Draft::new(a, geo, 0.0, r)
        .l_expr("0")?
        .bind("c", ((p - 1.0) / p).powf(p - 1.0))
        .bind("sharp", sharp);
    d.g = "-c*t^(1-p)*(1 + 1/(log(t/R) - 1))^(p-1)".into();
    d.big_w = "sharp*t^(-p)*(1 + 1/(log(t/R) - 1))^(p-2)*(1 + (2-p)/(log(t/R) - 1) + 1/(log(t/R) - 1)^2)".into();
    d.sign = SignRequirement::NonPositive;
    d.rho = RadialVariable::DistanceToSphere { radius: r };
    d.homogeneity = Some(p);
    d.sharp = sharp;
    d.build()
}

fn hardy(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    let (n, p, alpha) = (a.get("n"), a.get("p"), a.get("alpha"));
    let c = a.p.get("C").unwrap_or(n - 1.0);
    require(c > 0.0, "C > 0")?;
    let q = c + 1.0 + alpha - p;
    require(q > 0.0, "C + 1 + alpha > p > 1")?;
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_expr("C/t")?
        .bind("C", c)
        .bind("q", q);
    if geo.kappa() == 0.0 && c == n - 1.0 {
        d.model_exact_l = true;
        d.sign = SignRequirement::Free;
    }
    d.w = "t^alpha".into();
    d.g = "(q/(p*t))^(p-1)".into();
    d.big_w = "(q/(p*t))^p".into();
    d.homogeneity = Some(p);
    d.sharp = (q / p).powf(p);
    d.build()
}

fn hardy_log(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    let (n, p, alpha) = (a.get("n"), a.get("p"), a.get("alpha"));
    require(p <= n, "1 < p <= n")?;
    require(alpha + 1.0 < p, "alpha + 1 < p")?;
    let q = p - alpha - 1.0;
    let mut d = Draft::new(a, geo, 0.0, 1.0)
        .l_expr("(p-1)/t")?
        .bind("c", (q / p).powf(p - 1.0))
        .bind("sharp", (q / p).powf(p));
    d.w = "log(1/t)^alpha".into();
    d.g = "c*(t*log(1/t))^(1-p)".into();
    d.big_w = "sharp*(t*log(1/t))^(-p)".into();
    d.sharp = (q / p).powf(p);
    d.build()
}

fn acr(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    require(a.get("n") >= 3.0, "n >= 3")?;
    let dd = a.get("D");
    require(dd > 0.0, "D > 0")?;
    let mut d = Draft::new(a, geo, 0.0, dd).l_euclidean()?;
    d.g = "(n-2)/(2*t) + 1/(2*t*log(exp(1)*D/t))".into();
    d.big_w = "(n-2)^2/(4*t^2) + 1/(4*t^2*log(t/(exp(1)*D))^2)".into();
    d.homogeneity = Some(2.0);
    d.sharp = 0.25;
    d.build()
}

fn brezis_vazquez(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    let (n, nu, dd) = (a.get("n"), a.get("nu"), a.get("D"));
    require(nu >= 0.0 && nu <= (n - 2.0) / 2.0, "0 <= nu <= (n - 2)/2")?;
    require(dd > 0.0, "D > 0")?;
    let j = bessel_zero(nu, 1)?;
    let c = (j / dd).powi(2);
    let mut d = Draft::new(a, geo, 0.0, dd)
        .l_euclidean()?
        .bind("C", c)
        .bind("sqC", j / dd);
    d.g = "(n-2-2*nu)/(2*t) + sqC*besselratio(nu, sqC*t)".into();
    d.big_w = "((n-2)^2/4 - nu^2)/t^2 + C".into();
    d.homogeneity = Some(2.0);
    d.sharp = c;
    d.build()
}

fn faber_krahn(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    let (n, r) = (a.get("n"), a.get("R"));
    require(r > 0.0, "R > 0")?;
    let nu = (n - 2.0) / 2.0;
    let j = bessel_zero(nu, 1)?;
    let c = (j / r).powi(2);
    let mut d = Draft::new(a, geo, 0.0, r)
        .l_euclidean()?
        .bind("nu", nu)
        .bind("C", c)
        .bind("sqC", j / r);
    d.g = "sqC*besselratio(nu, sqC*t)".into();
    d.big_w = "C".into();
    d.sharp = c;
    d.build()
}

fn mckean_constants(a: &Args) -> Result<(ModelGeometry, f64, f64)> {
    let geo = a.geometry()?;
    require(geo.kappa() < 0.0, "kappa < 0")?;
    let (n, p) = (a.get("n"), a.get("p"));
    let base = (n - 1.0) * (-geo.kappa()).sqrt() / p;
    Ok((geo, base.powf(p - 1.0), base.powf(p)))
}

fn mckean(a: &Args) -> Result<Instance> {
    let (geo, c, sharp) = mckean_constants(a)?;
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_model(Comparison::ConstantFloor)
        .bind("c", c)
        .bind("sharp", sharp);
    d.g = "c".into();
    d.big_w = "sharp".into();
    d.sharp = sharp;
    d.build()
}

fn mckean_improved(a: &Args) -> Result<Instance> {
    let (geo, c, sharp) = mckean_constants(a)?;
    let (n, p) = (a.get("n"), a.get("p"));
    let extra = (n - 1.0).powf(p) / p.powf(p - 1.0) * (-geo.kappa()).powf(p / 2.0);
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_model(Comparison::ConstantCurvature)
        .bind("c", c)
        .bind("sharp", sharp)
        .bind("cc", extra);
    d.g = "c".into();
    d.big_w = "sharp + cc*(coth(sqrt(-kappa)*t) - 1)".into();
    d.homogeneity = Some(1.0);
    d.sharp = sharp;
    d.build()
}

/// γ_n(λ) and h_n(λ).
pub fn interpolation_exponents(n: f64, lambda: f64) -> (f64, f64) {
    let g = ((n - 1.0).powi(2) - 4.0 * lambda).max(0.0).sqrt();
    (g, (g + 1.0) / 2.0)
}

fn interpolation(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    let n = a.get("n");
    require(n >= 3.0, "n >= 3")?;
    require(geo.kappa() < 0.0, "kappa < 0")?;
    let lambda = a.p.get("lambda").unwrap_or(n - 2.0);
    require(
        lambda >= n - 2.0 && lambda <= (n - 1.0).powi(2) / 4.0,
        "n - 2 <= lambda <= (n - 1)^2/4",
    )?;
    let (gam, h) = interpolation_exponents(n, lambda);
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_model(Comparison::ConstantCurvature)
        .bind("lambda", lambda)
        .bind("gam", gam)
        .bind("h", h);
    d.g = "-h/t + ((n-2)/2 + h)*ct(t)".into();
    d.big_w = "lambda*abs(kappa) + h^2/t^2 + (ct(t)^2 + kappa)*((n-2)^2/4 - h^2) + h*gam*D(t)/t^2".into();
    d.homogeneity = Some(2.0);
    d.sharp = lambda * geo.kappa().abs();
    d.build()
}

fn akutagawa_kumura(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    require(geo.kappa() < 0.0, "kappa < 0")?;
    let r = a.get("R");
    require(r > 0.0, "R > 0")?;
    let n = a.get("n");
    let mut d = Draft::new(a, geo, r, f64::INFINITY).l_model(Comparison::ConstantCurvature);
    d.g = "-1/(2*(t - R + 1/((n-1)*ct(R)))) + ((n-1)/2)*ct(t)".into();
    d.big_w = "(n-1)^2*abs(kappa)/4 + 1/(4*(t - R + 1/((n-1)*ct(R)))^2) + (ct(t)^2 + kappa)*(n-1)*(n-3)/4".into();
    d.sharp = (n - 1.0).powi(2) * geo.kappa().abs() / 4.0;
    d.build()
}

/// Samples (n−2)ψ′ + (n−1)tψ″ ≥ 0 and ψ > 0 on the certification grid.
pub fn check_psi_validity(psi: &ScalarExpr, n: f64, hi: f64, binding: &ParamBinding) -> Result<()> {
    let grid = certification_grid(0.0, hi, &GridPolicy::Log, 512)?;
    for t in grid {
        let (v, d1) = psi.eval_d(t, binding)?;
        if !(v > 0.0) {
            return Err(Error::Hypothesis(format!("psi > 0 fails at t = {t} (psi = {v})")));
        }
        let h = fd_step_radial(t);
        let d2 = (psi.eval_d(t + h, binding)?.1 - psi.eval_d(t - h, binding)?.1) / (2.0 * h);
        let lhs = (n - 2.0) * d1 + (n - 1.0) * t * d2;
        let scale = (n - 2.0) * d1.abs() + (n - 1.0) * (t * d2).abs();
        if lhs < -1e-6 * (1.0 + scale) {
            return Err(Error::Hypothesis(format!(
                "(n-2)psi' + (n-1) t psi'' >= 0 fails at t = {t} (value {lhs})"
            )));
        }
    }
    Ok(())
}

fn greene_wu_psi(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    let n = a.get("n");
    require(n >= 3.0, "n >= 3")?;
    let psi = match a.exprs.get("psi") {
        Some(e) => e.clone(),
        None => ScalarExpr::parse("s(t)")?,
    };
    let mut b = a.p.clone();
    b.set("kappa", geo.kappa());
    let hi = a.get("T");
    require(hi > 0.0, "T > 0")?;
    check_psi_validity(&psi, n, hi, &b)?;
    let ps = format!("({psi})");
    let g = format!("-1/(2*t) + ((n-1)/2)*diff{ps}/{ps}");
    let w = format!(
        "((n-1)/4)*(2*diff(diff{ps})/{ps} + (n-3)*((diff{ps}/{ps})^2 - (1/{ps})^2)) + 1/(4*t^2) + (n-1)*(n-3)/4*(1/{ps})^2"
    );
    let mut d = Draft::new(a, geo, 0.0, hi).l_model(Comparison::Psi(psi));
    d.g = g;
    d.big_w = w;
    d.homogeneity = Some(2.0);
    d.sharp = 0.25;
    d.build()
}

/// Whether (α, β, K0) lies in the region where positivity of G is proven.
pub fn gm_in_proven_region(alpha: f64, beta: f64, k0: f64) -> bool {
    let ab = alpha * beta;
    alpha > 0.0 && beta > 0.0 && ab + (ab * (ab + 2.0 * k0)).sqrt() <= 2.0
}

/// (K0, A, B) for the Ghoussoub–Moradifam construction.
pub fn gm_constants(n: f64, alpha: f64, beta: f64, m: f64) -> (f64, f64, f64) {
    let k0 = n - 2.0 * m - 2.0;
    let ab = alpha * beta;
    (k0, beta / 2.0, (ab * (ab + 2.0 * k0)).sqrt() / (2.0 * alpha))
}

/// Minimum of the Ghoussoub–Moradifam field G over sampled t at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmSample {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
    pub n: f64,
    pub min_g: f64,
    pub argmin_t: f64,
    pub in_proven_region: bool,
}

pub fn gm_positivity_sample(n: f64, a: f64, b: f64, alpha: f64, beta: f64, m: f64, ts: &[f64]) -> Result<GmSample> {
    let params = ParamBinding::new()
        .with("n", n)
        .with("a", a)
        .with("b", b)
        .with("alpha", alpha)
        .with("beta", beta)
        .with("m", m);
    let inst = instantiate("ghoussoub_moradifam", &params)?;
    let binding = inst.spec.binding();
    let (mut min_g, mut argmin_t) = (f64::INFINITY, f64::NAN);
    for &t in ts {
        let g = inst.g.eval(t, &binding)?;
        if g < min_g {
            min_g = g;
            argmin_t = t;
        }
    }
    let (k0, _, _) = gm_constants(n, alpha, beta, m);
    Ok(GmSample { a, b, alpha, beta, m, n, min_g, argmin_t, in_proven_region: gm_in_proven_region(alpha, beta, k0) })
}

/// `points` log-spaced values of t in [1e−3, 1e3].
pub fn gm_study_ts(points: usize) -> Vec<f64> {
    let k = points.max(2) - 1;
    (0..=k).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / k as f64)).collect()
}

/// 200 parameter points (a, b, α, β, m, n) with αβ > 0 and m < (n−2)/2.
pub fn gm_study_grid() -> Vec<[f64; 6]> {
    let pairs = [
        (0.5, 0.25),
        (0.5, 1.0),
        (1.0, 0.25),
        (1.0, 1.0),
        (2.0, 0.25),
        (2.0, 1.0),
        (-1.0, -0.5),
        (-1.0, -1.0),
        (-2.0, -0.5),
        (-2.0, -1.0),
    ];
    let nm = [(3.0, 0.0), (4.0, 0.0), (4.0, 0.5), (5.0, 1.0), (5.0, -1.0)];
    let ab = [(1.0, 1.0), (0.5, 2.0), (2.0, 0.5), (1.0, 3.0)];
    let mut out = Vec::with_capacity(200);
    for &(alpha, beta) in &pairs {
        for &(n, m) in &nm {
            for &(a, b) in &ab {
                out.push([a, b, alpha, beta, m, n]);
            }
        }
    }
    out
}

fn ghoussoub_moradifam(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    p_is_two(a)?;
    let (n, aa, bb, alpha, beta, m) =
        (a.get("n"), a.get("a"), a.get("b"), a.get("alpha"), a.get("beta"), a.get("m"));
    require(aa > 0.0 && bb > 0.0, "a > 0 and b > 0")?;
    require(alpha != 0.0, "alpha != 0")?;
    require(alpha * beta > 0.0 || beta == 0.0, "alpha*beta > 0")?;
    require(m <= (n - 2.0) / 2.0, "m <= (n - 2)/2")?;
    let (k0, aq, bq) = gm_constants(n, alpha, beta, m);
    let in_region = gm_in_proven_region(alpha, beta, k0);
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_euclidean()?
        .bind("K0", k0)
        .bind("A", aq)
        .bind("B", bq)
        .bind("C", k0 * k0 / 4.0);
    d.w = "(a + b*t^alpha)^beta/t^(2*m)".into();
    d.g = "(K0/(2*t))*(1 - beta*(b*t^alpha/a)*hyp2f1(1+A-B, 1+A+B, 2, -b*t^alpha/a)/hyp2f1(A-B, A+B, 1, -b*t^alpha/a))".into();
    d.big_w = "C/t^2".into();
    d.homogeneity = Some(2.0);
    d.sharp = k0 * k0 / 4.0;
    d.positivity = if in_region || d.model_exact_l || beta == 0.0 {
        Positivity::Proven
    } else {
        Positivity::Unproven
    };
    d.build()
}

fn carvalho_cavalcante(a: &Args) -> Result<Instance> {
    let geo = a.geometry()?;
    let (p, aa, bb) = (a.get("p"), a.get("a"), a.get("b"));
    require(aa > 0.0 && bb > 0.0, "a > 0 and b > 0")?;
    // ρ/a has unit gradient bound and p-Laplacian floor b/a^{p−1}.
    let floor = bb / aa.powf(p - 1.0);
    let sharp = bb.powf(p) / (p.powf(p) * aa.powf(p * (p - 1.0)));
    let mut d = Draft::new(a, geo, 0.0, f64::INFINITY)
        .l_expr("Lfloor")?
        .bind("Lfloor", floor)
        .bind("c", (floor / p).powf(p - 1.0))
        .bind("sharp", sharp);
    d.g = "c".into();
    d.big_w = "sharp".into();
    d.sharp = sharp;
    d.build()
}


#[cfg(test)]
mod equality_suite {
    use super::*;
    use crate::riccati::{certify, Verdict};

    #[test]
    fn every_entry_has_vanishing_residual() {
        for name in names() {
            let i = instantiate(name, &ParamBinding::new()).unwrap();
            let g = i.spec.bind(&i.g);
            let rep = certify(&i.spec, &g, &GridPolicy::Log, 512, 1e-8).unwrap();
            assert_eq!(rep.verdict, Verdict::Certified, "{name}");
            assert!(rep.max_relative_residual <= 1e-8, "{name}");
        }
    }
}
