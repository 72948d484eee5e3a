//! `riccati`: certify Riccati pairs, verify Hardy-type inequalities, run sweeps.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 failed certification or
//! violated margin, 3 inconclusive or numerical failure.

mod config;
mod family;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{ConfigError, SpecConfig};
use family::{Context, FamilySpec};
use output::{document_json, short, sig, write_file, Header, F};
use rayon::prelude::*;
use riccati_core::catalog::{self, Instance};
use riccati_core::ode::Stop;
use riccati_core::riccati::{certify, solve_ivp, Direction, GridPolicy, RiccatiPairSpec, SignRequirement, Verdict};
use riccati_core::verifier::{
    sharpness_sweep, spectral_lambda1, GenericPair, InequalityMargin, MultiplicativeMode, RadialSetting,
    SweepReport, SweepTarget,
};
use riccati_core::{Error, ModelGeometry, ParamBinding, ScalarExpr};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "riccati", version, about = "Riccati-pair certification and Hardy-type inequality checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Riccati-pair inequality for G on a grid.
    Certify(CertifyArgs),
    /// Integrate the equality ODE from (t0, G0).
    SolveRiccati(SolveArgs),
    /// Evaluate inequality margins over a test-function family.
    Verify(FamilyArgs),
    /// Report achieved quotients over a family against the sharp constant.
    Sweep(FamilyArgs),
    /// Smallest radial Dirichlet eigenvalue on a geodesic ball.
    Spectrum(SpectrumArgs),
    /// Positive zeros of J_nu, one per line.
    BesselZeros {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Inspect the catalog of admissible G.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Sample G of the two-weight family over a parameter grid and emit CSV.
    GmPositivity {
        /// Number of log-spaced t samples in [1e-3, 1e3].
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    /// Print the fully expanded spec of an entry as a config file.
    Show {
        name: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Catalog entry to instantiate.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    catalog: Option<String>,
    /// Comma-separated key=value parameters for the catalog entry.
    #[arg(long, default_value = "", requires = "catalog")]
    params: String,
    /// Expression for an entry's `psi` parameter.
    #[arg(long, requires = "catalog")]
    psi: Option<String>,
    /// Spec config file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridKind {
    Log,
    Uniform,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "log")]
    grid: GridKind,
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    g0: f64,
    #[arg(long, value_enum, default_value = "forward")]
    direction: DirectionArg,
    /// Last sample point.
    #[arg(long)]
    to: f64,
    /// Number of geometrically spaced samples from t0 to `to`.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Catalog entry, `up`, `ckn`, `ckn-fura` or `generic`.
    #[arg(long)]
    inequality: String,
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long)]
    psi: Option<String>,
    /// Family spec, e.g. `power_cutoff:eps=0.1|0.01,r0=1e-6,R=1`.
    #[arg(long)]
    family: Option<String>,
    /// Weight w (generic).
    #[arg(long)]
    w: Option<String>,
    /// Vector-field profile G (generic).
    #[arg(long)]
    g: Option<String>,
    /// Nonlinearity H, written in t (generic).
    #[arg(long)]
    h: Option<String>,
    /// Use the multiplicative form (generic).
    #[arg(long)]
    multiplicative: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    kappa: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    /// Cells of the coarsest grid; the solver also uses 2N and 4N.
    #[arg(long = "N", default_value_t = 2000)]
    cells: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    msg: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InExpr { source, .. } => exit_code(source),
        Error::Parameter(_)
        | Error::NotFound(_)
        | Error::Syntax { .. }
        | Error::Arity { .. }
        | Error::Unbound(_)
        | Error::Hypothesis(_)
        | Error::Contract(_)
        | Error::UnsupportedRange { .. } => EXIT_USAGE,
        _ => EXIT_INCONCLUSIVE,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), msg: e.to_string() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self { code: EXIT_USAGE, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, msg: msg.into() }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    usage(format!("{}: {e}", path.display()))
}

type CmdResult = Result<u8, CliError>;

fn parse_params(src: &str) -> Result<ParamBinding, CliError> {
    let mut b = ParamBinding::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("--params: expected key=value, got `{item}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| usage(format!("--params: `{v}` is not a number")))?;
        b.set(k.trim(), v);
    }
    Ok(b)
}

fn expr_params(psi: &Option<String>) -> Result<BTreeMap<String, ScalarExpr>, CliError> {
    let mut m = BTreeMap::new();
    if let Some(src) = psi {
        m.insert("psi".to_string(), ScalarExpr::parse(src)?);
    }
    Ok(m)
}

fn instance(name: &str, params: &str, psi: &Option<String>) -> Result<Instance, CliError> {
    Ok(catalog::instantiate_with_exprs(name, &parse_params(params)?, &expr_params(psi)?)?)
}

fn load_source(src: &SourceArgs) -> Result<(RiccatiPairSpec, ScalarExpr, String), CliError> {
    match (&src.catalog, &src.spec) {
        (Some(name), _) => {
            let inst = instance(name, &src.params, &src.psi)?;
            Ok((inst.spec, inst.g, format!("catalog:{name}")))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let (spec, g) = SpecConfig::from_toml(&text)?.build()?;
            Ok((spec, g, path.display().to_string()))
        }
        (None, None) => Err(usage("one of --catalog or --spec is required")),
    }
}

fn emit<B: Serialize>(out: &Option<PathBuf>, header: &Header, body: &B) -> Result<(), CliError> {
    if let Some(path) = out {
        write_file(path, &document_json(header, body)).map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

fn sign_word(s: SignRequirement) -> &'static str {
    match s {
        SignRequirement::NonNegative => "nonnegative",
        SignRequirement::NonPositive => "nonpositive",
        SignRequirement::Free => "free",
    }
}

#[derive(Serialize)]
struct CertifySample {
    t: F,
    #[serde(rename = "G")]
    g: F,
    #[serde(rename = "W")]
    big_w: F,
    residual: F,
    scaled_residual: F,
}

#[derive(Serialize)]
struct CertifyBody {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_witness: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    tolerance: F,
    sign: &'static str,
    grid: &'static str,
    points: usize,
    min_residual: F,
    max_relative_residual: F,
    worst_t: F,
    #[serde(rename = "min_G")]
    min_g: F,
    #[serde(rename = "max_G")]
    max_g: F,
    samples: Vec<CertifySample>,
}

fn run_certify(a: &CertifyArgs) -> CmdResult {
    let start = Instant::now();
    let (spec, g, source) = load_source(&a.source)?;
    if !(a.tol >= 0.0) {
        return Err(usage(format!("--tol {} must be nonnegative", a.tol)));
    }
    let (policy, grid) = match a.grid {
        GridKind::Log => (GridPolicy::Log, "log"),
        GridKind::Uniform => (GridPolicy::Uniform, "uniform"),
    };
    let profile = spec.bind(&g);
    let rep = certify(&spec, &profile, &policy, a.points, a.tol)?;
    let (t_witness, reason) = match &rep.verdict {
        Verdict::Certified => (None, None),
        Verdict::Failed { t_witness } => (Some(F(*t_witness)), None),
        Verdict::Inconclusive { t, reason } => (Some(F(*t)), Some(reason.clone())),
    };
    let samples = (0..rep.residuals.len())
        .map(|i| CertifySample {
            t: F(rep.grid[i]),
            g: F(rep.g_values[i]),
            big_w: F(rep.w_values[i]),
            residual: F(rep.residuals[i]),
            scaled_residual: F(rep.scaled_residuals[i]),
        })
        .collect();
    let body = CertifyBody {
        verdict: rep.verdict.tag(),
        t_witness,
        reason,
        tolerance: F(rep.tolerance_used),
        sign: sign_word(rep.sign),
        grid,
        points: rep.residuals.len(),
        min_residual: F(rep.min_residual),
        max_relative_residual: F(rep.max_relative_residual),
        worst_t: F(rep.worst_t),
        min_g: F(rep.min_g),
        max_g: F(rep.max_g),
        samples,
    };
    emit(&a.out, &Header::new("certify", source.clone(), start.elapsed()), &body)?;
    println!("{source}: {}", rep.verdict.tag());
    println!(
        "  points {}, max |residual|/(1+|W|) {}, worst t {}, G in [{}, {}]",
        rep.residuals.len(),
        short(rep.max_relative_residual),
        short(rep.worst_t),
        short(rep.min_g),
        short(rep.max_g)
    );
    Ok(match rep.verdict {
        Verdict::Certified => {
            println!("  tolerance {}", short(rep.tolerance_used));
            EXIT_OK
        }
        Verdict::Failed { t_witness } => {
            println!("  witness t = {}", short(t_witness));
            EXIT_FAILED
        }
        Verdict::Inconclusive { t, reason } => {
            println!("  inconclusive at t = {}: {reason}", short(t));
            EXIT_INCONCLUSIVE
        }
    })
}

#[derive(Serialize)]
struct TrajectorySample {
    t: F,
    #[serde(rename = "G")]
    g: F,
}

#[derive(Serialize)]
struct SolveBody {
    direction: &'static str,
    t0: F,
    #[serde(rename = "G0")]
    g0: F,
    stop: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    blow_up_at: Option<F>,
    samples: Vec<TrajectorySample>,
}

fn run_solve(a: &SolveArgs) -> CmdResult {
    let start = Instant::now();
    let (spec, _, source) = load_source(&a.source)?;
    if !(a.t0 > 0.0 && a.to > 0.0) || a.samples < 2 {
        return Err(usage("--t0 and --to must be positive and --samples at least 2"));
    }
    let k = a.samples - 1;
    let ratio = (a.to / a.t0).ln();
    let ts: Vec<f64> = (0..=k).map(|i| a.t0 * (ratio * i as f64 / k as f64).exp()).collect();
    let (direction, word) = match a.direction {
        DirectionArg::Forward => (Direction::Forward, "forward"),
        DirectionArg::Backward => (Direction::Backward, "backward"),
    };
    let traj = solve_ivp(&spec, a.t0, a.g0, direction, &ts)?;
    let stop = match traj.stop {
        Stop::Completed => "completed",
        Stop::BlowUp(_) => "blow_up",
        Stop::StepCollapse(_) => "step_collapse",
    };
    let body = SolveBody {
        direction: word,
        t0: F(a.t0),
        g0: F(a.g0),
        stop,
        blow_up_at: traj.blow_up_at.map(F),
        samples: traj.samples.iter().map(|&(t, g)| TrajectorySample { t: F(t), g: F(g) }).collect(),
    };
    emit(&a.out, &Header::new("solve-riccati", source.clone(), start.elapsed()), &body)?;
    println!("{source}: {} samples, stop {stop}", traj.samples.len());
    if let Some(t) = traj.blow_up_at {
        println!("  |G| exceeded the blow-up threshold at t = {}", short(t));
    }
    if let Some(&(t, g)) = traj.samples.last() {
        println!("  last sample G({}) = {}", short(t), short(g));
    }
    Ok(EXIT_OK)
}

struct Target {
    target: SweepTarget,
    params: BTreeMap<String, f64>,
    ctx: Context,
    default_family: &'static str,
}

fn geometry_from(params: &ParamBinding, kappa: f64, n: f64, p: f64) -> Result<ModelGeometry, CliError> {
    let n = params.get("n").unwrap_or(n);
    if n.fract() != 0.0 || !(n >= 1.0) || n > u32::MAX as f64 {
        return Err(usage(format!("n = {n} must be a positive integer")));
    }
    Ok(ModelGeometry::new(params.get("kappa").unwrap_or(kappa), n as u32, params.get("p").unwrap_or(p))?)
}

fn check_keys(name: &str, params: &ParamBinding, allowed: &[&str]) -> Result<(), CliError> {
    match params.iter().find(|(k, _)| !allowed.contains(k)) {
        Some((k, _)) => Err(usage(format!("`{name}` has no parameter `{k}` (expected {})", allowed.join(", ")))),
        None => Ok(()),
    }
}

fn geo_params(geo: &ModelGeometry) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("kappa".to_string(), geo.kappa()),
        ("n".to_string(), geo.n() as f64),
        ("p".to_string(), geo.p()),
    ])
}

fn build_target(a: &FamilyArgs) -> Result<Target, CliError> {
    let params = parse_params(&a.params)?;
    let name = a.inequality.as_str();
    if name != "generic" && (a.w.is_some() || a.g.is_some() || a.h.is_some() || a.multiplicative) {
        return Err(usage("--w, --g, --h and --multiplicative only apply to --inequality generic"));
    }
    let multiplicative = |kappa: f64, keys: &[&str], mode: &dyn Fn(&ParamBinding) -> MultiplicativeMode| {
        check_keys(name, &params, keys)?;
        let geo = geometry_from(&params, kappa, 3.0, 2.0)?;
        let mode = mode(&params);
        mode.check_hypotheses(&geo)?;
        let mut out = geo_params(&geo);
        let (alpha, r) = match mode {
            MultiplicativeMode::UncertaintyPrinciple { alpha } => (alpha, 0.0),
            MultiplicativeMode::Ckn { alpha, r } => (alpha, r),
            MultiplicativeMode::CknFura { c } => {
                out.insert("c".into(), c);
                (0.0, 0.0)
            }
        };
        if !matches!(mode, MultiplicativeMode::CknFura { .. }) {
            out.insert("alpha".into(), alpha);
        }
        if r > 0.0 {
            out.insert("r".into(), r);
        }
        let ctx = Context { n: geo.n() as f64, p: geo.p(), alpha, r, binding: ParamBinding::new() };
        Ok::<_, CliError>((SweepTarget::Multiplicative { geo, mode }, out, ctx))
    };
    let (target, out, ctx, default_family) = match name {
        "up" => {
            let (t, o, c) = multiplicative(0.0, &["kappa", "n", "p", "alpha"], &|b| {
                MultiplicativeMode::UncertaintyPrinciple { alpha: b.get("alpha").unwrap_or(1.0) }
            })?;
            (t, o, c, "gaussian:scale=0.5|1|2|4")
        }
        "ckn" => {
            let (t, o, c) = multiplicative(0.0, &["kappa", "n", "p", "alpha", "r"], &|b| MultiplicativeMode::Ckn {
                alpha: b.get("alpha").unwrap_or(1.0),
                r: b.get("r").unwrap_or(3.0),
            })?;
            (t, o, c, "talenti:scale=0.25|0.5|1|2|4")
        }
        "ckn-fura" => {
            let (t, o, c) = multiplicative(-1.0, &["kappa", "n", "p", "c"], &|b| MultiplicativeMode::CknFura {
                c: b.get("c").unwrap_or(0.0),
            })?;
            (t, o, c, "bump:width=0.25|0.5|0.75,center=1")
        }
        "generic" => {
            let geo = geometry_from(&params, 0.0, 3.0, 2.0)?;
            let mut binding = ParamBinding::new();
            for (k, v) in params.iter().filter(|(k, _)| !matches!(*k, "kappa" | "n" | "p")) {
                binding.set(k, v);
            }
            let g = a.g.as_deref().ok_or_else(|| usage("--inequality generic needs --g"))?;
            let pair = GenericPair {
                w: ScalarExpr::parse(a.w.as_deref().unwrap_or("1"))?,
                g: ScalarExpr::parse(g)?,
                h: ScalarExpr::parse(a.h.as_deref().unwrap_or("abs(t)^p"))?,
                binding: binding.clone(),
            };
            let mut out = geo_params(&geo);
            out.extend(binding.iter().map(|(k, v)| (k.to_string(), v)));
            let mut full = binding;
            full.set("kappa", geo.kappa());
            full.set("n", geo.n() as f64);
            full.set("p", geo.p());
            let ctx = Context { n: geo.n() as f64, p: geo.p(), alpha: 0.0, r: 0.0, binding: full };
            let target = SweepTarget::Generic {
                setting: RadialSetting::centered(geo),
                pair: Box::new(pair),
                multiplicative: a.multiplicative,
            };
            (target, out, ctx, "bump:width=0.25|0.5|0.75,center=1")
        }
        entry => {
            let inst = instance(entry, &a.params, &a.psi)?;
            let b = inst.spec.binding();
            let out = b.iter().map(|(k, v)| (k.to_string(), v)).collect();
            let geo = inst.spec.geo;
            let ctx = Context {
                n: geo.n() as f64,
                p: geo.p(),
                alpha: b.get("alpha").unwrap_or(0.0),
                r: 0.0,
                binding: b,
            };
            let family = if inst.spec.hi < 1.0 || inst.spec.lo > 0.0 {
                "bump:width=0.1|0.2|0.3,center=0.5"
            } else {
                "power_cutoff:R=1"
            };
            (SweepTarget::Entry(Box::new(inst)), out, ctx, family)
        }
    };
    if a.psi.is_some() && !matches!(target, SweepTarget::Entry(_)) {
        return Err(usage("--psi only applies to catalog entries"));
    }
    Ok(Target { target, params: out, ctx, default_family })
}

#[derive(Serialize)]
struct MemberRow {
    family_param: F,
    lhs: F,
    rhs: F,
    margin: F,
    quad_error: F,
    ratio: F,
    violated: bool,
}

#[derive(Serialize)]
struct SkippedRow {
    family_param: F,
    note: String,
}

#[derive(Serialize)]
struct Summary {
    min_margin: F,
    achieved_ratio_extremum: F,
    sharp_constant: F,
    violations: usize,
}

#[derive(Serialize)]
struct FamilyBody {
    inequality: String,
    params: BTreeMap<String, F>,
    family: String,
    members: Vec<MemberRow>,
    skipped: Vec<SkippedRow>,
    summary: Summary,
}

fn family_body(t: &Target, family: &str, rep: &SweepReport) -> FamilyBody {
    let members: Vec<MemberRow> = rep
        .rows
        .iter()
        .map(|r| MemberRow {
            family_param: F(r.family_param),
            lhs: F(r.lhs),
            rhs: F(r.rhs),
            margin: F(r.margin),
            quad_error: F(r.quad_error),
            ratio: F(r.ratio),
            violated: InequalityMargin::new(r.lhs, r.rhs, r.quad_error).is_violated(),
        })
        .collect();
    let violations = members.iter().filter(|m| m.violated).count();
    FamilyBody {
        inequality: rep.inequality.clone(),
        params: t.params.iter().map(|(k, v)| (k.clone(), F(*v))).collect(),
        family: family.to_string(),
        members,
        skipped: rep
            .skipped
            .iter()
            .map(|s| SkippedRow { family_param: F(s.family_param), note: s.note.clone() })
            .collect(),
        summary: Summary {
            min_margin: F(rep.min_margin),
            achieved_ratio_extremum: F(rep.ratio_extremum),
            sharp_constant: F(rep.sharp_constant),
            violations,
        },
    }
}

fn run_family(a: &FamilyArgs, command: &str) -> CmdResult {
    let start = Instant::now();
    let t = build_target(a)?;
    let family = a.family.clone().unwrap_or_else(|| t.default_family.to_string());
    let members = FamilySpec::parse(&family)?.members(&t.ctx)?;
    let rep = sharpness_sweep(&t.target, &members);
    let body = family_body(&t, &family, &rep);
    emit(&a.out, &Header::new(command, a.inequality.clone(), start.elapsed()), &body)?;
    println!("{} with family {family}", rep.inequality);
    if command == "sweep" {
        println!("  {:>14}  {:>14}  {:>14}", "family_param", "ratio", "margin");
        for r in &rep.rows {
            println!("  {:>14}  {:>14}  {:>14}", short(r.family_param), short(r.ratio), short(r.margin));
        }
    }
    for s in &rep.skipped {
        println!("  skipped {}: {}", short(s.family_param), s.note);
    }
    println!(
        "  {} members, min margin {}, ratio extremum {} vs sharp constant {}, {} violation(s)",
        rep.rows.len(),
        short(rep.min_margin),
        short(rep.ratio_extremum),
        short(rep.sharp_constant),
        body.summary.violations
    );
    Ok(if body.summary.violations > 0 {
        EXIT_FAILED
    } else if rep.rows.is_empty() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct SpectrumBody {
    kappa: F,
    n: u32,
    #[serde(rename = "R")]
    r: F,
    cells: usize,
    lambda1: F,
    lambda_coarse: F,
    lambda_fine: F,
    convergence_ratio: F,
}

fn run_spectrum(a: &SpectrumArgs) -> CmdResult {
    let start = Instant::now();
    let geo = ModelGeometry::new(a.kappa, a.n, 2.0)?;
    let res = spectral_lambda1(&geo, a.r, a.cells)?;
    let body = SpectrumBody {
        kappa: F(a.kappa),
        n: a.n,
        r: F(a.r),
        cells: res.cells,
        lambda1: F(res.lambda1),
        lambda_coarse: F(res.lambda_coarse),
        lambda_fine: F(res.lambda_fine),
        convergence_ratio: F(res.convergence_ratio),
    };
    emit(&a.out, &Header::new("spectrum", String::new(), start.elapsed()), &body)?;
    println!("lambda1 = {}", short(res.lambda1));
    println!(
        "  N = {}: {}, 2N: {}, convergence ratio {}",
        res.cells,
        short(res.lambda_coarse),
        short(res.lambda_fine),
        short(res.convergence_ratio)
    );
    Ok(EXIT_OK)
}

fn run_bessel_zeros(nu: f64, count: usize) -> CmdResult {
    for k in 1..=count {
        println!("{}", sig(riccati_core::specfun::bessel_zero(nu, k)?, 15));
    }
    Ok(EXIT_OK)
}

fn param_list(e: &catalog::EntrySummary) -> String {
    let mut parts: Vec<String> = e
        .params
        .iter()
        .map(|p| match p.default {
            Some(v) => format!("{}={v}", p.name),
            None => p.name.to_string(),
        })
        .collect();
    parts.extend(e.expr_params.iter().map(|s| format!("{s}=<expr>")));
    parts.join(",")
}

fn run_catalog(cmd: &CatalogCmd) -> CmdResult {
    match cmd {
        CatalogCmd::List => {
            for e in catalog::list_catalog() {
                println!("{:<24} {:<48} {}", e.name, param_list(&e), e.citation);
            }
            Ok(EXIT_OK)
        }
        CatalogCmd::Show { name, params, psi, out } => {
            let inst = instance(name, params, psi)?;
            let summary = catalog::summary(name)?;
            let text = SpecConfig::from_instance(&inst, summary.citation).to_toml();
            match out {
                Some(path) => write_file(path, &text).map_err(|e| io_error(path, e))?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_gm_positivity(points: usize, out: &Option<PathBuf>) -> CmdResult {
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let ts = catalog::gm_study_ts(points);
    let grid = catalog::gm_study_grid();
    let samples = grid
        .par_iter()
        .map(|&[a, b, alpha, beta, m, n]| catalog::gm_positivity_sample(n, a, b, alpha, beta, m, &ts))
        .collect::<riccati_core::Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_csv = |e: csv::Error| CliError { code: EXIT_INCONCLUSIVE, msg: e.to_string() };
    w.write_record(["a", "b", "alpha", "beta", "m", "n", "min_G", "argmin_t", "in_proven_region"])
        .map_err(to_csv)?;
    for s in &samples {
        let mut rec: Vec<String> =
            [s.a, s.b, s.alpha, s.beta, s.m, s.n, s.min_g, s.argmin_t].iter().map(|x| format!("{x:.16e}")).collect();
        rec.push(s.in_proven_region.to_string());
        w.write_record(&rec).map_err(to_csv)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError { code: EXIT_INCONCLUSIVE, msg: e.to_string() })?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    let proven_failures = samples.iter().filter(|s| s.in_proven_region && !(s.min_g > 0.0)).count();
    let other_failures = samples.iter().filter(|s| !s.in_proven_region && !(s.min_g > 0.0)).count();
    let proven = samples.iter().filter(|s| s.in_proven_region).count();
    let summary = format!(
        "{} points ({proven} in the proven region), {points} t samples; min G <= 0 at {proven_failures} proven and {other_failures} unproven point(s)",
        samples.len()
    );
    match out {
        Some(path) => {
            write_file(path, &text).map_err(|e| io_error(path, e))?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(if proven_failures > 0 { EXIT_FAILED } else { EXIT_OK })
}

fn run(cli: Cli) -> CmdResult {
    match &cli.cmd {
        Cmd::Certify(a) => run_certify(a),
        Cmd::SolveRiccati(a) => run_solve(a),
        Cmd::Verify(a) => run_family(a, "verify"),
        Cmd::Sweep(a) => run_family(a, "sweep"),
        Cmd::Spectrum(a) => run_spectrum(a),
        Cmd::BesselZeros { nu, count } => run_bessel_zeros(*nu, *count),
        Cmd::Catalog { cmd } => run_catalog(cmd),
        Cmd::GmPositivity { points, out } => run_gm_positivity(*points, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
