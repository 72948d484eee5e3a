//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_core::catalog::{gm_positivity_sample, gm_study_grid, gm_study_ts, instantiate, names};
use riccati_core::exprdsl::fd_step;
use riccati_core::geometry::deficit_k;
use riccati_core::riccati::{bessel_to_riccati, certify, riccati_to_bessel, GridPolicy, Profile, Verdict};
use riccati_core::specfun::bessel_zero;
use riccati_core::verifier::{
    extremal_identity_check, multiplicative_margin, multiplicative_margin_generic, power_cutoff_family,
    sharpness_sweep, spectral_lambda1, FamilyMember, GenericPair, MultiplicativeMode, RadialSetting,
    RadialTestFunction, SweepTarget,
};
use riccati_core::{Error, ModelGeometry, ParamBinding, ScalarExpr};
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn geo(kappa: f64, n: u32, p: f64) -> ModelGeometry {
    ModelGeometry::new(kappa, n, p).unwrap()
}

fn bind(kv: &[(&str, f64)]) -> ParamBinding {
    let mut b = ParamBinding::new();
    for (k, v) in kv {
        b.set(k, *v);
    }
    b
}

fn bessel_zero_value(elapsed: &mut Duration) -> Outcome {
    let start = Instant::now();
    let z = bessel_zero(0.0, 1);
    *elapsed = start.elapsed();
    match z {
        Ok(z) => outcome(
            (z - 2.4048).abs() <= 5e-5 && *elapsed < Duration::from_millis(10),
            format!("j_01 = {z:.10}"),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn equality_suite(elapsed: &mut Duration) -> Outcome {
    let entries: Vec<(&str, ParamBinding)> = vec![
        ("hardy", bind(&[])),
        ("hardy_log", bind(&[])),
        ("acr", bind(&[])),
        ("brezis_vazquez", bind(&[])),
        ("faber_krahn", bind(&[])),
        ("mckean", bind(&[])),
        ("mckean_improved", bind(&[])),
        ("interpolation", bind(&[])),
        ("akutagawa_kumura", bind(&[])),
        ("carvalho_cavalcante", bind(&[])),
        ("ghoussoub_moradifam", bind(&[("alpha", 1.0), ("beta", 0.5)])),
    ];
    let start = Instant::now();
    let mut worst = (0.0, "");
    let mut failures = Vec::new();
    for (name, params) in &entries {
        let inst = match instantiate(name, params) {
            Ok(i) => i,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        if *name == "ghoussoub_moradifam" && inst.positivity != riccati_core::catalog::Positivity::Proven {
            failures.push(format!("{name}: parameters outside the proven region"));
        }
        let g = inst.spec.bind(&inst.g);
        match certify(&inst.spec, &g, &GridPolicy::Log, 512, 1e-8) {
            Ok(r) => {
                if r.verdict != Verdict::Certified || r.max_relative_residual > 1e-8 {
                    failures.push(format!("{name}: {} max_rel {:.3e}", r.verdict.tag(), r.max_relative_residual));
                }
                if r.max_relative_residual >= worst.0 {
                    worst = (r.max_relative_residual, name);
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    *elapsed = start.elapsed();
    let pass = failures.is_empty() && *elapsed < Duration::from_secs(5);
    let detail = if failures.is_empty() {
        format!("{} entries certified, worst max_rel {:.2e} ({})", entries.len(), worst.0, worst.1)
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn spectrum(elapsed: &mut Duration) -> Outcome {
    let start = Instant::now();
    let j01 = 5.783_185_962_946_784;
    let disk = spectral_lambda1(&geo(0.0, 2, 2.0), 1.0, 4000);
    let large = spectral_lambda1(&geo(-1.0, 2, 2.0), 40.0, 8000);
    *elapsed = start.elapsed();
    match (disk, large) {
        (Ok(d), Ok(l)) => {
            let rel = (d.lambda1 / j01 - 1.0).abs();
            outcome(
                rel <= 2e-3 && (0.25..=0.26).contains(&l.lambda1) && *elapsed < Duration::from_secs(30),
                format!("disk {:.8} (rel {rel:.1e}), H^2 B(40) {:.6}", d.lambda1, l.lambda1),
            )
        }
        (d, l) => outcome(false, format!("{:?} {:?}", d.err(), l.err())),
    }
}

fn cheng() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [2, 3] {
        for r in [1.0, 2.0] {
            let (h, f) = match (
                spectral_lambda1(&geo(-1.0, n, 2.0), r, 400),
                spectral_lambda1(&geo(0.0, n, 2.0), r, 400),
            ) {
                (Ok(h), Ok(f)) => (h, f),
                _ => return outcome(false, format!("solver failed at n={n}, R={r}")),
            };
            let err = (h.lambda1 - h.lambda_fine).abs() + (f.lambda1 - f.lambda_fine).abs();
            let gap = h.lambda1 - f.lambda1;
            pass &= gap > err;
            details.push(format!("n={n} R={r}: {gap:.4e}"));
        }
    }
    outcome(pass, format!("gaps {}", details.join(", ")))
}

fn hardy_sweep(elapsed: &mut Duration) -> Outcome {
    let start = Instant::now();
    let inst = instantiate("hardy", &bind(&[("n", 3.0), ("p", 2.0), ("alpha", 0.0)])).unwrap();
    let family = power_cutoff_family(
        3.0,
        2.0,
        0.0,
        &[0.3, 0.1, 0.03, 0.01, 0.0],
        &[1e-2, 1e-6, 1e-12, 1e-30, 1e-60],
        1.0,
    )
    .unwrap();
    let report = sharpness_sweep(&SweepTarget::Entry(Box::new(inst)), &family);
    *elapsed = start.elapsed();
    let min_ratio = report.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    outcome(
        report.skipped.is_empty()
            && report.rows.iter().all(|r| r.ratio >= 0.25 - 1e-6)
            && report.ratio_extremum <= 0.2510
            && *elapsed < Duration::from_secs(10),
        format!("{} members, infimum {min_ratio:.6}", report.rows.len()),
    )
}

fn uncertainty_principle(pairs: &mut Vec<(f64, f64, f64)>) -> Outcome {
    let g = geo(0.0, 3, 2.0);
    let mode = MultiplicativeMode::UncertaintyPrinciple { alpha: 1.0 };
    let u = RadialTestFunction::gaussian(1.0, 2.0).unwrap();
    let mut margins = Vec::new();
    for lam in [0.5, 1.0, 2.0, 4.0] {
        match multiplicative_margin(&g, mode, &u.scaled(lam).unwrap()) {
            Ok(r) => {
                pairs.push((r.i, r.j, 2.0));
                margins.push(r.margin.margin);
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let base = margins[1];
    let spread = margins.iter().map(|m| (m - base).abs()).fold(0.0, f64::max);
    outcome(base.abs() <= 1e-6 && spread <= 1e-8, format!("margin {base:.2e}, scaling spread {spread:.2e}"))
}

fn ckn() -> Outcome {
    let g = geo(0.0, 3, 2.0);
    let mode = MultiplicativeMode::Ckn { alpha: 1.0, r: 3.0 };
    let base = RadialTestFunction::talenti(1.0, 2.0, 3.0).unwrap();
    let family: Vec<FamilyMember> = [0.25, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&l| FamilyMember { param: l, u: base.scaled(l).unwrap() })
        .collect();
    let report = sharpness_sweep(&SweepTarget::Multiplicative { geo: g, mode }, &family);
    let dev = report.rows.iter().map(|r| (r.ratio - report.sharp_constant).abs()).fold(0.0, f64::max);
    outcome(
        report.skipped.is_empty() && !report.rows.is_empty() && dev <= 1e-4,
        format!("ratio infimum {:.10}, max deviation {dev:.2e}", report.ratio_extremum),
    )
}

fn extremal() -> Outcome {
    let a = extremal_identity_check(&geo(0.0, 3, 2.0), 1.0);
    let b = extremal_identity_check(&geo(-1.0, 2, 2.0), 1.0);
    let c = extremal_identity_check(&geo(-1.0, 3, 2.0), 0.0);
    match (a, b) {
        (Ok(a), Ok(b)) => outcome(
            a.discrepancy <= 1e-8 && b.discrepancy <= 1e-8 && matches!(c, Err(Error::Hypothesis(_))),
            format!("discrepancies {:.1e}, {:.1e}; alpha=0 rejected: {}", a.discrepancy, b.discrepancy, c.is_err()),
        ),
        (a, b) => outcome(false, format!("{:?} {:?}", a.err(), b.err())),
    }
}

fn gm_positivity() -> Outcome {
    let ts = gm_study_ts(200);
    let grid = gm_study_grid();
    let (mut inside, mut inside_fail, mut outside_fail) = (0, 0, 0);
    for p in &grid {
        let ok = match gm_positivity_sample(p[5], p[0], p[1], p[2], p[3], p[4], &ts) {
            Ok(s) => {
                if s.in_proven_region {
                    inside += 1;
                }
                (s.min_g > 0.0, s.in_proven_region)
            }
            Err(_) => (false, false),
        };
        match ok {
            (false, true) => inside_fail += 1,
            (false, false) => outside_fail += 1,
            _ => {}
        }
    }
    outcome(
        inside_fail == 0 && outside_fail == 0,
        format!(
            "{} points ({inside} in the proven region): {inside_fail} failures inside, {outside_fail} outside",
            grid.len()
        ),
    )
}

fn random_expression(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) { "t".into() } else { format!("{:.5}", rng.gen_range(0.5..2.0)) };
    }
    let a = random_expression(rng, depth - 1);
    match rng.gen_range(0..13) {
        0 => format!("({a} + {})", random_expression(rng, depth - 1)),
        1 => format!("({a} - {})", random_expression(rng, depth - 1)),
        2 => format!("({a} * {})", random_expression(rng, depth - 1)),
        3 => format!("({a} / (1 + ({})^2))", random_expression(rng, depth - 1)),
        4 => format!("(1 + ({a})^2)^({:.4})", rng.gen_range(-1.5..1.5)),
        5 => format!("exp(({a})/(1 + ({a})^2))"),
        6 => format!("log(1 + ({a})^2)"),
        7 => format!("sinh(({a})/(1 + ({a})^2))"),
        8 => format!("cosh(({a})/(1 + ({a})^2))"),
        9 => format!("coth(1 + ({a})^2)"),
        10 => format!("sqrt(1 + ({a})^2)"),
        11 => format!("ct(1 + (({a})/(1 + ({a})^2))^2)"),
        _ => format!("s(1 + (({a})/(1 + ({a})^2))^2)"),
    }
}

fn property_suites(pairs: &[(f64, f64, f64)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut fails = Vec::new();

    let mut deriv_fail = 0;
    for _ in 0..1000 {
        let src = random_expression(&mut rng, 4);
        let t = rng.gen_range(0.5..3.0);
        let b = ParamBinding::new().with("kappa", rng.gen_range(-2.0..=0.0)).with("n", 3.0);
        let e = ScalarExpr::parse(&src).unwrap();
        let ok = (|| -> riccati_core::Result<bool> {
            let (_, d) = e.eval_d(t, &b)?;
            let h = fd_step(t);
            let fd = (e.eval(t + h, &b)? - e.eval(t - h, &b)?) / (2.0 * h);
            Ok((d - fd).abs() <= 1e-6 * (1.0 + d.abs()))
        })();
        if !matches!(ok, Ok(true)) {
            deriv_fail += 1;
        }
    }
    if deriv_fail > 0 {
        fails.push(format!("derivative {deriv_fail}/1000"));
    }

    let mut trip_fail = 0;
    for name in names() {
        let inst = instantiate(name, &ParamBinding::new()).unwrap();
        if inst.spec.geo.p() != 2.0 {
            continue;
        }
        let (lo, hi) = (inst.spec.lo, inst.spec.hi);
        let a = if lo == 0.0 { 1e-3 * hi.min(1.0) } else { lo * 1.01 };
        let b = if hi.is_finite() { hi - 0.01 * (hi - a) } else { a + 20.0 }.min(50.0);
        let g = inst.spec.bind(&inst.g);
        let back = bessel_to_riccati(riccati_to_bessel(g.clone(), 2.0, (a * b).sqrt()), 2.0);
        for k in 0..50 {
            let t = a * (b / a).powf(k as f64 / 49.0);
            match (g.eval(t), back.eval(t)) {
                (Ok(x), Ok(y)) if (x - y).abs() <= 1e-7 * (1.0 + x.abs()) => {}
                _ => trip_fail += 1,
            }
        }
    }
    if trip_fail > 0 {
        fails.push(format!("round trip {trip_fail}"));
    }

    let mut all_pairs = pairs.to_vec();
    for (kappa, n, p) in [(0.0, 3, 2.0), (-1.0, 2, 2.0), (-1.0, 4, 3.0), (-0.5, 3, 1.5)] {
        let setting = RadialSetting::centered(geo(kappa, n, p));
        let pair = GenericPair {
            w: ScalarExpr::constant(1.0),
            g: ScalarExpr::parse("t^(-0.5) + 1").unwrap(),
            h: ScalarExpr::parse("abs(t)^p/p").unwrap(),
            binding: ParamBinding::new(),
        };
        for _ in 0..10 {
            let c = rng.gen_range(0.2..4.0);
            let u = RadialTestFunction::compact_bump(c, rng.gen_range(0.05..c)).unwrap();
            match multiplicative_margin_generic(&setting, &pair, &u) {
                Ok(m) => all_pairs.push((m.functionals.i, m.functionals.j, p)),
                Err(_) => fails.push("generic functional evaluation".into()),
            }
        }
    }
    let young_fail = all_pairs.iter().filter(|(i, j, p)| !riccati_core::verifier::young_consistent(*i, *j, *p)).count();
    if young_fail > 0 {
        fails.push(format!("Young {young_fail}/{}", all_pairs.len()));
    }

    let mut d_fail = 0;
    for kappa in [0.0, -0.01, -1.0, -4.0, -100.0] {
        for k in 0..=900 {
            let t = 10f64.powf(-6.0 + 9.0 * k as f64 / 900.0);
            if !matches!(deficit_k(kappa, t), Ok(d) if d >= 0.0) {
                d_fail += 1;
            }
        }
    }
    if d_fail > 0 {
        fails.push(format!("D >= 0 {d_fail}"));
    }

    for nu in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let z = (bessel_zero(nu, 1), bessel_zero(nu + 1.0, 1), bessel_zero(nu, 2));
        if !matches!(z, (Ok(a), Ok(b), Ok(c)) if a < b && b < c) {
            fails.push(format!("interlacing nu={nu}"));
        }
    }

    outcome(
        fails.is_empty(),
        if fails.is_empty() {
            format!("1000 derivatives, catalog round trips, {} Young pairs, D grid, interlacing", all_pairs.len())
        } else {
            fails.join("; ")
        },
    )
}

fn main() {
    let mut pairs = Vec::new();
    let mut t1 = Duration::ZERO;
    let mut t2 = Duration::ZERO;
    let mut t3 = Duration::ZERO;
    let mut t5 = Duration::ZERO;
    let results = vec![
        ("bessel zero j_01", bessel_zero_value(&mut t1), Some(t1)),
        ("equality residual suite", equality_suite(&mut t2), Some(t2)),
        ("spectral sharp constants", spectrum(&mut t3), Some(t3)),
        ("Cheng ordering", cheng(), None),
        ("Hardy sharpness sweep", hardy_sweep(&mut t5), Some(t5)),
        ("uncertainty principle equality", uncertainty_principle(&mut pairs), None),
        ("CKN talenti family", ckn(), None),
        ("extremal identity", extremal(), None),
        ("gm positivity study", gm_positivity(), None),
        ("property suites", property_suites(&pairs), None),
    ];
    let mut failed = 0;
    for (k, (name, o, time)) in results.iter().enumerate() {
        let time = time.map(|d| format!(" [{:.3} s]", d.as_secs_f64())).unwrap_or_default();
        println!(
            "criterion {:>2} {:<32} {}{time}  {}",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
