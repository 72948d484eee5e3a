use riccati_core::catalog::instantiate;
use riccati_core::ode::Stop;
use riccati_core::riccati::{solve_ivp, Direction, LSpec, RiccatiPairSpec};
use riccati_core::specfun::{bessel_j, bessel_zero};
use riccati_core::{Comparison, ModelGeometry, ParamBinding, ScalarExpr};

fn expr(s: &str) -> ScalarExpr {
    ScalarExpr::parse(s).unwrap()
}

fn samples(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect()
}

#[test]
fn hardy_trajectory_is_the_closed_form() {
    let geo = ModelGeometry::new(0.0, 3, 2.0).unwrap();
    let spec = RiccatiPairSpec::new(
        geo,
        0.0,
        f64::INFINITY,
        expr("1"),
        LSpec::Model(Comparison::ConstantCurvature),
        expr("1/(4*t^2)"),
    )
    .unwrap();
    let ts = samples(0.1, 10.0, 99);
    let fwd = solve_ivp(&spec, 1.0, 0.5, Direction::Forward, &ts).unwrap();
    let bwd = solve_ivp(&spec, 1.0, 0.5, Direction::Backward, &ts).unwrap();
    assert_eq!(fwd.stop, Stop::Completed);
    assert_eq!(bwd.stop, Stop::Completed);
    let all: Vec<_> = bwd.samples.iter().chain(fwd.samples.iter()).collect();
    assert!(all.len() >= ts.len());
    for &&(t, g) in &all {
        assert!((g - 0.5 / t).abs() <= 1e-8 * (1.0 + 0.5 / t), "G({t}) = {g}");
    }
}

#[test]
fn acr_trajectory_matches_closed_form() {
    let inst = instantiate("acr", &ParamBinding::new().with("n", 3.0).with("D", 1.0)).unwrap();
    let closed = |t: f64| 1.0 / (2.0 * t) + 1.0 / (2.0 * t * (std::f64::consts::E / t).ln());
    let ts = samples(0.05, 0.95, 90);
    let mut checked = 0;
    for dir in [Direction::Backward, Direction::Forward] {
        let traj = solve_ivp(&inst.spec, 0.5, closed(0.5), dir, &ts).unwrap();
        assert_eq!(traj.stop, Stop::Completed);
        for &(t, g) in &traj.samples {
            let want = closed(t);
            assert!((g - want).abs() <= 1e-7 * want.abs().max(1.0), "G({t}) = {g}, closed form {want}");
            checked += 1;
        }
    }
    assert!(checked >= ts.len());
}

#[test]
fn faber_krahn_blows_up_past_the_sharp_constant() {
    let j = bessel_zero(0.0, 1).unwrap();
    let c = j * j * 1.01;
    let sq = c.sqrt();
    let geo = ModelGeometry::new(0.0, 2, 2.0).unwrap();
    let spec = RiccatiPairSpec::new(geo, 0.0, 1.0, expr("1"), LSpec::Model(Comparison::ConstantCurvature), expr("C"))
        .unwrap()
        .with_params(ParamBinding::new().with("C", c));
    let t0 = 0.1;
    let g0 = sq * bessel_j(1.0, sq * t0).unwrap() / bessel_j(0.0, sq * t0).unwrap();
    let traj = solve_ivp(&spec, t0, g0, Direction::Forward, &samples(t0, 1.0, 90)).unwrap();
    let at = traj.blow_up_at.expect("trajectory should blow up");
    assert!(matches!(traj.stop, Stop::BlowUp(_) | Stop::StepCollapse(_)));
    assert!(at < 1.0, "blow-up at {at}");
    // the blow-up marks the first zero of J_0(√C t)
    assert!((at - j / sq).abs() < 1e-6, "blow-up at {at}, zero at {}", j / sq);
}

#[test]
fn faber_krahn_at_the_sharp_constant_stays_bounded() {
    let inst = instantiate("faber_krahn", &ParamBinding::new().with("n", 2.0).with("R", 1.0)).unwrap();
    let b = inst.spec.binding();
    let g0 = inst.g.eval(0.1, &b).unwrap();
    let traj = solve_ivp(&inst.spec, 0.1, g0, Direction::Forward, &samples(0.1, 0.99, 89)).unwrap();
    assert_eq!(traj.stop, Stop::Completed);
    for &(t, g) in &traj.samples {
        let want = inst.g.eval(t, &b).unwrap();
        assert!((g - want).abs() <= 1e-7 * want.abs().max(1.0), "G({t}) = {g}, catalog {want}");
    }
}

#[test]
fn interior_start_required() {
    let inst = instantiate("faber_krahn", &ParamBinding::new()).unwrap();
    assert!(solve_ivp(&inst.spec, 1.5, 0.0, Direction::Forward, &[]).is_err());
    assert!(solve_ivp(&inst.spec, 0.0, 0.0, Direction::Forward, &[]).is_err());
}
