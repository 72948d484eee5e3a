use riccati_core::catalog::{instantiate, interpolation_exponents, Instance};
use riccati_core::ParamBinding;

fn inst(name: &str, kv: &[(&str, f64)]) -> Instance {
    let mut b = ParamBinding::new();
    for (k, v) in kv {
        b.set(k, *v);
    }
    instantiate(name, &b).unwrap()
}

fn same_pair(x: &Instance, y: &Instance, ts: &[f64], tol: f64) {
    let (bx, by) = (x.spec.binding(), y.spec.binding());
    for &t in ts {
        let g = (x.g.eval(t, &bx).unwrap(), y.g.eval(t, &by).unwrap());
        let w = (x.spec.big_w.eval(t, &bx).unwrap(), y.spec.big_w.eval(t, &by).unwrap());
        let wt = (x.spec.w.eval(t, &bx).unwrap(), y.spec.w.eval(t, &by).unwrap());
        for (a, b) in [g, w, wt] {
            assert!((a - b).abs() <= tol * (1.0 + a.abs()), "{} vs {} at t={t}: {a} {b}", x.name, y.name);
        }
    }
}

const TS: [f64; 6] = [0.01, 0.1, 0.3, 0.5, 0.7, 0.95];

#[test]
fn brezis_vazquez_endpoint_is_faber_krahn() {
    for n in [2.0, 3.0, 5.0] {
        let bv = inst("brezis_vazquez", &[("n", n), ("nu", (n - 2.0) / 2.0), ("D", 1.0)]);
        let fk = inst("faber_krahn", &[("n", n), ("R", 1.0)]);
        same_pair(&bv, &fk, &TS, 1e-12);
        assert!((bv.sharp_constant - fk.sharp_constant).abs() < 1e-12);
    }
}

#[test]
fn hardy_depends_on_alpha_plus_c_only() {
    let x = inst("hardy", &[("n", 4.0), ("p", 3.0), ("alpha", 0.5), ("C", 2.0)]);
    let y = inst("hardy", &[("n", 4.0), ("p", 3.0), ("alpha", 1.25), ("C", 1.25)]);
    let (bx, by) = (x.spec.binding(), y.spec.binding());
    for t in TS {
        assert_eq!(x.g.eval(t, &bx).unwrap(), y.g.eval(t, &by).unwrap());
        assert_eq!(x.spec.big_w.eval(t, &bx).unwrap(), y.spec.big_w.eval(t, &by).unwrap());
    }
}

#[test]
fn ghoussoub_moradifam_without_weight_is_hardy() {
    for (n, m) in [(3.0, 0.0), (5.0, 0.5), (6.0, -1.0)] {
        let gm = inst("ghoussoub_moradifam", &[("n", n), ("beta", 0.0), ("m", m), ("alpha", 1.0)]);
        let h = inst("hardy", &[("n", n), ("p", 2.0), ("alpha", -2.0 * m)]);
        same_pair(&gm, &h, &[0.01, 0.5, 2.0, 30.0], 1e-10);
    }
}

#[test]
fn interpolation_endpoint_kills_deficit_term() {
    for n in [3.0, 4.0, 7.0] {
        let (gamma, h) = interpolation_exponents(n, (n - 1.0) * (n - 1.0) / 4.0);
        assert_eq!(h * gamma, 0.0);
        assert!((h - 0.5).abs() < 1e-15);
    }
}
