//! Adaptive Gauss–Kronrod (7-15) quadrature with graded meshes.
//!
//! Semi-infinite ranges and singular endpoints at 0 are handled by geometric
//! panel sequences that stop once further panels are negligible.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Growth factor of geometric panels.
const GRADE: f64 = 4.0;
/// Cap on the number of geometric panels generated toward 0 or ∞.
const MAX_TAIL_PANELS: usize = 1200;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 0.0, max_subdivisions: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// One 15-point Kronrod panel: (value, error estimate).
pub fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    let value = rk * h;
    let err = ((rk - rg) * h).abs();
    if !value.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok((value, err))
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Global adaptive refinement over an initial set of panels.
fn refine<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    initial: Vec<(f64, f64)>,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    for (a, b) in initial {
        if b > a {
            let (value, error) = gk15(f, a, b)?;
            heap.push(Panel { a, b, value, error });
        }
    }
    let mut splits = 0usize;
    loop {
        let (value, error) = totals(&heap);
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) || error == 0.0 {
            return Ok(QuadResult { value, error });
        }
        if splits >= opts.max_subdivisions {
            return Err(Error::Quadrature(format!(
                "no convergence after {splits} subdivisions (value {value:e}, error {error:e})"
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel cannot be split further in floating point.
            return Ok(QuadResult { value, error });
        }
        let (v1, e1) = gk15(f, worst.a, m)?;
        let (v2, e2) = gk15(f, m, worst.b)?;
        heap.push(Panel { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, error: e2 });
        splits += 1;
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    // Sum in a fixed order so results do not depend on heap layout.
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut v = crate::specfun::NeumaierSum::default();
    let mut e = 0.0;
    for p in panels {
        v.add(p.value);
        e += p.error;
    }
    (v.value(), e)
}

/// Panels [x/GRADE, x] stepping toward 0 from `top` until negligible.
fn tail_toward_zero<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    top: f64,
    reference: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut hi = top;
    let mut acc = reference.abs();
    let mut quiet = 0;
    while out.len() < MAX_TAIL_PANELS {
        let lo = hi / GRADE;
        if lo < 1e-300 {
            out.push((0.0, hi));
            break;
        }
        let (v, e) = gk15(f, lo, hi)?;
        out.push((lo, hi));
        acc += v.abs();
        if v.abs() + e <= 1e-17 * acc && acc > 0.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        hi = lo;
    }
    Ok(out)
}

/// Panels [x, GRADE·x] stepping toward ∞ from `bottom` until negligible.
fn tail_toward_infinity<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    bottom: f64,
    reference: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut lo = bottom.max(1e-300);
    let mut acc = reference.abs();
    let mut quiet = 0;
    while out.len() < MAX_TAIL_PANELS {
        let hi = if lo < 1.0 { 1.0 } else { lo * GRADE };
        if hi > 1e300 {
            return Err(Error::Quadrature("integrand does not decay at infinity".into()));
        }
        let (v, e) = gk15(f, lo, hi)?;
        out.push((lo, hi));
        acc += v.abs();
        if v.abs() + e <= 1e-17 * acc && acc > 0.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        lo = hi;
    }
    Ok(out)
}

/// ∫_a^b f with interior breakpoints (kinks of f).
///
/// `b` may be +∞. When `a == 0` and `graded_at_zero` is set, panels are
/// refined geometrically toward 0. Finite panels with b/a > 4 are split
/// geometrically as well.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    graded_at_zero: bool,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(a >= 0.0) || !(b > a) {
        return Err(Error::Quadrature(format!("invalid range [{a}, {b}]")));
    }
    let mut knots: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b && x.is_finite())
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let mut finite_hi = if b.is_finite() { b } else { *knots.last().unwrap_or(&a.max(1.0)) };
    if !b.is_finite() && finite_hi <= a {
        finite_hi = a + 1.0;
    }
    let mut nodes = vec![a];
    nodes.extend(knots.iter().copied().filter(|x| *x < finite_hi));
    nodes.push(finite_hi);

    let mut panels = Vec::new();
    let first_positive = if a == 0.0 { 1 } else { 0 };
    for w in nodes.windows(2).skip(first_positive) {
        geometric_split(w[0], w[1], &mut panels);
    }
    if a == 0.0 {
        let top = nodes[1];
        if graded_at_zero {
            let reference = rough_total(&mut f, &panels)?;
            panels.extend(tail_toward_zero(&mut f, top, reference)?);
        } else {
            panels.push((0.0, top));
        }
    }
    if !b.is_finite() {
        let reference = rough_total(&mut f, &panels)?;
        panels.extend(tail_toward_infinity(&mut f, finite_hi, reference)?);
    }
    refine(&mut f, panels, opts)
}

fn rough_total<F: FnMut(f64) -> Result<f64>>(f: &mut F, panels: &[(f64, f64)]) -> Result<f64> {
    let mut s = 0.0;
    for &(a, b) in panels {
        s += gk15(f, a, b)?.0.abs();
    }
    Ok(s)
}

fn geometric_split(a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
    if a > 0.0 && b / a > GRADE {
        let mut lo = a;
        while lo * GRADE < b {
            out.push((lo, lo * GRADE));
            lo *= GRADE;
        }
        out.push((lo, b));
    } else {
        out.push((a, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, graded: bool) -> QuadResult {
        integrate(f, a, b, &[], graded, &QuadOptions::default()).unwrap()
    }

    #[test]
    fn polynomial_is_exact() {
        let r = q(|t| Ok(t * t), 0.0, 1.0, false);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn algebraic_singularity_at_zero() {
        let r = q(|t: f64| Ok(t.powf(-0.5)), 0.0, 1.0, true);
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
        let r = q(|t: f64| Ok(t.ln()), 0.0, 1.0, true);
        assert!((r.value + 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn semi_infinite_ranges() {
        let r = q(|t: f64| Ok((-t).exp()), 0.0, f64::INFINITY, false);
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");
        let r = q(|t: f64| Ok(1.0 / (1.0 + t * t)), 0.0, f64::INFINITY, false);
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-10, "{r:?}");
        let r = q(|t: f64| Ok(t * t * (-t * t).exp()), 0.0, f64::INFINITY, true);
        assert!((r.value - std::f64::consts::PI.sqrt() / 4.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn kinks_at_breakpoints() {
        let r = integrate(|t: f64| Ok((t - 0.3).abs()), 0.0, 1.0, &[0.3], false, &QuadOptions::default())
            .unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-15);
    }

    #[test]
    fn wide_geometric_range() {
        // ∫_{1e-60}^{1} dt/t = 60 ln 10.
        let r = q(|t| Ok(1.0 / t), 1e-60, 1.0, false);
        assert!((r.value - 60.0 * 10f64.ln()).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn error_propagates() {
        let r = integrate(
            |t| if t > 0.5 { Err(Error::Numeric("boom".into())) } else { Ok(1.0) },
            0.0,
            1.0,
            &[],
            false,
            &QuadOptions::default(),
        );
        assert!(r.is_err());
    }
}
