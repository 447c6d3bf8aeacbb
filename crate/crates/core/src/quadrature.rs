//! One-dimensional quadrature.
//!
//! The default scheme is tanh-sinh (double exponential), which tolerates
//! algebraic endpoint singularities. Nodes are handed to the integrand as an
//! [`Abscissa`] carrying the distances to both endpoints, so integrands that
//! blow up at an endpoint can be evaluated without the cancellation in
//! `b - x`. An adaptive Gauss-Kronrod 7/15 scheme is provided as an
//! independent second method.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const EVALUATION_BUDGET: usize = 200_000;

const T_MAX: f64 = 5.5;
const MAX_LEVEL: usize = 12;
const MIN_LEVEL: usize = 3;
/// Improper integrals skip abscissae beyond this; the tail correction covers them.
const X_CAP: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// `false` when the evaluation budget ran out before the tolerance was met.
    pub converged: bool,
}

/// A quadrature node with its distances to the interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_left: f64,
    pub from_right: f64,
}

/// Normalized node on `[0, 1]`: (distance from 0, distance from 1, weight).
type Node = (f64, f64, f64);

fn node_at(t: f64) -> Node {
    let u = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let small = e / (1.0 + e);
    let large = 1.0 / (1.0 + e);
    let (left, right) = if u < 0.0 { (small, large) } else { (large, small) };
    // (1/2)(pi/2) cosh t sech^2 u, with sech^2 u = 4e/(1+e)^2
    let weight = std::f64::consts::FRAC_PI_4 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    (left, right, weight)
}

/// Nodes added at each refinement level; level 0 has unit spacing.
fn node_table() -> &'static Vec<Vec<Node>> {
    static TABLE: OnceLock<Vec<Vec<Node>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut levels = Vec::with_capacity(MAX_LEVEL + 1);
        let k_max = T_MAX as i64;
        levels.push((-k_max..=k_max).map(|k| node_at(k as f64)).collect());
        for level in 1..=MAX_LEVEL {
            let h = 0.5f64.powi(level as i32);
            let n = (T_MAX / h) as i64;
            let nodes = (-n..=n)
                .filter(|k| k.rem_euclid(2) == 1)
                .map(|k| node_at(k as f64 * h))
                .collect();
            levels.push(nodes);
        }
        levels
    })
}

fn check(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand(x))
    }
}

/// Tanh-sinh quadrature with endpoint distances exposed to the integrand.
pub fn integrate_abscissa<F: FnMut(Abscissa) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<IntegrationResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integration interval [{a}, {b}] is invalid")));
    }
    let len = b - a;
    let table = node_table();
    let mut sum = 0.0;
    let mut l1 = 0.0;
    let mut evaluations = 0;
    let mut previous = f64::NAN;
    let mut estimate = f64::NAN;
    let mut error = f64::INFINITY;
    for (level, nodes) in table.iter().enumerate() {
        if evaluations + nodes.len() > EVALUATION_BUDGET {
            break;
        }
        for &(dl, dr, w) in nodes {
            let from_left = len * dl;
            let from_right = len * dr;
            let x = if dl <= dr { a + from_left } else { b - from_right };
            let v = check(f(Abscissa { x, from_left, from_right }), x)?;
            sum += w * v;
            l1 += (w * v).abs();
        }
        evaluations += nodes.len();
        let h = 0.5f64.powi(level as i32);
        estimate = len * h * sum;
        let scale = len * h * l1;
        if level >= 1 {
            let delta = (estimate - previous).abs();
            error = delta.max(10.0 * f64::EPSILON * scale);
            if level >= MIN_LEVEL && (delta <= rel_tol * estimate.abs() || delta <= 50.0 * f64::EPSILON * scale) {
                return Ok(IntegrationResult { value: estimate, abs_error_estimate: error, evaluations, converged: true });
            }
        }
        previous = estimate;
    }
    Ok(IntegrationResult { value: estimate, abs_error_estimate: error, evaluations, converged: false })
}

/// Tanh-sinh quadrature of `f` on `[a, b]`.
///
/// Nodes that round onto an endpoint are skipped. Singularities at a nonzero
/// endpoint lose accuracy to rounding of `x` there; use
/// [`integrate_abscissa`] for those.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<IntegrationResult> {
    integrate_abscissa(
        |p| if p.x <= a || p.x >= b { 0.0 } else { f(p.x) },
        a,
        b,
        rel_tol,
    )
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    l1: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = check(f(c), c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut l1 = (WGK[7] * fc).abs();
    for i in 0..7 {
        let x1 = c - r * XGK[i];
        let x2 = c + r * XGK[i];
        let f1 = check(f(x1), x1)?;
        let f2 = check(f(x2), x2)?;
        k += WGK[i] * (f1 + f2);
        l1 += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    Ok(Segment { a, b, value: r * k, error: (r * (k - g)).abs(), l1: r.abs() * l1 })
}

/// Adaptive Gauss-Kronrod 7/15 quadrature.
pub fn integrate_gk<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<IntegrationResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integration interval [{a}, {b}] is invalid")));
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut l1 = first.l1;
    heap.push(first);
    let mut evaluations = 15;
    loop {
        let target = (rel_tol * value.abs()).max(50.0 * f64::EPSILON * l1);
        if error <= target {
            return Ok(IntegrationResult { value, abs_error_estimate: error, evaluations, converged: true });
        }
        if evaluations + 30 > EVALUATION_BUDGET {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated rounding from the running updates
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    Ok(IntegrationResult { value, abs_error_estimate: error, evaluations, converged: false })
}

/// Abscissa where the tail slope is probed, relative to `max(1, |a|)`.
const TAIL_PROBE: f64 = 1e6;

fn tail_slope<F: FnMut(f64) -> f64>(f: &mut F, a: f64) -> Option<f64> {
    let x1 = TAIL_PROBE * a.abs().max(1.0) + a;
    let x2 = 10.0 * x1;
    let (f1, f2) = (f(x1).abs(), f(x2).abs());
    if f1 == 0.0 || f2 == 0.0 || f1 < 1e-300 || !f1.is_finite() || !f2.is_finite() {
        return None;
    }
    Some((f2 / f1).log10() / ((x2 - a) / (x1 - a)).log10())
}

/// `int_a^inf f` through `x = a + t/(1-t)`, with a power-law tail correction
/// from `tail_exponent_hint` (which must be below -1).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    rel_tol: f64,
    tail_exponent_hint: f64,
) -> Result<IntegrationResult> {
    if !(tail_exponent_hint < -1.0) {
        return Err(Error::Divergent(format!("tail exponent hint {tail_exponent_hint} is not below -1")));
    }
    if let Some(slope) = tail_slope(&mut f, a) {
        if slope >= -1.0 {
            return Err(Error::Divergent(format!("empirical tail slope {slope:.4} is not below -1")));
        }
    }
    let mut x_max = a;
    let mut f_at_max = 0.0;
    let mut res = integrate_abscissa(
        |p| {
            // t in [0, 1); r = 1 - t kept exact near t = 1
            let r = p.from_right;
            let x = a + p.from_left / r;
            if !(x <= X_CAP) {
                return 0.0;
            }
            let v = f(x);
            if v == 0.0 {
                return 0.0;
            }
            if x > x_max {
                x_max = x;
                f_at_max = v;
            }
            v / r / r
        },
        0.0,
        1.0,
        rel_tol,
    )?;
    res.evaluations += 2;
    if x_max > a {
        let tail = f_at_max * (x_max - a) / (-1.0 - tail_exponent_hint);
        if tail.is_finite() {
            res.value += tail;
            res.abs_error_estimate += tail.abs();
        }
    }
    Ok(res)
}

/// Gauss-Kronrod counterpart of [`integrate_to_infinity`], used as a second
/// scheme in cross-checks.
pub fn integrate_to_infinity_gk<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    rel_tol: f64,
    tail_exponent_hint: f64,
) -> Result<IntegrationResult> {
    if !(tail_exponent_hint < -1.0) {
        return Err(Error::Divergent(format!("tail exponent hint {tail_exponent_hint} is not below -1")));
    }
    integrate_gk(
        |t| {
            let r = 1.0 - t;
            let x = a + t / r;
            if !(x <= X_CAP) {
                return 0.0;
            }
            let v = f(x);
            if v == 0.0 { 0.0 } else { v / r / r }
        },
        0.0,
        1.0,
        rel_tol,
    )
}

/// Holds the first error raised by a fallible integrand.
///
/// The quadrature routines take infallible closures; wrap the integrand with
/// [`ErrorSlot::take`] and pass the routine's result through
/// [`ErrorSlot::finish`].
#[derive(Debug, Default)]
pub struct ErrorSlot(Option<Error>);

impl ErrorSlot {
    pub fn new() -> Self {
        ErrorSlot(None)
    }

    /// Unwraps `value`, recording the first error and returning 0 after it.
    pub fn take(&mut self, value: Result<f64>) -> f64 {
        match value {
            Ok(v) => v,
            Err(e) => {
                if self.0.is_none() {
                    self.0 = Some(e);
                }
                0.0
            }
        }
    }

    pub fn finish<T>(self, result: Result<T>) -> Result<T> {
        match self.0 {
            Some(e) => Err(e),
            None => result,
        }
    }
}

/// Fixed 16-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre_16<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    GL16.iter()
        .map(|&(x, w)| {
            let d = half * x;
            w * (f(a + half + d) + f(a + half - d))
        })
        .sum::<f64>()
        * half
}

/// Positive nodes and weights of the 16-point Gauss-Legendre rule on `[-1, 1]`.
const GL16: [(f64, f64); 8] = [
    (0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (0.617_876_244_402_643_7, 0.149_595_988_816_576_7),
    (0.755_404_408_355_003, 0.124_628_971_255_533_9),
    (0.865_631_202_387_831_7, 0.095_158_511_682_492_78),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_09),
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn elementary_integrals() {
        let r = integrate(|_| 1.0, 0.0, FRAC_PI_2, 1e-12).unwrap();
        assert!(rel(r.value, FRAC_PI_2) < 1e-14);
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 2.0) < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn singular_right_endpoint_with_abscissa() {
        let r = integrate_abscissa(|p| 1.0 / p.from_right.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 2.0) < 1e-12);
        let r = integrate_abscissa(|p| p.from_right.powf(-0.9), 0.0, 1.0, 1e-12).unwrap();
        assert!(rel(r.value, 10.0) < 1e-8, "{}", r.value);
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let v = gauss_legendre_16(|x| x.powi(31) + 3.0 * x * x, -1.0, 2.0);
        let exact = (2f64.powi(32) - 1.0) / 32.0 + 9.0;
        assert!(rel(v, exact) < 1e-14);
        let sum_w: f64 = GL16.iter().map(|p| 2.0 * p.1).sum();
        assert!((sum_w - 2.0).abs() < 1e-15);
    }

    #[test]
    fn error_slot_keeps_first_error() {
        let mut slot = ErrorSlot::new();
        let r = integrate(
            |x| slot.take(if x > 0.5 { Err(Error::Domain(format!("{x}"))) } else { Ok(1.0) }),
            0.0,
            1.0,
            1e-10,
        );
        assert!(matches!(slot.finish(r), Err(Error::Domain(_))));
    }

    #[test]
    fn nan_integrand_is_error() {
        let r = integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand(_))));
    }

    #[test]
    fn gauss_kronrod_agrees() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let exact = 3.0 / 10.0 * (1.0 - (-2.0f64).exp() * ((6.0f64).cos() + (6.0f64).sin() / 3.0));
        let ts = integrate(f, 0.0, 2.0, 1e-12).unwrap();
        let gk = integrate_gk(f, 0.0, 2.0, 1e-12).unwrap();
        assert!(rel(ts.value, exact) < 1e-12);
        assert!(rel(gk.value, exact) < 1e-12);
    }

    #[test]
    fn improper_integrals() {
        let r = integrate_to_infinity(|x| x / (1.0 + x * x).powi(2), 0.0, 1e-12, -3.0).unwrap();
        assert!(rel(r.value, 0.5) < 1e-11);
        let r = integrate_to_infinity(|x| (-x).exp(), 0.0, 1e-12, -10.0).unwrap();
        assert!(rel(r.value, 1.0) < 1e-11);
        let alpha = -3.0;
        let r = integrate_to_infinity(|x| x * (1.0 + x * x).powf(0.5 * (alpha - 1.0)), 0.0, 1e-12, alpha).unwrap();
        assert!(rel(r.value, -1.0 / (alpha + 1.0)) < 1e-11);
        let r = integrate_to_infinity_gk(|x| x / (1.0 + x * x).powi(2), 0.0, 1e-12, -3.0).unwrap();
        assert!(rel(r.value, 0.5) < 1e-10);
    }

    #[test]
    fn slow_tails_use_correction() {
        // int_1^inf x^{-1.2} = 5
        let r = integrate_to_infinity(|x| x.powf(-1.2), 1.0, 1e-10, -1.2).unwrap();
        assert!(rel(r.value, 5.0) < 1e-8, "{}", r.value);
    }

    #[test]
    fn divergence_detected() {
        assert!(matches!(integrate_to_infinity(|x| 1.0 / (1.0 + x), 0.0, 1e-10, -2.0), Err(Error::Divergent(_))));
        assert!(matches!(integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, 1e-10, -0.5), Err(Error::Divergent(_))));
    }

    #[test]
    fn error_estimates_are_honest() {
        type Case = (fn(f64) -> f64, f64, f64, f64);
        let cases: Vec<Case> = vec![
            (|x| x * x, 0.0, 1.0, 1.0 / 3.0),
            (|x| x.exp(), 0.0, 1.0, std::f64::consts::E - 1.0),
            (|x| 1.0 / (1.0 + x * x), 0.0, 1.0, PI / 4.0),
            (|x| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
            (|x| x.ln(), 0.0, 1.0, -1.0),
            (|x| 1.0 / (x * (2.0 - x)).sqrt(), 0.0, 1.0, PI / 2.0),
            (|x| x.sin(), 0.0, PI, 2.0),
            (|x| x.cos().powi(2), 0.0, PI, PI / 2.0),
            (|x| 1.0 / x.cbrt(), 0.0, 1.0, 1.5),
            (|x| x.powf(-0.75), 0.0, 1.0, 4.0),
            (|x| (1.0 + x) / x.sqrt(), 0.0, 1.0, 8.0 / 3.0),
            (|x| x * x.ln(), 0.0, 1.0, -0.25),
            (|x| 1.0 / (1.0 + x), 0.0, 1.0, std::f64::consts::LN_2),
            (|x| (-x * x).exp(), 0.0, 5.0, 0.886_226_925_452_758 * 0.999_999_999_998_462_5),
            (|x| x.powi(5), -1.0, 2.0, 10.5),
            (|x| x.atan(), 0.0, 1.0, PI / 4.0 - 0.5 * std::f64::consts::LN_2),
            (|x| 1.0 / (x * (1.0 + x)).sqrt(), 0.0, 1.0, 2.0 * 1f64.asinh()),
            (|x| x.tan(), 0.0, 1.0, -(1f64.cos().ln())),
            (|x| x.sinh(), 0.0, 2.0, 2f64.cosh() - 1.0),
            (|x| 1.0 / (2.0 + x.cos()), 0.0, 2.0 * PI, 2.0 * PI / 3f64.sqrt()),
        ];
        for (i, (f, a, b, exact)) in cases.into_iter().enumerate() {
            let r = integrate(f, a, b, 1e-10).unwrap();
            let err = (r.value - exact).abs();
            assert!(err <= 10.0 * r.abs_error_estimate + 1e-15, "case {i}: err {err:e} est {:e}", r.abs_error_estimate);
            assert!(err <= 1e-9 * exact.abs(), "case {i}: err {err:e}");
        }
    }
}
