//! Numerical quantifiers and compensator asymptotics.
//!
//! A function is quantifiable at `b` by `alpha` with limit `l` when
//! `f(x) (b - x)^alpha -> l` (finite `b`) or `f(x) / x^alpha -> l` (`b = inf`),
//! with `l != 0`. Estimates come from local log-log slopes on a geometric
//! schedule, accelerated with Aitken's process.

use crate::error::{Error, Result};
use crate::operators::{lift_fm, op_f, op_l, ExponentTuple, FTransform, MomentumVector, WronskianOperator};
use crate::smooth::{arc, FromSeries, Smooth, SmoothFn, Sum, MAX_JET};
use crate::specfun::{b_factor, gamma, gamma_ratio, omega_big};
use crate::taylor::Series;
use rayon::prelude::*;

/// `x_k = start * ratio^k` (at infinity) or distances `start / ratio^k` (finite boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub start: f64,
    pub ratio: f64,
    pub points: usize,
}

impl Schedule {
    /// `10, 10^{1.5}, ..., 10^8`.
    pub fn at_infinity() -> Self {
        Schedule { start: 10.0, ratio: 10f64.sqrt(), points: 15 }
    }

    /// Distances `10^{-1}, ..., 10^{-8}` to a finite boundary.
    pub fn near_boundary() -> Self {
        Schedule { start: 0.1, ratio: 10f64.sqrt(), points: 15 }
    }

    pub fn growing(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.start * self.ratio.powi(k as i32)).collect()
    }

    pub fn shrinking(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.start / self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Approached from the left, `x -> b-`.
    Right(f64),
    /// Approached from the right, `x -> a+`.
    Left(f64),
    Infinity,
}

impl Boundary {
    fn abscissa(&self, t: f64) -> f64 {
        match *self {
            Boundary::Right(b) => b - t,
            Boundary::Left(a) => a + t,
            Boundary::Infinity => t,
        }
    }

    /// `-1` when the quantifier is minus the log-log slope in the distance.
    fn sign(&self) -> f64 {
        match self {
            Boundary::Infinity => 1.0,
            _ => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Power,
    /// `f ~ l x^alpha log x`, the degenerate compensator shape.
    Compensator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantifier {
    pub boundary: Boundary,
    pub alpha_hat: f64,
    pub ell_hat: f64,
    pub mode: Mode,
    /// Spread of the last two extrapolated slopes.
    pub residual: f64,
    /// Distances to the boundary (or abscissae at infinity).
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierConfig {
    pub residual_threshold: f64,
    /// Slope distance to an odd negative integer that triggers the compensator test.
    pub compensator_slope_tol: f64,
    /// Minimal monotone drift per decade of `f / x^alpha` in compensator mode.
    pub compensator_drift: f64,
    /// `|l|` below this fraction of the largest `|f x^{-alpha}|` counts as zero.
    pub zero_tol: f64,
}

impl Default for QuantifierConfig {
    fn default() -> Self {
        QuantifierConfig { residual_threshold: 1e-2, compensator_slope_tol: 2e-2, compensator_drift: 0.05, zero_tol: 1e-10 }
    }
}

/// Aitken's delta-squared limit of the last three terms.
pub fn aitken(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap_or(&f64::NAN);
    }
    let (a, b, c) = (s[n - 3], s[n - 2], s[n - 1]);
    let den = c - 2.0 * b + a;
    if den == 0.0 || !den.is_finite() || (c - b).abs() >= (b - a).abs() {
        c
    } else {
        c - (c - b) * (c - b) / den
    }
}

fn odd_negative_near(s: f64) -> f64 {
    let k = ((-s - 1.0) / 2.0).round().max(0.0);
    -1.0 - 2.0 * k
}

/// Estimates the quantifier of `f` at `boundary` along `schedule`.
pub fn estimate_quantifier<F>(f: F, boundary: Boundary, schedule: &Schedule, config: &QuantifierConfig) -> Result<Quantifier>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let t = match boundary {
        Boundary::Infinity => schedule.growing(),
        _ => schedule.shrinking(),
    };
    if t.len() < 4 {
        return Err(Error::Domain("a quantifier schedule needs at least 4 points".into()));
    }
    let y = t.par_iter().map(|&s| f(boundary.abscissa(s))).collect::<Result<Vec<f64>>>()?;
    if let Some(i) = y.iter().position(|v| *v == 0.0 || !v.is_finite()) {
        return Err(Error::ZeroLimit(boundary.abscissa(t[i])));
    }
    let slopes: Vec<f64> = t
        .windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| (yw[1].abs() / yw[0].abs()).ln() / (tw[1] / tw[0]).ln())
        .collect();
    let extrapolated: Vec<f64> = (3..=slopes.len()).map(|n| aitken(&slopes[..n])).collect();
    let slope = *extrapolated.last().unwrap_or(&slopes[slopes.len() - 1]);
    let residual = match extrapolated.len() {
        0 | 1 => f64::INFINITY,
        n => (extrapolated[n - 1] - extrapolated[n - 2]).abs(),
    };
    let sign = boundary.sign();
    let decade = (10f64).ln() / schedule.ratio.ln();

    // compensator shape: slope near an odd negative integer and a drifting ratio
    if boundary == Boundary::Infinity {
        let log_slopes: Vec<f64> = t
            .windows(2)
            .zip(y.windows(2))
            .map(|(tw, yw)| (yw[1].abs() * tw[0].ln() / (yw[0].abs() * tw[1].ln())).ln() / (tw[1] / tw[0]).ln())
            .collect();
        let log_slope = aitken(&log_slopes);
        let target = odd_negative_near(log_slope);
        if (log_slope - target).abs() <= config.compensator_slope_tol {
            let ratio: Vec<f64> = t.iter().zip(&y).map(|(x, v)| v / x.powf(target)).collect();
            let n = ratio.len();
            let back = (decade.round() as usize).clamp(1, n - 1);
            let drift = (ratio[n - 1] / ratio[n - 1 - back]).abs().ln();
            let monotone = ratio.windows(2).rev().take(back + 1).all(|w| (w[1].abs() > w[0].abs()) == (drift > 0.0));
            if drift.abs() > config.compensator_drift && monotone {
                let over_log: Vec<f64> = t.iter().zip(&ratio).map(|(x, r)| r / x.ln()).collect();
                let ell = aitken(&over_log);
                return finish(boundary, target, ell, Mode::Compensator, residual, t, &ratio, config);
            }
        }
    }

    let alpha = sign * slope;
    // f (b - x)^alpha at finite b, f / x^alpha at infinity
    let scaled: Vec<f64> = t.iter().zip(&y).map(|(s, v)| v * s.powf(-sign * alpha)).collect();
    let ell = aitken(&scaled);
    if !(residual <= config.residual_threshold) {
        return Err(Error::NoConvergence(format!("slope residual {residual:.3e} above {:.1e}", config.residual_threshold)));
    }
    finish(boundary, alpha, ell, Mode::Power, residual, t, &scaled, config)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    boundary: Boundary,
    alpha_hat: f64,
    ell_hat: f64,
    mode: Mode,
    residual: f64,
    samples: Vec<f64>,
    scaled: &[f64],
    config: &QuantifierConfig,
) -> Result<Quantifier> {
    let scale = scaled.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(ell_hat.abs() > config.zero_tol * scale) {
        return Err(Error::ZeroLimit(ell_hat));
    }
    Ok(Quantifier { boundary, alpha_hat, ell_hat, mode, residual, samples })
}

// ------------------------------------------------------------- model inputs

/// `c x (1 + x^2)^{(alpha-1)/2}`, analytic on the line and `~ c x^alpha` at infinity.
pub fn model_power(alpha: f64, c: f64) -> Smooth {
    arc(FromSeries::new(MAX_JET - 1, move |x| {
        let t = Series::variable(x);
        Ok((t * (Series::constant(1.0) + t * t).powf(0.5 * (alpha - 1.0))).scale(c))
    }))
}

/// `model_power(alpha) - ((beta+1)/(alpha+1)) model_power(beta)`, whose first
/// momentum vanishes; `~ x^alpha` at infinity when `beta < alpha < -1`.
pub fn calibrated_pair(alpha: f64, beta: f64) -> Smooth {
    arc(Sum(vec![(1.0, model_power(alpha, 1.0)), (-(beta + 1.0) / (alpha + 1.0), model_power(beta, 1.0))]))
}

/// `M_n[model_power(beta, 1)] = Gamma(n) Gamma(s - n) / (2 Gamma(s))`, `s = (1 - beta) / 2`.
pub fn model_momentum(n: usize, beta: f64) -> Result<f64> {
    let s = 0.5 * (1.0 - beta);
    if s <= n as f64 {
        return Err(Error::Divergent(format!("M_{n} of a model with exponent {beta}")));
    }
    Ok(0.5 * gamma(n as f64)? * gamma_ratio(s - n as f64, s)?)
}

/// `sum_{j=0..m} c_j model_power(alpha - 2j)` with `c_0 = 1` and `M_1 = ... = M_m = 0`;
/// `~ x^alpha` at infinity. Coincides with [`calibrated_pair`] for `m = 1`.
pub fn calibrated_family(alpha: f64, m: usize) -> Result<Smooth> {
    if m == 0 {
        return Ok(model_power(alpha, 1.0));
    }
    // rows n = 1..m, unknowns c_1..c_m
    let mut a = vec![vec![0.0; m + 1]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for j in 1..=m {
            row[j - 1] = model_momentum(i + 1, alpha - 2.0 * j as f64)?;
        }
        row[m] = -model_momentum(i + 1, alpha)?;
    }
    let c = solve(a)?;
    let mut terms = vec![(1.0, model_power(alpha, 1.0))];
    terms.extend(c.iter().enumerate().map(|(j, &cj)| (cj, model_power(alpha - 2.0 * (j + 1) as f64, 1.0))));
    Ok(arc(Sum(terms)))
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap_or(k);
        a.swap(k, p);
        if a[k][k] == 0.0 {
            return Err(Error::Domain("singular momentum system".into()));
        }
        for i in k + 1..n {
            let r = a[i][k] / a[k][k];
            for j in k..=n {
                a[i][j] -= r * a[k][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (a[k][n] - s) / a[k][k];
    }
    Ok(x)
}

// ----------------------------------------------------------- compensator fits

#[derive(Debug, Clone, PartialEq)]
pub struct CompensatorFit {
    pub alpha: f64,
    /// Last entry of the trace times the normalizing constant.
    pub ell: f64,
    /// `(x, ratio)` along the schedule.
    pub ratio_trace: Vec<(f64, f64)>,
    /// Largest relative gap between the two evaluation routes, when computed.
    pub route_gap: Option<f64>,
}

impl CompensatorFit {
    pub fn final_deviation(&self) -> f64 {
        self.ratio_trace.last().map_or(f64::INFINITY, |(_, r)| (r - 1.0).abs())
    }

    /// Deviation from 1 at the schedule point closest to `x`.
    pub fn deviation_at(&self, x: f64) -> f64 {
        self.ratio_trace
            .iter()
            .min_by(|a, b| (a.0 / x).ln().abs().total_cmp(&(b.0 / x).ln().abs()))
            .map_or(f64::INFINITY, |(_, r)| (r - 1.0).abs())
    }

    /// `|r_k - 1|` does not increase along the schedule.
    pub fn monotone_toward_one(&self) -> bool {
        self.ratio_trace.windows(2).all(|w| (w[1].1 - 1.0).abs() <= (w[0].1 - 1.0).abs())
    }

    /// Final deviation at most `tol`, monotone approach to 1, and a strictly
    /// smaller deviation at the end than at `10^4`.
    pub fn meets(&self, tol: f64) -> bool {
        let last = self.final_deviation();
        last <= tol && self.monotone_toward_one() && last < self.deviation_at(1e4)
    }

    /// Last two entries differ by at most `tol` and the trend is toward 1.
    pub fn accepted(&self, tol: f64) -> bool {
        let n = self.ratio_trace.len();
        n >= 2 && (self.ratio_trace[n - 1].1 - self.ratio_trace[n - 2].1).abs() <= tol && self.monotone_toward_one()
    }
}

/// Momenta must vanish to this absolute tolerance before lifting.
pub const MOMENTUM_TOL: f64 = 1e-8;

/// Trace of `x^{2m+1} F[f](x) / (a b_m(alpha) Omega(x, alpha + 2m))`, computed as
/// `x F[f_m](x) / (...)` through the lift.
pub fn compensator_trace(f: Smooth, a: f64, alpha: f64, m: usize, xs: &[f64]) -> Result<CompensatorFit> {
    if m > 0 {
        MomentumVector::compute(f.as_ref(), m, alpha)?.check_zero(MOMENTUM_TOL)?;
    }
    let fm = lift_fm(f, m, if m > 0 { Some(alpha) } else { None })?;
    let norm = a * b_factor(m, alpha)?;
    let ratio_trace = xs
        .par_iter()
        .map(|&x| Ok((x, x * op_f(fm.as_ref(), x)? / (norm * omega_big(x, alpha + 2.0 * m as f64)?))))
        .collect::<Result<Vec<_>>>()?;
    let ell = ratio_trace.last().map_or(f64::NAN, |(_, r)| r * norm);
    Ok(CompensatorFit { alpha, ell, ratio_trace, route_gap: None })
}

/// One trace per `alpha`, for the family `alpha -> (f_alpha, a(alpha))`.
pub fn verify_compensator_asymptotics<B>(builder: B, m: usize, alpha_grid: &[f64], xs: &[f64]) -> Result<Vec<CompensatorFit>>
where
    B: Fn(f64) -> (Smooth, f64),
{
    alpha_grid
        .iter()
        .map(|&alpha| {
            let (f, a) = builder(alpha);
            compensator_trace(f, a, alpha, m, xs)
        })
        .collect()
}

/// Trace of `x^{2m+1} (L_nu o F)[f](x) / (a b_m(alpha) Omega(x, alpha + 2m))`, where
/// `L_nu[f] ~ a x^alpha`. Also reports the gap to the commuted route `F o L_nu`.
pub fn verify_compensator_asymptotics_gen(nu: &ExponentTuple, f: Smooth, a: f64, alpha: f64, m: usize, xs: &[f64]) -> Result<CompensatorFit> {
    nu.check_distinct()?;
    let lf: Smooth = arc(WronskianOperator::l(nu.clone(), f.clone())?);
    if m > 0 {
        MomentumVector::compute(lf.as_ref(), m, alpha)?.check_zero(MOMENTUM_TOL)?;
    }
    let ff: Smooth = arc(FTransform(f));
    let lm = lift_fm(lf.clone(), m, if m > 0 { Some(alpha) } else { None })?;
    let norm = a * b_factor(m, alpha)?;
    let rows = xs
        .par_iter()
        .map(|&x| {
            let direct = op_l(nu, &ff, x)?;
            let commuted = op_f(lf.as_ref(), x)?;
            let lifted = if m == 0 { commuted } else { x.powi(-2 * m as i32) * op_f(lm.as_ref(), x)? };
            let gap = (direct - commuted).abs() / commuted.abs().max(f64::MIN_POSITIVE);
            let value = x.powi(2 * m as i32 + 1) * lifted;
            Ok(((x, value / (norm * omega_big(x, alpha + 2.0 * m as f64)?)), gap))
        })
        .collect::<Result<Vec<_>>>()?;
    let route_gap = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let ratio_trace: Vec<(f64, f64)> = rows.into_iter().map(|r| r.0).collect();
    let ell = ratio_trace.last().map_or(f64::NAN, |(_, r)| r * norm);
    Ok(CompensatorFit { alpha, ell, ratio_trace, route_gap: Some(route_gap) })
}

/// `f` with `L_(2)[f] = model_power(-1, 1) = x / (1 + x^2)`:
/// `f(x) = x^2 (pi/2 - atan x) - x`. For `x >= 2` it is evaluated as
/// `u phi(u^2)` with `u = 1/x` and `phi(s) = sum_k (-1)^{k+1} s^k / (2k+3)`,
/// avoiding the cancellation in `x^2 atan(1/x) - x ~ -1/(3x)`.
pub fn l2_preimage_of_model() -> Smooth {
    arc(FromSeries::new(MAX_JET - 1, |x: f64| {
        let t = Series::<MAX_JET>::variable(x);
        if x >= 2.0 {
            let u = t.recip();
            let s = u * u;
            let mut phi = Series::constant(0.0);
            for k in (0..40).rev() {
                let c = if k % 2 == 0 { -1.0 } else { 1.0 } / (2 * k + 3) as f64;
                phi = phi * s + Series::constant(c);
            }
            return Ok(u * phi);
        }
        // atan via its derivative 1 / (1 + t^2)
        let d = (Series::constant(1.0) + t * t).recip();
        let mut atan = Series::constant(x.atan());
        for k in 1..MAX_JET {
            atan.0[k] = d.0[k - 1] / k as f64;
        }
        let tail = Series::constant(std::f64::consts::FRAC_PI_2) - atan;
        Ok(t * t * tail - t)
    }))
}

/// Evaluates `f` on a schedule; convenience for traces printed by examples.
pub fn tabulate(f: &dyn SmoothFn, xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    xs.iter().map(|&x| Ok((x, f.eval(x)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuantifierConfig {
        QuantifierConfig::default()
    }

    #[test]
    fn pure_power_at_infinity() {
        let q = estimate_quantifier(|x| Ok(3.0 * x.powf(-1.4)), Boundary::Infinity, &Schedule::at_infinity(), &cfg()).unwrap();
        assert_eq!(q.mode, Mode::Power);
        assert!((q.alpha_hat + 1.4).abs() < 1e-4, "{q:?}");
        assert!((q.ell_hat - 3.0).abs() < 1e-4, "{q:?}");
    }

    #[test]
    fn power_with_correction_at_finite_boundary() {
        // f = 2 (1-x)^{-1/2} (1 + (1-x)) ~ 2 (1-x)^{-1/2}, quantifier 1/2
        let f = |x: f64| Ok(2.0 * (1.0 - x).powf(-0.5) * (2.0 - x));
        let q = estimate_quantifier(f, Boundary::Right(1.0), &Schedule::near_boundary(), &cfg()).unwrap();
        assert!((q.alpha_hat - 0.5).abs() < 1e-4, "{q:?}");
        assert!((q.ell_hat - 2.0).abs() < 1e-3, "{q:?}");
        let g = |x: f64| Ok((x + 1.0).powf(0.3));
        let q = estimate_quantifier(g, Boundary::Left(-1.0), &Schedule::near_boundary(), &cfg()).unwrap();
        assert!((q.alpha_hat + 0.3).abs() < 1e-6, "{q:?}");
    }

    #[test]
    fn compensator_shape_is_detected() {
        let q = estimate_quantifier(|x| Ok(x.ln() / x), Boundary::Infinity, &Schedule::at_infinity(), &cfg()).unwrap();
        assert_eq!(q.mode, Mode::Compensator);
        assert_eq!(q.alpha_hat, -1.0);
        assert!((q.ell_hat - 1.0).abs() < 1e-6, "{q:?}");
        let q = estimate_quantifier(|x| Ok(x.powf(-1.0)), Boundary::Infinity, &Schedule::at_infinity(), &cfg()).unwrap();
        assert_eq!(q.mode, Mode::Power);
    }

    #[test]
    fn zero_limit_rejected() {
        let r = estimate_quantifier(|_| Ok(0.0), Boundary::Infinity, &Schedule::at_infinity(), &cfg());
        assert!(matches!(r, Err(Error::ZeroLimit(_))));
    }

    #[test]
    fn aitken_accelerates_geometric() {
        let s: Vec<f64> = (0..5).map(|k| 1.0 + 0.5f64.powi(k)).collect();
        assert!((aitken(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn model_power_asymptotics() {
        let f = model_power(-1.4, 2.5);
        let q = estimate_quantifier(|x| f.eval(x), Boundary::Infinity, &Schedule::at_infinity(), &cfg()).unwrap();
        assert!((q.alpha_hat + 1.4).abs() < 1e-6 && (q.ell_hat - 2.5).abs() < 1e-6, "{q:?}");
        let g = calibrated_pair(-3.0, -5.0);
        let m1 = MomentumVector::compute(g.as_ref(), 1, -3.0).unwrap();
        assert!(m1.values[0].abs() < 1e-10, "{:?}", m1.values);
    }

    #[test]
    fn l2_preimage_maps_to_model() {
        let nu = ExponentTuple::new(vec![2.0]);
        let f = l2_preimage_of_model();
        let g = model_power(-1.0, 1.0);
        for x in [0.3, 1.0, 1.999, 2.0, 4.0, 50.0, 1e6] {
            let lf = op_l(&nu, &f, x).unwrap();
            let want = g.eval(x).unwrap();
            assert!((lf - want).abs() < 1e-10 * want.abs().max(1.0), "x={x}: {lf} vs {want}");
        }
    }

    #[test]
    fn l2_preimage_branches_agree() {
        let f = l2_preimage_of_model();
        let (a, b) = (f.eval(2.0 - 1e-12).unwrap(), f.eval(2.0).unwrap());
        assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        // f ~ -1/(3x) at infinity
        assert!((f.eval(1e8).unwrap() * 3e8 + 1.0).abs() < 1e-8);
    }

    #[test]
    fn generalized_trace_for_nu_2() {
        let nu = ExponentTuple::new(vec![2.0]);
        let xs = Schedule::at_infinity().growing();
        let fit = verify_compensator_asymptotics_gen(&nu, l2_preimage_of_model(), 1.0, -1.0, 0, &xs).unwrap();
        assert!(fit.meets(0.1), "{:?}", fit.ratio_trace);
        assert!(fit.route_gap.unwrap() < 1e-7, "{:?}", fit.route_gap);
    }

    #[test]
    fn main_trace_m0_near_log_case() {
        let xs = Schedule::at_infinity().growing();
        for alpha in [-1.05, -1.0, -0.95] {
            let fit = compensator_trace(model_power(alpha, 1.0), 1.0, alpha, 0, &xs).unwrap();
            assert!(fit.final_deviation() < 0.1, "alpha={alpha}: {:?}", fit.ratio_trace);
            assert!(fit.deviation_at(1e8) < fit.deviation_at(1e4), "alpha={alpha}");
        }
    }

    #[test]
    fn main_trace_m1_calibrated_pair() {
        let xs = Schedule::at_infinity().growing();
        let fit = compensator_trace(calibrated_pair(-3.0, -5.0), 1.0, -3.0, 1, &xs).unwrap();
        assert!(fit.final_deviation() < 0.1, "{:?}", fit.ratio_trace);
    }

    #[test]
    fn momentum_violation_blocks_lift() {
        let xs = [10.0, 100.0];
        let r = compensator_trace(model_power(-3.0, 1.0), 1.0, -3.0, 1, &xs);
        assert!(matches!(r, Err(Error::MomentumViolation { .. })), "{r:?}");
    }

    #[test]
    fn calibrated_family_kills_momenta() {
        for m in 1..=2 {
            let f = calibrated_family(-1.0 - 2.0 * m as f64, m).unwrap();
            let mv = MomentumVector::compute(f.as_ref(), m, -1.0 - 2.0 * m as f64).unwrap();
            assert!(mv.values.iter().all(|v| v.abs() < 1e-9), "m={m}: {:?}", mv.values);
        }
        // matches the quadrature value of M_1 for one model
        let q = MomentumVector::compute(model_power(-4.0, 1.0).as_ref(), 2, -4.0).unwrap();
        for n in 1..=2 {
            let want = model_momentum(n, -4.0).unwrap();
            assert!((q.values[n - 1] - want).abs() < 1e-9 * want.abs(), "{n}: {} vs {want}", q.values[n - 1]);
        }
    }
}
