//! The period function `T(h)`, its derivative, and the count of critical
//! periodic orbits in an energy window.

use crate::asymptotics::{estimate_quantifier, Boundary, Quantifier, QuantifierConfig, Schedule};
use crate::error::{Error, Result};
use crate::operators::{op_f, ExponentTuple, FTransform, WronskianOperator};
use crate::potential::{PotentialCenter, JET_LEN};
use crate::quadrature::{integrate, integrate_abscissa, ErrorSlot, DEFAULT_REL_TOL};
use crate::roots::brent;
use crate::smooth::{arc, check_order, series_of, write_jet, FromSeries, Smooth, SmoothFn, MAX_JET};
use crate::specfun::omega_big;
use crate::taylor::Series;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, SQRT_2};

fn check_energy(center: &PotentialCenter, h: f64) -> Result<()> {
    let h0 = center.h0();
    if h > 0.0 && h < h0 {
        Ok(())
    } else {
        Err(Error::OutOfAnnulus { z: h.abs().sqrt().copysign(h), bound: h0.sqrt() })
    }
}

/// `T(h) = sqrt 2 int_0^{pi/2} P[(g^{-1})'](sqrt(h) sin t) dt`, with
/// `P[phi](z) = phi(z) + phi(-z)`.
pub fn period(center: &PotentialCenter, h: f64) -> Result<f64> {
    check_energy(center, h)?;
    let r = h.sqrt();
    let mut slot = ErrorSlot::new();
    let res = integrate(
        |t| {
            let z = r * t.sin();
            slot.take(center.g_inverse_derivative(z, 1)) + slot.take(center.g_inverse_derivative(-z, 1))
        },
        0.0,
        FRAC_PI_2,
        DEFAULT_REL_TOL,
    );
    Ok(SQRT_2 * slot.finish(res)?.value)
}

/// `h - V(x_* + s d)` from the jet of `V` at a turning point `x_*` with `V(x_*) = h`.
fn gap_from_jet(jet: &[f64; JET_LEN], s: f64, d: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for (k, v) in jet.iter().enumerate().skip(1) {
        term *= s * d / k as f64;
        sum += v * term;
    }
    -sum
}

/// `T(h) = sqrt 2 int_{x_-}^{x_+} dx / sqrt(h - V(x))` by endpoint-singular quadrature.
///
/// Near each turning point `h - V` is expanded from the jet of `V`, which avoids
/// the cancellation in the difference.
pub fn period_direct(center: &PotentialCenter, h: f64) -> Result<f64> {
    check_energy(center, h)?;
    let r = h.sqrt();
    let (xm, xp) = (center.g_inverse(-r)?, center.g_inverse(r)?);
    let (jm, jp) = (center.jet(xm)?, center.jet(xp)?);
    let a = center.annulus();
    let width = xp - xm;
    let radius_m = if a.x_left.is_finite() { xm - a.x_left } else { f64::INFINITY };
    let radius_p = if a.x_right.is_finite() { a.x_right - xp } else { f64::INFINITY };
    let thr_m = 0.1 * width.min(radius_m);
    let thr_p = 0.1 * width.min(radius_p);
    let mut slot = ErrorSlot::new();
    let res = integrate_abscissa(
        |p| {
            let gap = if p.from_left <= p.from_right && p.from_left < thr_m {
                gap_from_jet(&jm, 1.0, p.from_left)
            } else if p.from_right < p.from_left && p.from_right < thr_p {
                gap_from_jet(&jp, -1.0, p.from_right)
            } else {
                h - slot.take(center.v(p.x))
            };
            if gap > 0.0 {
                gap.sqrt().recip()
            } else {
                0.0
            }
        },
        xm,
        xp,
        DEFAULT_REL_TOL,
    );
    Ok(SQRT_2 * slot.finish(res)?.value)
}

/// `T'(h) = F[f](sqrt h) / (sqrt 2 h)`.
pub fn period_derivative(center: &PotentialCenter, h: f64) -> Result<f64> {
    check_energy(center, h)?;
    let f = center.family_fn();
    Ok(op_f(&f, h.sqrt())? / (SQRT_2 * h))
}

/// Ridders' extrapolated central difference of `f` at `x`, starting from step `step`.
/// Returns `(derivative, error estimate)`.
pub fn ridders<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, step: f64) -> Result<(f64, f64)> {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 10;
    const SAFE: f64 = 2.0;
    let mut a = [[0.0; NTAB]; NTAB];
    let mut hh = step;
    a[0][0] = (f(x + hh)? - f(x - hh)?) / (2.0 * hh);
    let mut err = f64::INFINITY;
    let mut ans = a[0][0];
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = (f(x + hh)? - f(x - hh)?) / (2.0 * hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if errt <= err {
                err = errt;
                ans = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    Ok((ans, err))
}

/// Finite-difference oracle for `T'(h)`, built on [`period`].
pub fn period_derivative_fd(center: &PotentialCenter, h: f64) -> Result<f64> {
    check_energy(center, h)?;
    let step = 0.25 * h.min(center.h0() - h);
    Ok(ridders(|e| period(center, e), h, step)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodMethod {
    Direct,
    Substitution,
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSample {
    pub h: f64,
    pub period: f64,
    pub period_derivative: f64,
    pub method: PeriodMethod,
}

/// `T` by substitution and `T'` through the operator identity.
pub fn sample(center: &PotentialCenter, h: f64) -> Result<PeriodSample> {
    Ok(PeriodSample {
        h,
        period: period(center, h)?,
        period_derivative: period_derivative(center, h)?,
        method: PeriodMethod::Operator,
    })
}

/// Zeros of `T'` located in an energy window.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCount {
    pub window: (f64, f64),
    pub count: usize,
    pub roots: Vec<f64>,
    /// Smallest `|T'|` on grid points not adjacent to a located root.
    pub certification_gap: f64,
    pub grid_resolution: usize,
}

/// Grid from `h_lo` to `h_hi` with geometric spacing in the distance to `h0`
/// (in `h` itself when `h0` is infinite).
pub fn energy_grid(h0: f64, h_lo: f64, h_hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if h0.is_finite() {
                let (d_lo, d_hi) = (h0 - h_lo, h0 - h_hi);
                h0 - d_lo * (d_hi / d_lo).powf(s)
            } else {
                h_lo * (h_hi / h_lo).powf(s)
            }
        })
        .collect()
}

/// Counts strict sign changes of `T'` on an `resolution`-point grid of the window and
/// refines each bracketed root.
pub fn count_critical_orbits(center: &PotentialCenter, window: (f64, f64), resolution: usize) -> Result<ZeroCount> {
    let (h_lo, h_hi) = window;
    let h0 = center.h0();
    if !(h_lo > 0.0 && h_lo < h_hi && h_hi < h0) {
        return Err(Error::Domain(format!("window ({h_lo}, {h_hi}) is not inside (0, {h0})")));
    }
    let grid = energy_grid(h0, h_lo, h_hi, resolution);
    let values = grid.par_iter().map(|&h| period_derivative(center, h)).collect::<Result<Vec<f64>>>()?;
    let mut roots = Vec::new();
    let mut near_root = vec![false; grid.len()];
    for i in 0..grid.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a * b < 0.0 {
            let tol = 1e-13 * grid[i + 1].abs();
            let root = brent(|h| period_derivative(center, h).unwrap_or(f64::NAN), grid[i], grid[i + 1], tol)?;
            roots.push(root);
            near_root[i] = true;
            near_root[i + 1] = true;
        }
    }
    let certification_gap = values
        .iter()
        .zip(&near_root)
        .filter(|(_, near)| !**near)
        .map(|(v, _)| v.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(ZeroCount { window, count: roots.len(), roots, certification_gap, grid_resolution: resolution })
}

/// `sqrt 2 h0 z^2 (1 - z^2)^{-1/2}`, the weight that turns `T'(z^2 h0)` into
/// `(1 - z^2)^{-1/2} F[f](z)` for the rescaled family `f`.
pub fn natural_weight(h0: f64) -> Smooth {
    arc(FromSeries::new(MAX_JET - 1, move |z| {
        let t = Series::variable(z);
        Ok((t * t * (Series::constant(1.0) - t * t).powf(-0.5)).scale(SQRT_2 * h0))
    }))
}

/// `z -> weight(z) T'(z^2 h0)` with derivatives from `F` of the rescaled family.
struct WeightedDerivative {
    weight: Smooth,
    transform: Smooth,
    h0: f64,
}

impl SmoothFn for WeightedDerivative {
    fn order(&self) -> usize {
        self.weight.order().min(self.transform.order())
    }
    fn jet_into(&self, z: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let t = Series::variable(z);
        // T'(z^2 h0) = F[f](z) / (sqrt 2 h0 z^2)
        let inv = (t * t).scale(SQRT_2 * self.h0).recip();
        let s = series_of(self.weight.as_ref(), z)? * series_of(self.transform.as_ref(), z)? * inv;
        write_jet(&s, out);
        Ok(())
    }
}

/// One point of a Wronskian criterion trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub z: f64,
    pub value: f64,
}

/// `(1-z)^kappa / Omega(z / sqrt(1-z^2), alpha) W[psi_nu_1, ..., psi_nu_n, weight T'(z^2 h0)](z)`
/// with `kappa = 1/2 - m + n(n+3)/2 + sum(nu)/2`, the exponent for which the
/// trace has a finite nonzero limit at `z = 1`.
pub fn wronskian_criterion_trace(
    center: &PotentialCenter,
    nu: &ExponentTuple,
    weight: Smooth,
    m: usize,
    alpha: f64,
    z_schedule: &[f64],
) -> Result<Vec<TracePoint>> {
    let h0 = center.h0();
    if !h0.is_finite() {
        return Err(Error::Domain("the finite-energy criterion needs a finite h0".into()));
    }
    let n = nu.len();
    let kappa = 0.5 - m as f64 + (n * (n + 3)) as f64 / 2.0 + 0.5 * nu.nu.iter().sum::<f64>();
    let transform: Smooth = arc(FTransform(arc(center.rescaled_family_fn()?)));
    let g: Smooth = arc(WeightedDerivative { weight, transform, h0 });
    // D_nu without its prefactor and psi quotient is the bare Wronskian
    let op = WronskianOperator::d(nu.clone(), g)?;
    z_schedule
        .par_iter()
        .map(|&z| {
            let d = op.eval(z)?;
            let psi_prod: f64 = nu.nu.iter().map(|&v| (z / (1.0 - z * z).sqrt()).powf(v) / (1.0 - z * z)).product();
            let pre = (z * (1.0 - z * z)).powf((n * (n + 1) / 2) as f64);
            let w = d * psi_prod / pre;
            let x = z / (1.0 - z * z).sqrt();
            Ok(TracePoint { z, value: (1.0 - z).powf(kappa) / omega_big(x, alpha)? * w })
        })
        .collect()
}

/// Quantifier at `z = 1` of `D_nu[f]` for the rescaled family
/// `f(z) = P[z sqrt(h0) (g^{-1})''(z sqrt(h0))]`; `nu` empty means `f` itself.
pub fn boundary_quantifier(
    center: &PotentialCenter,
    nu: &ExponentTuple,
    schedule: &Schedule,
    config: &QuantifierConfig,
) -> Result<Quantifier> {
    if !center.h0().is_finite() {
        return Err(Error::Domain("the boundary quantifier needs a finite h0".into()));
    }
    let f: Smooth = arc(center.rescaled_family_fn()?);
    let g: Smooth = if nu.is_empty() { f } else { arc(WronskianOperator::d(nu.clone(), f)?) };
    estimate_quantifier(|z| g.eval(z), Boundary::Right(1.0), schedule, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{loud_center, power_center, LoudParams, PowerParams};
    use crate::potential::Harmonic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn power(q: f64, p: f64) -> PotentialCenter {
        power_center(PowerParams::new(q, p).unwrap()).unwrap()
    }

    #[test]
    fn isochrones() {
        let c = PotentialCenter::new(Harmonic { stiffness: 1.0 }).unwrap();
        for &h in &[0.01, 1.0, 50.0] {
            assert!((period(&c, h).unwrap() - 2.0 * PI).abs() < 1e-10);
            assert_eq!(period_derivative(&c, h).unwrap(), 0.0);
        }
        let z = count_critical_orbits(&c, (0.1, 10.0), 40).unwrap();
        assert_eq!(z.count, 0);
        let c = power(0.0, 1.0);
        for &f in &[0.1, 0.5, 0.9] {
            let h = f * c.h0();
            assert!((period(&c, h).unwrap() - 2.0 * PI).abs() < 1e-10);
            assert!((period_direct(&c, h).unwrap() - 2.0 * PI).abs() < 1e-9);
        }
        assert!(period(&c, c.h0()).is_err());
        assert!(period(&c, -0.1).is_err());
    }

    #[test]
    fn direct_and_substitution_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let centers = [
            power(0.0, 2.0),
            power(-1.0 / 3.0, 2.0),
            power(0.5, 1.7),
            loud_center(LoudParams::new(-1.0, 2.0).unwrap()).unwrap(),
            loud_center(LoudParams::new(-0.6, 1.5).unwrap()).unwrap(),
        ];
        for i in 0..20 {
            let c = &centers[i % centers.len()];
            let h = rng.gen_range(0.05..0.95) * c.h0();
            let (a, b) = (period(c, h).unwrap(), period_direct(c, h).unwrap());
            assert!(rel(a, b) < 1e-8, "{} h={h}: {a} vs {b}", c.label());
        }
    }

    #[test]
    fn derivative_matches_differences() {
        let c = power(0.0, 2.0);
        let h = 0.5 * c.h0();
        let (a, b) = (period_derivative(&c, h).unwrap(), period_derivative_fd(&c, h).unwrap());
        assert!(rel(a, b) < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn ridders_on_elementary_functions() {
        let (d, err) = ridders(|x| Ok(x.sin()), 0.7, 0.1).unwrap();
        assert!((d - 0.7f64.cos()).abs() < 1e-12 && err < 1e-10);
    }

    #[test]
    fn regular_value_has_no_zeros_near_boundary() {
        let c = power(-1.0 / 3.0, 2.0);
        let h0 = c.h0();
        let grid = energy_grid(h0, 0.9 * h0, 0.999 * h0, 30);
        let signs: Vec<f64> = grid.iter().map(|&h| period_derivative(&c, h).unwrap().signum()).collect();
        assert!(signs.iter().all(|s| *s == signs[0] && *s != 0.0));
    }

    #[test]
    fn energy_grid_shape() {
        let g = energy_grid(1.0, 0.9, 1.0 - 1e-5, 5);
        assert!((g[0] - 0.9).abs() < 1e-15 && (g[4] - (1.0 - 1e-5)).abs() < 1e-15);
        assert!(((1.0 - g[2]) - 1e-3).abs() < 1e-14);
        let g = energy_grid(f64::INFINITY, 1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_quantifiers_of_the_anchors() {
        let cfg = QuantifierConfig::default();
        let sched = Schedule::near_boundary();
        let power = power_center(PowerParams::new(-1.0 / 3.0, 2.0).unwrap()).unwrap();
        let q = boundary_quantifier(&power, &ExponentTuple::empty(), &sched, &cfg).unwrap();
        assert!((q.alpha_hat - 0.5).abs() < 0.05, "{q:?}");
        let loud = loud_center(LoudParams::new(-1.0, 2.0).unwrap()).unwrap();
        let q = boundary_quantifier(&loud, &ExponentTuple::new(vec![0.0]), &sched, &cfg).unwrap();
        assert!((q.alpha_hat - 0.5).abs() < 0.05, "{q:?}");
    }

    #[test]
    fn criterion_traces_settle() {
        let zs: Vec<f64> = (3..=7).map(|k| 1.0 - 10f64.powi(-k)).collect();
        let nu = ExponentTuple::new(vec![0.0]);
        let loud = loud_center(LoudParams::new(-1.0, 2.0).unwrap()).unwrap();
        let power = power_center(PowerParams::new(0.0, 0.5).unwrap()).unwrap();
        for c in [loud, power] {
            let t = wronskian_criterion_trace(&c, &nu, natural_weight(c.h0()), 0, -1.0, &zs).unwrap();
            let v: Vec<f64> = t.iter().map(|p| p.value).collect();
            let (a, b) = (v[v.len() - 2], v[v.len() - 1]);
            assert!(b.abs() > 1e-3 && (a / b - 1.0).abs() < 0.05, "{}: {v:?}", c.label());
        }
    }
}
