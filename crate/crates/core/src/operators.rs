//! Operator calculus on smooth functions: the integral operator `F`, the
//! Wronskian operators `L_nu` and `D_nu`, the conjugation `B`, the momenta
//! `M_n` and `N_n`, and the lifting `f -> f_m`.
//!
//! Wronskians are expanded by cofactors over truncated Taylor series, so the
//! operators return full jets and compose with each other.

use crate::error::{Error, Result};
use crate::quadrature::{
    gauss_legendre_16, integrate, integrate_abscissa, integrate_to_infinity, ErrorSlot, IntegrationResult, DEFAULT_REL_TOL,
};
use crate::smooth::{check_order, series_of, write_jet, Monomial, Smooth, SmoothFn, MAX_JET};
use crate::specfun::script_g;
use crate::taylor::Series;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

type S = Series<MAX_JET>;

/// Largest number of functions in a Wronskian.
pub const MAX_WRONSKIAN: usize = 4;

/// Exponents `nu_1, ..., nu_n` of an operator `L_nu` or `D_nu`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExponentTuple {
    pub nu: Vec<f64>,
}

impl ExponentTuple {
    pub fn new(nu: Vec<f64>) -> Self {
        ExponentTuple { nu }
    }

    pub fn empty() -> Self {
        ExponentTuple { nu: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    /// Fails when two exponents coincide.
    pub fn check_distinct(&self) -> Result<()> {
        for (i, a) in self.nu.iter().enumerate() {
            if self.nu[i + 1..].iter().any(|b| a == b) {
                return Err(Error::NotDistinct(self.nu.clone()));
            }
        }
        Ok(())
    }

    /// `sum_i (nu_i - i)`, the power removed by `L_nu`.
    pub fn shift(&self) -> f64 {
        self.nu.iter().enumerate().map(|(i, v)| v - (i + 1) as f64).sum()
    }
}

/// Cofactor expansion along the first row.
#[allow(clippy::needless_range_loop)]
fn det<T>(m: &[Vec<T>], one: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    match m.len() {
        0 => one,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let minor = |j: usize| -> Vec<Vec<T>> {
                m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect()
            };
            let mut acc = m[0][0] * det(&minor(0), one);
            for j in 1..n {
                let term = m[0][j] * det(&minor(j), one);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_WRONSKIAN {
        Err(Error::Domain(format!("Wronskians of {n} functions exceed the supported {MAX_WRONSKIAN}")))
    } else {
        Ok(())
    }
}

/// `W[f_1, ..., f_n](x)`.
pub fn wronskian(fns: &[&dyn SmoothFn], x: f64) -> Result<f64> {
    let n = fns.len();
    check_size(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut m = vec![vec![0.0; n]; n];
    let mut jet = [0.0; MAX_JET];
    for (i, f) in fns.iter().enumerate() {
        check_order(n - 1, f.order())?;
        f.jet_into(x, &mut jet[..n])?;
        for k in 0..n {
            m[k][i] = jet[k];
        }
    }
    Ok(det(&m, 1.0))
}

/// The Wronskian as a series, from the series of its columns.
fn wronskian_series(cols: &[S]) -> S {
    let n = cols.len();
    let mut m = vec![vec![S::zero(); n]; n];
    for (i, c) in cols.iter().enumerate() {
        let mut d = *c;
        for row in m.iter_mut() {
            row[i] = d;
            d = d.derivative();
        }
    }
    det(&m, S::constant(1.0))
}

/// `psi_nu(x) = (x / sqrt(1 - x^2))^nu / (1 - x^2)` on `(0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct Psi {
    pub nu: f64,
}

fn psi_series(nu: f64, x: f64) -> Result<S> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("psi_nu needs x in (0, 1), got {x}")));
    }
    let t = S::variable(x);
    let one_minus = S::constant(1.0) - t * t;
    Ok(t.powf(nu) * one_minus.powf(-1.0 - 0.5 * nu))
}

impl SmoothFn for Psi {
    fn order(&self) -> usize {
        MAX_JET - 1
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        write_jet(&psi_series(self.nu, x)?, out);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Basis {
    Power,
    Psi,
}

/// `L_nu[f]` or `D_nu[f]` as a smooth function.
pub struct WronskianOperator {
    basis: Basis,
    nu: ExponentTuple,
    f: Smooth,
}

impl WronskianOperator {
    /// `L_nu[f](x) = W[x^nu_1, ..., x^nu_n, f](x) / x^{sum(nu_i - i)}` on `x > 0`.
    pub fn l(nu: ExponentTuple, f: Smooth) -> Result<Self> {
        check_size(nu.len() + 1)?;
        Ok(WronskianOperator { basis: Basis::Power, nu, f })
    }

    /// `D_nu[f](x) = (x(1-x^2))^{n(n+1)/2} W[psi_nu_1, ..., psi_nu_n, f](x) / prod psi_nu_i(x)`
    /// on `(0, 1)`.
    pub fn d(nu: ExponentTuple, f: Smooth) -> Result<Self> {
        check_size(nu.len() + 1)?;
        Ok(WronskianOperator { basis: Basis::Psi, nu, f })
    }

    fn series(&self, x: f64) -> Result<S> {
        let n = self.nu.len();
        if n == 0 {
            return series_of(self.f.as_ref(), x);
        }
        check_order(n, self.f.order())?;
        let t = S::variable(x);
        let mut cols = Vec::with_capacity(n + 1);
        let mut normalizer = S::constant(1.0);
        match self.basis {
            Basis::Power => {
                if !(x > 0.0) {
                    return Err(Error::Domain(format!("L_nu needs x > 0, got {x}")));
                }
                for &v in &self.nu.nu {
                    cols.push(series_of(&Monomial::new(1.0, v), x)?);
                }
                normalizer = t.powf(-self.nu.shift());
            }
            Basis::Psi => {
                for &v in &self.nu.nu {
                    let p = psi_series(v, x)?;
                    normalizer = normalizer.div(&p);
                    cols.push(p);
                }
                let weight = (t * (S::constant(1.0) - t * t)).powf((n * (n + 1) / 2) as f64);
                normalizer = normalizer * weight;
            }
        }
        cols.push(series_of(self.f.as_ref(), x)?);
        Ok(wronskian_series(&cols) * normalizer)
    }
}

impl SmoothFn for WronskianOperator {
    fn order(&self) -> usize {
        self.f.order().saturating_sub(self.nu.len())
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(self.nu.len() + out.len().saturating_sub(1), self.f.order())?;
        write_jet(&self.series(x)?, out);
        Ok(())
    }
}

pub fn op_l(nu: &ExponentTuple, f: &Smooth, x: f64) -> Result<f64> {
    WronskianOperator::l(nu.clone(), f.clone())?.eval(x)
}

pub fn op_d(nu: &ExponentTuple, f: &Smooth, x: f64) -> Result<f64> {
    WronskianOperator::d(nu.clone(), f.clone())?.eval(x)
}

/// Conjugation `B[f](x) = f(x / sqrt(1 + x^2)) / (1 + x^2)` on `x >= 0`.
pub struct Conjugate(pub Smooth);

impl SmoothFn for Conjugate {
    fn order(&self) -> usize {
        self.0.order()
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("B[f] needs x >= 0, got {x}")));
        }
        let t = S::variable(x);
        let one_plus = S::constant(1.0) + t * t;
        let mut inner = t * one_plus.powf(-0.5);
        // x / sqrt(1 + x^2) without overshooting 1 for large x
        inner.0[0] = if x > 1.0 { (1.0 + (x * x).recip()).sqrt().recip() } else { x / (1.0 + x * x).sqrt() };
        let outer = series_of(self.0.as_ref(), inner.value())?;
        write_jet(&(Series::compose(&outer, &inner) * one_plus.recip()), out);
        Ok(())
    }
}

pub fn op_b(f: &Smooth, x: f64) -> Result<f64> {
    Conjugate(f.clone()).eval(x)
}

// ------------------------------------------------------------------------- F

/// Breakpoints in `theta` placing `x sin(theta)` at successive decades, so the
/// quadrature resolves features of `f` near the origin when `|x|` is large.
fn theta_breaks(x: f64) -> Vec<f64> {
    let ax = x.abs();
    let mut breaks = vec![0.0];
    let mut s = 1.0;
    while s < 0.5 * ax {
        breaks.push((s / ax).asin());
        s *= 10.0;
    }
    breaks.push(FRAC_PI_2);
    breaks
}

fn accept(res: IntegrationResult, rel_tol: f64, what: &str) -> Result<IntegrationResult> {
    if res.converged || res.abs_error_estimate <= 1e3 * rel_tol * res.value.abs() {
        Ok(res)
    } else {
        Err(Error::NoConvergence(format!(
            "{what}: estimate {} with error {}",
            res.value, res.abs_error_estimate
        )))
    }
}

/// `int_0^{pi/2} f^(k)(x sin t) sin^k t dt`, the `k`-th derivative of `F[f]`.
pub fn op_f_derivative(f: &dyn SmoothFn, k: usize, x: f64) -> Result<f64> {
    op_f_derivative_tol(f, k, x, DEFAULT_REL_TOL)
}

pub fn op_f_derivative_tol(f: &dyn SmoothFn, k: usize, x: f64, rel_tol: f64) -> Result<f64> {
    check_order(k, f.order())?;
    if x == 0.0 {
        return Ok(f.derivative(k, 0.0)? * script_g(k as f64)?);
    }
    let breaks = theta_breaks(x);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let mut slot = ErrorSlot::new();
        let res = integrate(
            |t| {
                let s = t.sin();
                slot.take(f.derivative(k, x * s)) * s.powi(k as i32)
            },
            w[0],
            w[1],
            rel_tol,
        );
        total += accept(slot.finish(res)?, rel_tol, "F[f]")?.value;
    }
    Ok(total)
}

/// `F[f](x) = int_0^{pi/2} f(x sin t) dt`.
pub fn op_f(f: &dyn SmoothFn, x: f64) -> Result<f64> {
    op_f_derivative(f, 0, x)
}

/// `F[f]` as a smooth function, differentiated under the integral sign.
pub struct FTransform(pub Smooth);

impl SmoothFn for FTransform {
    fn order(&self) -> usize {
        self.0.order()
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        for (k, o) in out.iter_mut().enumerate() {
            *o = op_f_derivative(self.0.as_ref(), k, x)?;
        }
        Ok(())
    }
}

// -------------------------------------------------------------------- momenta

/// `M_n[f] = int_0^inf x^{2n-2} f(x) dx`, with `f ~ x^tail_exponent` at infinity.
pub fn momentum_m(f: &dyn SmoothFn, n: usize, tail_exponent: f64) -> Result<f64> {
    Ok(momentum_m_result(f, n, tail_exponent)?.value)
}

fn momentum_m_result(f: &dyn SmoothFn, n: usize, tail_exponent: f64) -> Result<IntegrationResult> {
    if n == 0 {
        return Err(Error::Domain("momenta are indexed from 1".into()));
    }
    let p = (2 * n - 2) as i32;
    let hint = p as f64 + tail_exponent;
    if !(hint < -1.0) {
        return Err(Error::Divergent(format!("M_{n} needs 2n - 2 + tail exponent < -1, got {hint}")));
    }
    let mut slot = ErrorSlot::new();
    let res = integrate_to_infinity(|x| x.powi(p) * slot.take(f.eval(x)), 0.0, DEFAULT_REL_TOL, hint);
    accept(slot.finish(res)?, DEFAULT_REL_TOL, "M_n")
}

/// Momenta `M_1..M_m` with their quadrature error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumVector {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

impl MomentumVector {
    pub fn compute(f: &dyn SmoothFn, m: usize, tail_exponent: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(m);
        let mut error_estimates = Vec::with_capacity(m);
        for n in 1..=m {
            let r = momentum_m_result(f, n, tail_exponent)?;
            values.push(r.value);
            error_estimates.push(r.abs_error_estimate);
        }
        Ok(MomentumVector { values, error_estimates })
    }

    /// Fails on the first momentum with `|M_n| > tol`.
    pub fn check_zero(&self, tol: f64) -> Result<()> {
        match self.values.iter().position(|v| !(v.abs() <= tol)) {
            Some(i) => Err(Error::MomentumViolation { index: i + 1, value: self.values[i] }),
            None => Ok(()),
        }
    }
}

/// `N_n[f] = int_0^1 (x / sqrt(1-x^2))^{2n-2} f(x) / sqrt(1-x^2) dx`, computed
/// as `int_0^{pi/2} tan^{2n-2}(t) f(sin t) dt`.
pub fn momentum_n(f: &dyn SmoothFn, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("momenta are indexed from 1".into()));
    }
    let p = (2 * n - 2) as i32;
    // d is the distance of t to pi/2
    let integrand = |d: f64| -> Result<f64> {
        let v = f.eval(d.cos())?;
        Ok(if v == 0.0 { 0.0 } else { d.tan().recip().powi(p) * v })
    };
    let (d1, d2) = (1e-5, 1e-7);
    let (g1, g2) = (integrand(d1)?.abs(), integrand(d2)?.abs());
    if g1 > 0.0 && g2 > 0.0 {
        let slope = (g2 / g1).ln() / (d2 / d1).ln();
        if slope <= -0.99 {
            return Err(Error::Divergent(format!("N_{n}: integrand grows like (1-x)^{:.3} at 1", 0.5 * slope)));
        }
    }
    let mut slot = ErrorSlot::new();
    let res = integrate_abscissa(
        |a| if a.from_right == 0.0 { 0.0 } else { slot.take(integrand(a.from_right)) },
        0.0,
        FRAC_PI_2,
        DEFAULT_REL_TOL,
    );
    Ok(accept(slot.finish(res)?, DEFAULT_REL_TOL, "N_n")?.value)
}

// ----------------------------------------------------------------------- lift

/// Inner integrals are tabulated on `[GRID_MIN, GRID_MAX]` with ratio `2^{1/4}`.
const GRID_MIN: f64 = 1e-3;
const GRID_MAX: f64 = 1e12;
const GRID_STEPS_PER_OCTAVE: f64 = 4.0;
/// Relative tolerance of the adaptive Gauss-Legendre cells.
const CELL_TOL: f64 = 1e-14;
const CELL_DEPTH: usize = 12;
/// Absolute floor for cells whose integrand has underflowed.
const CELL_FLOOR: f64 = 1e-290;

fn adaptive_gl<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64, depth: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre_16(&mut *f, a, mid);
    let right = gauss_legendre_16(&mut *f, mid, b);
    let both = left + right;
    if depth == 0 || (both - whole).abs() <= (CELL_TOL * both.abs()).max(CELL_FLOOR) {
        both
    } else {
        adaptive_gl(f, a, mid, left, depth - 1) + adaptive_gl(f, mid, b, right, depth - 1)
    }
}

fn cell_integral<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gauss_legendre_16(&mut *f, a, b);
    adaptive_gl(f, a, b, whole, CELL_DEPTH)
}

/// `I_{2j}(x) = int_0^x t^{2j} f(t) dt` tabulated on a geometric grid.
struct MomentTable {
    power: i32,
    grid: Vec<f64>,
    head: Vec<f64>,
    /// `int_{x_i}^inf t^{2j} f`, present when the momentum vanishes.
    tail: Option<Vec<f64>>,
    tail_hint: f64,
}

impl MomentTable {
    fn build(f: &dyn SmoothFn, power: i32, zero_momentum: Option<f64>) -> Result<Self> {
        let ratio = 2f64.powf(1.0 / GRID_STEPS_PER_OCTAVE);
        let count = ((GRID_MAX / GRID_MIN).ln() / ratio.ln()).ceil() as usize + 1;
        let grid: Vec<f64> = (0..count).map(|i| GRID_MIN * ratio.powi(i as i32)).collect();
        let mut slot = ErrorSlot::new();
        let mut g = |t: f64| t.powi(power) * slot.take(f.eval(t));
        let cells: Vec<f64> = std::iter::once(cell_integral(&mut g, 0.0, grid[0]))
            .chain(grid.windows(2).map(|w| cell_integral(&mut g, w[0], w[1])))
            .collect();
        slot.finish(Ok(()))?;
        let mut head = Vec::with_capacity(count);
        let mut acc = 0.0;
        for c in &cells {
            acc += c;
            head.push(acc);
        }
        let (tail, tail_hint) = match zero_momentum {
            Some(exponent) => {
                let hint = power as f64 + exponent;
                let last = *grid.last().unwrap_or(&GRID_MAX);
                let mut slot = ErrorSlot::new();
                let res = integrate_to_infinity(|t| t.powi(power) * slot.take(f.eval(t)), last, DEFAULT_REL_TOL, hint);
                let mut acc = accept(slot.finish(res)?, DEFAULT_REL_TOL, "lift tail")?.value;
                let mut tail = vec![0.0; count];
                tail[count - 1] = acc;
                for i in (0..count - 1).rev() {
                    acc += cells[i + 1];
                    tail[i] = acc;
                }
                (Some(tail), hint)
            }
            None => (None, f64::NAN),
        };
        Ok(MomentTable { power, grid, head, tail, tail_hint })
    }

    fn value(&self, f: &dyn SmoothFn, x: f64) -> Result<f64> {
        let mut slot = ErrorSlot::new();
        let mut g = |t: f64| t.powi(self.power) * slot.take(f.eval(t));
        let v = if x < self.grid[0] {
            cell_integral(&mut g, 0.0, x)
        } else if x > *self.grid.last().unwrap_or(&GRID_MAX) {
            let last = self.grid.len() - 1;
            match &self.tail {
                Some(_) => {
                    let res = integrate_to_infinity(&mut g, x, DEFAULT_REL_TOL, self.tail_hint)?;
                    -res.value
                }
                None => self.head[last] + integrate(&mut g, self.grid[last], x, DEFAULT_REL_TOL)?.value,
            }
        } else {
            let i = self.grid.partition_point(|&t| t <= x) - 1;
            let partial = cell_integral(&mut g, self.grid[i], x);
            match &self.tail {
                Some(tail) if x >= 1.0 => partial - tail[i],
                _ => self.head[i] + partial,
            }
        };
        slot.finish(Ok(v))
    }
}

fn pow_int(t: S, k: usize) -> S {
    (0..k).fold(S::constant(1.0), |acc, _| acc * t)
}

/// `f_m` from `f_0 = f` and `f_m = x^2 f_{m-1} + x int_0^x f_{m-1}`, in the
/// closed form `x^{2m} f + sum_j c_{m,j} x^{2m-1-2j} I_{2j}(x)`.
///
/// When the momenta of `f` vanish, `I_{2j}(x)` is replaced by
/// `-int_x^inf t^{2j} f` for `x >= 1`, which keeps the decay of `f_m` visible.
pub struct Lifted {
    f: Smooth,
    m: usize,
    coeffs: Vec<f64>,
    tables: Vec<MomentTable>,
}

/// `c_{m,j}` for `j = 0..m`.
pub fn lift_coefficients(m: usize) -> Vec<f64> {
    let mut c: Vec<f64> = Vec::new();
    for k in 0..m {
        // from order k to k + 1
        let mut next: Vec<f64> = c.iter().enumerate().map(|(j, v)| v * (1.0 + 1.0 / (2 * (k - j)) as f64)).collect();
        next.push(1.0 - c.iter().enumerate().map(|(j, v)| v / (2 * (k - j)) as f64).sum::<f64>());
        c = next;
    }
    c
}

impl Lifted {
    /// `zero_momenta` carries the tail exponent of `f` when `M_1..M_m` vanish.
    pub fn new(f: Smooth, m: usize, zero_momenta: Option<f64>) -> Result<Self> {
        let tables = (0..m)
            .map(|j| MomentTable::build(f.as_ref(), 2 * j as i32, zero_momenta))
            .collect::<Result<Vec<_>>>()?;
        Ok(Lifted { f, m, coeffs: lift_coefficients(m), tables })
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

impl SmoothFn for Lifted {
    fn order(&self) -> usize {
        self.f.order()
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("f_m is defined on x >= 0, got {x}")));
        }
        let t = S::variable(x);
        let fs = series_of(self.f.as_ref(), x)?;
        let mut total = pow_int(t, 2 * self.m) * fs;
        for (j, (c, table)) in self.coeffs.iter().zip(&self.tables).enumerate() {
            let integrand = pow_int(t, 2 * j) * fs;
            let mut integral = S::constant(table.value(self.f.as_ref(), x)?);
            for k in 1..MAX_JET {
                integral.0[k] = integrand.0[k - 1] / k as f64;
            }
            total = total + (pow_int(t, 2 * self.m - 1 - 2 * j) * integral).scale(*c);
        }
        write_jet(&total, out);
        Ok(())
    }
}

pub fn lift_fm(f: Smooth, m: usize, zero_momenta: Option<f64>) -> Result<Smooth> {
    if m == 0 {
        return Ok(f);
    }
    Ok(std::sync::Arc::new(Lifted::new(f, m, zero_momenta)?))
}
