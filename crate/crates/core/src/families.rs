//! The power-like family `x' = y, y' = (1+x)^q - (1+x)^p` and the
//! dehomogenized Loud family in potential form.

use crate::error::{Error, Result};
use crate::potential::{Annulus, Jet, Potential, PotentialCenter, JET_LEN};
use crate::roots::brent;

/// Terms kept in the small-argument series below.
const SERIES_TERMS: usize = 30;
/// Below this `|argument|` the cancellation-prone differences use series.
const SERIES_CUTOFF: f64 = 0.1;

/// `sum_{k>=1} (a^k - b^k) L^k / k!`, i.e. `expm1(aL) - expm1(bL)`.
fn expm1_difference(a: f64, b: f64, l: f64) -> f64 {
    let (mut pa, mut pb, mut lk) = (1.0, 1.0, 1.0);
    let mut sum = 0.0;
    for k in 1..=SERIES_TERMS {
        pa *= a;
        pb *= b;
        lk *= l / k as f64;
        sum += (pa - pb) * lk;
    }
    sum
}

fn falling(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a - i as f64))
}

// ---------------------------------------------------------------- power family

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    pub q: f64,
    pub p: f64,
}

impl PowerParams {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !(p > q) {
            return Err(Error::Domain(format!("power family needs p > q, got q={q}, p={p}")));
        }
        if q == -1.0 || p == -1.0 {
            return Err(Error::Domain("power family closed form excludes p = -1 and q = -1".into()));
        }
        Ok(PowerParams { q, p })
    }

    /// Energy of the outer boundary; infinite when `q < -1 < p`.
    pub fn h0(&self) -> f64 {
        let (q, p) = (self.q, self.p);
        if q < -1.0 && p > -1.0 {
            f64::INFINITY
        } else {
            (p - q) / ((p + 1.0) * (q + 1.0))
        }
    }

    /// `((p+1)/(q+1))^{1/(p-q)} - 1`.
    fn critical_offset(&self) -> f64 {
        let (q, p) = (self.q, self.p);
        (((p + 1.0) / (q + 1.0)).ln() / (p - q)).exp_m1()
    }

    pub fn annulus(&self) -> Annulus {
        let h0 = self.h0();
        if self.q > -1.0 {
            Annulus { x_left: -1.0, x_right: self.critical_offset(), h0 }
        } else if self.p > -1.0 {
            Annulus { x_left: -1.0, x_right: f64::INFINITY, h0 }
        } else {
            Annulus { x_left: self.critical_offset(), x_right: f64::INFINITY, h0 }
        }
    }
}

/// `V(x) = int_1^{x+1} (u^p - u^q) du`.
#[derive(Debug, Clone, Copy)]
pub struct PowerPotential {
    params: PowerParams,
}

impl PowerPotential {
    fn value(&self, x: f64) -> f64 {
        let (a, b) = (self.params.p + 1.0, self.params.q + 1.0);
        let l = x.ln_1p();
        if (a * l).abs().max((b * l).abs()) < SERIES_CUTOFF {
            // sum_{k>=2} (a^{k-1} - b^{k-1}) L^k / k!
            let (mut pa, mut pb, mut lk) = (1.0, 1.0, l);
            let mut sum = 0.0;
            for k in 2..=SERIES_TERMS {
                pa *= a;
                pb *= b;
                lk *= l / k as f64;
                sum += (pa - pb) * lk;
            }
            sum
        } else {
            (a * l).exp_m1() / a - (b * l).exp_m1() / b
        }
    }
}

impl Potential for PowerPotential {
    fn jet(&self, x: f64) -> Result<Jet> {
        if !(x > -1.0) {
            return Err(Error::Domain(format!("power potential needs x > -1, got {x}")));
        }
        let (q, p) = (self.params.q, self.params.p);
        let mut j = [0.0; JET_LEN];
        let (v, dv) = self.value_slope(x)?;
        j[0] = v;
        j[1] = dv;
        let l = x.ln_1p();
        for (k, slot) in j.iter_mut().enumerate().skip(2) {
            let n = k - 1;
            *slot = falling(p, n) * ((p - n as f64) * l).exp() - falling(q, n) * ((q - n as f64) * l).exp();
        }
        Ok(j)
    }

    fn value_slope(&self, x: f64) -> Result<(f64, f64)> {
        if !(x > -1.0) {
            return Err(Error::Domain(format!("power potential needs x > -1, got {x}")));
        }
        let (q, p) = (self.params.q, self.params.p);
        let l = x.ln_1p();
        let dv = if (p * l).abs().max((q * l).abs()) < SERIES_CUTOFF {
            expm1_difference(p, q, l)
        } else {
            (p * l).exp_m1() - (q * l).exp_m1()
        };
        Ok((self.value(x), dv))
    }

    fn annulus(&self) -> Annulus {
        self.params.annulus()
    }

    fn label(&self) -> String {
        format!("power(q={}, p={})", self.params.q, self.params.p)
    }
}

pub fn power_center(params: PowerParams) -> Result<PotentialCenter> {
    PotentialCenter::new(PowerPotential { params })
}

/// `f(p) = ((3+3p)/2)^{(3+3p)/(1+3p)} - 3p - 2`.
pub fn power_f(p: f64) -> Result<f64> {
    if p == -1.0 / 3.0 || !(p > -1.0) {
        return Err(Error::Domain(format!("f(p) needs p > -1, p != -1/3, got {p}")));
    }
    let base = 1.5 * (1.0 + p);
    Ok((base.ln() * (3.0 + 3.0 * p) / (1.0 + 3.0 * p)).exp() - 3.0 * p - 2.0)
}

/// The unique zero `p1` of [`power_f`] on `(-1/3, inf)`.
pub fn find_p1() -> Result<f64> {
    let (lo, mut hi) = (0.0, 1.0);
    while power_f(hi)? > 0.0 {
        hi *= 2.0;
    }
    brent(|p| power_f(p).unwrap_or(f64::NAN), lo, hi, 1e-15)
}

/// Boundary quantifiers of `h0 - V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryQuantifiers {
    pub beta_left: f64,
    pub b_left: f64,
    pub beta_right: f64,
    pub b_right: f64,
}

pub fn power_boundary_quantifiers(params: PowerParams) -> Result<BoundaryQuantifiers> {
    if !(params.q > -1.0) {
        return Err(Error::Domain("boundary quantifiers need q > -1".into()));
    }
    let pot = PowerPotential { params };
    let xr = params.annulus().x_right;
    Ok(BoundaryQuantifiers {
        beta_left: -(params.q + 1.0),
        b_left: 1.0 / (params.q + 1.0),
        beta_right: -1.0,
        b_right: pot.value_slope(xr)?.1,
    })
}

// ----------------------------------------------------------------- Loud family

/// `(D, F)` in `{F > 1, D < 0, D + F > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoudParams {
    pub d: f64,
    pub f: f64,
}

impl LoudParams {
    pub fn new(d: f64, f: f64) -> Result<Self> {
        if !(f > 1.0 && d < 0.0 && d + f > 0.0) {
            return Err(Error::Domain(format!("(D, F) = ({d}, {f}) is outside F > 1, D < 0, D + F > 0")));
        }
        let params = LoudParams { d, f };
        let (a, b, c) = params.conic();
        let disc = b * b - 4.0 * a * c;
        if !(disc > 0.0) {
            return Err(Error::Domain(format!("conic discriminant {disc} is not positive at ({d}, {f})")));
        }
        Ok(params)
    }

    /// Coefficients of `q(x) = a x^2 + b x + c`.
    pub fn conic(&self) -> (f64, f64, f64) {
        let (d, f) = (self.d, self.f);
        let a = d / (2.0 * (1.0 - f));
        let b = (d - f + 1.0) / ((1.0 - f) * (1.0 - 2.0 * f));
        let c = (f - d - 1.0) / (2.0 * f * (1.0 - f) * (1.0 - 2.0 * f));
        (a, b, c)
    }

    /// Hyperbola crossings `0 < p1 < p2`.
    pub fn roots(&self) -> (f64, f64) {
        let (a, b, c) = self.conic();
        let s = (b * b - 4.0 * a * c).sqrt();
        ((-b - s) / (2.0 * a), (-b + s) / (2.0 * a))
    }

    pub fn h0(&self) -> f64 {
        let (d, f) = (self.d, self.f);
        (f - d - 1.0) / (2.0 * f * (f - 1.0) * (2.0 * f - 1.0))
    }

    /// Right end `((1-p1)^{-F} - 1)/F` of the annulus.
    pub fn u_right(&self) -> f64 {
        let (p1, _) = self.roots();
        (-self.f * (-p1).ln_1p()).exp_m1() / self.f
    }

    pub fn annulus(&self) -> Annulus {
        Annulus { x_left: -1.0 / self.f, x_right: self.u_right(), h0: self.h0() }
    }

    /// `z = (F u + 1)^{-1/F}` and `w = z - 1`.
    pub fn z_of_u(&self, u: f64) -> (f64, f64) {
        let w = (-(self.f * u).ln_1p() / self.f).exp_m1();
        (1.0 + w, w)
    }

    /// Table row `V_k(z)`: `V_0` is the energy row and `V^(k)(u) = z^{(k-2)F} V_k(z)`
    /// for `k >= 1`. Rows above 4 follow from `d/du = -z^{F+1} d/dz`.
    pub fn v_row(&self, k: usize, z: f64) -> f64 {
        let (d, f) = (self.d, self.f);
        match k {
            0 => d / (2.0 - 2.0 * f) * z * z + (1.0 + 2.0 * d) / (2.0 * f - 1.0) * z - (d + 1.0) / (2.0 * f),
            1 => (z - 1.0) * (d * (z - 1.0) - 1.0),
            _ => {
                let [c2, c1, c0] = self.row_coefficients(k);
                (c2 * z + c1) * z + c0
            }
        }
    }

    /// Quadratic coefficients `[z^2, z, 1]` of `V_k` for `k >= 2`.
    fn row_coefficients(&self, k: usize) -> [f64; 3] {
        let (d, f) = (self.d, self.f);
        let mut c = [d * (f - 2.0), -(2.0 * d + 1.0) * (f - 1.0), f * (d + 1.0)];
        for m in 0..k.saturating_sub(2) {
            let mf = m as f64 * f;
            c = [-(mf + 2.0) * c[0], -(mf + 1.0) * c[1], -mf * c[2]];
        }
        c
    }
}

/// `lambda(w) = log1p(w) - w`.
fn log1p_minus(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        let mut term = w;
        let mut sum = 0.0;
        for k in 2..=SERIES_TERMS {
            term *= -w;
            sum += term / k as f64;
        }
        sum
    } else {
        w.ln_1p() - w
    }
}

/// `phi(s) = expm1(s) - s`.
fn expm1_minus(s: f64) -> f64 {
    if s.abs() < SERIES_CUTOFF {
        let mut term = s;
        let mut sum = 0.0;
        for k in 2..=SERIES_TERMS {
            term *= s / k as f64;
            sum += term;
        }
        sum
    } else {
        s.exp_m1() - s
    }
}

/// Potential form of the Loud system on `(-1/F, u_r)`.
#[derive(Debug, Clone, Copy)]
pub struct LoudPotential {
    params: LoudParams,
}

impl LoudPotential {
    fn value(&self, z: f64, w: f64) -> f64 {
        let (d, f) = (self.params.d, self.params.f);
        let h0 = self.params.h0();
        let l = w.ln_1p();
        // h0 z^{2F} - V_0(z) written as O(w^2) terms
        let inner = h0 * (2.0 * f * log1p_minus(w) + expm1_minus(2.0 * f * l)) - d / (2.0 - 2.0 * f) * w * w;
        (-2.0 * f * z.ln()).exp() * inner
    }
}

impl Potential for LoudPotential {
    fn jet(&self, u: f64) -> Result<Jet> {
        let (z, w) = self.check(u)?;
        let f = self.params.f;
        let mut j = [0.0; JET_LEN];
        let (v, dv) = self.value_slope_zw(z, w);
        j[0] = v;
        j[1] = dv;
        let lz = z.ln();
        for (k, slot) in j.iter_mut().enumerate().skip(2) {
            *slot = ((k as f64 - 2.0) * f * lz).exp() * self.params.v_row(k, z);
        }
        Ok(j)
    }

    fn value_slope(&self, u: f64) -> Result<(f64, f64)> {
        let (z, w) = self.check(u)?;
        Ok(self.value_slope_zw(z, w))
    }

    fn annulus(&self) -> Annulus {
        self.params.annulus()
    }

    fn label(&self) -> String {
        format!("loud(D={}, F={})", self.params.d, self.params.f)
    }
}

impl LoudPotential {
    fn check(&self, u: f64) -> Result<(f64, f64)> {
        if !(self.params.f * u > -1.0) {
            return Err(Error::Domain(format!("Loud potential needs u > -1/F, got {u}")));
        }
        Ok(self.params.z_of_u(u))
    }

    fn value_slope_zw(&self, z: f64, w: f64) -> (f64, f64) {
        let d = self.params.d;
        let dv = (-self.params.f * z.ln()).exp() * w * (d * w - 1.0);
        (self.value(z, w), dv)
    }
}

pub fn loud_center(params: LoudParams) -> Result<PotentialCenter> {
    PotentialCenter::new(LoudPotential { params })
}

/// `L(z) = z^{-2F} V_1(z)^2 + ((D-1)/6) V_2(z)`.
pub fn loud_l(z: f64, params: LoudParams) -> f64 {
    let v1 = params.v_row(1, z);
    (-2.0 * params.f * z.ln()).exp() * v1 * v1 + (params.d - 1.0) / 6.0 * params.v_row(2, z)
}

/// `D -> L(1 - p1(D, F), (D, F))`.
pub fn loud_l_at_boundary(d: f64, f: f64) -> Result<f64> {
    let params = LoudParams::new(d, f)?;
    let (p1, _) = params.roots();
    Ok(loud_l(1.0 - p1, params))
}

/// The zero of `D -> L(1 - p1, (D, 2))` on `(-2, 0)`.
pub fn loud_find_l_root() -> Result<f64> {
    let g = |d: f64| loud_l_at_boundary(d, 2.0).unwrap_or(f64::NAN);
    let grid: Vec<f64> = (1..400).map(|i| -2.0 + 2.0 * i as f64 / 400.0).collect();
    let mut bracket = None;
    for w in grid.windows(2) {
        if g(w[0]).signum() != g(w[1]).signum() {
            if bracket.is_some() {
                return Err(Error::NoConvergence("more than one sign change of L on (-2, 0)".into()));
            }
            bracket = Some((w[0], w[1]));
        }
    }
    let (lo, hi) = bracket.ok_or_else(|| Error::NoConvergence("no sign change of L on (-2, 0)".into()))?;
    brent(g, lo, hi, 1e-15)
}

/// Exponents entering the closed-form quantifier of the Loud family at `z = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoudXi {
    pub beta_left: f64,
    pub beta_right: f64,
    pub alpha_left: f64,
    pub alpha_right: f64,
    pub nu: f64,
    pub xi: f64,
}

/// `xi = -min(alpha_l/beta_l, alpha_r/beta_r) - nu/2` with `nu = (F-2)/(F-1)`.
pub fn loud_xi_closed_form(f: f64) -> LoudXi {
    let beta_left = (2.0 - 2.0 * f) / f;
    let beta_right = -1.0;
    let alpha_left = (4.0 * f - 7.0) / f;
    let alpha_right = (2.0 - f) / (2.0 * (f - 1.0));
    let nu = loud_nu(f);
    let xi = -(alpha_left / beta_left).min(alpha_right / beta_right) - 0.5 * nu;
    LoudXi { beta_left, beta_right, alpha_left, alpha_right, nu, xi }
}

/// `nu(F) = (F-2)/(F-1)`.
pub fn loud_nu(f: f64) -> f64 {
    (f - 2.0) / (f - 1.0)
}

/// `C_2 = (D-1)(6 V'(u_r)^2 + (D-1) V''(u_r)) / (12 sqrt(3(1-D)) V'(u_r))`.
pub fn loud_c2(params: LoudParams) -> Result<f64> {
    let (p1, _) = params.roots();
    let z = 1.0 - p1;
    let d = params.d;
    let v1 = (-params.f * z.ln()).exp() * params.v_row(1, z);
    let v2 = params.v_row(2, z);
    Ok((d - 1.0) * (6.0 * v1 * v1 + (d - 1.0) * v2) / (12.0 * (3.0 * (1.0 - d)).sqrt() * v1))
}
