//! Potential centers `x' = y, y' = -V'(x)` and the conjugating map
//! `g(x) = sgn(x) sqrt(V(x))`.
//!
//! Derivatives of `g^{-1}` come from series reversion of the Taylor series of
//! `g` at `u = g^{-1}(z)`. Close to the center, `V(u+t)` has a double zero at
//! `t = -u` and the square root of its series loses digits; there `g` is
//! written as `x sqrt(W(x))` with `W^(k)(u) = int_0^1 (1-s) s^k V^(k+2)(su) ds`,
//! which has no cancellation.

use crate::error::{Error, Result};
use crate::smooth::{check_order, SmoothFn};
use crate::taylor::Series;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Number of potential derivatives carried by a jet: `V, V', ..., V^(10)`.
pub const JET_LEN: usize = 11;
pub type Jet = [f64; JET_LEN];

/// Highest derivative order of `g^{-1}` that is exact.
pub const GINV_ORDER: usize = 8;
/// Highest derivative order of the integrand family `f`.
pub const F_ORDER: usize = GINV_ORDER - 2;

type GSeries = Series<{ GINV_ORDER + 1 }>;

pub trait Potential: Send + Sync {
    /// `[V(x), V'(x), ..., V^(10)(x)]`.
    fn jet(&self, x: f64) -> Result<Jet>;

    /// `(V(x), V'(x))`.
    fn value_slope(&self, x: f64) -> Result<(f64, f64)> {
        let j = self.jet(x)?;
        Ok((j[0], j[1]))
    }

    fn annulus(&self) -> Annulus;

    fn label(&self) -> String;
}

/// Projection of the period annulus on the x-axis and the outer-boundary energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub x_left: f64,
    pub x_right: f64,
    pub h0: f64,
}

impl Annulus {
    pub fn contains(&self, x: f64) -> bool {
        x > self.x_left && x < self.x_right
    }
}

/// `V(x) = k x^2 / 2` on the whole line.
#[derive(Debug, Clone, Copy)]
pub struct Harmonic {
    pub stiffness: f64,
}

impl Potential for Harmonic {
    fn jet(&self, x: f64) -> Result<Jet> {
        let mut j = [0.0; JET_LEN];
        j[0] = 0.5 * self.stiffness * x * x;
        j[1] = self.stiffness * x;
        j[2] = self.stiffness;
        Ok(j)
    }
    fn annulus(&self) -> Annulus {
        Annulus { x_left: f64::NEG_INFINITY, x_right: f64::INFINITY, h0: f64::INFINITY }
    }
    fn label(&self) -> String {
        format!("harmonic(k={})", self.stiffness)
    }
}

/// 16-point Gauss-Legendre rule on `[0, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 16;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.push((0.5 * (1.0 + x), 0.5 * w));
        }
        rule
    })
}

/// A non-degenerate potential center with its annulus data.
#[derive(Clone)]
pub struct PotentialCenter {
    potential: Arc<dyn Potential>,
    annulus: Annulus,
    curvature: f64,
    near_center: f64,
}

impl fmt::Debug for PotentialCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialCenter")
            .field("potential", &self.potential.label())
            .field("annulus", &self.annulus)
            .finish()
    }
}

impl PotentialCenter {
    /// Wraps a potential after checking `V(0) = V'(0) = 0 < V''(0)`.
    pub fn new<P: Potential + 'static>(potential: P) -> Result<Self> {
        let annulus = potential.annulus();
        if !(annulus.x_left < 0.0 && annulus.x_right > 0.0 && annulus.h0 > 0.0) {
            return Err(Error::Domain(format!("invalid annulus {annulus:?}")));
        }
        let j0 = potential.jet(0.0)?;
        let scale = j0[2].abs().max(1.0);
        if j0[0].abs() > 1e-14 * scale || j0[1].abs() > 1e-14 * scale || !(j0[2] > 0.0) {
            return Err(Error::Domain(format!(
                "{} is not a non-degenerate center: V(0)={}, V'(0)={}, V''(0)={}",
                potential.label(),
                j0[0],
                j0[1],
                j0[2]
            )));
        }
        let radius = annulus.x_left.abs().min(annulus.x_right);
        let near_center = if radius.is_finite() { 0.25 * radius } else { f64::INFINITY };
        Ok(PotentialCenter { potential: Arc::new(potential), annulus, curvature: j0[2], near_center })
    }

    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    pub fn h0(&self) -> f64 {
        self.annulus.h0
    }

    pub fn label(&self) -> String {
        self.potential.label()
    }

    /// `V''(0)`.
    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    pub fn v(&self, x: f64) -> Result<f64> {
        Ok(self.potential.value_slope(x)?.0)
    }

    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.potential.jet(x)
    }

    pub fn value_slope(&self, x: f64) -> Result<(f64, f64)> {
        self.potential.value_slope(x)
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if self.annulus.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!("x = {x} outside ({}, {})", self.annulus.x_left, self.annulus.x_right)))
        }
    }

    fn check_z(&self, z: f64) -> Result<()> {
        let bound = self.annulus.h0.sqrt();
        if z.abs() < bound {
            Ok(())
        } else {
            Err(Error::OutOfAnnulus { z, bound })
        }
    }

    /// `(g(x), g'(x))`.
    pub fn g_and_slope(&self, x: f64) -> Result<(f64, f64)> {
        self.check_x(x)?;
        if x == 0.0 {
            return Ok((0.0, (0.5 * self.curvature).sqrt()));
        }
        let (v, dv) = self.potential.value_slope(x)?;
        let g = v.sqrt().copysign(x);
        Ok((g, 0.5 * dv / g))
    }

    pub fn g(&self, x: f64) -> Result<f64> {
        Ok(self.g_and_slope(x)?.0)
    }

    /// The unique `x` in the annulus with `g(x) = z`.
    pub fn g_inverse(&self, z: f64) -> Result<f64> {
        self.check_z(z)?;
        if z == 0.0 {
            return Ok(0.0);
        }
        let guess = z / (0.5 * self.curvature).sqrt();
        // bracket [lo, hi] on the branch of sign(z), with g - z < 0 at lo
        let (mut lo, mut hi) = if z > 0.0 { (0.0, self.annulus.x_right) } else { (self.annulus.x_left, 0.0) };
        if z > 0.0 && !hi.is_finite() {
            hi = guess.max(1.0);
            while self.g(hi)? <= z {
                lo = hi;
                hi *= 2.0;
            }
        }
        if z < 0.0 && !lo.is_finite() {
            lo = guess.min(-1.0);
            while self.g(lo)? >= z {
                hi = lo;
                lo *= 2.0;
            }
        }
        let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..400 {
            let (g, dg) = self.g_and_slope(x)?;
            let r = g - z;
            if r == 0.0 {
                return Ok(x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - r / dg;
            let next = if dg > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - x).abs() <= 1e-15 * x.abs().max(1e-300) || hi - lo <= 1e-15 * x.abs() {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }

    /// Taylor series of `g` at `u`.
    fn g_series(&self, u: f64) -> Result<GSeries> {
        if u.abs() < self.near_center {
            let mut w = [0.0; GINV_ORDER + 1];
            for &(s, weight) in gauss_legendre() {
                let j = self.potential.jet(s * u)?;
                let mut sk = 1.0;
                for (k, wk) in w.iter_mut().enumerate() {
                    *wk += weight * (1.0 - s) * sk * j[k + 2];
                    sk *= s;
                }
            }
            let w = GSeries::from_derivatives(&w);
            Ok(GSeries::variable(u) * w.sqrt())
        } else {
            let j = self.potential.jet(u)?;
            let v = GSeries::from_derivatives(&j[..=GINV_ORDER]);
            let g = v.sqrt();
            Ok(if u < 0.0 { -g } else { g })
        }
    }

    /// `[g^{-1}(z), (g^{-1})'(z), ..., (g^{-1})^(order)(z)]`.
    pub fn g_inverse_jet(&self, z: f64, order: usize) -> Result<[f64; GINV_ORDER + 1]> {
        check_order(order, GINV_ORDER)?;
        let u = self.g_inverse(z)?;
        let mut out = [0.0; GINV_ORDER + 1];
        out[0] = u;
        if order == 0 {
            return Ok(out);
        }
        if order == 1 {
            out[1] = 1.0 / self.g_and_slope(u)?.1;
            return Ok(out);
        }
        let b = self.g_series(u)?.revert().derivatives();
        out[1..=order].copy_from_slice(&b[1..=order]);
        Ok(out)
    }

    /// `(g^{-1})^(order)(z)` for `order` in `1..=8`.
    pub fn g_inverse_derivative(&self, z: f64, order: usize) -> Result<f64> {
        Ok(self.g_inverse_jet(z, order)?[order])
    }

    /// Jet of `F0(u) = u (g^{-1})''(u)`.
    fn f0_jet(&self, u: f64, out: &mut [f64]) -> Result<()> {
        let order = out.len() - 1;
        let gi = self.g_inverse_jet(u, order + 2)?;
        for (k, o) in out.iter_mut().enumerate() {
            *o = u * gi[k + 2] + k as f64 * gi[k + 1];
        }
        Ok(())
    }

    /// Fills `out[k] = f^(k)(z)` for `f(z) = z (g^{-1})''(z) - z (g^{-1})''(-z)`.
    pub fn f_family_jet(&self, z: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), F_ORDER)?;
        if z == 0.0 {
            // f is even and the odd-order terms cancel exactly
            let mut plus = [0.0; F_ORDER + 1];
            self.f0_jet(0.0, &mut plus[..out.len()])?;
            for (k, o) in out.iter_mut().enumerate() {
                *o = if k % 2 == 0 { 2.0 * plus[k] } else { 0.0 };
            }
            return Ok(());
        }
        let mut plus = [0.0; F_ORDER + 1];
        let mut minus = [0.0; F_ORDER + 1];
        self.f0_jet(z, &mut plus[..out.len()])?;
        self.f0_jet(-z, &mut minus[..out.len()])?;
        for (k, o) in out.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *o = plus[k] + sign * minus[k];
        }
        Ok(())
    }

    pub fn f_family(&self, z: f64) -> Result<f64> {
        let mut out = [0.0];
        self.f_family_jet(z, &mut out)?;
        Ok(out[0])
    }

    /// `f(z sqrt(h0))` for `z` in `[0, 1)`.
    pub fn rescaled_f_family(&self, z: f64) -> Result<f64> {
        let s = self.finite_root_h0()?;
        self.f_family(z * s)
    }

    fn finite_root_h0(&self) -> Result<f64> {
        if self.annulus.h0.is_finite() {
            Ok(self.annulus.h0.sqrt())
        } else {
            Err(Error::Domain(format!("{} has infinite outer energy", self.label())))
        }
    }

    /// The integrand family as a [`SmoothFn`].
    pub fn family_fn(&self) -> FamilyF {
        FamilyF { center: self.clone(), scale: 1.0 }
    }

    /// `z -> f(z sqrt(h0))` as a [`SmoothFn`].
    pub fn rescaled_family_fn(&self) -> Result<FamilyF> {
        Ok(FamilyF { center: self.clone(), scale: self.finite_root_h0()? })
    }
}

/// `z -> f(s z)` for the integrand family `f` of a center.
#[derive(Clone, Debug)]
pub struct FamilyF {
    center: PotentialCenter,
    scale: f64,
}

impl FamilyF {
    pub fn center(&self) -> &PotentialCenter {
        &self.center
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl SmoothFn for FamilyF {
    fn order(&self) -> usize {
        F_ORDER
    }
    fn jet_into(&self, z: f64, out: &mut [f64]) -> Result<()> {
        self.center.f_family_jet(self.scale * z, out)?;
        let mut p = 1.0;
        for o in out.iter_mut() {
            *o *= p;
            p *= self.scale;
        }
        Ok(())
    }
}

/// Continuity of the potential, the annulus ends and `h0` in the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// Highest derivative order of `V` included in the check.
    pub max_order: usize,
    pub derivatives_continuous: bool,
    pub x_left_continuous: bool,
    pub x_right_continuous: bool,
    pub h0_continuous: bool,
    /// Largest relative change observed at the smallest parameter step.
    pub max_jump: f64,
}

impl ContinuityReport {
    pub fn passed(&self) -> bool {
        self.derivatives_continuous && self.x_left_continuous && self.x_right_continuous && self.h0_continuous
    }
}

/// Parameter steps of the continuity check.
const H_STEPS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Samples `(x, mu) -> V^(k)(x)` for `k <= max_order` and `mu -> (x_l, x_r, h0)`
/// around `anchor`, along each coordinate direction, and checks that the
/// changes shrink with the step. `x_fractions` in `(-1, 1)` locate the
/// abscissae relative to the anchor's annulus.
pub fn continuity_report<B>(builder: B, anchor: &[f64], x_fractions: &[f64], max_order: usize) -> Result<ContinuityReport>
where
    B: Fn(&[f64]) -> Result<PotentialCenter>,
{
    let max_order = max_order.min(JET_LEN - 1);
    let base = builder(anchor)?;
    let a = base.annulus();
    let xs: Vec<f64> = x_fractions
        .iter()
        .map(|&t| {
            let end = if t < 0.0 { a.x_left.abs() } else { a.x_right };
            t * if end.is_finite() { end } else { 1.0 }
        })
        .collect();
    let base_jets: Vec<Jet> = xs.iter().map(|&x| base.jet(x)).collect::<Result<_>>()?;

    let rel = |a: f64, b: f64| {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
        }
    };
    let continuous = |jumps: &[f64]| {
        let last = jumps[jumps.len() - 1];
        last <= 1e-6 || jumps.windows(2).all(|w| w[1] <= 0.2 * w[0] + 1e-12)
    };

    let mut report = ContinuityReport {
        max_order,
        derivatives_continuous: true,
        x_left_continuous: true,
        x_right_continuous: true,
        h0_continuous: true,
        max_jump: 0.0,
    };
    for i in 0..anchor.len() {
        for sign in [1.0, -1.0] {
            let mut deriv = Vec::new();
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut energy = Vec::new();
            for step in H_STEPS {
                let mut mu = anchor.to_vec();
                mu[i] += sign * step;
                let c = builder(&mu)?;
                let b = c.annulus();
                let mut worst: f64 = 0.0;
                for (x, j0) in xs.iter().zip(&base_jets) {
                    let j = c.jet(*x)?;
                    for k in 0..=max_order {
                        let scale = j0[k].abs().max(1.0);
                        worst = worst.max((j[k] - j0[k]).abs() / scale);
                    }
                }
                deriv.push(worst);
                left.push(rel(b.x_left, a.x_left));
                right.push(rel(b.x_right, a.x_right));
                energy.push(rel(b.h0, a.h0));
            }
            report.derivatives_continuous &= continuous(&deriv);
            report.x_left_continuous &= continuous(&left);
            report.x_right_continuous &= continuous(&right);
            report.h0_continuous &= continuous(&energy);
            for v in [&deriv, &left, &right, &energy] {
                report.max_jump = report.max_jump.max(v[v.len() - 1]);
            }
        }
    }
    Ok(report)
}
