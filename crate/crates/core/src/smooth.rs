//! Smooth real functions with a declared derivative capability.
//!
//! A [`SmoothFn`] reports `f, f', ..., f^(k)` at a point through
//! [`SmoothFn::jet_into`]. Requests above [`SmoothFn::order`] fail with a
//! capability error. Combinators build sums, products, compositions and
//! closures over exact derivative formulas.

use crate::error::{Error, Result};
use crate::taylor::Series;
use std::sync::Arc;

/// Largest jet length handled by the combinators (orders `0..=8`).
pub const MAX_JET: usize = 9;

pub trait SmoothFn: Send + Sync {
    /// Highest derivative order available.
    fn order(&self) -> usize;

    /// Fills `out[k] = f^(k)(x)` for `k < out.len()`.
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()>;

    fn eval(&self, x: f64) -> Result<f64> {
        let mut out = [0.0];
        self.jet_into(x, &mut out)?;
        Ok(out[0])
    }

    fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        check_order(k, self.order())?;
        let mut out = [0.0; MAX_JET];
        self.jet_into(x, &mut out[..=k])?;
        Ok(out[k])
    }
}

pub type Smooth = Arc<dyn SmoothFn>;

pub fn check_order(requested: usize, available: usize) -> Result<()> {
    if requested > available {
        Err(Error::Capability { requested, available })
    } else {
        Ok(())
    }
}

/// Jet of `f` at `x` as a Taylor series.
pub fn series_of(f: &dyn SmoothFn, x: f64) -> Result<Series<MAX_JET>> {
    let n = (f.order() + 1).min(MAX_JET);
    let mut d = [0.0; MAX_JET];
    f.jet_into(x, &mut d[..n])?;
    Ok(Series::from_derivatives(&d[..n]))
}

/// Copies the first `out.len()` derivatives of a series into `out`.
pub fn write_jet(s: &Series<MAX_JET>, out: &mut [f64]) {
    let d = s.derivatives();
    for (o, v) in out.iter_mut().zip(d.iter()) {
        *o = *v;
    }
}

fn falling(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64))
}

/// `c x^nu` on `x > 0` (all orders).
#[derive(Debug, Clone, Copy)]
pub struct Monomial {
    pub coeff: f64,
    pub exponent: f64,
}

impl Monomial {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        Monomial { coeff, exponent }
    }
}

impl SmoothFn for Monomial {
    fn order(&self) -> usize {
        MAX_JET - 1
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let integer = self.exponent >= 0.0 && self.exponent == self.exponent.floor();
        for (k, o) in out.iter_mut().enumerate() {
            let fall = falling(self.exponent, k);
            *o = if fall == 0.0 {
                0.0
            } else if integer {
                self.coeff * fall * x.powi((self.exponent - k as f64) as i32)
            } else {
                self.coeff * fall * x.powf(self.exponent - k as f64)
            };
        }
        Ok(())
    }
}

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone)]
pub struct Polynomial(pub Vec<f64>);

impl SmoothFn for Polynomial {
    fn order(&self) -> usize {
        MAX_JET - 1
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let mut c = self.0.clone();
        for o in out.iter_mut() {
            *o = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
            c = c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a).collect();
        }
        Ok(())
    }
}

/// A closure producing jets, with an explicit capability.
pub struct FromJet<F> {
    order: usize,
    f: F,
}

impl<F> FromJet<F>
where
    F: Fn(f64, &mut [f64]) -> Result<()> + Send + Sync,
{
    pub fn new(order: usize, f: F) -> Self {
        FromJet { order, f }
    }
}

impl<F> SmoothFn for FromJet<F>
where
    F: Fn(f64, &mut [f64]) -> Result<()> + Send + Sync,
{
    fn order(&self) -> usize {
        self.order
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order)?;
        (self.f)(x, out)
    }
}

/// Function defined through its Taylor series at each point.
pub struct FromSeries<F> {
    order: usize,
    f: F,
}

impl<F> FromSeries<F>
where
    F: Fn(f64) -> Result<Series<MAX_JET>> + Send + Sync,
{
    pub fn new(order: usize, f: F) -> Self {
        FromSeries { order: order.min(MAX_JET - 1), f }
    }
}

impl<F> SmoothFn for FromSeries<F>
where
    F: Fn(f64) -> Result<Series<MAX_JET>> + Send + Sync,
{
    fn order(&self) -> usize {
        self.order
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order)?;
        write_jet(&(self.f)(x)?, out);
        Ok(())
    }
}

/// Linear combination `sum c_i f_i`.
pub struct Sum(pub Vec<(f64, Smooth)>);

impl SmoothFn for Sum {
    fn order(&self) -> usize {
        self.0.iter().map(|(_, f)| f.order()).min().unwrap_or(MAX_JET - 1)
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let mut tmp = [0.0; MAX_JET];
        out.iter_mut().for_each(|o| *o = 0.0);
        for (c, f) in &self.0 {
            f.jet_into(x, &mut tmp[..out.len()])?;
            for (o, t) in out.iter_mut().zip(tmp.iter()) {
                *o += c * t;
            }
        }
        Ok(())
    }
}

/// Pointwise product.
pub struct Product(pub Smooth, pub Smooth);

impl SmoothFn for Product {
    fn order(&self) -> usize {
        self.0.order().min(self.1.order()).min(MAX_JET - 1)
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let s = series_of(self.0.as_ref(), x)? * series_of(self.1.as_ref(), x)?;
        write_jet(&s, out);
        Ok(())
    }
}

/// Composition `outer(inner(x))`.
pub struct Compose {
    pub outer: Smooth,
    pub inner: Smooth,
}

impl SmoothFn for Compose {
    fn order(&self) -> usize {
        self.outer.order().min(self.inner.order()).min(MAX_JET - 1)
    }
    fn jet_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        check_order(out.len().saturating_sub(1), self.order())?;
        let inner = series_of(self.inner.as_ref(), x)?;
        let outer = series_of(self.outer.as_ref(), inner.value())?;
        write_jet(&Series::compose(&outer, &inner), out);
        Ok(())
    }
}

pub fn arc<F: SmoothFn + 'static>(f: F) -> Smooth {
    Arc::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_jets() {
        let m = Monomial::new(2.0, 3.0);
        let mut out = [0.0; 5];
        m.jet_into(2.0, &mut out).unwrap();
        assert_eq!(out, [16.0, 24.0, 24.0, 12.0, 0.0]);
        let r = Monomial::new(1.0, -0.5);
        assert!((r.derivative(2, 4.0).unwrap() - 0.75 * 4f64.powf(-2.5)).abs() < 1e-16);
    }

    #[test]
    fn capability_is_enforced() {
        let f = FromJet::new(1, |x, out: &mut [f64]| {
            out[0] = x;
            if out.len() > 1 {
                out[1] = 1.0;
            }
            Ok(())
        });
        assert!(f.derivative(1, 0.3).is_ok());
        assert!(matches!(f.derivative(2, 0.3), Err(Error::Capability { requested: 2, available: 1 })));
    }

    #[test]
    fn product_and_composition_rules() {
        let sin = arc(FromJet::new(8, |x: f64, out: &mut [f64]| {
            for (k, o) in out.iter_mut().enumerate() {
                *o = match k % 4 {
                    0 => x.sin(),
                    1 => x.cos(),
                    2 => -x.sin(),
                    _ => -x.cos(),
                };
            }
            Ok(())
        }));
        let sq = arc(Polynomial(vec![0.0, 0.0, 1.0]));
        let p = Product(sin.clone(), sq.clone());
        let x = 0.7f64;
        let d2 = 2.0 * x.sin() + 4.0 * x * x.cos() - x * x * x.sin();
        assert!((p.derivative(2, x).unwrap() - d2).abs() < 1e-14);
        let c = Compose { outer: sin, inner: sq };
        let d1 = 2.0 * x * (x * x).cos();
        let d2 = 2.0 * (x * x).cos() - 4.0 * x * x * (x * x).sin();
        assert!((c.derivative(1, x).unwrap() - d1).abs() < 1e-14);
        assert!((c.derivative(2, x).unwrap() - d2).abs() < 1e-14);
    }

    #[test]
    fn sum_is_linear() {
        let s = Sum(vec![(2.0, arc(Monomial::new(1.0, 2.0))), (-1.0, arc(Polynomial(vec![1.0, 1.0])))]);
        assert_eq!(s.eval(3.0).unwrap(), 14.0);
        assert_eq!(s.derivative(1, 3.0).unwrap(), 11.0);
    }
}
