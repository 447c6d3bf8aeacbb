//! Truncated Taylor series arithmetic.
//!
//! A `Series<N>` holds the coefficients `c[0..N]` of `Σ c_k t^k` around some
//! base point. Derivatives are `k! c_k`. Everything here is exact up to
//! rounding; truncation only drops terms of degree `>= N`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series<const N: usize>(pub [f64; N]);

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl<const N: usize> Series<N> {
    pub fn zero() -> Self {
        Series([0.0; N])
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::zero();
        s.0[0] = c;
        s
    }

    /// The identity map `x0 + t`.
    pub fn variable(x0: f64) -> Self {
        let mut s = Self::constant(x0);
        if N > 1 {
            s.0[1] = 1.0;
        }
        s
    }

    /// Builds a series from derivative values `d[k] = f^{(k)}`.
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut s = Self::zero();
        for (k, v) in d.iter().take(N).enumerate() {
            s.0[k] = v / factorial(k);
        }
        s
    }

    pub fn derivatives(&self) -> [f64; N] {
        let mut d = self.0;
        for (k, v) in d.iter_mut().enumerate() {
            *v *= factorial(k);
        }
        d
    }

    /// `d/dt`; the top coefficient becomes 0.
    pub fn derivative(&self) -> Self {
        let mut s = Self::zero();
        for k in 1..N {
            s.0[k - 1] = k as f64 * self.0[k];
        }
        s
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn scale(mut self, a: f64) -> Self {
        for c in self.0.iter_mut() {
            *c *= a;
        }
        self
    }

    pub fn recip(&self) -> Self {
        let a0 = self.0[0];
        let mut r = Self::zero();
        r.0[0] = 1.0 / a0;
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.0[j] * r.0[k - j];
            }
            r.0[k] = -acc / a0;
        }
        r
    }

    pub fn div(&self, other: &Self) -> Self {
        *self * other.recip()
    }

    /// `self^c` for a positive constant term (Miller's recurrence).
    pub fn powf(&self, c: f64) -> Self {
        let a0 = self.0[0];
        let mut r = Self::zero();
        r.0[0] = a0.powf(c);
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (c * j as f64 - (k - j) as f64) * self.0[j] * r.0[k - j];
            }
            r.0[k] = acc / (k as f64 * a0);
        }
        r
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let mut r = Self::zero();
        r.0[0] = self.0[0].exp();
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.0[j] * r.0[k - j];
            }
            r.0[k] = acc / k as f64;
        }
        r
    }

    pub fn ln(&self) -> Self {
        let a0 = self.0[0];
        let mut r = Self::zero();
        r.0[0] = a0.ln();
        for k in 1..N {
            let mut acc = self.0[k] * k as f64;
            for j in 1..k {
                acc -= j as f64 * r.0[j] * self.0[k - j];
            }
            r.0[k] = acc / (k as f64 * a0);
        }
        r
    }

    /// Composes `outer` (expanded around `inner[0]`) with `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        let mut shifted = *inner;
        shifted.0[0] = 0.0;
        let mut power = Self::constant(1.0);
        let mut out = Self::zero();
        for j in 0..N {
            if j > 0 {
                power = power * shifted;
            }
            for k in 0..N {
                out.0[k] += outer.0[j] * power.0[k];
            }
        }
        out
    }

    /// Series reversion: given `a(t) = a0 + a1 t + ...` with `a1 != 0`,
    /// returns `b(s) = b1 s + b2 s^2 + ...` with `a(b(s)) = a0 + s`.
    /// The constant term of the result is zero.
    pub fn revert(&self) -> Self {
        let a1 = self.0[1];
        let mut shifted = *self;
        shifted.0[0] = 0.0;
        let mut b = Self::zero();
        if N > 1 {
            b.0[1] = 1.0 / a1;
        }
        for n in 2..N {
            // coefficient of s^n in Σ_{k>=2} a_k b(s)^k using b_1..b_{n-1}
            let mut power = b;
            let mut acc = 0.0;
            for k in 2..=n {
                power = power * b;
                acc += shifted.0[k] * power.0[n];
            }
            b.0[n] = -acc / a1;
        }
        b
    }
}

impl<const N: usize> Add for Series<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] += rhs.0[k];
        }
        self
    }
}

impl<const N: usize> Sub for Series<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.0[k] -= rhs.0[k];
        }
        self
    }
}

impl<const N: usize> Neg for Series<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Series<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            if self.0[i] == 0.0 {
                continue;
            }
            for j in 0..N - i {
                out.0[i + j] += self.0[i] * rhs.0[j];
            }
        }
        out
    }
}
