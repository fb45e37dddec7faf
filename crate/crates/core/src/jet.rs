//! Truncated second-order jets for forward-mode differentiation.
//!
//! A [`Jet2`] carries a value together with its full gradient and Hessian
//! with respect to up to [`MAX_VARS`] independent variables. Arithmetic
//! propagates all three exactly, so second derivatives of any expression
//! built from the [`Real`] operations are correct to rounding error.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Largest number of independent variables a jet can track.
pub const MAX_VARS: usize = 12;
const HESS_LEN: usize = MAX_VARS * (MAX_VARS + 1) / 2;

/// Packed index of the symmetric Hessian entry `(i, j)`.
#[inline]
fn hidx(i: usize, j: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Scalar type usable both for plain evaluation and for differentiation.
pub trait Real:
    Copy
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn cst(v: f64) -> Self;
    /// Value part (the jet truncated to order zero).
    fn value(&self) -> f64;
    fn recip(self) -> Self;
    fn sqrt(self) -> Self;
    fn powf(self, e: f64) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
    fn sq(self) -> Self {
        self * self
    }
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

/// Value, gradient and Hessian of a scalar function of several variables.
#[derive(Clone, Copy)]
pub struct Jet2 {
    nvars: u8,
    v: f64,
    g: [f64; MAX_VARS],
    h: [f64; HESS_LEN],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 {
            nvars: 0,
            v,
            g: [0.0; MAX_VARS],
            h: [0.0; HESS_LEN],
        }
    }

    /// The coordinate function `x_index` of `nvars` variables, evaluated at `v`.
    pub fn variable(index: usize, nvars: usize, v: f64) -> Self {
        assert!(nvars <= MAX_VARS && index < nvars);
        let mut j = Jet2::constant(v);
        j.nvars = nvars as u8;
        j.g[index] = 1.0;
        j
    }

    /// Seeds a full coordinate vector.
    pub fn seed(x: &[f64]) -> Vec<Jet2> {
        let n = x.len();
        assert!(n <= MAX_VARS, "too many variables: {n}");
        x.iter().enumerate().map(|(i, &v)| Jet2::variable(i, n, v)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.g[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.h[hidx(i, j)]
    }

    /// Applies a scalar function given its value and first two derivatives at `self.v`.
    #[inline]
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.nvars();
        let mut out = Jet2::constant(f0);
        out.nvars = self.nvars;
        for i in 0..n {
            out.g[i] = f1 * self.g[i];
        }
        let mut k = 0;
        for j in 0..n {
            for i in 0..=j {
                out.h[k] = f1 * self.h[k] + f2 * self.g[i] * self.g[j];
                k += 1;
            }
        }
        out
    }
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars();
        f.debug_struct("Jet2")
            .field("v", &self.v)
            .field("g", &&self.g[..n])
            .field("h", &&self.h[..n * (n + 1) / 2])
            .finish()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(mut self, rhs: Jet2) -> Jet2 {
        self += rhs;
        self
    }
}

impl AddAssign for Jet2 {
    #[inline]
    fn add_assign(&mut self, rhs: Jet2) {
        let n = self.nvars.max(rhs.nvars);
        self.nvars = n;
        let n = n as usize;
        self.v += rhs.v;
        for i in 0..n {
            self.g[i] += rhs.g[i];
        }
        for k in 0..n * (n + 1) / 2 {
            self.h[k] += rhs.h[k];
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(mut self, rhs: Jet2) -> Jet2 {
        self -= rhs;
        self
    }
}

impl SubAssign for Jet2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Jet2) {
        let n = self.nvars.max(rhs.nvars);
        self.nvars = n;
        let n = n as usize;
        self.v -= rhs.v;
        for i in 0..n {
            self.g[i] -= rhs.g[i];
        }
        for k in 0..n * (n + 1) / 2 {
            self.h[k] -= rhs.h[k];
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.nvars.max(rhs.nvars);
        let mut out = Jet2::constant(self.v * rhs.v);
        out.nvars = n;
        let n = n as usize;
        for i in 0..n {
            out.g[i] = self.v * rhs.g[i] + rhs.v * self.g[i];
        }
        let mut k = 0;
        for j in 0..n {
            for i in 0..=j {
                out.h[k] = self.v * rhs.h[k] + rhs.v * self.h[k] + self.g[i] * rhs.g[j] + self.g[j] * rhs.g[i];
                k += 1;
            }
        }
        out
    }
}

impl MulAssign for Jet2 {
    #[inline]
    fn mul_assign(&mut self, rhs: Jet2) {
        *self = *self * rhs;
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(mut self) -> Jet2 {
        let n = self.nvars();
        self.v = -self.v;
        for i in 0..n {
            self.g[i] = -self.g[i];
        }
        for k in 0..n * (n + 1) / 2 {
            self.h[k] = -self.h[k];
        }
        self
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(mut self, rhs: f64) -> Jet2 {
        self.v += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.v -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(mut self, rhs: f64) -> Jet2 {
        let n = self.nvars();
        self.v *= rhs;
        for i in 0..n {
            self.g[i] *= rhs;
        }
        for k in 0..n * (n + 1) / 2 {
            self.h[k] *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: f64) -> Jet2 {
        self * (1.0 / rhs)
    }
}

impl Real for Jet2 {
    fn cst(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    fn powf(self, e: f64) -> Self {
        if e == 0.0 {
            return Jet2::constant(1.0);
        }
        let v = self.v;
        let f0 = v.powf(e);
        self.chain(f0, e * v.powf(e - 1.0), e * (e - 1.0) * v.powf(e - 2.0))
    }
    fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn one_plus_x_squared_at_zero() {
        let x = Jet2::variable(0, 1, 0.0);
        let g = x * x + 1.0;
        assert_eq!(g.value(), 1.0);
        assert_eq!(g.grad(0), 0.0);
        assert_eq!(g.hess(0, 0), 2.0);
    }

    #[test]
    fn mixed_partials_of_product() {
        // f = x^2 y + exp(y) at (1.5, -0.3)
        let v = Jet2::seed(&[1.5, -0.3]);
        let (x, y) = (v[0], v[1]);
        let f = x * x * y + y.exp();
        assert!(close(f.grad(0), 2.0 * 1.5 * -0.3));
        assert!(close(f.grad(1), 1.5 * 1.5 + (-0.3f64).exp()));
        assert!(close(f.hess(0, 0), 2.0 * -0.3));
        assert!(close(f.hess(0, 1), 2.0 * 1.5));
        assert!(close(f.hess(1, 0), 2.0 * 1.5));
        assert!(close(f.hess(1, 1), (-0.3f64).exp()));
    }

    #[test]
    fn quotient_and_powers() {
        // f = (1 + x^2/4)^-1, the conformal factor for c = 1 in one variable
        let x = Jet2::variable(0, 1, 0.7);
        let f = (x * x * 0.25 + 1.0).recip();
        let d = 1.0 + 0.7f64 * 0.7 / 4.0;
        assert!(close(f.value(), 1.0 / d));
        assert!(close(f.grad(0), -(0.5 * 0.7) / (d * d)));
        let expected_h = -0.5 / (d * d) + 2.0 * (0.5 * 0.7) * (0.5 * 0.7) / (d * d * d);
        assert!(close(f.hess(0, 0), expected_h));

        let p = (x + 2.0).powf(-1.5);
        assert!(close(p.grad(0), -1.5 * 2.7f64.powf(-2.5)));
        assert!(close(p.hess(0, 0), 3.75 * 2.7f64.powf(-3.5)));

        let s = (x + 2.0).sqrt();
        assert!(close(s.hess(0, 0), -0.25 * 2.7f64.powf(-1.5)));
        let l = (x + 2.0).ln();
        assert!(close(l.hess(0, 0), -1.0 / (2.7 * 2.7)));
    }

    #[test]
    fn constants_mix_with_variables() {
        let x = Jet2::variable(1, 3, 2.0);
        let c = Jet2::constant(5.0);
        let f = c * x - c;
        assert_eq!(f.nvars(), 3);
        assert_eq!(f.value(), 5.0);
        assert_eq!(f.grad(1), 5.0);
        assert_eq!(f.grad(0), 0.0);
        assert_eq!((x / c).grad(1), 0.2);
    }
}
