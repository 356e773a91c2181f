//! Truncated bivariate Taylor series.
//!
//! A [`Jet2`] carries the Taylor coefficients of a quantity in two parameters
//! `(u, v)` about a base point, up to a fixed total order (at most
//! [`MAX_ORDER`]). Arithmetic on jets is the truncated arithmetic of power
//! series, so every partial derivative up to the jet order is propagated
//! exactly through compositions; there is no step size and no cancellation
//! error of the finite-difference kind.
//!
//! Coefficients are stored densely in graded order: all terms of total degree
//! 0, then degree 1 (`u`, `v`), then degree 2 (`u²`, `uv`, `v²`) and so on.
//!
//! Binary operations between jets of different orders truncate to the smaller
//! order, which is the largest order at which both operands are known.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Highest supported total order.
pub const MAX_ORDER: usize = 4;

/// Order used by the geometry pipeline: nested L₁ consumes four derivatives.
pub const DEFAULT_ORDER: usize = 4;

const CAP: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

const FACTORIAL: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("invalid jet order {0}: expected 1..={MAX_ORDER}")]
    InvalidOrder(usize),
    #[error("division by a jet with zero constant term")]
    SingularJet,
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("partial derivative of order ({a}, {b}) exceeds jet order {order}")]
    OrderExceeded { a: usize, b: usize, order: usize },
}

/// Which of the two parameters a variable jet represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    U,
    V,
}

/// Number of coefficients of a jet of the given order.
pub const fn coeff_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Storage index of the coefficient of `uᵃ vᵇ`.
#[inline]
pub const fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Truncated Taylor expansion in two variables.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet2 {
    order: u8,
    coeffs: [f64; CAP],
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet2")
            .field("order", &self.order)
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl Jet2 {
    /// Constant jet. Order 0 is allowed here and yields a plain value.
    pub fn constant(value: f64, order: usize) -> Self {
        let order = order.min(MAX_ORDER);
        let mut coeffs = [0.0; CAP];
        coeffs[0] = value;
        Self {
            order: order as u8,
            coeffs,
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(0.0, order)
    }

    /// The jet of the coordinate function `u` (or `v`) at `base`.
    pub fn variable(which: Var, base: f64, order: usize) -> Result<Self, JetError> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(JetError::InvalidOrder(order));
        }
        let mut jet = Self::constant(base, order);
        match which {
            Var::U => jet.coeffs[index(1, 0)] = 1.0,
            Var::V => jet.coeffs[index(0, 1)] = 1.0,
        }
        Ok(jet)
    }

    /// Builds a jet from its coefficient vector in graded order.
    pub fn from_coeffs(order: usize, coeffs: &[f64]) -> Result<Self, JetError> {
        if order > MAX_ORDER || coeffs.len() != coeff_len(order) {
            return Err(JetError::InvalidOrder(order));
        }
        let mut jet = Self::zero(order);
        jet.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(jet)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Constant term: the value at the base point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..coeff_len(self.order())]
    }

    /// Coefficient of `uᵃ vᵇ`, zero beyond the jet order.
    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order() {
            0.0
        } else {
            self.coeffs[index(a, b)]
        }
    }

    /// `∂ᵃ_u ∂ᵇ_v` at the base point.
    pub fn partial(&self, a: usize, b: usize) -> Result<f64, JetError> {
        if a + b > self.order() {
            return Err(JetError::OrderExceeded {
                a,
                b,
                order: self.order(),
            });
        }
        Ok(FACTORIAL[a] * FACTORIAL[b] * self.coeffs[index(a, b)])
    }

    /// The jet of a first partial derivative; its order drops by one.
    pub fn derivative(&self, which: Var) -> Result<Self, JetError> {
        let n = self.order();
        if n == 0 {
            return Err(JetError::OrderExceeded {
                a: (which == Var::U) as usize,
                b: (which == Var::V) as usize,
                order: 0,
            });
        }
        let mut out = Self::zero(n - 1);
        for d in 0..n {
            for b in 0..=d {
                let a = d - b;
                out.coeffs[index(a, b)] = match which {
                    Var::U => (a + 1) as f64 * self.coeffs[index(a + 1, b)],
                    Var::V => (b + 1) as f64 * self.coeffs[index(a, b + 1)],
                };
            }
        }
        Ok(out)
    }

    /// Drops every term above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        let mut out = Self::zero(order);
        let len = coeff_len(order);
        out.coeffs[..len].copy_from_slice(&self.coeffs[..len]);
        out
    }

    /// The same jet with its constant term removed.
    fn increment(&self) -> Self {
        let mut h = *self;
        h.coeffs[0] = 0.0;
        h
    }

    /// Composes a univariate function with this jet.
    ///
    /// `taylor[k]` must hold `f⁽ᵏ⁾(x₀)/k!` where `x₀` is the constant term;
    /// missing high-order entries are treated as zero.
    pub fn compose(&self, taylor: &[f64]) -> Self {
        let n = self.order();
        let h = self.increment();
        let t = |k: usize| taylor.get(k).copied().unwrap_or(0.0);
        let mut acc = Self::constant(t(n), n);
        for k in (0..n).rev() {
            acc *= h;
            acc.coeffs[0] += t(k);
        }
        acc
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs[..coeff_len(self.order())].iter_mut() {
            *c *= factor;
        }
        out
    }

    pub fn recip(&self) -> Self {
        let x0 = self.value();
        let mut taylor = [0.0; MAX_ORDER + 1];
        let inv = 1.0 / x0;
        let mut p = inv;
        for t in taylor.iter_mut() {
            *t = p;
            p *= -inv;
        }
        self.compose(&taylor)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, JetError> {
        if rhs.value() == 0.0 {
            return Err(JetError::SingularJet);
        }
        Ok(*self * rhs.recip())
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&cyclic([s, c, -s, -c]))
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&cyclic([c, -s, -c, s]))
    }

    pub fn sinh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose(&cyclic([s, c, s, c]))
    }

    pub fn cosh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose(&cyclic([c, s, c, s]))
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&cyclic([e, e, e, e]))
    }

    /// Square root; NaN coefficients for a non-positive constant term.
    /// Use [`Jet2::try_sqrt`] for a checked version.
    pub fn sqrt(&self) -> Self {
        let x0 = self.value();
        let mut taylor = [0.0; MAX_ORDER + 1];
        // binom(1/2, k) x0^(1/2 - k)
        let mut binom = 1.0;
        let mut pow = x0.sqrt();
        for (k, t) in taylor.iter_mut().enumerate() {
            *t = binom * pow;
            binom *= (0.5 - k as f64) / (k as f64 + 1.0);
            pow /= x0;
        }
        self.compose(&taylor)
    }

    pub fn try_sqrt(&self) -> Result<Self, JetError> {
        if !(self.value() > 0.0) {
            return Err(JetError::Domain {
                function: "sqrt",
                value: self.value(),
            });
        }
        Ok(self.sqrt())
    }

    /// `√|x|`, with the sign of the constant term fixed along the jet.
    pub fn abs_sqrt(&self) -> Result<Self, JetError> {
        let x0 = self.value();
        if x0 == 0.0 || !x0.is_finite() {
            return Err(JetError::Domain {
                function: "abs_sqrt",
                value: x0,
            });
        }
        Ok(self.scale(x0.signum()).sqrt())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(1.0, self.order());
        for _ in 0..n {
            acc *= *self;
        }
        acc
    }
}

fn cyclic(d: [f64; 4]) -> [f64; MAX_ORDER + 1] {
    let mut out = [0.0; MAX_ORDER + 1];
    for (k, t) in out.iter_mut().enumerate() {
        *t = d[k % 4] / FACTORIAL[k];
    }
    out
}

/// Elementary function selector, for callers that pick the function at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
    AbsSqrt,
}

impl Elementary {
    pub fn apply(self, x: &Jet2) -> Result<Jet2, JetError> {
        Ok(match self {
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Sinh => x.sinh(),
            Elementary::Cosh => x.cosh(),
            Elementary::Exp => x.exp(),
            Elementary::Sqrt => x.try_sqrt()?,
            Elementary::AbsSqrt => x.abs_sqrt()?,
        })
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let order = self.order().min(rhs.order());
        let mut out = Jet2::zero(order);
        for i in 0..coeff_len(order) {
            out.coeffs[i] = self.coeffs[i] + rhs.coeffs[i];
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        let order = self.order().min(rhs.order());
        let mut out = Jet2::zero(order);
        for i in 0..coeff_len(order) {
            out.coeffs[i] = self.coeffs[i] - rhs.coeffs[i];
        }
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.order().min(rhs.order());
        let mut out = Jet2::zero(n);
        for d1 in 0..=n {
            for b1 in 0..=d1 {
                let x = self.coeffs[index(d1 - b1, b1)];
                if x == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for b2 in 0..=d2 {
                        let a = d1 - b1 + d2 - b2;
                        out.coeffs[index(a, b1 + b2)] += x * rhs.coeffs[index(d2 - b2, b2)];
                    }
                }
            }
        }
        out
    }
}

/// Unchecked division: a zero constant term in the divisor yields non-finite
/// coefficients, like `f64` division. See [`Jet2::checked_div`].
impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: f64) -> Jet2 {
        self.scale(1.0 / rhs)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs.scale(self)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, rhs: Jet2) {
        *self = *self * rhs;
    }
}

/// Field-like scalar shared by plain values and jets, so the same formulas
/// serve pointwise evaluation and derivative propagation.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn value(&self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
}

impl Scalar for Jet2 {
    #[inline]
    fn value(&self) -> f64 {
        Jet2::value(self)
    }
}
