//! The flat ambient space R⁴_q and the unit space forms inside it.
//!
//! The metric is `-dx₁² + c dx₂² + dx₃² + dx₄²`, so c = +1 gives R⁴₁ containing
//! De Sitter space S³₁ and c = -1 gives R⁴₂ containing anti De Sitter space
//! H³₁. In both cases the space form is `{ <x,x> = c }`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet2, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceForm {
    /// S³₁ ⊂ R⁴₁, c = +1.
    DeSitter,
    /// H³₁ ⊂ R⁴₂, c = -1.
    AntiDeSitter,
}

impl SpaceForm {
    pub fn from_c(c: i32) -> Option<Self> {
        match c {
            1 => Some(SpaceForm::DeSitter),
            -1 => Some(SpaceForm::AntiDeSitter),
            _ => None,
        }
    }

    #[inline]
    pub fn c(self) -> f64 {
        match self {
            SpaceForm::DeSitter => 1.0,
            SpaceForm::AntiDeSitter => -1.0,
        }
    }

    /// Index of the ambient metric.
    pub fn q(self) -> usize {
        match self {
            SpaceForm::DeSitter => 1,
            SpaceForm::AntiDeSitter => 2,
        }
    }

    /// Diagonal of the ambient metric.
    #[inline]
    pub fn signs(self) -> [f64; 4] {
        [-1.0, self.c(), 1.0, 1.0]
    }

    pub fn inner<T: Scalar>(self, x: &Ambient<T>, y: &Ambient<T>) -> T {
        let s = self.signs();
        x[0] * y[0] * s[0] + x[1] * y[1] * s[1] + x[2] * y[2] * s[2] + x[3] * y[3] * s[3]
    }

    pub fn norm2<T: Scalar>(self, x: &Ambient<T>) -> T {
        self.inner(x, x)
    }

    /// Raises or lowers an index: `G x` with G the metric diagonal.
    pub fn flat<T: Scalar>(self, x: &Ambient<T>) -> Ambient<T> {
        let s = self.signs();
        Ambient([x[0] * s[0], x[1] * s[1], x[2] * s[2], x[3] * s[3]])
    }

    pub fn on_space(self, x: &AmbientVector, tol: f64) -> bool {
        (self.inner(x, x) - self.c()).abs() <= tol
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceForm::DeSitter => "S^3_1",
            SpaceForm::AntiDeSitter => "H^3_1",
        }
    }
}

impl fmt::Display for SpaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (c = {:+})", self.name(), self.c() as i32)
    }
}

/// A vector of R⁴_q with components of any [`Scalar`] type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ambient<T>(pub [T; 4]);

pub type AmbientVector = Ambient<f64>;

impl<T> Index<usize> for Ambient<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Ambient<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl AmbientVector {
    pub const ZERO: AmbientVector = Ambient([0.0; 4]);

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Ambient([x1, x2, x3, x4])
    }

    pub fn basis(i: usize) -> Self {
        let mut e = [0.0; 4];
        e[i] = 1.0;
        Ambient(e)
    }

    /// Euclidean length of the coordinate vector, for residual bookkeeping.
    pub fn euclid(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn constant_jet(&self, order: usize) -> Ambient<Jet2> {
        Ambient(self.0.map(|x| Jet2::constant(x, order)))
    }
}

impl<T: Scalar> Ambient<T> {
    pub fn values(&self) -> AmbientVector {
        Ambient(self.0.map(|x| x.value()))
    }

    pub fn map<U>(&self, f: impl FnMut(T) -> U) -> Ambient<U> {
        Ambient(self.0.map(f))
    }

    pub fn scale(&self, s: T) -> Self {
        Ambient(self.0.map(|x| x * s))
    }
}

impl<T: Scalar> Add for Ambient<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Ambient([self[0] + rhs[0], self[1] + rhs[1], self[2] + rhs[2], self[3] + rhs[3]])
    }
}

impl<T: Scalar> Sub for Ambient<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Ambient([self[0] - rhs[0], self[1] - rhs[1], self[2] - rhs[2], self[3] - rhs[3]])
    }
}

impl<T: Scalar> Neg for Ambient<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Ambient(self.0.map(|x| -x))
    }
}

impl<T: Scalar> Mul<f64> for Ambient<T> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Ambient(self.0.map(|x| x * rhs))
    }
}

impl Mul<AmbientVector> for f64 {
    type Output = AmbientVector;
    fn mul(self, rhs: AmbientVector) -> AmbientVector {
        rhs * self
    }
}

/// `e^⊤ = e - ε<e,N>N - c<e,ψ>ψ`: the part of a constant vector tangent to
/// the surface at a point with position `psi` and unit normal `normal`.
pub fn tangential_component(
    e: &AmbientVector,
    psi: &AmbientVector,
    normal: &AmbientVector,
    eps: f64,
    sf: SpaceForm,
    tol: f64,
) -> Result<AmbientVector> {
    let c = sf.c();
    if (sf.norm2(psi) - c).abs() > tol {
        return Err(Error::InconsistentFrame(format!(
            "position off the space form by {:.3e}",
            sf.norm2(psi) - c
        )));
    }
    let nn = sf.norm2(normal);
    if (nn - eps).abs() > tol {
        return Err(Error::InconsistentFrame(format!(
            "<N,N> = {nn} does not match eps = {eps}"
        )));
    }
    let np = sf.inner(normal, psi);
    if np.abs() > tol {
        return Err(Error::InconsistentFrame(format!("<N,psi> = {np:.3e}")));
    }
    Ok(*e - *normal * (eps * sf.inner(e, normal)) - *psi * (c * sf.inner(e, psi)))
}

/// `det[x₀, x₁, x₂, x₃]` with the vectors as rows.
pub fn det4<T: Scalar>(rows: [&Ambient<T>; 4]) -> T {
    let cof = cofactor_normal(rows[0], rows[1], rows[2]);
    rows[3][0] * cof[0] + rows[3][1] * cof[1] + rows[3][2] * cof[2] + rows[3][3] * cof[3]
}

/// The vector `m` with `m · x = det[a, b, c, x]` (Euclidean dot product), so
/// `m` is Euclidean-orthogonal to `a`, `b` and `c`.
pub fn cofactor_normal<T: Scalar>(a: &Ambient<T>, b: &Ambient<T>, c: &Ambient<T>) -> Ambient<T> {
    let minor = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    // expansion along the last row: sign (-1)^(4+col)
    Ambient([-minor(1, 2, 3), minor(0, 2, 3), -minor(0, 1, 3), minor(0, 1, 2)])
}
