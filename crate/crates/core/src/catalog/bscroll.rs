//! B-scrolls `ψ(s, u) = γ(s) + uB(s)` over a null curve γ with Cartan frame
//! {A, B, C}.
//!
//! The frame solves the linear system
//!
//! ```text
//! γ' = A,   A' = -κC,   B' = cγ - a₀C,   C' = -a₀A - κB
//! ```
//!
//! integrated with classical RK4. Jets in s come from the system itself:
//! writing it as `F' = K(s)F`, higher derivatives follow from Leibniz'
//! rule with κ and its first three derivatives.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{finish, fmt_r, CatalogSurface, Expected, Params, Spectrum};
use crate::ambient::{Ambient, AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::finite_type::Verdict;
use crate::jet::{Jet2, MAX_ORDER};
use crate::surface::{Chart, Domain, ShapeKind};

/// Curvature function κ(s) of the null curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Kappa {
    Const(f64),
    /// Coefficients in increasing degree.
    Poly(Vec<f64>),
}

impl Kappa {
    /// `const:K` or `poly:c0,c1,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::bad_param("kappa", format!("`{s}`: {why}"));
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| bad("expected const:K or poly:c0,c1,..."))?;
        let nums: Vec<f64> = body
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect::<Result<_>>()?;
        match kind {
            "const" if nums.len() == 1 => Ok(Kappa::Const(nums[0])),
            "poly" if !nums.is_empty() => Ok(Kappa::Poly(nums)),
            _ => Err(bad("expected const:K or poly:c0,c1,...")),
        }
    }

    /// `[κ, κ', κ'', κ''']` at s.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        match self {
            Kappa::Const(k) => [*k, 0.0, 0.0, 0.0],
            Kappa::Poly(c) => {
                let mut out = [0.0; 4];
                for (d, slot) in out.iter_mut().enumerate() {
                    // Σ_n c_n n!/(n-d)! s^(n-d)
                    *slot = c
                        .iter()
                        .enumerate()
                        .skip(d)
                        .map(|(n, cn)| cn * falling(n, d) * s.powi((n - d) as i32))
                        .sum();
                }
                out
            }
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.derivatives(s)[0]
    }

    pub fn label(&self) -> String {
        match self {
            Kappa::Const(k) => format!("const:{}", fmt_r(*k)),
            Kappa::Poly(c) => format!("poly:{}", c.iter().map(|x| fmt_r(*x)).collect::<Vec<_>>().join(",")),
        }
    }
}

fn falling(n: usize, d: usize) -> f64 {
    (0..d).map(|i| (n - i) as f64).product()
}

/// Position and Cartan frame at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub gamma: AmbientVector,
    pub a: AmbientVector,
    pub b: AmbientVector,
    pub c: AmbientVector,
}

impl Frame {
    /// γ₀ = e₂, A₀ = (e₁+e₃)/√2, B₀ = (e₁-e₃)/√2, C₀ = e₄; valid for both c.
    pub fn standard(_sf: SpaceForm) -> Self {
        let h = 0.5f64.sqrt();
        Frame {
            gamma: AmbientVector::basis(1),
            a: Ambient([h, 0.0, h, 0.0]),
            b: Ambient([h, 0.0, -h, 0.0]),
            c: AmbientVector::basis(3),
        }
    }

    fn to_array(self) -> [AmbientVector; 4] {
        [self.gamma, self.a, self.b, self.c]
    }

    fn from_array(x: [AmbientVector; 4]) -> Self {
        Frame {
            gamma: x[0],
            a: x[1],
            b: x[2],
            c: x[3],
        }
    }

    /// Largest deviation of the ten mutual products from
    /// `<γ,γ> = c, <A,B> = -1, <C,C> = 1`, all others 0.
    pub fn defect(&self, sf: SpaceForm) -> f64 {
        let v = self.to_array();
        let mut target = [[0.0; 4]; 4];
        target[0][0] = sf.c();
        target[1][2] = -1.0;
        target[2][1] = -1.0;
        target[3][3] = 1.0;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in i..4 {
                worst = worst.max((sf.inner(&v[i], &v[j]) - target[i][j]).abs());
            }
        }
        worst
    }
}

/// `Σ_k m[r][k] x[k]` for each row r.
fn apply(m: &[[f64; 4]; 4], x: &[AmbientVector; 4]) -> [AmbientVector; 4] {
    let mut out = [AmbientVector::ZERO; 4];
    for (r, row) in m.iter().enumerate() {
        for (k, &coef) in row.iter().enumerate() {
            if coef != 0.0 {
                out[r] = out[r] + x[k] * coef;
            }
        }
    }
    out
}

fn axpy(x: &[AmbientVector; 4], h: f64, d: &[AmbientVector; 4]) -> [AmbientVector; 4] {
    std::array::from_fn(|i| x[i] + d[i] * h)
}

/// Integrated frame along `[s₀, s₁]`.
#[derive(Debug, Clone)]
pub struct FrameIntegrator {
    sf: SpaceForm,
    a0: f64,
    kappa: Kappa,
    s0: f64,
    h: f64,
    nodes: Vec<Frame>,
    max_drift: f64,
}

impl FrameIntegrator {
    pub fn integrate(
        sf: SpaceForm,
        a0: f64,
        kappa: Kappa,
        frame0: Frame,
        s_range: (f64, f64),
        step: f64,
    ) -> Result<Self> {
        let defect = frame0.defect(sf);
        if !(defect <= 1e-10) {
            return Err(Error::BadInitialFrame(format!("frame products off by {defect:.3e}")));
        }
        if !(s_range.1 > s_range.0) || !(step > 0.0) {
            return Err(Error::bad_param("step", "need s0 < s1 and a positive step"));
        }
        let n = ((s_range.1 - s_range.0) / step).ceil().max(1.0) as usize;
        let mut this = Self {
            sf,
            a0,
            kappa,
            s0: s_range.0,
            h: (s_range.1 - s_range.0) / n as f64,
            nodes: Vec::with_capacity(n + 1),
            max_drift: 0.0,
        };
        let mut f = frame0.to_array();
        this.nodes.push(frame0);
        for i in 0..n {
            f = this.rk4(this.s0 + i as f64 * this.h, &f, this.h);
            let frame = Frame::from_array(f);
            this.max_drift = this.max_drift.max(frame.defect(sf));
            this.nodes.push(frame);
        }
        if this.max_drift > 1e-8 {
            return Err(Error::StepTooLarge {
                drift: this.max_drift,
                tolerance: 1e-8,
            });
        }
        Ok(this)
    }

    fn coefficients(&self, kappa: f64) -> [[f64; 4]; 4] {
        let (c, a0) = (self.sf.c(), self.a0);
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -kappa],
            [c, 0.0, 0.0, -a0],
            [0.0, -a0, -kappa, 0.0],
        ]
    }

    /// The κ-part of the system matrix.
    const KAPPA_PART: [[f64; 4]; 4] = [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
    ];

    fn rhs(&self, s: f64, x: &[AmbientVector; 4]) -> [AmbientVector; 4] {
        apply(&self.coefficients(self.kappa.value(s)), x)
    }

    fn rk4(&self, s: f64, x: &[AmbientVector; 4], h: f64) -> [AmbientVector; 4] {
        let k1 = self.rhs(s, x);
        let k2 = self.rhs(s + 0.5 * h, &axpy(x, 0.5 * h, &k1));
        let k3 = self.rhs(s + 0.5 * h, &axpy(x, 0.5 * h, &k2));
        let k4 = self.rhs(s + h, &axpy(x, h, &k3));
        std::array::from_fn(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
    }

    pub fn nodes(&self) -> &[Frame] {
        &self.nodes
    }

    pub fn node_s(&self, i: usize) -> f64 {
        self.s0 + i as f64 * self.h
    }

    pub fn max_drift(&self) -> f64 {
        self.max_drift
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.s0, self.node_s(self.nodes.len() - 1))
    }

    /// Frame at any s in range: one RK4 step from the nearest node.
    pub fn frame_at(&self, s: f64) -> Frame {
        let last = self.nodes.len() - 1;
        let i = (((s - self.s0) / self.h).round().max(0.0) as usize).min(last);
        let ds = s - self.node_s(i);
        if ds == 0.0 {
            return self.nodes[i];
        }
        Frame::from_array(self.rk4(self.node_s(i), &self.nodes[i].to_array(), ds))
    }

    /// `F, F', ..., F⁽ⁿ⁾` at s from `F⁽ᵐ⁺¹⁾ = Σₖ C(m,k) K⁽ᵏ⁾ F⁽ᵐ⁻ᵏ⁾`.
    pub fn derivatives(&self, s: f64, n: usize) -> Vec<[AmbientVector; 4]> {
        let kd = self.kappa.derivatives(s);
        let mut out = vec![self.frame_at(s).to_array()];
        for m in 0..n {
            let mut next = apply(&self.coefficients(kd[0]), &out[m]);
            let mut binom = 1.0;
            for k in 1..=m {
                binom *= (m + 1 - k) as f64 / k as f64;
                let kk = kd.get(k).copied().unwrap_or(0.0);
                if kk != 0.0 {
                    let term = apply(&Self::KAPPA_PART, &out[m - k]);
                    next = axpy(&next, binom * kk, &term);
                }
            }
            out.push(next);
        }
        out
    }

    /// Taylor jets of γ and B in the parameter jet `s`.
    fn curve_jets(&self, s: Jet2) -> (Ambient<Jet2>, Ambient<Jet2>) {
        let order = s.order();
        let s0 = s.value();
        let derivs = self.derivatives(s0, order.min(MAX_ORDER));
        let ds = s - s0;
        let mut gamma = AmbientVector::ZERO.constant_jet(order);
        let mut b = AmbientVector::ZERO.constant_jet(order);
        let mut power = Jet2::constant(1.0, order);
        let mut fact = 1.0;
        for (n, d) in derivs.iter().enumerate() {
            if n > 0 {
                power *= ds;
                fact *= n as f64;
            }
            for i in 0..4 {
                gamma[i] += power * (d[0][i] / fact);
                b[i] += power * (d[2][i] / fact);
            }
        }
        (gamma, b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BScrollSpec {
    pub sf: SpaceForm,
    pub a0: f64,
    pub kappa: Kappa,
    pub frame0: Frame,
    pub s_range: (f64, f64),
    /// Half-width of the ruling parameter range.
    pub width: f64,
    pub step: f64,
}

pub fn b_scroll(spec: &BScrollSpec, params: Params) -> Result<CatalogSurface> {
    let (sf, a0) = (spec.sf, spec.a0);
    if a0 == 0.0 || !a0.is_finite() {
        return Err(Error::bad_param("a0", "must be a nonzero number"));
    }
    if !(spec.width > 0.0) {
        return Err(Error::bad_param("width", "must be positive"));
    }
    let integ = Arc::new(FrameIntegrator::integrate(
        sf,
        a0,
        spec.kappa.clone(),
        spec.frame0,
        spec.s_range,
        spec.step,
    )?);
    let s_range = integ.s_range();
    for i in 0..integ.nodes().len() {
        let s = integ.node_s(i);
        if spec.kappa.value(s) == 0.0 {
            return Err(Error::bad_param("kappa", format!("vanishes at s = {s}")));
        }
    }
    let kmin = (0..integ.nodes().len())
        .map(|i| spec.kappa.value(integ.node_s(i)))
        .fold(f64::INFINITY, |m, k| m.min(k.abs()));
    if kmin < 1e-8 {
        return Err(Error::bad_param("kappa", "vanishes on the parameter range"));
    }

    let jets = integ.clone();
    let chart = Chart::new(
        format!("b-scroll a0 = {}, kappa = {}", fmt_r(a0), spec.kappa.label()),
        sf,
        Domain::new(s_range, (-spec.width, spec.width)),
        move |s, u| {
            let (gamma, b) = jets.curve_jets(s);
            let mut out = gamma;
            for i in 0..4 {
                out[i] += u * b[i];
            }
            out
        },
    );

    let c = sf.c();
    let gauss = c + a0 * a0;
    let flat = gauss.abs() < 1e-12;
    let (spectrum, verdict) = if flat {
        (Spectrum::InfiniteType { l1_constant: None }, Verdict::InfiniteType)
    } else {
        (
            Spectrum::NullTwoType {
                sigma: 2.0 * a0 * gauss,
            },
            Verdict::NullTwoType,
        )
    };
    let frames = integ.clone();
    let kappa = spec.kappa.clone();
    let expected = Expected {
        eps: Some(1.0),
        mean: Some(a0),
        mean2: Some(a0 * a0),
        gauss: Some(gauss),
        shape_kind: Some(ShapeKind::TypeIII),
        shape: format!("S = [[{0}, 0], [kappa(s), {0}]] in (d/ds, d/du)", fmt_r(a0)),
        spectrum,
        verdict,
        normal: Some(Arc::new(move |s, u| {
            let f = frames.frame_at(s);
            f.c - f.b * (a0 * u)
        })),
        frame: Some(Arc::new(move |s, _| {
            ([[1.0, 0.0], [0.0, 1.0]], [[a0, 0.0], [kappa.value(s), a0]])
        })),
    };
    let notes = vec![format!(
        "frame integrated with {} RK4 steps, max drift {:.2e}",
        integ.nodes().len() - 1,
        integ.max_drift()
    )];
    finish("b-scroll", params, chart, expected, "B-scroll over a null curve", notes)
}
