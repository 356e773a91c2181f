//! Intrinsic differential operators on a chart and the operator
//! `L₁f = tr(P₁ ∘ ∇²f)`.
//!
//! All operators act on jets held in [`LocalJets`]; each derivative costs one
//! jet order. Starting from an order-4 chart jet, `L₁ψ` is still an order-2
//! jet, so `L₁(L₁ψ)` is computed exactly rather than by finite differences.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::{Ambient, AmbientVector};
use crate::error::{Error, Result};
use crate::jet::{Jet2, Var, DEFAULT_ORDER};
use crate::mat2::{self, Mat2};
use crate::surface::{Chart, LocalJets};
use crate::tolerances::Tolerances;

type FieldFn = dyn Fn(&LocalJets) -> Result<Jet2> + Send + Sync;

/// A smooth function on the surface, evaluated as a jet at the point held
/// by a [`LocalJets`].
#[derive(Clone)]
pub struct ScalarField {
    label: String,
    eval: Arc<FieldFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ScalarField").field(&self.label).finish()
    }
}

impl ScalarField {
    pub fn new(label: impl Into<String>, eval: impl Fn(&LocalJets) -> Result<Jet2> + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Jet of the field; rejects jets too short for a Hessian.
    pub fn eval(&self, lj: &LocalJets) -> Result<Jet2> {
        let f = (self.eval)(lj)?;
        if f.order() < 2 {
            return Err(Error::InsufficientOrder {
                have: f.order(),
                need: 2,
            });
        }
        Ok(f)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("{value}"), move |lj| {
            Ok(Jet2::constant(value, lj.psi[0].order()))
        })
    }

    /// `<e, ψ>`.
    pub fn coordinate(e: AmbientVector) -> Self {
        Self::new(format!("<{:?},psi>", e.0), move |lj| {
            Ok(lj.sf.inner(&e.constant_jet(lj.psi[0].order()), &lj.psi))
        })
    }

    /// `<e, N>`.
    pub fn normal_coordinate(e: AmbientVector) -> Self {
        Self::new(format!("<{:?},N>", e.0), move |lj| {
            Ok(lj.sf.inner(&e.constant_jet(lj.normal[0].order()), &lj.normal))
        })
    }

    pub fn mean_curvature() -> Self {
        Self::new("H", |lj| Ok(lj.mean))
    }

    pub fn second_mean_curvature() -> Self {
        Self::new("H2", |lj| Ok(lj.mean2))
    }

    pub fn product(f: &ScalarField, g: &ScalarField) -> Self {
        let (f, g) = (f.clone(), g.clone());
        Self::new(format!("({})*({})", f.label, g.label), move |lj| {
            Ok(f.eval(lj)? * g.eval(lj)?)
        })
    }

    pub fn linear(alpha: f64, f: &ScalarField, beta: f64, g: &ScalarField) -> Self {
        let (f, g) = (f.clone(), g.clone());
        Self::new(format!("{alpha}*({})+{beta}*({})", f.label, g.label), move |lj| {
            Ok(f.eval(lj)? * alpha + g.eval(lj)? * beta)
        })
    }

    /// Smooth bump `exp(-1/(1-r²))` supported in the ellipse
    /// `((u-u₀)/a)² + ((v-v₀)/b)² < 1`.
    pub fn bump(center: (f64, f64), radii: (f64, f64)) -> Self {
        Self::new(format!("bump{center:?}"), move |lj| {
            let order = lj.psi[0].order();
            let du = (Jet2::variable(Var::U, lj.u, order)? - center.0) / radii.0;
            let dv = (Jet2::variable(Var::V, lj.v, order)? - center.1) / radii.1;
            let r2 = du * du + dv * dv;
            if r2.value() >= 1.0 {
                return Ok(Jet2::zero(order));
            }
            Ok((-(r2 * -1.0 + 1.0).recip()).exp())
        })
    }
}

/// Coordinates `(ξ¹, ξ²)` of a tangent vector in the frame `{ψ_u, ψ_v}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub components: [f64; 2],
}

impl TangentVector {
    pub fn new(x: f64, y: f64) -> Self {
        Self { components: [x, y] }
    }

    fn from_jets(x: &[Jet2; 2]) -> Self {
        Self::new(x[0].value(), x[1].value())
    }

    /// The ambient vector `ξ¹ψ_u + ξ²ψ_v`.
    pub fn push_forward(&self, lj: &LocalJets) -> AmbientVector {
        lj.push_forward(&self.components)
    }

    /// Components in a frame whose coordinate vectors are the columns of
    /// `basis`.
    pub fn in_frame(&self, basis: &Mat2<f64>) -> Result<TangentVector> {
        let d = mat2::det(basis);
        if !(d.abs() > 1e-12 * mat2::max_abs(basis).powi(2)) {
            return Err(Error::InvalidBasis);
        }
        let c = mat2::apply(&mat2::inverse(basis), &self.components);
        Ok(TangentVector::new(c[0], c[1]))
    }
}

/// Which vector-valued function `L₁` is applied to componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorField {
    Psi,
    N,
}

fn d(f: &Jet2, var: Var) -> Result<Jet2> {
    Ok(f.derivative(var)?)
}

impl LocalJets {
    /// `ξ¹ψ_u + ξ²ψ_v` at the base point.
    pub fn push_forward(&self, xi: &[f64; 2]) -> AmbientVector {
        self.tangents[0].values() * xi[0] + self.tangents[1].values() * xi[1]
    }

    /// `<X, Y>_g` for coordinate vectors at the base point.
    pub fn g_inner(&self, x: &[f64; 2], y: &[f64; 2]) -> f64 {
        let g = mat2::values(&self.metric);
        let gy = mat2::apply(&g, y);
        x[0] * gy[0] + x[1] * gy[1]
    }

    /// `∇f = g^{ij} ∂_j f ∂_i`, one order below `f`.
    pub fn gradient_jet(&self, f: &Jet2) -> Result<[Jet2; 2]> {
        if f.order() < 1 {
            return Err(Error::InsufficientOrder { have: 0, need: 1 });
        }
        let df = [d(f, Var::U)?, d(f, Var::V)?];
        Ok(mat2::apply(&self.metric_inv, &df))
    }

    /// `(∇²f)^i_j = g^{ik}(∂_k∂_j f - Γ^l_{kj} ∂_l f)`, two orders below `f`
    /// (capped by the Christoffel jets).
    pub fn hessian_jet(&self, f: &Jet2) -> Result<Mat2<Jet2>> {
        if f.order() < 2 {
            return Err(Error::InsufficientOrder {
                have: f.order(),
                need: 2,
            });
        }
        let df = [d(f, Var::U)?, d(f, Var::V)?];
        let vars = [Var::U, Var::V];
        let mut cov = [[Jet2::zero(0); 2]; 2];
        for k in 0..2 {
            for j in 0..2 {
                let mut acc = d(&df[j], vars[k])?;
                for (l, dl) in df.iter().enumerate() {
                    acc -= self.christoffel[l][k][j] * *dl;
                }
                cov[k][j] = acc;
            }
        }
        Ok(mat2::mul(&self.metric_inv, &cov))
    }

    /// `L₁f = tr(P₁ ∘ ∇²f)`.
    pub fn l1_jet(&self, f: &Jet2) -> Result<Jet2> {
        Ok(mat2::trace(&mat2::mul(&self.newton, &self.hessian_jet(f)?)))
    }

    /// `L₁` applied to each ambient component of ψ or N.
    pub fn l1_vector_jet(&self, which: VectorField) -> Result<Ambient<Jet2>> {
        let x = match which {
            VectorField::Psi => &self.psi,
            VectorField::N => &self.normal,
        };
        let mut out = [Jet2::zero(0); 4];
        for (slot, comp) in out.iter_mut().zip(x.0.iter()) {
            *slot = self.l1_jet(comp)?;
        }
        Ok(Ambient(out))
    }

    /// `L₁(L₁ψ)` by applying `L₁` to the jet of `L₁ψ`.
    pub fn l1_squared_nested(&self) -> Result<AmbientVector> {
        let inner = self.l1_vector_jet(VectorField::Psi)?;
        let mut out = [0.0; 4];
        for (slot, comp) in out.iter_mut().zip(inner.0.iter()) {
            *slot = self.l1_jet(comp)?.value();
        }
        Ok(Ambient(out))
    }

    /// `L₁²ψ = ε{4cP₁(∇H) - 3∇(H₂²)} + ε{-4εHH₂(c+εH₂) - 2L₁H₂}N
    ///        + ε{4cH₂² + 4εH² + 2cL₁H}ψ`.
    pub fn l1_squared_closed(&self) -> Result<AmbientVector> {
        let (c, eps) = (self.c(), self.eps);
        let h = self.mean.value();
        let h2 = self.mean2.value();
        let grad_h = jet_values(&self.gradient_jet(&self.mean)?);
        let grad_h2 = jet_values(&self.gradient_jet(&self.mean2)?);
        let p1 = mat2::values(&self.newton);
        let p1_grad_h = mat2::apply(&p1, &grad_h);
        let tan = [
            4.0 * c * p1_grad_h[0] - 6.0 * h2 * grad_h2[0],
            4.0 * c * p1_grad_h[1] - 6.0 * h2 * grad_h2[1],
        ];
        let l1_h = self.l1_jet(&self.mean)?.value();
        let l1_h2 = self.l1_jet(&self.mean2)?.value();
        let nor = -4.0 * eps * h * h2 * (c + eps * h2) - 2.0 * l1_h2;
        let pos = 4.0 * c * h2 * h2 + 4.0 * eps * h * h + 2.0 * c * l1_h;
        Ok((self.push_forward(&tan) + self.normal.values() * nor + self.psi.values() * pos) * eps)
    }

    /// `(∇_k S)^i_j = ∂_k S^i_j + Γ^i_{kl} S^l_j - Γ^l_{kj} S^i_l` at the base point.
    pub fn covariant_shape(&self) -> Result<[Mat2<f64>; 2]> {
        let s = mat2::values(&self.shape);
        let gam = |k: usize, i: usize, j: usize| self.christoffel[k][i][j].value();
        let mut out = [[[0.0; 2]; 2]; 2];
        for (k, var) in [Var::U, Var::V].into_iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = d(&self.shape[i][j], var)?.value();
                    for (l, sl) in s.iter().enumerate() {
                        acc += gam(i, k, l) * sl[j] - gam(l, k, j) * s[i][l];
                    }
                    out[k][i][j] = acc;
                }
            }
        }
        Ok(out)
    }

    /// `div P₁`: contraction of `∇P₁` over the derivative and output slots,
    /// raised to a tangent vector.
    pub fn divergence_newton(&self) -> Result<TangentVector> {
        let ds = self.covariant_shape()?;
        let tr = mat2::trace(&self.shape);
        let dtr = [d(&tr, Var::U)?.value(), d(&tr, Var::V)?.value()];
        // (∇_k P₁)^i_j = (∇_k S)^i_j - ∂_k(tr S) δ^i_j
        let mut form = [0.0; 2];
        for (j, slot) in form.iter_mut().enumerate() {
            *slot = (0..2).map(|i| ds[i][i][j]).sum::<f64>() - dtr[j];
        }
        let ginv = mat2::values(&self.metric_inv);
        let v = mat2::apply(&ginv, &form);
        Ok(TangentVector::new(v[0], v[1]))
    }

    /// `tr((∇_k S) ∘ P₁) + ∂_k H₂` for both coordinate directions; vanishes
    /// identically.
    pub fn codazzi_trace_defect(&self) -> Result<[f64; 2]> {
        let ds = self.covariant_shape()?;
        let p1 = mat2::values(&self.newton);
        let dh2 = [d(&self.mean2, Var::U)?.value(), d(&self.mean2, Var::V)?.value()];
        Ok([
            mat2::trace(&mat2::mul(&ds[0], &p1)) + dh2[0],
            mat2::trace(&mat2::mul(&ds[1], &p1)) + dh2[1],
        ])
    }
}

fn jet_values(x: &[Jet2; 2]) -> [f64; 2] {
    [x[0].value(), x[1].value()]
}

fn local(chart: &Chart, u: f64, v: f64) -> Result<LocalJets> {
    LocalJets::build(chart, u, v, DEFAULT_ORDER, &Tolerances::default())
}

/// `Γ^k_{ij}` at a point, indexed `[k][i][j]`.
pub fn christoffel(chart: &Chart, u: f64, v: f64) -> Result<[Mat2<f64>; 2]> {
    let lj = LocalJets::build(chart, u, v, 2, &Tolerances::default())?;
    Ok(lj.christoffel.map(|m| mat2::values(&m)))
}

pub fn gradient(f: &ScalarField, chart: &Chart, u: f64, v: f64) -> Result<TangentVector> {
    let lj = local(chart, u, v)?;
    Ok(TangentVector::from_jets(&lj.gradient_jet(&f.eval(&lj)?)?))
}

pub fn hessian_operator(f: &ScalarField, chart: &Chart, u: f64, v: f64) -> Result<Mat2<f64>> {
    let lj = local(chart, u, v)?;
    Ok(mat2::values(&lj.hessian_jet(&f.eval(&lj)?)?))
}

pub fn l1(f: &ScalarField, chart: &Chart, u: f64, v: f64) -> Result<f64> {
    let lj = local(chart, u, v)?;
    Ok(lj.l1_jet(&f.eval(&lj)?)?.value())
}

pub fn l1_vector(chart: &Chart, u: f64, v: f64, which: VectorField) -> Result<AmbientVector> {
    Ok(local(chart, u, v)?.l1_vector_jet(which)?.values())
}

/// Nested `L₁(L₁ψ)`, checked against the closed form within
/// `tol·(1 + |L₁²ψ|)`.
pub fn l1_squared_psi(chart: &Chart, u: f64, v: f64, tol: f64) -> Result<AmbientVector> {
    let lj = local(chart, u, v)?;
    let nested = lj.l1_squared_nested()?;
    let closed = lj.l1_squared_closed()?;
    let residual = (nested - closed).euclid();
    let bound = tol * (1.0 + nested.euclid());
    if !(residual <= bound) {
        return Err(Error::IdentityViolation {
            name: "l1_squared_psi",
            residual,
            tolerance: bound,
        });
    }
    Ok(nested)
}

/// `|L₁(fg) - gL₁f - fL₁g - 2<P₁∇f, ∇g>|`.
pub fn product_rule_check(f: &ScalarField, g: &ScalarField, chart: &Chart, u: f64, v: f64) -> Result<f64> {
    let lj = local(chart, u, v)?;
    product_rule_defect(&lj, f, g)
}

pub fn product_rule_defect(lj: &LocalJets, f: &ScalarField, g: &ScalarField) -> Result<f64> {
    let fj = f.eval(lj)?;
    let gj = g.eval(lj)?;
    let lhs = lj.l1_jet(&(fj * gj))?.value();
    let grad_f = jet_values(&lj.gradient_jet(&fj)?);
    let grad_g = jet_values(&lj.gradient_jet(&gj)?);
    let p1_grad_f = mat2::apply(&mat2::values(&lj.newton), &grad_f);
    let rhs = gj.value() * lj.l1_jet(&fj)?.value()
        + fj.value() * lj.l1_jet(&gj)?.value()
        + 2.0 * lj.g_inner(&p1_grad_f, &grad_g);
    Ok((lhs - rhs).abs())
}

pub fn divergence_p1(chart: &Chart, u: f64, v: f64) -> Result<TangentVector> {
    local(chart, u, v)?.divergence_newton()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::SpaceForm;
    use crate::surface::Domain;

    /// Round unit sphere x₁ = 0 in S³₁, longitude u, latitude v.
    fn sphere() -> Chart {
        Chart::new(
            "sphere",
            SpaceForm::DeSitter,
            Domain::new((-1.0, 1.0), (-1.0, 1.0)),
            |u, v| Ambient([u * 0.0, v.cos() * u.cos(), v.cos() * u.sin(), v.sin()]),
        )
    }

    #[test]
    fn sphere_christoffels() {
        let (u, v) = (0.3, 0.4);
        let gam = christoffel(&sphere(), u, v).unwrap();
        // g = diag(cos²v, 1): Γ^u_uv = -tan v, Γ^v_uu = sin v cos v.
        assert!((gam[0][0][1] + v.tan()).abs() < 1e-13);
        assert!((gam[0][1][0] + v.tan()).abs() < 1e-13);
        assert!((gam[1][0][0] - v.sin() * v.cos()).abs() < 1e-13);
        assert!(gam[0][0][0].abs() < 1e-13 && gam[1][1][1].abs() < 1e-13);
        assert!(gam[1][0][1].abs() < 1e-13 && gam[0][1][1].abs() < 1e-13);
    }

    #[test]
    fn totally_geodesic_sphere_is_l1_harmonic() {
        let chart = sphere();
        let l = l1_vector(&chart, 0.2, -0.1, VectorField::Psi).unwrap();
        assert!(l.euclid() < 1e-12);
        let sq = l1_squared_psi(&chart, 0.2, -0.1, 1e-5).unwrap();
        assert!(sq.euclid() < 1e-12);
    }

    #[test]
    fn constants_are_annihilated() {
        let chart = sphere();
        let one = ScalarField::constant(3.0);
        assert_eq!(gradient(&one, &chart, 0.1, 0.2).unwrap().components, [0.0, 0.0]);
        assert_eq!(hessian_operator(&one, &chart, 0.1, 0.2).unwrap(), [[0.0; 2]; 2]);
        assert_eq!(l1(&one, &chart, 0.1, 0.2).unwrap(), 0.0);
        let f = ScalarField::coordinate(AmbientVector::basis(1));
        assert_eq!(
            product_rule_check(&ScalarField::constant(1.0), &f, &chart, 0.1, 0.2).unwrap(),
            0.0
        );
    }

    #[test]
    fn short_field_rejected() {
        let chart = sphere();
        let flat = ScalarField::new("short", |_| Ok(Jet2::constant(1.0, 1)));
        assert!(matches!(
            l1(&flat, &chart, 0.0, 0.0),
            Err(Error::InsufficientOrder { have: 1, need: 2 })
        ));
    }

    #[test]
    fn frame_change_of_tangent_vector() {
        let x = TangentVector::new(1.0, 2.0);
        let basis = [[2.0, 0.0], [0.0, 0.5]];
        assert_eq!(x.in_frame(&basis).unwrap().components, [0.5, 4.0]);
    }
}
