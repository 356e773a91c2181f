//! Pointwise extrinsic geometry of a parametrized surface in a space form.
//!
//! Everything is evaluated in jet arithmetic: the chart is expanded to order 4
//! at the point, and the metric, unit normal, shape operator, mean curvatures
//! and Newton transformation are carried as jets of decreasing order. The
//! plain values form a [`PointGeometry`]; the jets feed the differential
//! operators of [`crate::cheng_yau`].
//!
//! Conventions: `S^i_j` is the coefficient of `ψ_i` in `S(ψ_j)`, the normal
//! solves `<N,ψ> = <N,ψ_u> = <N,ψ_v> = 0` with `|<N,N>| = 1`, and it is
//! oriented so that `det[ψ, ψ_u, ψ_v, N] > 0`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{cofactor_normal, Ambient, AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::jet::{Jet2, Var, DEFAULT_ORDER};
use crate::mat2::{self, Mat2};
use crate::tolerances::Tolerances;

/// Rectangle `[u₀,u₁] × [v₀,v₁]` of parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self { u, v }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let slack = 1e-9 * (1.0 + self.u.1 - self.u.0 + self.v.1 - self.v.0);
        u >= self.u.0 - slack && u <= self.u.1 + slack && v >= self.v.0 - slack && v <= self.v.1 + slack
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }

    pub fn swapped(&self) -> Self {
        Self { u: self.v, v: self.u }
    }
}

pub type ChartMap = dyn Fn(Jet2, Jet2) -> Ambient<Jet2> + Send + Sync;

/// An immersion `(u, v) ↦ ψ(u, v) ∈ M³_c ⊂ R⁴_q`, evaluated in jets.
#[derive(Clone)]
pub struct Chart {
    label: String,
    sf: SpaceForm,
    domain: Domain,
    map: Arc<ChartMap>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("label", &self.label)
            .field("sf", &self.sf)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl Chart {
    pub fn new(
        label: impl Into<String>,
        sf: SpaceForm,
        domain: Domain,
        map: impl Fn(Jet2, Jet2) -> Ambient<Jet2> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            sf,
            domain,
            map: Arc::new(map),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Applies the map to arbitrary parameter jets, bypassing the domain check.
    pub fn map_jets(&self, u: Jet2, v: Jet2) -> Ambient<Jet2> {
        (self.map)(u, v)
    }

    /// Order-`order` jet of ψ at `(u, v)`.
    pub fn jet(&self, u: f64, v: f64, order: usize) -> Result<Ambient<Jet2>> {
        if !self.domain.contains(u, v) {
            return Err(Error::OutOfDomain { u, v });
        }
        let ju = Jet2::variable(Var::U, u, order)?;
        let jv = Jet2::variable(Var::V, v, order)?;
        Ok((self.map)(ju, jv))
    }

    /// Plain position ψ(u, v), without domain check.
    pub fn position(&self, u: f64, v: f64) -> AmbientVector {
        (self.map)(Jet2::constant(u, 0), Jet2::constant(v, 0)).values()
    }

    /// The same surface with the parameters exchanged, which reverses the
    /// orientation convention and hence the normal.
    pub fn swapped(&self) -> Chart {
        let map = self.map.clone();
        Chart {
            label: self.label.clone(),
            sf: self.sf,
            domain: self.domain.swapped(),
            map: Arc::new(move |u, v| map(v, u)),
        }
    }

    /// Inclusive `n × m` grid over the domain, row-major in `u`.
    pub fn grid(&self, n: usize, m: usize) -> Vec<GridPoint> {
        let lin = |(a, b): (f64, f64), k: usize, count: usize| {
            if count == 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * k as f64 / (count - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                out.push(GridPoint {
                    i,
                    j,
                    u: lin(self.domain.u, i, n),
                    v: lin(self.domain.v, j, m),
                });
            }
        }
        out
    }

    /// Seeded uniform samples, kept 5% away from the domain boundary.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inset = |(a, b): (f64, f64)| (a + 0.05 * (b - a), b - 0.05 * (b - a));
        let (u0, u1) = inset(self.domain.u);
        let (v0, v1) = inset(self.domain.v);
        (0..count)
            .map(|_| (rng.gen_range(u0..=u1), rng.gen_range(v0..=v1)))
            .collect()
    }

    /// Largest `|<ψ,ψ> - c|` over the given points.
    pub fn membership_defect(&self, points: &[(f64, f64)]) -> f64 {
        points
            .iter()
            .map(|&(u, v)| {
                let x = self.position(u, v);
                (self.sf.norm2(&x) - self.sf.c()).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
}

/// First- and second-order invariants at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointGeometry {
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub psi: AmbientVector,
    pub tangents: [AmbientVector; 2],
    /// First fundamental form.
    pub g: Mat2<f64>,
    /// 1 when the induced metric is Lorentzian.
    pub s: u8,
    /// `<N, N>`.
    pub eps: f64,
    pub normal: AmbientVector,
    /// Shape operator in the coordinate frame.
    pub shape: Mat2<f64>,
    pub mean: f64,
    pub mean2: f64,
    pub gauss: f64,
    /// Newton transformation P₁ = -2εH·I + S.
    pub newton: Mat2<f64>,
}

impl PointGeometry {
    pub fn sf(&self) -> SpaceForm {
        if self.c > 0.0 {
            SpaceForm::DeSitter
        } else {
            SpaceForm::AntiDeSitter
        }
    }

    /// `<X, Y>_g` for coordinate vectors.
    pub fn g_inner(&self, x: &[f64; 2], y: &[f64; 2]) -> f64 {
        let gy = mat2::apply(&self.g, y);
        x[0] * gy[0] + x[1] * gy[1]
    }

    pub fn push_forward(&self, x: &[f64; 2]) -> AmbientVector {
        self.tangents[0] * x[0] + self.tangents[1] * x[1]
    }
}

/// Canonical form of a g-self-adjoint operator on a 2-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ShapeClass {
    /// Diagonalizable, real eigenvalues `kappa1 >= kappa2`.
    TypeI { kappa1: f64, kappa2: f64 },
    /// Complex eigenvalues `kappa ± i b`, `b > 0`.
    TypeII { kappa: f64, b: f64 },
    /// Single eigenvalue with a nilpotent part.
    TypeIII { kappa: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ShapeKind {
    TypeI,
    TypeII,
    TypeIII,
}

impl ShapeClass {
    pub fn kind(&self) -> ShapeKind {
        match self {
            ShapeClass::TypeI { .. } => ShapeKind::TypeI,
            ShapeClass::TypeII { .. } => ShapeKind::TypeII,
            ShapeClass::TypeIII { .. } => ShapeKind::TypeIII,
        }
    }

    /// Real parts of the principal curvatures.
    pub fn principal(&self) -> (f64, f64) {
        match *self {
            ShapeClass::TypeI { kappa1, kappa2 } => (kappa1, kappa2),
            ShapeClass::TypeII { kappa, .. } | ShapeClass::TypeIII { kappa } => (kappa, kappa),
        }
    }

    /// Complex principal curvatures are not expected in De Sitter space;
    /// near umbilics this is usually noise rather than geometry.
    pub fn is_anomalous(&self, sf: SpaceForm) -> bool {
        matches!(self, ShapeClass::TypeII { .. }) && sf == SpaceForm::DeSitter
    }
}

/// Jets of every pointwise invariant at one base point.
///
/// With a chart jet of order n, the tangents, metric and normal have order
/// n-1 and the shape operator, curvatures, Newton transformation and
/// Christoffel symbols have order n-2.
#[derive(Debug, Clone)]
pub struct LocalJets {
    pub sf: SpaceForm,
    pub u: f64,
    pub v: f64,
    pub psi: Ambient<Jet2>,
    pub tangents: [Ambient<Jet2>; 2],
    pub metric: Mat2<Jet2>,
    pub metric_inv: Mat2<Jet2>,
    pub normal: Ambient<Jet2>,
    pub eps: f64,
    pub shape: Mat2<Jet2>,
    pub mean: Jet2,
    pub mean2: Jet2,
    pub newton: Mat2<Jet2>,
    /// `christoffel[k][i][j] = Γᵏ_ij`.
    pub christoffel: [Mat2<Jet2>; 2],
}

impl LocalJets {
    /// Order-4 expansion with default thresholds.
    pub fn new(chart: &Chart, u: f64, v: f64) -> Result<Self> {
        Self::build(chart, u, v, DEFAULT_ORDER, &Tolerances::default())
    }

    pub fn build(chart: &Chart, u: f64, v: f64, order: usize, tol: &Tolerances) -> Result<Self> {
        if order < 2 {
            return Err(Error::InsufficientOrder { have: order, need: 2 });
        }
        let sf = chart.space_form();
        let psi = chart.jet(u, v, order)?;
        let psi_u = psi.map(|x| x.derivative(Var::U).expect("order >= 2"));
        let psi_v = psi.map(|x| x.derivative(Var::V).expect("order >= 2"));
        let tangents = [psi_u, psi_v];

        let metric = [
            [sf.inner(&psi_u, &psi_u), sf.inner(&psi_u, &psi_v)],
            [sf.inner(&psi_v, &psi_u), sf.inner(&psi_v, &psi_v)],
        ];

        let m = cofactor_normal(&psi.map(|x| x.truncate(order - 1)), &psi_u, &psi_v);
        let m_vals = m.values();
        let scale = psi.values().euclid() * psi_u.values().euclid() * psi_v.values().euclid();
        if m_vals.euclid() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotImmersed);
        }
        // N ∝ G m is ambient-orthogonal to ψ, ψ_u, ψ_v; <Gm, Gm> = mᵀ G m.
        let gm = sf.flat(&m);
        let nn = sf.inner(&gm, &gm);
        let rel = nn.value() / m_vals.euclid().powi(2);
        if rel.abs() <= 1e-10 {
            return Err(Error::DegenerateNormal { norm2: rel });
        }
        let eps = nn.value().signum();
        let det_g = mat2::det(&metric).value();
        if det_g.abs() <= tol.metric_det {
            return Err(Error::DegenerateMetric { det: det_g });
        }
        // det[ψ, ψ_u, ψ_v, N] = m·N = ε|mᵀGm|^{1/2} > 0 for N = ε Gm / |mᵀGm|^{1/2}.
        let norm = nn.abs_sqrt()?;
        let normal = gm.map(|x| x * eps / norm);

        let metric_inv = mat2::inverse(&metric);
        let dn = [
            normal.map(|x| x.derivative(Var::U).expect("order >= 1")),
            normal.map(|x| x.derivative(Var::V).expect("order >= 1")),
        ];
        // lowered[k][j] = <-∂_j N, ψ_k>
        let mut lowered = [[Jet2::zero(order); 2]; 2];
        for (k, t) in tangents.iter().enumerate() {
            for (j, d) in dn.iter().enumerate() {
                lowered[k][j] = -sf.inner(d, t);
            }
        }
        let shape = mat2::mul(&metric_inv, &lowered);
        let tr = mat2::trace(&shape);
        let mean = tr * (0.5 * eps);
        let mean2 = mat2::det(&shape);
        let newton = [[shape[0][0] - tr, shape[0][1]], [shape[1][0], shape[1][1] - tr]];

        let dg = [
            metric.map(|row| row.map(|x| x.derivative(Var::U).expect("order >= 1"))),
            metric.map(|row| row.map(|x| x.derivative(Var::V).expect("order >= 1"))),
        ];
        // Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il - ∂_l g_ij), then raise l.
        let first_kind = |l: usize, i: usize, j: usize| (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) * 0.5;
        let mut christoffel = [[[Jet2::zero(order); 2]; 2]; 2];
        for (k, gk) in christoffel.iter_mut().enumerate() {
            for (i, row) in gk.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = metric_inv[k][0] * first_kind(0, i, j) + metric_inv[k][1] * first_kind(1, i, j);
                }
            }
        }

        Ok(Self {
            sf,
            u,
            v,
            psi,
            tangents,
            metric,
            metric_inv,
            normal,
            eps,
            shape,
            mean,
            mean2,
            newton,
            christoffel,
        })
    }

    pub fn c(&self) -> f64 {
        self.sf.c()
    }

    pub fn point(&self) -> PointGeometry {
        let g = mat2::values(&self.metric);
        let mean2 = self.mean2.value();
        PointGeometry {
            u: self.u,
            v: self.v,
            c: self.c(),
            psi: self.psi.values(),
            tangents: [self.tangents[0].values(), self.tangents[1].values()],
            g,
            s: (mat2::det(&g) < 0.0) as u8,
            eps: self.eps,
            normal: self.normal.values(),
            shape: mat2::values(&self.shape),
            mean: self.mean.value(),
            mean2,
            gauss: self.c() + self.eps * mean2,
            newton: mat2::values(&self.newton),
        }
    }

    /// Gaussian curvature of the induced metric alone, from the Riemann
    /// tensor of the Christoffel jets: `<R(∂₁,∂₂)∂₂, ∂₁> / det g`.
    pub fn intrinsic_gauss(&self) -> Result<f64> {
        let gam = |k: usize, i: usize, j: usize| self.christoffel[k][i][j].value();
        let dgam = |var: Var, k: usize, i: usize, j: usize| -> Result<f64> {
            Ok(self.christoffel[k][i][j].derivative(var)?.value())
        };
        let mut r = [0.0; 2];
        for (l, rl) in r.iter_mut().enumerate() {
            let mut acc = dgam(Var::U, l, 1, 1)? - dgam(Var::V, l, 0, 1)?;
            for mm in 0..2 {
                acc += gam(mm, 1, 1) * gam(l, 0, mm) - gam(mm, 0, 1) * gam(l, 1, mm);
            }
            *rl = acc;
        }
        let g = mat2::values(&self.metric);
        Ok((g[0][0] * r[0] + g[0][1] * r[1]) / mat2::det(&g))
    }
}

/// All first- and second-order invariants at `(u, v)`.
pub fn point_geometry(chart: &Chart, u: f64, v: f64) -> Result<PointGeometry> {
    Ok(LocalJets::build(chart, u, v, 2, &Tolerances::default())?.point())
}

/// Matrix of S in the frame whose coordinate vectors are the columns of
/// `basis`: `B⁻¹ S B`.
pub fn shape_in_frame(pg: &PointGeometry, basis: &Mat2<f64>) -> Result<Mat2<f64>> {
    let d = mat2::det(basis);
    let scale = mat2::max_abs(basis).powi(2);
    if !(d.abs() > 1e-12 * scale) {
        return Err(Error::InvalidBasis);
    }
    let inv = mat2::inverse(basis);
    Ok(mat2::mul(&inv, &mat2::mul(&pg.shape, basis)))
}

/// Canonical type of the shape operator from its characteristic polynomial.
pub fn classify_shape(pg: &PointGeometry, tol: f64) -> ShapeClass {
    classify_operator(&pg.shape, tol)
}

pub fn classify_operator(s: &Mat2<f64>, tol: f64) -> ShapeClass {
    let tr = mat2::trace(s);
    let det = mat2::det(s);
    let disc = tr * tr - 4.0 * det;
    let half = 0.5 * tr;
    if disc > tol {
        let root = 0.5 * disc.sqrt();
        ShapeClass::TypeI {
            kappa1: half + root,
            kappa2: half - root,
        }
    } else if disc < -tol {
        ShapeClass::TypeII {
            kappa: half,
            b: 0.5 * (-disc).sqrt(),
        }
    } else {
        let nilpotent = mat2::sub(s, &mat2::scale(&mat2::identity(), half));
        if mat2::max_abs(&nilpotent) > tol {
            ShapeClass::TypeIII { kappa: half }
        } else {
            ShapeClass::TypeI {
                kappa1: half,
                kappa2: half,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    H,
    H2,
    K,
    Kappa1,
    Kappa2,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::H,
        Quantity::H2,
        Quantity::K,
        Quantity::Kappa1,
        Quantity::Kappa2,
    ];

    pub fn read(self, pg: &PointGeometry, class: &ShapeClass) -> f64 {
        match self {
            Quantity::H => pg.mean,
            Quantity::H2 => pg.mean2,
            Quantity::K => pg.gauss,
            Quantity::Kappa1 => class.principal().0,
            Quantity::Kappa2 => class.principal().1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstancyScan {
    pub quantity: Quantity,
    pub constant: bool,
    pub mean: f64,
    pub spread: f64,
    pub min: f64,
    pub max: f64,
    /// Number of grid points of each shape type.
    pub classes: Vec<(ShapeKind, usize)>,
}

/// Samples `quantity` on an `n × m` grid and decides whether it is constant:
/// `max - min <= tol·(1 + |mean|)`.
pub fn constancy_scan(
    chart: &Chart,
    quantity: Quantity,
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<ConstancyScan> {
    let scans = constancy_scan_all(chart, &[quantity], n, m, tol)?;
    Ok(scans.into_iter().next().expect("one quantity requested"))
}

/// [`constancy_scan`] for several quantities over one pass of the grid.
pub fn constancy_scan_all(
    chart: &Chart,
    quantities: &[Quantity],
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<Vec<ConstancyScan>> {
    if n < 3 || m < 3 {
        return Err(Error::GridTooSmall { n, m, min: 3 });
    }
    let samples: Vec<(PointGeometry, ShapeClass)> = chart
        .grid(n, m)
        .into_par_iter()
        .map(|p| {
            let pg = point_geometry(chart, p.u, p.v).map_err(|e| e.at_grid(p.i, p.j, p.u, p.v))?;
            let class = classify_shape(&pg, tol.classify);
            Ok((pg, class))
        })
        .collect::<Result<_>>()?;

    let mut counts = std::collections::BTreeMap::new();
    for (_, class) in &samples {
        *counts.entry(class.kind()).or_insert(0usize) += 1;
    }
    let classes: Vec<_> = counts.into_iter().collect();

    Ok(quantities
        .iter()
        .map(|&q| {
            let values: Vec<f64> = samples.iter().map(|(pg, class)| q.read(pg, class)).collect();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let spread = max - min;
            ConstancyScan {
                quantity: q,
                constant: spread <= tol.constancy * (1.0 + mean.abs()),
                mean,
                spread,
                min,
                max,
                classes: classes.clone(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pg_with_shape(shape: Mat2<f64>) -> PointGeometry {
        PointGeometry {
            u: 0.0,
            v: 0.0,
            c: 1.0,
            psi: AmbientVector::basis(1),
            tangents: [AmbientVector::basis(2), AmbientVector::basis(3)],
            g: mat2::identity(),
            s: 0,
            eps: -1.0,
            normal: AmbientVector::basis(0),
            shape,
            mean: 0.0,
            mean2: 0.0,
            gauss: 1.0,
            newton: mat2::identity(),
        }
    }

    #[test]
    fn classifier_cases() {
        let diag = pg_with_shape([[-1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(
            classify_shape(&diag, 1e-7),
            ShapeClass::TypeI {
                kappa1: 1.0,
                kappa2: -1.0
            }
        );
        let rot = pg_with_shape([[0.5, -2.0], [2.0, 0.5]]);
        assert_eq!(classify_shape(&rot, 1e-7), ShapeClass::TypeII { kappa: 0.5, b: 2.0 });
        let jordan = pg_with_shape([[2.0, 0.0], [1.0, 2.0]]);
        assert_eq!(classify_shape(&jordan, 1e-7), ShapeClass::TypeIII { kappa: 2.0 });
        let umbilic = pg_with_shape([[3.0, 0.0], [0.0, 3.0]]);
        assert_eq!(
            classify_shape(&umbilic, 1e-7),
            ShapeClass::TypeI {
                kappa1: 3.0,
                kappa2: 3.0
            }
        );
    }

    #[test]
    fn frame_change() {
        let pg = pg_with_shape([[1.0, 2.0], [2.0, -1.0]]);
        let same = shape_in_frame(&pg, &mat2::identity()).unwrap();
        assert_eq!(same, pg.shape);
        // eigenvectors of [[1,2],[2,-1]]: eigenvalues ±√5
        let r5 = 5f64.sqrt();
        let basis = [[2.0, 2.0], [r5 - 1.0, -r5 - 1.0]];
        let d = shape_in_frame(&pg, &basis).unwrap();
        assert_abs_diff_eq!(d[0][0], r5, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1][1], -r5, epsilon = 1e-12);
        assert_abs_diff_eq!(d[0][1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1][0], 0.0, epsilon = 1e-12);
        assert_eq!(shape_in_frame(&pg, &[[1.0, 2.0], [2.0, 4.0]]), Err(Error::InvalidBasis));
    }

    #[test]
    fn degenerate_charts_are_rejected() {
        // A "surface" that only moves in one direction.
        let line = Chart::new(
            "line",
            SpaceForm::DeSitter,
            Domain::new((-1.0, 1.0), (-1.0, 1.0)),
            |u, _v| {
                let z = u * 0.0;
                Ambient([z, u.cos(), u.sin(), z])
            },
        );
        assert_eq!(point_geometry(&line, 0.1, 0.2), Err(Error::NotImmersed));

        // A null plane through e2 in S³₁: ψ = e2 + u (e1 + e3) + v e4 - ...; the
        // plane spanned by (e1+e3) and e4 is degenerate.
        let null = Chart::new(
            "null",
            SpaceForm::DeSitter,
            Domain::new((-1.0, 1.0), (-1.0, 1.0)),
            |u, v| {
                // <ψ,ψ> = 1 with ψ = (u, sqrt(1 - v²), u, v)
                let x2 = (v * v * -1.0 + 1.0).sqrt();
                Ambient([u, x2, u, v])
            },
        );
        assert!(matches!(
            point_geometry(&null, 0.1, 0.2),
            Err(Error::DegenerateNormal { .. }) | Err(Error::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn out_of_domain() {
        let chart = Chart::new("s", SpaceForm::DeSitter, Domain::new((0.0, 1.0), (0.0, 1.0)), |u, v| {
            Ambient([u * 0.0, u.cos() * v.cos(), u.sin() * v.cos(), v.sin()])
        });
        assert_eq!(
            point_geometry(&chart, 2.0, 0.5),
            Err(Error::OutOfDomain { u: 2.0, v: 0.5 })
        );
    }
}
