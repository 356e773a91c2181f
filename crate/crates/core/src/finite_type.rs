//! L₁-type decisions: residuals of the characterizing equations, spectral
//! least-squares fits and the resulting verdict.
//!
//! The two-type model is `L₁²ψ = σL₁ψ - π(ψ - a)` with `σ = λ₁+λ₂` and
//! `π = λ₁λ₂`; it is fitted as the linear system
//! `L₁²ψ - σL₁ψ + πψ - w = 0` in `(σ, π, w)` with `w = πa`. The one-type model
//! is `L₁ψ = λψ + b`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{Ambient, AmbientVector};
use crate::cheng_yau::VectorField;
use crate::error::{Error, Result};
use crate::jet::DEFAULT_ORDER;
use crate::mat2;
use crate::surface::{constancy_scan_all, Chart, LocalJets, Quantity};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    OneType,
    TwoType,
    NullTwoType,
    ComplexPair,
    InfiniteType,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// Roots of `t² - σt + π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Roots {
    Real { lambda1: f64, lambda2: f64 },
    Complex { re: f64, im: f64 },
}

impl Roots {
    pub fn of(sigma: f64, pi: f64) -> Self {
        let disc = sigma * sigma - 4.0 * pi;
        if disc >= 0.0 {
            let root = disc.sqrt();
            // avoid cancellation in the smaller root
            let big = 0.5 * (sigma + sigma.signum() * root);
            let small = if big != 0.0 { pi / big } else { 0.0 };
            let (l1, l2) = if big >= small { (big, small) } else { (small, big) };
            Roots::Real {
                lambda1: l1,
                lambda2: l2,
            }
        } else {
            Roots::Complex {
                re: 0.5 * sigma,
                im: 0.5 * (-disc).sqrt(),
            }
        }
    }

    /// `|λ₁ - λ₂|`, or `2|Im λ|` for a complex pair.
    pub fn separation(&self) -> f64 {
        match *self {
            Roots::Real { lambda1, lambda2 } => (lambda1 - lambda2).abs(),
            Roots::Complex { im, .. } => 2.0 * im,
        }
    }

    pub fn magnitude(&self) -> f64 {
        match *self {
            Roots::Real { lambda1, lambda2 } => lambda1.abs() + lambda2.abs(),
            Roots::Complex { re, im } => 2.0 * re.hypot(im),
        }
    }
}

/// Result of the one-type model `L₁ψ = λψ + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneTypeFit {
    pub lambda: f64,
    pub b: AmbientVector,
    pub residuals: Vec<f64>,
    #[serde(with = "crate::nonfinite")]
    pub max_residual: f64,
    #[serde(with = "crate::nonfinite")]
    pub condition_number: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFit {
    pub sigma: f64,
    pub pi: f64,
    pub w: AmbientVector,
    /// `w / π` when `|π|` is large enough to divide by.
    pub a: Option<AmbientVector>,
    pub roots: Roots,
    /// Normalized two-type residual at each sample.
    pub residuals: Vec<f64>,
    #[serde(with = "crate::nonfinite")]
    pub max_residual: f64,
    #[serde(with = "crate::nonfinite")]
    pub condition_number: f64,
    pub ill_posed: bool,
    pub one_type: OneTypeFit,
    pub verdict: Verdict,
}

/// The data the fits need at one sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub psi: AmbientVector,
    pub l1_psi: AmbientVector,
    pub l1_squared_psi: AmbientVector,
}

impl Sample {
    pub fn at(lj: &LocalJets) -> Result<Self> {
        Ok(Self {
            psi: lj.psi.values(),
            l1_psi: lj.l1_vector_jet(VectorField::Psi)?.values(),
            l1_squared_psi: lj.l1_squared_nested()?,
        })
    }
}

fn local(chart: &Chart, u: f64, v: f64) -> Result<LocalJets> {
    LocalJets::build(chart, u, v, DEFAULT_ORDER, &Tolerances::default())
}

/// The right side of the tangential equation, `-3ε∇(H₂²) + 4εcP₁(∇H)`, in
/// coordinates.
fn tangential_rhs(lj: &LocalJets) -> Result<[f64; 2]> {
    let (c, eps) = (lj.c(), lj.eps);
    let gh = lj.gradient_jet(&lj.mean)?;
    let gh2 = lj.gradient_jet(&lj.mean2)?;
    let h2 = lj.mean2.value();
    let p1 = mat2::values(&lj.newton);
    let p = mat2::apply(&p1, &[gh[0].value(), gh[1].value()]);
    Ok([
        -6.0 * eps * h2 * gh2[0].value() + 4.0 * eps * c * p[0],
        -6.0 * eps * h2 * gh2[1].value() + 4.0 * eps * c * p[1],
    ])
}

/// Coordinates of the tangential part of a constant vector.
fn tangential_coords(lj: &LocalJets, e: &AmbientVector) -> [f64; 2] {
    let t = [lj.tangents[0].values(), lj.tangents[1].values()];
    let rhs = [lj.sf.inner(e, &t[0]), lj.sf.inner(e, &t[1])];
    mat2::apply(&mat2::values(&lj.metric_inv), &rhs)
}

/// `|<X,X>_g|^{1/2}`.
fn g_norm(lj: &LocalJets, x: &[f64; 2]) -> f64 {
    lj.g_inner(x, x).abs().sqrt()
}

/// Coordinates of `πa^⊤ - (-3ε∇(H₂²) + 4εcP₁(∇H))`.
fn tan_defect_coords(lj: &LocalJets, pi: f64, a: &AmbientVector) -> Result<[f64; 2]> {
    let lhs = tangential_coords(lj, &(*a * pi));
    let rhs = tangential_rhs(lj)?;
    Ok([lhs[0] - rhs[0], lhs[1] - rhs[1]])
}

pub fn tan_residual(lj: &LocalJets, pi: f64, a: &AmbientVector) -> Result<f64> {
    Ok(g_norm(lj, &tan_defect_coords(lj, pi, a)?))
}

/// The tangential defect as an ambient vector. Its Euclidean length does not
/// vanish on null defects, unlike the g-norm on a Lorentzian surface.
pub fn tan_defect(lj: &LocalJets, pi: f64, a: &AmbientVector) -> Result<AmbientVector> {
    Ok(lj.push_forward(&tan_defect_coords(lj, pi, a)?))
}

pub fn nor1_residual(lj: &LocalJets, sigma: f64, pi: f64, a: &AmbientVector) -> Result<f64> {
    let (c, eps) = (lj.c(), lj.eps);
    let h = lj.mean.value();
    let h2 = lj.mean2.value();
    let l1_h2 = lj.l1_jet(&lj.mean2)?.value();
    let an = lj.sf.inner(a, &lj.normal.values());
    let rhs = 2.0 * sigma * h2 - 4.0 * eps * h * h2 * (c + eps * h2) - 2.0 * l1_h2;
    Ok((pi * an - rhs).abs())
}

pub fn nor2_residual(lj: &LocalJets, sigma: f64, pi: f64, a: &AmbientVector) -> Result<f64> {
    let (c, eps) = (lj.c(), lj.eps);
    let h = lj.mean.value();
    let h2 = lj.mean2.value();
    let l1_h = lj.l1_jet(&lj.mean)?.value();
    let ap = lj.sf.inner(a, &lj.psi.values());
    let rhs = 4.0 * eps * h2 * h2 + 4.0 * c * h * h - 2.0 * eps * sigma * h + c * pi + 2.0 * eps * l1_h;
    Ok((pi * ap - rhs).abs())
}

/// `‖πa^⊤ - (-3ε∇(H₂²) + 4εcP₁(∇H))‖_g`.
pub fn residual_tan(chart: &Chart, u: f64, v: f64, pi: f64, a: &AmbientVector) -> Result<f64> {
    tan_residual(&local(chart, u, v)?, pi, a)
}

/// `|π<a,N> - (2σH₂ - 4εHH₂(c+εH₂) - 2L₁H₂)|`.
pub fn residual_nor1(chart: &Chart, u: f64, v: f64, sigma: f64, pi: f64, a: &AmbientVector) -> Result<f64> {
    nor1_residual(&local(chart, u, v)?, sigma, pi, a)
}

/// `|π<a,ψ> - (4εH₂² + 4cH² - 2εσH + cπ + 2εL₁H)|`.
pub fn residual_nor2(chart: &Chart, u: f64, v: f64, sigma: f64, pi: f64, a: &AmbientVector) -> Result<f64> {
    nor2_residual(&local(chart, u, v)?, sigma, pi, a)
}

/// Evaluates the fit inputs at every sample, in parallel.
pub fn collect_samples(chart: &Chart, points: &[(f64, f64)]) -> Result<Vec<Sample>> {
    points
        .par_iter()
        .enumerate()
        .map(|(k, &(u, v))| {
            local(chart, u, v)
                .and_then(|lj| Sample::at(&lj))
                .map_err(|e| e.at_grid(k, 0, u, v))
        })
        .collect()
}

struct Lsq {
    x: DVector<f64>,
    condition: f64,
}

fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Lsq {
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd
        .solve(&b, smax * 1e-14)
        .expect("both singular-vector sets were computed");
    Lsq { x, condition }
}

fn ambient_from(x: &DVector<f64>, offset: usize) -> AmbientVector {
    Ambient([x[offset], x[offset + 1], x[offset + 2], x[offset + 3]])
}

/// Fits `L₁ψ = λψ + b`.
pub fn fit_one_type(samples: &[Sample]) -> Result<OneTypeFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: samples.len(),
        });
    }
    let rows = 4 * samples.len();
    let mut a = DMatrix::zeros(rows, 5);
    let mut b = DVector::zeros(rows);
    for (k, s) in samples.iter().enumerate() {
        for i in 0..4 {
            let r = 4 * k + i;
            a[(r, 0)] = s.psi[i];
            a[(r, 1 + i)] = 1.0;
            b[r] = s.l1_psi[i];
        }
    }
    let sol = least_squares(a, b);
    let lambda = sol.x[0];
    let bv = ambient_from(&sol.x, 1);
    let residuals: Vec<f64> = samples
        .iter()
        .map(|s| (s.l1_psi - s.psi * lambda - bv).euclid() / (1.0 + s.l1_psi.euclid()))
        .collect();
    Ok(OneTypeFit {
        lambda,
        b: bv,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        condition_number: sol.condition,
    })
}

/// Fits both models and decides the verdict.
pub fn fit_samples(samples: &[Sample], tol: &Tolerances) -> Result<SpectralFit> {
    let one_type = fit_one_type(samples)?;

    let rows = 4 * samples.len();
    let mut a = DMatrix::zeros(rows, 6);
    let mut b = DVector::zeros(rows);
    for (k, s) in samples.iter().enumerate() {
        for i in 0..4 {
            let r = 4 * k + i;
            a[(r, 0)] = s.l1_psi[i];
            a[(r, 1)] = -s.psi[i];
            a[(r, 2 + i)] = 1.0;
            b[r] = s.l1_squared_psi[i];
        }
    }
    let sol = least_squares(a, b);
    let (sigma, pi) = (sol.x[0], sol.x[1]);
    let w = ambient_from(&sol.x, 2);
    let residuals: Vec<f64> = samples
        .iter()
        .map(|s| (s.l1_squared_psi - s.l1_psi * sigma + s.psi * pi - w).euclid() / (1.0 + s.l1_squared_psi.euclid()))
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let roots = Roots::of(sigma, pi);
    let a = (pi.abs() > tol.zero).then(|| w * (1.0 / pi));

    let mut fit = SpectralFit {
        sigma,
        pi,
        w,
        a,
        roots,
        residuals,
        max_residual,
        condition_number: sol.condition,
        ill_posed: false,
        one_type,
        verdict: Verdict::Inconclusive,
    };
    fit.verdict = decide(&mut fit, samples, tol);
    Ok(fit)
}

fn decide(fit: &mut SpectralFit, samples: &[Sample], tol: &Tolerances) -> Verdict {
    let one = &fit.one_type;
    if one.max_residual < tol.fit_residual {
        if one.condition_number > tol.condition {
            fit.ill_posed = true;
            return Verdict::Inconclusive;
        }
        let b = one.b.euclid();
        let lambda_zero = one.lambda.abs() < tol.zero * (1.0 + b);
        let b_zero = b < tol.zero * (1.0 + one.lambda.abs());
        return if lambda_zero && !b_zero {
            // L₁ψ is a nonzero constant vector: L₁²ψ = 0 without being of finite type.
            Verdict::InfiniteType
        } else {
            Verdict::OneType
        };
    }
    if fit.max_residual >= tol.fit_residual {
        return Verdict::Inconclusive;
    }
    if fit.condition_number > tol.condition {
        fit.ill_posed = true;
        return Verdict::Inconclusive;
    }
    let scale = 1.0 + fit.sigma.abs() + fit.pi.abs();
    let zero = |x: f64| x.abs() < tol.zero * scale;
    if zero(fit.pi) {
        if !zero(fit.sigma) {
            return Verdict::NullTwoType;
        }
        let moving = samples.iter().any(|s| s.l1_psi.euclid() > tol.zero);
        return if moving {
            Verdict::InfiniteType
        } else {
            Verdict::Inconclusive
        };
    }
    let distinct = fit.roots.separation() > tol.zero * (1.0 + fit.roots.magnitude());
    match fit.roots {
        _ if !distinct => Verdict::Inconclusive,
        Roots::Complex { .. } => Verdict::ComplexPair,
        Roots::Real { .. } => Verdict::TwoType,
    }
}

/// Fits both spectral models on the given parameter points.
pub fn fit_spectral(chart: &Chart, points: &[(f64, f64)], tol: &Tolerances) -> Result<SpectralFit> {
    if points.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: points.len(),
        });
    }
    fit_samples(&collect_samples(chart, points)?, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstancyEquivalence {
    pub h_const: bool,
    pub h2_const: bool,
    /// A principal curvature (real part for complex pairs) is constant.
    pub principal_const: bool,
    pub equivalent: bool,
    /// The fit verdict was TwoType or NullTwoType. When false the flags are
    /// advisory only.
    pub hypothesis_met: bool,
}

/// Scans H, H₂ and the principal curvatures on an `n × m` grid and checks that
/// their constancy flags agree.
pub fn constancy_equivalence_check(
    chart: &Chart,
    verdict: Verdict,
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<ConstancyEquivalence> {
    let scans = constancy_scan_all(
        chart,
        &[Quantity::H, Quantity::H2, Quantity::Kappa1, Quantity::Kappa2],
        n,
        m,
        tol,
    )?;
    let h_const = scans[0].constant;
    let h2_const = scans[1].constant;
    let principal_const = scans[2].constant || scans[3].constant;
    Ok(ConstancyEquivalence {
        h_const,
        h2_const,
        principal_const,
        equivalent: h_const == h2_const && h2_const == principal_const,
        hypothesis_met: matches!(verdict, Verdict::TwoType | Verdict::NullTwoType),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_solve_quadratic() {
        for (s, p) in [(3.0, 2.0), (0.0, 256.0 / 289.0), (4.0, 0.0), (-1.0, -6.0), (1e8, 1.0)] {
            match Roots::of(s, p) {
                Roots::Real { lambda1, lambda2 } => {
                    for t in [lambda1, lambda2] {
                        assert!((t * t - s * t + p).abs() < 1e-10 * (1.0 + s * s), "{s} {p} {t}");
                    }
                    assert!(lambda1 >= lambda2);
                }
                Roots::Complex { re, im } => {
                    // (re + i im)² - s(re + i im) + p = 0
                    let real = re * re - im * im - s * re + p;
                    let imag = 2.0 * re * im - s * im;
                    assert!(real.abs() < 1e-10 && imag.abs() < 1e-10);
                }
            }
        }
        assert_eq!(
            Roots::of(0.0, 256.0 / 289.0),
            Roots::Complex {
                re: 0.0,
                im: 16.0 / 17.0
            }
        );
    }

    fn synthetic(points: usize, law: impl Fn(AmbientVector) -> (AmbientVector, AmbientVector)) -> Vec<Sample> {
        (0..points)
            .map(|k| {
                let t = k as f64 * 0.37;
                let psi = Ambient([t.sin(), (1.3 * t).cos(), 0.5 * t.cos(), (0.7 * t).sin() + 0.2]);
                let (l1, l2) = law(psi);
                Sample {
                    psi,
                    l1_psi: l1,
                    l1_squared_psi: l2,
                }
            })
            .collect()
    }

    #[test]
    fn verdicts_on_synthetic_data() {
        let tol = Tolerances::default();
        // Two eigen-components: ψ = p + q with L₁p = 2p, L₁q = -p... use a split by coordinates.
        let two = synthetic(12, |psi| {
            let p = Ambient([psi[0], psi[1], 0.0, 0.0]);
            let q = psi - p;
            (p * 2.0 + q * -1.0, p * 4.0 + q * 1.0)
        });
        let fit = fit_samples(&two, &tol).unwrap();
        assert_eq!(fit.verdict, Verdict::TwoType);
        assert!((fit.sigma - 1.0).abs() < 1e-10 && (fit.pi + 2.0).abs() < 1e-10);

        let b = Ambient([0.0, 0.0, 0.0, 1.0]);
        let one = synthetic(12, |psi| (psi * 3.0 + b, psi * 9.0 + b * 3.0));
        let fit = fit_samples(&one, &tol).unwrap();
        assert_eq!(fit.verdict, Verdict::OneType);
        assert!((fit.one_type.lambda - 3.0).abs() < 1e-10);

        let infinite = synthetic(12, |_| (b, AmbientVector::ZERO));
        assert_eq!(fit_samples(&infinite, &tol).unwrap().verdict, Verdict::InfiniteType);

        let harmonic = synthetic(12, |_| (AmbientVector::ZERO, AmbientVector::ZERO));
        let fit = fit_samples(&harmonic, &tol).unwrap();
        assert_eq!(fit.verdict, Verdict::OneType);
        assert_eq!(fit.one_type.lambda, 0.0);

        assert!(matches!(
            fit_samples(&harmonic[..2], &tol),
            Err(Error::TooFewSamples { need: 3, got: 2 })
        ));
    }
}
