//! Totally umbilical slices `{x ∈ M_c : <a, x> = τ}`.

use std::sync::Arc;

use super::{embed, finish, fmt_r, orthonormal_basis, CatalogSurface, Expected, Params, Spectrum};
use crate::ambient::{AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::finite_type::Verdict;
use crate::jet::Jet2;
use crate::surface::{Chart, Domain, ShapeKind};

const NULL_TOL: f64 = 1e-12;

/// Quadric `Σ sᵢ yᵢ² = L` in an orthonormal 3-frame sorted by sign.
fn quadric(signs: [f64; 3], level: f64, u: Jet2, v: Jet2) -> Result<([Jet2; 3], &'static str)> {
    let negatives = signs.iter().filter(|s| **s < 0.0).count();
    let r = level.abs().sqrt();
    let y = match (negatives, level > 0.0) {
        (0, true) => ([v.cos() * u.cos(), v.cos() * u.sin(), v.sin()], "S^2"),
        (1, true) => ([u.sinh(), u.cosh() * v.cos(), u.cosh() * v.sin()], "S^2_1"),
        (1, false) => ([u.cosh() * v.cosh(), u.sinh() * v.cosh(), v.sinh()], "H^2"),
        (2, false) => ([v.cosh() * u.cos(), v.cosh() * u.sin(), v.sinh()], "H^2_1"),
        (2, true) => ([u.sinh(), u.cosh() * v.sinh(), u.cosh() * v.cosh()], "S^2_2"),
        _ => return Err(Error::EmptySlice(format!("no real points with level {level}"))),
    };
    Ok((y.0.map(|x| x * r), y.1))
}

pub fn umbilical(sf: SpaceForm, a: AmbientVector, tau: f64, params: Params) -> Result<CatalogSurface> {
    let c = sf.c();
    let aa = sf.norm2(&a);
    let scale = a.euclid();
    if scale == 0.0 {
        return Err(Error::bad_param("a", "must be nonzero"));
    }
    let gap = aa - c * tau * tau;
    if gap.abs() <= NULL_TOL * scale * scale {
        return Err(Error::Degenerate(format!("<a,a> - c tau^2 = {gap:.3e}")));
    }
    let delta = gap.abs().sqrt();
    let eps = gap.signum();
    let null = aa.abs() <= NULL_TOL * scale * scale;
    let mut notes = Vec::new();

    let chart = if null {
        // x = ((c - <z,z>)/2τ) a - τ b + z with b null, <a,b> = -1, z ⊥ a, b.
        let k = (0..4)
            .max_by(|&i, &j| {
                sf.inner(&a, &AmbientVector::basis(i))
                    .abs()
                    .total_cmp(&sf.inner(&a, &AmbientVector::basis(j)).abs())
            })
            .expect("four coordinates");
        let ek = AmbientVector::basis(k);
        let w = ek * (-1.0 / sf.inner(&a, &ek));
        let b = w + a * (0.5 * sf.norm2(&w));
        let basis = orthonormal_basis(sf, 2, |v| *v + a * sf.inner(v, &b) + b * sf.inner(v, &a))?;
        let (z1, s1) = basis[0];
        let (z2, s2) = basis[1];
        notes.push("flat slice through a null normal direction".into());
        Chart::new(
            format!("umbilical M({}) [null a]", fmt_r(tau)),
            sf,
            Domain::new((-1.0, 1.0), (-1.0, 1.0)),
            move |u, v| {
                let zz = u * u * s1 + v * v * s2;
                let alpha = (zz * -1.0 + c) / (2.0 * tau);
                embed(&(b * -tau), &[(alpha, a), (u, z1), (v, z2)])
            },
        )
    } else {
        let center = a * (tau / aa);
        let level = c - tau * tau / aa;
        let basis = orthonormal_basis(sf, 3, |v| *v - a * (sf.inner(v, &a) / aa))?;
        let frame = [basis[0].0, basis[1].0, basis[2].0];
        let signs = [basis[0].1, basis[1].1, basis[2].1];
        let zero = Jet2::constant(0.0, 0);
        let (_, kind) = quadric(signs, level, zero, zero)?;
        notes.push(format!("slice is a {kind} of radius {}", fmt_r(level.abs().sqrt())));
        Chart::new(
            format!("umbilical M({}) [{kind}]", fmt_r(tau)),
            sf,
            Domain::new((-1.0, 1.0), (-0.8, 0.8)),
            move |u, v| {
                let (y, _) = quadric(signs, level, u, v).expect("case checked at construction");
                embed(&center, &[(y[0], frame[0]), (y[1], frame[1]), (y[2], frame[2])])
            },
        )
    };

    let mean = eps * c * tau / delta;
    let mean2 = tau * tau / (delta * delta);
    let lambda = 2.0 * tau / delta.powi(3) * (eps * c * tau * tau + delta * delta);
    let b = a * (-2.0 * eps * tau * tau / delta.powi(3));
    let kappa = c * tau / delta;
    let (spectrum, verdict) = if null {
        (Spectrum::InfiniteType { l1_constant: Some(b) }, Verdict::InfiniteType)
    } else {
        (Spectrum::OneType { lambda, b }, Verdict::OneType)
    };

    let position = chart.clone();
    let expected = Expected {
        eps: Some(eps),
        mean: Some(mean),
        mean2: Some(mean2),
        gauss: Some(c + eps * mean2),
        shape_kind: Some(ShapeKind::TypeI),
        shape: format!("S = {} I", fmt_r(kappa)),
        spectrum,
        verdict,
        normal: Some(Arc::new(move |u, v| {
            (a - position.position(u, v) * (c * tau)) * (1.0 / delta)
        })),
        frame: Some(Arc::new(move |_, _| {
            ([[1.0, 0.0], [0.0, 1.0]], [[kappa, 0.0], [0.0, kappa]])
        })),
    };
    finish(
        "umbilical",
        params,
        chart,
        expected,
        "totally umbilical slice <a,x> = tau",
        notes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::point_geometry;

    fn check(sf: SpaceForm, a: AmbientVector, tau: f64) -> CatalogSurface {
        let s = umbilical(sf, a, tau, Params::new()).unwrap();
        for (u, v) in s.chart.sample(5, 1) {
            let x = s.chart.position(u, v);
            assert!((sf.inner(&a, &x) - tau).abs() < 1e-12);
            let pg = point_geometry(&s.chart, u, v).unwrap();
            assert!((pg.mean - s.expected.mean.unwrap()).abs() < 1e-10);
            assert!((pg.mean2 - s.expected.mean2.unwrap()).abs() < 1e-10);
        }
        s
    }

    #[test]
    fn round_sphere_and_small_sphere() {
        let s = check(SpaceForm::DeSitter, AmbientVector::basis(0), 0.0);
        assert_eq!(s.expected.gauss, Some(1.0));
        let s = check(SpaceForm::DeSitter, AmbientVector::basis(0), 1.0);
        assert!((s.expected.gauss.unwrap() - 0.5).abs() < 1e-15);
        match s.expected.spectrum {
            Spectrum::OneType { lambda, b } => {
                assert!((lambda - 0.5f64.sqrt()).abs() < 1e-15);
                assert!((b[0] - 0.5f64.sqrt()).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lorentzian_plane_and_null_slice() {
        let s = check(SpaceForm::AntiDeSitter, AmbientVector::basis(3), 2.0);
        assert!((s.expected.gauss.unwrap() + 0.2).abs() < 1e-15);
        let s = check(SpaceForm::DeSitter, AmbientVector::new(1.0, 0.0, 0.0, 1.0), 1.0);
        assert_eq!(s.expected.verdict, Verdict::InfiniteType);
        assert!(s.expected.gauss.unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        // <a,a> = c τ²
        assert!(matches!(
            umbilical(SpaceForm::DeSitter, AmbientVector::basis(1), 1.0, Params::new()),
            Err(Error::Degenerate(_))
        ));
    }
}
