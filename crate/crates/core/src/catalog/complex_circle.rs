//! The complex circle `ψ(z) = k(cos z, sin z)` in H³₁, `k = a + ib`,
//! `a² - b² = -1`.
//!
//! A pair `(z₁, z₂) ∈ C²` is stored as `(Im z₁, Im z₂, Re z₁, Re z₂)`; with the
//! metric signs `(-, -, +, +)` this makes `<X, Y> = Re(X₁Y₁ + X₂Y₂)`, so
//! `<ψ, ψ> = Re k² = -1`.

use std::sync::Arc;

use super::{finish, fmt_r, CatalogSurface, Expected, Params, Spectrum};
use crate::ambient::{Ambient, AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::finite_type::Verdict;
use crate::surface::{Chart, Domain, ShapeKind};

/// `(k cos z, k sin z)` as `(re, im)` pairs of any scalar.
fn circle<T: crate::jet::Scalar>(a: f64, b: f64, cos_z: (T, T), sin_z: (T, T)) -> Ambient<T> {
    let mul = |(re, im): (T, T)| (re * a - im * b, im * a + re * b);
    let (z1, z2) = (mul(cos_z), mul(sin_z));
    Ambient([z1.1, z2.1, z1.0, z2.0])
}

pub fn complex_circle(a: f64, b: f64, params: Params) -> Result<CatalogSurface> {
    if (a * a - b * b + 1.0).abs() > 1e-12 || a * b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidComplexRadius { a, b });
    }
    let chart = Chart::new(
        format!("complex circle k = {} + {}i", fmt_r(a), fmt_r(b)),
        SpaceForm::AntiDeSitter,
        Domain::new((-1.0, 1.0), (-0.5, 0.5)),
        move |u, v| {
            let cos_z = (u.cos() * v.cosh(), -(u.sin() * v.sinh()));
            let sin_z = (u.sin() * v.cosh(), u.cos() * v.sinh());
            circle(a, b, cos_z, sin_z)
        },
    );

    let m = a * a + b * b;
    let alpha = 2.0 * a * b / m;
    let beta = 1.0 / m;
    let pi = 4.0 / (m * m);
    let expected = Expected {
        eps: Some(1.0),
        mean: Some(alpha),
        mean2: Some(1.0),
        gauss: Some(0.0),
        shape_kind: Some(ShapeKind::TypeII),
        shape: format!(
            "S = [[{0}, -{1}], [{1}, {0}]] in a pseudo-orthonormal frame",
            fmt_r(alpha),
            fmt_r(beta)
        ),
        spectrum: Spectrum::ComplexPair { sigma: 0.0, pi },
        verdict: Verdict::ComplexPair,
        // N = -i k̄ (cos z, sin z), i.e. the circle with k replaced by -b - ia
        normal: Some(Arc::new(move |u: f64, v: f64| -> AmbientVector {
            let cos_z = (u.cos() * v.cosh(), -u.sin() * v.sinh());
            let sin_z = (u.sin() * v.cosh(), u.cos() * v.sinh());
            circle(-b, -a, cos_z, sin_z)
        })),
        // E₁ = (b, a)/(a²+b²) timelike, E₂ = (a, -b)/(a²+b²) spacelike
        frame: Some(Arc::new(move |_, _| {
            ([[b / m, a / m], [a / m, -b / m]], [[alpha, -beta], [beta, alpha]])
        })),
    };
    finish(
        "complex-circle",
        params,
        chart,
        expected,
        "complex circle of radius k = a + ib",
        Vec::new(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{classify_shape, point_geometry, shape_in_frame, ShapeClass};

    #[test]
    fn reference_radius() {
        let s = complex_circle(0.75, 1.25, Params::new()).unwrap();
        let pg = point_geometry(&s.chart, 0.3, 0.1).unwrap();
        assert!((pg.mean - 15.0 / 17.0).abs() < 1e-12);
        assert!(pg.gauss.abs() < 1e-12);
        match classify_shape(&pg, 1e-7) {
            ShapeClass::TypeII { kappa, b } => {
                assert!((kappa - 15.0 / 17.0).abs() < 1e-12);
                assert!((b - 8.0 / 17.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let (basis, want) = (s.expected.frame.as_ref().unwrap())(0.3, 0.1);
        let got = shape_in_frame(&pg, &basis).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((got[i][j] - want[i][j]).abs() < 1e-12, "{got:?}");
            }
        }
    }

    #[test]
    fn radius_constraint() {
        assert!(matches!(
            complex_circle(1.0, 1.0, Params::new()),
            Err(Error::InvalidComplexRadius { .. })
        ));
        assert!(matches!(
            complex_circle(0.0, 1.0, Params::new()),
            Err(Error::InvalidComplexRadius { .. })
        ));
    }
}
