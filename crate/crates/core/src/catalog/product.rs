//! Standard pseudo-Riemannian products: level sets of `f(x) = <Dx, x>` in M_c,
//! where D is the orthogonal projection onto the coordinate plane
//! span{e₁, e_j}.
//!
//! On `f = ρr²` the surface splits as a curve `<y,y> = ρr²` in the D-plane
//! times a curve `<z,z> = c - ρr²` in the complementary plane.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{embed, finish, fmt_r, CatalogSurface, Expected, Params, Spectrum};
use crate::ambient::{AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::finite_type::Verdict;
use crate::jet::Jet2;
use crate::surface::{Chart, Domain, ShapeKind};

/// Kind of a plane conic `s₁y₁² + s₂y₂² = L`, named as in the product tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductFactor {
    /// Circle in a definite positive plane.
    S1,
    /// Circle in a negative definite plane.
    H1Timelike,
    /// Hyperbola with timelike tangent (mixed plane, L > 0).
    S1Timelike,
    /// Hyperbola with spacelike tangent (mixed plane, L < 0).
    H1,
}

impl ProductFactor {
    fn classify(s: [f64; 2], level: f64) -> Result<Self> {
        if level == 0.0 {
            return Err(Error::Degenerate("factor curve collapses to null lines".into()));
        }
        match (s[0] * s[1] > 0.0, s[0] > 0.0, level > 0.0) {
            (true, true, true) => Ok(ProductFactor::S1),
            (true, false, false) => Ok(ProductFactor::H1Timelike),
            (false, _, true) => Ok(ProductFactor::S1Timelike),
            (false, _, false) => Ok(ProductFactor::H1),
            _ => Err(Error::EmptySlice(format!(
                "no real points on a definite plane at level {level}"
            ))),
        }
    }

    pub fn name(self, radius: f64) -> String {
        let r = fmt_r(radius);
        match self {
            ProductFactor::S1 => format!("S1({r})"),
            ProductFactor::H1Timelike => format!("H1_1(-{r})"),
            ProductFactor::S1Timelike => format!("S1_1({r})"),
            ProductFactor::H1 => format!("H1(-{r})"),
        }
    }

    /// Parametrization by arc-type parameter t, scaled to radius √|L|.
    fn curve(self, s: [f64; 2], level: f64, t: Jet2) -> [Jet2; 2] {
        let r = level.abs().sqrt();
        let y = match self {
            ProductFactor::S1 | ProductFactor::H1Timelike => [t.cos(), t.sin()],
            // the coordinate whose sign matches the level carries cosh
            _ => {
                if (s[0] > 0.0) == (level > 0.0) {
                    [t.cosh(), t.sinh()]
                } else {
                    [t.sinh(), t.cosh()]
                }
            }
        };
        y.map(|x| x * r)
    }
}

/// One row of the product tables: factor kinds and the second radius as a
/// function of the first.
struct TableRow {
    c: f64,
    label: &'static str,
    flags: &'static str,
    rho: f64,
    first: ProductFactor,
    second: ProductFactor,
    second_radius: fn(f64) -> Option<f64>,
}

fn sqrt_pos(x: f64) -> Option<f64> {
    (x > 0.0).then(|| x.sqrt())
}

const TABLE: [TableRow; 8] = [
    TableRow {
        c: 1.0,
        label: "H1(-r) x S1(sqrt(1+r^2))",
        flags: "d2",
        rho: -1.0,
        first: ProductFactor::H1,
        second: ProductFactor::S1,
        second_radius: |r| sqrt_pos(1.0 + r * r),
    },
    TableRow {
        c: 1.0,
        label: "S1_1(r) x S1(sqrt(1-r^2))",
        flags: "d2",
        rho: 1.0,
        first: ProductFactor::S1Timelike,
        second: ProductFactor::S1,
        second_radius: |r| sqrt_pos(1.0 - r * r),
    },
    TableRow {
        c: 1.0,
        label: "S1(r) x S1_1(sqrt(1-r^2))",
        flags: "d3/d4",
        rho: 1.0,
        first: ProductFactor::S1,
        second: ProductFactor::S1Timelike,
        second_radius: |r| sqrt_pos(1.0 - r * r),
    },
    TableRow {
        c: 1.0,
        label: "S1(r) x H1(-sqrt(r^2-1))",
        flags: "d3/d4",
        rho: 1.0,
        first: ProductFactor::S1,
        second: ProductFactor::H1,
        second_radius: |r| sqrt_pos(r * r - 1.0),
    },
    TableRow {
        c: -1.0,
        label: "H1_1(-r) x S1(sqrt(r^2-1))",
        flags: "d2",
        rho: -1.0,
        first: ProductFactor::H1Timelike,
        second: ProductFactor::S1,
        second_radius: |r| sqrt_pos(r * r - 1.0),
    },
    TableRow {
        c: -1.0,
        label: "S1_1(r) x H1(-sqrt(1+r^2))",
        flags: "d3",
        rho: 1.0,
        first: ProductFactor::S1Timelike,
        second: ProductFactor::H1,
        second_radius: |r| sqrt_pos(1.0 + r * r),
    },
    TableRow {
        c: -1.0,
        // printed with an S1 second factor; the level set forces a timelike hyperbola
        label: "H1(-r) x S1_1(sqrt(r^2-1))",
        flags: "d3",
        rho: -1.0,
        first: ProductFactor::H1,
        second: ProductFactor::S1Timelike,
        second_radius: |r| sqrt_pos(r * r - 1.0),
    },
    TableRow {
        c: -1.0,
        label: "H1(-r) x H1(-sqrt(1-r^2))",
        flags: "d3",
        rho: -1.0,
        first: ProductFactor::H1,
        second: ProductFactor::H1,
        second_radius: |r| sqrt_pos(1.0 - r * r),
    },
];

/// How a built product corresponds to a table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMatch {
    pub row: String,
    pub flags: String,
    /// The row's parameter r (radius of its first factor).
    pub r: f64,
    pub rho: f64,
    /// The row lists the complementary-plane curve first.
    pub reversed: bool,
}

/// Rows listing the same flag δ_j are preferred over rows that only share
/// the factor signature.
fn match_table(c: f64, j: usize, d: (ProductFactor, f64), comp: (ProductFactor, f64)) -> Option<TableMatch> {
    let close = |x: f64, y: Option<f64>| y.is_some_and(|y| (x - y).abs() <= 1e-12 * (1.0 + x.abs()));
    let flag = format!("d{j}");
    let mut rows: Vec<&TableRow> = TABLE.iter().filter(|row| row.c == c).collect();
    rows.sort_by_key(|row| !row.flags.contains(&flag));
    rows.into_iter().find_map(|row| {
        let direct = row.first == d.0 && row.second == comp.0 && close(comp.1, (row.second_radius)(d.1));
        let reversed = row.first == comp.0 && row.second == d.0 && close(d.1, (row.second_radius)(comp.1));
        (direct || reversed).then(|| TableMatch {
            row: row.label.to_string(),
            flags: row.flags.to_string(),
            r: if direct { d.1 } else { comp.1 },
            rho: row.rho,
            reversed: !direct,
        })
    })
}

pub fn standard_product(sf: SpaceForm, j: usize, rho: f64, r: f64, params: Params) -> Result<CatalogSurface> {
    let c = sf.c();
    if !(2..=4).contains(&j) {
        return Err(Error::bad_param("j", "must be 2, 3 or 4"));
    }
    if !(r > 0.0) {
        return Err(Error::bad_param("r", "must be positive"));
    }
    if (r * r - c * rho).abs() < 1e-12 {
        return Err(Error::Degenerate(format!("r^2 - c rho = 0 for r = {r}")));
    }
    let signs = sf.signs();
    let d_idx = [0, j - 1];
    let comp_idx: Vec<usize> = (1..4).filter(|&i| i != j - 1).collect();
    let comp_idx = [comp_idx[0], comp_idx[1]];
    let d_signs = d_idx.map(|i| signs[i]);
    let comp_signs = comp_idx.map(|i| signs[i]);
    let d_level = rho * r * r;
    let comp_level = c - d_level;
    let d_kind = ProductFactor::classify(d_signs, d_level)?;
    let comp_kind = ProductFactor::classify(comp_signs, comp_level)?;
    let d_radius = d_level.abs().sqrt();
    let comp_radius = comp_level.abs().sqrt();

    let mut notes = vec![format!("{} x {}", d_kind.name(d_radius), comp_kind.name(comp_radius))];
    match match_table(c, j, (d_kind, d_radius), (comp_kind, comp_radius)) {
        Some(m) => {
            notes.push(format!(
                "table row {} (flags {}, rho {:+}, r = {}){}",
                m.row,
                m.flags,
                m.rho,
                fmt_r(m.r),
                if m.reversed {
                    ", factors listed in the other order"
                } else {
                    ""
                }
            ));
            if m.rho != rho {
                notes.push(format!("measured rho {rho:+} differs from the table's {:+}", m.rho));
            }
        }
        None => notes.push("no matching table row".into()),
    }

    let e = |i: usize| AmbientVector::basis(i);
    let chart = Chart::new(
        format!("product {} x {}", d_kind.name(d_radius), comp_kind.name(comp_radius)),
        sf,
        Domain::new((-1.0, 1.0), (-1.0, 1.0)),
        move |u, v| {
            let y = d_kind.curve(d_signs, d_level, u);
            let z = comp_kind.curve(comp_signs, comp_level, v);
            embed(
                &AmbientVector::ZERO,
                &[
                    (y[0], e(d_idx[0])),
                    (y[1], e(d_idx[1])),
                    (z[0], e(comp_idx[0])),
                    (z[1], e(comp_idx[1])),
                ],
            )
        },
    );

    // Measured level of the projection form, and of the form as printed
    // (c x₁² - δ₂x₂² + δ₃x₃² + δ₄x₄²), at the domain centre.
    let x0 = chart.position(0.0, 0.0);
    let project = move |x: &AmbientVector| {
        let mut out = AmbientVector::ZERO;
        for i in d_idx {
            out[i] = x[i];
        }
        out
    };
    let measured = sf.inner(&project(&x0), &x0);
    let delta = [0.0, (j == 2) as u8 as f64, (j == 3) as u8 as f64, (j == 4) as u8 as f64];
    let printed =
        |x: &AmbientVector| c * x[0] * x[0] - delta[1] * x[1] * x[1] + delta[2] * x[2] * x[2] + delta[3] * x[3] * x[3];
    let printed_values: Vec<f64> = chart
        .grid(5, 5)
        .iter()
        .map(|p| printed(&chart.position(p.u, p.v)))
        .collect();
    let spread = printed_values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - printed_values.iter().copied().fold(f64::INFINITY, f64::min);
    notes.push(format!("<Dx,x> = {} on the surface", fmt_r(measured)));
    if spread > 1e-9 {
        notes.push(format!(
            "the printed level function is not constant here (spread {spread:.3e})"
        ));
    } else {
        notes.push(format!(
            "the printed level function equals {} here",
            fmt_r(printed_values[0])
        ));
    }

    let k = r * (rho - c * r * r).abs().sqrt();
    let eps = (rho - c * r * r).signum();
    let kd = -(1.0 - rho * c * r * r) / k;
    let kc = rho * c * r * r / k;
    let mean = 0.5 * eps * (kd + kc);
    let mean2 = kd * kc;
    let lambda1 = 2.0 * eps * mean2 * (rho * c * r * r - 1.0) / k + 2.0 * eps * c * mean;
    let lambda2 = 2.0 * eps * mean2 * rho * c * r * r / k + 2.0 * eps * c * mean;

    let position = chart.clone();
    let expected = Expected {
        eps: Some(eps),
        mean: Some(mean),
        mean2: Some(mean2),
        gauss: Some(c + eps * mean2),
        shape_kind: Some(ShapeKind::TypeI),
        shape: format!("S = diag({}, {}) on (D-plane, complement)", fmt_r(kd), fmt_r(kc)),
        spectrum: Spectrum::TwoType { lambda1, lambda2 },
        verdict: Verdict::TwoType,
        normal: Some(Arc::new(move |u, v| {
            let x = position.position(u, v);
            (project(&x) - x * (rho * c * r * r)) * (1.0 / k)
        })),
        frame: Some(Arc::new(move |_, _| ([[1.0, 0.0], [0.0, 1.0]], [[kd, 0.0], [0.0, kc]]))),
    };
    finish(
        "product",
        params,
        chart,
        expected,
        "standard product, level set of the projection form",
        notes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::point_geometry;

    fn build(sf: SpaceForm, j: usize, rho: f64, r: f64) -> CatalogSurface {
        standard_product(sf, j, rho, r, Params::new()).unwrap()
    }

    #[test]
    fn pipeline_matches_closed_form() {
        for (sf, j, rho, r) in [
            (SpaceForm::DeSitter, 2, 1.0, 0.6),
            (SpaceForm::DeSitter, 2, -1.0, 0.6),
            (SpaceForm::DeSitter, 3, 1.0, 0.5),
            (SpaceForm::AntiDeSitter, 2, -1.0, 2.0),
            (SpaceForm::AntiDeSitter, 3, 1.0, 0.7),
            (SpaceForm::AntiDeSitter, 3, -1.0, 0.5),
        ] {
            let s = build(sf, j, rho, r);
            let pg = point_geometry(&s.chart, 0.2, -0.3).unwrap();
            assert!((pg.mean - s.expected.mean.unwrap()).abs() < 1e-10, "{:?}", s.notes);
            assert!((pg.mean2 - s.expected.mean2.unwrap()).abs() < 1e-10);
            assert_eq!(pg.eps, s.expected.eps.unwrap());
        }
    }

    #[test]
    fn table_rows() {
        let s = build(SpaceForm::DeSitter, 3, 1.0, 0.5);
        assert!(s
            .notes
            .iter()
            .any(|n| n.contains("S1(r) x S1_1(sqrt(1-r^2))") && n.contains("other order")));
        let s = build(SpaceForm::AntiDeSitter, 2, -1.0, 2.0);
        assert!(s.notes.iter().any(|n| n.contains("H1_1(-r) x S1(sqrt(r^2-1))")));
        let s = build(SpaceForm::AntiDeSitter, 3, -1.0, 0.5);
        assert!(s.notes.iter().any(|n| n.contains("H1(-r) x H1(-sqrt(1-r^2))")));
    }

    #[test]
    fn empty_and_degenerate() {
        // c = 1, δ₂: the D-plane is mixed so always nonempty; δ₃ with ρ = 1, r = 1 is degenerate
        assert!(matches!(
            standard_product(SpaceForm::DeSitter, 3, 1.0, 1.0, Params::new()),
            Err(Error::Degenerate(_))
        ));
        // c = -1, δ₂ plane is negative definite: ρ = 1 leaves no points
        assert!(matches!(
            standard_product(SpaceForm::AntiDeSitter, 2, 1.0, 0.5, Params::new()),
            Err(Error::EmptySlice(_))
        ));
    }
}
