//! A deliberately non-isoparametric graph-like chart, used as a negative
//! control for the finite-type tests.

use super::{finish, CatalogSurface, Expected, Params};
use crate::ambient::{Ambient, SpaceForm};
use crate::error::Result;
use crate::finite_type::Verdict;
use crate::jet::Jet2;
use crate::surface::{Chart, Domain};

fn profile(base: f64, u: Jet2, v: Jet2) -> Jet2 {
    u.sin() * v.cos() * 0.25 + u * v * v * 0.15 + base
}

pub fn generic_perturbed(sf: SpaceForm, params: Params) -> Result<CatalogSurface> {
    let chart = match sf {
        // x = (sinh f, cosh f · (cos v cos u, cos v sin u, sin v))
        SpaceForm::DeSitter => Chart::new(
            "generic perturbed sphere",
            sf,
            Domain::new((-0.8, 0.8), (-0.6, 0.6)),
            |u, v| {
                let f = profile(0.4, u, v);
                let (sh, ch) = (f.sinh(), f.cosh());
                Ambient([sh, ch * v.cos() * u.cos(), ch * v.cos() * u.sin(), ch * v.sin()])
            },
        ),
        // x = (cosh f cos u, cosh f sin u, sinh f cos v, sinh f sin v)
        SpaceForm::AntiDeSitter => Chart::new(
            "generic perturbed torus",
            sf,
            Domain::new((-0.8, 0.8), (-0.6, 0.6)),
            |u, v| {
                let f = profile(0.9, u, v);
                let (sh, ch) = (f.sinh(), f.cosh());
                Ambient([ch * u.cos(), ch * u.sin(), sh * v.cos(), sh * v.sin()])
            },
        ),
    };
    finish(
        "generic-perturbed",
        params,
        chart,
        Expected::unknown(Verdict::Inconclusive),
        "perturbed chart with non-constant curvatures",
        Vec::new(),
    )
}
