use lsl_core::catalog::{build, default_suite, CatalogSurface, Params};
use lsl_core::cheng_yau::{l1, product_rule_check, ScalarField};
use lsl_core::mat2;
use lsl_core::surface::{point_geometry, Chart};
use lsl_core::{AmbientVector, LocalJets};
use proptest::prelude::*;
use rayon::prelude::*;

fn surface(name: &str, pairs: &[(&str, &str)]) -> CatalogSurface {
    let params = pairs.iter().fold(Params::new(), |p, (k, v)| p.with(k, *v));
    build(name, &params).unwrap()
}

fn generic() -> Chart {
    surface("generic-perturbed", &[]).chart
}

/// `Σ (f L₁g - g L₁f) dA` over an `n × n` midpoint grid.
fn l1_antisymmetric_part(chart: &Chart, f: &ScalarField, g: &ScalarField, n: usize) -> (f64, f64) {
    let dom = chart.domain();
    let (du, dv) = ((dom.u.1 - dom.u.0) / n as f64, (dom.v.1 - dom.v.0) / n as f64);
    let cells: Vec<(f64, f64)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let u = dom.u.0 + (k / n) as f64 * du + du / 2.0;
            let v = dom.v.0 + (k % n) as f64 * dv + dv / 2.0;
            let lj = LocalJets::new(chart, u, v).unwrap();
            let (fj, gj) = (f.eval(&lj).unwrap(), g.eval(&lj).unwrap());
            let area = mat2::det(&mat2::values(&lj.metric)).abs().sqrt() * du * dv;
            let a = fj.value() * lj.l1_jet(&gj).unwrap().value() * area;
            let b = gj.value() * lj.l1_jet(&fj).unwrap().value() * area;
            (a - b, a.abs() + b.abs())
        })
        .collect();
    cells.iter().fold((0.0, 0.0), |(s, m), (d, a)| (s + d, m + a))
}

#[test]
fn l1_is_symmetric_on_bump_fields() {
    let charts = [
        generic(),
        surface("b-scroll", &[("kappa", "poly:1,0,0.25")]).chart,
        surface("product", &[("c", "-1"), ("j", "3"), ("rho", "1"), ("r", "0.7")]).chart,
        surface("complex-circle", &[]).chart,
    ];
    for chart in charts {
        let dom = chart.domain();
        let (cu, cv) = dom.center();
        let (ru, rv) = ((dom.u.1 - dom.u.0) / 2.0, (dom.v.1 - dom.v.0) / 2.0);
        let f = ScalarField::bump((cu - 0.2 * ru, cv), (0.6 * ru, 0.7 * rv));
        let g = ScalarField::bump((cu + 0.1 * ru, cv + 0.1 * rv), (0.7 * ru, 0.6 * rv));
        let (defect, mass) = l1_antisymmetric_part(&chart, &f, &g, 200);
        assert!(mass > 1e-3, "{}: bumps do not interact", chart.label());
        assert!(defect.abs() < 1e-3, "{}: {defect} (mass {mass})", chart.label());
    }
}

#[test]
fn orientation_flip_is_consistent() {
    for (name, params) in default_suite() {
        let chart = build(name, &params).unwrap().chart;
        let flipped = chart.swapped();
        for (u, v) in chart.sample(5, 3) {
            let a = point_geometry(&chart, u, v).unwrap();
            let b = point_geometry(&flipped, v, u).unwrap();
            assert!((a.normal + b.normal).euclid() < 1e-12);
            assert!((a.mean + b.mean).abs() < 1e-12);
            assert!((a.mean2 - b.mean2).abs() < 1e-12);
            assert!((a.gauss - b.gauss).abs() < 1e-12);
            let e = ScalarField::coordinate(AmbientVector::basis(2));
            let (la, lb) = (l1(&e, &chart, u, v).unwrap(), l1(&e, &flipped, v, u).unwrap());
            assert!((la + lb).abs() < 1e-10 * (1.0 + la.abs()));
        }
    }
}

#[test]
fn gauss_equation_on_the_generic_chart() {
    let chart = generic();
    for (u, v) in chart.sample(30, 5) {
        let lj = LocalJets::new(&chart, u, v).unwrap();
        let k = lj.c() + lj.eps * lj.mean2.value();
        assert!((lj.intrinsic_gauss().unwrap() - k).abs() < 1e-6 * (1.0 + k.abs()));
    }
}

fn point_on(chart: &Chart) -> impl Strategy<Value = (f64, f64)> {
    let d = chart.domain();
    (d.u.0..d.u.1, d.v.0..d.v.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l1_is_linear((u, v) in point_on(&generic()), alpha in -3.0f64..3.0, beta in -3.0f64..3.0, i in 0usize..4) {
        let chart = generic();
        let f = ScalarField::coordinate(AmbientVector::basis(i));
        let g = ScalarField::normal_coordinate(AmbientVector::basis((i + 1) % 4));
        let (lf, lg) = (l1(&f, &chart, u, v).unwrap(), l1(&g, &chart, u, v).unwrap());
        let lin = l1(&ScalarField::linear(alpha, &f, beta, &g), &chart, u, v).unwrap();
        prop_assert!((lin - alpha * lf - beta * lg).abs() < 1e-10 * (1.0 + (alpha * lf).abs() + (beta * lg).abs()));
    }

    #[test]
    fn product_rule_on_mixed_fields((u, v) in point_on(&generic()), i in 0usize..4, j in 0usize..4) {
        let chart = generic();
        let f = ScalarField::coordinate(AmbientVector::basis(i));
        let g = ScalarField::normal_coordinate(AmbientVector::basis(j));
        prop_assert!(product_rule_check(&f, &g, &chart, u, v).unwrap() < 1e-9);
        let h = ScalarField::mean_curvature();
        let one = ScalarField::constant(1.0);
        prop_assert_eq!(product_rule_check(&one, &h, &chart, u, v).unwrap(), 0.0);
    }

    #[test]
    fn shape_operator_is_self_adjoint(k in 0usize..15, x in prop::array::uniform2(-1.0f64..1.0), y in prop::array::uniform2(-1.0f64..1.0), t in 0.0f64..1.0) {
        let (name, params) = default_suite().swap_remove(k);
        let chart = build(name, &params).unwrap().chart;
        let d = chart.domain();
        let (u, v) = (d.u.0 + t * (d.u.1 - d.u.0), d.v.0 + (1.0 - t) * (d.v.1 - d.v.0));
        let pg = point_geometry(&chart, u, v).unwrap();
        let (sx, sy) = (mat2::apply(&pg.shape, &x), mat2::apply(&pg.shape, &y));
        let (a, b) = (pg.g_inner(&sx, &y), pg.g_inner(&x, &sy));
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }
}
