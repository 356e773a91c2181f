use lsl_core::catalog::{build, default_suite, CatalogSurface, Params, Spectrum};
use lsl_core::cheng_yau::VectorField;
use lsl_core::finite_type::{constancy_equivalence_check, fit_spectral, tan_defect, tan_residual, Verdict};
use lsl_core::surface::{constancy_scan, Quantity};
use lsl_core::{AmbientVector, LocalJets, Tolerances};

fn surface(name: &str, pairs: &[(&str, &str)]) -> CatalogSurface {
    let params = pairs.iter().fold(Params::new(), |p, (k, v)| p.with(k, *v));
    build(name, &params).unwrap()
}

#[test]
fn fitted_parameters_do_not_depend_on_the_sample() {
    let tol = Tolerances::default();
    for (name, params) in default_suite() {
        let s = build(name, &params).unwrap();
        if s.expected.spectrum.sigma_pi().is_none() {
            continue;
        }
        let fits: Vec<_> = [1, 2, 3]
            .iter()
            .map(|seed| fit_spectral(&s.chart, &s.chart.sample(20, *seed), &tol).unwrap())
            .collect();
        for f in &fits[1..] {
            let scale = 1.0 + fits[0].sigma.abs() + fits[0].pi.abs();
            assert!((f.sigma - fits[0].sigma).abs() < 1e-6 * scale, "{}", s.chart.label());
            assert!((f.pi - fits[0].pi).abs() < 1e-6 * scale, "{}", s.chart.label());
            assert_eq!(f.verdict, fits[0].verdict);
        }
    }
}

#[test]
fn tangential_right_side_vanishes_for_constant_curvatures() {
    let tol = Tolerances::default();
    let zero = AmbientVector::new(0.0, 0.0, 0.0, 0.0);
    for (name, params) in default_suite() {
        let s = build(name, &params).unwrap();
        let h = constancy_scan(&s.chart, Quantity::H, 6, 6, &tol).unwrap();
        let h2 = constancy_scan(&s.chart, Quantity::H2, 6, 6, &tol).unwrap();
        if !(h.constant && h2.constant) {
            assert_eq!(s.name, "generic-perturbed");
            continue;
        }
        for (u, v) in s.chart.sample(10, 4) {
            let lj = LocalJets::new(&s.chart, u, v).unwrap();
            assert!(tan_residual(&lj, 0.0, &zero).unwrap() < 1e-8, "{}", s.chart.label());
        }
    }
}

/// `εcτ² + δ² = ε<a,a>`, so the infinite-type locus is crossed by moving `a`
/// through the light cone, here along `a = (1, 0, 0, s)` at `s = 1`.
#[test]
fn umbilical_sweep_crosses_the_infinite_type_locus() {
    let tol = Tolerances::default();
    for (s, want) in [
        ("0.9", Verdict::OneType),
        ("0.99", Verdict::OneType),
        ("1", Verdict::InfiniteType),
        ("1.01", Verdict::OneType),
        ("1.1", Verdict::OneType),
    ] {
        let surf = surface("umbilical", &[("c", "+1"), ("a", "1,0,0,0"), ("a4", s), ("tau", "1")]);
        let fit = fit_spectral(&surf.chart, &surf.chart.sample(20, 42), &tol).unwrap();
        assert_eq!(fit.verdict, want, "a4 = {s}");
        assert_eq!(surf.expected.verdict, want);
        if let Spectrum::OneType { lambda, .. } = surf.expected.spectrum {
            assert!((fit.one_type.lambda - lambda).abs() < 1e-7);
        }
    }
}

#[test]
fn b_scroll_satisfies_the_null_two_type_relation() {
    for kappa in ["const:1", "poly:1,0,0.25", "poly:0.5,1"] {
        let s = surface("b-scroll", &[("kappa", kappa)]);
        for (u, v) in s.chart.sample(20, 9) {
            let lj = LocalJets::new(&s.chart, u, v).unwrap();
            let hk = 2.0 * lj.mean.value() * (lj.c() + lj.eps * lj.mean2.value());
            let l1 = lj.l1_vector_jet(VectorField::Psi).unwrap().values();
            let l2 = lj.l1_squared_nested().unwrap();
            assert!((l2 - l1 * hk).euclid() < 1e-5, "{kappa}");
        }
    }
}

#[test]
fn constancy_flags_agree_on_two_type_surfaces() {
    let tol = Tolerances::default();
    for (name, params) in default_suite() {
        let s = build(name, &params).unwrap();
        let fit = fit_spectral(&s.chart, &s.chart.sample(20, 42), &tol).unwrap();
        let check = constancy_equivalence_check(&s.chart, fit.verdict, 8, 8, &tol).unwrap();
        if check.hypothesis_met {
            assert!(
                check.h_const && check.h2_const && check.principal_const,
                "{}",
                s.chart.label()
            );
        }
        if s.name == "generic-perturbed" {
            assert!(!check.h_const && !check.h2_const && !check.principal_const);
        }
    }
}

#[test]
fn null_tangential_defects_are_not_hidden_by_the_metric_norm() {
    let s = surface("complex-circle", &[]);
    let lj = LocalJets::new(&s.chart, 0.2, 0.1).unwrap();
    let g = lj.point().g;
    // ξ = (x, 1) with g(ξ, ξ) = 0
    let x = (-g[0][1] + (g[0][1] * g[0][1] - g[0][0] * g[1][1]).sqrt()) / g[0][0];
    let a = lj.push_forward(&[x, 1.0]);
    assert!(tan_residual(&lj, 1.0, &a).unwrap() < 1e-6);
    assert!(tan_defect(&lj, 1.0, &a).unwrap().euclid() > 0.5 * a.euclid());
}
