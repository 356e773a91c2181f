use lsl_core::catalog::{build, default_suite};
use lsl_core::verify::{verify_surface, VerifyConfig};
use lsl_core::Tolerances;

#[test]
fn every_catalog_entry_passes_the_suite() {
    let tol = Tolerances::default();
    let mut failures = Vec::new();
    for (name, params) in default_suite() {
        let surface = build(name, &params).unwrap();
        let report = verify_surface(&surface, &VerifyConfig::default(), &tol).unwrap();
        assert_eq!(
            report.fit.verdict,
            surface.expected.verdict,
            "{}",
            surface.chart.label()
        );
        failures.extend(
            report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: {} = {:e}", surface.chart.label(), c.name, c.max_residual)),
        );
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn verification_is_deterministic() {
    let tol = Tolerances::default();
    let surface = build("b-scroll", &Default::default()).unwrap();
    let config = VerifyConfig::default();
    let a = verify_surface(&surface, &config, &tol).unwrap();
    let b = verify_surface(&surface, &config, &tol).unwrap();
    assert_eq!(a, b);
}
