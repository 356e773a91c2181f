use lsl_core::catalog::{build, default_suite};
use lsl_core::jet::{Jet2, Var, MAX_ORDER};
use proptest::prelude::*;

const N: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

fn jet() -> impl Strategy<Value = Jet2> {
    prop::collection::vec(-1.0f64..1.0, N).prop_map(|c| Jet2::from_coeffs(MAX_ORDER, &c).unwrap())
}

fn positive_jet() -> impl Strategy<Value = Jet2> {
    (jet(), 1.5f64..3.0).prop_map(|(j, shift)| j + shift)
}

fn assert_close(a: &Jet2, b: &Jet2, tol: f64) {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
    }
}

/// Truncated product by direct double sum over monomials.
fn naive_product(a: &Jet2, b: &Jet2) -> Vec<f64> {
    let mut out = vec![0.0; N];
    let mut k = 0;
    for deg in 0..=MAX_ORDER {
        for i in (0..=deg).rev() {
            let j = deg - i;
            let mut acc = 0.0;
            for i1 in 0..=i {
                for j1 in 0..=j {
                    acc += a.coeff(i1, j1) * b.coeff(i - i1, j - j1);
                }
            }
            out[k] = acc;
            k += 1;
        }
    }
    out
}

proptest! {
    #[test]
    fn product_matches_monomial_sum(a in jet(), b in jet()) {
        let p = a * b;
        for (x, y) in p.coeffs().iter().zip(naive_product(&a, &b)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_laws(a in jet(), b in jet(), c in jet()) {
        assert_close(&((a + b) * c), &(a * c + b * c), 1e-12);
        assert_close(&((a * b) * c), &(a * (b * c)), 1e-12);
        assert_close(&(a * b), &(b * a), 1e-12);
    }

    #[test]
    fn quotient_and_sqrt(a in jet(), b in positive_jet()) {
        assert_close(&((a * b).checked_div(&b).unwrap()), &a, 1e-10);
        assert_close(&(b.sqrt() * b.sqrt()), &b, 1e-12);
        assert_close(&(b.recip() * b), &Jet2::constant(1.0, MAX_ORDER), 1e-12);
    }

    #[test]
    fn transcendental_identities(a in jet()) {
        let one = Jet2::constant(1.0, MAX_ORDER);
        assert_close(&(a.sin() * a.sin() + a.cos() * a.cos()), &one, 1e-12);
        assert_close(&(a.cosh() * a.cosh() - a.sinh() * a.sinh()), &one, 1e-10);
        assert_close(&(a.exp() * (-a).exp()), &one, 1e-10);
        assert_close(&a.powi(3), &(a * a * a), 1e-12);
    }

    #[test]
    fn derivative_is_a_derivation(a in jet(), b in jet()) {
        for var in [Var::U, Var::V] {
            let lhs = (a * b).derivative(var).unwrap();
            let rhs = a.derivative(var).unwrap() * b + a * b.derivative(var).unwrap();
            assert_close(&lhs, &rhs, 1e-12);
        }
        let uv = a.derivative(Var::U).unwrap().derivative(Var::V).unwrap();
        let vu = a.derivative(Var::V).unwrap().derivative(Var::U).unwrap();
        assert_close(&uv, &vu, 0.0);
    }

    /// sin(u)·exp(v) and sin(u + v) have closed-form partials of every order.
    #[test]
    fn partials_of_closed_forms(u0 in -2.0f64..2.0, v0 in -2.0f64..2.0) {
        let u = Jet2::variable(Var::U, u0, MAX_ORDER).unwrap();
        let v = Jet2::variable(Var::V, v0, MAX_ORDER).unwrap();
        let sep = u.sin() * v.exp();
        let diag = (u + v).sin();
        let dsin = |x: f64, k: usize| [x.sin(), x.cos(), -x.sin(), -x.cos()][k % 4];
        for a in 0..=MAX_ORDER {
            for b in 0..=MAX_ORDER - a {
                prop_assert!((sep.partial(a, b).unwrap() - dsin(u0, a) * v0.exp()).abs() < 1e-12);
                prop_assert!((diag.partial(a, b).unwrap() - dsin(u0 + v0, a + b)).abs() < 1e-12);
            }
        }
    }
}

/// Chart derivatives against central differences with step 1e-5 on 100 seeded
/// points per catalog surface. First partials use values; second partials use
/// differences of first-order jets evaluated at the shifted points, since value
/// second differences at this step are limited by roundoff to about 4ε|x|/h².
#[test]
fn chart_derivatives_match_central_differences() {
    let h = 1e-5;
    for (name, params) in default_suite() {
        let chart = build(name, &params).unwrap().chart;
        for (u, v) in chart.sample(100, 8) {
            let j = chart.jet(u, v, 2).unwrap();
            let p = |du: f64, dv: f64| chart.position(u + du, v + dv);
            let d1 = |du: f64, dv: f64, var: Var| {
                let x = chart.jet(u + du, v + dv, 1).unwrap();
                x.map(|c| c.derivative(var).unwrap().value())
            };
            for i in 0..4 {
                let fu = (p(h, 0.0)[i] - p(-h, 0.0)[i]) / (2.0 * h);
                let fv = (p(0.0, h)[i] - p(0.0, -h)[i]) / (2.0 * h);
                let fuu = (d1(h, 0.0, Var::U)[i] - d1(-h, 0.0, Var::U)[i]) / (2.0 * h);
                let fuv = (d1(0.0, h, Var::U)[i] - d1(0.0, -h, Var::U)[i]) / (2.0 * h);
                let fvv = (d1(0.0, h, Var::V)[i] - d1(0.0, -h, Var::V)[i]) / (2.0 * h);
                let pairs = [
                    (fu, j[i].partial(1, 0).unwrap()),
                    (fv, j[i].partial(0, 1).unwrap()),
                    (fuu, j[i].partial(2, 0).unwrap()),
                    (fuv, j[i].partial(1, 1).unwrap()),
                    (fvv, j[i].partial(0, 2).unwrap()),
                ];
                for (fd, jet) in pairs {
                    assert!(
                        (fd - jet).abs() < 1e-6,
                        "{}: {fd} vs {jet} at ({u}, {v})",
                        chart.label()
                    );
                }
                // value second differences agree within their own roundoff floor
                let vuu = (p(h, 0.0)[i] - 2.0 * p(0.0, 0.0)[i] + p(-h, 0.0)[i]) / (h * h);
                let floor = 8.0 * f64::EPSILON * (1.0 + p(0.0, 0.0).euclid()) / (h * h);
                assert!((vuu - j[i].partial(2, 0).unwrap()).abs() < floor);
            }
        }
    }
}
