use fracseries::leibniz::{
    caputo_of_product, correction_r1, leibniz_caputo_corrected, leibniz_caputo_corrected_r2,
    leibniz_caputo_wrong, leibniz_rl, DEFAULT_LEIBNIZ_TERMS,
};
use fracseries::operators::{caputo_derivative, rl_differintegral};
use fracseries::series::series_from_catalog;
use fracseries::special::binom;
use fracseries::{Order, TaylorSeries};
use proptest::prelude::*;

fn poly(c: &[f64], a: f64) -> TaylorSeries {
    series_from_catalog("poly", c, a, 16).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..6)
}

fn fractional(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_filter("non-integer", |a| (a - a.round()).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wrong_rule_error_is_exactly_r1(
        fc in coeffs(),
        mut gc in coeffs(),
        alpha in fractional(0.0, 1.0),
        a in -1.0f64..1.0,
    ) {
        if gc[0].abs() < 0.1 {
            gc[0] = 0.5;
        }
        let (f, g) = (poly(&fc, a), poly(&gc, a));
        let t = a + 1.0;
        let ord = Order::new(alpha).unwrap();
        let f_t = f.recenter(t);
        let wrong = leibniz_caputo_wrong(&f_t, &g, ord, t, DEFAULT_LEIBNIZ_TERMS).unwrap().finite().unwrap();
        let truth = caputo_of_product(&f, &g, ord, t).unwrap();
        let r1 = correction_r1(&f, &f_t, &g, ord, t).unwrap();
        prop_assert!(((truth - wrong) - r1).abs() <= 1e-10, "truth {truth} wrong {wrong} r1 {r1}");
    }

    #[test]
    fn corrected_rule_is_symmetric(
        fc in coeffs(),
        gc in coeffs(),
        alpha in fractional(0.0, 3.0),
        a in -1.0f64..1.0,
        h in 0.1f64..2.0,
    ) {
        let (f, g) = (poly(&fc, a), poly(&gc, a));
        let t = a + h;
        let ord = Order::new(alpha).unwrap();
        let one = leibniz_caputo_corrected(&f, &f.recenter(t), &g, ord, t, 32).unwrap();
        let two = leibniz_caputo_corrected_r2(&f, &g, &g.recenter(t), ord, t, 32).unwrap();
        let (x, y) = (one.rule_value.finite().unwrap(), two.rule_value.finite().unwrap());
        prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()), "{x} vs {y}");
        prop_assert!(one.residual <= 1e-10 * (1.0 + x.abs()));
    }

    #[test]
    fn rl_rule_matches_product_series(
        fc in coeffs(),
        gc in coeffs(),
        alpha in (-2.5f64..3.0).prop_filter("non-integer", |a| (a - a.round()).abs() > 1e-3),
        a in -1.0f64..1.0,
        h in 0.1f64..2.0,
    ) {
        let (f, g) = (poly(&fc, a), poly(&gc, a));
        let t = a + h;
        let ord = Order::new(alpha).unwrap();
        let rule = leibniz_rl(&f.recenter(t), &g, ord, t, 32).unwrap().finite().unwrap();
        let direct = rl_differintegral(&f.mul(&g).unwrap(), ord).eval_finite(t).unwrap();
        prop_assert!((rule - direct).abs() <= 1e-10 * (1.0 + direct.abs()), "{rule} vs {direct}");
    }

    #[test]
    fn integer_order_collapses_to_classical_rule(
        fc in coeffs(),
        gc in coeffs(),
        n in 1usize..4,
        a in -1.0f64..1.0,
        h in 0.1f64..2.0,
    ) {
        let (f, g) = (poly(&fc, a), poly(&gc, a));
        let t = a + h;
        let ord = Order::new(n as f64).unwrap();
        let (f_t, g_t) = (f.recenter(t), g.recenter(t));
        let r = leibniz_caputo_corrected(&f, &f_t, &g, ord, t, 32).unwrap();
        prop_assert_eq!(r.correction_value, 0.0);
        let classical: f64 = (0..=n).map(|j| binom(n, j) * f_t.deriv(j) * g_t.deriv(n - j)).sum();
        let v = r.rule_value.finite().unwrap();
        prop_assert!((v - classical).abs() <= 1e-11 * (1.0 + classical.abs()), "{v} vs {classical}");
    }
}

#[test]
fn limit_from_above_previous_integer() {
    // at α = (n-1)+, the uncorrected rule with g = 1 tends to 0 while the
    // Caputo derivative tends to f^(n-1)(t) - f^(n-1)(a)
    let eps = 1e-6;
    for n in 1..=3usize {
        let alpha = (n - 1) as f64 + eps;
        let ord = Order::new(alpha).unwrap();
        for a in [0.0, 0.7] {
            let f = poly(&[0.3, -1.2, 0.8, 0.5, -0.25], a);
            let one = poly(&[1.0], a);
            for h in [0.5, 1.0, 2.0] {
                let t = a + h;
                let wrong = leibniz_caputo_wrong(&f.recenter(t), &one, ord, t, 32).unwrap().finite().unwrap();
                let truth = caputo_derivative(&f, ord).unwrap().eval_finite(t).unwrap();
                let fd = f.derivative(n - 1).unwrap();
                let limit = fd.eval(t).unwrap() - fd.eval(a).unwrap();
                assert!(wrong.abs() < 1e-3, "n={n} a={a} t={t}: wrong {wrong}");
                assert!((truth - limit).abs() < 1e-3, "n={n} a={a} t={t}: {truth} vs {limit}");
            }
        }
    }
}
