mod common;

use common::linspace;
use fracseries::operators::{caputo_derivative, rl_differintegral};
use fracseries::quadrature::{
    caputo_quad, doubling_estimates, rl_derivative_quad, rl_integral_quad, rl_integral_quad_series,
};
use fracseries::series::series_from_catalog;
use fracseries::{Order, TaylorSeries};

fn functions(a: f64) -> Vec<(&'static str, TaylorSeries)> {
    vec![
        ("poly6", series_from_catalog("poly", &[0.5, -1.0, 0.25, 1.5, -0.75, 0.3, 0.2], a, 64).unwrap()),
        ("exp", series_from_catalog("exp", &[1.0], a, 64).unwrap()),
        ("sin", series_from_catalog("sin", &[1.0], a, 64).unwrap()),
    ]
}

fn close(series: f64, oracle: f64) -> bool {
    (series - oracle).abs() <= 1e-8 * (1.0 + oracle.abs())
}

#[test]
fn series_agree_with_quadrature() {
    for a in [0.0, 0.8] {
        for (name, f) in functions(a) {
            for alpha in [0.3, 0.5, 1.5, 2.7] {
                let ord = Order::new(alpha).unwrap();
                let rl = rl_differintegral(&f, ord);
                let cap = caputo_derivative(&f, ord).unwrap();
                let int = rl_differintegral(&f, Order::new(-alpha).unwrap());
                for t in linspace(a + 0.1, a + 2.0, 8) {
                    let q = rl_derivative_quad(&f, ord, t, 8).unwrap().value;
                    let s = rl.eval_finite(t).unwrap();
                    assert!(close(s, q), "RL {name} a={a} alpha={alpha} t={t}: {s} vs {q}");
                    let q = caputo_quad(&f, ord, t, 8).unwrap().value;
                    let s = cap.eval_finite(t).unwrap();
                    assert!(close(s, q), "C {name} a={a} alpha={alpha} t={t}: {s} vs {q}");
                    let q = rl_integral_quad_series(&f, alpha, t, 8).unwrap().value;
                    let s = int.eval_finite(t).unwrap();
                    assert!(close(s, q), "I {name} a={a} alpha={alpha} t={t}: {s} vs {q}");
                }
            }
        }
    }
}

#[test]
fn doubling_shrinks_estimates() {
    type Integrand = (&'static str, fn(f64) -> f64);
    let integrands: [Integrand; 3] =
        [("poly6", |x| 0.5 - x + 0.25 * x.powi(2) + 0.2 * x.powi(6)), ("exp", f64::exp), ("sin", f64::sin)];
    for (name, f) in integrands {
        for alpha in [0.3, 0.5, 1.5, 2.7] {
            for t in linspace(0.1, 2.0, 8) {
                let est = doubling_estimates(f, alpha, 0.0, t, 8, 3).unwrap();
                let floor = 1e-13 * (1.0 + rl_integral_quad(f, alpha, 0.0, t, 8).unwrap().value.abs());
                for w in est.windows(2) {
                    // strictly smaller until the rounding floor is reached
                    assert!(w[1] < w[0] || w[0].max(w[1]) < floor, "{name} alpha={alpha} t={t}: {est:?}");
                }
            }
        }
    }
}
