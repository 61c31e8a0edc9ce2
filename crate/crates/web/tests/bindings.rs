use fracseries::special::gamma;
use fracseries_web::{differintegral_curve_json, laplace_text, leibniz_compare_json};
use serde_json::Value;

fn curve(spec: &str, alpha: f64, a: f64, caputo: bool) -> Value {
    serde_json::from_str(&differintegral_curve_json(spec, alpha, a, caputo, 2.0, 50).unwrap()).unwrap()
}

#[test]
fn rl_and_caputo_curves_differ_by_the_initial_value_term() {
    // f = 3 + 2(t - a): the only surviving term is f(a)(t-a)^(-α)/Γ(1-α)
    let (alpha, a) = (0.4, 0.5);
    let rl = curve("poly:3,2", alpha, a, false);
    let cap = curve("poly:3,2", alpha, a, true);
    for ((t, x), y) in rl["t"].as_array().unwrap().iter().zip(rl["value"].as_array().unwrap()).zip(cap["value"].as_array().unwrap()) {
        let h = t.as_f64().unwrap() - a;
        let bridge = 3.0 * h.powf(-alpha) / gamma(1.0 - alpha);
        let d = x.as_f64().unwrap() - y.as_f64().unwrap();
        assert!((d - bridge).abs() <= 1e-12 * (1.0 + bridge.abs()), "{d} vs {bridge}");
    }
}

#[test]
fn comparison_residuals_for_example_two() {
    for alpha in [0.25, 0.5, 0.75] {
        let v: Value =
            serde_json::from_str(&leibniz_compare_json("shifted-poly:0,1", "shifted-poly:0,1", alpha, 1.0, 2.0).unwrap())
                .unwrap();
        let k = 1f64.powf(1.0 - alpha) / gamma(3.0 - alpha);
        let r1 = k * (2.0 - 3.0 * alpha + alpha * alpha);
        assert!((v["r1"].as_f64().unwrap() - r1).abs() < 1e-13);
        let wrong = v["rules"][0]["residual"].as_f64().unwrap();
        assert!((wrong - r1.abs()).abs() < 1e-13);
    }
}

#[test]
fn transform_ops() {
    assert_eq!(laplace_text("const:1", 0.0, "series").unwrap(), "1 * s^(-1)");
    assert_eq!(laplace_text("const:3", 0.7, "caputo").unwrap(), "0");
    assert!(laplace_text("const:1", -1.0, "rl-int").is_err());
}
