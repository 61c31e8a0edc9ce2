//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns JSON
//! or text. The logic lives in the `*_json` / `*_text` functions so it can be
//! tested natively.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use fracseries::funcspec::FuncSpec;
use fracseries::laplace::{
    laplace_caputo, laplace_rl_derivative, laplace_rl_integral, laplace_standard, LaplaceExpr, LaplaceSource,
};
use fracseries::leibniz::{compare_rule, LeibnizRule, DEFAULT_LEIBNIZ_TERMS};
use fracseries::operators::{caputo_extended, rl_differintegral};
use fracseries::series::{eval_frac_series, DEFAULT_TRUNCATION};
use fracseries::{EvalResult, Order};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;

#[derive(Serialize)]
struct Curve {
    t: Vec<f64>,
    /// `None` where the value is infinite or the series failed to converge.
    value: Vec<Option<f64>>,
    /// The original function on the same grid, for comparison.
    f: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct RuleRow {
    rule: &'static str,
    value: Option<f64>,
    residual: f64,
}

#[derive(Serialize)]
struct Comparison {
    reference: Option<f64>,
    r1: f64,
    rules: Vec<RuleRow>,
}

fn parse(spec: &str) -> Result<FuncSpec, String> {
    FuncSpec::parse(spec).map_err(|e| e.to_string())
}

fn order(alpha: f64) -> Result<Order, String> {
    Order::new(alpha).map_err(|e| e.to_string())
}

/// `D^α f` on `count` evenly spaced points of `(a, a + width]`.
pub fn differintegral_curve_json(
    spec: &str,
    alpha: f64,
    a: f64,
    caputo: bool,
    width: f64,
    count: usize,
) -> Result<String, String> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(format!("width must be positive, got {width}"));
    }
    if !(2..=MAX_POINTS).contains(&count) {
        return Err(format!("point count must lie in 2..={MAX_POINTS}"));
    }
    let f = parse(spec)?.to_taylor(a, DEFAULT_TRUNCATION).map_err(|e| e.to_string())?;
    let ord = order(alpha)?;
    let s = if caputo { caputo_extended(&f, ord) } else { rl_differintegral(&f, ord) };
    let t: Vec<f64> = (1..=count).map(|i| a + width * i as f64 / count as f64).collect();
    let value = t.iter().map(|&x| eval_frac_series(&s, x).ok().and_then(|v| v.finite())).collect();
    let fv = t.iter().map(|&x| f.eval(x).ok()).collect();
    Ok(serde_json::to_string(&Curve { t, value, f: fv }).expect("serializable"))
}

/// All three product rules for `D^α (f g)` at `t`, against the direct value.
pub fn leibniz_compare_json(f_spec: &str, g_spec: &str, alpha: f64, a: f64, t: f64) -> Result<String, String> {
    let f = parse(f_spec)?;
    let g = parse(g_spec)?;
    let ord = order(alpha)?;
    let err = |e: fracseries::FracError| e.to_string();
    let f_a = f.to_taylor(a, DEFAULT_TRUNCATION).map_err(err)?;
    let f_t = f.to_taylor_about(a, t, DEFAULT_TRUNCATION).map_err(err)?;
    let g_a = g.to_taylor(a, DEFAULT_TRUNCATION).map_err(err)?;
    let mut rules = Vec::new();
    let mut reference = None;
    let mut r1 = 0.0;
    for (rule, name) in [(LeibnizRule::Wrong, "wrong"), (LeibnizRule::Corrected, "corrected")] {
        let r = compare_rule(rule, &f_a, &f_t, &g_a, ord, t, DEFAULT_LEIBNIZ_TERMS).map_err(err)?;
        reference = r.reference_value.finite();
        r1 = r.correction_value;
        rules.push(RuleRow { rule: name, value: r.rule_value.finite(), residual: r.residual });
    }
    let rl = compare_rule(LeibnizRule::Rl, &f_a, &f_t, &g_a, ord, t, DEFAULT_LEIBNIZ_TERMS).map_err(err)?;
    rules.push(RuleRow { rule: "rl", value: rl.rule_value.finite(), residual: rl.residual });
    Ok(serde_json::to_string(&Comparison { reference, r1, rules }).expect("serializable"))
}

/// The rendered transform. `op` is one of `series`, `rl-int`, `caputo`, `rl-der`.
pub fn laplace_text(spec: &str, alpha: f64, op: &str) -> Result<String, String> {
    let spec = parse(spec)?;
    let err = |e: fracseries::FracError| e.to_string();
    let src: Box<dyn LaplaceSource> = if spec.has_fractional_power() {
        Box::new(spec.to_power_series(0.0, DEFAULT_TRUNCATION).map_err(err)?)
    } else {
        Box::new(spec.to_taylor(0.0, DEFAULT_TRUNCATION).map_err(err)?)
    };
    let src = src.as_ref();
    let expr: LaplaceExpr = match op {
        "series" => laplace_standard(src),
        "rl-int" => laplace_rl_integral(src, alpha),
        "caputo" => laplace_caputo(src, order(alpha)?),
        "rl-der" => laplace_rl_derivative(src, order(alpha)?),
        other => return Err(format!("unknown operation `{other}`")),
    }
    .map_err(err)?;
    Ok(expr.to_string())
}

/// Value of the chosen operator at one point, as text (`inf`, `-inf` included).
pub fn point_value_text(spec: &str, alpha: f64, a: f64, caputo: bool, t: f64) -> Result<String, String> {
    let f = parse(spec)?.to_taylor(a, DEFAULT_TRUNCATION).map_err(|e| e.to_string())?;
    let ord = order(alpha)?;
    let s = if caputo { caputo_extended(&f, ord) } else { rl_differintegral(&f, ord) };
    Ok(match eval_frac_series(&s, t).map_err(|e| e.to_string())? {
        EvalResult::Finite(v) => format!("{v}"),
        EvalResult::Infinite(sign) => if sign.to_f64() < 0.0 { "-inf" } else { "inf" }.to_string(),
        EvalResult::SingularTransform(r) => format!("singular ({r})"),
    })
}

#[wasm_bindgen]
pub fn differintegral_curve(
    spec: &str,
    alpha: f64,
    a: f64,
    caputo: bool,
    width: f64,
    count: usize,
) -> Result<String, JsValue> {
    differintegral_curve_json(spec, alpha, a, caputo, width, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn leibniz_compare(f_spec: &str, g_spec: &str, alpha: f64, a: f64, t: f64) -> Result<String, JsValue> {
    leibniz_compare_json(f_spec, g_spec, alpha, a, t).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn laplace_render(spec: &str, alpha: f64, op: &str) -> Result<String, JsValue> {
    laplace_text(spec, alpha, op).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn point_value(spec: &str, alpha: f64, a: f64, caputo: bool, t: f64) -> Result<String, JsValue> {
    point_value_text(spec, alpha, a, caputo, t).map_err(|e| JsValue::from_str(&e))
}
