//! The three worked examples, checked against their closed forms.
//!
//! 1. `f = t - a`, `g = 1`: Caputo derivative, the uncorrected product rule
//!    and the corrected one.
//! 2. `f = g = t`: the same three quantities for a product with `a ≠ 0`.
//! 3. Laplace transform of `RL D^α (t^0.5 + 2)`, finite for `α < 1` and
//!    singular once `α > 1`.

use serde::Serialize;

use crate::error::Result;
use crate::laplace::laplace_rl_derivative;
use crate::leibniz::{compare_rule, LeibnizRule, DEFAULT_LEIBNIZ_TERMS};
use crate::series::{series_from_catalog, FracPowerSeries, Order, PowerTerm, TaylorSeries};
use crate::special::gamma;

pub const EXAMPLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleConfig {
    pub alphas: Vec<f64>,
    pub centers: Vec<f64>,
    /// Offsets `t - a` at which the time-domain examples are evaluated.
    pub offsets: Vec<f64>,
    /// Evaluate the uncorrected Caputo product rule in place of the corrected one.
    pub wrong_rule: bool,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        ExampleConfig {
            alphas: vec![0.25, 0.5, 0.75],
            centers: vec![0.0, 1.0],
            offsets: vec![0.25, 0.5, 1.0, 1.5, 2.0],
            wrong_rule: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Largest relative residual of the product rule against the closed form.
    pub max_residual: f64,
    /// Largest `|rule - truth|` seen, which is the gap the correction closes.
    pub max_gap: f64,
    pub detail: String,
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

struct Tally {
    residual: f64,
    gap: f64,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { residual: 0.0, gap: 0.0, notes: Vec::new() }
    }

    fn check(&mut self, what: &str, got: f64, want: f64) {
        let r = rel(got, want);
        if r > EXAMPLE_TOL {
            self.notes.push(format!("{what}: {got:.15e} vs {want:.15e}"));
        }
        self.residual = self.residual.max(r);
    }

    fn outcome(self, id: u8, title: &'static str) -> ExampleOutcome {
        let passed = self.notes.is_empty();
        let detail = if passed { "ok".to_string() } else { self.notes.join("; ") };
        ExampleOutcome { id, title, passed, max_residual: self.residual, max_gap: self.gap, detail }
    }
}

fn product_rule(
    cfg: &ExampleConfig,
    f: &TaylorSeries,
    g: &TaylorSeries,
    ord: Order,
    t: f64,
) -> Result<crate::leibniz::LeibnizReport> {
    let rule = if cfg.wrong_rule { LeibnizRule::Wrong } else { LeibnizRule::Corrected };
    compare_rule(rule, f, &f.recenter(t), g, ord, t, DEFAULT_LEIBNIZ_TERMS)
}

/// `f = t - a`, `g = 1`.
pub fn example1(cfg: &ExampleConfig) -> Result<ExampleOutcome> {
    let mut tally = Tally::new();
    for &alpha in &cfg.alphas {
        let ord = Order::new(alpha)?;
        for &a in &cfg.centers {
            let f = series_from_catalog("poly", &[0.0, 1.0], a, 8)?;
            let one = series_from_catalog("const", &[1.0], a, 8)?;
            for &h in &cfg.offsets {
                let t = a + h;
                let truth = h.powf(1.0 - alpha) / gamma(2.0 - alpha);
                let wrong_closed = alpha * truth;
                let report = product_rule(cfg, &f, &one, ord, t)?;
                let value = report.rule_value.expect_finite()?;
                let reference = report.reference_value.expect_finite()?;
                tally.check(&format!("caputo(alpha={alpha}, a={a}, t={t})"), reference, truth);
                tally.check(&format!("rule(alpha={alpha}, a={a}, t={t})"), value, truth);
                tally.gap = tally.gap.max((value - truth).abs());
                let uncorrected = value - if cfg.wrong_rule { 0.0 } else { report.correction_value };
                tally.check(&format!("uncorrected sum(alpha={alpha}, a={a}, t={t})"), uncorrected, wrong_closed);
            }
        }
    }
    Ok(tally.outcome(1, "f = t - a, g = 1"))
}

/// `f = g = t`.
pub fn example2(cfg: &ExampleConfig) -> Result<ExampleOutcome> {
    let mut tally = Tally::new();
    for &alpha in &cfg.alphas {
        let ord = Order::new(alpha)?;
        for &a in &cfg.centers {
            let f = series_from_catalog("shifted-poly", &[0.0, 1.0], a, 8)?;
            for &h in &cfg.offsets {
                let t = a + h;
                let k = h.powf(1.0 - alpha) / gamma(3.0 - alpha);
                let truth = 2.0 * k * (t + a - a * alpha);
                let wrong_closed = k * (2.0 * t + a * alpha - a * alpha * alpha);
                let r1_closed = k * (2.0 * a - 3.0 * a * alpha + a * alpha * alpha);
                let report = product_rule(cfg, &f, &f, ord, t)?;
                let value = report.rule_value.expect_finite()?;
                let reference = report.reference_value.expect_finite()?;
                tally.check(&format!("caputo(alpha={alpha}, a={a}, t={t})"), reference, truth);
                tally.check(&format!("rule(alpha={alpha}, a={a}, t={t})"), value, truth);
                tally.gap = tally.gap.max((value - truth).abs());
                let uncorrected = value - if cfg.wrong_rule { 0.0 } else { report.correction_value };
                tally.check(&format!("uncorrected sum(alpha={alpha}, a={a}, t={t})"), uncorrected, wrong_closed);
                if a != 0.0 {
                    tally.check(&format!("R1(alpha={alpha}, a={a}, t={t})"), report.correction_value, r1_closed);
                } else if report.correction_value.abs() > EXAMPLE_TOL {
                    tally.notes.push(format!("R1 should vanish at a = 0, got {}", report.correction_value));
                }
            }
        }
    }
    Ok(tally.outcome(2, "f = g = t"))
}

/// Laplace transform of `RL D^α (t^0.5 + 2)`.
pub fn example3(cfg: &ExampleConfig) -> Result<ExampleOutcome> {
    let f = FracPowerSeries::new(
        0.0,
        vec![PowerTerm { coeff: 1.0, exponent: 0.5 }, PowerTerm { coeff: 2.0, exponent: 0.0 }],
    );
    let mut tally = Tally::new();
    for &alpha in &cfg.alphas {
        let e = laplace_rl_derivative(&f, Order::new(alpha)?)?;
        let expected = [(2.0, 1.0 - alpha), (gamma(1.5), 1.5 - alpha)];
        let terms: Vec<(f64, f64)> = e.terms.iter().map(|t| (t.coeff, t.power)).collect();
        let matches = e.singular.is_none()
            && terms.len() == 2
            && terms.iter().zip(&expected).all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= 4.0 * f64::EPSILON);
        if !matches {
            tally.notes.push(format!("alpha={alpha}: got `{e}`"));
        }
        // one order higher the constant produces t^(-α-1)
        let above = laplace_rl_derivative(&f, Order::new(alpha + 1.0)?)?;
        if above.singular.as_deref() != Some("k=0") {
            tally.notes.push(format!("alpha={}: expected SINGULAR(k=0), got `{above}`", alpha + 1.0));
        }
    }
    Ok(tally.outcome(3, "Laplace transform of RL D^alpha (t^0.5 + 2)"))
}

pub fn run_examples(cfg: &ExampleConfig) -> Result<Vec<ExampleOutcome>> {
    Ok(vec![example1(cfg)?, example2(cfg)?, example3(cfg)?])
}
