//! Fractional Leibniz rules for a product `f·g`, evaluated as truncated sums.
//!
//! * [`leibniz_rl`]: `RL D^α{fg} = Σ_j (α over j) f^(j)(t) RL D^(α-j) g(t)`, exact.
//! * [`leibniz_monomial`]: the closed finite form for `f(t) t^m`.
//! * [`leibniz_caputo_wrong`]: the same sum with Caputo operators. It is not
//!   the Caputo derivative of the product in general.
//! * [`leibniz_caputo_corrected`]: the Caputo sum plus the compensation `R1`,
//!   which restores equality.
//!
//! In the Caputo sums a negative order `α - j` is read as the
//! Riemann-Liouville integral of order `j - α`.

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::operators::{caputo_extended, rl_differintegral};
use crate::series::{EvalResult, Order, TaylorSeries, DEFAULT_TOL};
use crate::special::{binom, gen_binom, recip_gamma, rising};

/// Default number of product-rule terms for non-polynomial `f`.
pub const DEFAULT_LEIBNIZ_TERMS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeibnizRule {
    Rl,
    Wrong,
    Corrected,
}

/// A rule evaluated against the directly computed derivative of the product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeibnizReport {
    pub rule: LeibnizRule,
    pub rule_value: EvalResult,
    pub reference_value: EvalResult,
    /// `|rule_value - reference_value|`, NaN unless both are finite.
    pub residual: f64,
    /// The compensation `R1` (zero for the Riemann-Liouville rule).
    pub correction_value: f64,
    pub terms_used: usize,
}

impl LeibnizReport {
    fn new(
        rule: LeibnizRule,
        rule_value: f64,
        reference_value: f64,
        correction_value: f64,
        terms_used: usize,
    ) -> LeibnizReport {
        LeibnizReport {
            rule,
            rule_value: EvalResult::Finite(rule_value),
            reference_value: EvalResult::Finite(reference_value),
            residual: (rule_value - reference_value).abs(),
            correction_value,
            terms_used,
        }
    }

    pub fn relative_residual(&self) -> f64 {
        match self.reference_value {
            EvalResult::Finite(r) if r != 0.0 => self.residual / r.abs(),
            _ => self.residual,
        }
    }
}

fn check_point(f_t: &TaylorSeries, g: &TaylorSeries, t: f64) -> Result<()> {
    if f_t.center != t {
        return Err(FracError::CenterMismatch { expected: t, found: f_t.center });
    }
    if !(t > g.center) {
        return Err(FracError::Domain(format!(
            "evaluation point {t} must lie right of the lower terminal {}",
            g.center
        )));
    }
    Ok(())
}

/// Sums `Σ_j (α over j) f^(j)(t) · inner(j)` with the tail test.
///
/// Returns the value and the number of nonzero terms.
fn product_sum(
    f_t: &TaylorSeries,
    alpha: f64,
    t: f64,
    max_terms: usize,
    mut inner: impl FnMut(usize) -> Result<f64>,
) -> Result<(f64, usize)> {
    let available = if f_t.exact { f_t.degree().unwrap_or(0) } else { f_t.truncation() };
    let mut upper = available.min(max_terms);
    let mut complete = f_t.exact && upper == available;
    if alpha >= 0.0 && alpha.fract() == 0.0 {
        // (n over j) vanishes for j > n
        let n = alpha as usize;
        if n <= upper {
            upper = n;
            complete = true;
        }
    }
    let mut sum = 0.0;
    let mut used = 0;
    let mut last = [0.0f64; 2];
    for j in 0..=upper {
        let b = gen_binom(alpha, j);
        let d = f_t.deriv(j);
        let term = if b == 0.0 || d == 0.0 { 0.0 } else { b * d * inner(j)? };
        if term != 0.0 {
            used += 1;
        }
        sum += term;
        last = [last[1], term];
    }
    if !complete && upper > 0 {
        let bound = DEFAULT_TOL * sum.abs();
        if last[0].abs() > bound || last[1].abs() > bound {
            return Err(FracError::Divergence { t, last_term: last[1], partial_sum: sum });
        }
    }
    Ok((sum, used))
}

/// Riemann-Liouville product rule.
///
/// `f_t` holds the derivatives of f at the evaluation point `t`; `g` is
/// given at the lower terminal.
pub fn leibniz_rl(f_t: &TaylorSeries, g: &TaylorSeries, ord: Order, t: f64, max_terms: usize) -> Result<EvalResult> {
    check_point(f_t, g, t)?;
    let (v, _) = product_sum(f_t, ord.alpha, t, max_terms, |j| {
        rl_differintegral(g, Order::new(ord.alpha - j as f64)?).eval_finite(t)
    })?;
    Ok(EvalResult::Finite(v))
}

/// `RL D^α {f(t) t^m}` or, for a negative order, `RL I^(-α) {f(t) t^m}`,
/// as the finite sum over `k = 0..=m`.
pub fn leibniz_monomial(f: &TaylorSeries, m: usize, ord: Order, t: f64) -> Result<EvalResult> {
    if !(t > f.center) {
        return Err(FracError::Domain(format!(
            "evaluation point {t} must lie right of the lower terminal {}",
            f.center
        )));
    }
    let alpha = ord.alpha;
    let mut sum = 0.0;
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // Γ(-α+k)/Γ(-α) for derivatives, Γ(β+k)/Γ(β) with β = -α for integrals
        let ratio = rising(-alpha, k);
        let inner = rl_differintegral(f, Order::new(alpha - k as f64)?).eval_finite(t)?;
        sum += sign * binom(m, k) * ratio * t.powi((m - k) as i32) * inner;
    }
    Ok(EvalResult::Finite(sum))
}

/// The Caputo product sum `Σ_j (α over j) f^(j)(t) C D^(α-j) g(t)` without
/// compensation.
pub fn leibniz_caputo_wrong(
    f_t: &TaylorSeries,
    g: &TaylorSeries,
    ord: Order,
    t: f64,
    max_terms: usize,
) -> Result<EvalResult> {
    check_point(f_t, g, t)?;
    caputo_sum(f_t, g, ord, t, max_terms).map(|(v, _)| EvalResult::Finite(v))
}

fn caputo_sum(f_t: &TaylorSeries, g: &TaylorSeries, ord: Order, t: f64, max_terms: usize) -> Result<(f64, usize)> {
    product_sum(f_t, ord.alpha, t, max_terms, |j| {
        caputo_extended(g, Order::new(ord.alpha - j as f64)?).eval_finite(t)
    })
}

/// Compensation term
/// `R1 = Σ_{k<n} Σ_{j≤k} [(α over j) f^(j)(t) - C(k,j) f^(j)(a)] g^(k-j)(a) (t-a)^(k-α) / Γ(k+1-α)`.
///
/// Zero for integer orders, where the classical product rule is exact.
pub fn correction_r1(f_a: &TaylorSeries, f_t: &TaylorSeries, g: &TaylorSeries, ord: Order, t: f64) -> Result<f64> {
    if f_a.center != g.center {
        return Err(FracError::CenterMismatch { expected: g.center, found: f_a.center });
    }
    if !ord.is_fractional_derivative() {
        return Ok(0.0);
    }
    let alpha = ord.alpha;
    let h = t - g.center;
    let mut r1 = 0.0;
    for k in 0..ord.branch() {
        let kernel = h.powf(k as f64 - alpha) * recip_gamma(k as f64 + 1.0 - alpha);
        for j in 0..=k {
            let bracket = gen_binom(alpha, j) * f_t.deriv(j) - binom(k, j) * f_a.deriv(j);
            r1 += bracket * g.deriv(k - j) * kernel;
        }
    }
    Ok(r1)
}

/// The Caputo derivative of `f·g` computed directly from the product data.
pub fn caputo_of_product(f_a: &TaylorSeries, g: &TaylorSeries, ord: Order, t: f64) -> Result<f64> {
    let fg = f_a.mul(g)?;
    caputo_extended(&fg, ord).eval_finite(t)
}

/// Corrected Caputo product rule: the Caputo sum plus `R1`, reported against
/// the Caputo derivative of the product.
pub fn leibniz_caputo_corrected(
    f_a: &TaylorSeries,
    f_t: &TaylorSeries,
    g: &TaylorSeries,
    ord: Order,
    t: f64,
    max_terms: usize,
) -> Result<LeibnizReport> {
    check_point(f_t, g, t)?;
    let (sum, used) = caputo_sum(f_t, g, ord, t, max_terms)?;
    let r1 = correction_r1(f_a, f_t, g, ord, t)?;
    let reference = caputo_of_product(f_a, g, ord, t)?;
    Ok(LeibnizReport::new(LeibnizRule::Corrected, sum + r1, reference, r1, used))
}

/// The role-swapped corrected rule: `Σ_j (α over j) g^(j)(t) C D^(α-j) f(t) + R2`.
pub fn leibniz_caputo_corrected_r2(
    f: &TaylorSeries,
    g_a: &TaylorSeries,
    g_t: &TaylorSeries,
    ord: Order,
    t: f64,
    max_terms: usize,
) -> Result<LeibnizReport> {
    leibniz_caputo_corrected(g_a, g_t, f, ord, t, max_terms)
}

/// Evaluates one rule on `f·g` at `t` and compares it with the directly
/// computed derivative of the product (Riemann-Liouville for [`LeibnizRule::Rl`],
/// Caputo otherwise). `R1` is reported for both Caputo rules.
pub fn compare_rule(
    rule: LeibnizRule,
    f_a: &TaylorSeries,
    f_t: &TaylorSeries,
    g: &TaylorSeries,
    ord: Order,
    t: f64,
    max_terms: usize,
) -> Result<LeibnizReport> {
    check_point(f_t, g, t)?;
    match rule {
        LeibnizRule::Rl => {
            let (value, used) = product_sum(f_t, ord.alpha, t, max_terms, |j| {
                rl_differintegral(g, Order::new(ord.alpha - j as f64)?).eval_finite(t)
            })?;
            let reference = rl_differintegral(&f_a.mul(g)?, ord).eval_finite(t)?;
            Ok(LeibnizReport::new(rule, value, reference, 0.0, used))
        }
        LeibnizRule::Wrong => {
            let (value, used) = caputo_sum(f_t, g, ord, t, max_terms)?;
            let r1 = correction_r1(f_a, f_t, g, ord, t)?;
            let reference = caputo_of_product(f_a, g, ord, t)?;
            Ok(LeibnizReport::new(rule, value, reference, r1, used))
        }
        LeibnizRule::Corrected => leibniz_caputo_corrected(f_a, f_t, g, ord, t, max_terms),
    }
}
