//! Laplace transforms of fractional operators as formal sums in `s`.
//!
//! A transform is a [`LaplaceExpr`]: terms `c · s^(-p)`, optionally carrying
//! an `e^(-a s)` prefactor and an incomplete-gamma factor `Υ(p', -a s)` when
//! the lower terminal `a` is negative. Transforms that do not exist in the
//! classical sense (a time-domain term `t^μ` with `μ ≤ -1`) are returned as
//! singular expressions instead of errors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::operators::rl_differintegral;
use crate::series::{
    EvalResult, FracPowerSeries, Order, PowerTerm, Sign, TaylorSeries, EXPONENT_MERGE_TOL,
};
use crate::special::{gamma, recip_gamma, rising, upsilon};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceTerm {
    pub coeff: f64,
    /// `p` in `s^(-p)`.
    pub power: f64,
    /// `p'` in `Υ(p', -a s)`.
    #[serde(default, rename = "upsilon_arg", skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceExpr {
    /// The lower terminal `a`; nonzero values contribute `e^(-a s)`.
    pub shift: f64,
    pub terms: Vec<LaplaceTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<String>,
}

fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= EXPONENT_MERGE_TOL
}

fn upsilon_key(u: Option<f64>) -> f64 {
    u.unwrap_or(f64::NEG_INFINITY)
}

impl LaplaceExpr {
    /// Canonical form: sorted by `(power, upsilon)`, equal keys merged, zero
    /// coefficients dropped.
    pub fn new(shift: f64, mut terms: Vec<LaplaceTerm>) -> LaplaceExpr {
        terms.sort_by(|x, y| {
            x.power
                .total_cmp(&y.power)
                .then(upsilon_key(x.upsilon).total_cmp(&upsilon_key(y.upsilon)))
                .then(x.coeff.total_cmp(&y.coeff))
        });
        let mut merged: Vec<LaplaceTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last)
                    if same(last.power, term.power)
                        && match (last.upsilon, term.upsilon) {
                            (None, None) => true,
                            (Some(u), Some(v)) => same(u, v),
                            _ => false,
                        } =>
                {
                    last.coeff += term.coeff
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        LaplaceExpr { shift, terms: merged, singular: None }
    }

    pub fn zero() -> LaplaceExpr {
        LaplaceExpr::new(0.0, Vec::new())
    }

    pub fn singular(reason: impl Into<String>) -> LaplaceExpr {
        LaplaceExpr { shift: 0.0, terms: Vec::new(), singular: Some(reason.into()) }
    }

    pub fn is_singular(&self) -> bool {
        self.singular.is_some()
    }

    pub fn is_zero(&self) -> bool {
        !self.is_singular() && self.terms.is_empty()
    }

    /// Plain terms `c · s^(-p)` from `(c, p)` pairs.
    pub fn from_powers(pairs: impl IntoIterator<Item = (f64, f64)>) -> LaplaceExpr {
        LaplaceExpr::new(
            0.0,
            pairs.into_iter().map(|(coeff, power)| LaplaceTerm { coeff, power, upsilon: None }).collect(),
        )
    }

    /// Numeric value at real `s > 0`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if let Some(reason) = &self.singular {
            return Err(FracError::Singular(reason.clone()));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(FracError::Domain(format!("s must be positive and finite, got {s}")));
        }
        let q = -self.shift * s;
        let mut sum = 0.0;
        for term in &self.terms {
            let mut v = term.coeff * s.powf(-term.power);
            if let Some(p) = term.upsilon {
                v *= upsilon(p, q)?;
            }
            sum += v;
        }
        Ok(if self.shift != 0.0 { sum * q.exp() } else { sum })
    }

    /// `s^(-shift_by)` times the expression.
    pub fn times_s_power(&self, shift_by: f64) -> LaplaceExpr {
        if self.is_singular() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| LaplaceTerm { power: t.power + shift_by, ..*t })
            .collect();
        LaplaceExpr::new(self.shift, terms)
    }
}

impl fmt::Display for LaplaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(reason) = &self.singular {
            return write!(f, "SINGULAR({reason})");
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let c = if i == 0 {
                term.coeff
            } else if term.coeff < 0.0 {
                write!(f, " - ")?;
                -term.coeff
            } else {
                write!(f, " + ")?;
                term.coeff
            };
            write!(f, "{c}")?;
            if term.power != 0.0 {
                write!(f, " * s^({})", -term.power)?;
            }
            if self.shift != 0.0 {
                write!(f, " * e^({}*s)", -self.shift)?;
            }
            if let Some(p) = term.upsilon {
                write!(f, " * Upsilon({p}, {}*s)", -self.shift)?;
            }
        }
        Ok(())
    }
}

/// One time-domain term `coeff · (t - a)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTerm {
    pub coeff: f64,
    pub exponent: f64,
    /// `coeff · Γ(exponent + 1)`, the weight of `s^(-(exponent+1))` in the
    /// transform. Kept separately so Taylor data maps to `f^(k)(a)` exactly.
    pub weight: f64,
}

/// Anything that can be written as a finite sum of powers of `(t - a)`.
pub trait LaplaceSource {
    fn center(&self) -> f64;
    /// Nonzero terms in increasing exponent order.
    fn source_terms(&self) -> Vec<SourceTerm>;
}

impl LaplaceSource for TaylorSeries {
    fn center(&self) -> f64 {
        self.center
    }

    fn source_terms(&self) -> Vec<SourceTerm> {
        self.to_power_series()
            .terms
            .iter()
            .map(|t| {
                let k = t.exponent as usize;
                SourceTerm { coeff: t.coeff, exponent: t.exponent, weight: self.deriv(k) }
            })
            .collect()
    }
}

impl LaplaceSource for FracPowerSeries {
    fn center(&self) -> f64 {
        self.center
    }

    fn source_terms(&self) -> Vec<SourceTerm> {
        self.terms
            .iter()
            .map(|t| SourceTerm {
                coeff: t.coeff,
                exponent: t.exponent,
                weight: if t.exponent > -1.0 { t.coeff * gamma(t.exponent + 1.0) } else { f64::NAN },
            })
            .collect()
    }
}

fn is_int(x: f64) -> bool {
    x.fract() == 0.0
}

fn reason_for(e: f64) -> String {
    if is_int(e) && e >= 0.0 {
        format!("k={e}")
    } else {
        format!("mu={e}")
    }
}

fn require_zero_center<F: LaplaceSource + ?Sized>(f: &F) -> Result<()> {
    if f.center() != 0.0 {
        return Err(FracError::CenterMismatch { expected: 0.0, found: f.center() });
    }
    Ok(())
}

/// `L{(t - a)^μ}` for `a ≤ 0`.
///
/// `a = 0` gives `Γ(μ+1) s^(-(μ+1))`; `a < 0` gives
/// `e^(-a s) s^(-(μ+1)) Υ(μ+1, -a s)`. `μ ≤ -1` is singular.
pub fn laplace_power(mu: f64, a: f64) -> Result<LaplaceExpr> {
    if a > 0.0 {
        return Err(FracError::Domain(format!(
            "standard transform needs a <= 0 (got a = {a}); use generalized_laplace"
        )));
    }
    if !(mu > -1.0) {
        return Ok(LaplaceExpr::singular(reason_for(mu)));
    }
    let p = mu + 1.0;
    if a == 0.0 {
        Ok(LaplaceExpr::from_powers([(gamma(p), p)]))
    } else {
        Ok(LaplaceExpr::new(a, vec![LaplaceTerm { coeff: 1.0, power: p, upsilon: Some(p) }]))
    }
}

/// Termwise standard transform of a finite power sum centered at `a ≤ 0`.
pub fn laplace_standard<F: LaplaceSource + ?Sized>(f: &F) -> Result<LaplaceExpr> {
    let a = f.center();
    if a > 0.0 {
        return Err(FracError::Domain(format!(
            "standard transform needs a <= 0 (got a = {a}); use generalized_laplace"
        )));
    }
    let mut terms = Vec::new();
    for src in f.source_terms() {
        if !(src.exponent > -1.0) {
            return Ok(LaplaceExpr::singular(reason_for(src.exponent)));
        }
        let p = src.exponent + 1.0;
        terms.push(if a == 0.0 {
            LaplaceTerm { coeff: src.weight, power: p, upsilon: None }
        } else {
            LaplaceTerm { coeff: src.coeff, power: p, upsilon: Some(p) }
        });
    }
    Ok(LaplaceExpr::new(a, terms))
}

/// `F(s) = Σ f^(k)(0) / s^(k+1)`.
pub fn laplace_series(f: &TaylorSeries) -> Result<LaplaceExpr> {
    require_zero_center(f)?;
    laplace_standard(f)
}

fn zero_instant_integral(sources: &[SourceTerm], alpha: f64) -> LaplaceExpr {
    if let Some(bad) = sources.iter().find(|s| !(s.exponent > -1.0)) {
        return LaplaceExpr::singular(reason_for(bad.exponent));
    }
    LaplaceExpr::from_powers(sources.iter().map(|s| (s.weight, s.exponent + 1.0 + alpha)))
}

/// `s^α F(s) - Σ_{k<n} s^(α-k-1) f^(k)(0)`, built on the source terms.
///
/// Non-integer exponents below `n - 1` have an infinite derivative at the
/// terminal, so the subtraction does not exist.
fn zero_instant_caputo(sources: &[SourceTerm], ord: Order) -> LaplaceExpr {
    let alpha = ord.alpha;
    let n = ord.branch() as f64;
    let mut pairs = Vec::new();
    for s in sources {
        if !is_int(s.exponent) && !(s.exponent > n - 1.0) {
            return LaplaceExpr::singular(reason_for(s.exponent));
        }
        pairs.push((s.weight, s.exponent + 1.0 - alpha));
        if is_int(s.exponent) && s.exponent < n {
            // f^(k)(0) of the integer-power part
            pairs.push((-s.weight, s.exponent + 1.0 - alpha));
        }
    }
    LaplaceExpr::from_powers(pairs)
}

fn integral_or_plain(sources: &[SourceTerm], alpha: f64) -> LaplaceExpr {
    zero_instant_integral(sources, -alpha)
}

/// `L{RL I^α f} = s^(-α) F(s)`.
pub fn laplace_rl_integral<F: LaplaceSource + ?Sized>(f: &F, alpha: f64) -> Result<LaplaceExpr> {
    require_zero_center(f)?;
    if !(alpha > 0.0) {
        return Err(FracError::InvalidParameter(format!("integral order must be positive, got {alpha}")));
    }
    Ok(zero_instant_integral(&f.source_terms(), alpha))
}

/// `L{C D^α f} = s^α F(s) - Σ_{k<n} s^(α-k-1) f^(k)(0)`.
///
/// Orders `α ≤ 0` are read as integrals, integer orders as classical
/// derivatives.
pub fn laplace_caputo<F: LaplaceSource + ?Sized>(f: &F, ord: Order) -> Result<LaplaceExpr> {
    require_zero_center(f)?;
    let sources = f.source_terms();
    Ok(if ord.alpha <= 0.0 {
        integral_or_plain(&sources, ord.alpha)
    } else {
        zero_instant_caputo(&sources, ord)
    })
}

/// `L{RL D^α f}`.
///
/// Each term `t^e` maps to `t^(e-α)` up to a constant; the term vanishes when
/// `e - α + 1` is a Γ pole and the transform is singular when `e - α ≤ -1`.
/// For Taylor data this is `s^α F(s)` unless some `f^(k)(0) ≠ 0` with
/// `k ≤ n - 2`, in which case the least such `k` is reported.
pub fn laplace_rl_derivative<F: LaplaceSource + ?Sized>(f: &F, ord: Order) -> Result<LaplaceExpr> {
    require_zero_center(f)?;
    let sources = f.source_terms();
    if ord.alpha <= 0.0 {
        return Ok(integral_or_plain(&sources, ord.alpha));
    }
    if ord.is_integer() {
        return Ok(zero_instant_caputo(&sources, ord));
    }
    let alpha = ord.alpha;
    let mut pairs = Vec::new();
    for s in &sources {
        let e = s.exponent - alpha;
        if recip_gamma(e + 1.0) == 0.0 {
            continue;
        }
        if !(e > -1.0) {
            return Ok(LaplaceExpr::singular(reason_for(s.exponent)));
        }
        pairs.push((s.weight, s.exponent + 1.0 - alpha));
    }
    Ok(LaplaceExpr::from_powers(pairs))
}

/// `m`-th derivative in `s`: `c s^(-p) ↦ (-1)^m c Γ(p+m)/Γ(p) s^(-(p+m))`.
pub fn freq_derivative(expr: &LaplaceExpr, m: usize) -> Result<LaplaceExpr> {
    if let Some(reason) = &expr.singular {
        return Err(FracError::Singular(reason.clone()));
    }
    if expr.shift != 0.0 || expr.terms.iter().any(|t| t.upsilon.is_some()) {
        return Err(FracError::InvalidParameter(
            "frequency derivative needs a zero-instant expression".into(),
        ));
    }
    if let Some(t) = expr.terms.iter().find(|t| !(t.power > 0.0)) {
        return Err(FracError::InvalidParameter(format!(
            "frequency derivative needs positive powers, found s^({})",
            -t.power
        )));
    }
    // one derivative at a time, so that composing derivatives is exact
    Ok(LaplaceExpr::from_powers(expr.terms.iter().map(|t| {
        (0..m).fold((t.coeff, t.power), |(c, p), _| (-c * p, p + 1.0))
    })))
}

/// Inverse of a zero-instant expression: `c s^(-p) ↦ c t^(p-1) / Γ(p)`.
pub fn inverse_laplace_terms(expr: &LaplaceExpr) -> Result<FracPowerSeries> {
    if let Some(reason) = &expr.singular {
        return Err(FracError::Singular(reason.clone()));
    }
    if expr.shift != 0.0 || expr.terms.iter().any(|t| t.upsilon.is_some() || !(t.power > 0.0)) {
        return Err(FracError::InvalidParameter(
            "termwise inversion needs plain terms with positive powers".into(),
        ));
    }
    Ok(FracPowerSeries::new(
        0.0,
        expr.terms
            .iter()
            .map(|t| PowerTerm { coeff: t.coeff * recip_gamma(t.power), exponent: t.power - 1.0 })
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corollary2Report {
    /// `L^{-1}{s^(-α) F^(m)(s)}` by termwise inversion.
    pub frequency_side: FracPowerSeries,
    /// `RL I^α {f(t) (-t)^m}` in the time domain.
    pub time_side: FracPowerSeries,
    /// Largest `|Δc| / max(1, |c|)` over matched exponents.
    pub discrepancy: f64,
}

/// Compares both sides of `L^{-1}{s^(-α) F^(m)(s)} = RL I^α {f(t)(-t)^m}`.
pub fn corollary2_check(f: &TaylorSeries, alpha: f64, m: usize) -> Result<Corollary2Report> {
    require_zero_center(f)?;
    if !(alpha > 0.0) {
        return Err(FracError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let fm = freq_derivative(&laplace_series(f)?, m)?;
    let frequency_side = inverse_laplace_terms(&fm.times_s_power(alpha))?;

    // Taylor data of f(t)(-t)^m: h^(j)(0) = (-1)^m j!/(j-m)! f^(j-m)(0)
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut derivs = vec![0.0; f.derivs.len() + m];
    for (k, &d) in f.derivs.iter().enumerate() {
        derivs[k + m] = sign * rising((k + 1) as f64, m) * d;
    }
    let h = TaylorSeries { center: 0.0, derivs, radius_hint: f.radius_hint, exact: f.exact };
    let time_side = rl_differintegral(&h, Order::new(-alpha)?);

    let discrepancy = termwise_discrepancy(&frequency_side, &time_side);
    Ok(Corollary2Report { frequency_side, time_side, discrepancy })
}

/// Largest relative coefficient gap between two canonical series; unmatched
/// exponents count with their full coefficient.
pub fn termwise_discrepancy(x: &FracPowerSeries, y: &FracPowerSeries) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < x.terms.len() || j < y.terms.len() {
        let (a, b) = (x.terms.get(i), y.terms.get(j));
        let gap = match (a, b) {
            (Some(p), Some(q)) if same(p.exponent, q.exponent) => {
                i += 1;
                j += 1;
                (p.coeff - q.coeff).abs() / p.coeff.abs().max(q.coeff.abs()).max(1.0)
            }
            (Some(p), Some(q)) if p.exponent < q.exponent => {
                i += 1;
                p.coeff.abs()
            }
            (Some(p), None) => {
                i += 1;
                p.coeff.abs()
            }
            (_, Some(q)) => {
                j += 1;
                q.coeff.abs()
            }
            (None, None) => unreachable!(),
        };
        worst = worst.max(gap);
    }
    worst
}

fn require_fractional(ord: Order) -> Result<()> {
    if !ord.is_fractional_derivative() {
        return Err(FracError::InvalidParameter(format!(
            "order must lie strictly between two positive integers, got {}",
            ord.alpha
        )));
    }
    Ok(())
}

/// Both sides of the vanishing-derivative equivalence, read as identities of
/// functions on `t > a`:
/// `RL D^(α-1-k) f ≡ 0` for every `k < n` against `f^(k) ≡ 0` for every `k < n`.
pub fn corollary3_equivalence(f: &TaylorSeries, ord: Order) -> Result<(bool, bool)> {
    require_fractional(ord)?;
    let n = ord.branch();
    let mut left = true;
    for k in 0..n {
        let sub = Order::new(ord.alpha - 1.0 - k as f64)?;
        left &= rl_differintegral(f, sub).is_zero();
    }
    // f^(k) ≡ 0 means every Taylor coefficient from index k on vanishes
    let right = (0..n).all(|k| f.derivs.iter().skip(k).all(|&d| d == 0.0));
    Ok((left, right))
}

/// The same two conditions read at the lower terminal:
/// `lim_{t→a+} RL D^(α-1-k) f(t) = 0` against `f^(k)(a) = 0`, for every `k < n`.
///
/// These are not equivalent: `f = (t-a)^(n-1)` satisfies the first and not
/// the second, because `RL D^(α-n) f` is an integral and always vanishes at `a`.
pub fn initial_value_conditions(f: &TaylorSeries, ord: Order) -> Result<(bool, bool)> {
    require_fractional(ord)?;
    let n = ord.branch();
    let mut left = true;
    for k in 0..n {
        let sub = Order::new(ord.alpha - 1.0 - k as f64)?;
        left &= classify_lower_terminal(f, sub) == EvalResult::Finite(0.0);
    }
    let right = (0..n).all(|k| f.deriv(k) == 0.0);
    Ok((left, right))
}

/// Value of `RL D^α f` as `t → a+`, from the leading nonzero Taylor coefficient.
pub fn classify_lower_terminal(f: &TaylorSeries, ord: Order) -> EvalResult {
    let alpha = ord.alpha;
    let Some(k0) = f.leading_index() else {
        return EvalResult::Finite(0.0);
    };
    if ord.is_integer() {
        return if alpha >= 0.0 {
            EvalResult::Finite(f.deriv(alpha as usize))
        } else {
            EvalResult::Finite(0.0)
        };
    }
    let e = k0 as f64 - alpha;
    if e > 0.0 {
        EvalResult::Finite(0.0)
    } else {
        EvalResult::Infinite(Sign::of(f.deriv(k0) * recip_gamma(e + 1.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum GeneralizedKind {
    Plain,
    RlIntegral(f64),
    Caputo(f64),
}

/// Transform with kernel `e^(-s(t-a))` integrated from `a`. The zero-instant
/// formulas hold verbatim with `f^(k)(a)` in place of `f^(k)(0)`.
pub fn generalized_laplace(f: &TaylorSeries, kind: GeneralizedKind) -> Result<LaplaceExpr> {
    generalized_laplace_of(f, kind)
}

/// [`generalized_laplace`] for any power-sum source.
pub fn generalized_laplace_of<F: LaplaceSource + ?Sized>(f: &F, kind: GeneralizedKind) -> Result<LaplaceExpr> {
    let sources = f.source_terms();
    match kind {
        GeneralizedKind::Plain => Ok(zero_instant_integral(&sources, 0.0)),
        GeneralizedKind::RlIntegral(alpha) => {
            if !(alpha > 0.0) {
                return Err(FracError::InvalidParameter(format!(
                    "integral order must be positive, got {alpha}"
                )));
            }
            Ok(zero_instant_integral(&sources, alpha))
        }
        GeneralizedKind::Caputo(alpha) => {
            let ord = Order::new(alpha)?;
            Ok(if alpha <= 0.0 {
                integral_or_plain(&sources, alpha)
            } else {
                zero_instant_caputo(&sources, ord)
            })
        }
    }
}

/// Standard transform of `RL D^α f` for a lower terminal `a ≤ 0`.
///
/// For `a < 0` every term carries `e^(-a s)` and `Υ(μ+1, -a s)`; the power
/// attached to Taylor index `k` is `k + 1 - α`.
pub fn laplace_shifted(f: &TaylorSeries, ord: Order) -> Result<LaplaceExpr> {
    laplace_standard(&rl_differintegral(f, ord))
}
