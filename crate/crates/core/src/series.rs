//! Taylor data, formal fractional power series and their evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};
use crate::special::{binom, factorial};

/// Default number of Taylor derivatives kept for non-polynomial functions.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Relative tolerance of the tail test applied to truncated sums.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Exponents closer than this are treated as the same power.
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x.is_sign_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Outcome of evaluating an operator or special function at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EvalResult {
    Finite(f64),
    Infinite(Sign),
    SingularTransform(String),
}

impl EvalResult {
    pub fn finite(&self) -> Option<f64> {
        match self {
            EvalResult::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// The finite value, or a `Singular` error describing why there is none.
    pub fn expect_finite(&self) -> Result<f64> {
        match self {
            EvalResult::Finite(v) => Ok(*v),
            EvalResult::Infinite(s) => Err(FracError::Singular(format!(
                "value is {}infinite",
                if *s == Sign::Minus { "negatively " } else { "" }
            ))),
            EvalResult::SingularTransform(reason) => Err(FracError::Singular(reason.clone())),
        }
    }
}

/// A fractional order together with its branch integer.
///
/// For `alpha > 0`, `n = ceil(alpha)`, so `n - 1 < alpha < n` off the integers
/// and `n = alpha` on them. `alpha <= 0` is the integral branch and has `n = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Order {
    pub alpha: f64,
    pub n: u32,
}

impl Order {
    pub fn new(alpha: f64) -> Result<Order> {
        if !alpha.is_finite() {
            return Err(FracError::InvalidParameter(format!("order must be finite, got {alpha}")));
        }
        let n = if alpha > 0.0 { alpha.ceil() as u32 } else { 0 };
        Ok(Order { alpha, n })
    }

    pub fn is_integer(&self) -> bool {
        self.alpha.fract() == 0.0
    }

    /// True for strictly negative orders (fractional integrals).
    pub fn is_integral(&self) -> bool {
        self.alpha < 0.0
    }

    /// Non-integer positive order, the domain of the Caputo derivative.
    pub fn is_fractional_derivative(&self) -> bool {
        self.alpha > 0.0 && !self.is_integer()
    }

    pub fn branch(&self) -> usize {
        self.n as usize
    }
}

/// An analytic function given by its derivative values at a center.
///
/// `derivs[k]` holds `f^(k)(center)` (not divided by `k!`). When `exact` is set
/// every derivative past the stored ones is zero, i.e. the data describe a
/// polynomial; otherwise the list is a truncation of an infinite series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    pub center: f64,
    pub derivs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_hint: Option<f64>,
    #[serde(default = "default_exact")]
    pub exact: bool,
}

fn default_exact() -> bool {
    true
}

impl TaylorSeries {
    /// Polynomial data: derivatives past the list are exactly zero.
    pub fn exact(center: f64, derivs: Vec<f64>) -> Result<TaylorSeries> {
        let s = TaylorSeries { center, derivs, radius_hint: None, exact: true };
        s.validate()?;
        Ok(s)
    }

    /// Truncated data of an infinite series with an optional convergence radius.
    pub fn truncated(center: f64, derivs: Vec<f64>, radius_hint: Option<f64>) -> Result<TaylorSeries> {
        let s = TaylorSeries { center, derivs, radius_hint, exact: false };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(FracError::InvalidParameter("center must be finite".into()));
        }
        if self.derivs.is_empty() {
            return Err(FracError::InvalidParameter("Taylor data needs at least one derivative".into()));
        }
        if let Some(k) = self.derivs.iter().position(|d| !d.is_finite()) {
            return Err(FracError::InvalidParameter(format!("derivative {k} is not finite")));
        }
        if let Some(r) = self.radius_hint {
            if !(r > 0.0) {
                return Err(FracError::InvalidParameter(format!("radius hint must be positive, got {r}")));
            }
        }
        Ok(())
    }

    /// Truncation order N (index of the last stored derivative).
    pub fn truncation(&self) -> usize {
        self.derivs.len() - 1
    }

    /// `f^(k)(center)`, zero past the stored data of an exact series.
    pub fn deriv(&self, k: usize) -> f64 {
        self.derivs.get(k).copied().unwrap_or(0.0)
    }

    /// Index of the last nonzero derivative, `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.derivs.iter().rposition(|&d| d != 0.0)
    }

    /// Least k with a nonzero `f^(k)(center)`.
    pub fn leading_index(&self) -> Option<usize> {
        self.derivs.iter().position(|&d| d != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.exact && self.degree().is_none()
    }

    fn check_center(&self, other: &TaylorSeries) -> Result<()> {
        if self.center != other.center {
            return Err(FracError::CenterMismatch { expected: self.center, found: other.center });
        }
        Ok(())
    }

    /// Evaluates the Taylor sum at `t` with the tail test of [`DEFAULT_TOL`].
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_with(t, DEFAULT_TOL)
    }

    pub fn eval_with(&self, t: f64, tol: f64) -> Result<f64> {
        let h = t - self.center;
        if let Some(r) = self.radius_hint {
            if !self.exact && h.abs() >= r {
                return Err(FracError::Divergence { t, last_term: f64::NAN, partial_sum: f64::NAN });
            }
        }
        let mut scale = 1.0;
        let mut sum = 0.0;
        let mut last = [0.0f64; 2];
        for (k, &d) in self.derivs.iter().enumerate() {
            if k > 0 {
                scale *= h / k as f64;
            }
            let term = d * scale;
            sum += term;
            last = [last[1], term];
        }
        if !self.exact && self.derivs.len() > 1 {
            let bound = tol * sum.abs();
            if last[0].abs() > bound || last[1].abs() > bound {
                return Err(FracError::Divergence { t, last_term: last[1], partial_sum: sum });
            }
        }
        Ok(sum)
    }

    /// Taylor data of the m-th derivative (a left shift of the data).
    pub fn derivative(&self, m: usize) -> Result<TaylorSeries> {
        if m <= self.truncation() {
            return Ok(TaylorSeries { derivs: self.derivs[m..].to_vec(), ..self.clone() });
        }
        if self.exact {
            return Ok(TaylorSeries { derivs: vec![0.0], ..self.clone() });
        }
        Err(FracError::InvalidParameter(format!(
            "derivative of order {m} exceeds truncation {}",
            self.truncation()
        )))
    }

    /// Taylor data of the m-fold integral from the center (zero initial values).
    pub fn antiderivative(&self, m: usize) -> TaylorSeries {
        let mut derivs = vec![0.0; m];
        derivs.extend_from_slice(&self.derivs);
        TaylorSeries { derivs, ..self.clone() }
    }

    /// Re-expands the series about `new_center`, keeping the truncation order.
    pub fn recenter(&self, new_center: f64) -> TaylorSeries {
        let h = new_center - self.center;
        let n = self.derivs.len();
        let derivs = (0..n)
            .map(|j| {
                let mut scale = 1.0;
                let mut sum = 0.0;
                for k in j..n {
                    if k > j {
                        scale *= h / (k - j) as f64;
                    }
                    sum += self.derivs[k] * scale;
                }
                sum
            })
            .collect();
        let radius_hint = self.radius_hint.map(|r| (r - h.abs()).max(f64::MIN_POSITIVE));
        TaylorSeries { center: new_center, derivs, radius_hint, exact: self.exact }
    }

    /// The same function as a power series `Σ f^(k)(a)/k! (t-a)^k`.
    pub fn to_power_series(&self) -> FracPowerSeries {
        let terms = self
            .derivs
            .iter()
            .enumerate()
            .map(|(k, &d)| PowerTerm { coeff: d / factorial(k), exponent: k as f64 })
            .collect();
        FracPowerSeries::with_meta(self.center, terms, !self.exact, self.radius_hint)
    }

    pub fn add(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        taylor_arith(self, other, ArithOp::Add)
    }

    pub fn mul(&self, other: &TaylorSeries) -> Result<TaylorSeries> {
        taylor_arith(self, other, ArithOp::Mul)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

fn min_radius(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Sum or product of two Taylor data sets sharing a center.
///
/// The product uses the Leibniz convolution `Σ_j C(k,j) f^(j) g^(k-j)`; the
/// truncation order is the smaller of the two inputs.
pub fn taylor_arith(f: &TaylorSeries, g: &TaylorSeries, op: ArithOp) -> Result<TaylorSeries> {
    f.check_center(g)?;
    let radius_hint = min_radius(f.radius_hint, g.radius_hint);
    match op {
        ArithOp::Add => {
            // an exact operand contributes zeros past its data
            let n = match (f.exact, g.exact) {
                (true, true) => f.derivs.len().max(g.derivs.len()),
                (true, false) => g.derivs.len(),
                (false, true) => f.derivs.len(),
                (false, false) => f.derivs.len().min(g.derivs.len()),
            };
            let derivs = (0..n).map(|k| f.deriv(k) + g.deriv(k)).collect();
            Ok(TaylorSeries { center: f.center, derivs, radius_hint, exact: f.exact && g.exact })
        }
        ArithOp::Mul => {
            let n = f.truncation().min(g.truncation());
            let derivs = (0..=n)
                .map(|k| (0..=k).map(|j| binom(k, j) * f.deriv(j) * g.deriv(k - j)).sum())
                .collect();
            let degree_fits = match (f.degree(), g.degree()) {
                (Some(df), Some(dg)) => df + dg <= n,
                _ => true,
            };
            let exact = f.exact && g.exact && degree_fits;
            Ok(TaylorSeries { center: f.center, derivs, radius_hint, exact })
        }
    }
}

/// One term `coeff · (t - center)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// A formal sum `Σ c_k (t - center)^(e_k)` with real, strictly increasing exponents.
///
/// `truncated` marks a partial sum of an infinite series, which triggers the
/// tail test on evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracPowerSeries {
    pub center: f64,
    pub terms: Vec<PowerTerm>,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_hint: Option<f64>,
}

impl FracPowerSeries {
    /// Builds a canonical finite series: sorted, merged, zero terms dropped.
    pub fn new(center: f64, terms: Vec<PowerTerm>) -> FracPowerSeries {
        Self::with_meta(center, terms, false, None)
    }

    pub fn with_meta(
        center: f64,
        mut terms: Vec<PowerTerm>,
        truncated: bool,
        radius_hint: Option<f64>,
    ) -> FracPowerSeries {
        // total order on (exponent, coeff) makes the merge independent of input order
        terms.sort_by(|x, y| {
            x.exponent.total_cmp(&y.exponent).then(x.coeff.total_cmp(&y.coeff))
        });
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if (term.exponent - last.exponent).abs() <= EXPONENT_MERGE_TOL => {
                    last.coeff += term.coeff;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        FracPowerSeries { center, terms: merged, truncated, radius_hint }
    }

    pub fn zero(center: f64) -> FracPowerSeries {
        Self::new(center, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn least_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.exponent)
    }

    /// Termwise sum; the result is truncated if either input is.
    pub fn plus(&self, other: &FracPowerSeries) -> Result<FracPowerSeries> {
        if self.center != other.center {
            return Err(FracError::CenterMismatch { expected: self.center, found: other.center });
        }
        let terms = self.terms.iter().chain(other.terms.iter()).copied().collect();
        Ok(Self::with_meta(
            self.center,
            terms,
            self.truncated || other.truncated,
            min_radius(self.radius_hint, other.radius_hint),
        ))
    }

    pub fn scaled(&self, factor: f64) -> FracPowerSeries {
        let terms = self
            .terms
            .iter()
            .map(|t| PowerTerm { coeff: t.coeff * factor, exponent: t.exponent })
            .collect();
        Self::with_meta(self.center, terms, self.truncated, self.radius_hint)
    }

    pub fn eval(&self, t: f64) -> Result<EvalResult> {
        eval_frac_series(self, t)
    }

    /// Evaluates at `t`, mapping any non-finite outcome to an error.
    pub fn eval_finite(&self, t: f64) -> Result<f64> {
        eval_frac_series(self, t)?.expect_finite()
    }
}

/// Evaluates a fractional power series at `t >= center`.
///
/// At `t == center` the value is classified by the least exponent: positive
/// gives 0, zero gives the constant coefficient, negative gives an infinity
/// with the sign of the leading coefficient.
pub fn eval_frac_series(s: &FracPowerSeries, t: f64) -> Result<EvalResult> {
    eval_frac_series_with(s, t, DEFAULT_TOL)
}

pub fn eval_frac_series_with(s: &FracPowerSeries, t: f64, tol: f64) -> Result<EvalResult> {
    let h = t - s.center;
    if !(h >= 0.0) {
        return Err(FracError::Domain(format!(
            "evaluation point {t} lies left of the lower terminal {}",
            s.center
        )));
    }
    if h == 0.0 {
        return Ok(match s.terms.first() {
            None => EvalResult::Finite(0.0),
            Some(lead) if lead.exponent > 0.0 => EvalResult::Finite(0.0),
            Some(lead) if lead.exponent == 0.0 => EvalResult::Finite(lead.coeff),
            Some(lead) => EvalResult::Infinite(Sign::of(lead.coeff)),
        });
    }
    if s.truncated {
        if let Some(r) = s.radius_hint {
            if h >= r {
                return Err(FracError::Divergence { t, last_term: f64::NAN, partial_sum: f64::NAN });
            }
        }
    }
    let mut sum = 0.0;
    let mut last = [0.0f64; 2];
    for term in &s.terms {
        let v = term.coeff * h.powf(term.exponent);
        sum += v;
        last = [last[1], v];
    }
    if s.truncated && s.terms.len() > 1 {
        let bound = tol * sum.abs();
        if last[0].abs() > bound || last[1].abs() > bound {
            return Err(FracError::Divergence { t, last_term: last[1], partial_sum: sum });
        }
    }
    if !sum.is_finite() {
        return Err(FracError::Divergence { t, last_term: last[1], partial_sum: sum });
    }
    Ok(EvalResult::Finite(sum))
}

/// Builds Taylor data for a named elementary function.
///
/// * `poly c0,c1,...`: `Σ c_k (t - center)^k`
/// * `shifted-poly c0,c1,...`: `Σ c_k t^k`, re-expanded about the center
/// * `power p`: `(t - center)^p` for integer `p >= 0`
/// * `const c`, `exp λ` (`e^(λt)`), `sin ω` (`sin ωt`), `cos ω` (`cos ωt`)
pub fn series_from_catalog(name: &str, params: &[f64], center: f64, truncation: usize) -> Result<TaylorSeries> {
    if !center.is_finite() {
        return Err(FracError::InvalidParameter("center must be finite".into()));
    }
    if let Some(p) = params.iter().find(|p| !p.is_finite()) {
        return Err(FracError::InvalidParameter(format!("parameter {p} is not finite")));
    }
    let len = truncation + 1;
    let single = |what: &str| -> Result<f64> {
        match params {
            [x] => Ok(*x),
            _ => Err(FracError::InvalidParameter(format!(
                "`{name}` takes exactly one parameter ({what}), got {}",
                params.len()
            ))),
        }
    };
    match name {
        "poly" => {
            let degree = check_poly(params, truncation)?;
            let mut derivs = vec![0.0; len];
            for (k, c) in params.iter().enumerate().take(degree + 1) {
                derivs[k] = c * factorial(k);
            }
            TaylorSeries::exact(center, derivs)
        }
        "shifted-poly" => {
            let degree = check_poly(params, truncation)?;
            let mut derivs = vec![0.0; len];
            for (k, d) in derivs.iter_mut().enumerate().take(degree + 1) {
                let mut pow = 1.0;
                let mut sum = 0.0;
                for (j, c) in params.iter().enumerate().take(degree + 1).skip(k) {
                    // c_j j!/(j-k)! center^(j-k)
                    sum += c * factorial(j) / factorial(j - k) * pow;
                    pow *= center;
                }
                *d = sum;
            }
            TaylorSeries::exact(center, derivs)
        }
        "power" => {
            let p = single("exponent")?;
            if p < 0.0 || p.fract() != 0.0 {
                return Err(FracError::InvalidParameter(format!(
                    "(t - a)^{p} is not analytic at the center; use it as a power-series term"
                )));
            }
            let mut coeffs = vec![0.0; p as usize + 1];
            coeffs[p as usize] = 1.0;
            series_from_catalog("poly", &coeffs, center, truncation)
        }
        "const" => {
            let c = single("value")?;
            series_from_catalog("poly", &[c], center, truncation)
        }
        "exp" => {
            let rate = single("rate")?;
            let base = (rate * center).exp();
            let derivs = (0..len).map(|k| base * rate.powi(k as i32)).collect();
            TaylorSeries::truncated(center, derivs, Some(f64::INFINITY))
        }
        "sin" | "cos" => {
            let omega = single("angular frequency")?;
            let (s, c) = (omega * center).sin_cos();
            let cycle = if name == "sin" { [s, c, -s, -c] } else { [c, -s, -c, s] };
            let derivs = (0..len).map(|k| cycle[k % 4] * omega.powi(k as i32)).collect();
            TaylorSeries::truncated(center, derivs, Some(f64::INFINITY))
        }
        other => Err(FracError::UnknownFunction(other.to_string())),
    }
}

fn check_poly(coeffs: &[f64], truncation: usize) -> Result<usize> {
    if coeffs.is_empty() {
        return Err(FracError::InvalidParameter("polynomial needs at least one coefficient".into()));
    }
    let degree = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    if truncation < degree {
        return Err(FracError::InvalidParameter(format!(
            "truncation {truncation} is below the polynomial degree {degree}"
        )));
    }
    Ok(degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;
    use proptest::prelude::*;

    #[test]
    fn catalog_examples() {
        let t = series_from_catalog("poly", &[0.0, 1.0], 0.0, 4).unwrap();
        assert_eq!(t.derivs, vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        let e = series_from_catalog("exp", &[1.0], 0.0, 3).unwrap();
        assert_eq!(e.derivs, vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(e.radius_hint, Some(f64::INFINITY));
        let a = 1.5;
        let sq = series_from_catalog("poly", &[a * a, 2.0 * a, 1.0], a, 4).unwrap();
        assert_eq!(sq.derivs, vec![a * a, 2.0 * a, 2.0, 0.0, 0.0]);
        // t^2 as a polynomial in t, expanded at a
        let sq2 = series_from_catalog("shifted-poly", &[0.0, 0.0, 1.0], a, 4).unwrap();
        assert_eq!(sq2.derivs, sq.derivs);
        let s = series_from_catalog("sin", &[2.0], 0.0, 5).unwrap();
        assert_eq!(s.derivs, vec![0.0, 2.0, 0.0, -8.0, 0.0, 32.0]);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(
            series_from_catalog("tan", &[1.0], 0.0, 4),
            Err(FracError::UnknownFunction(_))
        ));
        assert!(matches!(
            series_from_catalog("poly", &[1.0, 2.0, 3.0], 0.0, 1),
            Err(FracError::InvalidParameter(_))
        ));
        assert!(series_from_catalog("power", &[0.5], 0.0, 4).is_err());
        assert!(series_from_catalog("exp", &[1.0, 2.0], 0.0, 4).is_err());
    }

    #[test]
    fn eval_examples() {
        let s = FracPowerSeries::new(0.0, vec![PowerTerm { coeff: 1.0 / gamma(0.5), exponent: -0.5 }]);
        let v = s.eval_finite(1.0).unwrap();
        assert!((v - 0.564_189_583_547_756_3).abs() < 1e-15);

        let s = FracPowerSeries::new(2.0, vec![PowerTerm { coeff: 1.0, exponent: 0.5 }]);
        assert_eq!(s.eval(2.0).unwrap(), EvalResult::Finite(0.0));

        let s = FracPowerSeries::new(0.0, vec![PowerTerm { coeff: -0.7, exponent: -0.3 }]);
        assert_eq!(s.eval(0.0).unwrap(), EvalResult::Infinite(Sign::Minus));

        let s = FracPowerSeries::new(0.0, vec![
            PowerTerm { coeff: 3.0, exponent: 0.0 },
            PowerTerm { coeff: 1.0, exponent: 2.0 },
        ]);
        assert_eq!(s.eval(0.0).unwrap(), EvalResult::Finite(3.0));
        assert!(s.eval(-1.0).is_err());
    }

    #[test]
    fn truncated_series_reports_divergence() {
        // e^t with only four terms cannot pass the tail test at t = 1
        let e = series_from_catalog("exp", &[1.0], 0.0, 3).unwrap();
        assert!(matches!(e.eval(1.0), Err(FracError::Divergence { .. })));
        assert!(matches!(e.to_power_series().eval(1.0), Err(FracError::Divergence { .. })));
        let e = series_from_catalog("exp", &[1.0], 0.0, 64).unwrap();
        assert!((e.eval(1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_examples() {
        let t = series_from_catalog("poly", &[0.0, 1.0], 0.0, 6).unwrap();
        let sq = taylor_arith(&t, &t, ArithOp::Mul).unwrap();
        assert_eq!(sq.derivs, vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(sq.exact);

        let f = series_from_catalog("exp", &[0.7], 0.3, 20).unwrap();
        let one = series_from_catalog("const", &[1.0], 0.3, 20).unwrap();
        assert_eq!(f.mul(&one).unwrap().derivs, f.derivs);

        let a = -0.4;
        let shifted = series_from_catalog("poly", &[0.0, 1.0], a, 5).unwrap();
        assert_eq!(shifted.mul(&shifted).unwrap().derivs, vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);

        let other = series_from_catalog("poly", &[0.0, 1.0], 1.0, 5).unwrap();
        assert!(matches!(shifted.mul(&other), Err(FracError::CenterMismatch { .. })));
    }

    #[test]
    fn recenter_polynomial() {
        let f = series_from_catalog("shifted-poly", &[1.0, -2.0, 0.5, 3.0], 0.0, 6).unwrap();
        let g = f.recenter(1.25);
        let direct = series_from_catalog("shifted-poly", &[1.0, -2.0, 0.5, 3.0], 1.25, 6).unwrap();
        for (x, y) in g.derivs.iter().zip(&direct.derivs) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_and_antiderivative() {
        let f = series_from_catalog("poly", &[1.0, 2.0, 3.0], 0.0, 4).unwrap();
        assert_eq!(f.derivative(1).unwrap().derivs, vec![2.0, 6.0, 0.0, 0.0]);
        assert_eq!(f.derivative(9).unwrap().derivs, vec![0.0]);
        assert_eq!(f.antiderivative(2).derivs[..3], [0.0, 0.0, 1.0]);
        let e = series_from_catalog("exp", &[1.0], 0.0, 4).unwrap();
        assert!(e.derivative(9).is_err());
    }

    #[test]
    fn json_layout() {
        let f: TaylorSeries = serde_json::from_str("{\"center\":0.5,\"derivs\":[1,2]}").unwrap();
        assert!(f.exact);
        assert_eq!(f.derivs, vec![1.0, 2.0]);
        let back = serde_json::to_string(&f).unwrap();
        assert_eq!(back, "{\"center\":0.5,\"derivs\":[1.0,2.0],\"exact\":true}");
    }

    fn term_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec(
            (-3.0f64..3.0, prop::sample::select(vec![-1.5, -0.5, 0.0, 0.25, 0.5, 1.0, 2.0, 3.5])),
            0..8,
        )
    }

    proptest! {
        #[test]
        fn construction_is_canonical(terms in term_strategy(), seed in any::<u64>()) {
            let mut shuffled = terms.clone();
            // deterministic Fisher-Yates from the seed
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let j = (state % (i as u64 + 1)) as usize;
                shuffled.swap(i, j);
            }
            let build = |v: &[(f64, f64)]| FracPowerSeries::new(
                0.0,
                v.iter().map(|&(c, e)| PowerTerm { coeff: c, exponent: e }).collect(),
            );
            let a = build(&terms);
            let b = build(&shuffled);
            prop_assert_eq!(&a, &b);
            for w in a.terms.windows(2) {
                prop_assert!(w[0].exponent < w[1].exponent);
            }
            prop_assert!(a.terms.iter().all(|t| t.coeff != 0.0));
        }

        #[test]
        fn value_at_center_is_classified(terms in term_strategy()) {
            let s = FracPowerSeries::new(
                1.0,
                terms.iter().map(|&(c, e)| PowerTerm { coeff: c, exponent: e }).collect(),
            );
            let got = s.eval(1.0).unwrap();
            match s.terms.first() {
                None => prop_assert_eq!(got, EvalResult::Finite(0.0)),
                Some(l) if l.exponent > 0.0 => prop_assert_eq!(got, EvalResult::Finite(0.0)),
                Some(l) if l.exponent == 0.0 => prop_assert_eq!(got, EvalResult::Finite(l.coeff)),
                Some(l) => prop_assert_eq!(got, EvalResult::Infinite(Sign::of(l.coeff))),
            }
        }

        #[test]
        fn product_matches_pointwise(
            fc in prop::collection::vec(-2.0f64..2.0, 1..6),
            gc in prop::collection::vec(-2.0f64..2.0, 1..6),
            a in -1.0f64..1.0,
            h in -1.0f64..1.0,
        ) {
            let f = series_from_catalog("poly", &fc, a, 12).unwrap();
            let g = series_from_catalog("poly", &gc, a, 12).unwrap();
            let fg = f.mul(&g).unwrap();
            let t = a + h;
            let want = f.eval(t).unwrap() * g.eval(t).unwrap();
            let got = fg.eval(t).unwrap();
            let scale = 1.0 + want.abs();
            prop_assert!((got - want).abs() <= 1e-10 * scale, "{} vs {}", got, want);
        }
    }
}
