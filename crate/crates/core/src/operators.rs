//! Riemann-Liouville and Caputo differintegrals of Taylor data.
//!
//! Every operator maps Taylor data at the lower terminal `a` to a fractional
//! power series in `(t - a)`:
//!
//! ```text
//! RL  D^α f(t) = Σ_{k≥0} f^(k)(a) / Γ(k+1-α) · (t-a)^(k-α)     α ∈ ℝ
//! C   D^α f(t) = Σ_{k≥n} f^(k)(a) / Γ(k+1-α) · (t-a)^(k-α)     n-1 < α < n
//! ```
//!
//! Negative orders are Riemann-Liouville integrals. Integer orders never go
//! through Γ poles: they are routed to exact differentiation or integration
//! of the Taylor data.

use serde::Serialize;

use crate::error::{FracError, Result};
use crate::series::{FracPowerSeries, Order, PowerTerm, TaylorSeries};
use crate::special::{factorial, gen_binom, recip_gamma};

fn power_series(f: &TaylorSeries, terms: Vec<PowerTerm>) -> FracPowerSeries {
    FracPowerSeries::with_meta(f.center, terms, !f.exact, f.radius_hint)
}

/// Riemann-Liouville differintegral of any real order.
pub fn rl_differintegral(f: &TaylorSeries, ord: Order) -> FracPowerSeries {
    let alpha = ord.alpha;
    let terms = if ord.is_integer() {
        if alpha >= 0.0 {
            let m = alpha as usize;
            f.derivs
                .iter()
                .enumerate()
                .skip(m)
                .map(|(k, &d)| PowerTerm { coeff: d / factorial(k - m), exponent: (k - m) as f64 })
                .collect()
        } else {
            let m = (-alpha) as usize;
            f.derivs
                .iter()
                .enumerate()
                .map(|(k, &d)| PowerTerm { coeff: d / factorial(k + m), exponent: (k + m) as f64 })
                .collect()
        }
    } else {
        f.derivs
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let e = k as f64 - alpha;
                PowerTerm { coeff: d * recip_gamma(e + 1.0), exponent: e }
            })
            .collect()
    };
    power_series(f, terms)
}

/// Convenience wrapper: builds the order and applies [`rl_differintegral`].
pub fn rl(f: &TaylorSeries, alpha: f64) -> Result<FracPowerSeries> {
    Ok(rl_differintegral(f, Order::new(alpha)?))
}

/// Caputo derivative for a positive non-integer order.
pub fn caputo_derivative(f: &TaylorSeries, ord: Order) -> Result<FracPowerSeries> {
    if !ord.is_fractional_derivative() {
        return Err(FracError::InvalidParameter(format!(
            "Caputo derivative needs a positive non-integer order, got {}; use rl_differintegral for integer orders",
            ord.alpha
        )));
    }
    let alpha = ord.alpha;
    let terms = f
        .derivs
        .iter()
        .enumerate()
        .skip(ord.branch())
        .map(|(k, &d)| {
            let e = k as f64 - alpha;
            PowerTerm { coeff: d * recip_gamma(e + 1.0), exponent: e }
        })
        .collect();
    Ok(power_series(f, terms))
}

/// Caputo derivative extended to every real order.
///
/// A negative order `-β` is the Riemann-Liouville integral of order `β` and an
/// integer order is the classical derivative.
pub fn caputo_extended(f: &TaylorSeries, ord: Order) -> FracPowerSeries {
    if ord.is_fractional_derivative() {
        caputo_derivative(f, ord).expect("order checked above")
    } else {
        rl_differintegral(f, ord)
    }
}

fn check_local(f_at_t: &TaylorSeries, a: f64) -> Result<f64> {
    let dist = f_at_t.center - a;
    if !(dist >= 0.0) {
        return Err(FracError::Domain(format!(
            "evaluation point {} lies left of the lower terminal {a}",
            f_at_t.center
        )));
    }
    Ok(dist)
}

/// Riemann-Liouville differintegral from derivatives at the evaluation point.
///
/// `f_at_t` is centered at the evaluation point t and `a` is the lower
/// terminal. The coefficients depend on t, so the returned series (centered
/// at `a`) is only meaningful when evaluated at that same t.
pub fn rl_local_form(f_at_t: &TaylorSeries, a: f64, ord: Order) -> Result<FracPowerSeries> {
    check_local(f_at_t, a)?;
    let alpha = ord.alpha;
    let terms = f_at_t
        .derivs
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            let e = k as f64 - alpha;
            PowerTerm { coeff: gen_binom(alpha, k) * d * recip_gamma(e + 1.0), exponent: e }
        })
        .collect();
    Ok(FracPowerSeries::with_meta(a, terms, !f_at_t.exact, f_at_t.radius_hint))
}

/// Caputo counterpart of [`rl_local_form`].
pub fn caputo_local_form(f_at_t: &TaylorSeries, a: f64, ord: Order) -> Result<FracPowerSeries> {
    if !ord.is_fractional_derivative() {
        return Err(FracError::InvalidParameter(format!(
            "Caputo derivative needs a positive non-integer order, got {}",
            ord.alpha
        )));
    }
    check_local(f_at_t, a)?;
    let alpha = ord.alpha;
    let n = ord.branch();
    let terms = f_at_t
        .derivs
        .iter()
        .enumerate()
        .skip(n)
        .map(|(k, &d)| {
            let e = k as f64 - alpha;
            let c = gen_binom(alpha - n as f64, k - n) * d * recip_gamma(e + 1.0);
            PowerTerm { coeff: c, exponent: e }
        })
        .collect();
    Ok(FracPowerSeries::with_meta(a, terms, !f_at_t.exact, f_at_t.radius_hint))
}

/// Initial-value terms separating the two derivatives:
/// `RL D^α f - C D^α f = Σ_{k<n} f^(k)(a) (t-a)^(k-α) / Γ(k+1-α)`.
pub fn rl_caputo_bridge(f: &TaylorSeries, ord: Order) -> Result<FracPowerSeries> {
    if !ord.is_fractional_derivative() {
        return Err(FracError::InvalidParameter(format!(
            "bridge is defined for positive non-integer orders, got {}",
            ord.alpha
        )));
    }
    let alpha = ord.alpha;
    let terms = (0..ord.branch())
        .map(|k| {
            let e = k as f64 - alpha;
            PowerTerm { coeff: f.deriv(k) * recip_gamma(e + 1.0), exponent: e }
        })
        .collect();
    Ok(FracPowerSeries::new(f.center, terms))
}

/// Maximum pointwise deviations of near-integer fractional operators from
/// the exact integer-order ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerLimitReport {
    pub n: u32,
    pub eps: f64,
    /// `RL D^(n-eps)` against `d^n/dt^n`.
    pub rl_below: f64,
    /// `RL D^(n+eps)` against `d^n/dt^n`.
    pub rl_above: f64,
    /// `C D^(n-eps)` against `d^n/dt^n`.
    pub caputo_below: f64,
    /// `RL I^(n±eps)` against the n-fold integral, worse side.
    pub integral: f64,
    /// Largest `|d^n f|` or `|I^n f|` on the grid.
    pub scale: f64,
    pub points: usize,
}

impl IntegerLimitReport {
    pub fn max_deviation(&self) -> f64 {
        self.rl_below.max(self.rl_above).max(self.caputo_below).max(self.integral)
    }

    /// [`Self::max_deviation`] over `1 + scale`.
    pub fn relative_deviation(&self) -> f64 {
        self.max_deviation() / (1.0 + self.scale)
    }
}

/// Compares the fractional operators at orders `n ± eps` with the exact
/// integer-order derivative and integral on the sample points `grid`.
pub fn integer_limit_check(f: &TaylorSeries, n: u32, eps: f64, grid: &[f64]) -> Result<IntegerLimitReport> {
    if n == 0 {
        return Err(FracError::InvalidParameter("integer limit needs n >= 1".into()));
    }
    if !(eps > 0.0 && eps < 0.1) {
        return Err(FracError::InvalidParameter(format!("eps must lie in (0, 0.1), got {eps}")));
    }
    let nf = n as f64;
    let exact_der = rl_differintegral(f, Order::new(nf)?);
    let exact_int = rl_differintegral(f, Order::new(-nf)?);
    let rl_lo = rl_differintegral(f, Order::new(nf - eps)?);
    let rl_hi = rl_differintegral(f, Order::new(nf + eps)?);
    let cap_lo = caputo_derivative(f, Order::new(nf - eps)?)?;
    let int_lo = rl_differintegral(f, Order::new(-nf + eps)?);
    let int_hi = rl_differintegral(f, Order::new(-nf - eps)?);

    let mut report = IntegerLimitReport {
        n,
        eps,
        rl_below: 0.0,
        rl_above: 0.0,
        caputo_below: 0.0,
        integral: 0.0,
        scale: 0.0,
        points: grid.len(),
    };
    for &t in grid {
        let d = exact_der.eval_finite(t)?;
        let i = exact_int.eval_finite(t)?;
        report.scale = report.scale.max(d.abs()).max(i.abs());
        report.rl_below = report.rl_below.max((rl_lo.eval_finite(t)? - d).abs());
        report.rl_above = report.rl_above.max((rl_hi.eval_finite(t)? - d).abs());
        report.caputo_below = report.caputo_below.max((cap_lo.eval_finite(t)? - d).abs());
        let di = (int_lo.eval_finite(t)? - i).abs().max((int_hi.eval_finite(t)? - i).abs());
        report.integral = report.integral.max(di);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_from_catalog;
    use crate::special::gamma;
    use proptest::prelude::*;

    fn poly(c: &[f64], a: f64) -> TaylorSeries {
        series_from_catalog("poly", c, a, 16).unwrap()
    }

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn rl_of_constant() {
        let s = rl_differintegral(&poly(&[1.0], 0.0), ord(0.5));
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].exponent, -0.5);
        assert!((s.terms[0].coeff - 1.0 / gamma(0.5)).abs() < 1e-16);
    }

    #[test]
    fn order_zero_is_identity() {
        let f = series_from_catalog("exp", &[0.3], 0.2, 30).unwrap();
        let s = rl_differintegral(&f, ord(0.0));
        assert_eq!(s, f.to_power_series());
    }

    #[test]
    fn integral_of_monomial() {
        // I^1 t^3 = Γ(4)/Γ(5) t^4
        let s = rl_differintegral(&poly(&[0.0, 0.0, 0.0, 1.0], 0.0), ord(-1.0));
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].exponent, 4.0);
        assert!((s.terms[0].coeff - gamma(4.0) / gamma(5.0)).abs() < 1e-16);
        // fractional integral agrees with the Beta-function closed form
        let s = rl_differintegral(&poly(&[0.0, 0.0, 1.0], 0.0), ord(-0.5));
        assert!((s.terms[0].coeff - gamma(3.0) / gamma(3.5)).abs() < 1e-15);
        assert_eq!(s.terms[0].exponent, 2.5);
    }

    #[test]
    fn caputo_examples() {
        for alpha in [0.2, 0.5, 0.9] {
            for a in [0.0, 1.0] {
                let s = caputo_derivative(&poly(&[0.0, 1.0], a), ord(alpha)).unwrap();
                assert_eq!(s.terms.len(), 1);
                assert!((s.terms[0].coeff - 1.0 / gamma(2.0 - alpha)).abs() < 1e-15);
                assert_eq!(s.terms[0].exponent, 1.0 - alpha);
            }
        }
        assert!(caputo_derivative(&poly(&[4.2], 0.0), ord(0.7)).unwrap().is_zero());
        let s = caputo_derivative(&poly(&[0.0, 0.0, 1.0], 0.0), ord(0.5)).unwrap();
        assert!((s.eval_finite(1.3).unwrap() - 2.0 * 1.3f64.powf(1.5) / gamma(2.5)).abs() < 1e-14);
        assert!(caputo_derivative(&poly(&[1.0], 0.0), ord(1.0)).is_err());
        assert!(caputo_derivative(&poly(&[1.0], 0.0), ord(-0.5)).is_err());
    }

    #[test]
    fn local_form_of_constant_matches() {
        let f_t = poly(&[1.0], 0.8);
        let local = rl_local_form(&f_t, 0.0, ord(0.5)).unwrap();
        let global = rl_differintegral(&poly(&[1.0], 0.0), ord(0.5));
        assert_eq!(local, global);
    }

    #[test]
    fn caputo_local_form_linear() {
        let alpha = 0.4;
        let a = 0.5;
        let t = 1.7;
        let f_t = poly(&[0.0, 1.0], a).recenter(t);
        let s = caputo_local_form(&f_t, a, ord(alpha)).unwrap();
        let want = (t - a).powf(1.0 - alpha) / gamma(2.0 - alpha);
        assert!((s.eval_finite(t).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn bridge_examples() {
        // vanishing low derivatives: empty correction
        let f = poly(&[0.0, 0.0, 3.0], 0.0);
        assert!(rl_caputo_bridge(&f, ord(1.5)).unwrap().is_zero());
        let b = rl_caputo_bridge(&poly(&[1.0], 0.0), ord(0.3)).unwrap();
        assert_eq!(b.terms, vec![PowerTerm { coeff: 1.0 / gamma(0.7), exponent: -0.3 }]);
        let b = rl_caputo_bridge(&poly(&[0.0, 1.0], 2.0), ord(1.25)).unwrap();
        assert_eq!(b.terms.len(), 1);
        assert!((b.terms[0].coeff - 1.0 / gamma(0.75)).abs() < 1e-16);
        assert_eq!(b.terms[0].exponent, 1.0 - 1.25);
    }

    #[test]
    fn integer_limits() {
        let grid: Vec<f64> = (0..=6).map(|i| 0.5 + 0.25 * i as f64).collect();
        let r = integer_limit_check(&poly(&[0.0, 0.0, 1.0], 0.0), 1, 1e-6, &grid).unwrap();
        assert!(r.max_deviation() < 1e-4, "{r:?}");

        let c = integer_limit_check(&poly(&[2.5], 0.0), 3, 1e-6, &grid).unwrap();
        assert_eq!(c.caputo_below, 0.0);

        let e = series_from_catalog("exp", &[1.0], 0.0, 64).unwrap();
        let grid: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
        let r = integer_limit_check(&e, 2, 1e-6, &grid).unwrap();
        assert!(r.caputo_below < 1e-3 && r.rl_above < 1e-3 && r.rl_below < 1e-3, "{r:?}");
    }

    #[test]
    fn integer_order_routes_exactly() {
        let f = poly(&[1.0, 2.0, 3.0, 4.0], 0.0);
        let d2 = rl_differintegral(&f, ord(2.0));
        // f'' = 6 + 24 t
        assert_eq!(d2.terms, vec![
            PowerTerm { coeff: 6.0, exponent: 0.0 },
            PowerTerm { coeff: 24.0, exponent: 1.0 },
        ]);
    }

    proptest! {
        #[test]
        fn semigroup_of_integrals(m in 0usize..6, p in 0.05f64..2.5, q in 0.05f64..2.5) {
            let mut c = vec![0.0; m + 1];
            c[m] = 1.0;
            let f = poly(&c, 0.0);
            let once = rl_differintegral(&f, ord(-(p + q)));
            // apply the second integral to the power-series output of the first
            let first = rl_differintegral(&f, ord(-p));
            let t0 = first.terms[0];
            // I^q (c t^e) = c Γ(e+1)/Γ(e+q+1) t^(e+q)
            let twice_coeff = t0.coeff * gamma(t0.exponent + 1.0) / gamma(t0.exponent + q + 1.0);
            let twice_exp = t0.exponent + q;
            prop_assert_eq!(once.terms.len(), 1);
            prop_assert!((once.terms[0].exponent - twice_exp).abs() < 1e-12);
            let rel = (once.terms[0].coeff - twice_coeff).abs() / twice_coeff.abs();
            prop_assert!(rel < 1e-12, "rel {}", rel);
        }

        #[test]
        fn caputo_vanishes_at_terminal(
            c in prop::collection::vec(-3.0f64..3.0, 1..8),
            a in -1.0f64..1.0,
            alpha in 0.05f64..2.95,
        ) {
            prop_assume!((alpha - alpha.round()).abs() > 1e-3);
            let s = caputo_derivative(&poly(&c, a), ord(alpha)).unwrap();
            prop_assert!(s.least_exponent().is_none_or(|e| e > 0.0));
            prop_assert_eq!(s.eval(a).unwrap(), crate::series::EvalResult::Finite(0.0));
        }

        #[test]
        fn local_and_terminal_forms_agree(
            c in prop::collection::vec(-2.0f64..2.0, 1..7),
            a in -1.0f64..1.0,
            h in 0.05f64..2.0,
            alpha in -2.5f64..2.95,
        ) {
            prop_assume!((alpha - alpha.round()).abs() > 1e-3);
            let f = poly(&c, a);
            let t = a + h;
            let f_t = f.recenter(t);
            let global = rl_differintegral(&f, ord(alpha)).eval_finite(t).unwrap();
            let local = rl_local_form(&f_t, a, ord(alpha)).unwrap().eval_finite(t).unwrap();
            prop_assert!((global - local).abs() <= 1e-10 * (1.0 + global.abs()), "{} vs {}", global, local);
            if alpha > 0.0 {
                let g = caputo_derivative(&f, ord(alpha)).unwrap().eval_finite(t).unwrap();
                let l = caputo_local_form(&f_t, a, ord(alpha)).unwrap().eval_finite(t).unwrap();
                prop_assert!((g - l).abs() <= 1e-10 * (1.0 + g.abs()), "{} vs {}", g, l);
            }
        }
    }
}
