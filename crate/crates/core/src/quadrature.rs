//! Independent quadrature of the integral definitions, used as an oracle for
//! the series results.
//!
//! `RL I^α f(t) = ((t-a)/2)^α / Γ(α) ∫_{-1}^{1} (1-x)^(α-1) f(τ(x)) dx` with
//! `τ(x) = a + (t-a)(1+x)/2`, so the kernel singularity is absorbed into a
//! Gauss-Jacobi rule with parameters `(α-1, 0)`. Rules come from the
//! Golub-Welsch eigenproblem and are cached per `(α, nodes)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{FracError, Result};
use crate::operators::rl_caputo_bridge;
use crate::series::{Order, TaylorSeries};
use crate::special::{gamma, recip_gamma};

pub const QUAD_REL_TOL: f64 = 1e-9;
pub const MIN_NODES: usize = 8;
pub const MAX_NODES: usize = 256;

/// Nodes and weights on `[-1, 1]` for the weight `(1-x)^(α-1)`.
#[derive(Debug, Clone)]
pub struct GaussJacobiRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobiRule {
    pub fn new(alpha: f64, n: usize) -> Result<GaussJacobiRule> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(FracError::InvalidParameter(format!("kernel order must be positive, got {alpha}")));
        }
        if n == 0 {
            return Err(FracError::InvalidParameter("a rule needs at least one node".into()));
        }
        let a = alpha - 1.0;
        let b = 0.0;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            jac[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
            if k + 1 < n {
                let j = kf + 1.0;
                let s = 2.0 * j + a + b;
                let beta = 4.0 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1.0) * (s - 1.0));
                jac[(k, k + 1)] = beta.sqrt();
                jac[(k + 1, k)] = beta.sqrt();
            }
        }
        let mu0 = 2f64.powf(a + 1.0) / (a + 1.0);
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(GaussJacobiRule {
            alpha,
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Shared immutable rule for `(α, n)`.
    pub fn cached(alpha: f64, n: usize) -> Result<Arc<GaussJacobiRule>> {
        type Cache = RwLock<HashMap<(u64, usize), Arc<GaussJacobiRule>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        let key = (alpha.to_bits(), n);
        if let Some(rule) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(GaussJacobiRule::new(alpha, n)?);
        let mut map = cache.write().unwrap_or_else(|e| e.into_inner());
        Ok(Arc::clone(map.entry(key).or_insert(rule)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// `|Q(2n) - Q(n)|` for the last doubling.
    pub estimate: f64,
    /// Nodes of the accepted rule.
    pub nodes: usize,
}

/// One application of the `n`-node rule. Returns the value and `∫|integrand|`.
fn apply_rule<F>(f: &mut F, alpha: f64, a: f64, t: f64, n: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = GaussJacobiRule::cached(alpha, n)?;
    let half = 0.5 * (t - a);
    let mut sum = 0.0;
    let mut mag = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = w * f(a + half * (1.0 + x))?;
        sum += v;
        mag += v.abs();
    }
    let pre = half.powf(alpha) * recip_gamma(alpha);
    Ok((pre * sum, pre * mag))
}

fn check_interval(alpha: f64, a: f64, t: f64, nodes: usize) -> Result<()> {
    if !(t > a) {
        return Err(FracError::Domain(format!("need t > a, got t = {t}, a = {a}")));
    }
    if !(alpha > 0.0) {
        return Err(FracError::InvalidParameter(format!("integral order must be positive, got {alpha}")));
    }
    if nodes < MIN_NODES {
        return Err(FracError::InvalidParameter(format!("need at least {MIN_NODES} nodes, got {nodes}")));
    }
    Ok(())
}

fn integrate<F>(mut f: F, alpha: f64, a: f64, t: f64, nodes: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_interval(alpha, a, t, nodes)?;
    let (mut q, _) = apply_rule(&mut f, alpha, a, t, nodes)?;
    let mut n = nodes;
    let mut estimate = f64::INFINITY;
    while 2 * n <= MAX_NODES {
        let (q2, mag) = apply_rule(&mut f, alpha, a, t, 2 * n)?;
        estimate = (q2 - q).abs();
        q = q2;
        n *= 2;
        if estimate <= QUAD_REL_TOL * mag {
            return Ok(QuadResult { value: q, estimate, nodes: n });
        }
    }
    Err(FracError::NonConvergence { nodes: n, estimate })
}

/// `RL I^α f(t)` for a plain function by Gauss-Jacobi quadrature with node
/// doubling from `nodes`.
pub fn rl_integral_quad(f: impl Fn(f64) -> f64, alpha: f64, a: f64, t: f64, nodes: usize) -> Result<QuadResult> {
    integrate(|x| Ok(f(x)), alpha, a, t, nodes)
}

/// `RL I^α f(t)` with `f` evaluated from its Taylor data. Evaluation fails
/// loudly when the truncated series is not accurate on `[a, t]`.
pub fn rl_integral_quad_series(f: &TaylorSeries, alpha: f64, t: f64, nodes: usize) -> Result<QuadResult> {
    integrate(|x| f.eval(x), alpha, f.center, t, nodes)
}

/// Caputo derivative as `RL I^(n-α)` of the `n`-th derivative.
///
/// Integer orders return the classical derivative; non-positive orders the
/// Riemann-Liouville integral.
pub fn caputo_quad(f: &TaylorSeries, ord: Order, t: f64, nodes: usize) -> Result<QuadResult> {
    let exact = |value| QuadResult { value, estimate: 0.0, nodes: 0 };
    if ord.alpha == 0.0 {
        return f.eval(t).map(exact);
    }
    if ord.is_integral() {
        return rl_integral_quad_series(f, -ord.alpha, t, nodes);
    }
    let n = ord.branch();
    let fn_ = f.derivative(n)?;
    if ord.is_integer() {
        return fn_.eval(t).map(exact);
    }
    rl_integral_quad_series(&fn_, n as f64 - ord.alpha, t, nodes)
}

/// Riemann-Liouville derivative as the Caputo quadrature plus the
/// initial-value terms.
pub fn rl_derivative_quad(f: &TaylorSeries, ord: Order, t: f64, nodes: usize) -> Result<QuadResult> {
    let mut r = caputo_quad(f, ord, t, nodes)?;
    if ord.is_fractional_derivative() {
        r.value += rl_caputo_bridge(f, ord)?.eval_finite(t)?;
    }
    Ok(r)
}

/// Error estimates `|Q(2n) - Q(n)|` for `levels` successive doublings from `start`.
pub fn doubling_estimates(
    f: impl Fn(f64) -> f64,
    alpha: f64,
    a: f64,
    t: f64,
    start: usize,
    levels: usize,
) -> Result<Vec<f64>> {
    check_interval(alpha, a, t, start)?;
    let mut g = |x| Ok(f(x));
    let mut n = start;
    let (mut q, _) = apply_rule(&mut g, alpha, a, t, n)?;
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        n *= 2;
        let (q2, _) = apply_rule(&mut g, alpha, a, t, n)?;
        out.push((q2 - q).abs());
        q = q2;
    }
    Ok(out)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod 7-15 with bisection of the worst interval.
pub fn adaptive_gk(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_intervals: usize) -> Result<QuadResult> {
    if !(hi > lo) {
        return Err(FracError::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    let (v, e) = gk15(&f, lo, hi);
    let mut parts = vec![(lo, hi, v, e)];
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if error <= tol * value.abs().max(1.0) {
            return Ok(QuadResult { value, estimate: error, nodes: 15 * parts.len() });
        }
        if parts.len() >= max_intervals {
            return Err(FracError::NonConvergence { nodes: 15 * parts.len(), estimate: error });
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap_or(0);
        let (l, r, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (l + r);
        let (v1, e1) = gk15(&f, l, m);
        let (v2, e2) = gk15(&f, m, r);
        parts.push((l, m, v1, e1));
        parts.push((m, r, v2, e2));
    }
}

/// Diagnostic `RL I^α f(t)`: adaptive Gauss-Kronrod on `[a, t-ε]` plus the
/// tail `f(t) ε^α / Γ(α+1)`. The estimate adds the bound
/// `max|f| ε^α / Γ(α+1)` over the sampled tail.
pub fn rl_integral_gk(f: impl Fn(f64) -> f64, alpha: f64, a: f64, t: f64, eps: f64) -> Result<QuadResult> {
    check_interval(alpha, a, t, MIN_NODES)?;
    if !(eps > 0.0 && eps < t - a) {
        return Err(FracError::InvalidParameter(format!("tail width must lie in (0, t-a), got {eps}")));
    }
    let g = recip_gamma(alpha);
    let body = adaptive_gk(|x| f(x) * (t - x).powf(alpha - 1.0) * g, a, t - eps, 1e-12, 4096)?;
    let scale = eps.powf(alpha) / gamma(alpha + 1.0);
    let sup = [t - eps, t - 0.5 * eps, t].iter().map(|&x| f(x).abs()).fold(0.0, f64::max);
    Ok(QuadResult {
        value: body.value + f(t) * scale,
        estimate: body.estimate + sup * scale,
        nodes: body.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{caputo_derivative, rl_differintegral};
    use crate::series::series_from_catalog;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn rule_integrates_weight_moments() {
        // ∫(1-x)^(α-1) dx = 2^α/α and ∫(1-x)^(α-1)(1+x) dx = 2^(α+1)/(α(α+1))
        for alpha in [0.3, 0.5, 1.0, 1.7, 3.2] {
            let r = GaussJacobiRule::new(alpha, 10).unwrap();
            let m0: f64 = r.weights.iter().sum();
            let m1: f64 = r.weights.iter().zip(&r.nodes).map(|(w, x)| w * (1.0 + x)).sum();
            assert!((m0 - 2f64.powf(alpha) / alpha).abs() < 1e-13 * m0);
            let want = 2f64.powf(alpha + 1.0) / (alpha * (alpha + 1.0));
            assert!((m1 - want).abs() < 1e-13 * want);
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes.iter().all(|x| x.abs() < 1.0));
        }
    }

    #[test]
    fn cache_returns_same_rule() {
        let a = GaussJacobiRule::cached(0.37, 16).unwrap();
        let b = GaussJacobiRule::cached(0.37, 16).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn integral_examples() {
        let r = rl_integral_quad(|_| 1.0, 0.5, 0.0, 1.0, 8).unwrap();
        assert!((r.value - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
        let r = rl_integral_quad(|x| x, 1.0, 0.0, 2.0, 8).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = rl_integral_quad(f64::exp, 0.5, 0.0, 1.0, 8).unwrap();
        let exp = series_from_catalog("exp", &[1.0], 0.0, 64).unwrap();
        let series = rl_differintegral(&exp, ord(-0.5)).eval_finite(1.0).unwrap();
        assert!((r.value - series).abs() < 1e-8);
    }

    #[test]
    fn caputo_examples() {
        for a in [0.0, 1.0] {
            let f = series_from_catalog("poly", &[0.0, 1.0], a, 8).unwrap();
            let r = caputo_quad(&f, ord(0.5), a + 1.5, 8).unwrap();
            assert!((r.value - 1.5f64.sqrt() / gamma(1.5)).abs() < 1e-12);
        }
        let c = series_from_catalog("const", &[4.0], 0.0, 8).unwrap();
        assert_eq!(caputo_quad(&c, ord(0.7), 1.0, 8).unwrap().value, 0.0);
        let sq = series_from_catalog("poly", &[0.0, 0.0, 1.0], 0.0, 8).unwrap();
        let r = caputo_quad(&sq, ord(1.5), 1.0, 8).unwrap();
        let series = caputo_derivative(&sq, ord(1.5)).unwrap().eval_finite(1.0).unwrap();
        assert!((r.value - series).abs() < 1e-12);
        assert!((series - 2.0 / gamma(1.5)).abs() < 1e-14);
    }

    #[test]
    fn rl_derivative_examples() {
        let one = series_from_catalog("const", &[1.0], 0.0, 8).unwrap();
        let r = rl_derivative_quad(&one, ord(0.5), 1.0, 8).unwrap();
        assert!((r.value - 0.5641895835477563).abs() < 1e-14);
        let flat = series_from_catalog("poly", &[0.0, 0.0, 1.0, 2.0], 0.0, 8).unwrap();
        let (x, y) = (
            rl_derivative_quad(&flat, ord(1.5), 0.8, 8).unwrap().value,
            caputo_quad(&flat, ord(1.5), 0.8, 8).unwrap().value,
        );
        assert_eq!(x, y);
        let exp = series_from_catalog("exp", &[1.0], 0.0, 64).unwrap();
        let q = rl_derivative_quad(&exp, ord(1.5), 1.0, 8).unwrap().value;
        let s = rl_differintegral(&exp, ord(1.5)).eval_finite(1.0).unwrap();
        assert!((q - s).abs() < 1e-8 * (1.0 + s.abs()));
    }

    #[test]
    fn doubling_estimates_shrink() {
        for alpha in [0.3, 0.5, 1.5, 2.7] {
            let est = doubling_estimates(|x| (3.0 * x).sin() + x.exp(), alpha, 0.0, 2.0, 8, 3).unwrap();
            for w in est.windows(2) {
                assert!(w[1] < w[0] || w[1] < 1e-14, "{est:?}");
            }
        }
    }

    #[test]
    fn gauss_kronrod_diagnostic_agrees() {
        let gk = rl_integral_gk(f64::exp, 0.5, 0.0, 1.0, 1e-10).unwrap();
        let gj = rl_integral_quad(f64::exp, 0.5, 0.0, 1.0, 8).unwrap();
        assert!((gk.value - gj.value).abs() < 1e-8, "{} vs {}", gk.value, gj.value);
        let v = adaptive_gk(|x| x.sqrt(), 0.0, 1.0, 1e-12, 2000).unwrap();
        assert!((v.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn argument_checks() {
        assert!(rl_integral_quad(|x| x, 0.5, 1.0, 1.0, 8).is_err());
        assert!(rl_integral_quad(|x| x, 0.5, 0.0, 1.0, 4).is_err());
        assert!(rl_integral_quad(|x| x, -0.5, 0.0, 1.0, 8).is_err());
        // a truncated series far outside its accuracy fails loudly
        let exp = series_from_catalog("exp", &[1.0], 0.0, 6).unwrap();
        assert!(rl_integral_quad_series(&exp, 0.5, 5.0, 8).is_err());
        // a non-smooth integrand cannot reach the tolerance
        assert!(matches!(
            rl_integral_quad(|x| (x - 0.3).abs().sqrt(), 0.5, 0.0, 1.0, 8),
            Err(FracError::NonConvergence { .. })
        ));
    }
}
