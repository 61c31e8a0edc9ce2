#![allow(dead_code)]

use fracseries::series::series_from_catalog;
use fracseries::TaylorSeries;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Coefficients in `[-1, 1]` of a polynomial in `(t - a)` with exact degree `deg`.
pub fn random_coeffs(rng: &mut ChaCha8Rng, deg: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if c[deg].abs() < 0.1 {
        c[deg] = 0.5;
    }
    c
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, a: f64) -> TaylorSeries {
    let deg = rng.gen_range(0..=max_deg);
    series_from_catalog("poly", &random_coeffs(rng, deg), a, 16).unwrap()
}

/// A fractional order in `(lo, hi)` kept at least `gap` away from integers.
pub fn random_order(rng: &mut ChaCha8Rng, lo: f64, hi: f64, gap: f64) -> f64 {
    loop {
        let a: f64 = rng.gen_range(lo..hi);
        if (a - a.round()).abs() > gap {
            return a;
        }
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
