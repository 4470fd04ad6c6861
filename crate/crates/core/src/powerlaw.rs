//! Discrete power-law fitting by maximum likelihood.
//!
//! The scale parameter uses the closed-form estimator with the
//! `x_min - 0.5` continuity correction,
//! `alpha = 1 + n / sum(ln(x_i / (x_min - 0.5)))`, and the goodness of fit
//! is the Kolmogorov–Smirnov distance against the exact discrete power law
//! `P(x) = x^-alpha / zeta(alpha, x_min)` (optionally truncated at `x_max`).
//! [`select_xmin`] scans every candidate lower bound and keeps the fit with
//! the smallest KS distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: u64,
    pub x_max: Option<u64>,
    pub n_tail: usize,
    pub std_err: f64,
    pub ks_distance: f64,
}

/// Minimum number of distinct values [`select_xmin`] accepts.
pub const MIN_DISTINCT_FOR_SCAN: usize = 10;

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `sum_{k>=0} (a+k)^-s` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    zeta_scaled(s, a, a) * a.powf(-s)
}

/// `zeta(s, a) * c^s` for `0 < c <= a`, by Euler–Maclaurin summation after
/// enough explicit terms that `a + N > s`. The scaling keeps every term in
/// `(0, 1]` so large exponents do not underflow.
fn zeta_scaled(s: f64, a: f64, c: f64) -> f64 {
    debug_assert!(s > 1.0 && a > 0.0 && c > 0.0 && c <= a);
    let n = 10 + (s - a).max(0.0).ceil() as usize;
    let mut sum = 0.0;
    for k in 0..n {
        sum += ((a + k as f64) / c).powf(-s);
    }
    let b = a + n as f64;
    let lead = (b / c).powf(-s);
    sum += lead * (b / (s - 1.0) + 0.5);
    // term_j = B_2j / (2j)! * s(s+1)...(s+2j-2) * b^(1-2j) * (b/c)^-s
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = lead / b;
    for (j, &b2j) in BERNOULLI_2J.iter().enumerate() {
        sum += b2j / fact * rising * power;
        let j = j as f64 + 1.0;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        power /= b * b;
    }
    sum
}

/// CDF of the discrete power law on `[x_min, x_max]` (or `[x_min, inf)`).
struct DiscreteCdf {
    alpha: f64,
    scale: f64,
    head: f64,
    norm: f64,
}

impl DiscreteCdf {
    fn new(alpha: f64, x_min: u64, x_max: Option<u64>) -> Self {
        // All zeta values carry the common factor x_min^alpha.
        let scale = x_min as f64;
        let head = zeta_scaled(alpha, scale, scale);
        let tail = x_max.map_or(0.0, |m| zeta_scaled(alpha, (m + 1) as f64, scale));
        DiscreteCdf {
            alpha,
            scale,
            head,
            norm: head - tail,
        }
    }

    /// `P(X <= k)`.
    fn at(&self, k: u64, x_min: u64) -> f64 {
        if k < x_min {
            return 0.0;
        }
        (self.head - zeta_scaled(self.alpha, (k + 1) as f64, self.scale)) / self.norm
    }
}

/// KS distance between a sorted tail and the fitted discrete law.
fn ks_distance(sorted_tail: &[u64], alpha: f64, x_min: u64, x_max: Option<u64>) -> f64 {
    let cdf = DiscreteCdf::new(alpha, x_min, x_max);
    let n = sorted_tail.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev_emp = 0.0;
    let mut i = 0;
    while i < sorted_tail.len() {
        let v = sorted_tail[i];
        let mut j = i;
        while j < sorted_tail.len() && sorted_tail[j] == v {
            j += 1;
        }
        let emp = j as f64 / n;
        // Both CDFs are flat between consecutive data values except for
        // the model's steps, so the gap peaks just below or at `v`.
        let below = cdf.at(v - 1, x_min);
        let at = cdf.at(v, x_min);
        d = d.max((prev_emp - below).abs()).max((emp - at).abs());
        prev_emp = emp;
        i = j;
    }
    d
}

/// Fit over an already sorted, already truncated tail with precomputed logs.
fn fit_sorted(tail: &[u64], ln_tail: &[f64], x_min: u64, x_max: Option<u64>) -> Result<PowerLawFit> {
    let n = tail.len();
    if n < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 samples in the fitting range, found {n}"
        )));
    }
    let offset = (x_min as f64 - 0.5).ln();
    let log_sum: f64 = ln_tail.iter().map(|l| l - offset).sum();
    let alpha = 1.0 + n as f64 / log_sum;
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::Fit(format!("degenerate estimate alpha = {alpha}")));
    }
    Ok(PowerLawFit {
        alpha,
        x_min,
        x_max,
        n_tail: n,
        std_err: (alpha - 1.0) / (n as f64).sqrt(),
        ks_distance: ks_distance(tail, alpha, x_min, x_max),
    })
}

/// Maximum-likelihood fit of the samples falling in `[x_min, x_max]`.
pub fn fit_mle(samples: &[u64], x_min: u64, x_max: Option<u64>) -> Result<PowerLawFit> {
    if x_min < 1 {
        return Err(Error::Domain("x_min must be at least 1".into()));
    }
    if let Some(m) = x_max {
        if m < x_min {
            return Err(Error::Domain(format!("x_max {m} is below x_min {x_min}")));
        }
    }
    let mut tail: Vec<u64> = samples
        .iter()
        .copied()
        .filter(|&x| x >= x_min && x_max.map_or(true, |m| x <= m))
        .collect();
    tail.sort_unstable();
    let ln_tail: Vec<f64> = tail.iter().map(|&x| (x as f64).ln()).collect();
    fit_sorted(&tail, &ln_tail, x_min, x_max)
}

/// Scans every distinct value except the largest as `x_min` and returns the
/// fit with the smallest KS distance (ties: smallest `x_min`). Non-positive
/// samples are ignored.
pub fn select_xmin(samples: &[u64]) -> Result<PowerLawFit> {
    let mut sorted: Vec<u64> = samples.iter().copied().filter(|&x| x >= 1).collect();
    sorted.sort_unstable();
    let mut starts: Vec<usize> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        if i == 0 || sorted[i - 1] != x {
            starts.push(i);
        }
    }
    if starts.len() < MIN_DISTINCT_FOR_SCAN {
        return Err(Error::Fit(format!(
            "x_min selection needs at least {MIN_DISTINCT_FOR_SCAN} distinct values, found {}",
            starts.len()
        )));
    }
    let ln_sorted: Vec<f64> = sorted.iter().map(|&x| (x as f64).ln()).collect();
    let candidates = &starts[..starts.len() - 1];
    let fits: Vec<Option<PowerLawFit>> = candidates
        .par_iter()
        .map(|&s| fit_sorted(&sorted[s..], &ln_sorted[s..], sorted[s], None).ok())
        .collect();
    fits.into_iter()
        .flatten()
        .reduce(|best, f| if f.ks_distance < best.ks_distance { f } else { best })
        .ok_or_else(|| Error::Fit("no admissible x_min candidate".into()))
}

/// `n` i.i.d. draws from `P(x) ∝ x^-alpha` on `x >= x_min`.
///
/// Continuous Pareto inverse-CDF proposals are floored to integers and then
/// thinned by rejection so that the accepted values follow the discrete law
/// exactly.
pub fn sample_discrete_powerlaw(alpha: f64, x_min: u64, n: usize, seed: u64) -> Result<Vec<u64>> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be > 1, got {alpha}")));
    }
    if x_min < 1 {
        return Err(Error::Domain("x_min must be at least 1".into()));
    }
    let beta = alpha - 1.0;
    // Acceptance for proposal k is g(x_min) / g(k), g(k) = k (1 - (1 + 1/k)^-beta).
    let g = |k: f64| k * -(-beta * (1.0 / k).ln_1p()).exp_m1();
    let g_min = g(x_min as f64);
    let limit = 2f64.powi(53);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u: f64 = 1.0 - rng.random::<f64>();
        let y = x_min as f64 * u.powf(-1.0 / beta);
        if !(y < limit) {
            continue;
        }
        let k = y.floor();
        let v: f64 = rng.random();
        if v * g(k) <= g_min {
            out.push(k as u64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - pi2_6).abs() < 1e-14);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_2).abs() < 1e-14);
        assert!((hurwitz_zeta(2.5, 1.0) - 1.341_487_257_250_917_2).abs() < 1e-14);
        // zeta(2, 3) = pi^2/6 - 1 - 1/4
        assert!((hurwitz_zeta(2.0, 3.0) - (pi2_6 - 1.25)).abs() < 1e-14);
        assert!((hurwitz_zeta(1.5, 1.0) - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn closed_form_examples() {
        let f = fit_mle(&[2, 2, 2, 2], 1, None).unwrap();
        assert!((f.alpha - (1.0 + 1.0 / 4f64.ln())).abs() < 1e-12);
        assert!((f.alpha - 1.7213).abs() < 1e-4);
        assert_eq!(f.n_tail, 4);
        let f = fit_mle(&[1, 1], 1, None).unwrap();
        assert!((f.alpha - (1.0 + 1.0 / 2f64.ln())).abs() < 1e-12);
        assert!((f.std_err - (f.alpha - 1.0) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_mle(&[5, 6], 0, None), Err(Error::Domain(_))));
        assert!(matches!(fit_mle(&[5, 6, 7], 6, Some(6)), Err(Error::Fit(_))));
        assert!(matches!(fit_mle(&[5, 6, 7], 6, Some(5)), Err(Error::Domain(_))));
        assert!(matches!(select_xmin(&[3; 50]), Err(Error::Fit(_))));
    }

    #[test]
    fn range_fit_truncates() {
        let f = fit_mle(&[1, 2, 3, 50, 900], 2, Some(60)).unwrap();
        assert_eq!(f.n_tail, 3);
        assert_eq!(f.x_max, Some(60));
        assert!(f.ks_distance >= 0.0 && f.ks_distance <= 1.0);
    }

    #[test]
    fn ks_of_single_point_tail_against_model() {
        // tail {1,1}: empirical CDF jumps to 1 at x=1; the model puts
        // 1/zeta(alpha) there.
        let f = fit_mle(&[1, 1], 1, None).unwrap();
        let expect = 1.0 - 1.0 / hurwitz_zeta(f.alpha, 1.0);
        assert!((f.ks_distance - expect).abs() < 1e-12);
    }

    #[test]
    fn sampler_is_deterministic_and_supported() {
        let a = sample_discrete_powerlaw(2.5, 3, 1000, 11).unwrap();
        let b = sample_discrete_powerlaw(2.5, 3, 1000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| x >= 3));
        assert_eq!(*a.iter().min().unwrap(), 3);
        assert!(sample_discrete_powerlaw(1.0, 1, 10, 0).is_err());
    }
}
