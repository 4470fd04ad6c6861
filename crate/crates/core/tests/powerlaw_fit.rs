use std::f64::consts::PI;

use ernkit::powerlaw::{fit_mle, hurwitz_zeta, sample_discrete_powerlaw, select_xmin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct partial sum plus the integral and midpoint tail corrections.
fn zeta_sum(s: f64, a: f64) -> f64 {
    let n = 200_000;
    let mut sum = 0.0;
    for k in (0..n).rev() {
        sum += (a + k as f64).powf(-s);
    }
    let b = a + n as f64;
    sum + b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s)
}

#[test]
fn zeta_closed_forms() {
    let z2 = PI * PI / 6.0;
    assert!((hurwitz_zeta(2.0, 1.0) - z2).abs() < 1e-12);
    assert!((hurwitz_zeta(4.0, 1.0) - PI.powi(4) / 90.0).abs() < 1e-12);
    assert!((hurwitz_zeta(2.0, 0.5) - 3.0 * z2).abs() < 1e-11);
    assert!((hurwitz_zeta(2.0, 2.0) - (z2 - 1.0)).abs() < 1e-12);
}

#[test]
fn zeta_matches_direct_summation() {
    for &s in &[1.3, 1.5, 2.0, 2.5, 3.0, 4.5] {
        for &a in &[1.0, 2.5, 5.0, 10.0, 37.0] {
            let (got, want) = (hurwitz_zeta(s, a), zeta_sum(s, a));
            assert!((got - want).abs() <= 1e-9 * want, "zeta({s}, {a}) = {got}, direct {want}");
        }
    }
}

#[test]
fn zeta_recurrence() {
    for &s in &[1.7, 2.2, 3.9, 40.0] {
        for &a in &[0.3, 1.0, 6.0] {
            let lhs = hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0);
            assert!((lhs - a.powf(-s)).abs() <= 1e-10 * a.powf(-s), "s={s} a={a}");
        }
    }
}

#[test]
fn sampler_matches_exact_pmf() {
    let (alpha, x_min, n) = (2.5, 3u64, 200_000);
    let xs = sample_discrete_powerlaw(alpha, x_min, n, 9).unwrap();
    assert!(xs.iter().all(|&x| x >= x_min));
    let z = hurwitz_zeta(alpha, x_min as f64);
    for k in x_min..x_min + 6 {
        let p = (k as f64).powf(-alpha) / z;
        let got = xs.iter().filter(|&&x| x == k).count() as f64 / n as f64;
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!((got - p).abs() <= 4.0 * sd, "P(x={k}) = {got}, exact {p}");
    }
    assert_eq!(xs, sample_discrete_powerlaw(alpha, x_min, n, 9).unwrap());
}

#[test]
fn fixed_xmin_recovers_alpha() {
    for &alpha in &[1.8, 2.5, 3.2] {
        let xs = sample_discrete_powerlaw(alpha, 10, 20_000, 4).unwrap();
        let fit = fit_mle(&xs, 10, None).unwrap();
        assert!((fit.alpha - alpha).abs() <= 4.0 * fit.std_err, "{alpha}: {fit:?}");
        assert!((fit.std_err - (fit.alpha - 1.0) / (20_000f64).sqrt()).abs() < 1e-12);
        assert!(fit.ks_distance > 0.0 && fit.ks_distance < 0.02);
        assert_eq!(fit.n_tail, 20_000);
    }
}

#[test]
fn select_xmin_round_trip() {
    let xs = sample_discrete_powerlaw(2.5, 1, 30_000, 3).unwrap();
    let fit = select_xmin(&xs).unwrap();
    assert!((fit.alpha - 2.5).abs() <= 5.0 * fit.std_err + 0.05, "{fit:?}");
    assert!(fit.x_min <= 10, "{fit:?}");
}

#[test]
fn select_xmin_finds_the_tail_of_a_mixture() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    let mut xs: Vec<u64> = (0..20_000).map(|_| r.random_range(1..=30)).collect();
    xs.extend(sample_discrete_powerlaw(2.5, 30, 20_000, 22).unwrap());
    let fit = select_xmin(&xs).unwrap();
    assert!((25..=45).contains(&fit.x_min), "{fit:?}");
    assert!((fit.alpha - 2.5).abs() <= 0.1, "{fit:?}");
    let naive = fit_mle(&xs, 1, None).unwrap();
    assert!(naive.ks_distance > fit.ks_distance);
}

#[test]
fn truncation_restricts_the_tail() {
    let xs = sample_discrete_powerlaw(2.0, 1, 5_000, 5).unwrap();
    let fit = fit_mle(&xs, 2, Some(50)).unwrap();
    assert_eq!(fit.n_tail, xs.iter().filter(|&&x| (2..=50).contains(&x)).count());
    assert_eq!(fit.x_max, Some(50));
    assert!(fit_mle(&xs, 10, Some(5)).is_err());
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(fit_mle(&[5], 1, None).is_err());
    assert!(fit_mle(&[1, 2, 3], 0, None).is_err());
    assert!(select_xmin(&[1, 2, 3, 4, 5]).is_err());
    assert!(sample_discrete_powerlaw(1.0, 1, 10, 1).is_err());
    assert!(sample_discrete_powerlaw(2.0, 0, 10, 1).is_err());
}
