//! Detrended cross-correlation: prefix-sum implementations against naive
//! per-window references, hand-checked window values, and the surrogate test.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use leffect::spectral::periodogram;
use leffect::synthetic::{gen_correlated_pair, gen_fgn};
use leffect::xcorr::{
    centered_ma_residuals, dcca_fluctuation, dfa_fluctuation, dma_fluctuation,
    dmca_fluctuation, fourier_surrogate, rho_dcca, rho_dmca, surrogate_pvalue,
    window_residual_products, MaAlignment, XcMethod,
};
use leffect::{Error, Series};
use proptest::prelude::*;

/// Reference DCCA fluctuations: explicit per-window OLS detrending, no
/// algebraic shortcuts. Returns (xy, xx, yy).
fn naive_dcca(x: &[f64], y: &[f64], s: usize) -> (f64, f64, f64) {
    let profile = |v: &[f64]| -> Vec<f64> {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let mut acc = 0.0;
        v.iter()
            .map(|&u| {
                acc += u - m;
                acc
            })
            .collect()
    };
    let px = profile(x);
    let py = profile(y);
    let t = px.len();
    let sf = s as f64;
    let jbar = (sf - 1.0) / 2.0;
    let sjj = sf * (sf * sf - 1.0) / 12.0;
    let residuals = |p: &[f64], a: usize| -> Vec<f64> {
        let w = &p[a..a + s];
        let mean = w.iter().sum::<f64>() / sf;
        let slope = w
            .iter()
            .enumerate()
            .map(|(j, &v)| (j as f64 - jbar) * v)
            .sum::<f64>()
            / sjj;
        w.iter()
            .enumerate()
            .map(|(j, &v)| v - mean - slope * (j as f64 - jbar))
            .collect()
    };
    let (mut axy, mut axx, mut ayy) = (0.0, 0.0, 0.0);
    for a in 0..=(t - s) {
        let rx = residuals(&px, a);
        let ry = residuals(&py, a);
        for (u, v) in rx.iter().zip(&ry) {
            axy += u * v;
        }
        for u in &rx {
            axx += u * u;
        }
        for v in &ry {
            ayy += v * v;
        }
    }
    let scale = (s * (t - s + 1)) as f64;
    (axy / scale, axx / scale, ayy / scale)
}

/// Reference DMCA fluctuations with direct window averaging (left-heavy
/// centering for even spans).
fn naive_dmca(x: &[f64], y: &[f64], lambda: usize) -> (f64, f64, f64) {
    let profile = |v: &[f64]| -> Vec<f64> {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let mut acc = 0.0;
        v.iter()
            .map(|&u| {
                acc += u - m;
                acc
            })
            .collect()
    };
    let resid = |p: &[f64]| -> Vec<f64> {
        let t = p.len();
        let (h1, h2) = if lambda % 2 == 1 {
            ((lambda - 1) / 2, (lambda - 1) / 2)
        } else {
            (lambda / 2, lambda / 2 - 1)
        };
        (h1..t - h2)
            .map(|c| {
                let ma = p[c - h1..=c + h2].iter().sum::<f64>() / lambda as f64;
                p[c] - ma
            })
            .collect()
    };
    let rx = resid(&profile(x));
    let ry = resid(&profile(y));
    let n = rx.len() as f64;
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (u, v) in rx.iter().zip(&ry) {
        xy += u * v;
        xx += u * u;
        yy += v * v;
    }
    (xy / n, xx / n, yy / n)
}

#[test]
fn dcca_agrees_with_the_naive_reference() {
    let x = gen_fgn(0.6, 512, 11).unwrap();
    let y = gen_fgn(0.8, 512, 12).unwrap();
    for s in [4usize, 5, 13, 20, 64, 200, 256] {
        let (xy, xx, yy) = naive_dcca(x.values(), y.values(), s);
        // The cross fluctuation can cancel toward zero, so its error is
        // judged on the scale of the self fluctuations.
        let scale = (xx * yy).sqrt();
        let diff = (dcca_fluctuation(&x, &y, s).unwrap() - xy).abs();
        assert!(diff <= 1e-10 * scale, "s = {s}: |diff| = {diff:e}");
        assert_relative_eq!(dfa_fluctuation(&x, s).unwrap(), xx, max_relative = 1e-8);
        assert_relative_eq!(dfa_fluctuation(&y, s).unwrap(), yy, max_relative = 1e-8);
        let rho = rho_dcca(&x, &y, s).unwrap();
        assert!(
            (rho.coefficient - xy / scale).abs() <= 1e-10,
            "s = {s}: rho {} vs {}",
            rho.coefficient,
            xy / scale
        );
        assert_eq!(rho.method, XcMethod::Dcca);
        assert_eq!(rho.window, s);
        assert_eq!(rho.p_value, None);
    }
}

#[test]
fn dmca_agrees_with_the_naive_reference() {
    let x = gen_fgn(0.7, 400, 21).unwrap();
    let y = gen_fgn(0.5, 400, 22).unwrap();
    for lambda in [3usize, 4, 9, 20, 21, 100] {
        let (xy, xx, yy) = naive_dmca(x.values(), y.values(), lambda);
        let scale = (xx * yy).sqrt();
        let diff = (dmca_fluctuation(&x, &y, lambda).unwrap() - xy).abs();
        assert!(diff <= 1e-10 * scale, "lambda = {lambda}: |diff| = {diff:e}");
        assert_relative_eq!(dma_fluctuation(&x, lambda).unwrap(), xx, max_relative = 1e-8);
        let rho = rho_dmca(&x, &y, lambda).unwrap();
        assert!(
            (rho.coefficient - xy / scale).abs() <= 1e-10,
            "lambda = {lambda}: rho {} vs {}",
            rho.coefficient,
            xy / scale
        );
    }
}

#[test]
fn window_residual_products_matches_the_hand_computed_window() {
    // Window [0, 1, 4, 9, 16]: OLS residuals are [2, -1, -2, -1, 2],
    // so the mean squared residual is 14/5.
    let w = [0.0, 1.0, 4.0, 9.0, 16.0];
    assert_abs_diff_eq!(window_residual_products(&w, &w), 2.8, epsilon = 1e-12);
    // A window against itself negated flips the sign.
    let neg: Vec<f64> = w.iter().map(|v| -v).collect();
    assert_abs_diff_eq!(window_residual_products(&w, &neg), -2.8, epsilon = 1e-12);
    // Exactly linear windows leave no residual.
    let lin = [1.0, 3.0, 5.0, 7.0, 9.0];
    assert_abs_diff_eq!(window_residual_products(&lin, &w), 0.0, epsilon = 1e-12);
}

#[test]
fn centered_ma_residuals_match_hand_values() {
    let v = [1.0, 2.0, 4.0, 8.0, 16.0];
    let odd = centered_ma_residuals(&v, 3, MaAlignment::LeftHeavy).unwrap();
    let expected = [-1.0 / 3.0, -2.0 / 3.0, -4.0 / 3.0];
    assert_eq!(odd.len(), 3);
    for (g, e) in odd.iter().zip(expected.iter()) {
        assert_abs_diff_eq!(*g, *e, epsilon = 1e-12);
    }
    let msq = odd.iter().map(|r| r * r).sum::<f64>() / 3.0;
    assert_abs_diff_eq!(msq, 7.0 / 9.0, epsilon = 1e-12);

    // Even spans: the extra point sits on the past side by default.
    let left = centered_ma_residuals(&v, 4, MaAlignment::LeftHeavy).unwrap();
    assert_eq!(left.len(), 2);
    assert_abs_diff_eq!(left[0], 4.0 - 15.0 / 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(left[1], 8.0 - 30.0 / 4.0, epsilon = 1e-12);
    let right = centered_ma_residuals(&v, 4, MaAlignment::RightHeavy).unwrap();
    assert_eq!(right.len(), 2);
    assert_abs_diff_eq!(right[0], 2.0 - 15.0 / 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(right[1], 4.0 - 30.0 / 4.0, epsilon = 1e-12);

    assert!(matches!(
        centered_ma_residuals(&v, 2, MaAlignment::LeftHeavy),
        Err(Error::InvalidParam { .. })
    ));
    assert!(matches!(
        centered_ma_residuals(&v[..3], 4, MaAlignment::LeftHeavy),
        Err(Error::TooShort { .. })
    ));
}

#[test]
fn self_correlation_is_one_and_negation_flips_it() {
    let x = gen_fgn(0.7, 1024, 33).unwrap();
    let neg = Series::from_values(x.values().iter().map(|v| -v).collect());
    let affine = Series::from_values(x.values().iter().map(|v| 2.5 * v + 3.0).collect());
    for s in [8usize, 32, 128] {
        let rho = rho_dcca(&x, &x, s).unwrap().coefficient;
        assert_abs_diff_eq!(rho, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            rho_dcca(&x, &neg, s).unwrap().coefficient,
            -1.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            rho_dcca(&x, &affine, s).unwrap().coefficient,
            1.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            dcca_fluctuation(&x, &neg, s).unwrap(),
            -dfa_fluctuation(&x, s).unwrap(),
            epsilon = 1e-12
        );
    }
    for lambda in [5usize, 21, 101] {
        assert_abs_diff_eq!(rho_dmca(&x, &x, lambda).unwrap().coefficient, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            rho_dmca(&x, &neg, lambda).unwrap().coefficient,
            -1.0,
            epsilon = 1e-10
        );
    }
}

#[test]
fn window_sizes_are_validated() {
    let x = gen_fgn(0.5, 64, 1).unwrap();
    assert!(matches!(
        rho_dcca(&x, &x, 3),
        Err(Error::InvalidParam { .. })
    ));
    assert!(matches!(rho_dcca(&x, &x, 33), Err(Error::TooShort { .. })));
    assert!(matches!(
        rho_dmca(&x, &x, 2),
        Err(Error::InvalidParam { .. })
    ));
    assert!(matches!(rho_dmca(&x, &x, 40), Err(Error::TooShort { .. })));
    let y = gen_fgn(0.5, 32, 2).unwrap();
    assert!(matches!(
        rho_dcca(&x, &y, 8),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn dfa_slope_recovers_the_hurst_exponent() {
    // log F(s) against log s has slope H for fractional noise.
    let x = gen_fgn(0.7, 8192, 99).unwrap();
    let scales = [16usize, 32, 64, 128, 256];
    let pts: Vec<(f64, f64)> = scales
        .iter()
        .map(|&s| {
            let f2 = dfa_fluctuation(&x, s).unwrap();
            ((s as f64).ln(), 0.5 * f2.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    assert!(
        (slope - 0.7).abs() < 0.12,
        "DFA slope {slope} too far from H = 0.7"
    );
}

#[test]
fn detrending_filters_a_slow_common_component() {
    // A strong shared cycle much slower than the window inflates the plain
    // Pearson correlation; the detrended coefficients stay near the true
    // innovation correlation.
    let t = 4096usize;
    let slow: Vec<f64> = (0..t)
        .map(|i| 2.0 * (2.0 * std::f64::consts::PI * i as f64 / 500.0).sin())
        .collect();
    let (mut sum_pearson, mut sum_dcca, mut sum_dmca) = (0.0, 0.0, 0.0);
    let reps = 5;
    for seed in 0..reps {
        let (x, y) = gen_correlated_pair(0.5, 0.5, 0.4, t, 500 + seed).unwrap();
        let xs = Series::from_values(
            x.values().iter().zip(&slow).map(|(a, b)| a + b).collect(),
        );
        let ys = Series::from_values(
            y.values().iter().zip(&slow).map(|(a, b)| a + b).collect(),
        );
        let mx = xs.mean();
        let my = ys.mean();
        let (mut cxy, mut cxx, mut cyy) = (0.0, 0.0, 0.0);
        for (a, b) in xs.values().iter().zip(ys.values()) {
            cxy += (a - mx) * (b - my);
            cxx += (a - mx) * (a - mx);
            cyy += (b - my) * (b - my);
        }
        sum_pearson += cxy / (cxx * cyy).sqrt();
        sum_dcca += rho_dcca(&xs, &ys, 20).unwrap().coefficient;
        sum_dmca += rho_dmca(&xs, &ys, 20).unwrap().coefficient;
    }
    let pearson = sum_pearson / reps as f64;
    let dcca = sum_dcca / reps as f64;
    let dmca = sum_dmca / reps as f64;
    assert!(pearson > 0.65, "Pearson {pearson} not inflated by the cycle");
    assert!(
        pearson - dcca > 0.2,
        "DCCA {dcca} not meaningfully below Pearson {pearson}"
    );
    assert!(
        pearson - dmca > 0.1,
        "DMCA {dmca} not meaningfully below Pearson {pearson}"
    );
    assert!((dcca - 0.4).abs() < 0.2, "DCCA {dcca} far from the true 0.4");
}

#[test]
fn surrogates_preserve_the_periodogram_and_mean() {
    for &t in &[256usize, 257] {
        let x = gen_fgn(0.8, t, 7).unwrap();
        let s = fourier_surrogate(&x, 123).unwrap();
        assert_eq!(s.kind(), x.kind());
        assert_abs_diff_eq!(s.mean(), x.mean(), epsilon = 1e-12);
        let px = periodogram(&x).unwrap();
        let ps = periodogram(&s).unwrap();
        let top = px.ordinates().iter().cloned().fold(0.0, f64::max);
        for (a, b) in px.ordinates().iter().zip(ps.ordinates()) {
            assert!(
                (a - b).abs() <= 1e-10 * top,
                "ordinate changed: {a} vs {b} (T = {t})"
            );
        }
        // But the series itself is genuinely shuffled.
        let moved = x
            .values()
            .iter()
            .zip(s.values())
            .filter(|(a, b)| (*a - *b).abs() > 1e-8)
            .count();
        assert!(moved > t / 2, "surrogate barely differs from the input");
    }
}

#[test]
fn surrogates_are_deterministic_in_the_seed() {
    let x = gen_fgn(0.6, 128, 5).unwrap();
    let a = fourier_surrogate(&x, 9).unwrap();
    let b = fourier_surrogate(&x, 9).unwrap();
    let c = fourier_surrogate(&x, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let short = Series::from_values(vec![1.0; 4]);
    assert!(matches!(
        fourier_surrogate(&short, 1),
        Err(Error::TooShort { .. })
    ));
}

#[test]
fn surrogate_pvalue_is_deterministic_and_extreme_for_identical_series() {
    let x = gen_fgn(0.7, 512, 77).unwrap();
    let est1 = surrogate_pvalue(&x, &x, XcMethod::Dcca, 16, 100, 31).unwrap();
    let est2 = surrogate_pvalue(&x, &x, XcMethod::Dcca, 16, 100, 31).unwrap();
    assert_eq!(est1, est2);
    assert_abs_diff_eq!(est1.coefficient, 1.0, epsilon = 1e-10);
    // No surrogate can tie a perfect correlation: add-one p-value floor.
    assert_abs_diff_eq!(est1.p_value.unwrap(), 1.0 / 101.0, epsilon = 1e-15);
    assert_eq!(est1.surrogates, Some(100));
    assert_eq!(est1.seed, Some(31));

    let dmca = surrogate_pvalue(&x, &x, XcMethod::Dmca, 15, 100, 31).unwrap();
    assert_abs_diff_eq!(dmca.p_value.unwrap(), 1.0 / 101.0, epsilon = 1e-15);

    assert!(matches!(
        surrogate_pvalue(&x, &x, XcMethod::Dcca, 16, 99, 31),
        Err(Error::InvalidParam { .. })
    ));
}

#[test]
fn surrogate_pvalue_accepts_independent_series() {
    // Independent inputs should rarely produce small p-values; one fixed
    // seed documents the typical behaviour.
    let x = gen_fgn(0.5, 1024, 201).unwrap();
    let y = gen_fgn(0.5, 1024, 202).unwrap();
    let est = surrogate_pvalue(&x, &y, XcMethod::Dcca, 20, 200, 44).unwrap();
    assert!(est.p_value.unwrap() > 0.05, "p = {:?}", est.p_value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficients_are_bounded_and_antisymmetric(
        seed in 0u64..1000,
        s in 4usize..32,
    ) {
        let x = gen_fgn(0.6, 256, seed).unwrap();
        let y = gen_fgn(0.4, 256, seed + 5000).unwrap();
        let neg_y = Series::from_values(y.values().iter().map(|v| -v).collect());
        let rho = rho_dcca(&x, &y, s).unwrap().coefficient;
        prop_assert!(rho.abs() <= 1.0 + 1e-9, "rho = {rho}");
        let flipped = rho_dcca(&x, &neg_y, s).unwrap().coefficient;
        prop_assert!((rho + flipped).abs() < 1e-9);
        let lambda = s | 1; // odd span for the DMCA variant
        let rho_m = rho_dmca(&x, &y, lambda).unwrap().coefficient;
        prop_assert!(rho_m.abs() <= 1.0 + 1e-9, "rho_m = {rho_m}");
        let flipped_m = rho_dmca(&x, &neg_y, lambda).unwrap().coefficient;
        prop_assert!((rho_m + flipped_m).abs() < 1e-9);
    }

    #[test]
    fn coefficients_are_scale_invariant(
        seed in 0u64..500,
        a in prop::sample::select(vec![-4.0f64, -1.5, 0.5, 3.0]),
        b in prop::sample::select(vec![-2.0f64, 0.25, 1.0, 5.0]),
    ) {
        let x = gen_fgn(0.7, 200, seed).unwrap();
        let y = gen_fgn(0.5, 200, seed + 9000).unwrap();
        let xs = Series::from_values(x.values().iter().map(|v| a * v).collect());
        let ys = Series::from_values(y.values().iter().map(|v| b * v).collect());
        let base = rho_dcca(&x, &y, 10).unwrap().coefficient;
        let scaled = rho_dcca(&xs, &ys, 10).unwrap().coefficient;
        prop_assert!((scaled - (a * b).signum() * base).abs() < 1e-9);
    }
}
