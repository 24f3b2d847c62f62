//! Tour of the synthetic generators: fractional Gaussian noise, ARFIMA,
//! geometric Brownian OHLC bars, and cross-correlated fGn pairs.
//!
//! Run with `cargo run --example simulate`.

use leffect::series::autocovariance_of;
use leffect::synthetic::{
    fgn_autocovariance, gen_arfima, gen_correlated_pair, gen_fgn, gen_gbm_ohlc,
    pair_feasibility_bound,
};

fn main() -> leffect::Result<()> {
    // Fractional Gaussian noise: unit variance, lag-1 autocovariance
    // 2^{2H-1} - 1 by self-similarity. Mean-centered sample autocovariances
    // of a long-memory series are biased down by Var(mean) = T^{2H-2}, so
    // the fair comparison is against gamma(1) - T^{2H-2}.
    println!("fractional Gaussian noise (T = 8192)");
    let t = 8192;
    for h in [0.3, 0.5, 0.7, 0.9] {
        let x = gen_fgn(h, t, 1)?;
        let g1 = autocovariance_of(&x, 1)?;
        let gamma1 = fgn_autocovariance(h, 1);
        let expected = gamma1 - (t as f64).powf(2.0 * h - 2.0);
        println!(
            "  H = {h}: sample acov(1) = {g1:+.4}; gamma(1) = {gamma1:+.4}, finite-sample expectation {expected:+.4}"
        );
    }

    // ARFIMA(0, d, 0): long memory with acf(1) = d / (1 - d). The same
    // small-sample shrinkage applies as d grows.
    println!("\nARFIMA(0, d, 0) (T = 8192)");
    for d in [-0.3, 0.2, 0.4] {
        let x = gen_arfima(d, 8192, 2)?;
        let g0 = autocovariance_of(&x, 0)?;
        let g1 = autocovariance_of(&x, 1)?;
        println!(
            "  d = {d:+.1}: sample acf(1) = {:+.4}, asymptotic {:+.4}",
            g1 / g0,
            d / (1.0 - d)
        );
    }

    // Daily OHLC bars from intraday geometric Brownian motion. The true
    // daily return variance is sigma^2.
    println!("\ngeometric Brownian OHLC (sigma = 0.01, 250 days, 64 steps/day)");
    let bars = gen_gbm_ohlc(0.01, 250, 64, 3)?;
    let first = &bars.bars()[0];
    let last = &bars.bars()[bars.len() - 1];
    println!(
        "  {} bars, {} .. {}; first close {:.3}, last close {:.3}",
        bars.len(),
        first.date,
        last.date,
        first.close,
        last.close
    );

    // Correlated pair: instantaneous correlation r between two fGn paths
    // of different memory. The attainable |r| shrinks as the Hurst
    // exponents move apart.
    println!("\ncorrelated fGn pair (T = 4096)");
    let bound = pair_feasibility_bound(0.5, 0.9, 4096)?;
    println!("  feasibility bound for H = 0.5 vs 0.9: |r| <= {bound:.4}");
    let (x, y) = gen_correlated_pair(0.5, 0.9, 0.4, 4096, 4)?;
    let (xv, yv) = (x.values(), y.values());
    let t = xv.len() as f64;
    let (mx, my) = (x.mean(), y.mean());
    let cov: f64 = xv
        .iter()
        .zip(yv)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / t;
    let vx = autocovariance_of(&x, 0)?;
    let vy = autocovariance_of(&y, 0)?;
    println!(
        "  requested r = 0.4, sample correlation = {:+.4}",
        cov / (vx * vy).sqrt()
    );
    Ok(())
}
