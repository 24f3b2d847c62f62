//! Acceptance gate: one test per shipped guarantee, each printing a single
//! `criterion N: PASS/FAIL — detail` line (run with
//! `cargo test --test acceptance -- --nocapture` to see the lines).
//!
//! Every randomized criterion uses an a-priori fixed master seed (criterion
//! `N` uses `1000 + N`), so each run re-checks the same draws. Monte Carlo
//! sample sizes are set so the stated tolerances hold with wide margins under
//! correct behavior; a failure here means a real regression, not noise.

use chrono::NaiveDate;
use leffect::lrd::{modified_rs_test, optimal_lag, rescaled_variance_test};
use leffect::pipeline::{
    derive_seed, run_pipeline, InstrumentInput, InstrumentReport, PipelineConfig, SeriesLrd,
    SeriesStats,
};
use leffect::rct::{rct_pvalue, RctConfig};
use leffect::spectral::{bandwidth, gph, local_whittle, periodogram};
use leffect::synthetic::{gen_correlated_pair, gen_fgn, gen_gbm_ohlc};
use leffect::volatility::garman_klass;
use leffect::xcorr::{fourier_surrogate, rho_dcca, rho_dmca, surrogate_pvalue, XcMethod};
use leffect::{Series, SeriesKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::path::PathBuf;

fn verdict(n: u32, pass: bool, detail: &str) {
    let line = format!(
        "criterion {n}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)).sqrt()
}

/// Kolmogorov-Smirnov distance between a sample and U(0,1).
fn ks_uniform(ps: &[f64]) -> f64 {
    let mut s = ps.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len() as f64;
    let mut d = 0.0_f64;
    for (i, p) in s.iter().enumerate() {
        d = d.max((i as f64 + 1.0) / n - p).max(p - i as f64 / n);
    }
    d
}

/// iid standard normal sample from substream `i` of the criterion's master.
fn gaussian_sample(base: &ChaCha8Rng, i: u64, t: usize, mut buf: Vec<f64>) -> Series {
    let mut rng = base.clone();
    rng.set_stream(i);
    buf.clear();
    buf.extend((0..t).map(|_| -> f64 { StandardNormal.sample(&mut rng) }));
    Series::from_values(buf)
}

#[test]
fn criterion_01_local_whittle_standard_error_convention() {
    const MASTER: u64 = 1001;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut bandwidth_ok = true;
    for t in 3379..=3422_usize {
        let x = gen_fgn(0.5, t, derive_seed(MASTER, t as u64)).unwrap();
        let m = bandwidth(t);
        bandwidth_ok &= m == 131;
        let est = local_whittle(&periodogram(&x).unwrap(), m).unwrap();
        let rounded = (est.standard_error * 1e4).round() / 1e4;
        lo = lo.min(rounded);
        hi = hi.max(rounded);
    }
    verdict(
        1,
        bandwidth_ok && lo >= 0.0437 && hi <= 0.0440,
        &format!("m = 131 for every T in [3379, 3422]; se rounds to [{lo:.4}, {hi:.4}] (required within [0.0437, 0.0440])"),
    );
}

#[test]
fn criterion_02_hurst_recovery_bias_and_dispersion() {
    const MASTER: u64 = 1002;
    const T: usize = 4096;
    const R: usize = 200;
    let m = bandwidth(T);
    let lw_se = 1.0 / (2.0 * (m as f64).sqrt());
    let mut max_bias = 0.0_f64;
    let mut max_ratio = 0.0_f64;
    for (hi, &h) in [0.3, 0.5, 0.7, 0.9].iter().enumerate() {
        let mut lw = Vec::with_capacity(R);
        let mut gp = Vec::with_capacity(R);
        let mut gse = Vec::with_capacity(R);
        for r in 0..R {
            let x = gen_fgn(h, T, derive_seed(MASTER, (hi * R + r) as u64)).unwrap();
            let p = periodogram(&x).unwrap();
            lw.push(local_whittle(&p, m).unwrap().h);
            let g = gph(&p, m).unwrap();
            gp.push(g.h);
            gse.push(g.standard_error);
        }
        max_bias = max_bias
            .max((mean(&lw) - h).abs())
            .max((mean(&gp) - h).abs());
        max_ratio = max_ratio
            .max(sd(&lw) / (2.0 * lw_se))
            .max(sd(&gp) / (2.0 * mean(&gse)));
    }
    verdict(
        2,
        max_bias < 0.03 && max_ratio <= 1.0,
        &format!("over H in {{0.3, 0.5, 0.7, 0.9}} (T = {T}, m = {m}, {R} replicas): max |bias| {max_bias:.4} (< 0.03), max dispersion / (2 x reported se) {max_ratio:.2} (<= 1)"),
    );
}

#[test]
fn criterion_03_test_size_under_iid_noise() {
    const MASTER: u64 = 1003;
    const T: usize = 2048;
    const R: usize = 1000;
    const Q: usize = 5;
    let base = ChaCha8Rng::seed_from_u64(MASTER);
    let (mut rej_v, mut rej_m) = (0usize, 0usize);
    let mut buf = Vec::with_capacity(T);
    for i in 0..R {
        let x = gaussian_sample(&base, i as u64, T, buf);
        rej_v += usize::from(modified_rs_test(&x, Q).unwrap().p_value < 0.05);
        rej_m += usize::from(rescaled_variance_test(&x, Q).unwrap().p_value < 0.05);
        buf = x.into_values();
    }
    let (sv, sm) = (rej_v as f64 / R as f64, rej_m as f64 / R as f64);
    verdict(
        3,
        (0.02..=0.08).contains(&sv) && (0.02..=0.08).contains(&sm),
        &format!("5% rejection under iid noise: V {sv:.3}, M {sm:.3} (q = {Q}, T = {T}, {R} replicas, bounds [0.02, 0.08])"),
    );
}

#[test]
fn criterion_04_test_power_under_long_memory() {
    const MASTER: u64 = 1004;
    const T: usize = 2048;
    const R: usize = 1000;
    const Q: usize = 5;
    let (mut rej_v, mut rej_m) = (0usize, 0usize);
    for i in 0..R {
        let x = gen_fgn(0.8, T, derive_seed(MASTER, i as u64)).unwrap();
        rej_v += usize::from(modified_rs_test(&x, Q).unwrap().p_value < 0.05);
        rej_m += usize::from(rescaled_variance_test(&x, Q).unwrap().p_value < 0.05);
    }
    let (pv, pm) = (rej_v as f64 / R as f64, rej_m as f64 / R as f64);
    verdict(
        4,
        pv > 0.9 && pm > 0.9,
        &format!("5% rejection under fGn H = 0.8: V {pv:.3}, M {pm:.3} (q = {Q}, T = {T}, {R} replicas, required > 0.9)"),
    );
}

#[test]
fn criterion_05_null_quantiles_match_simulation() {
    const MASTER: u64 = 1005;
    const T: usize = 4096;
    const R: usize = 2_000_000;
    // Asymptotic 95% points of the V and M null distributions.
    const V95: f64 = 1.7472599459;
    const M95: f64 = 0.1868800247;
    let base = ChaCha8Rng::seed_from_u64(MASTER);
    let mut vs = Vec::with_capacity(R);
    let mut ms = Vec::with_capacity(R);
    let mut buf = Vec::with_capacity(T);
    for i in 0..R {
        let x = gaussian_sample(&base, i as u64, T, buf);
        vs.push(modified_rs_test(&x, 0).unwrap().statistic);
        ms.push(rescaled_variance_test(&x, 0).unwrap().statistic);
        buf = x.into_values();
    }
    vs.sort_by(|a, b| a.total_cmp(b));
    ms.sort_by(|a, b| a.total_cmp(b));
    let idx = (0.95 * R as f64).ceil() as usize - 1;
    let (vq, mq) = (vs[idx], ms[idx]);
    verdict(
        5,
        (vq - V95).abs() < 0.02 && (mq - M95).abs() < 0.005,
        &format!("simulated 95% quantiles at T = {T}, {R} replicas: V {vq:.4} vs {V95:.4} (tol 0.02), M {mq:.4} vs {M95:.4} (tol 0.005)"),
    );
}

#[test]
fn criterion_06_cross_correlation_calibration_under_independence() {
    const MASTER: u64 = 1006;
    const T: usize = 4096;
    const R: usize = 500;
    const WINDOW: usize = 20;
    const SURROGATES: usize = 199;
    let mut cd = Vec::with_capacity(R);
    let mut cm = Vec::with_capacity(R);
    let mut pd = Vec::with_capacity(R);
    let mut pm = Vec::with_capacity(R);
    for i in 0..R {
        let seed = derive_seed(MASTER, i as u64);
        let (x, y) = gen_correlated_pair(0.5, 0.9, 0.0, T, seed).unwrap();
        let d = surrogate_pvalue(&x, &y, XcMethod::Dcca, WINDOW, SURROGATES, derive_seed(seed, 1))
            .unwrap();
        let m = surrogate_pvalue(&x, &y, XcMethod::Dmca, WINDOW, SURROGATES, derive_seed(seed, 2))
            .unwrap();
        cd.push(d.coefficient);
        cm.push(m.coefficient);
        pd.push(d.p_value.unwrap());
        pm.push(m.p_value.unwrap());
    }
    let ks_crit = 1.6276 / (R as f64).sqrt();
    let (kd, km) = (ks_uniform(&pd), ks_uniform(&pm));
    let (md, mm) = (mean(&cd), mean(&cm));
    verdict(
        6,
        md.abs() < 0.05 && mm.abs() < 0.05 && kd < ks_crit && km < ks_crit,
        &format!("independent pair (H 0.5/0.9, T = {T}, {R} replicas): mean rho DCCA {md:+.4}, DMCA {mm:+.4} (|.| < 0.05); p-value uniformity KS {kd:.3}/{km:.3} vs 1% critical {ks_crit:.3}"),
    );
}

#[test]
fn criterion_07_self_correlation_identity() {
    const MASTER: u64 = 1007;
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER);
    let mut worst = 0.0_f64;
    for i in 0..100u64 {
        let h = rng.gen_range(0.1..0.9);
        let t = rng.gen_range(256..=2048);
        let x = gen_fgn(h, t, derive_seed(MASTER, i)).unwrap();
        let a = rho_dcca(&x, &x, 20).unwrap().coefficient;
        let b = rho_dmca(&x, &x, 20).unwrap().coefficient;
        worst = worst.max((a - 1.0).abs()).max((b - 1.0).abs());
    }
    verdict(
        7,
        worst <= 1e-10,
        &format!("max |rho(x, x) - 1| = {worst:.2e} over 100 random fGn inputs, both methods (tol 1e-10)"),
    );
}

#[test]
fn criterion_08_garman_klass_efficiency() {
    const MASTER: u64 = 1008;
    const SIGMA: f64 = 0.01;
    let bars = gen_gbm_ohlc(SIGMA, 10_000, 512, MASTER).unwrap();
    let gk: Vec<f64> = bars.bars().iter().map(garman_klass).collect();
    let r2: Vec<f64> = bars
        .bars()
        .iter()
        .map(|b| {
            let r = (b.close / b.open).ln();
            r * r
        })
        .collect();
    let true_var = SIGMA * SIGMA;
    let rel_bias = (mean(&gk) - true_var) / true_var;
    let ratio = sd(&gk) * sd(&gk) / (sd(&r2) * sd(&r2));
    verdict(
        8,
        rel_bias.abs() < 0.05 && ratio < 1.0,
        &format!("10^4 days at sigma = {SIGMA}, 512 steps/day: mean GK relative bias {rel_bias:+.4} (tol 0.05); sampling variance ratio GK / squared return {ratio:.3} (required < 1)"),
    );
}

#[test]
fn criterion_09_surrogates_preserve_periodogram_and_mean() {
    const MASTER: u64 = 1009;
    let mut worst_ord = 0.0_f64;
    let mut worst_mean = 0.0_f64;
    for i in 0..100u64 {
        let seed = derive_seed(MASTER, i);
        let x = gen_fgn(0.7, 1024, seed).unwrap();
        let s = fourier_surrogate(&x, derive_seed(seed, 1)).unwrap();
        let px = periodogram(&x).unwrap();
        let ps = periodogram(&s).unwrap();
        for (a, b) in px.ordinates().iter().zip(ps.ordinates()) {
            worst_ord = worst_ord.max((a - b).abs() / a.max(f64::MIN_POSITIVE));
        }
        worst_mean = worst_mean.max((mean(x.values()) - mean(s.values())).abs());
    }
    verdict(
        9,
        worst_ord <= 1e-10 && worst_mean <= 1e-10,
        &format!("over 100 seeds: max relative periodogram-ordinate change {worst_ord:.2e}, max mean change {worst_mean:.2e} (both tol 1e-10)"),
    );
}

#[test]
fn criterion_10_rescaled_covariance_size_under_independence() {
    const MASTER: u64 = 1010;
    const T: usize = 2048;
    const R: usize = 1000;
    const BLOCK: usize = 256;
    const REPLICAS: usize = 500;
    let mut rej = 0usize;
    let mut qsum = 0usize;
    for i in 0..R {
        let base = derive_seed(MASTER, i as u64);
        let x = gen_fgn(0.9, T, derive_seed(base, 1)).unwrap();
        let y = gen_fgn(0.9, T, derive_seed(base, 2)).unwrap();
        let q = optimal_lag(&y).unwrap();
        qsum += q;
        let cfg = RctConfig {
            lag: q,
            block_length: BLOCK,
            replicas: REPLICAS,
            seed: derive_seed(base, 3),
        };
        rej += usize::from(rct_pvalue(&x, &y, &cfg).unwrap().p_value < 0.05);
    }
    let rate = rej as f64 / R as f64;
    verdict(
        10,
        (0.02..=0.09).contains(&rate),
        &format!("independent fGn pairs (H = 0.9, T = {T}): 5% rejection {rate:.3} over {R} outer replicas (B = {REPLICAS}, block {BLOCK}, mean q {:.1}; bounds [0.02, 0.09])", qsum as f64 / R as f64),
    );
}

fn stats_for(inst: &InstrumentReport, kind: SeriesKind) -> &SeriesStats {
    inst.descriptive
        .iter()
        .find(|s| s.series == kind)
        .expect("series present in descriptive panel")
}

fn lrd_for(inst: &InstrumentReport, kind: SeriesKind) -> &SeriesLrd {
    inst.lrd
        .iter()
        .find(|s| s.series == kind)
        .expect("series present in lrd panel")
}

#[test]
fn criterion_11_vendor_data_reproduction() {
    let Ok(dir) = std::env::var("LEFFECT_VENDOR_DATA") else {
        println!(
            "criterion 11: SKIPPED — set LEFFECT_VENDOR_DATA to a directory holding \
             brent.csv, wti.csv, heating_oil.csv, natural_gas.csv (front-futures \
             daily OHLC) to run the conditional reproduction"
        );
        return;
    };
    let dir = PathBuf::from(dir);
    let names = ["brent", "wti", "heating_oil", "natural_gas"];
    let instruments = names
        .iter()
        .map(|n| InstrumentInput {
            name: n.to_string(),
            path: dir.join(format!("{n}.csv")),
        })
        .collect();
    let config = PipelineConfig {
        from: NaiveDate::from_ymd_opt(2000, 1, 1),
        to: NaiveDate::from_ymd_opt(2013, 6, 30),
        ..PipelineConfig::new(instruments, 1011)
    };
    let bundle = run_pipeline(&config).expect("pipeline run on vendor data");

    // Reference values for the four-instrument energy-futures configuration.
    // Vendor feeds differ in holidays, roll conventions, and settlement
    // prices, so scale-bearing statistics get a ±10% band and everything
    // else is checked at decision level.
    const RAW_SD: [f64; 4] = [0.0089, 0.0094, 0.0092, 0.0131];
    const LV_MEAN: [f64; 4] = [-4.1419, -4.0664, -4.0993, -3.7100];
    const LV_SD: [f64; 4] = [0.4612, 0.4348, 0.4422, 0.4448];
    const LV_V: [f64; 4] = [2.6776, 2.8426, 3.2812, 2.6474];
    const LV_M: [f64; 4] = [0.6971, 0.5708, 0.8271, 0.4882];
    const LW_H: [f64; 4] = [1.0448, 1.1008, 1.0803, 1.0659];
    const GPH_H: [f64; 4] = [1.0383, 1.0987, 1.1861, 0.9838];
    // Long-range dependence decisions at the 5% level for standardized
    // returns (raw returns never reject; log volatility always rejects).
    const STD_REJECT: [bool; 4] = [false, false, false, true];
    // Cross-correlation signs and 1%-level significance.
    const XC_NEGATIVE: [bool; 4] = [true, true, true, false];
    const DCCA_SIG: [bool; 4] = [true, true, false, true];
    const DMCA_SIG: [bool; 4] = [true, true, false, true];

    let within = |x: f64, r: f64| (x - r).abs() <= 0.10 * r.abs();
    let mut failures = Vec::new();
    for (i, inst) in bundle.instruments.iter().enumerate() {
        let name = &inst.name;
        let mut check = |label: &str, ok: bool| {
            if !ok {
                failures.push(format!("{name}: {label}"));
            }
        };
        let raw = stats_for(inst, SeriesKind::RawReturns);
        let lv = stats_for(inst, SeriesKind::LogVolatility);
        check("raw-return sd", within(raw.stats.sd, RAW_SD[i]));
        check("log-volatility mean", within(lv.stats.mean, LV_MEAN[i]));
        check("log-volatility sd", within(lv.stats.sd, LV_SD[i]));

        let raw_lrd = lrd_for(inst, SeriesKind::RawReturns);
        let std_lrd = lrd_for(inst, SeriesKind::StandardizedReturns);
        let lv_lrd = lrd_for(inst, SeriesKind::LogVolatility);
        check("raw returns keep the no-memory null (V)", raw_lrd.modified_rs.p_value >= 0.05);
        check("raw returns keep the no-memory null (M)", raw_lrd.rescaled_variance.p_value >= 0.05);
        check(
            "standardized-return V decision",
            (std_lrd.modified_rs.p_value < 0.05) == STD_REJECT[i],
        );
        check(
            "standardized-return M decision",
            (std_lrd.rescaled_variance.p_value < 0.05) == STD_REJECT[i],
        );
        check("log volatility rejects (V)", lv_lrd.modified_rs.p_value < 0.05);
        check("log volatility rejects (M)", lv_lrd.rescaled_variance.p_value < 0.05);
        check("log-volatility V statistic", within(lv_lrd.modified_rs.statistic, LV_V[i]));
        check("log-volatility M statistic", within(lv_lrd.rescaled_variance.statistic, LV_M[i]));

        check("local Whittle H", within(inst.hurst.local_whittle.h, LW_H[i]));
        check("GPH H", within(inst.hurst.gph.h, GPH_H[i]));

        let dcca = &inst.xcorr.dcca;
        let dmca = &inst.xcorr.dmca;
        check("DCCA sign", (dcca.coefficient < 0.0) == XC_NEGATIVE[i]);
        check("DMCA sign", (dmca.coefficient < 0.0) == XC_NEGATIVE[i]);
        check("DCCA 1% significance", (dcca.p_value.unwrap() < 0.01) == DCCA_SIG[i]);
        check("DMCA 1% significance", (dmca.p_value.unwrap() < 0.01) == DMCA_SIG[i]);
    }
    verdict(
        11,
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "all sign, significance, decision, and ±10% statistic checks hold for {}",
                names.join(", ")
            )
        } else {
            format!("mismatches: {}", failures.join("; "))
        },
    );
}
