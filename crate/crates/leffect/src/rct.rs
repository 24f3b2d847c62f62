//! Rescaled covariance test for long-range cross-dependence, with a
//! moving-block bootstrap null distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lrd::{
    hac_covariance_values, modified_rs_test, rescaled_variance_test, TestResult, TestTag,
};
use crate::series::{mean, profile_values, Series};
use crate::spectral::{average_hurst, bandwidth, gph, local_whittle, periodogram};

/// Parameters of the rescaled covariance test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RctConfig {
    /// HAC truncation lag `q >= 1`, shared by the statistic and the
    /// long-range dependence screen.
    pub lag: usize,
    /// Moving-block length, in `[2, T/4]`.
    pub block_length: usize,
    /// Bootstrap replicas, at least 100.
    pub replicas: usize,
    /// Master seed; replica `i` uses an independent substream.
    pub seed: u64,
}

impl RctConfig {
    /// Default configuration: block length `floor(sqrt(T))`, 1000 replicas.
    pub fn new(lag: usize, t: usize, seed: u64) -> Self {
        RctConfig {
            lag,
            block_length: default_block_length(t),
            replicas: 1000,
            seed,
        }
    }
}

/// Rule-of-thumb moving-block length `floor(sqrt(T))`.
pub fn default_block_length(t: usize) -> usize {
    (t as f64).sqrt().floor() as usize
}

/// Hurst plug-in for the rescaled covariance statistic.
///
/// If both long-range dependence tests reject at the 5% level with lag `q`,
/// returns the averaged local Whittle / GPH estimate at the default
/// bandwidth; otherwise falls back to 1/2 (no long memory).
pub fn hurst_for_rct(x: &Series, q: usize) -> Result<f64> {
    let v = modified_rs_test(x, q)?;
    let m = rescaled_variance_test(x, q)?;
    if v.p_value < 0.05 && m.p_value < 0.05 {
        let p = periodogram(x)?;
        let mb = bandwidth(x.len());
        let lw = local_whittle(&p, mb)?;
        let lp = gph(&p, mb)?;
        Ok(average_hurst(&lw, &lp)?.h)
    } else {
        Ok(0.5)
    }
}

fn stat_values(xv: &[f64], yv: &[f64], q: usize, hx: f64, hy: f64) -> Option<f64> {
    let t = xv.len() as f64;
    let px = profile_values(xv);
    let py = profile_values(yv);
    let mx = mean(&px);
    let my = mean(&py);
    let mut cov = 0.0;
    for (a, b) in px.iter().zip(&py) {
        cov += (a - mx) * (b - my);
    }
    cov /= t;
    let s = hac_covariance_values(xv, yv, q);
    if s == 0.0 {
        return None;
    }
    let stat = (q as f64).powf(hx + hy - 1.0) * cov / (t * s);
    stat.is_finite().then_some(stat)
}

/// Rescaled covariance statistic
/// `M_xy(q) = q^{Hx+Hy-1} Cov(X, Y) / (T s_xy(q))`, where `X`, `Y` are the
/// profiles and `s_xy(q)` the Bartlett long-run cross-covariance.
pub fn rescaled_covariance_stat(
    x: &Series,
    y: &Series,
    q: usize,
    hx: f64,
    hy: f64,
) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 16 {
        return Err(Error::TooShort { len: x.len(), min: 16 });
    }
    if q < 1 {
        return Err(Error::InvalidParam {
            name: "lag",
            reason: "the rescaled covariance statistic needs q >= 1".into(),
        });
    }
    stat_values(x.values(), y.values(), q, hx, hy)
        .ok_or(Error::ZeroVariance("rescaled_covariance_stat"))
}

fn block_resample(v: &[f64], block: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let t = v.len();
    let n_blocks = t.div_ceil(block);
    let mut out = Vec::with_capacity(n_blocks * block);
    for _ in 0..n_blocks {
        let start = rng.gen_range(0..=t - block);
        out.extend_from_slice(&v[start..start + block]);
    }
    out.truncate(t);
    out
}

/// Redraws allowed per bootstrap replica before giving up on degenerate
/// resamples (zero long-run covariance).
const MAX_REDRAWS: usize = 10;

/// Rescaled covariance test with a moving-block bootstrap p-value.
///
/// Both series are resampled independently, which destroys cross-links
/// while keeping each margin's short-range structure. Hurst plug-ins are
/// estimated once from the originals and held fixed across replicas; they
/// only enter through a `q^{Hx+Hy-1}` prefactor that cancels in the
/// bootstrap ranking. The two-sided p-value uses the add-one rule.
pub fn rct_pvalue(x: &Series, y: &Series, config: &RctConfig) -> Result<TestResult> {
    let t = x.len();
    if config.block_length < 2 || config.block_length > t / 4 {
        return Err(Error::InvalidParam {
            name: "block_length",
            reason: format!("{} outside [2, {}]", config.block_length, t / 4),
        });
    }
    if config.replicas < 100 {
        return Err(Error::InvalidParam {
            name: "replicas",
            reason: format!("{} is below the minimum 100", config.replicas),
        });
    }
    let hx = hurst_for_rct(x, config.lag)?;
    let hy = hurst_for_rct(y, config.lag)?;
    let observed = rescaled_covariance_stat(x, y, config.lag, hx, hy)?;
    let threshold = observed.abs();

    let xv = x.values();
    let yv = y.values();
    let exceed = (0..config.replicas as u64)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i + 1);
            for _ in 0..MAX_REDRAWS {
                let xs = block_resample(xv, config.block_length, &mut rng);
                let ys = block_resample(yv, config.block_length, &mut rng);
                if let Some(stat) = stat_values(&xs, &ys, config.lag, hx, hy) {
                    return Ok(usize::from(stat.abs() >= threshold));
                }
            }
            Err(Error::DegenerateBootstrap {
                redraws: MAX_REDRAWS,
                cap: MAX_REDRAWS,
            })
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    Ok(TestResult {
        test: TestTag::RescaledCovariance,
        statistic: observed,
        p_value: (1 + exceed) as f64 / (config.replicas + 1) as f64,
        lag: config.lag,
    })
}
