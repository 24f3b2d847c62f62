//! Long-range dependence tests: modified rescaled range and rescaled variance,
//! both built on a Bartlett-kernel long-run variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{autocovariance, mean, profile_values, Series};

/// Which hypothesis test produced a [`TestResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestTag {
    ModifiedRs,
    RescaledVariance,
    RescaledCovariance,
    JarqueBera,
    LjungBox,
}

/// A test statistic with its p-value and the lag parameter it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: TestTag,
    pub statistic: f64,
    pub p_value: f64,
    /// Truncation lag (HAC lag, Ljung-Box order, ...); zero when not used.
    pub lag: usize,
}

/// Bartlett-weighted long-run covariance of two equal-length series:
/// `sum_{k=-q..q} (1 - |k|/(q+1)) gamma_xy(k)` with divisor-`T` cross-covariances.
pub fn hac_covariance(x: &Series, y: &Series, q: usize) -> Result<f64> {
    let t = x.len();
    if t != y.len() {
        return Err(Error::LengthMismatch { left: t, right: y.len() });
    }
    if t < 2 {
        return Err(Error::TooShort { len: t, min: 2 });
    }
    if q >= t {
        return Err(Error::InvalidParam {
            name: "lag",
            reason: format!("q = {q} must be below the series length {t}"),
        });
    }
    Ok(hac_covariance_values(x.values(), y.values(), q))
}

/// Unvalidated core of [`hac_covariance`] on raw slices.
pub(crate) fn hac_covariance_values(xv: &[f64], yv: &[f64], q: usize) -> f64 {
    let t = xv.len();
    let mx = mean(xv);
    let my = mean(yv);
    // gamma_xy(k) = (1/T) sum_t (x_t - mx)(y_{t-k} - my), k >= 0.
    let cross = |k: usize, flip: bool| -> f64 {
        let mut s = 0.0;
        for i in k..t {
            s += if flip {
                (yv[i] - my) * (xv[i - k] - mx)
            } else {
                (xv[i] - mx) * (yv[i - k] - my)
            };
        }
        s / t as f64
    };
    let mut total = cross(0, false);
    for k in 1..=q {
        let w = 1.0 - k as f64 / (q + 1) as f64;
        total += w * (cross(k, false) + cross(k, true));
    }
    total
}

/// Data-driven Bartlett truncation lag
/// `floor((3T/2)^{1/3} (2 rho1 / (1 - rho1^2))^{2/3})` from the lag-1
/// autocorrelation, clamped to `T - 1`.
pub fn optimal_lag(x: &Series) -> Result<usize> {
    let t = x.len();
    if t < 8 {
        return Err(Error::TooShort { len: t, min: 8 });
    }
    let gamma0 = autocovariance(x.values(), 0);
    if gamma0 == 0.0 {
        return Err(Error::ZeroVariance("optimal_lag"));
    }
    let rho = autocovariance(x.values(), 1) / gamma0;
    if rho.abs() >= 1.0 {
        return Err(Error::InvalidParam {
            name: "autocorrelation",
            reason: format!("lag-1 autocorrelation {rho} leaves the plug-in lag undefined"),
        });
    }
    let q = (1.5 * t as f64).powf(1.0 / 3.0)
        * (2.0 * rho.abs() / (1.0 - rho * rho)).powf(2.0 / 3.0);
    Ok((q.floor() as usize).min(t - 1))
}

fn long_run_variance(x: &Series, q: usize, min_len: usize, what: &'static str) -> Result<f64> {
    let t = x.len();
    if t < min_len {
        return Err(Error::TooShort { len: t, min: min_len });
    }
    let s2 = hac_covariance(x, x, q)?;
    if s2 <= 0.0 {
        return Err(Error::ZeroVariance(what));
    }
    Ok(s2)
}

/// Modified rescaled-range statistic
/// `V = (max X_t - min X_t) / sqrt(T S^2)` with its upper-tail p-value.
pub fn modified_rs_test(x: &Series, q: usize) -> Result<TestResult> {
    let s2 = long_run_variance(x, q, 16, "modified_rs_test")?;
    let prof = profile_values(x.values());
    // Range over t = 1..T; the empty partial sum is not a candidate.
    let (mut lo, mut hi) = (prof[0], prof[0]);
    for &v in &prof[1..] {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let t = x.len() as f64;
    let v_stat = (hi - lo) / (t * s2).sqrt();
    Ok(TestResult {
        test: TestTag::ModifiedRs,
        statistic: v_stat,
        p_value: (1.0 - null_cdf_v(v_stat)).clamp(0.0, 1.0),
        lag: q,
    })
}

/// Rescaled-variance statistic `M = Var(X) / (T S^2)` (divisor-`T` variance
/// of the profile) with its upper-tail p-value.
pub fn rescaled_variance_test(x: &Series, q: usize) -> Result<TestResult> {
    let s2 = long_run_variance(x, q, 16, "rescaled_variance_test")?;
    let prof = profile_values(x.values());
    let pm = mean(&prof);
    let var = prof.iter().map(|v| (v - pm) * (v - pm)).sum::<f64>() / prof.len() as f64;
    let t = x.len() as f64;
    let m_stat = var / (t * s2);
    Ok(TestResult {
        test: TestTag::RescaledVariance,
        statistic: m_stat,
        p_value: (1.0 - null_cdf_m(m_stat)).clamp(0.0, 1.0),
        lag: q,
    })
}

/// Smallest number of series terms evaluated before truncation is allowed.
const CDF_MIN_TERMS: usize = 100;
const CDF_TERM_TOL: f64 = 1e-12;
const CDF_MAX_TERMS: usize = 1_000_000;
/// Below these arguments the CDFs switch to their theta-transformed series;
/// at the switch points both forms agree to full double precision.
const V_DUAL_BELOW: f64 = 0.75;
const M_DUAL_BELOW: f64 = 0.05;

/// Asymptotic null CDF of the modified rescaled-range statistic:
/// `F_V(x) = 1 + 2 sum_{k>=1} (1 - 4 k^2 x^2) exp(-2 k^2 x^2)`.
pub fn null_cdf_v(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < V_DUAL_BELOW {
        // Theta-transformed form of the same series,
        // `sqrt(2) pi^{5/2} x^{-3} sum_{k>=1} k^2 exp(-pi^2 k^2 / (2 x^2))`,
        // whose all-positive terms avoid the catastrophic cancellation the
        // alternating-sign form suffers in the left tail.
        let c = std::f64::consts::PI.powi(2) / (2.0 * x * x);
        let mut s = 0.0;
        for k in 1..=CDF_MAX_TERMS {
            let k2 = (k * k) as f64;
            let term = k2 * (-c * k2).exp();
            s += term;
            if term < CDF_TERM_TOL && k >= CDF_MIN_TERMS {
                break;
            }
        }
        let f = std::f64::consts::SQRT_2 * std::f64::consts::PI.powf(2.5) / x.powi(3) * s;
        return f.clamp(0.0, 1.0);
    }
    let mut f = 1.0;
    for k in 1..=CDF_MAX_TERMS {
        let kx2 = (k as f64 * x).powi(2);
        let term = 2.0 * (1.0 - 4.0 * kx2) * (-2.0 * kx2).exp();
        f += term;
        if term.abs() < CDF_TERM_TOL && k >= CDF_MIN_TERMS {
            break;
        }
    }
    f.clamp(0.0, 1.0)
}

/// Asymptotic null CDF of the rescaled-variance statistic:
/// `F_M(x) = 1 + 2 sum_{k>=1} (-1)^k exp(-2 k^2 pi^2 x)`.
pub fn null_cdf_m(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < M_DUAL_BELOW {
        // Theta-transformed form,
        // `sqrt(2 / (pi x)) sum_{k>=0} exp(-(2k+1)^2 / (8 x))`, stable where
        // the alternating series cancels.
        let mut s = 0.0;
        for k in 0..CDF_MAX_TERMS {
            let odd = (2 * k + 1) as f64;
            let term = (-odd * odd / (8.0 * x)).exp();
            s += term;
            if term < CDF_TERM_TOL && k + 1 >= CDF_MIN_TERMS {
                break;
            }
        }
        let f = (2.0 / (std::f64::consts::PI * x)).sqrt() * s;
        return f.clamp(0.0, 1.0);
    }
    let mut f = 1.0;
    let mut sign = -1.0;
    for k in 1..=CDF_MAX_TERMS {
        let k2 = (k * k) as f64;
        let term = 2.0 * sign * (-2.0 * k2 * std::f64::consts::PI.powi(2) * x).exp();
        f += term;
        sign = -sign;
        if term.abs() < CDF_TERM_TOL && k >= CDF_MIN_TERMS {
            break;
        }
    }
    f.clamp(0.0, 1.0)
}
