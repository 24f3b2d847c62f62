//! Core series containers: daily OHLC bars and derived value series.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lrd::{TestResult, TestTag};

/// Provenance label carried by a [`Series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    RawReturns,
    StandardizedReturns,
    LogVolatility,
    Profile,
    Generic,
}

/// A one-dimensional series of observations with a provenance label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    kind: SeriesKind,
    values: Vec<f64>,
}

impl Series {
    pub fn new(kind: SeriesKind, values: Vec<f64>) -> Self {
        Series { kind, values }
    }

    /// Convenience constructor for unlabeled data.
    pub fn from_values(values: Vec<f64>) -> Self {
        Series::new(SeriesKind::Generic, values)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample autocovariance of a series at lag `k` (divisor `T`).
pub fn autocovariance_of(x: &Series, k: usize) -> Result<f64> {
    if k >= x.len() {
        return Err(Error::InvalidParam {
            name: "lag",
            reason: format!("k = {k} must be below the series length {}", x.len()),
        });
    }
    Ok(autocovariance(&x.values, k))
}

/// Autocovariance at lag `k` with divisor `T`, after demeaning.
pub(crate) fn autocovariance(x: &[f64], k: usize) -> f64 {
    let t = x.len();
    debug_assert!(k < t);
    let m = mean(x);
    let mut s = 0.0;
    for i in k..t {
        s += (x[i] - m) * (x[i - k] - m);
    }
    s / t as f64
}

/// One daily bar. Prices are raw levels, not logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcBar {
    /// Check the bar's internal consistency: positive prices and
    /// `low <= min(open, close) <= max(open, close) <= high`.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (name, v) in [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("{name} price {v} is not positive"));
            }
        }
        if self.low > self.high {
            return Err(format!("low {} exceeds high {}", self.low, self.high));
        }
        if self.low > self.open.min(self.close) || self.high < self.open.max(self.close) {
            return Err(format!(
                "open/close outside [low, high]: o={} h={} l={} c={}",
                self.open, self.high, self.low, self.close
            ));
        }
        Ok(())
    }
}

/// A run of validated daily bars with strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OhlcSeries {
    bars: Vec<OhlcBar>,
}

impl OhlcSeries {
    /// Build from bars, enforcing per-bar consistency and date order.
    pub fn new(bars: Vec<OhlcBar>) -> Result<Self> {
        for (i, bar) in bars.iter().enumerate() {
            bar.check().map_err(|reason| Error::InvalidBar {
                line: i + 1,
                reason,
            })?;
            if i > 0 && bar.date <= bars[i - 1].date {
                return Err(Error::InvalidBar {
                    line: i + 1,
                    reason: format!(
                        "date {} does not increase over {}",
                        bar.date,
                        bars[i - 1].date
                    ),
                });
            }
        }
        Ok(OhlcSeries { bars })
    }

    pub fn bars(&self) -> &[OhlcBar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.bars.iter().map(|b| b.date).collect()
    }

    /// Keep bars with `from <= date <= to` (either bound optional).
    pub fn clip(&self, from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<OhlcSeries> {
        let bars: Vec<OhlcBar> = self
            .bars
            .iter()
            .copied()
            .filter(|b| from.is_none_or(|d| b.date >= d) && to.is_none_or(|d| b.date <= d))
            .collect();
        if bars.is_empty() {
            return Err(Error::EmptyRange);
        }
        Ok(OhlcSeries { bars })
    }
}

/// Daily open-to-close log returns `ln(C_t / O_t)`, one per bar.
pub fn open_close_returns(bars: &OhlcSeries) -> Series {
    let values = bars
        .bars
        .iter()
        .map(|b| (b.close / b.open).ln())
        .collect();
    Series::new(SeriesKind::RawReturns, values)
}

/// Cumulative sums of deviations from the mean.
///
/// `X_t = sum_{i<=t} (x_i - mean)`; the last element is zero by construction.
pub fn profile(x: &Series) -> Result<Series> {
    if x.len() < 2 {
        return Err(Error::TooShort { len: x.len(), min: 2 });
    }
    let m = x.mean();
    let mut acc = 0.0;
    let values = x
        .values
        .iter()
        .map(|&v| {
            acc += v - m;
            acc
        })
        .collect();
    Ok(Series::new(SeriesKind::Profile, values))
}

pub(crate) fn profile_values(x: &[f64]) -> Vec<f64> {
    let m = mean(x);
    let mut acc = 0.0;
    x.iter()
        .map(|&v| {
            acc += v - m;
            acc
        })
        .collect()
}

/// Descriptive statistics plus normality and serial-correlation tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub observations: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `T - 1`).
    pub sd: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub jarque_bera: TestResult,
    pub ljung_box: TestResult,
}

/// Moments, Jarque-Bera, and Ljung-Box `Q(lags)` for a series.
///
/// Skewness and excess kurtosis use biased central moments (divisor `T`);
/// the standard deviation is the usual `T - 1` version.
pub fn describe(x: &Series, lags: usize) -> Result<StatsReport> {
    let t = x.len();
    if lags < 1 {
        return Err(Error::InvalidParam {
            name: "lags",
            reason: "must be at least 1".into(),
        });
    }
    if t <= lags {
        return Err(Error::TooShort { len: t, min: lags + 1 });
    }
    let m = x.mean();
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in &x.values {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let tf = t as f64;
    m2 /= tf;
    m3 /= tf;
    m4 /= tf;
    if m2 == 0.0 {
        return Err(Error::ZeroVariance("describe"));
    }
    let sd = (m2 * tf / (tf - 1.0)).sqrt();
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;

    let jb = tf / 6.0 * (skewness * skewness + excess_kurtosis * excess_kurtosis / 4.0);
    let jarque_bera = TestResult {
        test: TestTag::JarqueBera,
        statistic: jb,
        p_value: chi_squared_upper_tail(jb, 2.0),
        lag: 0,
    };

    let gamma0 = autocovariance(&x.values, 0);
    let mut q = 0.0;
    for k in 1..=lags {
        let rho = autocovariance(&x.values, k) / gamma0;
        q += rho * rho / (tf - k as f64);
    }
    q *= tf * (tf + 2.0);
    let ljung_box = TestResult {
        test: TestTag::LjungBox,
        statistic: q,
        p_value: chi_squared_upper_tail(q, lags as f64),
        lag: lags,
    };

    Ok(StatsReport {
        observations: t,
        mean: m,
        sd,
        skewness,
        excess_kurtosis,
        jarque_bera,
        ljung_box,
    })
}

pub(crate) fn chi_squared_upper_tail(stat: f64, df: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let dist = ChiSquared::new(df).expect("valid degrees of freedom");
    (1.0 - dist.cdf(stat)).clamp(0.0, 1.0)
}
