//! Range-based daily variance in the Garman-Klass form and the cleaned
//! volatility series derived from it.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{OhlcBar, OhlcSeries, Series, SeriesKind};

const TWO_LN_2_MINUS_1: f64 = 2.0 * std::f64::consts::LN_2 - 1.0;

/// Garman-Klass variance of a single bar:
/// `0.5 ln(H/L)^2 - (2 ln 2 - 1) ln(C/O)^2`.
///
/// The estimator is unbiased for continuous monitoring but can go negative
/// on individual bars; see [`clean_variance`].
pub fn garman_klass(bar: &OhlcBar) -> f64 {
    let hl = (bar.high / bar.low).ln();
    let co = (bar.close / bar.open).ln();
    0.5 * hl * hl - TWO_LN_2_MINUS_1 * co * co
}

/// Per-bar Garman-Klass variances for a whole series.
pub fn garman_klass_series(bars: &OhlcSeries) -> Vec<f64> {
    bars.bars().iter().map(garman_klass).collect()
}

/// A variance series with non-positive entries removed, still aligned to
/// its source bars through the retained indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolatilitySeries {
    dates: Vec<NaiveDate>,
    variance: Vec<f64>,
    kept: Vec<usize>,
    total: usize,
}

impl VolatilitySeries {
    pub fn len(&self) -> usize {
        self.variance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variance.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    /// Retained variances, all strictly positive.
    pub fn variance(&self) -> &[f64] {
        &self.variance
    }

    /// Indices of the retained entries in the source series.
    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    /// Number of entries in the source series before cleaning.
    pub fn source_len(&self) -> usize {
        self.total
    }

    pub fn dropped(&self) -> usize {
        self.total - self.variance.len()
    }

    pub fn drop_fraction(&self) -> f64 {
        self.dropped() as f64 / self.total as f64
    }

    /// Log volatility `0.5 ln(variance)` per retained day.
    pub fn log_volatility(&self) -> Series {
        let values = self
            .variance
            .iter()
            .map(|&v| {
                debug_assert!(v > 0.0);
                0.5 * v.ln()
            })
            .collect();
        Series::new(SeriesKind::LogVolatility, values)
    }

    /// Restrict a source-aligned series to the retained days.
    pub fn select(&self, full: &Series) -> Result<Series> {
        if full.len() != self.total {
            return Err(Error::LengthMismatch {
                left: full.len(),
                right: self.total,
            });
        }
        let values = self.kept.iter().map(|&i| full.values()[i]).collect();
        Ok(Series::new(full.kind(), values))
    }
}

/// Share of dropped observations above which cleaning fails in strict mode.
pub const DROP_WARN_FRACTION: f64 = 0.05;

/// Drop non-positive variance estimates, keeping date alignment.
///
/// In strict mode, dropping more than 5% of the input is an error;
/// otherwise the caller can inspect [`VolatilitySeries::drop_fraction`]
/// and warn.
pub fn clean_variance(
    dates: &[NaiveDate],
    variance: &[f64],
    strict: bool,
) -> Result<VolatilitySeries> {
    if dates.len() != variance.len() {
        return Err(Error::LengthMismatch {
            left: dates.len(),
            right: variance.len(),
        });
    }
    let total = variance.len();
    let mut out = VolatilitySeries {
        dates: Vec::new(),
        variance: Vec::new(),
        kept: Vec::new(),
        total,
    };
    for (i, &v) in variance.iter().enumerate() {
        if v.is_finite() && v > 0.0 {
            out.dates.push(dates[i]);
            out.variance.push(v);
            out.kept.push(i);
        }
    }
    if out.variance.len() < 2 {
        return Err(Error::TooShort {
            len: out.variance.len(),
            min: 2,
        });
    }
    if strict && out.drop_fraction() > DROP_WARN_FRACTION {
        return Err(Error::ExcessiveDrops {
            dropped: out.dropped(),
            total,
            percent: 100.0 * out.drop_fraction(),
        });
    }
    Ok(out)
}

/// Garman-Klass variances for `bars`, cleaned of non-positive entries.
pub fn gk_volatility(bars: &OhlcSeries, strict: bool) -> Result<VolatilitySeries> {
    clean_variance(&bars.dates(), &garman_klass_series(bars), strict)
}

/// Divide aligned returns by the daily volatility `sqrt(variance)`.
///
/// `returns` must already be restricted to the retained days
/// (see [`VolatilitySeries::select`]).
pub fn standardize_returns(returns: &Series, vol: &VolatilitySeries) -> Result<Series> {
    if returns.len() != vol.len() {
        return Err(Error::LengthMismatch {
            left: returns.len(),
            right: vol.len(),
        });
    }
    let values = returns
        .values()
        .iter()
        .zip(&vol.variance)
        .map(|(&r, &v)| r / v.sqrt())
        .collect();
    Ok(Series::new(SeriesKind::StandardizedReturns, values))
}
