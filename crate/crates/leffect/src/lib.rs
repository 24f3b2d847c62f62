//! Leverage-effect analysis toolkit for daily OHLC series.
//!
//! The crate estimates daily variance from intraday ranges (Garman-Klass),
//! tests returns and volatility for long-range dependence (modified
//! rescaled range and rescaled variance, with local Whittle / GPH Hurst
//! estimates), and measures the returns-volatility cross-dependence with
//! detrended cross-correlation coefficients (DCCA and DMCA) plus a
//! rescaled covariance test. Synthetic generators with known dependence
//! structure (fractional Gaussian noise, ARFIMA, geometric Brownian OHLC
//! bars, correlated fGn pairs) back the statistical test suite and the
//! examples.
//!
//! Start with the `examples/` directory: each example exercises one
//! capability end to end. The `leffect` binary wraps the same pipeline for
//! CSV inputs.
//!
//! ```
//! use leffect::synthetic::gen_fgn;
//! use leffect::spectral::{bandwidth, local_whittle, periodogram};
//!
//! let x = gen_fgn(0.7, 2048, 7).unwrap();
//! let p = periodogram(&x).unwrap();
//! let est = local_whittle(&p, bandwidth(x.len())).unwrap();
//! assert!((est.h - 0.7).abs() < 0.15);
//! ```

pub mod error;
mod fft;
pub mod lrd;
pub mod pipeline;
pub mod rct;
pub mod series;
pub mod spectral;
pub mod synthetic;
pub mod volatility;
pub mod xcorr;

pub use error::{Error, Result};
pub use series::{OhlcBar, OhlcSeries, Series, SeriesKind};
