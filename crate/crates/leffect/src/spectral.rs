//! Periodogram and semiparametric Hurst-exponent estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fft, Complex};
use crate::series::Series;

/// Periodogram ordinates at the Fourier frequencies `2*pi*j/T`, `j = 1..=T/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    n: usize,
    frequencies: Vec<f64>,
    ordinates: Vec<f64>,
}

impl Periodogram {
    /// Assemble a periodogram from precomputed frequencies and ordinates,
    /// e.g. a synthetic spectrum or one produced by other software.
    pub fn from_parts(n: usize, frequencies: Vec<f64>, ordinates: Vec<f64>) -> Result<Self> {
        if frequencies.len() != ordinates.len() {
            return Err(Error::LengthMismatch {
                left: frequencies.len(),
                right: ordinates.len(),
            });
        }
        if n < 2 || frequencies.is_empty() {
            return Err(Error::InvalidParam {
                name: "periodogram",
                reason: "need a series length of at least 2 and at least one frequency".into(),
            });
        }
        Ok(Periodogram {
            n,
            frequencies,
            ordinates,
        })
    }

    /// Length of the series the periodogram was computed from.
    pub fn series_len(&self) -> usize {
        self.n
    }

    /// Number of Fourier frequencies, `T / 2`.
    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }
}

/// Periodogram of the demeaned series:
/// `I(lambda_j) = |sum_t (x_t - mean) e^{-i lambda_j t}|^2 / (2 pi T)`.
pub fn periodogram(x: &Series) -> Result<Periodogram> {
    let t = x.len();
    if t < 8 {
        return Err(Error::TooShort { len: t, min: 8 });
    }
    let m = x.mean();
    let mut buf: Vec<Complex<f64>> = x
        .values()
        .iter()
        .map(|&v| Complex::new(v - m, 0.0))
        .collect();
    fft(&mut buf);
    let half = t / 2;
    let scale = 1.0 / (2.0 * std::f64::consts::PI * t as f64);
    let mut frequencies = Vec::with_capacity(half);
    let mut ordinates = Vec::with_capacity(half);
    for (j, b) in (1..=half).zip(&buf[1..=half]) {
        frequencies.push(2.0 * std::f64::consts::PI * j as f64 / t as f64);
        ordinates.push(b.norm_sqr() * scale);
    }
    Ok(Periodogram {
        n: t,
        frequencies,
        ordinates,
    })
}

/// Default estimation bandwidth `floor(T^0.6)`, capped at `T/2`.
///
/// The small epsilon keeps exact powers (e.g. `1024^0.6 = 64`) from being
/// floored down by floating-point error.
pub fn bandwidth(t: usize) -> usize {
    assert!(t >= 8, "bandwidth requires T >= 8");
    let m = ((t as f64).powf(0.6) + 1e-9).floor() as usize;
    m.min(t / 2)
}

/// Which estimator produced a [`HurstEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorTag {
    LocalWhittle,
    Gph,
    Average,
}

/// A Hurst-exponent estimate with its asymptotic standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub h: f64,
    pub standard_error: f64,
    pub estimator: EstimatorTag,
    /// Number of low frequencies used.
    pub bandwidth: usize,
    /// Set when the optimizer stopped at an edge of the search bracket;
    /// the estimate is then outside the estimator's supported range.
    pub at_boundary: bool,
    /// Zero periodogram ordinates dropped from the log-regression (GPH only).
    pub excluded: usize,
}

fn check_bandwidth(p: &Periodogram, m: usize) -> Result<()> {
    if m < 4 || m > p.len() {
        return Err(Error::InvalidParam {
            name: "bandwidth",
            reason: format!("m = {m} outside [4, {}]", p.len()),
        });
    }
    Ok(())
}

const LW_BRACKET: (f64, f64) = (0.01, 1.49);
const LW_TOL: f64 = 1e-5;

/// Local Whittle estimator over the first `m` frequencies.
///
/// Minimizes `R(H) = ln(mean_j lambda_j^{2H-1} I_j) - (2H-1) mean_j ln lambda_j`
/// by golden-section search on `[0.01, 1.49]`; `se = 1 / (2 sqrt(m))`.
pub fn local_whittle(p: &Periodogram, m: usize) -> Result<HurstEstimate> {
    check_bandwidth(p, m)?;
    let log_lambda: Vec<f64> = p.frequencies[..m].iter().map(|l| l.ln()).collect();
    let mean_log_lambda = log_lambda.iter().sum::<f64>() / m as f64;
    let objective = |h: f64| -> f64 {
        let mut s = 0.0;
        for (ll, ord) in log_lambda.iter().zip(&p.ordinates[..m]) {
            s += ((2.0 * h - 1.0) * ll).exp() * ord;
        }
        (s / m as f64).ln() - (2.0 * h - 1.0) * mean_log_lambda
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = LW_BRACKET;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    while b - a > LW_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let h = 0.5 * (a + b);
    let at_boundary = h - LW_BRACKET.0 < 1e-4 || LW_BRACKET.1 - h < 1e-4;
    Ok(HurstEstimate {
        h,
        standard_error: 0.5 / (m as f64).sqrt(),
        estimator: EstimatorTag::LocalWhittle,
        bandwidth: m,
        at_boundary,
        excluded: 0,
    })
}

/// Log-periodogram (GPH) estimator over the first `m` frequencies.
///
/// OLS of `ln I_j` on `ln(4 sin^2(lambda_j / 2))` with an intercept;
/// `H = 1/2 - slope`, with the finite-sample OLS slope standard error.
/// Zero ordinates are excluded and counted.
pub fn gph(p: &Periodogram, m: usize) -> Result<HurstEstimate> {
    check_bandwidth(p, m)?;
    let mut z = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for j in 0..m {
        if p.ordinates[j] > 0.0 {
            let s = 2.0 * (p.frequencies[j] / 2.0).sin();
            z.push((s * s).ln());
            y.push(p.ordinates[j].ln());
        }
    }
    let excluded = m - z.len();
    let n = z.len();
    if n < 4 {
        return Err(Error::InvalidParam {
            name: "bandwidth",
            reason: format!("only {n} positive ordinates below m = {m}, need at least 4"),
        });
    }
    let nf = n as f64;
    let zbar = z.iter().sum::<f64>() / nf;
    let ybar = y.iter().sum::<f64>() / nf;
    let (mut szz, mut szy) = (0.0, 0.0);
    for j in 0..n {
        let dz = z[j] - zbar;
        szz += dz * dz;
        szy += dz * (y[j] - ybar);
    }
    let slope = szy / szz;
    let mut rss = 0.0;
    for j in 0..n {
        let e = y[j] - ybar - slope * (z[j] - zbar);
        rss += e * e;
    }
    let se = (rss / (nf - 2.0) / szz).sqrt();
    Ok(HurstEstimate {
        h: 0.5 - slope,
        standard_error: se,
        estimator: EstimatorTag::Gph,
        bandwidth: m,
        at_boundary: false,
        excluded,
    })
}

/// Equal-weight combination of a local Whittle and a GPH estimate
/// computed at the same bandwidth.
pub fn average_hurst(a: &HurstEstimate, b: &HurstEstimate) -> Result<HurstEstimate> {
    if a.bandwidth != b.bandwidth {
        return Err(Error::InvalidParam {
            name: "bandwidth",
            reason: format!("estimates use different bandwidths: {} vs {}", a.bandwidth, b.bandwidth),
        });
    }
    let tags = (a.estimator, b.estimator);
    let paired = matches!(
        tags,
        (EstimatorTag::LocalWhittle, EstimatorTag::Gph) | (EstimatorTag::Gph, EstimatorTag::LocalWhittle)
    );
    if !paired {
        return Err(Error::InvalidParam {
            name: "estimator",
            reason: "average needs one local Whittle and one GPH estimate".into(),
        });
    }
    Ok(HurstEstimate {
        h: 0.5 * (a.h + b.h),
        standard_error: 0.5 * (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt(),
        estimator: EstimatorTag::Average,
        bandwidth: a.bandwidth,
        at_boundary: a.at_boundary || b.at_boundary,
        excluded: a.excluded + b.excluded,
    })
}
