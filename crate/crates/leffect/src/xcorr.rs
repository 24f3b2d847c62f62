//! Detrended (DCCA) and moving-average (DMCA) cross-correlation
//! coefficients, with phase-randomization surrogate significance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fft, ifft, Complex};
use crate::series::{profile_values, Series};

/// Which detrending scheme a coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XcMethod {
    Dcca,
    Dmca,
}

/// A detrended cross-correlation coefficient, optionally with a
/// surrogate-test p-value attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XCorrEstimate {
    pub coefficient: f64,
    pub method: XcMethod,
    /// Window size `s` (DCCA) or moving-average span `lambda` (DMCA).
    pub window: usize,
    pub p_value: Option<f64>,
    pub surrogates: Option<usize>,
    pub seed: Option<u64>,
}

fn check_pair(x: &Series, y: &Series) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn check_window(t: usize, w: usize, min_w: usize, name: &'static str) -> Result<()> {
    if w < min_w {
        return Err(Error::InvalidParam {
            name,
            reason: format!("{w} is below the minimum {min_w}"),
        });
    }
    if t < 2 * w {
        return Err(Error::TooShort { len: t, min: 2 * w });
    }
    Ok(())
}

struct FluctuationPieces {
    xy: f64,
    xx: f64,
    yy: f64,
}

/// Covariances of per-window linearly detrended profiles, averaged over all
/// overlapping windows of length `s`. Runs in `O(T)` using prefix sums.
fn dcca_pieces(x: &[f64], y: &[f64], s: usize) -> FluctuationPieces {
    let px = profile_values(x);
    let py = profile_values(y);
    let t = px.len();

    let mut sx = vec![0.0; t + 1];
    let mut sy = vec![0.0; t + 1];
    let mut sjx = vec![0.0; t + 1];
    let mut sjy = vec![0.0; t + 1];
    let mut sxy = vec![0.0; t + 1];
    let mut sxx = vec![0.0; t + 1];
    let mut syy = vec![0.0; t + 1];
    for i in 0..t {
        let (xi, yi) = (px[i], py[i]);
        let j = i as f64;
        sx[i + 1] = sx[i] + xi;
        sy[i + 1] = sy[i] + yi;
        sjx[i + 1] = sjx[i] + j * xi;
        sjy[i + 1] = sjy[i] + j * yi;
        sxy[i + 1] = sxy[i] + xi * yi;
        sxx[i + 1] = sxx[i] + xi * xi;
        syy[i + 1] = syy[i] + yi * yi;
    }

    let sf = s as f64;
    // Sum of squared centered indices within a window.
    let st2 = sf * (sf * sf - 1.0) / 12.0;
    let half = (sf - 1.0) / 2.0;
    let (mut axy, mut axx, mut ayy) = (0.0, 0.0, 0.0);
    for a in 0..=(t - s) {
        let b = a + s;
        let shift = a as f64 + half;
        let wx = sx[b] - sx[a];
        let wy = sy[b] - sy[a];
        let cx = sjx[b] - sjx[a] - shift * wx;
        let cy = sjy[b] - sjy[a] - shift * wy;
        axy += sxy[b] - sxy[a] - wx * wy / sf - cx * cy / st2;
        axx += sxx[b] - sxx[a] - wx * wx / sf - cx * cx / st2;
        ayy += syy[b] - syy[a] - wy * wy / sf - cy * cy / st2;
    }
    let scale = sf * (t - s + 1) as f64;
    FluctuationPieces {
        xy: axy / scale,
        xx: axx / scale,
        yy: ayy / scale,
    }
}

/// Mean squared product of OLS residuals after detrending both windows on
/// the time index; the building block averaged by the DCCA fluctuations.
pub fn window_residual_products(xw: &[f64], yw: &[f64]) -> f64 {
    assert_eq!(xw.len(), yw.len(), "windows must have equal length");
    let s = xw.len() as f64;
    let half = (s - 1.0) / 2.0;
    let st2 = s * (s * s - 1.0) / 12.0;
    let (mut ax, mut ay, mut cx, mut cy, mut dxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (j, (&xv, &yv)) in xw.iter().zip(yw).enumerate() {
        let c = j as f64 - half;
        ax += xv;
        ay += yv;
        cx += c * xv;
        cy += c * yv;
        dxy += xv * yv;
    }
    (dxy - ax * ay / s - cx * cy / st2) / s
}

/// Detrended fluctuation `F^2(s)` of a single series (its profile,
/// linearly detrended in overlapping windows of length `s`).
pub fn dfa_fluctuation(x: &Series, s: usize) -> Result<f64> {
    check_window(x.len(), s, 4, "window")?;
    Ok(dcca_pieces(x.values(), x.values(), s).xx)
}

/// Detrended covariance `F^2_xy(s)` between two series; keeps its sign.
pub fn dcca_fluctuation(x: &Series, y: &Series, s: usize) -> Result<f64> {
    check_pair(x, y)?;
    check_window(x.len(), s, 4, "window")?;
    Ok(dcca_pieces(x.values(), y.values(), s).xy)
}

/// DCCA cross-correlation coefficient
/// `rho(s) = F^2_xy / sqrt(F^2_xx F^2_yy)`.
pub fn rho_dcca(x: &Series, y: &Series, s: usize) -> Result<XCorrEstimate> {
    check_pair(x, y)?;
    check_window(x.len(), s, 4, "window")?;
    let p = dcca_pieces(x.values(), y.values(), s);
    if p.xx <= 0.0 || p.yy <= 0.0 {
        return Err(Error::ZeroVariance("rho_dcca"));
    }
    Ok(XCorrEstimate {
        coefficient: p.xy / (p.xx * p.yy).sqrt(),
        method: XcMethod::Dcca,
        window: s,
        p_value: None,
        surrogates: None,
        seed: None,
    })
}

/// How an even moving-average span splits around its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaAlignment {
    /// One extra point on the past side (the default in this crate).
    LeftHeavy,
    /// One extra point on the future side.
    RightHeavy,
}

/// Residuals of `values` against its centered moving average of span
/// `lambda`, at the `len - lambda + 1` positions where the span fits.
/// `values` is typically a profile.
pub fn centered_ma_residuals(
    values: &[f64],
    lambda: usize,
    align: MaAlignment,
) -> Result<Vec<f64>> {
    if lambda < 3 {
        return Err(Error::InvalidParam {
            name: "lambda",
            reason: format!("{lambda} is below the minimum 3"),
        });
    }
    let t = values.len();
    if t < lambda {
        return Err(Error::TooShort { len: t, min: lambda });
    }
    let (h1, h2) = if lambda % 2 == 1 {
        ((lambda - 1) / 2, (lambda - 1) / 2)
    } else {
        match align {
            MaAlignment::LeftHeavy => (lambda / 2, lambda / 2 - 1),
            MaAlignment::RightHeavy => (lambda / 2 - 1, lambda / 2),
        }
    };
    let mut prefix = vec![0.0; t + 1];
    for i in 0..t {
        prefix[i + 1] = prefix[i] + values[i];
    }
    let lf = lambda as f64;
    let mut out = Vec::with_capacity(t - lambda + 1);
    for c in h1..(t - h2) {
        let ma = (prefix[c + h2 + 1] - prefix[c - h1]) / lf;
        out.push(values[c] - ma);
    }
    Ok(out)
}

fn dmca_pieces(x: &[f64], y: &[f64], lambda: usize) -> FluctuationPieces {
    let px = profile_values(x);
    let py = profile_values(y);
    let rx = centered_ma_residuals(&px, lambda, MaAlignment::LeftHeavy)
        .expect("window validated by caller");
    let ry = centered_ma_residuals(&py, lambda, MaAlignment::LeftHeavy)
        .expect("window validated by caller");
    let n = rx.len() as f64;
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (&a, &b) in rx.iter().zip(&ry) {
        xy += a * b;
        xx += a * a;
        yy += b * b;
    }
    FluctuationPieces {
        xy: xy / n,
        xx: xx / n,
        yy: yy / n,
    }
}

/// Moving-average fluctuation `F^2(lambda)` of a single series.
pub fn dma_fluctuation(x: &Series, lambda: usize) -> Result<f64> {
    check_window(x.len(), lambda, 3, "lambda")?;
    Ok(dmca_pieces(x.values(), x.values(), lambda).xx)
}

/// Moving-average detrended covariance `F^2_xy(lambda)`; keeps its sign.
pub fn dmca_fluctuation(x: &Series, y: &Series, lambda: usize) -> Result<f64> {
    check_pair(x, y)?;
    check_window(x.len(), lambda, 3, "lambda")?;
    Ok(dmca_pieces(x.values(), y.values(), lambda).xy)
}

/// DMCA cross-correlation coefficient
/// `rho(lambda) = F^2_xy / sqrt(F^2_xx F^2_yy)`.
pub fn rho_dmca(x: &Series, y: &Series, lambda: usize) -> Result<XCorrEstimate> {
    check_pair(x, y)?;
    check_window(x.len(), lambda, 3, "lambda")?;
    let p = dmca_pieces(x.values(), y.values(), lambda);
    if p.xx <= 0.0 || p.yy <= 0.0 {
        return Err(Error::ZeroVariance("rho_dmca"));
    }
    Ok(XCorrEstimate {
        coefficient: p.xy / (p.xx * p.yy).sqrt(),
        method: XcMethod::Dmca,
        window: lambda,
        p_value: None,
        surrogates: None,
        seed: None,
    })
}

fn surrogate_values(values: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let t = values.len();
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft(&mut buf);
    let half = t.div_ceil(2);
    for j in 1..half {
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        buf[j] = Complex::from_polar(buf[j].norm(), phi);
        buf[t - j] = buf[j].conj();
    }
    // DC (and the Nyquist bin for even T) stay untouched, so the mean and
    // the full periodogram are preserved exactly.
    ifft(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Phase-randomization surrogate: same periodogram and mean as `x`,
/// phases drawn uniformly.
pub fn fourier_surrogate(x: &Series, seed: u64) -> Result<Series> {
    if x.len() < 8 {
        return Err(Error::TooShort { len: x.len(), min: 8 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Series::new(x.kind(), surrogate_values(x.values(), &mut rng)))
}

/// Two-sided surrogate test of `rho = 0`: `y` is phase-randomized `n` times
/// with `x` held fixed, and the add-one p-value counts surrogate
/// coefficients at least as large in absolute value as the observed one.
pub fn surrogate_pvalue(
    x: &Series,
    y: &Series,
    method: XcMethod,
    window: usize,
    n: usize,
    seed: u64,
) -> Result<XCorrEstimate> {
    if n < 100 {
        return Err(Error::InvalidParam {
            name: "surrogates",
            reason: format!("{n} is below the minimum 100"),
        });
    }
    let observed = match method {
        XcMethod::Dcca => rho_dcca(x, y, window)?,
        XcMethod::Dmca => rho_dmca(x, y, window)?,
    };
    let threshold = observed.coefficient.abs();
    let xv = x.values();
    let yv = y.values();
    let exceed: usize = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i + 1);
            let ys = surrogate_values(yv, &mut rng);
            let p = match method {
                XcMethod::Dcca => dcca_pieces(xv, &ys, window),
                XcMethod::Dmca => dmca_pieces(xv, &ys, window),
            };
            let rho = p.xy / (p.xx * p.yy).sqrt();
            usize::from(rho.abs() >= threshold)
        })
        .sum();
    Ok(XCorrEstimate {
        p_value: Some((1 + exceed) as f64 / (n + 1) as f64),
        surrogates: Some(n),
        seed: Some(seed),
        ..observed
    })
}
