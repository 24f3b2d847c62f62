//! Synthetic series with known dependence structure: fractional Gaussian
//! noise, ARFIMA(0, d, 0), geometric Brownian OHLC bars, and correlated
//! fGn pairs.

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fft, Complex};
use crate::series::{OhlcBar, OhlcSeries, Series};

const MIN_T: usize = 8;

fn check_len(t: usize) -> Result<()> {
    if t < MIN_T {
        return Err(Error::TooShort { len: t, min: MIN_T });
    }
    Ok(())
}

fn check_hurst(name: &'static str, h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParam {
            name,
            reason: format!("H = {h} must lie strictly inside (0, 1)"),
        });
    }
    Ok(())
}

/// fGn autocovariance `gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2`
/// at unit variance.
pub fn fgn_autocovariance(h: f64, k: usize) -> f64 {
    let kf = k as f64;
    let p = 2.0 * h;
    0.5 * ((kf + 1.0).powf(p) - 2.0 * kf.powf(p) + (kf - 1.0).abs().powf(p))
}

/// Eigenvalues of the circulant embedding of the fGn covariance, length `2T`.
fn fgn_eigenvalues(h: f64, t: usize) -> Result<Vec<f64>> {
    let m = 2 * t;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for k in 0..=t {
        row.push(Complex::new(fgn_autocovariance(h, k), 0.0));
    }
    for k in (1..t).rev() {
        row.push(Complex::new(fgn_autocovariance(h, k), 0.0));
    }
    fft(&mut row);
    let max = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
    let mut eigs = Vec::with_capacity(m);
    for c in row {
        if c.re < -1e-8 * max {
            // Would require approximation; does not happen for fGn.
            return Err(Error::InvalidParam {
                name: "hurst",
                reason: format!("circulant embedding not positive semi-definite for H = {h}"),
            });
        }
        eigs.push(c.re.max(0.0));
    }
    Ok(eigs)
}

/// Exact fractional Gaussian noise of length `t` via circulant embedding,
/// unit variance, Hurst exponent `h`.
pub fn gen_fgn(h: f64, t: usize, seed: u64) -> Result<Series> {
    check_hurst("hurst", h)?;
    check_len(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eigs = fgn_eigenvalues(h, t)?;
    Ok(Series::from_values(fgn_from_innovations(&eigs, t, &mut |_| {
        rng.sample(StandardNormal)
    })))
}

/// Build one fGn path from embedding eigenvalues, pulling standard normal
/// innovations from `draw` in a fixed order (two reals per frequency).
fn fgn_from_innovations(eigs: &[f64], t: usize, draw: &mut dyn FnMut(usize) -> f64) -> Vec<f64> {
    let m = 2 * t;
    let mf = m as f64;
    let mut w = vec![Complex::new(0.0, 0.0); m];
    w[0] = Complex::new((eigs[0] / mf).sqrt() * draw(0), 0.0);
    w[t] = Complex::new((eigs[t] / mf).sqrt() * draw(1), 0.0);
    for j in 1..t {
        let scale = (eigs[j] / (2.0 * mf)).sqrt();
        let a = draw(2 * j);
        let b = draw(2 * j + 1);
        w[j] = Complex::new(scale * a, scale * b);
        w[m - j] = w[j].conj();
    }
    fft(&mut w);
    w.into_iter().take(t).map(|c| c.re).collect()
}

/// Largest attainable innovation correlation for an fGn pair with Hurst
/// exponents `h1`, `h2` at length `t`:
/// `c = (1/M) sum_j sqrt(lambda1_j lambda2_j)`.
///
/// A target cross-correlation `r` is feasible iff `|r| <= c`; `c = 1`
/// when `h1 == h2`.
pub fn pair_feasibility_bound(h1: f64, h2: f64, t: usize) -> Result<f64> {
    check_hurst("h1", h1)?;
    check_hurst("h2", h2)?;
    check_len(t)?;
    let e1 = fgn_eigenvalues(h1, t)?;
    let e2 = fgn_eigenvalues(h2, t)?;
    let m = e1.len() as f64;
    Ok(e1
        .iter()
        .zip(&e2)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum::<f64>()
        / m)
}

/// Two fGn paths with Hurst exponents `h1`, `h2` and instantaneous
/// cross-correlation `r`, built by sharing spectral innovations.
///
/// Errors when `|r|` exceeds the feasibility bound
/// ([`pair_feasibility_bound`]); with `h1 == h2` and `r = 1` the two
/// series coincide exactly.
pub fn gen_correlated_pair(
    h1: f64,
    h2: f64,
    r: f64,
    t: usize,
    seed: u64,
) -> Result<(Series, Series)> {
    check_hurst("h1", h1)?;
    check_hurst("h2", h2)?;
    check_len(t)?;
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::InvalidParam {
            name: "correlation",
            reason: format!("r = {r} outside [-1, 1]"),
        });
    }
    let e1 = fgn_eigenvalues(h1, t)?;
    let e2 = fgn_eigenvalues(h2, t)?;
    let m = e1.len() as f64;
    let c = e1
        .iter()
        .zip(&e2)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum::<f64>()
        / m;
    if r.abs() > c * (1.0 + 1e-12) {
        return Err(Error::InvalidParam {
            name: "correlation",
            reason: format!(
                "r = {r} is infeasible for H = ({h1}, {h2}): the attainable bound is {c:.6}"
            ),
        });
    }
    let mut rho = (r / c).clamp(-1.0, 1.0);
    // The bound itself carries O(1e-15) summation error, so a request at
    // the bound can land a few ulps inside full coherence; snap it so the
    // documented exact coincidence at `h1 == h2`, `|r| = 1` holds bitwise.
    if 1.0 - rho.abs() < 1e-9 {
        rho = rho.signum();
    }
    let mix = (1.0 - rho * rho).max(0.0).sqrt();

    // Innovations are drawn in pairs (u for the first series, v for the
    // second's independent part) at every frequency slot.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * t;
    let mut u = Vec::with_capacity(n);
    let mut z = Vec::with_capacity(n);
    for _ in 0..n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        u.push(a);
        z.push(rho * a + mix * b);
    }
    let x = fgn_from_innovations(&e1, t, &mut |slot| u[slot]);
    let y = fgn_from_innovations(&e2, t, &mut |slot| z[slot]);
    Ok((Series::from_values(x), Series::from_values(y)))
}

/// ARFIMA(0, d, 0) innovations-to-output MA weights satisfy
/// `psi_k = psi_{k-1} (k - 1 + d) / k`; the series is the truncated
/// MA(infinity) with horizon `10 T` and a full burn-in.
pub fn gen_arfima(d: f64, t: usize, seed: u64) -> Result<Series> {
    if !(d > -0.5 && d < 0.5) {
        return Err(Error::InvalidParam {
            name: "d",
            reason: format!("d = {d} must lie strictly inside (-0.5, 0.5)"),
        });
    }
    check_len(t)?;
    let k = 10 * t;
    let mut psi = Vec::with_capacity(k + 1);
    psi.push(1.0);
    for i in 1..=k {
        let prev = psi[i - 1];
        psi.push(prev * (i as f64 - 1.0 + d) / i as f64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..t + k).map(|_| rng.sample(StandardNormal)).collect();

    // Linear convolution by FFT; keep only the outputs with a full window.
    let len = (t + 2 * k).next_power_of_two();
    let mut fa = vec![Complex::new(0.0, 0.0); len];
    let mut fb = vec![Complex::new(0.0, 0.0); len];
    for (i, &p) in psi.iter().enumerate() {
        fa[i] = Complex::new(p, 0.0);
    }
    for (i, &e) in noise.iter().enumerate() {
        fb[i] = Complex::new(e, 0.0);
    }
    fft(&mut fa);
    fft(&mut fb);
    for (a, b) in fa.iter_mut().zip(&fb) {
        *a *= *b;
    }
    crate::fft::ifft(&mut fa);
    let values = fa[k..k + t].iter().map(|c| c.re).collect();
    Ok(Series::from_values(values))
}

/// How intraday extremes are read off the simulated path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremesMode {
    /// Sample each step's true high/low from the Brownian-bridge extreme
    /// distribution, removing discretization bias.
    #[default]
    BridgeExact,
    /// Take extremes over the discrete grid only; biased low in range,
    /// shrinking as steps increase.
    Grid,
}

/// Zero-drift geometric Brownian OHLC bars with daily log volatility
/// `sigma`, using bridge-exact intraday extremes.
pub fn gen_gbm_ohlc(sigma: f64, days: usize, steps_per_day: usize, seed: u64) -> Result<OhlcSeries> {
    gen_gbm_ohlc_with_mode(sigma, days, steps_per_day, seed, ExtremesMode::default())
}

/// [`gen_gbm_ohlc`] with an explicit intraday extremes mode.
pub fn gen_gbm_ohlc_with_mode(
    sigma: f64,
    days: usize,
    steps_per_day: usize,
    seed: u64,
    mode: ExtremesMode,
) -> Result<OhlcSeries> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParam {
            name: "sigma",
            reason: format!("{sigma} must be positive"),
        });
    }
    if days < 1 || steps_per_day < 1 {
        return Err(Error::InvalidParam {
            name: "size",
            reason: "need at least one day and one step per day".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step_var = sigma * sigma / steps_per_day as f64;
    let step_sd = step_var.sqrt();
    let start = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    let mut log_price = 100f64.ln();
    let mut bars = Vec::with_capacity(days);
    for day in 0..days {
        let open = log_price;
        let mut hi = open;
        let mut lo = open;
        for _ in 0..steps_per_day {
            let a = log_price;
            let b = a + step_sd * rng.sample::<f64, _>(StandardNormal);
            match mode {
                ExtremesMode::Grid => {
                    hi = hi.max(b);
                    lo = lo.min(b);
                }
                ExtremesMode::BridgeExact => {
                    let gap = (b - a) * (b - a);
                    let u: f64 = rng.gen();
                    let v: f64 = rng.gen();
                    let step_hi = 0.5 * (a + b + (gap - 2.0 * step_var * u.ln()).sqrt());
                    let step_lo = 0.5 * (a + b - (gap - 2.0 * step_var * v.ln()).sqrt());
                    hi = hi.max(step_hi);
                    lo = lo.min(step_lo);
                }
            }
            log_price = b;
        }
        bars.push(OhlcBar {
            date: start + chrono::Days::new(day as u64),
            open: open.exp(),
            high: hi.exp(),
            low: lo.exp(),
            close: log_price.exp(),
        });
    }
    OhlcSeries::new(bars)
}

/// A parsed request for one synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Fgn { h: f64, t: usize },
    Arfima { d: f64, t: usize },
    GbmOhlc { sigma: f64, days: usize, steps_per_day: usize },
    Pair { h1: f64, h2: f64, r: f64, t: usize },
}

/// Output of [`GeneratorSpec::generate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Single(Series),
    Pair(Series, Series),
    Bars(OhlcSeries),
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<Generated> {
        Ok(match *self {
            GeneratorSpec::Fgn { h, t } => Generated::Single(gen_fgn(h, t, seed)?),
            GeneratorSpec::Arfima { d, t } => Generated::Single(gen_arfima(d, t, seed)?),
            GeneratorSpec::GbmOhlc {
                sigma,
                days,
                steps_per_day,
            } => Generated::Bars(gen_gbm_ohlc(sigma, days, steps_per_day, seed)?),
            GeneratorSpec::Pair { h1, h2, r, t } => {
                let (x, y) = gen_correlated_pair(h1, h2, r, t, seed)?;
                Generated::Pair(x, y)
            }
        })
    }
}
