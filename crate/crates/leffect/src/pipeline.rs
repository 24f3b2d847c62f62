//! CSV ingestion, the end-to-end analysis pipeline, and report emission.
//!
//! A pipeline run takes daily OHLC bars per instrument and produces five
//! report tables: descriptive statistics, long-range dependence tests,
//! Hurst estimates of the volatility series, detrended cross-correlations
//! between standardized returns and log volatility, and the rescaled
//! covariance test between the two.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lrd::{modified_rs_test, optimal_lag, rescaled_variance_test, TestResult};
use crate::rct::{default_block_length, rct_pvalue, RctConfig};
use crate::series::{describe, open_close_returns, OhlcBar, OhlcSeries, Series, SeriesKind, StatsReport};
use crate::spectral::{average_hurst, bandwidth, gph, local_whittle, periodogram, HurstEstimate};
use crate::volatility::{gk_volatility, standardize_returns, DROP_WARN_FRACTION};
use crate::xcorr::{surrogate_pvalue, XCorrEstimate, XcMethod};

/// Maps the canonical OHLC column names to a vendor's header names.
/// Matching is case-insensitive and ignores surrounding whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMap {
    pub date: String,
    pub open: String,
    pub high: String,
    pub low: String,
    pub close: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            date: "date".into(),
            open: "open".into(),
            high: "high".into(),
            low: "low".into(),
            close: "close".into(),
        }
    }
}

/// Read a [`ColumnMap`] from a JSON file.
pub fn load_column_map(path: &Path) -> Result<ColumnMap> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("column map: {e}")))
}

/// Ingestion switches shared by the CLI and the pipeline.
#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    /// Escalate rejected rows from warnings to errors.
    pub strict: bool,
    pub columns: Option<ColumnMap>,
}

/// A parsed OHLC file together with per-row diagnostics.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: OhlcSeries,
    pub warnings: Vec<String>,
    pub rows_read: usize,
    pub rows_rejected: usize,
}

/// Parse a CSV of daily bars: header-mapped columns, ISO-8601 dates,
/// ascending date order after sorting.
///
/// Rows that fail OHLC sanity checks, fail to parse, or repeat an earlier
/// date are rejected with a warning naming the line (strict mode aborts
/// instead). The date filter is inclusive on both ends.
pub fn ingest_csv(path: &Path, opts: &IngestOptions) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;

    let columns = opts.columns.clone().unwrap_or_default();
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, reason: e.to_string() })?
        .clone();
    let find = |wanted: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(wanted.trim()))
            .ok_or_else(|| Error::MissingColumn(wanted.to_string()))
    };
    let idx_date = find(&columns.date)?;
    let idx_open = find(&columns.open)?;
    let idx_high = find(&columns.high)?;
    let idx_low = find(&columns.low)?;
    let idx_close = find(&columns.close)?;
    let max_idx = *[idx_date, idx_open, idx_high, idx_low, idx_close]
        .iter()
        .max()
        .expect("non-empty");

    let mut warnings = Vec::new();
    let mut rows_read = 0usize;
    let mut rows: Vec<(NaiveDate, OhlcBar)> = Vec::new();
    let reject = |line: usize, reason: String, warnings: &mut Vec<String>| -> Result<()> {
        if opts.strict {
            return Err(Error::Parse { line, reason });
        }
        warnings.push(format!("line {line}: {reason} (row rejected)"));
        Ok(())
    };

    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows_read += 1;
        if record.len() <= max_idx {
            reject(line, format!("expected at least {} fields, found {}", max_idx + 1, record.len()), &mut warnings)?;
            continue;
        }
        let date = match NaiveDate::parse_from_str(&record[idx_date], "%Y-%m-%d") {
            Ok(d) => d,
            Err(e) => {
                reject(line, format!("bad date {:?}: {e}", &record[idx_date]), &mut warnings)?;
                continue;
            }
        };
        let mut prices = [0f64; 4];
        let mut ok = true;
        for (slot, idx) in [idx_open, idx_high, idx_low, idx_close].iter().enumerate() {
            match record[*idx].parse::<f64>() {
                Ok(v) => prices[slot] = v,
                Err(e) => {
                    reject(line, format!("bad price {:?}: {e}", &record[*idx]), &mut warnings)?;
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let bar = OhlcBar {
            date,
            open: prices[0],
            high: prices[1],
            low: prices[2],
            close: prices[3],
        };
        if let Err(reason) = bar.check() {
            reject(line, reason, &mut warnings)?;
            continue;
        }
        if rows.iter().any(|(d, _)| *d == date) {
            reject(line, format!("duplicate date {date}"), &mut warnings)?;
            continue;
        }
        rows.push((date, bar));
    }

    rows.sort_by_key(|(d, _)| *d);
    let bars: Vec<OhlcBar> = rows
        .into_iter()
        .map(|(_, b)| b)
        .filter(|b| {
            opts.from.is_none_or(|d| b.date >= d) && opts.to.is_none_or(|d| b.date <= d)
        })
        .collect();
    if bars.is_empty() {
        return Err(Error::EmptyRange);
    }
    let kept = bars.len();
    let series = OhlcSeries::new(bars)?;
    Ok(Ingested {
        series,
        warnings,
        rows_read,
        rows_rejected: rows_read - kept,
    })
}

/// One input file with a display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrumentInput {
    pub name: String,
    pub path: PathBuf,
}

/// Output encodings supported by [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Human-readable tables.
    Table,
    /// Flat `instrument,table,series,metric,value` records.
    Csv,
    /// The full report bundle as JSON; round-trips losslessly.
    Json,
}

/// Full configuration of a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub instruments: Vec<InstrumentInput>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    /// DCCA window and DMCA span (a single shared `s = lambda`).
    pub window: usize,
    /// Surrogates per cross-correlation p-value.
    pub surrogates: usize,
    /// Moving-block length override; default `floor(sqrt(T))` per instrument.
    pub blocks: Option<usize>,
    /// Bootstrap replicas for the rescaled covariance test.
    pub replicas: usize,
    pub seed: u64,
    pub strict: bool,
    /// Ljung-Box order for the descriptive table.
    pub descriptive_lags: usize,
    pub columns: Option<ColumnMap>,
}

impl PipelineConfig {
    /// Defaults matching the study configuration: window 20, 10000
    /// surrogates, 1000 bootstrap replicas, Ljung-Box order 30.
    pub fn new(instruments: Vec<InstrumentInput>, seed: u64) -> Self {
        PipelineConfig {
            instruments,
            from: None,
            to: None,
            window: 20,
            surrogates: 10_000,
            blocks: None,
            replicas: 1000,
            seed,
            strict: false,
            descriptive_lags: 30,
            columns: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.instruments.is_empty() {
            return Err(Error::InvalidParam {
                name: "instruments",
                reason: "need at least one input".into(),
            });
        }
        if self.window < 3 {
            return Err(Error::InvalidParam {
                name: "window",
                reason: format!("{} is below the minimum 3", self.window),
            });
        }
        if self.surrogates < 100 {
            return Err(Error::InvalidParam {
                name: "surrogates",
                reason: format!("{} is below the minimum 100", self.surrogates),
            });
        }
        if let (Some(a), Some(b)) = (self.from, self.to) {
            if a >= b {
                return Err(Error::InvalidParam {
                    name: "date-range",
                    reason: format!("start {a} is not before end {b}"),
                });
            }
        }
        Ok(())
    }
}

/// Deterministic seed derivation (splitmix64 finalizer over `master ^ f(index)`).
///
/// The pipeline gives instrument `i` the base seed `derive_seed(master, i)`
/// and derives per-test seeds from that base with indices 1 (DCCA), 2
/// (DMCA), and 3 (rescaled covariance). Subcommands take the base seed
/// directly, so a pipeline table can be reproduced stage by stage.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Echo of the configuration a bundle was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub instruments: Vec<String>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub window: usize,
    pub surrogates: usize,
    pub blocks: Option<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub strict: bool,
    pub descriptive_lags: usize,
}

/// Descriptive statistics for one derived series (a Table-1 column).
/// The unit-root columns are not computed here and render as `n/a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub series: SeriesKind,
    pub stats: StatsReport,
    pub adf: Option<f64>,
    pub kpss: Option<f64>,
}

/// Long-range dependence tests for one derived series (a Table-2 column).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesLrd {
    pub series: SeriesKind,
    /// Data-driven truncation lag `q*`.
    pub lag: usize,
    pub modified_rs: TestResult,
    pub rescaled_variance: TestResult,
}

/// Hurst estimates of the log-volatility series (Table 3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstPanel {
    pub series: SeriesKind,
    pub bandwidth: usize,
    pub local_whittle: HurstEstimate,
    pub gph: HurstEstimate,
    pub average: HurstEstimate,
}

/// Detrended cross-correlations between standardized returns and log
/// volatility (Table 4).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XCorrPanel {
    pub window: usize,
    pub dcca: XCorrEstimate,
    pub dmca: XCorrEstimate,
}

/// Rescaled covariance test between standardized returns and log
/// volatility (Table 5).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RctPanel {
    pub lag: usize,
    pub block_length: usize,
    pub replicas: usize,
    pub seed: u64,
    pub hurst_returns: f64,
    pub hurst_volatility: f64,
    pub result: TestResult,
}

/// Everything the pipeline computed for one instrument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentReport {
    pub name: String,
    /// Base seed for this instrument's randomized tests.
    pub seed: u64,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub bars: usize,
    pub rows_rejected: usize,
    /// Bars whose range-based variance was non-positive and dropped.
    pub variance_dropped: usize,
    pub warnings: Vec<String>,
    pub descriptive: Vec<SeriesStats>,
    pub lrd: Vec<SeriesLrd>,
    pub hurst: HurstPanel,
    pub xcorr: XCorrPanel,
    pub rct: RctPanel,
}

/// Output of [`run_pipeline`]: one report per instrument plus the
/// configuration echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub config: ConfigEcho,
    pub instruments: Vec<InstrumentReport>,
}

fn stage<T>(r: Result<T>, label: &str, name: &str) -> Result<T> {
    r.map_err(|e| e.in_stage(format!("{label} {name}")))
}

/// Run the full pipeline for every configured instrument, in config order.
pub fn run_pipeline(config: &PipelineConfig) -> Result<ReportBundle> {
    config.validate().map_err(|e| e.in_stage("config"))?;
    let mut instruments = Vec::with_capacity(config.instruments.len());
    for (index, input) in config.instruments.iter().enumerate() {
        instruments.push(analyze_instrument(config, input, index as u64)?);
    }
    Ok(ReportBundle {
        config: ConfigEcho {
            instruments: config.instruments.iter().map(|i| i.name.clone()).collect(),
            from: config.from,
            to: config.to,
            window: config.window,
            surrogates: config.surrogates,
            blocks: config.blocks,
            replicas: config.replicas,
            seed: config.seed,
            strict: config.strict,
            descriptive_lags: config.descriptive_lags,
        },
        instruments,
    })
}

fn analyze_instrument(
    config: &PipelineConfig,
    input: &InstrumentInput,
    index: u64,
) -> Result<InstrumentReport> {
    let name = &input.name;
    let seed = derive_seed(config.seed, index);

    let ingested = stage(
        ingest_csv(
            &input.path,
            &IngestOptions {
                from: config.from,
                to: config.to,
                strict: config.strict,
                columns: config.columns.clone(),
            },
        ),
        "ingest",
        name,
    )?;
    let bars = &ingested.series;
    let mut warnings = ingested.warnings.clone();

    let returns = open_close_returns(bars);
    let vol = stage(gk_volatility(bars, config.strict), "volatility", name)?;
    if vol.drop_fraction() > DROP_WARN_FRACTION {
        warnings.push(format!(
            "dropped {} of {} variance observations ({:.1}%)",
            vol.dropped(),
            vol.source_len(),
            100.0 * vol.drop_fraction()
        ));
    }
    let log_vol = vol.log_volatility();
    let std_returns = stage(
        vol.select(&returns)
            .and_then(|r| standardize_returns(&r, &vol)),
        "volatility",
        name,
    )?;

    let panel: [&Series; 3] = [&returns, &std_returns, &log_vol];
    let mut descriptive = Vec::with_capacity(3);
    let mut lrd = Vec::with_capacity(3);
    for series in panel {
        descriptive.push(SeriesStats {
            series: series.kind(),
            stats: stage(describe(series, config.descriptive_lags), "describe", name)?,
            adf: None,
            kpss: None,
        });
        let q = stage(optimal_lag(series), "lrd-test", name)?;
        lrd.push(SeriesLrd {
            series: series.kind(),
            lag: q,
            modified_rs: stage(modified_rs_test(series, q), "lrd-test", name)?,
            rescaled_variance: stage(rescaled_variance_test(series, q), "lrd-test", name)?,
        });
    }

    let m = bandwidth(log_vol.len());
    let spectrum = stage(periodogram(&log_vol), "hurst", name)?;
    let lw = stage(local_whittle(&spectrum, m), "hurst", name)?;
    let lp = stage(gph(&spectrum, m), "hurst", name)?;
    let hurst = HurstPanel {
        series: SeriesKind::LogVolatility,
        bandwidth: m,
        average: stage(average_hurst(&lw, &lp), "hurst", name)?,
        local_whittle: lw,
        gph: lp,
    };

    let xcorr = XCorrPanel {
        window: config.window,
        dcca: stage(
            surrogate_pvalue(
                &std_returns,
                &log_vol,
                XcMethod::Dcca,
                config.window,
                config.surrogates,
                derive_seed(seed, 1),
            ),
            "xcorr",
            name,
        )?,
        dmca: stage(
            surrogate_pvalue(
                &std_returns,
                &log_vol,
                XcMethod::Dmca,
                config.window,
                config.surrogates,
                derive_seed(seed, 2),
            ),
            "xcorr",
            name,
        )?,
    };

    // The test lag follows the persistent series (log volatility), and the
    // block length defaults per instrument unless overridden.
    let rct_lag = lrd[2].lag.max(1);
    let rct_config = RctConfig {
        lag: rct_lag,
        block_length: config.blocks.unwrap_or_else(|| default_block_length(log_vol.len())),
        replicas: config.replicas,
        seed: derive_seed(seed, 3),
    };
    let hx = stage(
        crate::rct::hurst_for_rct(&std_returns, rct_lag),
        "rct",
        name,
    )?;
    let hy = stage(crate::rct::hurst_for_rct(&log_vol, rct_lag), "rct", name)?;
    let rct = RctPanel {
        lag: rct_lag,
        block_length: rct_config.block_length,
        replicas: rct_config.replicas,
        seed: rct_config.seed,
        hurst_returns: hx,
        hurst_volatility: hy,
        result: stage(rct_pvalue(&std_returns, &log_vol, &rct_config), "rct", name)?,
    };

    Ok(InstrumentReport {
        name: name.clone(),
        seed,
        first_date: bars.bars()[0].date,
        last_date: bars.bars()[bars.len() - 1].date,
        bars: bars.len(),
        rows_rejected: ingested.rows_rejected,
        variance_dropped: vol.dropped(),
        warnings,
        descriptive,
        lrd,
        hurst,
        xcorr,
        rct,
    })
}

impl SeriesKind {
    /// Short column label used in rendered tables.
    pub fn label(&self) -> &'static str {
        match self {
            SeriesKind::RawReturns => "returns",
            SeriesKind::StandardizedReturns => "std returns",
            SeriesKind::LogVolatility => "log volatility",
            SeriesKind::Profile => "profile",
            SeriesKind::Generic => "series",
        }
    }
}

/// Serialize a bundle. Table and CSV renderings are fixed-order and
/// deterministic; JSON re-parses to an equal bundle.
pub fn emit(bundle: &ReportBundle, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(bundle)
                .map_err(|e| Error::Format(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => emit_csv(bundle),
        OutputFormat::Table => Ok(render_tables(bundle).into_bytes()),
    }
}

fn emit_csv(bundle: &ReportBundle) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rec = |w: &mut csv::Writer<Vec<u8>>,
               instrument: &str,
               table: &str,
               series: &str,
               metric: &str,
               value: String|
     -> Result<()> {
        w.write_record([instrument, table, series, metric, &value])
            .map_err(|e| Error::Format(e.to_string()))
    };
    w.write_record(["instrument", "table", "series", "metric", "value"])
        .map_err(|e| Error::Format(e.to_string()))?;
    for inst in &bundle.instruments {
        let name = inst.name.as_str();
        for d in &inst.descriptive {
            let s = d.series.label();
            let t = "descriptive";
            rec(&mut w, name, t, s, "observations", d.stats.observations.to_string())?;
            rec(&mut w, name, t, s, "mean", d.stats.mean.to_string())?;
            rec(&mut w, name, t, s, "sd", d.stats.sd.to_string())?;
            rec(&mut w, name, t, s, "skewness", d.stats.skewness.to_string())?;
            rec(&mut w, name, t, s, "excess_kurtosis", d.stats.excess_kurtosis.to_string())?;
            rec(&mut w, name, t, s, "jarque_bera", d.stats.jarque_bera.statistic.to_string())?;
            rec(&mut w, name, t, s, "jarque_bera_p", d.stats.jarque_bera.p_value.to_string())?;
            rec(&mut w, name, t, s, &format!("q{}", d.stats.ljung_box.lag), d.stats.ljung_box.statistic.to_string())?;
            rec(&mut w, name, t, s, &format!("q{}_p", d.stats.ljung_box.lag), d.stats.ljung_box.p_value.to_string())?;
            rec(&mut w, name, t, s, "adf", "n/a".into())?;
            rec(&mut w, name, t, s, "kpss", "n/a".into())?;
        }
        for l in &inst.lrd {
            let s = l.series.label();
            let t = "lrd";
            rec(&mut w, name, t, s, "lag", l.lag.to_string())?;
            rec(&mut w, name, t, s, "v_stat", l.modified_rs.statistic.to_string())?;
            rec(&mut w, name, t, s, "v_p", l.modified_rs.p_value.to_string())?;
            rec(&mut w, name, t, s, "m_stat", l.rescaled_variance.statistic.to_string())?;
            rec(&mut w, name, t, s, "m_p", l.rescaled_variance.p_value.to_string())?;
        }
        let h = &inst.hurst;
        let hs = h.series.label();
        rec(&mut w, name, "hurst", hs, "bandwidth", h.bandwidth.to_string())?;
        rec(&mut w, name, "hurst", hs, "local_whittle", h.local_whittle.h.to_string())?;
        rec(&mut w, name, "hurst", hs, "local_whittle_se", h.local_whittle.standard_error.to_string())?;
        rec(&mut w, name, "hurst", hs, "gph", h.gph.h.to_string())?;
        rec(&mut w, name, "hurst", hs, "gph_se", h.gph.standard_error.to_string())?;
        rec(&mut w, name, "hurst", hs, "average", h.average.h.to_string())?;
        rec(&mut w, name, "hurst", hs, "average_se", h.average.standard_error.to_string())?;
        let x = &inst.xcorr;
        let xs = "std returns / log volatility";
        rec(&mut w, name, "xcorr", xs, "window", x.window.to_string())?;
        rec(&mut w, name, "xcorr", xs, "rho_dcca", x.dcca.coefficient.to_string())?;
        rec(&mut w, name, "xcorr", xs, "rho_dcca_p", x.dcca.p_value.unwrap_or(f64::NAN).to_string())?;
        rec(&mut w, name, "xcorr", xs, "rho_dmca", x.dmca.coefficient.to_string())?;
        rec(&mut w, name, "xcorr", xs, "rho_dmca_p", x.dmca.p_value.unwrap_or(f64::NAN).to_string())?;
        let r = &inst.rct;
        rec(&mut w, name, "rct", xs, "lag", r.lag.to_string())?;
        rec(&mut w, name, "rct", xs, "block_length", r.block_length.to_string())?;
        rec(&mut w, name, "rct", xs, "replicas", r.replicas.to_string())?;
        rec(&mut w, name, "rct", xs, "hurst_returns", r.hurst_returns.to_string())?;
        rec(&mut w, name, "rct", xs, "hurst_volatility", r.hurst_volatility.to_string())?;
        rec(&mut w, name, "rct", xs, "statistic", r.result.statistic.to_string())?;
        rec(&mut w, name, "rct", xs, "p_value", r.result.p_value.to_string())?;
    }
    w.into_inner().map_err(|e| Error::Format(e.to_string()))
}

fn render_tables(bundle: &ReportBundle) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!(
        "pipeline report (window {}, surrogates {}, replicas {}, seed {})",
        bundle.config.window, bundle.config.surrogates, bundle.config.replicas, bundle.config.seed
    ));
    for inst in &bundle.instruments {
        push(&mut out, String::new());
        push(&mut out, format!(
            "== {} ({}..{}, {} bars, {} rejected rows, {} variance drops) ==",
            inst.name, inst.first_date, inst.last_date, inst.bars, inst.rows_rejected,
            inst.variance_dropped
        ));
        for warning in &inst.warnings {
            push(&mut out, format!("warning: {warning}"));
        }

        push(&mut out, String::new());
        push(&mut out, "Table 1. Descriptive statistics".into());
        let cols: Vec<String> = inst.descriptive.iter().map(|d| d.series.label().to_string()).collect();
        push(&mut out, format!("{:<18}{}", "statistic", cols.iter().map(|c| format!("{c:>18}")).collect::<String>()));
        let row = |label: &str, values: Vec<String>| -> String {
            format!("{label:<18}{}", values.iter().map(|v| format!("{v:>18}")).collect::<String>())
        };
        push(&mut out, row("observations", inst.descriptive.iter().map(|d| d.stats.observations.to_string()).collect()));
        push(&mut out, row("mean", inst.descriptive.iter().map(|d| format!("{:.6}", d.stats.mean)).collect()));
        push(&mut out, row("std dev", inst.descriptive.iter().map(|d| format!("{:.6}", d.stats.sd)).collect()));
        push(&mut out, row("skewness", inst.descriptive.iter().map(|d| format!("{:.4}", d.stats.skewness)).collect()));
        push(&mut out, row("excess kurtosis", inst.descriptive.iter().map(|d| format!("{:.4}", d.stats.excess_kurtosis)).collect()));
        push(&mut out, row("jarque-bera", inst.descriptive.iter().map(|d| format!("{:.3}", d.stats.jarque_bera.statistic)).collect()));
        push(&mut out, row("  p-value", inst.descriptive.iter().map(|d| format!("{:.4}", d.stats.jarque_bera.p_value)).collect()));
        push(&mut out, row(&format!("q({})", bundle.config.descriptive_lags), inst.descriptive.iter().map(|d| format!("{:.3}", d.stats.ljung_box.statistic)).collect()));
        push(&mut out, row("  p-value", inst.descriptive.iter().map(|d| format!("{:.4}", d.stats.ljung_box.p_value)).collect()));
        push(&mut out, row("adf", inst.descriptive.iter().map(|_| "n/a".to_string()).collect()));
        push(&mut out, row("kpss", inst.descriptive.iter().map(|_| "n/a".to_string()).collect()));

        push(&mut out, String::new());
        push(&mut out, "Table 2. Long-range dependence tests".into());
        push(&mut out, format!("{:<18}{}", "statistic", cols.iter().map(|c| format!("{c:>18}")).collect::<String>()));
        push(&mut out, row("lag q*", inst.lrd.iter().map(|l| l.lag.to_string()).collect()));
        push(&mut out, row("V statistic", inst.lrd.iter().map(|l| format!("{:.4}", l.modified_rs.statistic)).collect()));
        push(&mut out, row("  p-value", inst.lrd.iter().map(|l| format!("{:.4}", l.modified_rs.p_value)).collect()));
        push(&mut out, row("M statistic", inst.lrd.iter().map(|l| format!("{:.4}", l.rescaled_variance.statistic)).collect()));
        push(&mut out, row("  p-value", inst.lrd.iter().map(|l| format!("{:.4}", l.rescaled_variance.p_value)).collect()));

        let h = &inst.hurst;
        push(&mut out, String::new());
        push(&mut out, format!("Table 3. Hurst exponents ({}, bandwidth {})", h.series.label(), h.bandwidth));
        push(&mut out, format!("{:<18}{:>12}{:>12}", "estimator", "H", "st. error"));
        for (label, e) in [
            ("local whittle", &h.local_whittle),
            ("gph", &h.gph),
            ("average", &h.average),
        ] {
            let flag = if e.at_boundary { "  [at boundary]" } else { "" };
            push(&mut out, format!("{label:<18}{:>12.4}{:>12.4}{flag}", e.h, e.standard_error));
        }

        let x = &inst.xcorr;
        push(&mut out, String::new());
        push(&mut out, format!("Table 4. Detrended cross-correlation (window {})", x.window));
        push(&mut out, format!("{:<18}{:>12}{:>12}{:>12}", "method", "rho", "p-value", "surrogates"));
        for (label, e) in [("dcca", &x.dcca), ("dmca", &x.dmca)] {
            push(&mut out, format!(
                "{label:<18}{:>12.4}{:>12.4}{:>12}",
                e.coefficient,
                e.p_value.unwrap_or(f64::NAN),
                e.surrogates.unwrap_or(0)
            ));
        }

        let r = &inst.rct;
        push(&mut out, String::new());
        push(&mut out, "Table 5. Rescaled covariance test".into());
        push(&mut out, format!(
            "{:<18}{:>12}{:>12}{:>12}{:>12}{:>12}{:>12}",
            "", "lag q", "H returns", "H vol", "block", "statistic", "p-value"
        ));
        push(&mut out, format!(
            "{:<18}{:>12}{:>12.4}{:>12.4}{:>12}{:>12.4}{:>12.4}",
            "rct", r.lag, r.hurst_returns, r.hurst_volatility, r.block_length,
            r.result.statistic, r.result.p_value
        ));
    }
    out
}

/// Convenience wrapper: run the pipeline and emit in one call.
pub fn run_and_emit(config: &PipelineConfig, format: OutputFormat) -> Result<Vec<u8>> {
    let bundle = run_pipeline(config)?;
    emit(&bundle, format)
}

