//! Command-line front end: ingestion, per-stage statistics, synthetic data,
//! and the full multi-instrument pipeline.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use leffect::error::{Error, Result};
use leffect::lrd::{modified_rs_test, optimal_lag, rescaled_variance_test};
use leffect::pipeline::{
    derive_seed, emit, ingest_csv, load_column_map, run_pipeline, HurstPanel, Ingested,
    IngestOptions, InstrumentInput, OutputFormat, PipelineConfig, RctPanel, SeriesLrd, XCorrPanel,
};
use leffect::rct::{default_block_length, hurst_for_rct, rct_pvalue, RctConfig};
use leffect::series::{describe, open_close_returns, Series};
use leffect::spectral::{average_hurst, bandwidth, gph, local_whittle, periodogram};
use leffect::synthetic::{gen_arfima, gen_correlated_pair, gen_fgn, gen_gbm_ohlc_with_mode, ExtremesMode};
use leffect::volatility::{gk_volatility, standardize_returns};
use leffect::xcorr::{surrogate_pvalue, XcMethod};

#[derive(Parser)]
#[command(
    name = "leffect",
    version,
    about = "Range-based volatility, long-range dependence, and detrended cross-correlation for daily OHLC data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an OHLC CSV, reporting rows kept and rejected
    Ingest(IngestArgs),
    /// Descriptive statistics of a derived series
    Describe(DescribeArgs),
    /// Modified rescaled-range and rescaled-variance tests
    LrdTest(LrdArgs),
    /// Local Whittle, GPH, and averaged Hurst estimates
    Hurst(HurstArgs),
    /// DCCA and DMCA coefficients with surrogate p-values
    Xcorr(XcorrArgs),
    /// Rescaled covariance test with a moving-block bootstrap
    Rct(RctArgs),
    /// Generate synthetic series as CSV on stdout
    Simulate(SimulateArgs),
    /// Full multi-instrument pipeline emitting the five report tables
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct InputArgs {
    /// OHLC CSV file
    path: PathBuf,
    /// Keep bars on or after this date (ISO-8601)
    #[arg(long, value_name = "DATE")]
    from: Option<NaiveDate>,
    /// Keep bars on or before this date (ISO-8601)
    #[arg(long, value_name = "DATE")]
    to: Option<NaiveDate>,
    /// Escalate rejected rows and heavy variance drops to errors
    #[arg(long)]
    strict: bool,
    /// JSON file mapping canonical column names to vendor headers
    #[arg(long, value_name = "FILE")]
    columns: Option<PathBuf>,
}

impl InputArgs {
    fn ingest(&self) -> Result<Ingested> {
        let columns = match &self.columns {
            Some(path) => Some(load_column_map(path).map_err(|e| e.in_stage("ingest"))?),
            None => None,
        };
        ingest_csv(
            &self.path,
            &IngestOptions {
                from: self.from,
                to: self.to,
                strict: self.strict,
                columns,
            },
        )
        .map_err(|e| e.in_stage("ingest"))
    }
}

/// Which derived series a statistics subcommand runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DerivedSeries {
    /// Open-to-close log returns of all bars
    Returns,
    /// Returns standardized by range-based daily volatility
    StdReturns,
    /// Log volatility from the cleaned Garman-Klass variance
    LogVolatility,
}

fn derived_series(ing: &Ingested, which: DerivedSeries, strict: bool) -> Result<Series> {
    let stage = "volatility";
    let returns = open_close_returns(&ing.series);
    match which {
        DerivedSeries::Returns => Ok(returns),
        DerivedSeries::StdReturns => {
            let vol = gk_volatility(&ing.series, strict).map_err(|e| e.in_stage(stage))?;
            vol.select(&returns)
                .and_then(|r| standardize_returns(&r, &vol))
                .map_err(|e| e.in_stage(stage))
        }
        DerivedSeries::LogVolatility => {
            let vol = gk_volatility(&ing.series, strict).map_err(|e| e.in_stage(stage))?;
            Ok(vol.log_volatility())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Table,
    Json,
}

fn print_result<T: Serialize>(format: TextFormat, value: &T, table: impl FnOnce() -> String) -> Result<()> {
    match format {
        TextFormat::Json => {
            let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
            println!("{text}");
        }
        TextFormat::Table => print!("{}", table()),
    }
    Ok(())
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Serialize)]
struct IngestSummary {
    bars: usize,
    first_date: NaiveDate,
    last_date: NaiveDate,
    rows_read: usize,
    rows_rejected: usize,
    warnings: Vec<String>,
}

#[derive(Args)]
struct DescribeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = DerivedSeries::Returns)]
    series: DerivedSeries,
    /// Ljung-Box order
    #[arg(long, default_value_t = 30)]
    lags: usize,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Args)]
struct LrdArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = DerivedSeries::LogVolatility)]
    series: DerivedSeries,
    /// HAC truncation lag; defaults to the data-driven plug-in
    #[arg(long)]
    lag: Option<usize>,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Args)]
struct HurstArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = DerivedSeries::LogVolatility)]
    series: DerivedSeries,
    /// Number of low frequencies; defaults to floor(T^0.6)
    #[arg(long)]
    bandwidth: Option<usize>,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Args)]
struct XcorrArgs {
    #[command(flatten)]
    input: InputArgs,
    /// DCCA window and DMCA span
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Surrogates per p-value
    #[arg(long, default_value_t = 10_000)]
    surrogates: usize,
    /// Base seed (also read from LEFFECT_SEED)
    #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Args)]
struct RctArgs {
    #[command(flatten)]
    input: InputArgs,
    /// HAC truncation lag; defaults to the log-volatility plug-in lag
    #[arg(long)]
    lag: Option<usize>,
    /// Moving-block length; defaults to floor(sqrt(T))
    #[arg(long)]
    blocks: Option<usize>,
    /// Bootstrap replicas
    #[arg(long, default_value_t = 1000)]
    replicas: usize,
    /// Base seed (also read from LEFFECT_SEED)
    #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TextFormat::Table)]
    format: TextFormat,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(subcommand)]
    generator: Generator,
}

#[derive(Subcommand)]
enum Generator {
    /// Fractional Gaussian noise (circulant embedding, unit variance)
    Fgn {
        #[arg(long)]
        hurst: f64,
        #[arg(long)]
        length: usize,
        #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// ARFIMA(0, d, 0) with truncated MA(infinity) weights
    Arfima {
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        #[arg(long)]
        length: usize,
        #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Zero-drift geometric Brownian OHLC bars
    GbmOhlc {
        /// Daily log volatility
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        days: usize,
        #[arg(long, default_value_t = 512)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ExtremesModeArg::BridgeExact)]
        extremes: ExtremesModeArg,
        #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Correlated fGn pair sharing spectral innovations
    Pair {
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        h2: f64,
        /// Target instantaneous cross-correlation
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        length: usize,
        #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtremesModeArg {
    BridgeExact,
    Grid,
}

impl From<ExtremesModeArg> for ExtremesMode {
    fn from(m: ExtremesModeArg) -> Self {
        match m {
            ExtremesModeArg::BridgeExact => ExtremesMode::BridgeExact,
            ExtremesModeArg::Grid => ExtremesMode::Grid,
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// OHLC CSV files, one per instrument (names from file stems)
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_name = "DATE")]
    from: Option<NaiveDate>,
    #[arg(long, value_name = "DATE")]
    to: Option<NaiveDate>,
    /// DCCA window and DMCA span
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Surrogates per cross-correlation p-value
    #[arg(long, default_value_t = 10_000)]
    surrogates: usize,
    /// Moving-block length override for the bootstrap
    #[arg(long)]
    blocks: Option<usize>,
    /// Bootstrap replicas
    #[arg(long, default_value_t = 1000)]
    replicas: usize,
    /// Master seed (also read from LEFFECT_SEED)
    #[arg(long, env = "LEFFECT_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    strict: bool,
    /// Ljung-Box order in the descriptive table
    #[arg(long, default_value_t = 30)]
    lags: usize,
    /// JSON file mapping canonical column names to vendor headers
    #[arg(long, value_name = "FILE")]
    columns: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Describe(args) => cmd_describe(args),
        Command::LrdTest(args) => cmd_lrd(args),
        Command::Hurst(args) => cmd_hurst(args),
        Command::Xcorr(args) => cmd_xcorr(args),
        Command::Rct(args) => cmd_rct(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn cmd_ingest(args: IngestArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let bars = ing.series.bars();
    let summary = IngestSummary {
        bars: bars.len(),
        first_date: bars[0].date,
        last_date: bars[bars.len() - 1].date,
        rows_read: ing.rows_read,
        rows_rejected: ing.rows_rejected,
        warnings: ing.warnings.clone(),
    };
    print_result(args.format, &summary, || {
        let mut out = format!(
            "{} bars from {} to {} ({} rows read, {} rejected)\n",
            summary.bars, summary.first_date, summary.last_date, summary.rows_read,
            summary.rows_rejected
        );
        for w in &summary.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    })
}

fn cmd_describe(args: DescribeArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let series = derived_series(&ing, args.series, args.input.strict)?;
    let report = describe(&series, args.lags).map_err(|e| e.in_stage("describe"))?;
    print_result(args.format, &report, || {
        format!(
            "series            {}\n\
             observations      {}\n\
             mean              {:.6}\n\
             std dev           {:.6}\n\
             skewness          {:.4}\n\
             excess kurtosis   {:.4}\n\
             jarque-bera       {:.3} (p = {:.4})\n\
             q({})             {:.3} (p = {:.4})\n",
            series.kind().label(),
            report.observations,
            report.mean,
            report.sd,
            report.skewness,
            report.excess_kurtosis,
            report.jarque_bera.statistic,
            report.jarque_bera.p_value,
            report.ljung_box.lag,
            report.ljung_box.statistic,
            report.ljung_box.p_value,
        )
    })
}

fn cmd_lrd(args: LrdArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let series = derived_series(&ing, args.series, args.input.strict)?;
    let stage = "lrd-test";
    let q = match args.lag {
        Some(q) => q,
        None => optimal_lag(&series).map_err(|e| e.in_stage(stage))?,
    };
    let result = SeriesLrd {
        series: series.kind(),
        lag: q,
        modified_rs: modified_rs_test(&series, q).map_err(|e| e.in_stage(stage))?,
        rescaled_variance: rescaled_variance_test(&series, q).map_err(|e| e.in_stage(stage))?,
    };
    print_result(args.format, &result, || {
        format!(
            "series       {}\nlag q        {}\nV statistic  {:.4} (p = {:.4})\nM statistic  {:.4} (p = {:.4})\n",
            result.series.label(),
            result.lag,
            result.modified_rs.statistic,
            result.modified_rs.p_value,
            result.rescaled_variance.statistic,
            result.rescaled_variance.p_value,
        )
    })
}

fn cmd_hurst(args: HurstArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let series = derived_series(&ing, args.series, args.input.strict)?;
    let stage = "hurst";
    let m = args.bandwidth.unwrap_or_else(|| bandwidth(series.len()));
    let p = periodogram(&series).map_err(|e| e.in_stage(stage))?;
    let lw = local_whittle(&p, m).map_err(|e| e.in_stage(stage))?;
    let lp = gph(&p, m).map_err(|e| e.in_stage(stage))?;
    let panel = HurstPanel {
        series: series.kind(),
        bandwidth: m,
        average: average_hurst(&lw, &lp).map_err(|e| e.in_stage(stage))?,
        local_whittle: lw,
        gph: lp,
    };
    print_result(args.format, &panel, || {
        let mut out = format!("series         {} (bandwidth {})\n", panel.series.label(), panel.bandwidth);
        for (label, e) in [
            ("local whittle", &panel.local_whittle),
            ("gph", &panel.gph),
            ("average", &panel.average),
        ] {
            let flag = if e.at_boundary { "  [at boundary]" } else { "" };
            out.push_str(&format!("{label:<14} H = {:.4} (se {:.4}){flag}\n", e.h, e.standard_error));
        }
        out
    })
}

fn xcorr_panel(
    ing: &Ingested,
    strict: bool,
    window: usize,
    surrogates: usize,
    seed: u64,
) -> Result<XCorrPanel> {
    let x = derived_series(ing, DerivedSeries::StdReturns, strict)?;
    let y = derived_series(ing, DerivedSeries::LogVolatility, strict)?;
    let stage = "xcorr";
    Ok(XCorrPanel {
        window,
        dcca: surrogate_pvalue(&x, &y, XcMethod::Dcca, window, surrogates, derive_seed(seed, 1))
            .map_err(|e| e.in_stage(stage))?,
        dmca: surrogate_pvalue(&x, &y, XcMethod::Dmca, window, surrogates, derive_seed(seed, 2))
            .map_err(|e| e.in_stage(stage))?,
    })
}

fn cmd_xcorr(args: XcorrArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let panel = xcorr_panel(&ing, args.input.strict, args.window, args.surrogates, args.seed)?;
    print_result(args.format, &panel, || {
        let mut out = format!("window {}\n", panel.window);
        for (label, e) in [("dcca", &panel.dcca), ("dmca", &panel.dmca)] {
            out.push_str(&format!(
                "{label}  rho = {:+.4}  p = {:.4}  ({} surrogates)\n",
                e.coefficient,
                e.p_value.unwrap_or(f64::NAN),
                e.surrogates.unwrap_or(0)
            ));
        }
        out
    })
}

fn cmd_rct(args: RctArgs) -> Result<()> {
    let ing = args.input.ingest()?;
    let x = derived_series(&ing, DerivedSeries::StdReturns, args.input.strict)?;
    let y = derived_series(&ing, DerivedSeries::LogVolatility, args.input.strict)?;
    let stage = "rct";
    let lag = match args.lag {
        Some(q) => q,
        None => optimal_lag(&y).map_err(|e| e.in_stage(stage))?.max(1),
    };
    let config = RctConfig {
        lag,
        block_length: args.blocks.unwrap_or_else(|| default_block_length(y.len())),
        replicas: args.replicas,
        seed: derive_seed(args.seed, 3),
    };
    let panel = RctPanel {
        lag,
        block_length: config.block_length,
        replicas: config.replicas,
        seed: config.seed,
        hurst_returns: hurst_for_rct(&x, lag).map_err(|e| e.in_stage(stage))?,
        hurst_volatility: hurst_for_rct(&y, lag).map_err(|e| e.in_stage(stage))?,
        result: rct_pvalue(&x, &y, &config).map_err(|e| e.in_stage(stage))?,
    };
    print_result(args.format, &panel, || {
        format!(
            "lag q        {}\nblock        {}\nreplicas     {}\nH returns    {:.4}\nH volatility {:.4}\nstatistic    {:+.4}\np-value      {:.4}\n",
            panel.lag,
            panel.block_length,
            panel.replicas,
            panel.hurst_returns,
            panel.hurst_volatility,
            panel.result.statistic,
            panel.result.p_value,
        )
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let stage = "simulate";
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match args.generator {
        Generator::Fgn { hurst, length, seed } => {
            let x = gen_fgn(hurst, length, seed).map_err(|e| e.in_stage(stage))?;
            writeln!(out, "t,value")?;
            for (t, v) in x.values().iter().enumerate() {
                writeln!(out, "{t},{v}")?;
            }
        }
        Generator::Arfima { d, length, seed } => {
            let x = gen_arfima(d, length, seed).map_err(|e| e.in_stage(stage))?;
            writeln!(out, "t,value")?;
            for (t, v) in x.values().iter().enumerate() {
                writeln!(out, "{t},{v}")?;
            }
        }
        Generator::GbmOhlc { sigma, days, steps, extremes, seed } => {
            let bars = gen_gbm_ohlc_with_mode(sigma, days, steps, seed, extremes.into())
                .map_err(|e| e.in_stage(stage))?;
            writeln!(out, "date,open,high,low,close")?;
            for b in bars.bars() {
                writeln!(out, "{},{},{},{},{}", b.date, b.open, b.high, b.low, b.close)?;
            }
        }
        Generator::Pair { h1, h2, r, length, seed } => {
            let (x, y) = gen_correlated_pair(h1, h2, r, length, seed).map_err(|e| e.in_stage(stage))?;
            writeln!(out, "t,x,y")?;
            for (t, (a, b)) in x.values().iter().zip(y.values()).enumerate() {
                writeln!(out, "{t},{a},{b}")?;
            }
        }
    }
    Ok(())
}

fn cmd_pipeline(args: PipelineArgs) -> Result<()> {
    let columns = match &args.columns {
        Some(path) => Some(load_column_map(path).map_err(|e| e.in_stage("config"))?),
        None => None,
    };
    let instruments = args
        .files
        .iter()
        .map(|path| InstrumentInput {
            name: path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            path: path.clone(),
        })
        .collect();
    let config = PipelineConfig {
        instruments,
        from: args.from,
        to: args.to,
        window: args.window,
        surrogates: args.surrogates,
        blocks: args.blocks,
        replicas: args.replicas,
        seed: args.seed,
        strict: args.strict,
        descriptive_lags: args.lags,
        columns,
    };
    let bundle = run_pipeline(&config)?;
    let bytes = emit(&bundle, args.format).map_err(|e| e.in_stage("emit"))?;
    std::io::stdout().write_all(&bytes)?;
    Ok(())
}
