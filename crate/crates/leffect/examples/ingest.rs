//! CSV ingestion: header-mapped OHLC columns, per-row validation with
//! line-numbered warnings, duplicate-date rejection, inclusive date
//! filtering, and vendor column maps.
//!
//! Run with `cargo run --example ingest` (paths resolve relative to the
//! crate, so any working directory works).

use chrono::NaiveDate;
use leffect::pipeline::{ingest_csv, load_column_map, IngestOptions};
use std::path::Path;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn main() -> leffect::Result<()> {
    // Standard headers: date,open,high,low,close.
    let full = ingest_csv(&fixture("alpha.csv"), &IngestOptions::default())?;
    println!(
        "alpha.csv: {} bars from {} to {} ({} rows rejected)",
        full.series.len(),
        full.series.bars()[0].date,
        full.series.bars()[full.series.len() - 1].date,
        full.rows_rejected
    );

    // Inclusive date window.
    let clipped = ingest_csv(
        &fixture("alpha.csv"),
        &IngestOptions {
            from: NaiveDate::from_ymd_opt(2000, 3, 1),
            to: NaiveDate::from_ymd_opt(2000, 5, 31),
            ..IngestOptions::default()
        },
    )?;
    println!("  March-May window: {} bars", clipped.series.len());

    // Vendor headers via a JSON column map.
    let map = load_column_map(&fixture("vendor_columns.json"))?;
    println!(
        "\nvendor_sample.csv maps {{date: {:?}, close: {:?}, ...}}",
        map.date, map.close
    );
    let vendor = ingest_csv(
        &fixture("vendor_sample.csv"),
        &IngestOptions {
            columns: Some(map),
            ..IngestOptions::default()
        },
    )?;
    println!("  parsed {} bars", vendor.series.len());

    // Bad rows are rejected with line-numbered warnings (strict mode turns
    // the first one into an error instead).
    let dir = std::env::temp_dir().join("leffect-ingest-example");
    std::fs::create_dir_all(&dir)?;
    let bad = dir.join("bad.csv");
    std::fs::write(
        &bad,
        "date,open,high,low,close\n\
         2001-01-01,10,11,9,10.5\n\
         2001-01-02,10.5,9.0,11.0,10.2\n\
         2001-01-03,not-a-price,11,9,10\n\
         2001-01-04,10,11,9,10.1\n",
    )?;
    let lenient = ingest_csv(&bad, &IngestOptions::default())?;
    println!("\nbad.csv kept {} of 4 rows; warnings:", lenient.series.len());
    for w in &lenient.warnings {
        println!("  warning: {w}");
    }
    let strict = ingest_csv(
        &bad,
        &IngestOptions {
            strict: true,
            ..IngestOptions::default()
        },
    );
    println!("strict mode: {}", strict.unwrap_err());
    Ok(())
}
