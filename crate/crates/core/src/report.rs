//! CSV and JSON emission.
//!
//! Both formats share one row schema: a summary contributes a terminations
//! row and a promotions row; a sweep table contributes two rows per swept
//! value, in input order. Floats are rendered shortest-round-trip, so equal
//! summaries always produce byte-identical documents.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::{Result, SimError};
use crate::harness::{ScenarioSummary, SideSummary, SweepTable};
use crate::oracle::{OracleExpectation, OracleSide};

#[derive(Debug, Clone, Serialize)]
struct SummaryRow {
    swept_param: String,
    swept_value: String,
    side: &'static str,
    labeled: usize,
    correct_mean: f64,
    correct_ci95: f64,
    fp_mean: f64,
    fp_ci95: f64,
    fn_mean: f64,
    fn_ci95: f64,
    error_rate_mean: f64,
    error_rate_ci95: f64,
    replications: usize,
    master_seed: u64,
}

fn side_row(
    swept_param: &str,
    swept_value: &str,
    side: &'static str,
    s: &SideSummary,
    summary: &ScenarioSummary,
) -> SummaryRow {
    SummaryRow {
        swept_param: swept_param.to_string(),
        swept_value: swept_value.to_string(),
        side,
        labeled: s.labeled,
        correct_mean: s.correct.mean,
        correct_ci95: s.correct.ci95_half_width,
        fp_mean: s.false_positive.mean,
        fp_ci95: s.false_positive.ci95_half_width,
        fn_mean: s.false_negative.mean,
        fn_ci95: s.false_negative.ci95_half_width,
        error_rate_mean: s.error_rate.mean,
        error_rate_ci95: s.error_rate.ci95_half_width,
        replications: summary.replications,
        master_seed: summary.master_seed,
    }
}

fn summary_rows(swept_param: &str, swept_value: &str, s: &ScenarioSummary) -> Vec<SummaryRow> {
    vec![
        side_row(swept_param, swept_value, "terminations", &s.terminations, s),
        side_row(swept_param, swept_value, "promotions", &s.promotions, s),
    ]
}

fn render_rows(rows: &[SummaryRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Json => to_json(rows),
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| SimError::Inconsistency(format!("csv serialization failed: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| SimError::Inconsistency(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| SimError::Inconsistency(format!("csv not utf-8: {e}")))
}

fn to_json<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut doc = serde_json::to_string_pretty(rows)
        .map_err(|e| SimError::Inconsistency(format!("json serialization failed: {e}")))?;
    doc.push('\n');
    Ok(doc)
}

/// Renders a single-scenario summary: one header plus two data rows.
pub fn render_summary(summary: &ScenarioSummary, format: OutputFormat) -> Result<String> {
    render_rows(&summary_rows("none", "", summary), format)
}

/// Renders a sweep table: two data rows per swept value, in row order.
pub fn render_sweep(table: &SweepTable, format: OutputFormat) -> Result<String> {
    let mut rows = Vec::with_capacity(table.rows.len() * 2);
    for row in &table.rows {
        rows.extend(summary_rows(table.param.name(), &row.value, &row.summary));
    }
    render_rows(&rows, format)
}

#[derive(Debug, Clone, Serialize)]
struct OracleRow {
    side: &'static str,
    labeled: usize,
    correct_expected: f64,
    fp_expected: f64,
    fn_expected: f64,
    error_rate_expected: f64,
    partitions: u64,
    k_true: usize,
}

fn oracle_row(side: &'static str, s: &OracleSide, exp: &OracleExpectation) -> OracleRow {
    OracleRow {
        side,
        labeled: s.labeled,
        correct_expected: s.correct,
        fp_expected: s.false_positive,
        fn_expected: s.false_negative,
        error_rate_expected: s.error_rate,
        partitions: exp.partitions,
        k_true: exp.k_true,
    }
}

/// Renders an exhaustive-oracle expectation in the same two-sided row style.
pub fn render_oracle(exp: &OracleExpectation, format: OutputFormat) -> Result<String> {
    let rows = vec![
        oracle_row("terminations", &exp.terminations, exp),
        oracle_row("promotions", &exp.promotions, exp),
    ];
    match format {
        OutputFormat::Csv => to_csv(&rows),
        OutputFormat::Json => to_json(&rows),
    }
}

/// Writes the document to the path, or to stdout when no path is given.
pub fn write_document(path: Option<&Path>, doc: &str) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, doc)?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(doc.as_bytes())?;
            Ok(())
        }
    }
}
