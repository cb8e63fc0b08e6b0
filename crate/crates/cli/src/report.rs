//! Text summaries and CSV tables.

use std::io::Write;
use std::path::Path;

use parashift_core::orbit::OrbitRow;
use parashift_core::{
    ExtendedReal, LimitEstimate, MomentReport, OracleReport, OracleVerdict, RateRow, ShiftVerdict, SuiteRow, SuiteTally,
};
use serde::Serialize;

/// Moment values as written to reports: finite numbers, `inf`, `-inf`, or
/// `undefined` for a first moment with both sides divergent.
pub fn first_moment_literal(report: &MomentReport) -> String {
    match (report.first, report.abs_neg, report.abs_pos) {
        (Some(v), _, _) => v.to_string(),
        (None, ExtendedReal::Finite(_), ExtendedReal::Infinite) => "inf".into(),
        (None, ExtendedReal::Infinite, ExtendedReal::Finite(_)) => "-inf".into(),
        _ => "undefined".into(),
    }
}

pub fn drift_literal(report: &MomentReport) -> String {
    match report.drift {
        Some(v) => v.to_string(),
        None => match first_moment_literal(report).as_str() {
            "inf" => "-inf".into(),
            "-inf" => "inf".into(),
            _ => "undefined".into(),
        },
    }
}

const VERDICT_HEADER: [&str; 7] = ["kind", "abs_neg", "abs_pos", "sq_neg", "sq_pos", "first", "drift"];

fn verdict_fields(v: &ShiftVerdict) -> [String; 7] {
    let r = &v.report;
    [
        v.kind.to_string(),
        r.abs_neg.to_string(),
        r.abs_pos.to_string(),
        r.sq_neg.to_string(),
        r.sq_pos.to_string(),
        first_moment_literal(r),
        drift_literal(r),
    ]
}

pub fn write_verdict_text(out: &mut dyn Write, beta: f64, v: &ShiftVerdict) -> std::io::Result<()> {
    let fields = verdict_fields(v);
    writeln!(out, "kind {}", fields[0])?;
    writeln!(out, "beta {beta}")?;
    for (name, value) in VERDICT_HEADER.iter().zip(&fields).skip(1) {
        writeln!(out, "{name} {value}")?;
    }
    Ok(())
}

pub fn write_verdict_csv(path: &Path, v: &ShiftVerdict) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(VERDICT_HEADER)?;
    w.write_record(verdict_fields(v))?;
    w.flush()?;
    Ok(())
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_orbit_csv(path: &Path, rows: &[OrbitRow]) -> csv::Result<()> {
    write_rows(path, rows)
}

pub fn write_rate_csv(path: &Path, rows: &[RateRow]) -> csv::Result<()> {
    write_rows(path, rows)
}

pub fn estimate(e: &LimitEstimate) -> String {
    format!(
        "{} +- {:.3e} ({})",
        e.value,
        e.error_indicator,
        if e.converged { "converged" } else { "not converged" }
    )
}

pub fn oracle_line(r: &OracleReport) -> String {
    match r.verdict {
        OracleVerdict::BoundedShift { y_limit } => {
            format!("BoundedShift (Y ~ {y_limit}, {} steps, y_N = {})", r.steps, r.y_last)
        }
        v => format!("{} ({} steps, y_N = {})", v.name(), r.steps, r.y_last),
    }
}

#[derive(Serialize)]
struct SuiteRecord {
    seed: u64,
    beta: f64,
    atoms: String,
    drift: f64,
    classifier: String,
    oracle: &'static str,
    outcome: &'static str,
    steps: usize,
    y_last: f64,
}

pub fn write_suite_csv(path: &Path, rows: &[SuiteRow]) -> csv::Result<()> {
    let records: Vec<SuiteRecord> = rows
        .iter()
        .map(|r| SuiteRecord {
            seed: r.seed,
            beta: r.map.beta(),
            atoms: r
                .map
                .mu()
                .atoms()
                .iter()
                .map(|a| format!("{}:{}", a.t, a.mass))
                .collect::<Vec<_>>()
                .join(";"),
            drift: r.outcome.verdict().report.drift.unwrap_or(f64::NAN),
            classifier: r.outcome.verdict().kind.to_string(),
            oracle: r.outcome.oracle().verdict.name(),
            outcome: r.outcome.name(),
            steps: r.outcome.oracle().steps,
            y_last: r.outcome.oracle().y_last,
        })
        .collect();
    write_rows(path, &records)
}

pub fn write_suite_table(out: &mut dyn Write, rows: &[SuiteRow]) -> std::io::Result<()> {
    let t = SuiteTally::of(rows);
    writeln!(out, "{:<20} {:>6}", "outcome", "count")?;
    writeln!(out, "{:<20} {:>6}", "Agree", t.agree)?;
    writeln!(out, "{:<20} {:>6}", "Disagree", t.disagree)?;
    writeln!(out, "{:<20} {:>6}", "OracleInconclusive", t.inconclusive)?;
    writeln!(
        out,
        "agreement {}/{} (inconclusive {:.1}%)",
        t.agree,
        t.decided(),
        100.0 * t.inconclusive_rate()
    )?;
    for r in rows.iter().filter(|r| r.outcome.name() == "Disagree") {
        writeln!(
            out,
            "disagree seed {}: classifier {}, oracle {}",
            r.seed,
            r.outcome.verdict().kind,
            oracle_line(r.outcome.oracle())
        )?;
    }
    Ok(())
}
