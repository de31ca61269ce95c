use std::fmt::Write as _;
use std::path::Path;

use super::{ConvergenceReport, ErrorNorms, Refinement, ReportRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "alpha,step,err_C,co_C,err_L2,co_L2,err_grad,co_grad";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(crate::error::invalid(
                "format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

fn order(v: Option<f64>) -> String {
    v.map(|o| format!("{o:.4}")).unwrap_or_default()
}

/// Renders the report. CSV errors use six digits after the decimal point in
/// scientific notation and orders four decimals, matching the bundled reference data.
pub fn emit_report(report: &ConvergenceReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    })
}

fn emit_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let o = row.orders;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.alpha,
            row.step_label,
            sci(row.max_levels.c),
            order(o.map(|o| o.c)),
            sci(row.max_levels.l2),
            order(o.map(|o| o.l2)),
            sci(row.max_levels.grad),
            order(o.map(|o| o.grad)),
        );
    }
    out
}

fn emit_markdown(report: &ConvergenceReport) -> String {
    let step = match report.mode {
        Refinement::Spatial => "h",
        Refinement::Temporal => "τ",
    };
    let mut out = format!(
        "| α | {step} | ‖z‖_C | CO | max ‖z^j‖_0 | CO | max ‖z^j_x]\\|_0 | CO |\n\
         |---|---|---|---|---|---|---|---|\n"
    );
    let mut prev_alpha = None;
    for row in &report.rows {
        let alpha = if prev_alpha == Some(row.alpha) {
            String::new()
        } else {
            row.alpha.to_string()
        };
        prev_alpha = Some(row.alpha);
        let o = row.orders;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            alpha,
            row.step_label,
            sci(row.max_levels.c),
            order(o.map(|o| o.c)),
            sci(row.max_levels.l2),
            order(o.map(|o| o.l2)),
            sci(row.max_levels.grad),
            order(o.map(|o| o.grad)),
        );
    }
    out
}

/// Writes the rendered report to `path`.
pub fn write_report(report: &ConvergenceReport, format: ReportFormat, path: &Path) -> Result<()> {
    let text = emit_report(report, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Step value of a label such as `1/24` or `0.125`.
pub(crate) fn parse_step(label: &str) -> Option<f64> {
    match label.split_once('/') {
        Some((num, den)) => {
            let (n, d): (f64, f64) = (num.trim().parse().ok()?, den.trim().parse().ok()?);
            (d != 0.0).then(|| n / d)
        }
        None => label.trim().parse().ok(),
    }
}

/// Parses CSV produced by [`emit_report`]. Rows carry no solver details.
pub fn parse_csv(text: &str, mode: Refinement) -> Result<ConvergenceReport> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::MalformedReport(format!(
                "expected header `{CSV_HEADER}`, got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 8 {
            return Err(Error::MalformedReport(format!(
                "line {}: expected 8 fields, got {}",
                idx + 2,
                cells.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::MalformedReport(format!("line {}: bad number `{s}`", idx + 2)))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        if parse_step(cells[1]).is_none() {
            return Err(Error::MalformedReport(format!(
                "line {}: bad step `{}`",
                idx + 2,
                cells[1]
            )));
        }
        let orders = match (opt(cells[3])?, opt(cells[5])?, opt(cells[7])?) {
            (Some(c), Some(l2), Some(grad)) => Some(ErrorNorms { c, l2, grad }),
            (None, None, None) => None,
            _ => {
                return Err(Error::MalformedReport(format!(
                    "line {}: order columns must be all present or all empty",
                    idx + 2
                )))
            }
        };
        rows.push(ReportRow {
            alpha: num(cells[0])?,
            step_label: cells[1].to_string(),
            max_levels: ErrorNorms {
                c: num(cells[2])?,
                l2: num(cells[4])?,
                grad: num(cells[6])?,
            },
            orders,
            details: None,
        });
    }
    Ok(ConvergenceReport { mode, rows })
}
