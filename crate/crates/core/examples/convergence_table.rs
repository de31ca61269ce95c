//! Spatial and temporal refinement studies rendered as markdown tables.
//!
//! The ladders are small so this finishes in seconds; use the
//! `hallaire-study` binary for the full reference configurations.

use hallaire::study::{emit_report, run_study, ReportFormat, Rung, StudyConfig};

fn main() -> hallaire::Result<()> {
    let mut spatial = StudyConfig::table1();
    spatial.ladder = [6, 12, 24].iter().map(|&n| Rung { n, m: 2000 }).collect();
    println!("spatial refinement, M = 2000\n");
    println!(
        "{}",
        emit_report(&run_study(&spatial)?, ReportFormat::Markdown)?
    );

    let temporal = StudyConfig::table2(false);
    println!("temporal refinement, N = 1000\n");
    println!(
        "{}",
        emit_report(&run_study(&temporal)?, ReportFormat::Markdown)?
    );
    Ok(())
}
