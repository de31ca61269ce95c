//! Compares a study against the bundled reference values, then repeats it
//! with a deliberately wrong kernel weight to show the check failing.

use hallaire::study::{self_check, ReferenceTable, StudyConfig};

fn main() -> hallaire::Result<()> {
    let table = ReferenceTable::table2();
    let mut config = StudyConfig::table2(false);
    config.alphas = vec![0.5];

    let summary = self_check(&config, &table)?;
    println!(
        "correct kernel: {} of {} cells pass",
        summary.cells.iter().filter(|c| c.passed()).count(),
        summary.cells.len()
    );

    config.options.leading_coefficient = Some(1.0);
    let broken = self_check(&config, &table)?;
    println!(
        "c_0 forced to 1: {} cells fail, e.g.",
        broken.failures().count()
    );
    for cell in broken.failures().take(3) {
        println!(
            "  alpha={} step={} {}: expected {:.6e}, got {:.6e}",
            cell.alpha, cell.step, cell.column, cell.expected, cell.actual
        );
    }
    Ok(())
}
