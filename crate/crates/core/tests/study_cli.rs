//! Study harness and the `hallaire-study` binary.

use std::process::Command;

use hallaire::study::{
    emit_report, parse_csv, run_study, self_check, ReferenceTable, Refinement, ReportFormat, Rung,
    StudyConfig, CSV_HEADER,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hallaire-study"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn table2_cell_from_a_short_ladder() {
    let mut cfg = StudyConfig::table2(false);
    cfg.alphas = vec![0.9];
    cfg.ladder.truncate(3);
    let report = run_study(&cfg).unwrap();
    let row = report.rows.iter().find(|r| r.step_label == "1/20").unwrap();
    assert!((row.max_levels.c / 2.369760e-3 - 1.0).abs() < 0.01);
    let detail = row.details.unwrap();
    // the error grows in time for this problem, so both readings coincide
    assert_eq!(detail.final_level, row.max_levels);
}

#[test]
fn csv_is_deterministic_and_round_trips() {
    let mut cfg = StudyConfig::table2(false);
    cfg.ladder = vec![Rung { n: 200, m: 10 }, Rung { n: 200, m: 20 }];
    let a = emit_report(&run_study(&cfg).unwrap(), ReportFormat::Csv).unwrap();
    let b = emit_report(&run_study(&cfg).unwrap(), ReportFormat::Csv).unwrap();
    assert_eq!(a, b);
    let parsed = parse_csv(&a, Refinement::Temporal).unwrap();
    assert_eq!(emit_report(&parsed, ReportFormat::Csv).unwrap(), a);
}

#[test]
fn perturbed_kernel_fails_self_check_with_named_cells() {
    let mut cfg = StudyConfig::table2(false);
    cfg.alphas = vec![0.1];
    cfg.ladder.truncate(2);
    cfg.options.leading_coefficient = Some(1.0);
    let summary = self_check(&cfg, &ReferenceTable::table2()).unwrap();
    assert!(!summary.passed());
    let failed: Vec<String> = summary
        .failures()
        .map(|c| format!("{}@{}", c.column, c.step))
        .collect();
    assert!(failed.contains(&"err_C@1/10".to_string()), "{failed:?}");
}

#[test]
fn empty_reference_is_a_degenerate_pass() {
    let mut cfg = StudyConfig::table2(false);
    cfg.ladder.truncate(1);
    cfg.alphas = vec![0.5];
    let summary = self_check(&cfg, &ReferenceTable::empty("none", Refinement::Temporal)).unwrap();
    assert!(summary.passed());
    assert!(summary.cells.is_empty());
    assert_eq!(summary.warnings.len(), 1);
}

#[test]
fn cli_prints_csv() {
    let (code, out, _) = run(&[
        "--mode",
        "temporal",
        "--alpha",
        "0.5",
        "--nx",
        "1/100",
        "--nt",
        "1/10,1/20",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("0.5,1/10,"));
    assert!(lines[2].starts_with("0.5,1/20,"));
    let (_, again, _) = run(&[
        "--mode", "temporal", "--alpha", "0.5", "--nx", "100", "--nt", "10,20",
    ]);
    assert_eq!(out, again);
}

#[test]
fn cli_config_file_with_overrides_and_output() {
    let dir = std::env::temp_dir().join(format!("hallaire-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("study.cfg");
    let out = dir.join("report.md");
    std::fs::write(
        &cfg,
        "mode = spatial\nalpha = 0.1, 0.9  # two orders\nnx = 6, 12\nnt = 50\nformat = markdown\n",
    )
    .unwrap();
    let (code, stdout, _) = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let md = std::fs::read_to_string(&out).unwrap();
    assert!(md.starts_with("| α | h |"));
    assert!(md.contains("| 0.3 | 1/6 |"));
    assert!(!md.contains("0.9"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_self_check_passes_and_fails() {
    let (code, out, _) = run(&["--self-check", "table2", "--alpha", "0.5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("0 failed"));
    // Table 1 spacings with a coarse time grid cannot reproduce the table
    let (code, out, _) = run(&["--self-check", "table1", "--alpha", "0.5", "--nt", "100"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL alpha=0.5 step=1/24 err_C"));
}

#[test]
fn cli_usage_errors_exit_2() {
    for args in [
        vec!["--mode", "sideways"],
        vec!["--no-such-flag"],
        vec!["--mode", "spatial", "--alpha", "0.5", "--nx", "6,12"],
        vec!["--config", "/nonexistent/file.cfg"],
        vec!["--self-check", "table7"],
        vec![
            "--mode", "spatial", "--alpha", "1.5", "--nx", "6,12", "--nt", "10",
        ],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn bad_config_line_is_reported() {
    let dir = std::env::temp_dir().join(format!("hallaire-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "mode = spatial\nalpha: 0.5\n").unwrap();
    let (code, _, err) = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}
