use std::process::{Command, Output};

fn akq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akq")).args(args).output().expect("akq runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = akq(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL"));
}

#[test]
fn sweep_leaves_singular_noise_cells_empty() {
    let out = akq(&["sweep", "--theta-grid", "0:pi:5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_rows(&text);
    let header: Vec<&str> = rows[0].split(',').collect();
    let noise = header.iter().position(|h| *h == "noise_sum").unwrap();
    let cells: Vec<Vec<&str>> = rows[1..].iter().map(|r| r.split(',').collect()).collect();
    assert_eq!(cells.len(), 5);
    assert_eq!(cells[0][noise], "");
    assert_eq!(cells[2][noise], "");
    assert_eq!(cells[4][noise], "");
    let quarter: f64 = cells[1][noise].parse().unwrap();
    assert!((quarter - 8.0).abs() < 1e-10);
}

#[test]
fn sweep_single_theta_reports_ln2() {
    let out = akq(&["sweep", "--theta", "pi/3"]);
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    let entropy: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((entropy - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn tsv_uses_tabs() {
    let text = stdout(&akq(&["teleport", "--trials", "5", "--format", "tsv"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0], "trial\trounds_used\tpath\tsuccess\tfidelity");
    assert!(rows[1..].iter().all(|r| r.split('\t').count() == 5));
}

#[test]
fn teleport_trials_all_succeed() {
    let text = stdout(&akq(&["teleport", "--trials", "300", "--sign", "-", "--seed", "3"]));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 301);
    for row in &rows[1..] {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(row.as_bytes());
        let rec = rdr.records().next().unwrap().unwrap();
        assert_eq!(&rec[3], "1");
        let f: f64 = rec[4].parse().unwrap();
        assert!(f >= 1.0 - 1e-10);
        assert!(rec[2].ends_with('1'));
    }
    assert!(text.contains("# mean_rounds="));
}

#[test]
fn bell_swap_output_is_maximally_entangled() {
    let text = stdout(&akq(&["swap", "--trials", "20", "--swap-input", "bell"]));
    for row in &data_rows(&text)[1..] {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(row.as_bytes());
        let rec = rdr.records().next().unwrap().unwrap();
        let out_entropy: f64 = rec[4].parse().unwrap();
        assert!((out_entropy - std::f64::consts::LN_2).abs() < 1e-10);
    }
}

#[test]
fn seeds_change_output() {
    let a = stdout(&akq(&["teleport", "--trials", "50", "--seed", "1"]));
    let b = stdout(&akq(&["teleport", "--trials", "50", "--seed", "2"]));
    assert_ne!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(akq(&["--bogus"]).status.code(), Some(2));
    assert_eq!(akq(&["sweep", "--theta-grid", "0:1:0"]).status.code(), Some(2));
    assert_eq!(akq(&["sweep", "--theta", "pi/3", "--theta-grid", "0:1:3"]).status.code(), Some(2));
    assert_eq!(akq(&["teleport", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(akq(&["teleport", "--sign", "x"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = akq(&["sweep", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = ["sweep", "--theta-grid", "0.1:3:7"];
    let direct = akq(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(akq(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct);
}
