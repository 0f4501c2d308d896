use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mmwave-beamwidth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn case_study() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/case_study_profile.csv")
}

#[test]
fn table1_csv_is_byte_stable() {
    let a = run(&["table1", "--csv"]);
    let b = run(&["table1", "--csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,beamwidth_st_deg,n_st,beamwidth_rt_deg,n_rt"));
    assert!(text.contains("\n0.95,5.60605,23,7.31768,18\n"));
}

#[test]
fn output_file_matches_stdout_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t1.csv");
    let o = run(&["table1", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let printed = run(&["table1", "--csv"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), printed);
    assert!(!dir.path().join("t1.csv.partial").exists());
}

#[test]
fn table1_at_broadside() {
    let o = run(&["table1", "--csv", "--phi0", "90"]);
    assert!(o.status.success());
    // Fewer elements are needed when the beam is steered to broadside.
    let row = stdout(&o).lines().find(|l| l.starts_with("0.95,")).unwrap().to_string();
    let n_st: u64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(n_st, 19);
}

#[test]
fn optimize_covers_center() {
    let o = run(&["optimize", "--sigma", "5", "--delta", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("covers_center"), "{text}");
    let csv = stdout(&run(&["optimize", "--sigma", "5", "--delta", "8", "--csv"]));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let col = header.iter().position(|h| h.starts_with("beamwidth")).unwrap();
    assert!(row[col].parse::<f64>().unwrap() > 16.0);
}

#[test]
fn percentile_rticm() {
    let o = run(&["percentile", "--model", "rticm", "--v", "9.23", "--eta", "0.99"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("3.2"), "{text}");
    assert!(text.contains("N = 40"), "{text}");
}

#[test]
fn percentile_rejects_triangular() {
    let o = run(&["percentile", "--sigma", "5", "--shape", "tri", "--eta", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_recovers_case_study() {
    let o = run(&["fit", "--profile", case_study().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("9.2300"), "{text}");
    assert!(text.contains("53.0000"), "{text}");
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["optimize", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--sigma", "abc"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["optimize", "--sigma", "5", "--v", "7"]).status.code(), Some(2));
}

#[test]
fn invalid_inputs_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["gain", "--elements", "8", "--phi0", "200"],
        &["rho", "--sigma", "-1", "--beamwidth", "10"],
        &["optimize", "--sigma", "0"],
        &["optimize", "--sigma", "5", "--phi0", "-5"],
        &["percentile", "--sigma", "5", "--eta", "1.5"],
        &["table1", "--sigma", "-3"],
        &["sweep", "--sigma", "5", "--range", "1:5:1", "--phi0", "181"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let path = dir.path().join(format!("out{k}.csv"));
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        full.extend(["--output", &p]);
        let o = run(&full);
        assert!(!o.status.success(), "{args:?} should fail");
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error["), "{args:?}");
        assert!(!path.exists(), "{args:?} wrote output");
    }
}

#[test]
fn bad_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let nan = dir.path().join("nan.csv");
    std::fs::write(&nan, "1,1\n2,NaN\n3,1\n4,1\n").unwrap();
    assert_eq!(run(&["fit", "--profile", nan.to_str().unwrap()]).status.code(), Some(7));
    let short = dir.path().join("short.csv");
    std::fs::write(&short, "1,1\n2,1\n3,1\n").unwrap();
    assert_eq!(run(&["fit", "--profile", short.to_str().unwrap()]).status.code(), Some(5));
    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["fit", "--profile", missing.to_str().unwrap()]).status.code(), Some(8));
}

#[test]
fn empty_sweep_range_is_header_only() {
    let o = run(&["sweep", "--sigma", "5", "--range", "10:10:1", "--csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn sweep_rows_follow_range() {
    let o = run(&["sweep", "--sigma", "5", "--range", "1:5:1", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let bws: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(bws, ["1", "2", "3", "4"], "{text}");
}

#[test]
fn gain_reports_elements() {
    let o = run(&["gain", "--beamwidth", "5.60605", "--csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(",23"), "{}", stdout(&o));
}

#[test]
fn cluster_centre_sets_misalignment() {
    let by_x = run(&["optimize", "--sigma", "5", "--x", "45", "--csv"]);
    let by_delta = run(&["optimize", "--sigma", "5", "--delta", "8", "--csv"]);
    assert!(by_x.status.success());
    assert_eq!(by_x.stdout, by_delta.stdout);
    let both = run(&["optimize", "--sigma", "5", "--x", "45", "--delta", "8"]);
    assert_eq!(both.status.code(), Some(2));
}
