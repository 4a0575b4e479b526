//! Drives the `monoidal` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use monoidal::report::Report;

fn monoidal(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_monoidal"));
    cmd.args(args).env_remove("MONOIDAL_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("MONOIDAL_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ucsc_certifies_every_family() {
    let out = monoidal(&["ucsc", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("45 families; 45 certified by frequency, 45 by pseudocomplement"),
        "{text}"
    );
}

#[test]
fn dual_number_table_in_both_formats() {
    let out = monoidal(&["theorem2", "--p", "3", "--nmax", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for column in ["p", "n", "holds", "counterexample-basis", "witness-polynomial-check"] {
        assert!(text.contains(column), "{column}");
    }
    let out = monoidal(&["theorem2", "--p", "3", "--nmax", "4", "--format", "json"], None);
    let report = Report::from_json(&stdout(&out)).unwrap();
    let holds: Vec<bool> = report
        .data
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["holds"].as_bool().unwrap())
        .collect();
    assert_eq!(holds, [true, true, true, false]);
    assert_eq!(report.data[3]["counterexample_basis"], serde_json::json!([1, 9]));
}

#[test]
fn non_closed_family_is_an_operational_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "n=3\n-\n0,1\n1,2\n0,1,2\n").unwrap();
    let out = monoidal(&["family-check", "--input", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("not intersection-closed") && err.contains("0b11") && err.contains("0b110"),
        "{err}"
    );
}

#[test]
fn family_files_round_trip_through_the_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "n=3\n-\n0\n0,1\n0,2\n0,1,2\n").unwrap();
    for verb in ["family-check", "pseudo-solve"] {
        let out = monoidal(&[verb, "--input", path.to_str().unwrap(), "--format", "json"], None);
        assert_eq!(out.status.code(), Some(0), "{verb}");
        let report = Report::from_json(&stdout(&out)).unwrap();
        assert_eq!(report.data["family"], "n=3\n-\n0\n0,1\n0,2\n0,1,2\n");
    }
}

#[test]
fn machine_output_ignores_worker_count() {
    let args = |jobs: &'static str| ["conj3", "--n", "3", "--format", "json", "--jobs", jobs];
    let a = monoidal(&args("1"), None);
    let b = monoidal(&args("4"), None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = Report::from_json(&stdout(&a)).unwrap();
    assert_eq!(report.to_json().unwrap(), stdout(&a).trim_end());
}

#[test]
fn second_run_hits_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let first = stdout(&monoidal(&["ucsc", "--n", "4"], Some(dir.path())));
    let second = stdout(&monoidal(&["ucsc", "--n", "4"], Some(dir.path())));
    assert!(first.contains("(cached)"), "{first}");
    assert!(second.contains("(cache hit)"), "{second}");
    let flag = stdout(&monoidal(
        &["ucsc", "--n", "4", "--cache-dir", dir.path().to_str().unwrap()],
        None,
    ));
    assert!(flag.contains("(cache hit)"));
}

#[test]
fn bad_inputs_exit_with_one() {
    assert_eq!(
        monoidal(&["network-check", "--ring", "mod:x"], None).status.code(),
        Some(1)
    );
    assert_eq!(
        monoidal(&["conj2", "--n", "4", "--cap", "3"], None).status.code(),
        Some(1)
    );
    assert_eq!(monoidal(&["prop9", "--ring", "gf:2^2"], None).status.code(), Some(1));
    assert_eq!(
        monoidal(&["ucsc", "--n", "2", "--jobs", "0"], None).status.code(),
        Some(1)
    );
}

#[test]
fn emitted_certificates_revalidate() {
    let out = monoidal(
        &[
            "network-check",
            "--ring",
            "dual:3^2",
            "--multiaction",
            "automorphic",
            "--format",
            "json",
        ],
        None,
    );
    let report = Report::from_json(&stdout(&out)).unwrap();
    let net: monoidal::network::NetworkReport = serde_json::from_value(report.data).unwrap();
    assert!(net.verdict);
    assert!(net.certificates().count() > 0);
    for cert in net.certificates() {
        cert.revalidate().unwrap();
    }

    let out = monoidal(&["prop9", "--ring", "mod:9", "--format", "json"], None);
    let report = Report::from_json(&stdout(&out)).unwrap();
    let local: monoidal::local::LocalReport = serde_json::from_value(report.data).unwrap();
    assert!(local.holds());
    for cert in &local.certificates {
        cert.revalidate().unwrap();
    }
}
