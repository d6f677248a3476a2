use std::process::Command;

fn lab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_szego-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    let body: String = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let mut r = csv::Reader::from_reader(body.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn dim_on_p1_is_k() {
    let out = lab(&["dim", "--model", "p1", "--kmin", "1", "--kmax", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], "dim");
        assert_eq!(row[1], (i + 1).to_string());
        assert_eq!(row[5].parse::<f64>().unwrap(), (i + 1) as f64);
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "diag", "--r", "3", "--kmin", "5", "--kmax", "25", "--kstep", "2", "--seed", "11",
    ];
    let a = lab(&args);
    let b = lab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn header_records_conventions() {
    let out = lab(&[
        "diag",
        "--r",
        "4",
        "--point",
        "orthonormal-ZW",
        "--fiber-norm",
        "inv2pi",
        "--bracket",
        "sec4",
        "--kmin",
        "10",
        "--kmax",
        "20",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "# experiment: diag",
        "# version: szego-lab v",
        "# fiber_norm: inv2pi",
        "# bracket: sec4",
        "# branch_rule:",
        "# volume_normalization:",
        "# point: orthonormal-ZW",
    ] {
        assert!(text.contains(needle), "missing {needle:?}");
    }
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("szego-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("oracle.csv");
    let out = lab(&[
        "oracle",
        "--kmin",
        "1",
        "--kmax",
        "3",
        "--out",
        path.to_str().unwrap(),
        "--assert",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data_rows(&text).len(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["dim", "--r", "1"][..],
        &["dim", "--kmin", "9", "--kmax", "3"],
        &["diag", "--point", "1,2,3"],
        &["oracle", "--kmax", "40"],
        &["decay", "--model", "p1"],
        &["dim", "--budget", "0"],
    ] {
        let out = lab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn assert_failure_exits_three() {
    // odd r has no dimension-limit integral, so the check cannot pass
    let out = lab(&[
        "dim", "--r", "3", "--kmin", "11", "--kmax", "21", "--kstep", "2", "--assert",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let ok = lab(&[
        "diag", "--model", "p1", "--kmin", "1", "--kmax", "30", "--assert",
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn neardiag_emits_rate_columns() {
    let out = lab(&[
        "neardiag", "--model", "p1", "--kmin", "150", "--kmax", "150", "--assert",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# u0: 1"));
    assert_eq!(data_rows(&text).len(), 5);
}
