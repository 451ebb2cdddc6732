use std::process::{Command, Output};

fn ionti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionti"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn spectrum_lists_the_zeeman_step() {
    let o = ionti(&[
        "spectrum",
        "--ion",
        "H",
        "--material",
        "vacuum/TlBiSe2",
        "--state",
        "2P3/2",
        "--b",
        "0.23",
        "--theta-pi",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# ionti "));
    assert!(text.lines().nth(1).unwrap().starts_with("# config: {"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["quantity", "f", "m_f", "eV", "Hz"]);
    let eps: f64 = rows.iter().find(|r| r[0] == "epsilon").unwrap()[4].parse().unwrap();
    assert!((eps / 388.0 - 1.0).abs() < 0.03, "epsilon {eps}");
}

#[test]
fn config_echo_reproduces_the_run() {
    let o = ionti(&[
        "shifts",
        "--state",
        "3D5/2",
        "--ion",
        "He3",
        "--b",
        "0.5",
        "--constants",
        "paper",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json = text.lines().nth(1).unwrap().trim_start_matches("# config: ");
    let cfg: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(cfg["constants"]["mode"], "paper");
    assert_eq!(cfg["ion"]["label"], "He3");
    assert_eq!(cfg["b_um"], 0.5);
    assert_eq!(cfg["params"]["state"], "3D5/2");
    let (_, rows) = csv_rows(&text);
    // j = 5/2 with i = 1/2 gives f = 2 and 3: 5 + 7 states.
    assert_eq!(rows.len(), 12);
}

#[test]
fn rydberg_scan_marks_the_indium_optimum() {
    let o = ionti(&[
        "rydberg-scan",
        "--case",
        "matched",
        "--b",
        "0.265",
        "--grid",
        "1:100x1:100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(rows.len(), 100 * 100);
    let best: Vec<_> = rows
        .iter()
        .filter(|r| r[col("Z")] == "49" && r[col("z_optimum")] == "true")
        .collect();
    assert_eq!(best.len(), 1);
    let shift: f64 = best[0][col("shift_Hz")].parse().unwrap();
    assert!((shift / 1.83e6 - 1.0).abs() < 0.10, "shift {shift}");
}

#[test]
fn curves_and_svg_outputs() {
    let dir = std::env::temp_dir().join(format!("ionti-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let curves = dir.join("curves.csv");
    let svg = dir.join("region.svg");
    let o = ionti(&[
        "rydberg-scan",
        "--grid",
        "1:40x1:40",
        "--format",
        "svg",
        "--out",
        svg.to_str().unwrap(),
        "--curves-out",
        curves.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = std::fs::read_to_string(&svg).unwrap();
    assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&curves).unwrap());
    assert_eq!(header, ["curve", "Z", "n"]);
    assert!(rows.iter().any(|r| r[0] == "retardation"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cp_profile_crosses_zero() {
    let o = ionti(&["cp", "--points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 50);
    let v: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(v[0] < 0.0 && v.iter().any(|&x| x > 0.0));
}

#[test]
fn cp_scan_rows() {
    let o = ionti(&["cp-scan", "--eps2", "1.3,4", "--theta-pi", "1:15:2"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["eps2", "theta_over_pi", "y0_a0", "b_max_um", "V_max_Hz"]);
    assert_eq!(rows.len(), 16);
}

#[test]
fn report_exit_status_tracks_flags() {
    let o = ionti(&["report"]);
    let text = stdout(&o);
    assert!(text.contains("expected-flagged:\n  np32_gamma2_quote"));
    let clean = text.contains("unexpected flags:\n  (none)");
    assert_eq!(o.status.code(), Some(if clean { 0 } else { 4 }));

    let o = ionti(&["report", "--filter", "equal_shift"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ionti(&["report", "--filter", "no-such-entry", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["spectrum", "--state", "2P3/2", "--format", "json"][..],
        &["rydberg-scan", "--grid", "1:30x1:30"][..],
        &["cp-scan", "--format", "svg"][..],
        &["report", "--format", "csv"][..],
    ] {
        assert_eq!(ionti(args).stdout, ionti(args).stdout, "{args:?}");
    }
}

#[test]
fn unknown_labels_are_usage_errors() {
    let o = ionti(&["spectrum", "--ion", "Zz", "--state", "2P3/2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("H") && err.contains("In113"), "{err}");
    let o = ionti(&["spectrum", "--material", "vacuum/Nope", "--state", "2P3/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(ionti(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        ionti(&["spectrum", "--state", "2P3/2", "--format", "text"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_3() {
    assert_eq!(ionti(&["spectrum", "--state", "2D3/2"]).status.code(), Some(3));
    assert_eq!(
        ionti(&["shifts", "--state", "2P3/2", "--b", "0"]).status.code(),
        Some(3)
    );
    assert_eq!(ionti(&["cp", "--ion", "He3"]).status.code(), Some(3));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(ionti(&["--help"]).status.code(), Some(0));
    assert_eq!(ionti(&["--version"]).status.code(), Some(0));
}
