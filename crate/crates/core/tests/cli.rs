use std::process::{Command, Output};

fn trm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trm"))
        .args(args)
        .output()
        .expect("run trm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_shape(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn outputs_are_deterministic() {
    for cmd in [
        "spectrum",
        "potential",
        "wavefunctions",
        "poly",
        "jacobi-probe",
    ] {
        let args = [cmd, "--grid", "40", "--n-max", "4"];
        let (x, y) = (trm(&args), trm(&args));
        assert!(
            x.status.success(),
            "{cmd}: {}",
            String::from_utf8_lossy(&x.stderr)
        );
        assert_eq!(x.stdout, y.stdout, "{cmd}");
    }
}

#[test]
fn spectrum_csv_rows() {
    let o = trm(&["spectrum", "--a", "0", "--b", "1", "--n-max", "3"]);
    let (header, rows) = csv_shape(&stdout(&o));
    assert_eq!(
        header,
        ["n", "beta_n", "alpha_n", "epsilon_n", "epsilon_n_value"]
    );
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1..4], ["0", "2", "0"]);
    assert_eq!(rows[1][3], "15/4");
}

#[test]
fn tabular_csv_dimensions() {
    let (header, rows) = csv_shape(&stdout(&trm(&["potential", "--grid", "37"])));
    assert_eq!(header, ["z", "v", "coulomb", "linear_ho"]);
    assert_eq!(rows.len(), 37);

    let (header, rows) = csv_shape(&stdout(&trm(&[
        "wavefunctions",
        "--grid",
        "25",
        "--n-max",
        "5",
    ])));
    assert_eq!(header.len(), 6);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.len() == 6));
}

#[test]
fn json_output_parses() {
    let o = trm(&["spectrum", "--format", "json", "--n-max", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_array() || v.is_object());

    let o = trm(&["poly", "--a", "0", "--n-max", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v[2]["poly"]["coeffs"],
        serde_json::json!(["-14/9", "-4", "6"])
    );
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("trm-cli-{}.csv", std::process::id()));
    let o = trm(&["spectrum", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text, stdout(&trm(&["spectrum"])));
}

#[test]
fn verify_exit_codes() {
    let o = trm(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let o = trm(&["verify", "--tol", "1e-30", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "non_convergence");
    assert!(err["best_estimate"].is_number());
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["spectrum", "--a", "-1"][..],
        &["spectrum", "--b", "0"],
        &["spectrum", "--n-max", "0"],
        &["spectrum", "--a", "x/y"],
        &["nonsense"],
    ] {
        assert_eq!(trm(args).status.code(), Some(1), "{args:?}");
    }
    let o = trm(&["spectrum", "--a", "-1/4", "--n-max", "1"]);
    assert!(o.status.success());
}
