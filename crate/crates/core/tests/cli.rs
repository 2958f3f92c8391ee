use std::process::{Command, Output};

fn grasslp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grasslp"))
        .args(args)
        .env_remove("GRASSLP_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = grasslp(&["zonal", "--m", "2", "--n", "4", "--kappa", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("P(1) = m(1) - 1\n"));

    let o = grasslp(&["bound", "--m", "2", "--n", "4", "--s", "0.5", "--method", "simplex"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("simplex: 3 (exact 3)"));

    let o = grasslp(&["crossing", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("1.4528"));
}

#[test]
fn exit_codes() {
    // not applicable
    assert_eq!(grasslp(&["bound", "--m", "2", "--n", "4", "--s", "3", "--method", "simplex"]).status.code(), Some(1));
    // m > n/2
    assert_eq!(grasslp(&["zonal", "--m", "3", "--n", "4", "--kappa", "1"]).status.code(), Some(1));
    // usage
    assert_eq!(grasslp(&["bound", "--m", "2"]).status.code(), Some(2));
    assert_eq!(grasslp(&["zonal", "--m", "2", "--n", "4", "--kappa", "1,x"]).status.code(), Some(2));
    assert_eq!(grasslp(&["audit", "/nonexistent/code.json"]).status.code(), Some(2));
    assert_eq!(grasslp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["bound", "--m", "2", "--n", "6", "--s", "0.7", "--format", "json"][..],
        &["eigen", "--m", "2", "--n", "7", "--k", "3", "--format", "csv"],
        &["plot", "--m", "3"],
        &["matrix", "--m", "2", "--n", "6", "--k", "2", "--blocks"],
    ] {
        let a = grasslp(args);
        let b = grasslp(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_shape() {
    let o = grasslp(&["plot", "--m", "2", "--step", "0.1"]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# grasslp plot"));
    assert_eq!(lines.next().unwrap(), "s,lp_rate,hamming_rate");
    for l in lines {
        let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 3);
    }
}

#[test]
fn json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rate.json");
    let o = grasslp(&["rate", "--m", "2", "--s", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["provenance"], "grasslp rate m=2 n=- k=-");
    assert!(v["result"]["lp_rate"].as_f64().unwrap() > 0.0);
}

#[test]
fn audit_and_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    std::fs::write(
        &path,
        r#"{"n":4,"m":2,"elements":[[[1,0,0,0],[0,1,0,0]],[[0,0,1,0],[0,0,0,1]]],"labels":["a","b"]}"#,
    )
    .unwrap();
    let o = grasslp(&["audit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("audit: pass"));

    // non-orthonormal without --reorthonormalize is an input error; with it, a warning
    std::fs::write(&path, r#"{"n":4,"m":1,"elements":[[[2,0,0,0]],[[0,1,0,0]]]}"#).unwrap();
    assert_eq!(grasslp(&["audit", path.to_str().unwrap()]).status.code(), Some(2));
    let o = grasslp(&["audit", path.to_str().unwrap(), "--reorthonormalize"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: element 0 re-orthonormalized"));

    let o = grasslp(&["selftest", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["zonal", "--m", "3", "--n", "8", "--kappa", "2,1", "--format", "json"];
    let plain = grasslp(&args);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_grasslp"))
            .args(args)
            .env("GRASSLP_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let cold = run();
    let warm = run();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
}
