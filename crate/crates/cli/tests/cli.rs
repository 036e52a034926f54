use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qclock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn check_value(report: &Value, name: &str) -> f64 {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["value"]
        .as_f64()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p
}

fn header(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file))
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

/// Every file in `dir`, sorted by name.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

const COHERENT: &str = r#"{
  "name": "coherent",
  "profile": {"kind": "constant", "omega0": 1.0},
  "gaussian": {"q": 1.0, "p": 0.0, "alpha": 0.7071067811865476, "beta": 0.0},
  "time": {"t_start": 0.0, "t_end": 6.0, "n_output": 13},
  "solver": {"dt": 1e-3}
}"#;

#[test]
fn bundled_scenarios_pass() {
    let tmp = TempDir::new().unwrap();
    for (name, command) in [
        ("ac2.json", "gaussian"),
        ("ac3.json", "synchronize"),
        ("ac4.json", "invariants"),
        ("ac6.json", "brackets"),
        ("ac7.json", "invariants"),
        ("ac9.json", "pde"),
    ] {
        let out_dir = tmp.path().join(name);
        let out = qclock(&[
            command,
            "--config",
            &scenario(name),
            "--out",
            path(&out_dir),
        ]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(report(&out_dir)["all_pass"], true);
    }
    for name in ["ac1.json", "ac8.json"] {
        let out_dir = tmp.path().join(name);
        let out = qclock(&[
            "batch",
            "--jobs",
            "4",
            "--config",
            &scenario(name),
            "--out",
            path(&out_dir),
        ]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
    }
}

#[test]
fn coherent_compare_matches_the_effective_dynamics() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", COHERENT);
    let out_dir = tmp.path().join("out");
    let out = qclock(&["compare", "--config", path(&cfg), "--out", path(&out_dir)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out_dir);
    assert!(check_value(&r, "moment_deviation") < 1e-6);
    assert_eq!(r["command"], "compare");
    assert_eq!(
        header(&out_dir, "compare.csv"),
        "t,x1_eff,p1_eff,x2_eff,p2_eff,d_eff,x1_pde,p1_pde,x2_pde,p2_pde,d_pde,fidelity,norm,excess_kurtosis"
    );
    assert_eq!(
        fs::read_to_string(out_dir.join("compare.csv"))
            .unwrap()
            .lines()
            .count(),
        14
    );
}

#[test]
fn nonpositive_width_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        &COHERENT.replace("\"alpha\": 0.7071067811865476", "\"alpha\": 0.0"),
    );
    let out = qclock(&[
        "gaussian",
        "--config",
        path(&cfg),
        "--out",
        path(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gaussian.alpha"), "{}", stderr(&out));
}

#[test]
fn malformed_configs_exit_with_2() {
    let tmp = TempDir::new().unwrap();
    let o = tmp.path().join("o");
    let cases = [
        (
            "unknown key",
            COHERENT.replace("\"name\"", "\"colour\": 1, \"name\""),
        ),
        (
            "bad epsilon",
            COHERENT.replace(
                "{\"kind\": \"constant\", \"omega0\": 1.0}",
                "{\"kind\": \"floquet\", \"omega0\": 1.0, \"epsilon\": 1.5, \"nu\": 2.0}",
            ),
        ),
        (
            "misaligned dt",
            COHERENT.replace("\"dt\": 1e-3", "\"dt\": 7e-3"),
        ),
        (
            "unknown check",
            COHERENT.replace("\"solver\"", "\"checks\": [\"nope\"], \"solver\""),
        ),
        ("not json", "{".to_string()),
    ];
    for (what, text) in cases {
        let cfg = write_config(tmp.path(), "c.json", &text);
        let out = qclock(&["compare", "--config", path(&cfg), "--out", path(&o)]);
        assert_eq!(code(&out), 2, "{what}: {}", stderr(&out));
        assert!(stderr(&out).contains("configuration error"), "{what}");
    }
    // The α clock is integrated on the output grid, so it needs a finer one here.
    let fine = write_config(
        tmp.path(),
        "fine.json",
        &fs::read_to_string(scenario("ac2.json"))
            .unwrap()
            .replace("\"n_output\": 2001", "\"n_output\": 8001"),
    );
    let out = qclock(&["synchronize", "--config", path(&fine), "--out", path(&o)]);
    assert_eq!(
        code(&out),
        0,
        "gaussian packets synchronize with the alpha clock"
    );
    let out = qclock(&[
        "classical",
        "--config",
        &scenario("ac2.json"),
        "--out",
        path(&o),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("`classical`"));
    let out = qclock(&[
        "gaussian",
        "--config",
        path(&tmp.path().join("missing.json")),
    ]);
    assert_eq!(code(&out), 2);
    let out = qclock(&[
        "batch",
        "--jobs",
        "0",
        "--config",
        &scenario("ac8.json"),
        "--out",
        path(&o),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_overrides_control_the_verdict() {
    let tmp = TempDir::new().unwrap();
    let o = tmp.path().join("o");
    let cfg = scenario("ac3.json");
    let out = qclock(&[
        "synchronize",
        "--config",
        &cfg,
        "--out",
        path(&o),
        "--tolerance-override",
        "clock_fit=1e-12",
    ]);
    assert_eq!(code(&out), 1);
    let r = report(&o);
    assert_eq!(r["all_pass"], false);
    assert_eq!(r["checks"][0]["tolerance"], 1e-12);
    let resolved: Value =
        serde_json::from_str(&fs::read_to_string(o.join("resolved_config.json")).unwrap()).unwrap();
    assert_eq!(resolved["tolerances"]["clock_fit"], 1e-12);

    let out = qclock(&[
        "synchronize",
        "--config",
        &cfg,
        "--out",
        path(&o),
        "--tolerance-override",
        "clockfit=1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("tolerances.clockfit"));
}

#[test]
fn collapse_is_a_numerical_failure() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "collapse.json",
        r#"{
          "profile": {"kind": "constant", "omega0": 0.0},
          "classical": {"q": 1.0, "qdot": 0.0},
          "eta": {"omega": 1e-12, "eta0": 1.0, "eta_dot0": -1.0},
          "time": {"t_start": 0.0, "t_end": 2.0, "n_output": 21}
        }"#,
    );
    let out = qclock(&[
        "classical",
        "--config",
        path(&cfg),
        "--out",
        path(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("numerical failure"));
}

#[test]
fn outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let o = tmp.path().join("o");
    for (command, name) in [
        ("brackets", "ac6.json"),
        ("synchronize", "ac3.json"),
        ("pde", "ac9.json"),
    ] {
        assert_eq!(
            code(&qclock(&[
                command,
                "--config",
                &scenario(name),
                "--out",
                path(&o)
            ])),
            0
        );
        let first = snapshot(&o);
        assert_eq!(
            code(&qclock(&[
                command,
                "--config",
                &scenario(name),
                "--out",
                path(&o)
            ])),
            0
        );
        assert_eq!(first, snapshot(&o), "{command}");
    }

    let (a, b) = (tmp.path().join("serial"), tmp.path().join("parallel"));
    assert_eq!(
        code(&qclock(&[
            "batch",
            "--jobs",
            "1",
            "--config",
            &scenario("ac8.json"),
            "--out",
            path(&a)
        ])),
        0
    );
    assert_eq!(
        code(&qclock(&[
            "batch",
            "--jobs",
            "3",
            "--config",
            &scenario("ac8.json"),
            "--out",
            path(&b)
        ])),
        0
    );
    assert_eq!(
        fs::read(a.join("batch_report.json")).unwrap(),
        fs::read(b.join("batch_report.json")).unwrap()
    );
    for name in ["ac8_constant", "ac8_floquet"] {
        assert_eq!(
            fs::read(a.join(name).join("report.json")).unwrap(),
            fs::read(b.join(name).join("report.json")).unwrap()
        );
    }
}

#[test]
fn resolved_config_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let o = tmp.path().join("o");
    let out = qclock(&[
        "gaussian",
        "--config",
        &scenario("ac2.json"),
        "--out",
        path(&o),
        "--tolerance-override",
        "alpha_eta=2e-8",
    ]);
    assert_eq!(code(&out), 0);
    let first = snapshot(&o);
    let echo = tmp.path().join("echo.json");
    fs::copy(o.join("resolved_config.json"), &echo).unwrap();
    let out = qclock(&["gaussian", "--config", path(&echo)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(first, snapshot(&o));

    let echoed: Value = serde_json::from_str(&fs::read_to_string(&echo).unwrap()).unwrap();
    assert_eq!(echoed["physics"]["mass"], 2.0);
    assert_eq!(echoed["solver"]["rel_tol"], 1e-12);
    assert_eq!(echoed["tolerances"]["alpha_eta"], 2e-8);
    assert!(echoed["classical"].is_null());
}

#[test]
fn csv_headers_are_fixed() {
    let tmp = TempDir::new().unwrap();
    let o = tmp.path().join("o");
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &COHERENT.replace(
            "\"solver\"",
            "\"classical\": {\"q\": 1.0, \"qdot\": 0.5}, \"output\": {\"snapshots\": true, \"snapshot_stride\": 4}, \"solver\"",
        ),
    );
    let expect = [
        ("classical", "classical.csv", "t,q,qdot,W1,W2"),
        (
            "gaussian",
            "gaussian.csv",
            "t,q,p,alpha,beta,gamma,C,I_alpha,H_eff,tau",
        ),
        ("pde", "pde.csv", "t,x1,p1,x2,p2,d,C,norm,excess_kurtosis"),
        ("pde", "density.csv", "t,x,density"),
        ("synchronize", "synchronize.csv", "t,tau,h,Q,dQ_dtau"),
    ];
    for (command, file, head) in expect {
        let out = qclock(&[command, "--config", path(&cfg), "--out", path(&o)]);
        assert_eq!(code(&out), 0, "{command}: {}", stderr(&out));
        assert_eq!(header(&o, file), head);
        if file == "density.csv" {
            let n_rows = fs::read_to_string(o.join(file)).unwrap().lines().count() - 1;
            let grid_points = report(&o)["summary"]["grid_points"].as_f64().unwrap() as usize;
            assert_eq!(n_rows, 13 * grid_points / 4);
        }
    }

    let with_eta = write_config(
        tmp.path(),
        "e.json",
        &fs::read_to_string(&cfg).unwrap().replace(
            "\"solver\"",
            "\"eta\": {\"omega\": 1.0, \"eta0\": 1.0}, \"solver\"",
        ),
    );
    assert_eq!(
        code(&qclock(&[
            "classical",
            "--config",
            path(&with_eta),
            "--out",
            path(&o)
        ])),
        0
    );
    assert_eq!(header(&o, "classical.csv"), "t,q,qdot,W1,W2,I_eta");
    let r = report(&o);
    assert!(check_value(&r, "invariant_drift") < 1e-9);
}
