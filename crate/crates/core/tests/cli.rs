//! End-to-end runs of the `winkler` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_winkler");

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("WINKLER_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_config(dir: &Path, v: &Value) -> PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn base(alpha: f64, beta: f64, load: Value) -> Value {
    json!({
        "schema": "winkler-limit/1",
        "parameters": {"lambda_f": 1, "mu_f": 1, "rho_E": 1, "rho_nu": 1,
                       "alpha": alpha, "beta": beta, "h_f": 1, "h_b": 1, "L": 1, "cell": [1, 1]},
        "load": load,
    })
}

fn assert_close_json(got: &Value, want: &Value, tol: f64) {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len());
            a.iter().zip(b).for_each(|(x, y)| assert_close_json(x, y, tol));
        }
        (Value::Object(a), Value::Object(b)) => {
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
            a.iter().for_each(|(k, x)| assert_close_json(x, &b[k], tol));
        }
        _ => assert_eq!(got, want),
    }
}

#[test]
fn classify_reports_regimes_and_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    for (a, b, regime) in [(-1.0, 1.0, "persistent_3d"), (0.0, 0.0, "rigid"), (3.0, 1.0, "rigid"), (0.0, 2.0, "membrane_in_plane_foundation")] {
        let cfg = write_config(dir.path(), &base(a, b, json!([])));
        let o = run(&["classify", "--config", cfg.to_str().unwrap()], dir.path());
        assert_eq!(code(&o), 0);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["regime"], regime, "({a}, {b})");
        for key in ["alpha", "beta", "gamma", "delta", "coefficients", "ell_in", "ell_tr"] {
            assert!(!v[key].is_null(), "{key}");
        }
    }
}

#[test]
fn reduced_solutions_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg, golden, file) in [
        ("solve-membrane", "configs/membrane.json", "tests/data/reduced_membrane.json", "reduced_membrane.json"),
        ("solve-plate", "configs/plate.json", "tests/data/reduced_plate.json", "reduced_plate.json"),
    ] {
        let o = run(&[cmd, "--config", manifest(cfg).to_str().unwrap()], dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let want: Value = serde_json::from_str(&std::fs::read_to_string(manifest(golden)).unwrap()).unwrap();
        let printed: Value = serde_json::from_slice(&o.stdout).unwrap();
        let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(file)).unwrap()).unwrap();
        assert_close_json(&printed, &want, 1e-12);
        assert_eq!(printed, written);
    }
}

#[test]
fn zero_mode_plate_spring() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base(0.0, 4.0, json!([{"n": [0, 0], "p": [1.0, 0.0]}])));
    let o = run(&["solve-plate", "--config", cfg.to_str().unwrap()], dir.path());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    // K_tr = 4 mu_b (lambda_b + mu_b) / (lambda_b + 2 mu_b) = 8/3
    assert!((v[0]["zeta"][2][0].as_f64().unwrap() - 0.375).abs() <= 1e-12);
}

#[test]
fn zero_load_gives_zero_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &base(0.0, 2.0, json!([{"n": [1, 0]}])));
    let o = run(&["solve-membrane", "--config", cfg.to_str().unwrap()], dir.path());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["zeta"], json!([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));

    let o = run(&["solve3d", "--config", cfg.to_str().unwrap(), "--eps", "0.5", "--mesh-n", "4"], dir.path());
    assert_eq!(code(&o), 0);
    let field: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("field3d_0.json")).unwrap()).unwrap();
    let u = field[0]["u"].as_array().unwrap();
    assert_eq!(u.len(), 9);
    for node in u {
        assert_eq!(node, &json!([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));
    }
}

#[test]
fn solve3d_reports_stationarity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solve3d", "--config", manifest("configs/plate.json").to_str().unwrap(), "--eps", "0.5,0.125"], dir.path());
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    for s in v.as_array().unwrap() {
        assert!(s["stationarity"].as_f64().unwrap() <= 1e-10);
        assert_eq!(s["mesh_n"], 64);
    }
    let field: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("field3d_1.json")).unwrap()).unwrap();
    assert_eq!(field[0]["mode"], json!([1, 0]));
    assert_eq!(field[0]["nodes"].as_array().unwrap().len(), 129);
}

#[test]
fn converge_single_eps_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest("configs/membrane.json");
    let o = run(&["converge", "--config", cfg.to_str().unwrap(), "--eps", "0.25", "--mesh-n", "8"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "eps,err_h1,err_l2_bond,kappa_film,e33_film_eps2,ea3_film_eps,kappa33_bond,r_film_k33,r_film_k3a,r_bl_kaa,mesh_n,ms"
    );
    let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!((row[0], row[10], row[11]), (0.25, 8.0, 0.0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(report["eps_values"], json!([0.25]));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), csv);
}

#[test]
fn outputs_are_reproducible_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = manifest("configs/plate.json");
    let args = ["converge", "--config", cfg.to_str().unwrap(), "--eps", "0.5,0.25,0.125", "--mesh-n", "16"];
    let oa = Command::new(BIN).args(args).arg("--out").arg(a.path()).env("WINKLER_THREADS", "1").output().unwrap();
    let ob = Command::new(BIN).args(args).args(["--threads", "3", "--out"]).arg(b.path()).output().unwrap();
    assert_eq!((code(&oa), code(&ob)), (0, 0));
    for f in ["sweep.csv", "sweep.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bad = d.join("bad.json");
    std::fs::write(&bad, "{\"schema\": ").unwrap();
    let o = run(&["solve3d", "--config", bad.to_str().unwrap()], d);
    assert_eq!(code(&o), 2);

    let mut v = base(0.0, 2.0, json!([]));
    v["surprise"] = json!(true);
    let cfg = write_config(d, &v);
    assert_eq!(code(&run(&["classify", "--config", cfg.to_str().unwrap()], d)), 2);

    let mut v = base(0.0, 2.0, json!([]));
    v["schema"] = json!("winkler-limit/0");
    let cfg = write_config(d, &v);
    assert_eq!(code(&run(&["classify", "--config", cfg.to_str().unwrap()], d)), 2);

    let cfg = write_config(d, &base(0.0, 2.0, json!([{"n": [1, 0], "p": [1, 0]}])));
    assert_eq!(code(&run(&["converge", "--config", cfg.to_str().unwrap(), "--eps", "0.5,-1"], d)), 2);
    assert_eq!(code(&run(&["classify"], d)), 2);

    // regime mismatches
    assert_eq!(code(&run(&["solve-plate", "--config", cfg.to_str().unwrap()], d)), 3);
    let cfg = write_config(d, &base(0.0, 0.0, json!([{"n": [1, 0], "p": [1, 0]}])));
    assert_eq!(code(&run(&["converge", "--config", cfg.to_str().unwrap(), "--eps", "0.5"], d)), 3);
    let cfg = write_config(d, &base(-2.0, 1.0, json!([{"n": [1, 0], "p": [1, 0]}])));
    assert_eq!(code(&run(&["solve3d", "--config", cfg.to_str().unwrap(), "--eps", "0.5"], d)), 3);
}
