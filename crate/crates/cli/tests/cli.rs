use std::fs;
use std::process::{Command, Output};

fn magspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magspec"))
        .args(args)
        .env("MAGSPEC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn spectrum_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disk.csv");
    let o = magspec(&["spectrum", "--domain", "disk:R=1", "--beta", "1", "--k", "10", "--h", "0.1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# magspec ") && first.contains("config="));
    let r = rows(&csv);
    assert_eq!(r.len(), 10);
    let lambdas: Vec<f64> = r.iter().map(|c| c[1].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
    assert!((lambdas[0] - 0.12467).abs() < 2e-3);

    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("disk.csv.json")).unwrap()).unwrap();
    let hash = side["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 16);
    assert!(first.ends_with(hash));
    assert_eq!(side["summary"]["count"], 10);
}

#[test]
fn zero_field_square_recovers_neumann_laplacian() {
    let o = magspec(&["spectrum", "--domain", "square:s=1", "--beta", "0", "--k", "3", "--h", "0.05"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let l: Vec<f64> = r.iter().map(|c| c[1].parse().unwrap()).collect();
    assert!(l[0].abs() < 1e-8);
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((l[1] - pi2).abs() / pi2 < 0.01);
    assert!((l[2] - pi2).abs() / pi2 < 0.01);
}

#[test]
fn runs_are_byte_identical() {
    let args = ["spectrum", "--domain", "ellipse:a=1,b=0.6", "--beta", "2", "--k", "6", "--h", "0.08"];
    let a = magspec(&args);
    let b = magspec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn closed_form_disk_matches_fem() {
    let cf = rows(&stdout(&magspec(&["spectrum", "--domain", "disk:R=1", "--beta", "3", "--k", "4", "--closed-form"])));
    let fe = rows(&stdout(&magspec(&["spectrum", "--domain", "disk:R=1", "--beta", "3", "--k", "4", "--h", "0.04"])));
    for (a, b) in cf.iter().zip(&fe) {
        let (x, y): (f64, f64) = (a[1].parse().unwrap(), b[1].parse().unwrap());
        assert!((x - y).abs() / x < 0.01, "{x} vs {y}");
    }
}

#[test]
fn invalid_inputs_exit_one() {
    for args in [
        vec!["spectrum", "--domain", "disk:R=-1"],
        vec!["spectrum", "--domain", "blob:x=1"],
        vec!["spectrum", "--domain", "{\"kind\":"],
        vec!["spectrum", "--domain", "disk:R=1", "--h", "0"],
        vec!["spectrum", "--domain", "disk:R=1", "--k", "0"],
        vec!["spectrum", "--domain", "annulus:r_in=2,r_out=1"],
        vec!["disk-branches", "--r-grid", ""],
        vec!["disk-branches", "--r-grid", "1:2:0"],
        vec!["spectrum", "--bogus"],
    ] {
        let o = magspec(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn missing_files_exit_three() {
    let o = magspec(&["spectrum", "--domain", "/nonexistent/domain.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = magspec(&["bounds", "--domain", "disk:R=1", "--constants-file", "/nonexistent/c.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn domain_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("rect.json");
    fs::write(&p, r#"{"kind":"rectangle","params":{"w":2,"h":1}}"#).unwrap();
    let a = magspec(&["spectrum", "--domain", p.to_str().unwrap(), "--k", "2", "--h", "0.1"]);
    let b = magspec(&["spectrum", "--domain", "rect:w=2,h=1", "--k", "2", "--h", "0.1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn disk_branches_grid() {
    let o = magspec(&["disk-branches", "--beta", "1", "--r-grid", "0.5:2:4", "--n-max", "3"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 16);
    // n = 0 at R = 0.5 sits near the constant-field ground state.
    let l: f64 = r[0][2].parse().unwrap();
    assert!((l - 0.03124).abs() < 1e-4);
}

#[test]
fn bounds_gate_annulus() {
    let o = magspec(&["bounds", "--domain", "annulus:r_in=0.5,r_out=1", "--beta", "1", "--h", "0.08"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v["report"]["entries"].as_array().unwrap();
    let status = |name: &str| {
        entries.iter().find(|e| e["theorem"] == name).map(|e| e["verdict"]["status"].as_str().unwrap().to_owned())
    };
    assert_eq!(status("variable_torsion").as_deref(), Some("inapplicable"));
    assert_eq!(status("simply_connected_area").as_deref(), Some("inapplicable"));
    assert_eq!(status("universal").as_deref(), Some("pass"));
    assert!(entries.iter().all(|e| e["verdict"]["status"] != "fail"));
}

#[test]
fn bounds_constants_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("c.json");
    fs::write(&good, r#"{"c1": 1.0, "m": 81}"#).unwrap();
    let o = magspec(&["bounds", "--domain", "disk:R=1", "--h", "0.1", "--constants-file", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    let o = magspec(&["bounds", "--domain", "disk:R=1", "--constants-file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn theta0_value() {
    let o = magspec(&["theta0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = v["report"]["theta0"].as_f64().unwrap();
    assert!((t - 0.590106).abs() < 5e-4);
}

#[test]
fn riesz_on_closed_form_disk() {
    let o = magspec(&["riesz", "--domain", "disk:R=2", "--beta", "1", "--k", "20", "--closed-form"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert!(!r.is_empty());
    assert!(r.iter().all(|c| c[4] == "true"));
}

#[test]
fn sweep_and_dvsn() {
    let o = magspec(&["sweep", "--curve", "circle:R=1", "--thickness", "0.2,0.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&stdout(&o)).len(), 2);
    let o = magspec(&["figure", "dvsn", "--r-grid", "1", "--h", "0.1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let (d, n): (f64, f64) = (r[0][1].parse().unwrap(), r[0][2].parse().unwrap());
    assert!(d > n);
}

#[test]
fn verify_fast_and_perturbed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let o = magspec(&["verify", "--fast", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["report"]["failed"], 0);

    let o = magspec(&["verify", "--fast", "--perturb", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn bad_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_magspec"))
        .args(["theta0"])
        .env("MAGSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
