use std::process::{Command, Output};

use serde_json::Value;

fn su2n(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2n")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn spectrum_csv() {
    let o = su2n(&["spectrum", "--jmax", "5/2", "--G", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,epsilon,E_tilde,E_total,degeneracy");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[2], "3/2,4,-0.125,-0.125,4");
}

#[test]
fn spectrum_json() {
    let o = su2n(&["spectrum", "--jmax", "1/2", "--G", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("\"E_tilde\": -2.0"));
    let v: Value = serde_json::from_str(&text).unwrap();
    let row = &v[0];
    assert_eq!(row["j"], "1/2");
    assert_eq!(row["epsilon"], 1);
    assert_eq!(row["E_tilde"].as_f64(), Some(-2.0));
    assert_eq!(row["degeneracy"], 2);
}

#[test]
fn spectrum_longitudinal_offset() {
    let o = su2n(&["spectrum", "--jmax", "1/2", "--k", "1", "--L", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let total = v[0]["E_total"].as_f64().unwrap();
    assert!((total - (-0.5 + std::f64::consts::PI / 2.0)).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    let o = su2n(&["spectrum"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--jmax"));
    assert_eq!(code(&su2n(&["multiplet", "--j", "2"])), 2);
    assert_eq!(code(&su2n(&["fd", "--jz", "1/3"])), 2);
    assert_eq!(code(&su2n(&["spectrum", "--jmax", "1/2", "--G", "0"])), 2);
    assert_eq!(code(&su2n(&["spectrum", "--jmax", "1/2", "--tol", "0"])), 2);
    assert_eq!(code(&su2n(&["fd", "--jz", "1/2", "--n", "64,32,128"])), 2);
    assert_eq!(code(&su2n(&["transform", "--j", "1/2", "--jz", "3/2"])), 2);
    assert_eq!(code(&su2n(&["bogus"])), 2);
}

#[test]
fn multiplet_half() {
    let o = su2n(&["multiplet", "--j", "1/2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 2);
    let top = states.last().unwrap();
    assert_eq!(top["jz"], "1/2");
    let expected: Value = serde_json::from_str(r#"[{"num":"1","den":"1","a2":1,"b2":3}]"#).unwrap();
    assert_eq!(top["upper"], expected);
}

#[test]
fn multiplet_three_halves_all_pass() {
    let o = su2n(&["multiplet", "--j", "3/2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 4);
    for s in states {
        for (_, flag) in s["checks"].as_object().unwrap() {
            assert_eq!(flag, "pass");
        }
    }
}

#[test]
fn multiplet_csv_terms() {
    let o = su2n(&["multiplet", "--j", "1/2", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("jz,component,num,den,a2,b2"));
    assert!(text.lines().any(|l| l == "1/2,upper,1,1,1,3"));
}

#[test]
fn verify_report() {
    let o = su2n(&["verify", "--jmax", "5/2"]);
    let text = stdout(&o);
    assert_eq!(code(&o), 0, "{text}");
    assert!(text.lines().any(|l| l.starts_with("CHECK commutators[j=5/2] PASS")));
    assert!(text.lines().all(|l| l.starts_with("CHECK ") && l.contains(" PASS")));

    let o = su2n(&["verify", "--jmax", "3/2", "--tol", "1e-10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "CHECK ladder_coeff[3/2,1/2] PASS dev<1e-10"));
}

#[test]
fn fd_errors_decrease() {
    let o = su2n(&["fd", "--jz", "1/2", "--sign", "minus", "--levels", "3", "--n", "512,1024,2048"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,level,eigenvalue,error,order"));
    let mut by_level: Vec<Vec<f64>> = vec![Vec::new(); 3];
    for l in lines.filter(|l| !l.starts_with("extrapolated")) {
        let f: Vec<&str> = l.split(',').collect();
        by_level[f[1].parse::<usize>().unwrap()].push(f[3].parse::<f64>().unwrap().abs());
    }
    for errs in by_level {
        assert_eq!(errs.len(), 3);
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }
}

#[test]
fn transform_residuals() {
    let o = su2n(&["transform", "--j", "1/2", "--jz", "1/2", "--G", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..2], &["1/2", "1/2"]);
    assert!(row[2].parse::<f64>().unwrap() < 1e-10);
    assert!(row[3].parse::<f64>().unwrap() < 1e-10);

    let all = su2n(&["transform", "--j", "3/2"]);
    assert_eq!(stdout(&all).lines().count(), 5);
    // a gate nothing can meet
    assert_eq!(code(&su2n(&["transform", "--j", "1/2", "--tol", "1e-300"])), 1);
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("su2n-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let o = su2n(&["multiplet", "--j", "5/2", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v1 = stdout(&su2n(&["verify", "--jmax", "3/2"]));
    let v2 = stdout(&su2n(&["verify", "--jmax", "3/2"]));
    assert_eq!(v1, v2);
    std::fs::remove_dir_all(&dir).unwrap();
}
