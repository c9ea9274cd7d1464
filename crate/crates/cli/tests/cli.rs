use std::process::{Command, Output};

fn tfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfc")).args(args).env_remove("TFC_MAX_EFFORT").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value(o: &Output) -> f64 {
    let out = stdout(o);
    let row = out.lines().nth(1).unwrap();
    row.split(',').nth(1).unwrap().parse().unwrap()
}

#[test]
fn eval_int_unit_function() {
    let o = tfc(&["eval-int", "--expr", "1", "--alpha", "1", "--beta", "1", "--a", "0", "--t", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next(), Some("t,re,im,err,effort,converged"));
    assert!((value(&o) - 0.6321205588285577).abs() < 1e-9);
}

#[test]
fn negative_alpha_exits_2_naming_the_precondition() {
    let o = tfc(&["eval-int", "--expr", "1", "--alpha", "-0.5", "--beta", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Re(α) > 0"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn malformed_expression_exits_2_with_offset() {
    let o = tfc(&["eval-int", "--expr", "t^^2", "--alpha", "0.5", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("offset 2"), "{err}");
    assert!(err.contains("  ^"), "{err}");
}

#[test]
fn verify_ineq1_passes() {
    let o = tfc(&["verify", "--suite", "ineq1", "--seed", "7", "--n", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("theorem,residual_or_slack,pass"));
    assert_eq!(out.lines().last(), Some("PASS 50/50"));
    assert_eq!(out.lines().count(), 52);
}

#[test]
fn identical_flags_give_identical_bytes() {
    for args in [
        &["verify", "--suite", "ineq3", "--seed", "11", "--n", "20"][..],
        &["eval-der", "--expr", "t^1.4", "--alpha", "0.6", "--beta", "0.8", "--b", "1", "--grid-points", "4"][..],
        &["mellin", "--expr", "exp(-t)", "--alpha", "0.5", "--beta", "1", "--s", "1.5"][..],
    ] {
        let (x, y) = (tfc(args), tfc(args));
        assert!(x.status.success(), "{}", stderr(&x));
        assert_eq!(x.stdout, y.stdout);
    }
    let a = tfc(&["verify", "--suite", "ineq1", "--seed", "1", "--n", "5"]);
    let b = tfc(&["verify", "--suite", "ineq1", "--seed", "2", "--n", "5"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn json_rows_mirror_csv_columns() {
    let o = tfc(&["rl-int", "--expr", "t", "--alpha", "0.5", "--b", "1", "--grid-points", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["t", "re", "im", "err", "effort", "converged"] {
        assert!(keys.contains(&k));
    }
    // Γ(2)/Γ(2.5)
    assert!((rows[1]["re"].as_f64().unwrap() - 0.7522527780636751).abs() < 1e-9);
}

#[test]
fn gpf_and_rl_commands() {
    let o = tfc(&["gpf-int", "--expr", "1", "--alpha", "1", "--rho", "0.5", "--t", "1"]);
    assert!((value(&o) - 1.2642411176571153).abs() < 1e-9);
    let o = tfc(&["gpf-der", "--expr", "t", "--alpha", "1", "--rho", "0.5", "--t", "1"]);
    assert!((value(&o) - 1.0).abs() < 1e-5);
    let o = tfc(&["rl-der", "--expr", "t", "--alpha", "0.5", "--t", "1"]);
    assert!((value(&o) - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-5);
    let o = tfc(&["gpf-int", "--expr", "1", "--alpha", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_includes_endpoints() {
    let o = tfc(&["table", "--expr", "t^2", "--alpha", "1", "--b", "1", "--grid-points", "3", "--of", "rl-int"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let ts: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ts, ["0", "0.5", "1"]);
    let last: f64 = out.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((last - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn series_rows_converge() {
    let o = tfc(&["series", "--expr", "1", "--alpha", "1", "--beta", "1", "--t", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("t,m,re,im,term_abs"));
    let last: f64 = out.lines().last().unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((last - 0.6321205588285577).abs() < 1e-8);
}

#[test]
fn mellin_routes_agree() {
    let o = tfc(&["mellin", "--expr", "exp(-t)", "--alpha", "0.5", "--beta", "1", "--s", "1.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let vals: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 3);
    for v in &vals {
        assert!((v - vals[0]).abs() < 1e-5 * vals[0].abs());
    }
}

#[test]
fn taylor_reports_a_single_sign() {
    let o = tfc(&["taylor"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().last(), Some("PASS 10/10"));
    assert!(stderr(&o).contains("PropSign"));
}

#[test]
fn effort_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_tfc"))
        .args(["eval-int", "--expr", "1", "--alpha", "0.5", "--t", "1"])
        .env("TFC_MAX_EFFORT", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn help_documents_the_grammar() {
    let o = tfc(&["--help"]);
    let out = stdout(&o);
    assert!(out.contains("factor   := '-' factor | atom ('^' exponent)?"));
    assert!(out.contains("ml3(mu, nu, gamma, omega [, a])"));
}
