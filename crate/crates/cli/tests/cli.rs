use std::process::{Command, Output};

fn exspline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exspline")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table1_check_passes() {
    let o = exspline(&["table1", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("study,p,d_k,t,u_hat,method,kappa,err_rel_l2,dof"));
    assert_eq!(lines.count(), 6);
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 12);
}

#[test]
fn study1d_writes_requested_rows_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = exspline(&["study1d", "--degree", "2,3", "--dk", "3", "--t-samples", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    // two degrees, five trims, two methods
    assert_eq!(text.lines().count(), 1 + 2 * 5 * 2);
    assert!(text.lines().skip(1).all(|l| l.starts_with("study1d,")));
    assert!(text.contains(",naive,") && text.contains(",extended,"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "degrees = [2]\ndk = 3\nt_samples = 7\n").unwrap();
    let o = exspline(&["study2d", "--config", cfg.to_str().unwrap(), "--t-samples", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    assert!(text.lines().skip(1).all(|l| l.starts_with("study2d,2,3,")));
}

#[test]
fn nonuniform_adaptive_rows() {
    let o = exspline(&["nonuniform", "--degree", "2", "--trim", "0.8", "--u-hat-samples", "6", "--adaptive", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("nonuniform,")).count(), 6);
    assert_eq!(text.lines().filter(|l| l.starts_with("nonuniform-adaptive,")).count(), 6);
}

#[test]
fn weights_demo_prints_every_route() {
    let o = exspline(&["weights-demo", "--check"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("interpolation matrix M"));
    assert!(text.contains("(-1.5)"));
}

#[test]
fn invalid_input_is_reported() {
    let o = exspline(&["study1d", "--t-max", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("t range"));
    let o = exspline(&["study1d", "--naive-anchors", "middle"]);
    assert!(!o.status.success());
}
