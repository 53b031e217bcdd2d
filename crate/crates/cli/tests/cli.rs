use std::process::Command;

fn fetransform() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fetransform"))
}

#[test]
fn projection_study_writes_csv_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = fetransform()
        .args(["study", "projection", "--family", "hermite", "--nmax", "8", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("projection_hermite.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,N,dofs,metric,value"));
    let errors: Vec<&str> = csv.lines().filter(|l| l.contains(",l2_error,")).collect();
    assert_eq!(errors.len(), 3);
    assert!(errors[0].starts_with("hermite,2,35,l2_error,"));
    assert!(csv.contains(",fitted_rate,"));
    let script = std::fs::read_to_string(dir.path().join("projection_hermite_plot.py")).unwrap();
    assert!(script.contains("projection_hermite.csv"));
}

#[test]
fn conditioning_with_cg_options_and_unscaled_dofs() {
    let dir = tempfile::tempdir().unwrap();
    let out = fetransform()
        .args(["study", "conditioning", "--family", "hermite", "--nmax", "4", "--unscaled", "--solver", "cg", "--tol", "1e-10", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("conditioning_hermite.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.contains(",condition_number,")).count(), 2);
}

#[test]
fn unsupported_study_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = fetransform()
        .args(["study", "laplace", "--family", "morley", "--nmax", "4", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn rejects_unknown_family() {
    let out = fetransform()
        .args(["study", "projection", "--family", "serendipity", "--out", "x"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
