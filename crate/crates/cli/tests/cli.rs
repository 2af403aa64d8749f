use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskgrowth"))
        .env("DISKGROWTH_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("spawn diskgrowth")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn zeros_dirichlet_and_neumann() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["zeros", "--n", "0", "--m-max", "3", "--bc", "dirichlet"],
    );
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("m,k,lambda"));
    let k = column(&s, 1);
    for (got, want) in k.iter().zip([2.40483, 5.52008, 8.65373]) {
        assert!((got - want).abs() < 1e-5);
    }
    let lam = column(&s, 2);
    assert!((lam[0] - k[0] * k[0]).abs() < 1e-12);

    let o = run(
        dir.path(),
        &["zeros", "--n", "0", "--m-max", "1", "--bc", "neumann"],
    );
    assert!((column(&stdout(&o), 1)[0] - 3.83171).abs() < 1e-5);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["zeros", "--n", "0", "--m-max", "3", "--bc", "robin"],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        dir.path(),
        &["gallery", "--gamma", "1", "--bc", "dirichlet"],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        dir.path(),
        &[
            "--tol", "1e-15", "zeros", "--n", "1", "--m-max", "2", "--bc", "neumann",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = run(
        dir.path(),
        &["zeros", "--n", "1", "--m-max", "0", "--bc", "neumann"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "--n-cap",
            "10",
            "supnorm",
            "--n",
            "11",
            "--m",
            "1",
            "--bc",
            "dirichlet",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn supnorm_line_and_cache_extension() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["supnorm", "--n", "0", "--m", "1", "--bc", "dirichlet"],
    );
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("n,m,k,lambda,supnorm,ratio"));
    let sup = column(&s, 4)[0];
    let lam = column(&s, 3)[0];
    assert!((sup - 1.08676).abs() < 1e-5);
    assert_eq!(column(&s, 5)[0], sup.ln() / lam.ln());

    let o = run(
        dir.path(),
        &["supnorm", "--n", "3", "--m", "40", "--bc", "neumann"],
    );
    assert!(o.status.success());
    let file = std::fs::read_to_string(dir.path().join("neumann_n3_tol1e-12.csv")).unwrap();
    assert!(file.lines().any(|l| l.starts_with("40,")));
}

#[test]
fn exponents_summary_schema() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let o = run(
        dir.path(),
        &[
            "exponents",
            "--gamma",
            "4",
            "--bc",
            "dirichlet",
            "--summary",
            summary.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("n,m,lambda,sup_norm,ratio"));
    let text = std::fs::read_to_string(&summary).unwrap();
    for key in [
        "\"phi_estimate\"",
        "\"theoretical_lower\"",
        "\"conjectured\"",
    ] {
        assert!(text.contains(key), "{key} missing");
    }
}

#[test]
fn gallery_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "gallery",
            "--gamma",
            "0",
            "--bc",
            "dirichlet",
            "--n-list",
            "50,25,100",
            "--margin",
            "0.05",
        ],
    );
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(
        s.lines().next(),
        Some("n,m,k,alpha,rho,interior_sup,annulus_mass,annulus_width")
    );
    assert_eq!(column(&s, 0), vec![25.0, 50.0, 100.0]);
    let sup = column(&s, 5);
    assert!(sup.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn table_cold_and_warm_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cold = run(dir.path(), &["table", "--bc", "neumann"]);
    let warm = run(dir.path(), &["table", "--bc", "neumann"]);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(stdout(&cold).lines().count(), 9);
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(": PASS")));
}
