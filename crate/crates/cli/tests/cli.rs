use std::io::Write;
use std::process::{Command, Output};

fn mandelq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mandelq"))
        .args(args)
        .env_remove("MANDELQ_CUTOFF")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn density_file(n_max: usize, diag: &[(usize, f64)]) -> tempfile::NamedTempFile {
    let dim = (n_max + 1) * (n_max + 1);
    let mut rho = vec![[0.0, 0.0]; dim * dim];
    for &(i, p) in diag {
        rho[i * dim + i] = [p, 0.0];
    }
    let doc = serde_json::json!({ "n_max": n_max, "rho": rho });
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{doc}").unwrap();
    f
}

#[test]
fn point_fock() {
    let o = mandelq(&["point", "fock", "--n1", "2", "--n2", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("Q = -0.666667"), "{out}");
    assert!(out.contains("q_bar = (0.000000, 0.000000, 1.000000)"), "{out}");
    assert!(out.contains("method: secular-exact"));
}

#[test]
fn point_vacuum_is_degenerate() {
    let o = mandelq(&["point", "squeezed-coherent", "--z1", "0", "--z2", "0", "--a", "0", "--b", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("vacuum state: Q undefined (zero mean photon number)"));
}

#[test]
fn point_thermal_json() {
    let o = mandelq(&["point", "squeezed-thermal", "--beta", "1", "--a", "0", "--b", "0", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc["Q"].as_f64().unwrap() - 0.290988).abs() < 1e-6);
    assert_eq!(doc["diagnostics"]["closed_form_check"]["status"], "skipped-open-mismatch");
}

#[test]
fn requiring_an_unvalidated_closed_form_fails() {
    let o = mandelq(&["point", "squeezed-thermal", "--beta", "1", "--a", "0", "--b", "0", "--cross-check", "require"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mandelq(&["point", "fock", "--n1", "2"]).status.code(), Some(1));
    assert_eq!(mandelq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mandelq(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_parameters_exit_three() {
    let o = mandelq(&["point", "squeezed-thermal", "--beta", "-1", "--a", "0", "--b", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("beta"));
}

#[test]
fn cutoff_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mandelq"))
        .args(["point", "squeezed-coherent", "--z1", "2", "--z2", "0", "--a", "0", "--b", "0"])
        .env("MANDELQ_CUTOFF", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("cutoff too small"));
}

#[test]
fn custom_single_photon() {
    // |1,0><1,0| with n_max = 3: index(1, 0) = 4.
    let f = density_file(3, &[(4, 1.0)]);
    let o = mandelq(&["custom", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Q = -1.000000"), "{}", stdout(&o));
}

#[test]
fn custom_trace_deficit_is_named() {
    let f = density_file(1, &[(0, 0.9)]);
    let o = mandelq(&["custom", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("trace") && err.contains("1.000e-1"), "{err}");
}

#[test]
fn custom_mixture() {
    let f = density_file(1, &[(0, 0.5), (2, 0.5)]);
    let o = mandelq(&["custom", f.path().to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((doc["Q"].as_f64().unwrap() + 0.5).abs() < 1e-12);
}

#[test]
fn sweep_to_stdout_and_file() {
    let args = ["sweep", "--family", "squeezed-thermal", "--fix", "beta=1", "--axis", "a=0:0.2:2", "--axis", "b=0,0.1"];
    let o = mandelq(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "a,b,Q,q1,q2,q3,method,degenerate_flag");
    assert_eq!(out.lines().count(), 5);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut with_file = args.to_vec();
    with_file.extend(["--format", "json", "-o", path.to_str().unwrap()]);
    let o = mandelq(&with_file);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["family"], "squeezed-thermal");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_preset_with_overrides_is_deterministic() {
    let args = ["sweep", "--preset", "fig4b", "--axis", "a=0:1:3", "--axis", "b=0:1:3"];
    let first = mandelq(&args);
    let second = mandelq(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 10);
}

#[test]
fn sweep_rejects_bad_axes() {
    let o = mandelq(&["sweep", "--family", "squeezed-thermal", "--fix", "beta=1", "--axis", "a=0:1:1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = mandelq(&["sweep", "--family", "squeezed-thermal", "--fix", "beta=1", "--axis", "a=zero:1:3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_fock_and_thermal() {
    let o = mandelq(&["validate", "fock"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("240 points, 240 match, 0 mismatch"), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("ledger.json");
    let o = mandelq(&["validate", "squeezed-thermal", "--ledger", ledger.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&ledger).unwrap()).unwrap();
    assert!(!doc["mismatches"].as_array().unwrap().is_empty());
}
