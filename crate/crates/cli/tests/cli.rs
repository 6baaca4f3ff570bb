use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helmholtz-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const ONE_D: &str = "problem = dirichlet-1d\nk = 20\nh = 1/32, 1/64, 1/128, 1/256\nmethods = gmres, sks\n";

#[test]
fn one_dimensional_table_reports_sixth_order() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "t2.spec", ONE_D);
    let out = bench(&["table", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem,k,h,method,iterations,status,err6,order6,err2,order2,psi"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    let gmres: Vec<&str> = rows.iter().filter(|r| r[3] == "gmres").map(|r| r[4]).collect();
    assert_eq!(gmres, ["5", "4", "3", "2"]);
    for r in rows.iter().skip(2) {
        let order: f64 = r[7].parse().unwrap();
        assert!(order > 5.5, "{r:?}");
    }
}

#[test]
fn csv_is_byte_identical_across_runs_and_timing_is_separate() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "t.spec", ONE_D);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for stem in [&a, &b] {
        let out = bench(&["table", &spec, "--out", stem.to_str().unwrap(), "--seed", "7"]);
        assert!(out.status.success());
    }
    let read = |stem: &Path, ext: &str| std::fs::read(format!("{}{ext}", stem.display())).unwrap();
    assert_eq!(read(&a, ".csv"), read(&b, ".csv"));
    assert_eq!(read(&a, ".md"), read(&b, ".md"));
    let timing = String::from_utf8(read(&a, ".timing.csv")).unwrap();
    assert!(timing.starts_with("problem,k,h,method,wall_time_s,threads\n"));
}

#[test]
fn empty_method_list_gives_a_header_only_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "e.spec", "problem = dirichlet-3d\nk = 20\nh = 1/32\nmethods =\n");
    let out = bench(&["table", &spec]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn flags_override_spec_fields() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "o.spec", ONE_D);
    let out = bench(&["table", &spec, "--method", "sks", "--h", "1/64", "--format", "markdown"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("| problem |"));
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("| sks | 4 |"));
}

#[test]
fn memory_guard_marks_cells_instead_of_failing() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "m.spec", "problem = dirichlet-3d\nk = 10\nh = 1/16, 1/32\nmethods = gmres\n");
    let out = bench(&["table", &spec, "--mem-budget", "2M"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].contains(",gmres,") && !rows[0].contains(",mem,"), "{text}");
    assert!(rows[1].contains(",mem,memory-limit,"), "{text}");
}

#[test]
fn exit_codes_follow_the_error_class() {
    // points-per-wavelength violation is a configuration error
    assert_eq!(bench(&["solve", "dirichlet-3d", "40", "1/32", "gmres"]).status.code(), Some(2));
    assert_eq!(bench(&["solve", "no-such-problem", "20", "1/32", "gmres"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), "b.spec", "h = 1/64, 1/32\n");
    assert_eq!(bench(&["table", &bad]).status.code(), Some(2));
    // two SKS steps cannot reach 1e-10
    assert_eq!(
        bench(&["solve", "dirichlet-3d", "20", "1/32", "sks", "--max-iter", "2"]).status.code(),
        Some(3)
    );
    // k h = sqrt(12) sin(pi h / 2) makes mode (1, 1, 1) of the preconditioner singular
    let h = 1.0 / 16.0;
    let k = 12f64.sqrt() * (std::f64::consts::PI * h / 2.0).sin() / h;
    let out = bench(&["solve", "dirichlet-3d", &format!("{k:.17}"), "1/16", "gmres"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1, 1)"));
}

#[test]
fn spectrum_single_cell_and_full_table() {
    let out = bench(&["spectrum", "--k", "10", "--h", "1/64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bounds,10,1/64,-0.015245,0.490238,"), "{text}");
    let full = bench(&["spectrum"]);
    let text = stdout(&full);
    assert_eq!(text.lines().filter(|l| l.starts_with("bounds,")).count(), 20);
    assert_eq!(text.lines().filter(|l| l.starts_with("delta0,")).count(), 5);
}

#[test]
fn psi_of_the_one_dimensional_problem_is_two() {
    let out = bench(&["psi", "dirichlet-1d", "20", "1/256", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let psi: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((psi - 2.0).abs() < 0.1, "{psi}");
}

#[test]
fn complex_wavenumber_prints_as_re_plus_im_i() {
    let out = bench(&["solve", "dirichlet-sommerfeld-3d", "35.7+0.43i", "1/64", "gmres"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains(",35.7+0.43i,1/64,gmres,"));
}

#[test]
fn selftest_passes() {
    let out = bench(&["selftest", "--seed", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).lines().skip(1).all(|l| l.ends_with(",true")));
}
