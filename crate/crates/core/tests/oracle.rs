use compact_helmholtz::oracle::{selftest, SELFTEST_TOL};

#[test]
fn matrix_free_matches_dense_for_every_boundary_combination() {
    let report = selftest(7, 3..=8).unwrap();
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    for c in &failed {
        eprintln!("{} err={:.3e} tol={:.0e}", c.name, c.max_rel_err, c.tol);
    }
    assert!(failed.is_empty(), "{} of {} checks failed", failed.len(), report.checks.len());
    assert!(report.checks.iter().all(|c| c.tol <= SELFTEST_TOL));
}

