use crate::domain::{Method, SolveReport, SolveStatus, C64};
use crate::error::Result;
use crate::krylov::{IterationConfig, System, Tracker, BREAKDOWN_THRESHOLD};
use crate::linalg;

/// Work vectors besides the Krylov basis: u, r, w, z, and the caller's F.
const WORK_VECTORS: usize = 5;

/// Right-preconditioned GMRES from a zero initial guess.
pub fn solve_gmres<S: System + ?Sized>(sys: &S, f: &[C64], config: &IterationConfig) -> Result<(Vec<C64>, SolveReport)> {
    solve_gmres_with_guess(sys, f, None, config)
}

/// Right-preconditioned GMRES (modified Gram-Schmidt, Givens rotations),
/// optionally restarted. The residual estimate from the rotations is the
/// residual of `F - A U` because the preconditioner acts on the right; the
/// final residual is recomputed explicitly.
pub fn solve_gmres_with_guess<S: System + ?Sized>(
    sys: &S,
    f: &[C64],
    u0: Option<&[C64]>,
    config: &IterationConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    config.validate()?;
    let n = sys.dim();
    let mut tr = Tracker::new(f);
    let mut u = match u0 {
        Some(g) => g.to_vec(),
        None => linalg::zeros(n),
    };
    let mut r = linalg::zeros(n);
    sys.apply_a(&u, &mut r);
    for (ri, fi) in r.iter_mut().zip(f) {
        *ri = fi - *ri;
    }
    let initial = tr.relative(linalg::norm2(&r));
    if u0.is_some() {
        tr.history[0] = initial;
    }
    if tr.absolute && initial == 0.0 || initial <= config.tol && !tr.absolute {
        let report = tr.finish(sys, Method::Gmres, SolveStatus::Converged, f, &u);
        return Ok((u, report));
    }

    let cycle = config.gmres_restart.unwrap_or(config.max_iter).min(config.max_iter);
    let bytes = |basis: usize| (basis + WORK_VECTORS) * n * std::mem::size_of::<C64>();
    let mut total = 0usize;
    let mut status = SolveStatus::MaxIterations;
    let mut z = linalg::zeros(n);
    let mut w = linalg::zeros(n);

    'outer: loop {
        let beta = linalg::norm2(&r);
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cycle + 1);
        if config.mem_budget.is_some_and(|b| bytes(1) > b) {
            status = SolveStatus::MemoryLimit;
            break;
        }
        let mut v0 = r.clone();
        linalg::scale(C64::new(1.0 / beta, 0.0), &mut v0);
        basis.push(v0);
        // columns of the Hessenberg matrix after rotation (upper triangular part)
        let mut hcols: Vec<Vec<C64>> = Vec::with_capacity(cycle);
        let mut cs: Vec<C64> = Vec::with_capacity(cycle);
        let mut sn: Vec<C64> = Vec::with_capacity(cycle);
        let mut g = vec![C64::new(beta, 0.0)];
        let mut stop = None;

        for j in 0..cycle {
            if total >= config.max_iter {
                stop = Some(SolveStatus::MaxIterations);
                break;
            }
            if config.mem_budget.is_some_and(|b| bytes(basis.len() + 1) > b) {
                stop = Some(SolveStatus::MemoryLimit);
                break;
            }
            sys.precondition(&basis[j], &mut z)?;
            sys.apply_a(&z, &mut w);
            let w_norm = linalg::norm2(&w);
            let mut h = Vec::with_capacity(j + 2);
            for v in &basis {
                let hij = linalg::dot(v, &w);
                linalg::axpy(-hij, v, &mut w);
                h.push(hij);
            }
            let hnext = linalg::norm2(&w);
            h.push(C64::new(hnext, 0.0));
            for i in 0..j {
                let (a, b) = (h[i], h[i + 1]);
                h[i] = cs[i].conj() * a + sn[i].conj() * b;
                h[i + 1] = -sn[i] * a + cs[i] * b;
            }
            let (a, b) = (h[j], h[j + 1]);
            let d = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if d == 0.0 {
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (a / d, b / d)
            };
            h[j] = C64::new(d, 0.0);
            h[j + 1] = C64::new(0.0, 0.0);
            let gj = g[j];
            g[j] = c.conj() * gj;
            g.push(-s * gj);
            cs.push(c);
            sn.push(s);
            h.truncate(j + 1);
            hcols.push(h);
            total += 1;

            let res = tr.relative(g[j + 1].norm());
            tr.history.push(res);
            if res <= config.tol {
                stop = Some(SolveStatus::Converged);
                break;
            }
            if hnext <= BREAKDOWN_THRESHOLD * w_norm.max(f64::MIN_POSITIVE) {
                stop = Some(SolveStatus::Breakdown);
                break;
            }
            let mut v = w.clone();
            linalg::scale(C64::new(1.0 / hnext, 0.0), &mut v);
            basis.push(v);
        }

        // back substitution for the least-squares coefficients
        let m = hcols.len();
        let mut y = vec![C64::new(0.0, 0.0); m];
        for i in (0..m).rev() {
            let mut s = g[i];
            for (jj, col) in hcols.iter().enumerate().skip(i + 1) {
                s -= col[i] * y[jj];
            }
            y[i] = s / hcols[i][i];
        }
        if m > 0 {
            w.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for (yi, v) in y.iter().zip(&basis) {
                linalg::axpy(*yi, v, &mut w);
            }
            sys.precondition(&w, &mut z)?;
            linalg::axpy(C64::new(1.0, 0.0), &z, &mut u);
        }
        drop(basis);

        match stop {
            Some(s) => {
                status = s;
                break 'outer;
            }
            None if total >= config.max_iter => break 'outer,
            None => {
                sys.apply_a(&u, &mut r);
                for (ri, fi) in r.iter_mut().zip(f) {
                    *ri = fi - *ri;
                }
                if tr.relative(linalg::norm2(&r)) <= config.tol {
                    status = SolveStatus::Converged;
                    break 'outer;
                }
            }
        }
    }
    let report = tr.finish(sys, Method::Gmres, status, f, &u);
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::test_systems::Diagonal;

    fn diag(n: usize) -> Diagonal {
        Diagonal {
            a: (0..n).map(|i| C64::new(1.0 + i as f64, 0.3 * i as f64)).collect(),
            p: vec![C64::new(1.0, 0.0); n],
        }
    }

    #[test]
    fn converges_in_at_most_n_steps() {
        let sys = diag(6);
        let f: Vec<C64> = (0..6).map(|i| C64::new(1.0, -(i as f64))).collect();
        let (u, rep) = solve_gmres(&sys, &f, &IterationConfig::default()).unwrap();
        assert!(rep.converged());
        assert!(rep.iterations <= 6);
        assert!(rep.true_residual < 1e-10);
        for i in 0..6 {
            assert!((sys.a[i] * u[i] - f[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn exact_initial_guess_needs_no_iterations() {
        let sys = diag(4);
        let u0: Vec<C64> = (0..4).map(|i| C64::new(i as f64, 1.0)).collect();
        let mut f = linalg::zeros(4);
        sys.apply_a(&u0, &mut f);
        let (_, rep) = solve_gmres_with_guess(&sys, &f, Some(&u0), &IterationConfig::default()).unwrap();
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn restarted_run_converges_and_history_is_monotone_within_cycles() {
        let sys = diag(12);
        let f = vec![C64::new(1.0, 0.0); 12];
        let cfg = IterationConfig { gmres_restart: Some(3), ..Default::default() };
        let (_, rep) = solve_gmres(&sys, &f, &cfg).unwrap();
        assert!(rep.converged(), "{rep:?}");
        for w in rep.residual_history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn memory_budget_is_respected() {
        let sys = diag(100);
        let f = vec![C64::new(1.0, 0.0); 100];
        let cfg = IterationConfig { mem_budget: Some(100 * 16 * 8), ..Default::default() };
        let (_, rep) = solve_gmres(&sys, &f, &cfg).unwrap();
        assert_eq!(rep.status, SolveStatus::MemoryLimit);
        assert!(rep.iterations <= 3);
    }
}
