use crate::domain::{Method, SolveReport, SolveStatus, C64};
use crate::error::Result;
use crate::krylov::{IterationConfig, System, Tracker, DIVERGENCE_THRESHOLD};
use crate::linalg;

/// Simplified Krylov subspace iteration:
/// `Y = F; loop { U = A_p^{-1} Y; r = F - A U; Y = Y + r }`.
///
/// Only residual norms are computed; there is no orthogonalisation.
pub fn solve_sks<S: System + ?Sized>(sys: &S, f: &[C64], config: &IterationConfig) -> Result<(Vec<C64>, SolveReport)> {
    config.validate()?;
    let n = sys.dim();
    let mut tr = Tracker::new(f);
    let mut u = linalg::zeros(n);
    if tr.absolute {
        let report = tr.finish(sys, Method::Sks, SolveStatus::Converged, f, &u);
        return Ok((u, report));
    }
    let mut y = f.to_vec();
    let mut r = linalg::zeros(n);
    let mut status = SolveStatus::MaxIterations;
    for _ in 0..config.max_iter {
        sys.precondition(&y, &mut u)?;
        sys.apply_a(&u, &mut r);
        // r = F - A U, computed in place
        for (ri, fi) in r.iter_mut().zip(f) {
            *ri = fi - *ri;
        }
        let res = tr.relative(linalg::norm2(&r));
        tr.history.push(res);
        if res <= config.tol {
            status = SolveStatus::Converged;
            break;
        }
        if !(res <= DIVERGENCE_THRESHOLD) {
            status = SolveStatus::Diverged;
            break;
        }
        linalg::axpy(C64::new(1.0, 0.0), &r, &mut y);
    }
    let report = tr.finish(sys, Method::Sks, status, f, &u);
    Ok((u, report))
}
