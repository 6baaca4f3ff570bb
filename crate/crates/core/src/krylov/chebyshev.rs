use crate::domain::{Method, SolveReport, SolveStatus, C64};
use crate::error::Result;
use crate::krylov::{IterationConfig, System, Tracker, DIVERGENCE_THRESHOLD};
use crate::linalg;

/// Chebyshev semi-iteration for `B Y = F`, `B = A A_p^{-1}`, with the
/// spectrum of `B` assumed in `[1 + m_hat, 1 + M_hat]`. The iterate is kept
/// as `U = A_p^{-1} Y` so every step costs one preconditioner solve and one
/// operator application.
pub fn solve_chebyshev<S: System + ?Sized>(
    sys: &S,
    f: &[C64],
    config: &IterationConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    config.validate()?;
    let (lo, hi) = config.chebyshev_interval.expect("validated");
    let (a, b) = (1.0 + lo, 1.0 + hi);
    let theta = 0.5 * (a + b);
    let delta = 0.5 * (b - a);
    let n = sys.dim();
    let mut tr = Tracker::new(f);
    let mut u = linalg::zeros(n);
    if tr.absolute {
        let report = tr.finish(sys, Method::Chebyshev, SolveStatus::Converged, f, &u);
        return Ok((u, report));
    }
    let mut r = f.to_vec();
    let mut d = f.to_vec();
    linalg::scale(C64::new(1.0 / theta, 0.0), &mut d);
    let mut z = linalg::zeros(n);
    let mut bz = linalg::zeros(n);
    let sigma = if delta > 0.0 { theta / delta } else { f64::INFINITY };
    let mut rho = 1.0 / sigma;
    let mut status = SolveStatus::MaxIterations;
    for _ in 0..config.max_iter {
        sys.precondition(&d, &mut z)?;
        linalg::axpy(C64::new(1.0, 0.0), &z, &mut u);
        sys.apply_a(&z, &mut bz);
        linalg::axpy(C64::new(-1.0, 0.0), &bz, &mut r);
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
        if delta > 0.0 {
            let rho_next = 1.0 / (2.0 * sigma - rho);
            linalg::scale(C64::new(rho_next * rho, 0.0), &mut d);
            linalg::axpy(C64::new(2.0 * rho_next / delta, 0.0), &r, &mut d);
            rho = rho_next;
        } else {
            d.copy_from_slice(&r);
            linalg::scale(C64::new(1.0 / theta, 0.0), &mut d);
        }
    }
    let report = tr.finish(sys, Method::Chebyshev, status, f, &u);
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Method;
    use crate::krylov::test_systems::Diagonal;

    #[test]
    fn single_eigenvalue_converges_in_one_step() {
        let sys = Diagonal { a: vec![C64::new(3.0, 0.0); 5], p: vec![C64::new(2.0, 0.0); 5] };
        let cfg = IterationConfig {
            method: Method::Chebyshev,
            chebyshev_interval: Some((0.5, 0.5)),
            ..Default::default()
        };
        let f = vec![C64::new(1.0, 1.0); 5];
        let (_, rep) = solve_chebyshev(&sys, &f, &cfg).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged());
    }

    #[test]
    fn contraction_follows_chebyshev_bound() {
        let eig: Vec<f64> = (0..40).map(|i| 0.6 + 1.4 * i as f64 / 39.0).collect();
        let sys = Diagonal {
            a: eig.iter().map(|&e| C64::new(e, 0.0)).collect(),
            p: vec![C64::new(1.0, 0.0); 40],
        };
        let cfg = IterationConfig {
            method: Method::Chebyshev,
            chebyshev_interval: Some((-0.4, 1.0)),
            ..Default::default()
        };
        let f = vec![C64::new(1.0, 0.0); 40];
        let (_, rep) = solve_chebyshev(&sys, &f, &cfg).unwrap();
        assert!(rep.converged());
        // residual after n steps <= 2 q^n / (1 + q^{2n}), q = (sqrt(kappa)-1)/(sqrt(kappa)+1)
        let kappa: f64 = 2.0 / 0.6;
        let q = (kappa.sqrt() - 1.0) / (kappa.sqrt() + 1.0);
        for (n, r) in rep.residual_history.iter().enumerate() {
            let bound = 2.0 * q.powi(n as i32) / (1.0 + q.powi(2 * n as i32));
            assert!(*r <= bound * (1.0 + 1e-8), "step {n}: {r} > {bound}");
        }
    }
}
