//! Right-preconditioned iterations for `A A_p^{-1} Y = F`, `U = A_p^{-1} Y`.
//!
//! All solvers start from `U = 0` and report the relative residual
//! `||F - A U(n)|| / ||F||` of the actual iterate after every step.

mod bounds;
mod chebyshev;
mod gmres;
mod psi;
mod sks;

use std::time::Instant;

use crate::discretization::Discretization;
use crate::domain::{Method, SolveReport, SolveStatus, C64};
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::Discretization1d;

pub use bounds::{theoretical_bound, BoundKind};
pub use chebyshev::solve_chebyshev;
pub use gmres::solve_gmres;
pub use psi::{estimate_psi, psi_from_ratios, PsiEstimate};
pub use sks::solve_sks;

/// Residual above which SKS is classified as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Arnoldi vector norms below this end the iteration with a breakdown flag.
pub const BREAKDOWN_THRESHOLD: f64 = 1e-14;

/// A linear system together with its preconditioner.
pub trait System: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`
    fn apply_a(&self, x: &[C64], y: &mut [C64]);

    /// `u = A_p^{-1} y`
    fn precondition(&self, y: &[C64], u: &mut [C64]) -> Result<()>;
}

impl System for Discretization {
    fn dim(&self) -> usize {
        self.len()
    }

    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        self.apply_a6(x, y);
    }

    fn precondition(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
        self.precondition_solve(y, u)
    }
}

impl System for Discretization1d {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        self.apply_a6(x, y);
    }

    fn precondition(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
        self.precondition_solve(y, u)
    }
}

/// Stopping and method parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
    pub gmres_restart: Option<usize>,
    /// `(m_hat, M_hat)`: the preconditioned spectrum lies in
    /// `[1 + m_hat, 1 + M_hat]`.
    pub chebyshev_interval: Option<(f64, f64)>,
    /// Upper bound on solver vector storage in bytes.
    pub mem_budget: Option<usize>,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            tol: 1e-10,
            max_iter: 100,
            method: Method::Gmres,
            gmres_restart: None,
            chebyshev_interval: None,
            mem_budget: None,
        }
    }
}

impl IterationConfig {
    pub fn with_method(method: Method) -> Self {
        IterationConfig {
            method,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if self.gmres_restart == Some(0) {
            return Err(Error::InvalidParameter("restart length must be at least 1".into()));
        }
        if self.method == Method::Chebyshev {
            match self.chebyshev_interval {
                None => {
                    return Err(Error::InvalidParameter(
                        "Chebyshev iteration needs an eigenvalue interval".into(),
                    ))
                }
                Some((lo, hi)) if !(1.0 + lo > 0.0) || !(hi >= lo) => {
                    return Err(Error::InvalidParameter(format!(
                        "invalid Chebyshev interval ({lo}, {hi}): need 1 + m > 0 and M >= m"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Dispatches on `config.method`.
pub fn solve<S: System + ?Sized>(sys: &S, f: &[C64], config: &IterationConfig) -> Result<(Vec<C64>, SolveReport)> {
    match config.method {
        Method::Gmres => solve_gmres(sys, f, config),
        Method::Sks => solve_sks(sys, f, config),
        Method::Chebyshev => solve_chebyshev(sys, f, config),
    }
}

/// Shared bookkeeping of one solve.
pub(crate) struct Tracker {
    start: Instant,
    pub norm_f: f64,
    pub absolute: bool,
    pub history: Vec<f64>,
}

impl Tracker {
    pub fn new(f: &[C64]) -> Self {
        let norm = linalg::norm2(f);
        Tracker {
            start: Instant::now(),
            norm_f: if norm > 0.0 { norm } else { 1.0 },
            absolute: norm == 0.0,
            history: vec![if norm > 0.0 { 1.0 } else { 0.0 }],
        }
    }

    pub fn relative(&self, r: f64) -> f64 {
        r / self.norm_f
    }

    pub fn finish<S: System + ?Sized>(
        self,
        sys: &S,
        method: Method,
        status: SolveStatus,
        f: &[C64],
        u: &[C64],
    ) -> SolveReport {
        let mut au = linalg::zeros(u.len());
        sys.apply_a(u, &mut au);
        let mut r = linalg::zeros(u.len());
        linalg::sub(f, &au, &mut r);
        let true_residual = linalg::norm2(&r) / self.norm_f;
        SolveReport {
            method,
            status,
            iterations: self.history.len() - 1,
            residual_history: self.history,
            true_residual,
            err_max: None,
            psi: None,
            wall_time: self.start.elapsed().as_secs_f64(),
            absolute_residuals: self.absolute,
        }
    }
}

#[cfg(test)]
pub(crate) mod test_systems {
    use super::*;

    /// Diagonal `A` with identity or diagonal preconditioner.
    pub struct Diagonal {
        pub a: Vec<C64>,
        pub p: Vec<C64>,
    }

    impl System for Diagonal {
        fn dim(&self) -> usize {
            self.a.len()
        }

        fn apply_a(&self, x: &[C64], y: &mut [C64]) {
            for ((y, a), x) in y.iter_mut().zip(&self.a).zip(x) {
                *y = a * x;
            }
        }

        fn precondition(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
            for ((u, p), y) in u.iter_mut().zip(&self.p).zip(y) {
                *u = y / p;
            }
            Ok(())
        }
    }
}
