//! Sixth-order compact scheme for `u'' + k^2 u = f` on `[0, 1]` with
//! Dirichlet ends.

use std::sync::Arc;

use crate::domain::{SourceModel, Wavenumber, C64};
use crate::error::{Error, Result};
use crate::precond::PencilMatrix;

/// A validated one-dimensional problem. Unknowns sit at `x_i = (i + 1) h`.
pub struct Discretization1d {
    pub n: usize,
    pub h: f64,
    pub k: Wavenumber,
    pub source: Arc<dyn SourceModel>,
    /// Dirichlet values at `x = 0` and `x = 1`.
    pub ends: [C64; 2],
    d1: C64,
    d2: C64,
}

impl std::fmt::Debug for Discretization1d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Discretization1d")
            .field("n", &self.n)
            .field("h", &self.h)
            .field("k", &self.k)
            .finish_non_exhaustive()
    }
}

pub fn validate_setup_1d(
    intervals: usize,
    k: Wavenumber,
    source: Arc<dyn SourceModel>,
    ends: [C64; 2],
) -> Result<Discretization1d> {
    if intervals < 2 {
        return Err(Error::Config("need at least two intervals".into()));
    }
    let h = 1.0 / intervals as f64;
    k.check_ppw(h)?;
    for order in [[0, 0, 0], [2, 0, 0]] {
        if !source.provides(order) {
            return Err(Error::MissingDerivative {
                order,
                needed_by: "one-dimensional right-hand side",
            });
        }
    }
    let kh2 = k.k2 * h * h;
    Ok(Discretization1d {
        n: intervals - 1,
        h,
        k,
        source,
        ends,
        d1: 1.0 - kh2 * kh2 / 360.0,
        d2: -2.0 + kh2 - 7.0 * kh2 * kh2 / 90.0,
    })
}

impl Discretization1d {
    pub fn x(&self, i: isize) -> f64 {
        (i + 1) as f64 * self.h
    }

    /// Off-diagonal and diagonal entries `(d1, d2)` of `A6`.
    pub fn entries(&self) -> (C64, C64) {
        (self.d1, self.d2)
    }

    fn tridiagonal(x: &[C64], y: &mut [C64], off: C64, diag: C64) {
        let n = x.len();
        for i in 0..n {
            let mut v = diag * x[i];
            if i > 0 {
                v += off * x[i - 1];
            }
            if i + 1 < n {
                v += off * x[i + 1];
            }
            y[i] = v;
        }
    }

    pub fn apply_a6(&self, x: &[C64], y: &mut [C64]) {
        Self::tridiagonal(x, y, self.d1, self.d2);
    }

    pub fn apply_a2(&self, x: &[C64], y: &mut [C64]) {
        let kh2 = self.k.k2 * self.h * self.h;
        Self::tridiagonal(x, y, C64::new(1.0, 0.0), kh2 - 2.0);
    }

    pub fn precondition_solve(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
        let kh2 = self.k.k2 * self.h * self.h;
        let m = PencilMatrix {
            n: self.n,
            diag: kh2 - 2.0,
            corr: [C64::new(0.0, 0.0); 2],
            upper0: C64::new(1.0, 0.0),
            lower_last: C64::new(1.0, 0.0),
        };
        u.copy_from_slice(y);
        m.solve(u, &mut Vec::new())
            .map_err(|e| Error::Resonance { m: 0, n: 0, row: e.row })
    }

    fn f(&self, i: isize) -> (C64, C64) {
        let p = [self.x(i), 0.0, 0.0];
        (
            self.source.derivative([0, 0, 0], p),
            self.source.derivative([2, 0, 0], p),
        )
    }

    pub fn assemble_rhs(&self) -> Vec<C64> {
        let h = self.h;
        let h2 = h * h;
        let kh2 = self.k.k2 * h2;
        let mut out: Vec<C64> = (0..self.n as isize)
            .map(|i| {
                let (f0, g0) = self.f(i);
                let (fm, gm) = self.f(i - 1);
                let (fp, gp) = self.f(i + 1);
                h2 * (1.0 - 7.0 * kh2 / 90.0) * f0 - kh2 * h2 / 360.0 * (fm + fp)
                    + 7.0 * h2 * h2 / 90.0 * g0
                    + h2 * h2 / 360.0 * (gm + gp)
            })
            .collect();
        out[0] -= self.d1 * self.ends[0];
        out[self.n - 1] -= self.d1 * self.ends[1];
        out
    }

    pub fn assemble_rhs_a2(&self) -> Vec<C64> {
        let h2 = self.h * self.h;
        let mut out: Vec<C64> = (0..self.n as isize).map(|i| h2 * self.f(i).0).collect();
        out[0] -= self.ends[0];
        out[self.n - 1] -= self.ends[1];
        out
    }
}
