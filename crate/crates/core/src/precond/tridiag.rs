//! Tridiagonal solves along z-pencils.

use crate::domain::C64;

/// Tridiagonal matrix with constant interior entries: `diag + corr` on the
/// diagonal, `1` off the diagonal except in the first row (`upper0`) and the
/// last row (`lower_last`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilMatrix {
    pub n: usize,
    pub diag: C64,
    /// Additions to the first and last diagonal entries.
    pub corr: [C64; 2],
    pub upper0: C64,
    pub lower_last: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularPivot {
    pub row: usize,
}

/// Relative pivot guard of the unpivoted elimination.
pub const PIVOT_GUARD: f64 = 1e-12;

impl PencilMatrix {
    #[inline]
    pub fn diag_at(&self, l: usize) -> C64 {
        let mut d = self.diag;
        if l == 0 {
            d += self.corr[0];
        }
        if l + 1 == self.n {
            d += self.corr[1];
        }
        d
    }

    #[inline]
    pub fn lower_at(&self, l: usize) -> C64 {
        if l + 1 == self.n {
            self.lower_last
        } else {
            C64::new(1.0, 0.0)
        }
    }

    #[inline]
    pub fn upper_at(&self, l: usize) -> C64 {
        if l == 0 {
            self.upper0
        } else {
            C64::new(1.0, 0.0)
        }
    }

    fn scale(&self) -> f64 {
        let mut s = self.diag.norm().max(1.0);
        for c in self.corr {
            s = s.max((self.diag + c).norm());
        }
        s.max(self.upper0.norm()).max(self.lower_last.norm())
    }

    /// `y = T x`
    pub fn multiply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n;
        for l in 0..n {
            let mut v = self.diag_at(l) * x[l];
            if l > 0 {
                v += self.lower_at(l) * x[l - 1];
            }
            if l + 1 < n {
                v += self.upper_at(l) * x[l + 1];
            }
            y[l] = v;
        }
    }

    /// Solves `T x = b` in place. Uses elimination without pivoting and falls
    /// back to partial pivoting when a pivot is small relative to the matrix.
    pub fn solve(&self, b: &mut [C64], work: &mut Vec<C64>) -> Result<(), SingularPivot> {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let tol = PIVOT_GUARD * self.scale();
        work.clear();
        work.resize(n, C64::new(0.0, 0.0));
        work.extend_from_slice(b);
        // Thomas: work holds modified upper diagonal
        let mut ok = true;
        let mut denom = self.diag_at(0);
        for l in 0..n {
            if l > 0 {
                denom = self.diag_at(l) - self.lower_at(l) * work[l - 1];
            }
            if denom.norm() <= tol || !denom.norm().is_finite() {
                ok = false;
                break;
            }
            let inv = 1.0 / denom;
            if l + 1 < n {
                work[l] = self.upper_at(l) * inv;
            }
            b[l] = if l > 0 {
                (b[l] - self.lower_at(l) * b[l - 1]) * inv
            } else {
                b[l] * inv
            };
        }
        if ok {
            for l in (0..n.saturating_sub(1)).rev() {
                let next = b[l + 1];
                b[l] -= work[l] * next;
            }
            return Ok(());
        }
        b.copy_from_slice(&work[n..]);
        self.solve_pivoted(b, tol)
    }

    /// Gaussian elimination with partial pivoting on the band (as in LAPACK's
    /// gtsv).
    fn solve_pivoted(&self, b: &mut [C64], tol: f64) -> Result<(), SingularPivot> {
        let n = self.n;
        let zero = C64::new(0.0, 0.0);
        let mut dl: Vec<C64> = (1..n).map(|l| self.lower_at(l)).collect();
        let mut d: Vec<C64> = (0..n).map(|l| self.diag_at(l)).collect();
        let mut du: Vec<C64> = (0..n.saturating_sub(1)).map(|l| self.upper_at(l)).collect();
        let mut du2 = vec![zero; n.saturating_sub(2)];
        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() <= tol {
                    return Err(SingularPivot { row: i });
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                let bi = b[i];
                b[i + 1] -= fact * bi;
                dl[i] = zero;
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                du[i] = temp;
                b.swap(i, i + 1);
                let bi = b[i];
                b[i + 1] -= fact * bi;
            }
        }
        if d[n - 1].norm() <= tol {
            return Err(SingularPivot { row: n - 1 });
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: PencilMatrix) {
        let x: Vec<C64> = (0..m.n).map(|i| C64::new(i as f64 + 1.0, -(i as f64) * 0.5)).collect();
        let mut b = vec![C64::new(0.0, 0.0); m.n];
        m.multiply(&x, &mut b);
        let mut work = Vec::new();
        m.solve(&mut b, &mut work).unwrap();
        for (a, c) in x.iter().zip(&b) {
            assert!((a - c).norm() < 1e-9 * (1.0 + a.norm()), "{a} vs {c}");
        }
    }

    #[test]
    fn solves_diagonally_dominant_and_indefinite_systems() {
        let one = C64::new(1.0, 0.0);
        check(PencilMatrix { n: 6, diag: C64::new(-4.0, 0.1), corr: [C64::new(0.0, 0.3); 2], upper0: 2.0 * one, lower_last: 2.0 * one });
        check(PencilMatrix { n: 5, diag: C64::new(0.5, 0.0), corr: [C64::new(0.0, 0.0); 2], upper0: one, lower_last: one });
        check(PencilMatrix { n: 1, diag: C64::new(3.0, 0.0), corr: [C64::new(0.0, 0.0); 2], upper0: one, lower_last: one });
    }

    #[test]
    fn zero_first_pivot_uses_pivoted_path() {
        // diag 0 makes the first unpivoted pivot vanish, the matrix itself is regular for n even
        let one = C64::new(1.0, 0.0);
        check(PencilMatrix { n: 4, diag: C64::new(0.0, 0.0), corr: [C64::new(0.0, 0.0); 2], upper0: one, lower_last: one });
    }

    #[test]
    fn singular_matrix_is_reported() {
        // eigenvalue 2cos(pi/4) - sqrt(2) = 0 for n = 3
        let one = C64::new(1.0, 0.0);
        let m = PencilMatrix { n: 3, diag: C64::new(-(2f64.sqrt()), 0.0), corr: [C64::new(0.0, 0.0); 2], upper0: one, lower_last: one };
        let mut b = vec![one; 3];
        assert!(m.solve(&mut b, &mut Vec::new()).is_err());
    }
}
