//! Fast direct solver for the second-order preconditioner `A_p`.
//!
//! `A_p = Dx (x) I (x) I + I (x) Dy (x) I + I (x) I (x) Az` is diagonalised
//! laterally by sine (Dirichlet) or cosine (Neumann) transforms, which leaves
//! one tridiagonal system per lateral mode along z.

pub mod transform;
pub mod tridiag;

use rayon::prelude::*;

use crate::domain::{BoundaryConfig, Face, FaceKind, Grid, Wavenumber, C64};
use crate::error::{Error, Result};
pub use transform::{Direction, LateralTransform, TransformKind};
pub use tridiag::PencilMatrix;

/// Precomputed transforms and pencil parameters of `A_p`.
#[derive(Clone, Debug)]
pub struct FastSolver {
    pub n: [usize; 3],
    pub tx: LateralTransform,
    pub ty: LateralTransform,
    /// `k^2 h^2 - 2`
    base: C64,
    corr: [C64; 2],
    couple: [C64; 2],
}

/// Diagonal shift and boundary coupling of the z-pencil at one end:
/// `(alpha, 1 + beta)`.
pub fn pencil_end(kind: FaceKind, k: &Wavenumber, h: f64) -> (C64, C64) {
    let zero = C64::new(0.0, 0.0);
    match kind {
        FaceKind::Dirichlet => (zero, C64::new(1.0, 0.0)),
        FaceKind::Neumann => (zero, C64::new(2.0, 0.0)),
        FaceKind::Sommerfeld => (C64::new(0.0, 2.0) * k.k * h, C64::new(2.0, 0.0)),
    }
}

impl FastSolver {
    pub fn new(grid: &Grid, k: &Wavenumber, bc: &BoundaryConfig) -> Self {
        let kind = match bc.lateral_kind() {
            FaceKind::Neumann => TransformKind::Cosine,
            _ => TransformKind::Sine,
        };
        let (a0, b0) = pencil_end(bc.kind(Face::BOTTOM), k, grid.h);
        let (a1, b1) = pencil_end(bc.kind(Face::TOP), k, grid.h);
        FastSolver {
            n: grid.n,
            tx: LateralTransform::new(kind, grid.n[0]),
            ty: LateralTransform::new(kind, grid.n[1]),
            base: k.k2 * grid.h * grid.h - 2.0,
            corr: [a0, a1],
            couple: [b0, b1],
        }
    }

    /// z-pencil of lateral mode `(m, n)` in coefficient order.
    pub fn pencil(&self, m: usize, n: usize) -> PencilMatrix {
        PencilMatrix {
            n: self.n[2],
            diag: self.base + self.tx.eigenvalues[m] + self.ty.eigenvalues[n],
            corr: self.corr,
            upper0: self.couple[0],
            lower_last: self.couple[1],
        }
    }

    fn mode_number(&self, t: &LateralTransform, j: usize) -> usize {
        match t.kind {
            TransformKind::Sine => j + 1,
            TransformKind::Cosine => j,
        }
    }

    fn lateral(&self, dir: Direction, u: &mut [C64]) {
        let [_, ny, nz] = self.n;
        let plane = ny * nz;
        u.par_chunks_mut(plane)
            .for_each(|slab| self.ty.apply_lines(dir, slab, nz, nz, 1));
        // x-lines of one y-row: element stride `plane`, one line per z
        for j in 0..ny {
            self.tx.apply_lines(dir, &mut u[j * nz..], nz, plane, 1);
        }
    }

    /// `u = A_p^{-1} y`.
    pub fn solve(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
        let [_, ny, nz] = self.n;
        let len = self.n.iter().product::<usize>();
        if y.len() != len || u.len() != len {
            return Err(Error::ShapeMismatch {
                expected: len,
                got: y.len().min(u.len()),
            });
        }
        u.copy_from_slice(y);
        self.lateral(Direction::Analysis, u);
        let failure = u
            .par_chunks_mut(ny * nz)
            .enumerate()
            .map(|(m, slab)| {
                let mut work = Vec::with_capacity(2 * nz);
                for (n, col) in slab.chunks_mut(nz).enumerate() {
                    if let Err(e) = self.pencil(m, n).solve(col, &mut work) {
                        return Some((m, n, e.row));
                    }
                }
                None
            })
            .find_any(|r| r.is_some())
            .flatten();
        if let Some((m, n, row)) = failure {
            return Err(Error::Resonance {
                m: self.mode_number(&self.tx, m),
                n: self.mode_number(&self.ty, n),
                row,
            });
        }
        self.lateral(Direction::Synthesis, u);
        Ok(())
    }
}
