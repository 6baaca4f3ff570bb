//! Sine and cosine transforms diagonalising the lateral second differences.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::domain::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    /// Dirichlet at both ends: DST-I, modes `sin(j l pi/(N+1))`, `j = 1..N`.
    Sine,
    /// Neumann at both ends: DCT-I, modes `cos(j l pi/(N-1))`, `j = 0..N-1`.
    Cosine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Grid values to mode coefficients.
    Analysis,
    /// Mode coefficients to grid values.
    Synthesis,
}

/// Transform along one lateral axis with `n` unknowns.
#[derive(Clone)]
pub struct LateralTransform {
    pub kind: TransformKind,
    pub n: usize,
    /// Eigenvalues of the unscaled second difference `D` (`Lambda - 2 I`),
    /// ordered like the coefficients.
    pub eigenvalues: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ext: usize,
}

impl std::fmt::Debug for LateralTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LateralTransform")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .finish()
    }
}

impl LateralTransform {
    pub fn new(kind: TransformKind, n: usize) -> Self {
        assert!(n >= 1, "empty transform");
        assert!(kind == TransformKind::Sine || n >= 2, "cosine transform needs n >= 2");
        let (ext, eigenvalues): (usize, Vec<f64>) = match kind {
            TransformKind::Sine => (
                2 * (n + 1),
                (1..=n)
                    .map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos() - 2.0)
                    .collect(),
            ),
            TransformKind::Cosine => (
                2 * (n - 1),
                (0..n)
                    .map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n - 1) as f64).cos() - 2.0)
                    .collect(),
            ),
        };
        let fft = FftPlanner::new().plan_fft_forward(ext);
        LateralTransform {
            kind,
            n,
            eigenvalues,
            fft,
            ext,
        }
    }

    /// Transforms `count` lines in place. Element `e` of line `q` lives at
    /// `data[q * line_stride + e * elem_stride]`.
    pub fn apply_lines(
        &self,
        dir: Direction,
        data: &mut [C64],
        count: usize,
        elem_stride: usize,
        line_stride: usize,
    ) {
        let (n, ext) = (self.n, self.ext);
        // every slot of each extension is written, in order
        let mut buf = Vec::with_capacity(count * ext);
        for q in 0..count {
            let base = q * line_stride;
            let x = |e: usize| data[base + e * elem_stride];
            match self.kind {
                TransformKind::Sine => {
                    buf.push(ZERO);
                    buf.extend((0..n).map(x));
                    buf.push(ZERO);
                    buf.extend((0..n).rev().map(|e| -x(e)));
                }
                TransformKind::Cosine => {
                    // synthesis uses T(W c) with W = diag(2, 1, .., 1, 2)
                    let w = |e: usize| {
                        let v = x(e);
                        if dir == Direction::Synthesis && (e == 0 || e == n - 1) {
                            2.0 * v
                        } else {
                            v
                        }
                    };
                    buf.extend((0..n).map(w));
                    buf.extend((1..n - 1).rev().map(x));
                }
            }
        }
        let lines_per_task = (count / rayon::current_num_threads().max(1)).clamp(1, 64);
        buf.par_chunks_mut(ext * lines_per_task).for_each(|chunk| {
            let mut scratch = vec![ZERO; self.fft.get_inplace_scratch_len()];
            self.fft.process_with_scratch(chunk, &mut scratch);
        });
        for (q, line) in buf.chunks(ext).enumerate() {
            let base = q * line_stride;
            match self.kind {
                TransformKind::Sine => {
                    // S_j = (i/2) Y_j
                    let scale = match dir {
                        Direction::Synthesis => C64::new(0.0, 0.5),
                        Direction::Analysis => C64::new(0.0, 1.0 / (n + 1) as f64),
                    };
                    for e in 0..n {
                        data[base + e * elem_stride] = scale * line[e + 1];
                    }
                }
                TransformKind::Cosine => {
                    // T_j = Y_j / 2
                    for e in 0..n {
                        let t = 0.5 * line[e];
                        data[base + e * elem_stride] = match dir {
                            Direction::Synthesis => t,
                            Direction::Analysis => {
                                let w = if e == 0 || e == n - 1 { 2.0 } else { 1.0 };
                                t * (2.0 / ((n - 1) as f64 * w))
                            }
                        };
                    }
                }
            }
        }
    }

    /// Single-line convenience wrapper.
    pub fn apply(&self, dir: Direction, line: &mut [C64]) {
        assert_eq!(line.len(), self.n);
        self.apply_lines(dir, line, 1, 1, 0);
    }

    /// Value of mode `j` (coefficient index) at grid index `e`.
    pub fn mode(&self, j: usize, e: usize) -> f64 {
        match self.kind {
            TransformKind::Sine => {
                ((j + 1) as f64 * (e + 1) as f64 * std::f64::consts::PI / (self.n + 1) as f64).sin()
            }
            TransformKind::Cosine => {
                (j as f64 * e as f64 * std::f64::consts::PI / (self.n - 1) as f64).cos()
            }
        }
    }
}
