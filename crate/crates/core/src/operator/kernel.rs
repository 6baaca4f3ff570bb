//! Matrix-free application of operators of the form
//! `A U(l) = P U(l-1) + Q U(l) + P U(l+1)` with 9-point lateral stencils.
//!
//! For each z-pencil the kernel first forms three class sums per plane (the
//! centre value, the sum of the four lateral face neighbours and the sum of
//! the four lateral corners) and then combines them plane by plane.

use rayon::prelude::*;

use crate::domain::{Axis, BoundaryConfig, Face, FaceKind, Grid, C64};
use crate::operator::ghost::GhostPlan;
use crate::operator::stencil::LateralStencil;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZEnd {
    /// Known boundary plane; its values enter through the data extension.
    Dirichlet,
    Ghost(GhostPlan),
}

/// Operator acting on a grid of unknowns, z index fastest.
#[derive(Clone, Debug)]
pub struct PlaneOperator {
    pub n: [usize; 3],
    pub off_plane: LateralStencil,
    pub in_plane: LateralStencil,
    /// `[z = 0, z = a]`
    pub ends: [ZEnd; 2],
    /// Lateral Neumann faces are closed by reflecting indices.
    pub lateral_mirror: bool,
}

const ZERO: C64 = C64::new(0.0, 0.0);

/// Lateral index resolution: reflection across Neumann faces, `None` on a
/// Dirichlet boundary node.
#[inline]
fn resolve(idx: isize, n: usize, mirror: bool) -> Option<usize> {
    if idx >= 0 && (idx as usize) < n {
        Some(idx as usize)
    } else if mirror {
        if idx < 0 {
            Some((-idx) as usize)
        } else {
            Some(2 * n - 2 - idx as usize)
        }
    } else {
        None
    }
}

const FACE_OFFSETS: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
const CORNER_OFFSETS: [(isize, isize); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

struct ClassSums {
    c: Vec<C64>,
    f: Vec<C64>,
    e: Vec<C64>,
}

impl ClassSums {
    fn new(nz: usize) -> Self {
        ClassSums {
            c: vec![ZERO; nz + 2],
            f: vec![ZERO; nz + 2],
            e: vec![ZERO; nz + 2],
        }
    }

    fn clear(&mut self) {
        self.c.fill(ZERO);
        self.f.fill(ZERO);
        self.e.fill(ZERO);
    }

    #[inline(always)]
    fn eval(&self, st: &LateralStencil, s: usize) -> C64 {
        st.eval(self.c[s], self.f[s], self.e[s])
    }
}

impl PlaneOperator {
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Combines class sums (index `s = l + 1`, halo at `0` and `nz + 1`) into
    /// one output pencil.
    #[inline]
    fn combine(&self, sums: &ClassSums, out: &mut [C64]) {
        let nz = self.n[2];
        let (p, q) = (&self.off_plane, &self.in_plane);
        for (l, o) in out.iter_mut().enumerate() {
            let s = l + 1;
            let mut v = sums.eval(q, s);
            v += if l == 0 {
                match &self.ends[0] {
                    ZEnd::Dirichlet => sums.eval(p, 0),
                    ZEnd::Ghost(g) => sums.eval(&g.mirror, 2) + sums.eval(&g.same, 1),
                }
            } else {
                sums.eval(p, s - 1)
            };
            v += if l == nz - 1 {
                match &self.ends[1] {
                    ZEnd::Dirichlet => sums.eval(p, nz + 1),
                    ZEnd::Ghost(g) => sums.eval(&g.mirror, nz - 1) + sums.eval(&g.same, nz),
                }
            } else {
                sums.eval(p, s + 1)
            };
            *o = v;
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        let [nx, ny, nz] = self.n;
        assert_eq!(x.len(), self.len());
        assert_eq!(y.len(), self.len());
        let mirror = self.lateral_mirror;
        y.par_chunks_mut(ny * nz).enumerate().for_each(|(i, slab)| {
            let mut sums = ClassSums::new(nz);
            let col = |ii: usize, jj: usize| &x[(ii * ny + jj) * nz..(ii * ny + jj + 1) * nz];
            for j in 0..ny {
                sums.c[1..=nz].copy_from_slice(col(i, j));
                sums.f.fill(ZERO);
                sums.e.fill(ZERO);
                for (target, offsets) in [(&mut sums.f, FACE_OFFSETS), (&mut sums.e, CORNER_OFFSETS)] {
                    for (di, dj) in offsets {
                        let (Some(ii), Some(jj)) = (
                            resolve(i as isize + di, nx, mirror),
                            resolve(j as isize + dj, ny, mirror),
                        ) else {
                            continue;
                        };
                        for (t, v) in target[1..=nz].iter_mut().zip(col(ii, jj)) {
                            *t += v;
                        }
                    }
                }
                self.combine(&sums, &mut slab[j * nz..(j + 1) * nz]);
            }
        });
    }

    /// `y -= A e`, where `e` is the Dirichlet boundary data extended by zero
    /// onto the unknowns.
    pub fn subtract_boundary_data(&self, grid: &Grid, bc: &BoundaryConfig, y: &mut [C64]) {
        let [nx, ny, nz] = self.n;
        assert_eq!(y.len(), self.len());
        let mirror = self.lateral_mirror;
        let lateral_dirichlet = bc.lateral_kind() == FaceKind::Dirichlet;
        let z_dirichlet = [
            matches!(self.ends[0], ZEnd::Dirichlet),
            matches!(self.ends[1], ZEnd::Dirichlet),
        ];
        let z_has_data = [
            z_dirichlet[0] && bc.face(Face::BOTTOM).data.is_some(),
            z_dirichlet[1] && bc.face(Face::TOP).data.is_some(),
        ];
        let lateral_has_data =
            lateral_dirichlet && Face::ALL[..4].iter().any(|&f| bc.face(f).data.is_some());
        let zmin = grid.coord(Axis::Z, -1);
        let zmax = grid.coord(Axis::Z, nz as isize);
        let value = |x: f64, y: f64, z: f64| bc.dirichlet_value([x, y, z], grid.extent);
        let xc = |i: isize| grid.coord(Axis::X, i);
        let yc = |j: isize| grid.coord(Axis::Y, j);

        y.par_chunks_mut(ny * nz).enumerate().for_each(|(i, slab)| {
            let mut sums = ClassSums::new(nz);
            let mut col = vec![ZERO; nz];
            for j in 0..ny {
                let near_lateral = !mirror && (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny);
                if !(z_has_data[0] || z_has_data[1] || (near_lateral && lateral_has_data)) {
                    continue;
                }
                sums.clear();
                let all = [(0isize, 0isize)]
                    .into_iter()
                    .map(|o| (o, 0usize))
                    .chain(FACE_OFFSETS.into_iter().map(|o| (o, 1)))
                    .chain(CORNER_OFFSETS.into_iter().map(|o| (o, 2)));
                for ((di, dj), class) in all {
                    let target = match class {
                        0 => &mut sums.c,
                        1 => &mut sums.f,
                        _ => &mut sums.e,
                    };
                    let (ia, ja) = (i as isize + di, j as isize + dj);
                    match (resolve(ia, nx, mirror), resolve(ja, ny, mirror)) {
                        (Some(ii), Some(jj)) => {
                            let (px, py) = (xc(ii as isize), yc(jj as isize));
                            if z_has_data[0] {
                                target[0] += value(px, py, zmin);
                            }
                            if z_has_data[1] {
                                target[nz + 1] += value(px, py, zmax);
                            }
                        }
                        (ri, rj) => {
                            let px = xc(ri.map_or(ia, |v| v as isize));
                            let py = yc(rj.map_or(ja, |v| v as isize));
                            for (s, t) in target.iter_mut().enumerate() {
                                let end = if s == 0 {
                                    Some(0)
                                } else if s == nz + 1 {
                                    Some(1)
                                } else {
                                    None
                                };
                                if let Some(e) = end {
                                    if !z_dirichlet[e] {
                                        continue;
                                    }
                                }
                                let pz = grid.coord(Axis::Z, s as isize - 1);
                                *t += value(px, py, pz);
                            }
                        }
                    }
                }
                self.combine(&sums, &mut col);
                for (t, v) in slab[j * nz..(j + 1) * nz].iter_mut().zip(&col) {
                    *t -= v;
                }
            }
        });
    }

    /// Dense column `A e_idx`, used by tests.
    #[cfg(test)]
    pub(crate) fn column(&self, idx: usize) -> Vec<C64> {
        let mut e = vec![ZERO; self.len()];
        e[idx] = C64::new(1.0, 0.0);
        let mut y = vec![ZERO; self.len()];
        self.apply(&e, &mut y);
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_reflects_across_neumann_faces() {
        assert_eq!(resolve(-1, 5, true), Some(1));
        assert_eq!(resolve(5, 5, true), Some(3));
        assert_eq!(resolve(-1, 5, false), None);
        assert_eq!(resolve(2, 5, false), Some(2));
    }

    #[test]
    fn identity_planes_give_identity() {
        let op = PlaneOperator {
            n: [3, 4, 5],
            off_plane: LateralStencil::ZERO,
            in_plane: LateralStencil::identity(),
            ends: [ZEnd::Dirichlet, ZEnd::Dirichlet],
            lateral_mirror: false,
        };
        for idx in [0, 7, 59] {
            let col = op.column(idx);
            for (r, v) in col.iter().enumerate() {
                let expected = if r == idx { 1.0 } else { 0.0 };
                assert_eq!(*v, C64::new(expected, 0.0));
            }
        }
    }
}
