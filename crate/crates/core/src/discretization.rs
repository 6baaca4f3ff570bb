//! Validated problem descriptors: the sixth-order operator, its second-order
//! companion and the fast preconditioner for one grid.

use std::sync::Arc;

use rayon::prelude::*;

use crate::domain::{
    Axis, BoundaryConfig, Face, FaceKind, Field, Grid, Side, SourceModel, Wavenumber, C64,
};
use crate::error::{Error, Result};
use crate::operator::ghost::{
    build_ghost_plan, ghost_source, global_order, neumann_jump, FaceDataPack, FaceSource, GhostPlan, Order,
    FACE_DATA_ORDERS, FACE_SOURCE_ORDERS,
};
use crate::operator::kernel::{PlaneOperator, ZEnd};
use crate::operator::stencil::{Coefficients, LateralStencil};
use crate::precond::FastSolver;

/// Source derivatives entering the interior right-hand side.
pub(crate) const VOLUME_ORDERS: [[usize; 3]; 10] = [
    [0, 0, 0],
    [2, 0, 0],
    [0, 2, 0],
    [0, 0, 2],
    [4, 0, 0],
    [0, 4, 0],
    [0, 0, 4],
    [2, 2, 0],
    [2, 0, 2],
    [0, 2, 2],
];

/// A validated three-dimensional problem on one grid.
pub struct Discretization {
    pub grid: Grid,
    pub k: Wavenumber,
    pub bc: BoundaryConfig,
    pub source: Arc<dyn SourceModel>,
    pub coefficients: Coefficients,
    a6: PlaneOperator,
    a2: PlaneOperator,
    fast: FastSolver,
}

impl std::fmt::Debug for Discretization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Discretization")
            .field("grid", &self.grid)
            .field("k", &self.k)
            .field("bc", &self.bc)
            .finish_non_exhaustive()
    }
}

/// Checks a problem description and precomputes everything the solvers need.
///
/// Rejects grids violating `|k| h < 2 pi / 10`, radiation conditions on
/// x/y faces, mixed lateral conditions and sources or face data lacking a
/// derivative the scheme needs.
pub fn validate_setup(
    grid: Grid,
    k: Wavenumber,
    bc: BoundaryConfig,
    source: Arc<dyn SourceModel>,
) -> Result<Discretization> {
    bc.validate()?;
    let expected = Grid::new(grid.extent, grid.intervals, &bc)?;
    if expected != grid {
        return Err(Error::Config(
            "grid unknown counts do not match the boundary configuration".into(),
        ));
    }
    k.check_ppw(grid.h)?;

    for order in VOLUME_ORDERS {
        if !source.provides(order) {
            return Err(Error::MissingDerivative {
                order,
                needed_by: "interior right-hand side",
            });
        }
    }
    for face in Face::ALL {
        let cond = bc.face(face);
        if cond.kind == FaceKind::Dirichlet {
            if let Some(d) = &cond.data {
                if !d.provides([0, 0]) {
                    return Err(Error::MissingFaceDerivative {
                        face: face.to_string(),
                        order: [0, 0],
                    });
                }
            }
            continue;
        }
        for o in FACE_SOURCE_ORDERS {
            let order = global_order(face, o);
            if !source.provides(order) {
                return Err(Error::MissingDerivative {
                    order,
                    needed_by: "boundary closure",
                });
            }
        }
        if let Some(d) = &cond.data {
            if let Some(&o) = FACE_DATA_ORDERS.iter().find(|&&o| !d.provides(o)) {
                return Err(Error::MissingFaceDerivative {
                    face: face.to_string(),
                    order: o,
                });
            }
        }
    }

    let h = grid.h;
    let coefficients = Coefficients::new(k.k2, h);
    let end = |face: Face, order: Order| match build_ghost_plan(bc.kind(face), &k, h, order) {
        Some(plan) => ZEnd::Ghost(plan),
        None => ZEnd::Dirichlet,
    };
    let lateral_mirror = bc.lateral_kind() == FaceKind::Neumann;
    let a6 = PlaneOperator {
        n: grid.n,
        off_plane: coefficients.off_plane(),
        in_plane: coefficients.in_plane(),
        ends: [end(Face::BOTTOM, Order::Sixth), end(Face::TOP, Order::Sixth)],
        lateral_mirror,
    };
    let kh2 = k.k2 * h * h;
    let a2 = PlaneOperator {
        n: grid.n,
        off_plane: LateralStencil::identity(),
        in_plane: LateralStencil::from_poly(kh2 - 2.0, C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        ends: [end(Face::BOTTOM, Order::Second), end(Face::TOP, Order::Second)],
        lateral_mirror,
    };
    let fast = FastSolver::new(&grid, &k, &bc);
    Ok(Discretization {
        grid,
        k,
        bc,
        source,
        coefficients,
        a6,
        a2,
        fast,
    })
}

impl Discretization {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn operator(&self, order: Order) -> &PlaneOperator {
        match order {
            Order::Sixth => &self.a6,
            Order::Second => &self.a2,
        }
    }

    pub fn fast_solver(&self) -> &FastSolver {
        &self.fast
    }

    /// Ghost plan of a z-face; `None` when the face is Dirichlet.
    pub fn ghost_plan(&self, face: Face, order: Order) -> Option<GhostPlan> {
        build_ghost_plan(self.bc.kind(face), &self.k, self.grid.h, order)
    }

    /// `y = A6 x` (scaled by `h^2`).
    pub fn apply_a6(&self, x: &[C64], y: &mut [C64]) {
        self.a6.apply(x, y);
    }

    /// `y = A2 x`, the second-order operator with the same boundary kinds.
    pub fn apply_a2(&self, x: &[C64], y: &mut [C64]) {
        self.a2.apply(x, y);
    }

    /// `u = A_p^{-1} y`. `A_p` coincides with the second-order operator.
    pub fn precondition_solve(&self, y: &[C64], u: &mut [C64]) -> Result<()> {
        self.fast.solve(y, u)
    }

    /// Right-hand side `F` of `A6 U = F`.
    pub fn assemble_rhs(&self) -> Field {
        self.assemble(Order::Sixth)
    }

    /// Right-hand side of the second-order scheme.
    pub fn assemble_rhs_a2(&self) -> Field {
        self.assemble(Order::Second)
    }

    fn assemble(&self, order: Order) -> Field {
        let grid = &self.grid;
        let [_, ny, nz] = grid.n;
        let h = grid.h;
        let h2 = h * h;
        let kh2 = self.k.k2 * h2;
        let src = self.source.as_ref();
        let mut out = Field::zeros(grid.n);
        out.data
            .par_chunks_mut(ny * nz)
            .enumerate()
            .for_each(|(i, slab)| {
                let mut v = [C64::new(0.0, 0.0); 10];
                for j in 0..ny {
                    for l in 0..nz {
                        let p = grid.point(i, j, l);
                        slab[j * nz + l] = match order {
                            Order::Second => h2 * src.derivative([0, 0, 0], p),
                            Order::Sixth => {
                                src.derivatives(&VOLUME_ORDERS, p, &mut v);
                                h2 * ((1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0) * v[0]
                                    + h2 / 12.0 * (1.0 - kh2 / 30.0) * (v[1] + v[2] + v[3])
                                    + h2 * h2 / 360.0 * (v[4] + v[5] + v[6])
                                    + h2 * h2 / 90.0 * (v[7] + v[8] + v[9]))
                            }
                        };
                    }
                }
            });
        self.operator(order)
            .subtract_boundary_data(grid, &self.bc, &mut out.data);
        for face in Face::ALL {
            let kind = self.bc.kind(face);
            if kind != FaceKind::Dirichlet {
                self.subtract_ghost_source(face, kind, order, &mut out);
            }
        }
        if order == Order::Sixth && self.bc.lateral_kind() == FaceKind::Neumann {
            self.subtract_reflection_corrections(&mut out);
        }
        out
    }

    /// The lateral face sources assume each ghost value equals its mirror
    /// image plus that face's jump, with the full `P, Q, P` plane weights.
    /// Two places see something else: ghosts reflected across two lateral
    /// faces at once, and rows whose outer plane is rewritten by a z-end
    /// plan. The difference is rebuilt here from pointwise jumps.
    fn subtract_reflection_corrections(&self, out: &mut Field) {
        let grid = &self.grid;
        let [nx, ny, nz] = grid.n;
        let (p, q) = (self.a6.off_plane, self.a6.in_plane);
        let plan_at = |end: usize| match self.a6.ends[end] {
            ZEnd::Ghost(g) => Some(g),
            ZEnd::Dirichlet => None,
        };
        let plans = [plan_at(0), plan_at(1)];
        let on_x = |i: usize| i == 0 || i + 1 == nx;
        let on_y = |j: usize| j == 0 || j + 1 == ny;
        let mut nodes = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                if !(on_x(i) || on_y(j)) {
                    continue;
                }
                for l in 0..nz {
                    let plan_row = (l == 0 && plans[0].is_some()) || (l + 1 == nz && plans[1].is_some());
                    if (on_x(i) && on_y(j)) || plan_row {
                        nodes.push((i, j, l));
                    }
                }
            }
        }

        let jump = |face: Face, pt: [f64; 3]| {
            let s = FaceSource::eval(self.source.as_ref(), face, pt);
            let d = FaceDataPack::eval(self.bc.face(face), pt, true);
            neumann_jump(self.k.k2, grid.h, &s, &d)
        };
        // face crossed by lateral index `idx` along `axis`, if any
        let crossed = |axis: Axis, idx: isize, n: usize| {
            if idx < 0 {
                Some((Face::new(axis, Side::Low), 0isize, -idx))
            } else if idx >= n as isize {
                Some((Face::new(axis, Side::High), n as isize - 1, 2 * (n as isize - 1) - idx))
            } else {
                None
            }
        };
        let weight = |st: &LateralStencil, di: isize, dj: isize| match (di != 0, dj != 0) {
            (false, false) => st.center,
            (true, true) => st.corner,
            _ => st.face,
        };

        let values: Vec<(usize, C64)> = nodes
            .par_iter()
            .map(|&(i, j, l)| {
                let mut planes: Vec<(isize, LateralStencil)> = Vec::with_capacity(3);
                let add = |a: LateralStencil, b: LateralStencil| LateralStencil {
                    center: a.center + b.center,
                    face: a.face + b.face,
                    corner: a.corner + b.corner,
                };
                match (l == 0, l + 1 == nz) {
                    (true, _) if plans[0].is_some() => {
                        let g = plans[0].unwrap();
                        planes.push((0, add(q, g.same)));
                        planes.push((1, add(p, g.mirror)));
                    }
                    (_, true) if plans[1].is_some() => {
                        let g = plans[1].unwrap();
                        planes.push((-1, add(p, g.mirror)));
                        planes.push((0, add(q, g.same)));
                    }
                    _ => planes.extend([(-1, p), (0, q), (1, p)]),
                }
                if nz == 1 && plans[0].is_some() && plans[1].is_some() {
                    // both plans act on the single plane; not a supported shape
                    return (grid.index(i, j, l), C64::new(0.0, 0.0));
                }
                let mut extra = C64::new(0.0, 0.0);
                for di in -1isize..=1 {
                    for dj in -1isize..=1 {
                        let (ig, jg) = (i as isize + di, j as isize + dj);
                        let cx = crossed(Axis::X, ig, nx);
                        let cy = crossed(Axis::Y, jg, ny);
                        if cx.is_none() && cy.is_none() {
                            continue;
                        }
                        // what the face sources supply, with the full plane weights
                        for dz in -1isize..=1 {
                            let w = weight(if dz == 0 { &q } else { &p }, di, dj);
                            let z = grid.coord(Axis::Z, l as isize + dz);
                            let mut s = C64::new(0.0, 0.0);
                            if let Some((face, fx, _)) = cx {
                                s += jump(face, [grid.coord(Axis::X, fx), grid.coord(Axis::Y, jg), z]);
                            }
                            if let Some((face, fy, _)) = cy {
                                s += jump(face, [grid.coord(Axis::X, ig), grid.coord(Axis::Y, fy), z]);
                            }
                            extra -= w * s;
                        }
                        // what the operator's reflected stencil actually needs
                        for (dz, st) in &planes {
                            let w = weight(st, di, dj);
                            let z = grid.coord(Axis::Z, l as isize + dz);
                            let mut s = C64::new(0.0, 0.0);
                            let mut x = ig;
                            if let Some((face, fx, rx)) = cx {
                                s += jump(face, [grid.coord(Axis::X, fx), grid.coord(Axis::Y, jg), z]);
                                x = rx;
                            }
                            if let Some((face, fy, _)) = cy {
                                s += jump(face, [grid.coord(Axis::X, x), grid.coord(Axis::Y, fy), z]);
                            }
                            extra += w * s;
                        }
                    }
                }
                (grid.index(i, j, l), extra)
            })
            .collect();
        for (n, v) in values {
            out.data[n] -= v;
        }
    }

    fn subtract_ghost_source(&self, face: Face, kind: FaceKind, order: Order, out: &mut Field) {
        let grid = &self.grid;
        let cond = self.bc.face(face);
        let a = face.axis.index();
        let fixed = match face.side {
            Side::Low => 0,
            Side::High => grid.n[a] - 1,
        };
        let [nx, ny, nz] = grid.n;
        let idx: Vec<(usize, usize, usize)> = match face.axis {
            Axis::X => (0..ny).flat_map(|j| (0..nz).map(move |l| (fixed, j, l))).collect(),
            Axis::Y => (0..nx).flat_map(|i| (0..nz).map(move |l| (i, fixed, l))).collect(),
            Axis::Z => (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j, fixed))).collect(),
        };
        let values: Vec<(usize, C64)> = idx
            .par_iter()
            .map(|&(i, j, l)| {
                let p = grid.point(i, j, l);
                let s = match order {
                    Order::Sixth => FaceSource::eval(self.source.as_ref(), face, p),
                    Order::Second => FaceSource::default(),
                };
                let d = FaceDataPack::eval(cond, p, order == Order::Sixth);
                (grid.index(i, j, l), ghost_source(kind, order, &self.k, grid.h, &s, &d))
            })
            .collect();
        for (n, s) in values {
            out.data[n] -= s;
        }
    }

    /// `r = F - A6 u`.
    pub fn residual(&self, u: &[C64], f: &[C64]) -> Vec<C64> {
        let mut r = vec![C64::new(0.0, 0.0); u.len()];
        self.apply_a6(u, &mut r);
        r.par_iter_mut().zip(f.par_iter()).for_each(|(a, b)| *a = b - *a);
        r
    }

    /// Samples a function at every unknown.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> C64 + Sync) -> Field {
        let grid = &self.grid;
        let mut out = Field::zeros(grid.n);
        out.data.par_iter_mut().enumerate().for_each(|(n, v)| {
            let (i, j, l) = grid.unindex(n);
            *v = f(grid.point(i, j, l));
        });
        out
    }
}
