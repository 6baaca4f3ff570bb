//! Dense ground truth for small grids: operators assembled entry by entry,
//! direct solves and eigendecompositions.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::{validate_setup, Discretization, VOLUME_ORDERS};
use crate::domain::{
    Axis, BoundaryConfig, Face, FaceCondition, FaceKind, Grid, Side, SourceModel, Wavenumber, C64,
};
use crate::error::{Error, Result};
use crate::operator::ghost::{ghost_source, neumann_jump, FaceDataPack, FaceSource};
use crate::operator::{Coefficients, GhostPlan, LateralStencil, Order};
use crate::spectra::{eig_1d, eig_3d, Which};

/// Largest dense system the oracle builds.
pub const SIZE_GUARD: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Scatter of the stencil weights row by row, with ghost substitution.
    StencilWalk,
    /// Kronecker products of one-dimensional difference matrices.
    Kronecker,
}

#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub n: usize,
    pub entries: DMatrix<C64>,
    pub construction: Construction,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn guard(n: usize) -> Result<()> {
    if n > SIZE_GUARD {
        Err(Error::SizeGuard {
            unknowns: n,
            limit: SIZE_GUARD,
        })
    } else {
        Ok(())
    }
}

fn z_plan(disc: &Discretization, face: Face, order: Order) -> Option<GhostPlan> {
    disc.ghost_plan(face, order)
}

/// Stencil weights `(off-plane, in-plane)` for the chosen operator.
fn plane_stencils(disc: &Discretization, order: Order) -> (LateralStencil, LateralStencil) {
    match order {
        Order::Sixth => {
            let c = Coefficients::new(disc.k.k2, disc.grid.h);
            (c.off_plane(), c.in_plane())
        }
        Order::Second => {
            let kh2 = disc.k.k2 * disc.grid.h * disc.grid.h;
            (
                LateralStencil::identity(),
                LateralStencil::from_poly(kh2 - 2.0, ONE, ZERO),
            )
        }
    }
}

fn lateral_weight(st: &LateralStencil, di: isize, dj: isize) -> C64 {
    match di.abs() + dj.abs() {
        0 => st.center,
        1 => st.face,
        _ => st.corner,
    }
}

/// Dense operator for `order`.
pub fn assemble_dense(disc: &Discretization, order: Order, construction: Construction) -> Result<DenseOperator> {
    let n = disc.len();
    guard(n)?;
    let entries = match construction {
        Construction::StencilWalk => stencil_walk(disc, order),
        Construction::Kronecker => kronecker(disc, order),
    };
    Ok(DenseOperator {
        n,
        entries,
        construction,
    })
}

/// Reflection across a Neumann face; `None` for a Dirichlet node.
fn reflect(idx: isize, n: usize, neumann: bool) -> Option<usize> {
    if (0..n as isize).contains(&idx) {
        Some(idx as usize)
    } else if !neumann {
        None
    } else if idx < 0 {
        Some((-idx) as usize)
    } else {
        Some((2 * n as isize - 2 - idx) as usize)
    }
}

fn stencil_walk(disc: &Discretization, order: Order) -> DMatrix<C64> {
    let g = &disc.grid;
    let [nx, ny, nz] = g.n;
    let n = disc.len();
    let neumann = disc.bc.lateral_kind() == FaceKind::Neumann;
    let (p, q) = plane_stencils(disc, order);
    let plans = [z_plan(disc, Face::BOTTOM, order), z_plan(disc, Face::TOP, order)];
    let mut a = DMatrix::from_element(n, n, ZERO);
    for i in 0..nx {
        for j in 0..ny {
            for l in 0..nz {
                let row = g.index(i, j, l);
                let mut add = |di: isize, dj: isize, ll: usize, w: C64| {
                    let ii = reflect(i as isize + di, nx, neumann);
                    let jj = reflect(j as isize + dj, ny, neumann);
                    if let (Some(ii), Some(jj)) = (ii, jj) {
                        a[(row, g.index(ii, jj, ll))] += w;
                    }
                };
                for di in -1..=1isize {
                    for dj in -1..=1isize {
                        add(di, dj, l, lateral_weight(&q, di, dj));
                        for (dl, end) in [(-1isize, 0usize), (1, 1)] {
                            let ll = l as isize + dl;
                            if (0..nz as isize).contains(&ll) {
                                add(di, dj, ll as usize, lateral_weight(&p, di, dj));
                            } else if let Some(plan) = plans[end] {
                                // ghost node replaced by the plan on planes 1 and 0 from the face
                                let (mirror, same) = if end == 0 { (1, 0) } else { (nz - 2, nz - 1) };
                                add(di, dj, mirror, lateral_weight(&plan.mirror, di, dj));
                                add(di, dj, same, lateral_weight(&plan.same, di, dj));
                            }
                        }
                    }
                }
            }
        }
    }
    a
}

/// Tridiagonal second-difference matrix with the lateral boundary rule.
fn second_difference(n: usize, neumann: bool) -> DMatrix<C64> {
    let mut d = DMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        d[(i, i)] = C64::new(-2.0, 0.0);
        if i > 0 {
            d[(i, i - 1)] = ONE;
        }
        if i + 1 < n {
            d[(i, i + 1)] = ONE;
        }
    }
    if neumann && n >= 2 {
        d[(0, 1)] = C64::new(2.0, 0.0);
        d[(n - 1, n - 2)] = C64::new(2.0, 0.0);
    }
    d
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

fn lateral_poly(st: &LateralStencil, dx: &DMatrix<C64>, dy: &DMatrix<C64>) -> DMatrix<C64> {
    let (p0, p1, p2) = st.poly();
    let ix = DMatrix::identity(dx.nrows(), dx.nrows());
    let iy = DMatrix::identity(dy.nrows(), dy.nrows());
    kron(&ix, &iy) * p0 + (kron(dx, &iy) + kron(&ix, dy)) * p1 + kron(dx, dy) * p2
}

fn kronecker(disc: &Discretization, order: Order) -> DMatrix<C64> {
    let [nx, ny, nz] = disc.grid.n;
    let neumann = disc.bc.lateral_kind() == FaceKind::Neumann;
    let dx = second_difference(nx, neumann);
    let dy = second_difference(ny, neumann);
    let (p, q) = plane_stencils(disc, order);
    let pl = lateral_poly(&p, &dx, &dy);
    let ql = lateral_poly(&q, &dx, &dy);
    // z structure: shift matrices with the ghost rows removed, then the plans
    let mut shift = DMatrix::from_element(nz, nz, ZERO);
    for l in 0..nz.saturating_sub(1) {
        shift[(l, l + 1)] = ONE;
        shift[(l + 1, l)] = ONE;
    }
    let iz = DMatrix::identity(nz, nz);
    let mut a = kron(&pl, &shift) + kron(&ql, &iz);
    for (end, face) in [(0usize, Face::BOTTOM), (1, Face::TOP)] {
        if let Some(plan) = z_plan(disc, face, order) {
            let (row, mirror) = if end == 0 { (0, 1) } else { (nz - 1, nz - 2) };
            let mut e_mirror = DMatrix::from_element(nz, nz, ZERO);
            e_mirror[(row, mirror)] = ONE;
            let mut e_same = DMatrix::from_element(nz, nz, ZERO);
            e_same[(row, row)] = ONE;
            a += kron(&lateral_poly(&plan.mirror, &dx, &dy), &e_mirror);
            a += kron(&lateral_poly(&plan.same, &dx, &dy), &e_same);
        }
    }
    a
}

/// The all-Dirichlet sixth-order operator written literally as
/// `sum D_a + c1 sum D_a D_b + c2 Dx Dy Dz + c0 I`.
pub fn kronecker_all_dirichlet(n: usize, k: C64, h: f64) -> DMatrix<C64> {
    let d = second_difference(n, false);
    let i = DMatrix::<C64>::identity(n, n);
    let dx = kron(&kron(&d, &i), &i);
    let dy = kron(&kron(&i, &d), &i);
    let dz = kron(&kron(&i, &i), &d);
    let c = Coefficients::new(k * k, h);
    let id = DMatrix::<C64>::identity(n * n * n, n * n * n);
    &dx + &dy + &dz
        + (&dx * &dy + &dx * &dz + &dy * &dz) * c.c1
        + &dx * &dy * &dz * c.c2
        + id * c.c0
}

/// Dense right-hand side built independently of the matrix-free assembly:
/// interior terms, a neighbour walk over Dirichlet boundary nodes and the
/// ghost sources.
pub fn dense_rhs(disc: &Discretization, order: Order) -> Result<Vec<C64>> {
    let g = &disc.grid;
    let n = disc.len();
    guard(n)?;
    let [nx, ny, nz] = g.n;
    let h = g.h;
    let kh2 = disc.k.k2 * h * h;
    let neumann = disc.bc.lateral_kind() == FaceKind::Neumann;
    let (p, q) = plane_stencils(disc, order);
    let plans = [z_plan(disc, Face::BOTTOM, order), z_plan(disc, Face::TOP, order)];
    let src = disc.source.as_ref();
    let mut f = vec![ZERO; n];
    let mut vals = vec![ZERO; VOLUME_ORDERS.len()];
    // physical coordinates of the extended lattice
    let coord = |axis: Axis, idx: isize| g.coord(axis, idx);
    let boundary_value = |i: isize, j: isize, l: isize| {
        disc.bc.dirichlet_value(
            [coord(Axis::X, i), coord(Axis::Y, j), coord(Axis::Z, l)],
            g.extent,
        )
    };
    for i in 0..nx {
        for j in 0..ny {
            for l in 0..nz {
                let row = g.index(i, j, l);
                let pt = g.point(i, j, l);
                f[row] = match order {
                    Order::Second => h * h * src.derivative([0, 0, 0], pt),
                    Order::Sixth => {
                        src.derivatives(&VOLUME_ORDERS, pt, &mut vals);
                        let lap: C64 = vals[1] + vals[2] + vals[3];
                        let pure4: C64 = vals[4] + vals[5] + vals[6];
                        let mixed4: C64 = vals[7] + vals[8] + vals[9];
                        h * h
                            * (vals[0] * (1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0)
                                + lap * (h * h / 12.0) * (1.0 - kh2 / 30.0)
                                + pure4 * h.powi(4) / 360.0
                                + mixed4 * h.powi(4) / 90.0)
                    }
                };
                // known boundary values reached by the stencil (directly or through a plan)
                let mut fold = |di: isize, dj: isize, ll: isize, w: C64| {
                    let ia = i as isize + di;
                    let ja = j as isize + dj;
                    let ri = reflect(ia, nx, neumann);
                    let rj = reflect(ja, ny, neumann);
                    let lateral_known = ri.is_none() || rj.is_none();
                    let z_known = ll < 0 || ll >= nz as isize;
                    if lateral_known || z_known {
                        let xi = ri.map_or(ia, |v| v as isize);
                        let yj = rj.map_or(ja, |v| v as isize);
                        f[row] -= w * boundary_value(xi, yj, ll);
                    }
                };
                for di in -1..=1isize {
                    for dj in -1..=1isize {
                        fold(di, dj, l as isize, lateral_weight(&q, di, dj));
                        for (dl, end) in [(-1isize, 0usize), (1, 1)] {
                            let ll = l as isize + dl;
                            let inside = (0..nz as isize).contains(&ll);
                            match (inside, plans[end]) {
                                (true, _) | (false, None) => fold(di, dj, ll, lateral_weight(&p, di, dj)),
                                (false, Some(plan)) => {
                                    let (m, s) = if end == 0 { (1, 0) } else { (nz as isize - 2, nz as isize - 1) };
                                    fold(di, dj, m, lateral_weight(&plan.mirror, di, dj));
                                    fold(di, dj, s, lateral_weight(&plan.same, di, dj));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for face in Face::ALL {
        let kind = disc.bc.kind(face);
        if kind == FaceKind::Dirichlet {
            continue;
        }
        let cond = disc.bc.face(face);
        let a = face.axis.index();
        let fixed = if face.side == Side::Low { 0 } else { g.n[a] - 1 };
        for (row, v) in f.iter_mut().enumerate() {
            let (i, j, l) = g.unindex(row);
            if [i, j, l][a] != fixed {
                continue;
            }
            let pt = g.point(i, j, l);
            let s = match order {
                Order::Sixth => FaceSource::eval(src, face, pt),
                Order::Second => FaceSource::default(),
            };
            let d = FaceDataPack::eval(cond, pt, order == Order::Sixth);
            *v -= ghost_source(kind, order, &disc.k, h, &s, &d);
        }
    }
    if neumann && order == Order::Sixth {
        for (row, v) in f.iter_mut().enumerate() {
            let (i, j, l) = g.unindex(row);
            *v -= reflection_term(disc, [i, j, l], (&p, &q), plans);
        }
    }
    Ok(f)
}

/// Ghost values reached across lateral Neumann faces, weighted as the
/// operator weights them, minus the same ghosts under the plain `P, Q, P`
/// weights that the face sources assume. Zero away from lateral edges and
/// z-plan rows.
fn reflection_term(
    disc: &Discretization,
    [i, j, l]: [usize; 3],
    (p, q): (&LateralStencil, &LateralStencil),
    plans: [Option<GhostPlan>; 2],
) -> C64 {
    let g = &disc.grid;
    let [nx, ny, nz] = g.n;
    let lateral_face = |axis: Axis, idx: isize, n: usize| -> Option<(Face, isize)> {
        if idx < 0 {
            Some((Face::new(axis, Side::Low), 0))
        } else if idx >= n as isize {
            Some((Face::new(axis, Side::High), n as isize - 1))
        } else {
            None
        }
    };
    let jump = |face: Face, x: isize, y: isize, z: isize| {
        let pt = [g.coord(Axis::X, x), g.coord(Axis::Y, y), g.coord(Axis::Z, z)];
        let s = FaceSource::eval(disc.source.as_ref(), face, pt);
        let d = FaceDataPack::eval(disc.bc.face(face), pt, true);
        neumann_jump(disc.k.k2, g.h, &s, &d)
    };
    // jump accumulated along the x-then-y reflection path
    let deficit = |ia: isize, ja: isize, z: isize, reflect_first: bool| {
        let mut total = ZERO;
        let mut x = ia;
        if let Some((face, fx)) = lateral_face(Axis::X, ia, nx) {
            total += jump(face, fx, ja, z);
            if reflect_first {
                x = 2 * fx - ia;
            }
        }
        if let Some((face, fy)) = lateral_face(Axis::Y, ja, ny) {
            total += jump(face, x, fy, z);
        }
        total
    };
    // (z index, stencil) pairs as the operator applies them on this row
    let mut applied: Vec<(isize, LateralStencil)> = vec![(l as isize, *q)];
    for (dl, end) in [(-1isize, 0usize), (1, 1)] {
        let ll = l as isize + dl;
        match ((0..nz as isize).contains(&ll), plans[end]) {
            (true, _) | (false, None) => applied.push((ll, *p)),
            (false, Some(plan)) => {
                let (m, s) = if end == 0 { (1, 0) } else { (nz as isize - 2, nz as isize - 1) };
                applied.push((m, plan.mirror));
                applied.push((s, plan.same));
            }
        }
    }
    let assumed = [(l as isize - 1, *p), (l as isize, *q), (l as isize + 1, *p)];
    let mut out = ZERO;
    for di in -1..=1isize {
        for dj in -1..=1isize {
            let (ia, ja) = (i as isize + di, j as isize + dj);
            if (0..nx as isize).contains(&ia) && (0..ny as isize).contains(&ja) {
                continue;
            }
            for (ll, st) in &applied {
                out += lateral_weight(st, di, dj) * deficit(ia, ja, *ll, true);
            }
            for (ll, st) in &assumed {
                out -= lateral_weight(st, di, dj) * deficit(ia, ja, *ll, false);
            }
        }
    }
    out
}

/// Solves `A u = f` by LU with partial pivoting.
pub fn dense_solve(op: &DenseOperator, f: &[C64]) -> Result<Vec<C64>> {
    guard(op.n)?;
    let lu = op.entries.clone().lu();
    let b = nalgebra::DVector::from_column_slice(f);
    let x = lu.solve(&b).ok_or(Error::Singular)?;
    Ok(x.iter().copied().collect())
}

/// Eigenvalues sorted by real part, then imaginary part.
pub fn dense_eigs(op: &DenseOperator) -> Result<Vec<C64>> {
    guard(op.n)?;
    let m = &op.entries;
    let hermitian = m.iter().all(|z| z.is_finite()) && (m - m.adjoint()).camax() <= 1e-14 * m.camax();
    let mut ev: Vec<C64> = if hermitian {
        nalgebra::SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .map(|&v| C64::new(v, 0.0))
            .collect()
    } else {
        let (_, t) = nalgebra::Schur::new(m.clone()).unpack();
        (0..op.n).map(|i| t[(i, i)]).collect()
    };
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

pub fn dense_multiply(op: &DenseOperator, x: &[C64]) -> Vec<C64> {
    let v = nalgebra::DVector::from_column_slice(x);
    (&op.entries * v).iter().copied().collect()
}

/// Outcome of one self-test check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_rel_err: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: String, err: f64, tol: f64) -> Self {
        Check {
            name,
            max_rel_err: err,
            tol,
            passed: err <= tol,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SelfTestReport {
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .max_by(|a, b| (a.max_rel_err / a.tol).total_cmp(&(b.max_rel_err / b.tol)))
    }
}

/// Relative tolerance of the oracle comparisons.
pub const SELFTEST_TOL: f64 = 1e-11;

fn rel_err(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Random smooth source and face data for right-hand side checks.
struct Polynomial3 {
    c: [f64; 4],
}

impl SourceModel for Polynomial3 {
    fn derivative(&self, order: [usize; 3], p: [f64; 3]) -> C64 {
        // f = prod_a (c0 + c1 t + c2 t^2 + c3 t^3 + t^4)
        let one = |o: usize, t: f64| -> f64 {
            let c = &self.c;
            match o {
                0 => c[0] + c[1] * t + c[2] * t * t + c[3] * t.powi(3) + t.powi(4),
                1 => c[1] + 2.0 * c[2] * t + 3.0 * c[3] * t * t + 4.0 * t.powi(3),
                2 => 2.0 * c[2] + 6.0 * c[3] * t + 12.0 * t * t,
                3 => 6.0 * c[3] + 24.0 * t,
                4 => 24.0,
                _ => 0.0,
            }
        };
        C64::new(one(order[0], p[0]) * one(order[1], p[1]) * one(order[2], p[2]), 0.0)
    }

    fn provides(&self, _order: [usize; 3]) -> bool {
        true
    }
}

fn combos() -> Vec<(FaceKind, FaceKind, FaceKind)> {
    let mut v = Vec::new();
    for lat in [FaceKind::Dirichlet, FaceKind::Neumann] {
        for bottom in [FaceKind::Dirichlet, FaceKind::Neumann, FaceKind::Sommerfeld] {
            for top in [FaceKind::Dirichlet, FaceKind::Neumann, FaceKind::Sommerfeld] {
                v.push((lat, bottom, top));
            }
        }
    }
    v
}

fn kind_tag(k: FaceKind) -> char {
    match k {
        FaceKind::Dirichlet => 'D',
        FaceKind::Neumann => 'N',
        FaceKind::Sommerfeld => 'S',
    }
}

fn data_condition(kind: FaceKind, phase: f64) -> FaceCondition {
    let data = move |p: [f64; 3]| C64::new(1.0 + p[0] - 0.5 * p[1] + 0.3 * p[2], phase * p[0] * p[1]);
    FaceCondition::homogeneous(kind).with_data(Arc::new(data))
}

/// Small problem with per-axis lateral unknown count `n_lat`.
pub fn small_problem(
    lateral: FaceKind,
    bottom: FaceKind,
    top: FaceKind,
    n_lat: usize,
    k: C64,
    with_data: bool,
) -> Result<Discretization> {
    let intervals = match lateral {
        FaceKind::Neumann => n_lat - 1,
        _ => n_lat + 1,
    };
    let cond = |kind: FaceKind, phase: f64| {
        if with_data && kind == FaceKind::Dirichlet {
            data_condition(kind, phase)
        } else {
            FaceCondition::homogeneous(kind)
        }
    };
    let bc = BoundaryConfig::lateral(cond(lateral, 0.2), cond(bottom, 0.3), cond(top, -0.1));
    let grid = Grid::unit(intervals, &bc)?;
    let source: Arc<dyn SourceModel> = Arc::new(Polynomial3 {
        c: [0.3, -1.0, 0.5, 0.25],
    });
    validate_setup(grid, Wavenumber::new(k)?, bc, source)
}

/// Matrix-free operators, right-hand sides and the fast solver against the
/// dense oracle, and closed-form spectra against dense eigensolves, for
/// every boundary combination and per-axis sizes `sizes`.
pub fn selftest(seed: u64, sizes: std::ops::RangeInclusive<usize>) -> Result<SelfTestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelfTestReport::default();
    let k = C64::new(1.1, 0.05);
    for n_lat in sizes.clone() {
        for (lat, bottom, top) in combos() {
            let tag = format!("{}{}{} N={n_lat}", kind_tag(lat), kind_tag(bottom), kind_tag(top));
            let disc = small_problem(lat, bottom, top, n_lat, k, true)?;
            let n = disc.len();
            for order in [Order::Sixth, Order::Second] {
                let name = if order == Order::Sixth { "A6" } else { "A2" };
                let walk = assemble_dense(&disc, order, Construction::StencilWalk)?;
                let kron = assemble_dense(&disc, order, Construction::Kronecker)?;
                let diff = (&walk.entries - &kron.entries).camax() / walk.entries.camax();
                report.checks.push(Check::new(format!("{name} walk vs kronecker {tag}"), diff, 1e-13));
                let mut worst: f64 = 0.0;
                let mut y = vec![ZERO; n];
                for _ in 0..20 {
                    let x = random_vector(&mut rng, n);
                    match order {
                        Order::Sixth => disc.apply_a6(&x, &mut y),
                        Order::Second => disc.apply_a2(&x, &mut y),
                    }
                    worst = worst.max(rel_err(&y, &dense_multiply(&walk, &x)));
                }
                report.checks.push(Check::new(format!("{name} apply {tag}"), worst, SELFTEST_TOL));
                let rhs = match order {
                    Order::Sixth => disc.assemble_rhs(),
                    Order::Second => disc.assemble_rhs_a2(),
                };
                let dense = dense_rhs(&disc, order)?;
                report.checks.push(Check::new(format!("{name} rhs {tag}"), rel_err(&rhs.data, &dense), SELFTEST_TOL));
                if order == Order::Second {
                    let yv = random_vector(&mut rng, n);
                    let mut u = vec![ZERO; n];
                    disc.precondition_solve(&yv, &mut u)?;
                    let ud = dense_solve(&walk, &yv)?;
                    report.checks.push(Check::new(format!("fast solve {tag}"), rel_err(&u, &ud), SELFTEST_TOL));
                }
            }
        }
        report.checks.extend(spectral_checks(n_lat)?);
    }
    Ok(report)
}

/// Closed-form eigenvalues against dense eigensolves for the all-Dirichlet
/// operators in 1D and 3D.
pub fn spectral_checks(n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let k = C64::new(1.3, 0.0);
    let h = 1.0 / (n + 1) as f64;
    let disc = small_problem(FaceKind::Dirichlet, FaceKind::Dirichlet, FaceKind::Dirichlet, n, k, false)?;
    for (order, which, name) in [(Order::Sixth, Which::A, "A6"), (Order::Second, Which::Ap, "A2")] {
        let dense = assemble_dense(&disc, order, Construction::StencilWalk)?;
        let numeric = dense_eigs(&dense)?;
        let mut closed: Vec<C64> = Vec::with_capacity(n * n * n);
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    closed.push(eig_3d(a, b, c, n, k, h, which));
                }
            }
        }
        closed.sort_by(|a, b| a.re.total_cmp(&b.re));
        let scale = closed.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = numeric
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        out.push(Check::new(format!("{name} eigenvalues 3D N={n}"), err, SELFTEST_TOL));
    }
    let kron = kronecker_all_dirichlet(n, k, h);
    let walk = assemble_dense(&disc, Order::Sixth, Construction::StencilWalk)?;
    let diff = (&kron - &walk.entries).camax() / walk.entries.camax();
    out.push(Check::new(format!("A6 literal kronecker N={n}"), diff, 1e-13));

    // one dimension: tridiagonal (d1, d2, d1) and (1, k^2h^2 - 2, 1)
    let kh2 = k * k * h * h;
    for (which, off, diag, name) in [
        (Which::A, ONE - kh2 * kh2 / 360.0, -2.0 + kh2 - 7.0 * kh2 * kh2 / 90.0, "A6"),
        (Which::Ap, ONE, kh2 - 2.0, "A2"),
    ] {
        let mut m = DMatrix::from_element(n, n, ZERO);
        for i in 0..n {
            m[(i, i)] = diag;
            if i + 1 < n {
                m[(i, i + 1)] = off;
                m[(i + 1, i)] = off;
            }
        }
        let op = DenseOperator {
            n,
            entries: m,
            construction: Construction::StencilWalk,
        };
        let numeric = dense_eigs(&op)?;
        let mut closed: Vec<C64> = (1..=n).map(|j| eig_1d(j, n, k, h, which)).collect();
        closed.sort_by(|a, b| a.re.total_cmp(&b.re));
        let err = numeric
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / closed.iter().map(|z| z.norm()).fold(0.0, f64::max);
        out.push(Check::new(format!("{name} eigenvalues 1D N={n}"), err, SELFTEST_TOL));
    }
    Ok(out)
}
