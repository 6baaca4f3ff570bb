//! Manufactured solutions `u` with closed-form derivatives and the matching
//! sources `f = laplacian(u) + k^2 u`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::discretization::{validate_setup, Discretization};
use crate::domain::{
    BoundaryConfig, Face, FaceCondition, FaceData, FaceKind, Grid, SourceModel, Wavenumber,
    C64,
};
use crate::error::{Error, Result};
use crate::operator::{validate_setup_1d, Discretization1d};

const PI: f64 = std::f64::consts::PI;
const I: C64 = C64::new(0.0, 1.0);

/// A function of one variable with derivatives of every order.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// `sum c_i t^i`
    Poly(Vec<f64>),
    /// `sin(c t)`
    Sin(C64),
    /// `cos(c t)`
    Cos(C64),
    /// Polynomial times `sin(c t)` or `cos(c t)`.
    PolyTrig { poly: Vec<f64>, trig: Box<Factor> },
    /// `constant + sum a e^{b t}` over `(a, b)` terms.
    ExpSum { terms: Vec<(C64, C64)>, constant: C64 },
}

fn poly_derivs(c: &[f64], t: f64, out: &mut [C64]) {
    // Horner on the successive derivative coefficient lists
    let mut coeffs: Vec<f64> = c.to_vec();
    for o in out.iter_mut() {
        let v = coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a);
        *o = C64::new(v, 0.0);
        if coeffs.len() > 1 {
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect();
        } else {
            coeffs = vec![0.0];
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Factor {
    /// Writes derivatives of orders `0..out.len()` at `t`.
    pub fn derivs(&self, t: f64, out: &mut [C64]) {
        match self {
            Factor::Poly(c) => poly_derivs(c, t, out),
            Factor::Sin(c) | Factor::Cos(c) => {
                let (s, co) = ((c * t).sin(), (c * t).cos());
                // cycle of d/dt on (sin, cos): sin, cos, -sin, -cos
                let cycle = match self {
                    Factor::Sin(_) => [s, co, -s, -co],
                    _ => [co, -s, -co, s],
                };
                let mut pow = C64::new(1.0, 0.0);
                for (n, o) in out.iter_mut().enumerate() {
                    *o = pow * cycle[n % 4];
                    pow *= c;
                }
            }
            Factor::PolyTrig { poly, trig } => {
                let m = out.len();
                let mut p = vec![C64::new(0.0, 0.0); m];
                let mut g = vec![C64::new(0.0, 0.0); m];
                poly_derivs(poly, t, &mut p);
                trig.derivs(t, &mut g);
                let deg = poly.len().saturating_sub(1);
                for (n, o) in out.iter_mut().enumerate() {
                    *o = (0..=n.min(deg))
                        .map(|j| binomial(n, j) * p[j] * g[n - j])
                        .sum();
                }
            }
            Factor::ExpSum { terms, constant } => {
                out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
                out[0] = *constant;
                for (a, b) in terms {
                    let mut v = a * (b * t).exp();
                    for o in out.iter_mut() {
                        *o += v;
                        v *= b;
                    }
                }
            }
        }
    }

    pub fn deriv(&self, n: usize, t: f64) -> C64 {
        let mut buf = vec![C64::new(0.0, 0.0); n + 1];
        self.derivs(t, &mut buf);
        buf[n]
    }

    pub fn one() -> Self {
        Factor::Poly(vec![1.0])
    }
}

/// `u(x, y, z) = phi_x(x) phi_y(y) phi_z(z)`; in one dimension only `phi_x`
/// is used.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableField {
    pub factors: [Factor; 3],
    pub dimension: usize,
}

/// Highest derivative order any closure asks for, plus the two orders the
/// Laplacian adds.
const MAX_ORDER: usize = 7;

impl SeparableField {
    pub fn value(&self, p: [f64; 3]) -> C64 {
        self.derivative([0, 0, 0], p)
    }

    pub fn derivative(&self, order: [usize; 3], p: [f64; 3]) -> C64 {
        (0..self.dimension)
            .map(|a| self.factors[a].deriv(order[a], p[a]))
            .product::<C64>()
            * if order[self.dimension..].iter().any(|&o| o > 0) { 0.0 } else { 1.0 }
    }

    fn tables(&self, p: [f64; 3], max: usize) -> [[C64; MAX_ORDER + 3]; 3] {
        let mut t = [[C64::new(0.0, 0.0); MAX_ORDER + 3]; 3];
        for a in 0..3 {
            if a < self.dimension {
                self.factors[a].derivs(p[a], &mut t[a][..=max]);
            } else {
                t[a][0] = C64::new(1.0, 0.0);
            }
        }
        t
    }
}

/// `f = laplacian(u) + k^2 u` for a separable `u`.
#[derive(Clone, Debug)]
pub struct HelmholtzImage {
    pub u: Arc<SeparableField>,
    pub k2: C64,
}

impl SourceModel for HelmholtzImage {
    fn derivative(&self, order: [usize; 3], p: [f64; 3]) -> C64 {
        let mut out = [C64::new(0.0, 0.0)];
        self.derivatives(&[order], p, &mut out);
        out[0]
    }

    fn provides(&self, order: [usize; 3]) -> bool {
        order.iter().max().copied().unwrap_or(0) <= MAX_ORDER
    }

    fn derivatives(&self, orders: &[[usize; 3]], p: [f64; 3], out: &mut [C64]) {
        let max = orders.iter().flat_map(|o| o.iter()).copied().max().unwrap_or(0) + 2;
        let t = self.u.tables(p, max.min(MAX_ORDER + 2));
        let dim = self.u.dimension;
        for (o, v) in orders.iter().zip(out.iter_mut()) {
            let base = t[0][o[0]] * t[1][o[1]] * t[2][o[2]];
            let mut lap = C64::new(0.0, 0.0);
            for a in 0..dim {
                let mut oo = *o;
                oo[a] += 2;
                lap += t[0][oo[0]] * t[1][oo[1]] * t[2][oo[2]];
            }
            *v = lap + self.k2 * base;
        }
    }
}

/// Boundary data of one face taken from the exact solution.
#[derive(Clone, Debug)]
pub struct ExactFaceData {
    pub u: Arc<SeparableField>,
    pub face: Face,
    pub kind: FaceKind,
    pub k: C64,
}

impl FaceData for ExactFaceData {
    fn eval(&self, p: [f64; 3], tangential: [usize; 2]) -> C64 {
        let mut order = [0; 3];
        let [t, s] = self.face.axis.tangential();
        order[t.index()] = tangential[0];
        order[s.index()] = tangential[1];
        let a = self.face.axis.index();
        let normal = |o: [usize; 3]| {
            let mut o2 = o;
            o2[a] += 1;
            self.face.outward_sign() * self.u.derivative(o2, p)
        };
        match self.kind {
            FaceKind::Dirichlet => self.u.derivative(order, p),
            FaceKind::Neumann => normal(order),
            FaceKind::Sommerfeld => normal(order) - I * self.k * self.u.derivative(order, p),
        }
    }

    fn provides(&self, tangential: [usize; 2]) -> bool {
        tangential.iter().all(|&o| o <= MAX_ORDER)
    }
}

/// The manufactured problem families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `u = x(1-x) cos(k pi x)` on `[0, 1]`, Dirichlet ends.
    Dirichlet1d,
    /// `u = x^3(1-x)^3 y(1-y) cos(k pi y) sin(k pi z)`, Dirichlet on all faces.
    Dirichlet3d,
    /// `sin(k pi z)` replaced by `cos(k pi z)`; Neumann at `z = 0`, Dirichlet
    /// elsewhere.
    DirichletNeumann3d,
    /// `phi_z = e^{ik(z+1)} + e^{-ik(z-1)} - 2`; radiation conditions on both
    /// z-faces, Dirichlet on the sides.
    DirichletSommerfeld3d,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Dirichlet1d,
        Family::Dirichlet3d,
        Family::DirichletNeumann3d,
        Family::DirichletSommerfeld3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dirichlet1d => "dirichlet-1d",
            Family::Dirichlet3d => "dirichlet-3d",
            Family::DirichletNeumann3d => "dirichlet-neumann-3d",
            Family::DirichletSommerfeld3d => "dirichlet-sommerfeld-3d",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Family::Dirichlet1d => 1,
            _ => 3,
        }
    }

    /// Kinds at z = 0 and z = a; lateral faces are Dirichlet.
    pub fn z_kinds(self) -> [FaceKind; 2] {
        match self {
            Family::DirichletNeumann3d => [FaceKind::Neumann, FaceKind::Dirichlet],
            Family::DirichletSommerfeld3d => [FaceKind::Sommerfeld, FaceKind::Sommerfeld],
            _ => [FaceKind::Dirichlet, FaceKind::Dirichlet],
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown problem `{s}`")))
    }
}

/// A test problem with known solution.
#[derive(Clone, Debug)]
pub struct ManufacturedProblem {
    pub family: Family,
    pub k: C64,
    pub exact: Arc<SeparableField>,
    pub source: Arc<HelmholtzImage>,
}

impl ManufacturedProblem {
    pub fn new(family: Family, k: C64) -> Self {
        let kpi = k * PI;
        let y_factor = Factor::PolyTrig {
            poly: vec![0.0, 1.0, -1.0],
            trig: Box::new(Factor::Cos(kpi)),
        };
        let factors = match family {
            Family::Dirichlet1d => [y_factor, Factor::one(), Factor::one()],
            Family::Dirichlet3d => [
                Factor::Poly(vec![0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0]),
                y_factor,
                Factor::Sin(kpi),
            ],
            Family::DirichletNeumann3d => [
                Factor::Poly(vec![0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0]),
                y_factor,
                Factor::Cos(kpi),
            ],
            Family::DirichletSommerfeld3d => {
                let e = (I * k).exp();
                [
                    Factor::Poly(vec![0.0, 0.0, 0.0, 1.0, -3.0, 3.0, -1.0]),
                    y_factor,
                    Factor::ExpSum {
                        terms: vec![(e, I * k), (e, -I * k)],
                        constant: C64::new(-2.0, 0.0),
                    },
                ]
            }
        };
        let exact = Arc::new(SeparableField {
            factors,
            dimension: family.dimension(),
        });
        let source = Arc::new(HelmholtzImage {
            u: exact.clone(),
            k2: k * k,
        });
        ManufacturedProblem {
            family,
            k,
            exact,
            source,
        }
    }

    pub fn name(&self) -> String {
        if self.k.im == 0.0 {
            format!("{}(k={})", self.family.name(), self.k.re)
        } else {
            format!("{}(k={}{:+}i)", self.family.name(), self.k.re, self.k.im)
        }
    }

    pub fn exact_at(&self, p: [f64; 3]) -> C64 {
        self.exact.value(p)
    }

    /// Boundary configuration with data sampled from the exact solution.
    pub fn boundary(&self) -> BoundaryConfig {
        let kinds = self.family.z_kinds();
        let mut bc = BoundaryConfig::all_dirichlet();
        for face in Face::ALL {
            let kind = match face {
                Face::BOTTOM => kinds[0],
                Face::TOP => kinds[1],
                _ => FaceKind::Dirichlet,
            };
            let data = ExactFaceData {
                u: self.exact.clone(),
                face,
                kind,
                k: self.k,
            };
            bc = bc.with_face(face, FaceCondition::homogeneous(kind).with_data(Arc::new(data)));
        }
        bc
    }

    /// Three-dimensional discretisation on the unit cube with step `1/intervals`.
    pub fn discretize(&self, intervals: usize) -> Result<Discretization> {
        if self.family.dimension() != 3 {
            return Err(Error::Config(format!("{} is one-dimensional", self.family.name())));
        }
        let bc = self.boundary();
        let grid = Grid::unit(intervals, &bc)?;
        validate_setup(grid, Wavenumber::new(self.k)?, bc, self.source.clone())
    }

    pub fn discretize_1d(&self, intervals: usize) -> Result<Discretization1d> {
        if self.family.dimension() != 1 {
            return Err(Error::Config(format!("{} is three-dimensional", self.family.name())));
        }
        let ends = [self.exact_at([0.0; 3]), self.exact_at([1.0, 0.0, 0.0])];
        validate_setup_1d(intervals, Wavenumber::new(self.k)?, self.source.clone(), ends)
    }

    /// `max |U - u|` over the unknowns.
    pub fn exact_error(&self, disc: &Discretization, u: &[C64]) -> f64 {
        let grid = &disc.grid;
        u
            .par_iter()
            .enumerate()
            .map(|(n, v)| {
                let (i, j, l) = grid.unindex(n);
                (v - self.exact_at(grid.point(i, j, l))).norm()
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn exact_error_1d(&self, disc: &Discretization1d, u: &[C64]) -> f64 {
        u.iter()
            .enumerate()
            .map(|(i, v)| (v - self.exact_at([disc.x(i as isize), 0.0, 0.0])).norm())
            .fold(0.0, f64::max)
    }
}

/// Wavenumbers of the catalog.
pub const CATALOG_KS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];

/// Complex wavenumber of the lossy-medium example.
pub const LOSSY_K: C64 = C64::new(35.7, 0.43);

/// Every family at every real catalog wavenumber, plus the radiation family
/// at the complex wavenumber.
pub fn problem_catalog() -> Vec<ManufacturedProblem> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for k in CATALOG_KS {
            out.push(ManufacturedProblem::new(family, C64::new(k, 0.0)));
        }
    }
    out.push(ManufacturedProblem::new(Family::DirichletSommerfeld3d, LOSSY_K));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_trig_matches_finite_differences() {
        let f = Factor::PolyTrig {
            poly: vec![0.0, 1.0, -1.0],
            trig: Box::new(Factor::Cos(C64::new(3.0, 0.2))),
        };
        let t = 0.37;
        let eps = 1e-5;
        for n in 0..5 {
            let fd = (f.deriv(n, t + eps) - f.deriv(n, t - eps)) / (2.0 * eps);
            let exact = f.deriv(n + 1, t);
            assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()), "order {n}");
        }
    }

    #[test]
    fn one_d_value_at_midpoint() {
        let p = ManufacturedProblem::new(Family::Dirichlet1d, C64::new(20.0, 0.0));
        assert!((p.exact_at([0.5, 0.0, 0.0]) - 0.25).norm() < 1e-12);
    }

    #[test]
    fn catalog_has_every_family_and_the_lossy_case() {
        let c = problem_catalog();
        assert_eq!(c.len(), 21);
        assert!(c.iter().any(|p| p.k == LOSSY_K));
    }
}
