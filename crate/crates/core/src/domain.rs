//! Grid, wavenumber, boundary, field and source types shared by every solver
//! component.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Points-per-wavelength limit on `|k| h`: at least ten points per wavelength.
pub const PPW_LIMIT: f64 = 2.0 * std::f64::consts::PI / 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining axes, in x, y, z order.
    pub fn tangential(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Low,
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub axis: Axis,
    pub side: Side,
}

impl Face {
    pub const fn new(axis: Axis, side: Side) -> Self {
        Face { axis, side }
    }

    /// Faces in the order x=0, x=a, y=0, y=a, z=0, z=a.
    pub const ALL: [Face; 6] = [
        Face::new(Axis::X, Side::Low),
        Face::new(Axis::X, Side::High),
        Face::new(Axis::Y, Side::Low),
        Face::new(Axis::Y, Side::High),
        Face::new(Axis::Z, Side::Low),
        Face::new(Axis::Z, Side::High),
    ];

    pub const BOTTOM: Face = Face::new(Axis::Z, Side::Low);
    pub const TOP: Face = Face::new(Axis::Z, Side::High);

    pub fn slot(self) -> usize {
        2 * self.axis.index() + usize::from(self.side == Side::High)
    }

    /// +1 for the high face, -1 for the low face: the sign of the outward
    /// normal along `axis`.
    pub fn outward_sign(self) -> f64 {
        match self.side {
            Side::Low => -1.0,
            Side::High => 1.0,
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = match self.axis {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        let side = match self.side {
            Side::Low => "0",
            Side::High => "a",
        };
        write!(f, "{axis}={side}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    /// `u = g`
    Dirichlet,
    /// `du/dn = g` with `n` the outward normal
    Neumann,
    /// `du/dn - i k u = g` with `n` the outward normal
    Sommerfeld,
}

/// Data prescribed on one face.
///
/// Tangential derivative orders refer to the two remaining axes in x, y, z
/// order, so for a z-face `[2, 0]` is the second x-derivative.
pub trait FaceData: Send + Sync {
    fn eval(&self, p: [f64; 3], tangential: [usize; 2]) -> C64;

    fn provides(&self, tangential: [usize; 2]) -> bool {
        tangential == [0, 0]
    }
}

impl<F> FaceData for F
where
    F: Fn([f64; 3]) -> C64 + Send + Sync,
{
    fn eval(&self, p: [f64; 3], tangential: [usize; 2]) -> C64 {
        if tangential == [0, 0] {
            self(p)
        } else {
            C64::new(f64::NAN, f64::NAN)
        }
    }
}

/// Boundary condition of one face. `data = None` means homogeneous data.
#[derive(Clone)]
pub struct FaceCondition {
    pub kind: FaceKind,
    pub data: Option<Arc<dyn FaceData>>,
}

impl FaceCondition {
    pub fn dirichlet() -> Self {
        Self::homogeneous(FaceKind::Dirichlet)
    }

    pub fn neumann() -> Self {
        Self::homogeneous(FaceKind::Neumann)
    }

    pub fn sommerfeld() -> Self {
        Self::homogeneous(FaceKind::Sommerfeld)
    }

    pub fn homogeneous(kind: FaceKind) -> Self {
        FaceCondition { kind, data: None }
    }

    pub fn with_data(mut self, data: Arc<dyn FaceData>) -> Self {
        self.data = Some(data);
        self
    }

    pub fn is_dirichlet(&self) -> bool {
        self.kind == FaceKind::Dirichlet
    }
}

impl fmt::Debug for FaceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FaceCondition")
            .field("kind", &self.kind)
            .field("data", &self.data.as_ref().map(|_| ".."))
            .finish()
    }
}

/// Boundary conditions on the six faces of the cube.
#[derive(Clone, Debug)]
pub struct BoundaryConfig {
    faces: [FaceCondition; 6],
}

impl BoundaryConfig {
    pub fn uniform(cond: FaceCondition) -> Self {
        BoundaryConfig {
            faces: std::array::from_fn(|_| cond.clone()),
        }
    }

    pub fn all_dirichlet() -> Self {
        Self::uniform(FaceCondition::dirichlet())
    }

    /// Same condition on the four x/y faces, separate conditions at z=0 and z=a.
    pub fn lateral(lateral: FaceCondition, bottom: FaceCondition, top: FaceCondition) -> Self {
        let mut bc = Self::uniform(lateral);
        bc.faces[Face::BOTTOM.slot()] = bottom;
        bc.faces[Face::TOP.slot()] = top;
        bc
    }

    pub fn with_face(mut self, face: Face, cond: FaceCondition) -> Self {
        self.faces[face.slot()] = cond;
        self
    }

    pub fn face(&self, face: Face) -> &FaceCondition {
        &self.faces[face.slot()]
    }

    pub fn kind(&self, face: Face) -> FaceKind {
        self.face(face).kind
    }

    pub fn lateral_kind(&self) -> FaceKind {
        self.kind(Face::ALL[0])
    }

    pub fn validate(&self) -> Result<()> {
        let lateral = &Face::ALL[..4];
        let first = self.kind(lateral[0]);
        if lateral.iter().any(|&f| self.kind(f) != first) {
            return Err(Error::Config(
                "the four lateral faces must be all Dirichlet or all Neumann".into(),
            ));
        }
        if let Some(f) = lateral
            .iter()
            .find(|&&f| self.kind(f) == FaceKind::Sommerfeld)
        {
            return Err(Error::Config(format!(
                "radiation condition is only supported on z-faces, found on {f}"
            )));
        }
        Ok(())
    }

    /// Value of the Dirichlet data at a boundary point, looked up on the first
    /// Dirichlet face (z faces first) whose plane contains `p`.
    pub fn dirichlet_value(&self, p: [f64; 3], extent: f64) -> C64 {
        let eps = 1e-9 * extent;
        for face in [Face::ALL[4], Face::ALL[5], Face::ALL[0], Face::ALL[1], Face::ALL[2], Face::ALL[3]] {
            let cond = self.face(face);
            if cond.kind != FaceKind::Dirichlet {
                continue;
            }
            let plane = match face.side {
                Side::Low => 0.0,
                Side::High => extent,
            };
            if (p[face.axis.index()] - plane).abs() <= eps {
                return cond
                    .data
                    .as_ref()
                    .map_or(C64::new(0.0, 0.0), |d| d.eval(p, [0, 0]));
            }
        }
        C64::new(0.0, 0.0)
    }
}

/// Uniform lattice on the cube `[0, a]^3` with the same step in every
/// direction.
///
/// Nodes on Dirichlet faces carry known data and are not unknowns; nodes on
/// Neumann and radiation faces are.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub extent: f64,
    pub intervals: usize,
    pub h: f64,
    pub n: [usize; 3],
    offset: [usize; 3],
}

impl Grid {
    /// Grid with `intervals` steps of size `extent / intervals` along each axis.
    pub fn new(extent: f64, intervals: usize, bc: &BoundaryConfig) -> Result<Grid> {
        if !(extent > 0.0) || intervals < 2 {
            return Err(Error::Config(format!(
                "grid needs a positive extent and at least two intervals (got a={extent}, intervals={intervals})"
            )));
        }
        let mut n = [0; 3];
        let mut offset = [0; 3];
        for axis in Axis::ALL {
            let lo = bc.face(Face::new(axis, Side::Low)).is_dirichlet();
            let hi = bc.face(Face::new(axis, Side::High)).is_dirichlet();
            n[axis.index()] = intervals + 1 - usize::from(lo) - usize::from(hi);
            offset[axis.index()] = usize::from(lo);
        }
        Ok(Grid {
            extent,
            intervals,
            h: extent / intervals as f64,
            n,
            offset,
        })
    }

    /// Grid on the unit cube with step `1/intervals`.
    pub fn unit(intervals: usize, bc: &BoundaryConfig) -> Result<Grid> {
        Self::new(1.0, intervals, bc)
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of unknown index `idx` along `axis`; `-1` and `n` address the
    /// layer just outside the unknowns (boundary node or ghost).
    pub fn coord(&self, axis: Axis, idx: isize) -> f64 {
        (idx + self.offset[axis.index()] as isize) as f64 * self.h
    }

    pub fn point(&self, i: usize, j: usize, l: usize) -> [f64; 3] {
        [
            self.coord(Axis::X, i as isize),
            self.coord(Axis::Y, j as isize),
            self.coord(Axis::Z, l as isize),
        ]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + l
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> (usize, usize, usize) {
        let l = idx % self.n[2];
        let rest = idx / self.n[2];
        (rest / self.n[1], rest % self.n[1], l)
    }
}

/// Complex wavenumber with its square cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavenumber {
    pub k: C64,
    pub k2: C64,
}

impl Wavenumber {
    pub fn new(k: C64) -> Result<Self> {
        if !(k.re >= 0.0) || !k.im.is_finite() {
            return Err(Error::Config(format!("wavenumber must have Re(k) >= 0, got {k}")));
        }
        Ok(Wavenumber { k, k2: k * k })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(C64::new(k, 0.0))
    }

    pub fn check_ppw(&self, h: f64) -> Result<()> {
        let kh = self.k.norm() * h;
        if kh < PPW_LIMIT {
            Ok(())
        } else {
            Err(Error::PointsPerWavelength {
                kh,
                limit: PPW_LIMIT,
            })
        }
    }
}

/// Complex grid function over the unknowns, z index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub n: [usize; 3],
    pub data: Vec<C64>,
}

impl Field {
    pub fn zeros(n: [usize; 3]) -> Self {
        Field {
            n,
            data: vec![C64::new(0.0, 0.0); n[0] * n[1] * n[2]],
        }
    }

    pub fn from_fn(n: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n[0] * n[1] * n[2]);
        for i in 0..n[0] {
            for j in 0..n[1] {
                for l in 0..n[2] {
                    data.push(f(i, j, l));
                }
            }
        }
        Field { n, data }
    }

    pub fn from_vec(n: [usize; 3], data: Vec<C64>) -> Result<Self> {
        let expected = n[0] * n[1] * n[2];
        if data.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                got: data.len(),
            });
        }
        Ok(Field { n, data })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + l
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> C64 {
        self.data[self.index(i, j, l)]
    }

    pub fn norm2(&self) -> f64 {
        crate::linalg::norm2(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Right-hand side `f` of the Helmholtz equation with its analytic
/// derivatives.
pub trait SourceModel: Send + Sync {
    /// `d^a/dx^a d^b/dy^b d^c/dz^c f` at `p`, with `order = [a, b, c]`.
    fn derivative(&self, order: [usize; 3], p: [f64; 3]) -> C64;

    /// Whether `derivative` is available for `order`.
    fn provides(&self, order: [usize; 3]) -> bool;

    /// Several derivatives at one point. Implementations whose derivatives
    /// share work should override this.
    fn derivatives(&self, orders: &[[usize; 3]], p: [f64; 3], out: &mut [C64]) {
        for (o, v) in orders.iter().zip(out.iter_mut()) {
            *v = self.derivative(*o, p);
        }
    }
}

/// `f = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroSource;

impl SourceModel for ZeroSource {
    fn derivative(&self, _order: [usize; 3], _p: [f64; 3]) -> C64 {
        C64::new(0.0, 0.0)
    }

    fn provides(&self, _order: [usize; 3]) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Gmres,
    Sks,
    Chebyshev,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gmres => "gmres",
            Method::Sks => "sks",
            Method::Chebyshev => "chebyshev",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gmres" => Ok(Method::Gmres),
            "sks" => Ok(Method::Sks),
            "chebyshev" | "ca" | "cheb" => Ok(Method::Chebyshev),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Diverged,
    /// Arnoldi produced a (numerically) zero vector before reaching the tolerance.
    Breakdown,
    /// The Krylov basis would exceed the configured memory budget.
    MemoryLimit,
}

/// Outcome of one iterative solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub method: Method,
    pub status: SolveStatus,
    pub iterations: usize,
    /// Relative residual `||F - A U(n)|| / ||F||` after each iteration, with
    /// the initial residual first.
    pub residual_history: Vec<f64>,
    /// Explicitly recomputed relative residual of the returned iterate.
    pub true_residual: f64,
    pub err_max: Option<f64>,
    pub psi: Option<f64>,
    pub wall_time: f64,
    /// Set when the right-hand side is zero and residuals are absolute.
    pub absolute_residuals: bool,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}
