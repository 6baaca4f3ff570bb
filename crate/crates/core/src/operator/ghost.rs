//! Ghost-plane elimination for Neumann and radiation faces.
//!
//! Every face is handled in a canonical frame where `zeta` is the inward
//! normal coordinate and `t`, `s` are the tangential axes in x, y, z order.
//! The contribution of the ghost plane, `P U(-1)`, is replaced by
//! `mirror U(1) + same U(0)` and a point source `S` that moves to the
//! right-hand side.

use crate::domain::{Face, FaceCondition, FaceKind, Side, SourceModel, Wavenumber, C64};
use crate::operator::stencil::LateralStencil;

const I: C64 = C64::new(0.0, 1.0);

/// Replacement of the ghost-plane term next to one face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostPlan {
    /// Acts on the first interior plane.
    pub mirror: LateralStencil,
    /// Acts on the boundary plane itself.
    pub same: LateralStencil,
}

/// Which discrete operator a plan or source belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Sixth,
    Second,
}

/// Derived constants of the sixth-order radiation closure.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RadiationConstants {
    pub mu1: C64,
    pub mu3: C64,
    /// `e^{ikh}`
    pub e1: C64,
}

impl RadiationConstants {
    pub fn new(k: C64, h: f64) -> Self {
        let ikh = I * k * h;
        let kh2 = k * k * h * h;
        let mu3 = 1.0 / (1.0 + 2.0 * ikh / 3.0 * (1.0 + 2.0 * kh2 / 15.0));
        let mu1 = (ikh / 90.0 + (1.0 + kh2 / 30.0) / (6.0 * mu3)) / (1.0 + 2.0 * ikh / 3.0);
        RadiationConstants {
            mu1,
            mu3,
            e1: ikh.exp(),
        }
    }

    /// `mu2 = 1 / (10 mu1 mu3)`, kept for reference by the tests.
    #[allow(dead_code)]
    pub fn mu2(&self) -> C64 {
        1.0 / (10.0 * self.mu1 * self.mu3)
    }
}

/// Ghost plan for a face of the given kind; `None` for Dirichlet faces,
/// which carry no unknowns.
pub fn build_ghost_plan(kind: FaceKind, k: &Wavenumber, h: f64, order: Order) -> Option<GhostPlan> {
    let one = C64::new(1.0, 0.0);
    match (kind, order) {
        (FaceKind::Dirichlet, _) => None,
        (FaceKind::Neumann, Order::Sixth) => {
            let c1 = (1.0 + k.k2 * h * h / 30.0) / 6.0;
            Some(GhostPlan {
                mirror: LateralStencil::from_poly(one, c1, C64::new(1.0 / 30.0, 0.0)),
                same: LateralStencil::ZERO,
            })
        }
        (FaceKind::Sommerfeld, Order::Sixth) => {
            let rc = RadiationConstants::new(k.k, h);
            let ikh = I * k.k * h;
            let k3h3 = k.k * k.k * k.k * h * h * h;
            let kh2 = k.k2 * h * h;
            let e2 = rc.e1 * rc.e1;
            let g1 = LateralStencil::from_poly(
                e2 * rc.mu3 * (1.0 - 2.0 * ikh / 3.0 - 4.0 * I * k3h3 / 45.0),
                e2 * rc.mu3 * (rc.mu1 + 2.0 * ikh / 3.0 * (1.0 / 60.0 - rc.mu1)),
                e2 / 30.0,
            );
            let g0 = LateralStencil::from_poly(
                rc.e1 * rc.mu3 * (4.0 * ikh / 3.0) * (1.0 + 2.0 * kh2 / 15.0),
                -rc.e1 * rc.mu3 * (4.0 * ikh / 3.0) * (1.0 / 60.0 - rc.mu1),
                C64::new(0.0, 0.0),
            );
            Some(GhostPlan { mirror: g1, same: g0 })
        }
        (FaceKind::Neumann, Order::Second) => Some(GhostPlan {
            mirror: LateralStencil::identity(),
            same: LateralStencil::ZERO,
        }),
        (FaceKind::Sommerfeld, Order::Second) => Some(GhostPlan {
            mirror: LateralStencil::identity(),
            same: LateralStencil::scalar(2.0 * I * k.k * h),
        }),
    }
}

/// Canonical-frame derivatives of `f` at a face point.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct FaceSource {
    pub f: C64,
    pub z: C64,
    pub zz: C64,
    pub zzz: C64,
    pub ztt: C64,
    pub zss: C64,
    pub tt: C64,
    pub ss: C64,
}

/// Canonical orders `(zeta, t, s)` of the source derivatives needed at a face.
pub(crate) const FACE_SOURCE_ORDERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [2, 0, 0],
    [3, 0, 0],
    [1, 2, 0],
    [1, 0, 2],
    [0, 2, 0],
    [0, 0, 2],
];

/// Maps a canonical `(zeta, t, s)` order to global `[x, y, z]` order.
pub(crate) fn global_order(face: Face, canonical: [usize; 3]) -> [usize; 3] {
    let mut order = [0; 3];
    let [t, s] = face.axis.tangential();
    order[face.axis.index()] = canonical[0];
    order[t.index()] = canonical[1];
    order[s.index()] = canonical[2];
    order
}

impl FaceSource {
    pub fn eval(src: &dyn SourceModel, face: Face, p: [f64; 3]) -> Self {
        let orders = FACE_SOURCE_ORDERS.map(|o| global_order(face, o));
        let mut v = [C64::new(0.0, 0.0); 8];
        src.derivatives(&orders, p, &mut v);
        if face.side == Side::High {
            // d/dzeta = -d/d(axis) on the high face
            for (val, o) in v.iter_mut().zip(FACE_SOURCE_ORDERS) {
                if o[0] % 2 == 1 {
                    *val = -*val;
                }
            }
        }
        FaceSource {
            f: v[0],
            z: v[1],
            zz: v[2],
            zzz: v[3],
            ztt: v[4],
            zss: v[5],
            tt: v[6],
            ss: v[7],
        }
    }
}

/// Tangential derivative orders of face data used by the closures.
pub(crate) const FACE_DATA_ORDERS: [[usize; 2]; 6] = [[0, 0], [2, 0], [0, 2], [4, 0], [0, 4], [2, 2]];

/// Face data expressed as the inward quantity (`u_zeta` for Neumann,
/// `u_zeta + i k u` for radiation faces) with its tangential derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct FaceDataPack {
    pub g: C64,
    pub tt: C64,
    pub ss: C64,
    pub tttt: C64,
    pub ssss: C64,
    pub ttss: C64,
}

impl FaceDataPack {
    pub fn eval(cond: &FaceCondition, p: [f64; 3], with_derivatives: bool) -> Self {
        let Some(data) = cond.data.as_ref() else {
            return Self::default();
        };
        // both closures are written for the inward normal, data uses the outward one
        let g = |o: [usize; 2]| -data.eval(p, o);
        if !with_derivatives {
            return FaceDataPack {
                g: g([0, 0]),
                ..Default::default()
            };
        }
        FaceDataPack {
            g: g([0, 0]),
            tt: g([2, 0]),
            ss: g([0, 2]),
            tttt: g([4, 0]),
            ssss: g([0, 4]),
            ttss: g([2, 2]),
        }
    }
}

/// Point source `S` of the ghost elimination; the right-hand side receives `-S`.
pub(crate) fn ghost_source(
    kind: FaceKind,
    order: Order,
    k: &Wavenumber,
    h: f64,
    src: &FaceSource,
    data: &FaceDataPack,
) -> C64 {
    match (kind, order) {
        (FaceKind::Dirichlet, _) => C64::new(0.0, 0.0),
        (_, Order::Second) => -2.0 * h * data.g,
        (FaceKind::Neumann, Order::Sixth) => neumann_source(k.k2, h, src, data),
        (FaceKind::Sommerfeld, Order::Sixth) => radiation_source(k.k, h, src, data),
    }
}

/// `u(-h) - u(h)` across a Neumann face in the canonical frame, from the
/// inward data and the source through the fifth normal derivative.
pub(crate) fn neumann_jump(k2: C64, h: f64, f: &FaceSource, b: &FaceDataPack) -> C64 {
    let lap_b = b.tt + b.ss;
    let u3 = f.z - k2 * b.g - lap_b;
    let u5 = f.zzz - (f.ztt + f.zss) - k2 * u3 + k2 * lap_b + b.tttt + 2.0 * b.ttss + b.ssss;
    let h2 = h * h;
    -2.0 * h * (b.g + h2 / 6.0 * u3 + h2 * h2 / 120.0 * u5)
}

fn neumann_source(k2: C64, h: f64, f: &FaceSource, b: &FaceDataPack) -> C64 {
    let h2 = h * h;
    let h3 = h2 * h;
    let h5 = h3 * h2;
    -2.0 * h * (1.0 - h2 * k2 / 6.0 + h2 * h2 * k2 * k2 / 120.0) * b.g
        - h3 / 3.0 * (1.0 - h2 * k2 / 20.0) * f.z
        - h5 / 60.0 * f.zzz
        - 7.0 * h5 / 180.0 * (f.ztt + f.zss)
        + h5 / 90.0 * (b.ttss + k2 * (b.tt + b.ss) + b.tttt + b.ssss)
}

fn radiation_source(k: C64, h: f64, f: &FaceSource, g: &FaceDataPack) -> C64 {
    let rc = RadiationConstants::new(k, h);
    let ik = I * k;
    let k2 = k * k;
    let h2 = h * h;
    let h4 = h2 * h2;
    let h5 = h4 * h;

    // derivatives of fbar = e^{ik zeta} f at zeta = 0
    let fb_z = f.z + ik * f.f;
    let fb_zz = f.zz + 2.0 * ik * f.z - k2 * f.f;
    let fb_zzz = f.zzz + 3.0 * ik * f.zz - 3.0 * k2 * f.z - ik * k2 * f.f;
    let fb_ztt = f.ztt + ik * f.tt;
    let fb_zss = f.zss + ik * f.ss;

    let fbar = (h2 / 6.0 + k2 * h4 / 45.0) * fb_z - ik * h4 / 90.0 * fb_zz
        + h4 / 120.0 * (fb_zzz - fb_ztt - fb_zss);

    let lap = g.tt + g.ss;
    let bg = g.g + ik * h2 * h / 90.0 * lap
        - h4 / 540.0 * (3.0 * (g.tttt + g.ttss + g.ssss) + 5.0 * k2 * lap)
        - ik * h5 / 3240.0 * (3.0 * g.tttt - 60.0 * g.ttss + 3.0 * g.ssss - 32.0 * k2 * lap);

    -rc.e1 * rc.mu3 * (2.0 * h * fbar + rc.mu1 * h5 / 3.0 * (fb_ztt + fb_zss))
        - 2.0 * h * rc.e1 * rc.mu3 * bg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Axis;

    #[test]
    fn radiation_plan_tends_to_off_plane_operator() {
        let k = Wavenumber::real(10.0).unwrap();
        let h = 1e-6;
        let plan = build_ghost_plan(FaceKind::Sommerfeld, &k, h, Order::Sixth).unwrap();
        let (a, b, c) = plan.mirror.poly();
        assert!((a - 1.0).norm() < 1e-4);
        assert!((b - 1.0 / 6.0).norm() < 1e-4);
        assert!((c - 1.0 / 30.0).norm() < 1e-4);
        assert!(plan.same.center.norm() < 1e-4);
    }

    #[test]
    fn mu2_identity() {
        let rc = RadiationConstants::new(C64::new(20.0, 0.0), 1.0 / 64.0);
        assert!((rc.mu2() * 10.0 * rc.mu1 * rc.mu3 - 1.0).norm() < 1e-14);
    }

    #[test]
    fn canonical_orders_map_to_face_axes() {
        let face = Face::new(Axis::X, Side::High);
        assert_eq!(global_order(face, [1, 2, 0]), [1, 2, 0]);
        assert_eq!(global_order(face, [1, 0, 2]), [1, 0, 2]);
        let face = Face::new(Axis::Y, Side::Low);
        assert_eq!(global_order(face, [3, 2, 0]), [2, 3, 0]);
        assert_eq!(global_order(Face::BOTTOM, [1, 2, 0]), [2, 0, 1]);
    }
}
