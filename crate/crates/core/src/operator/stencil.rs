use crate::domain::C64;

/// Coefficients of the sixth-order operator, scaled by `h^2`:
///
/// `A = sum D_a + c1 sum_{a<b} D_a D_b + c2 Dx Dy Dz + c0 I`, where
/// `D_a = h^2 delta_a^2` is the unscaled second difference along axis `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients {
    pub c0: C64,
    pub c1: C64,
    pub c2: C64,
}

impl Coefficients {
    pub fn new(k2: C64, h: f64) -> Self {
        let kh2 = k2 * h * h;
        Coefficients {
            c0: kh2 * (1.0 - kh2 / 12.0 + kh2 * kh2 / 360.0),
            c1: (1.0 + kh2 / 30.0) / 6.0,
            c2: C64::new(1.0 / 30.0, 0.0),
        }
    }

    /// Weights of the 27-point stencil.
    pub fn stencil(&self) -> CompactStencil {
        CompactStencil {
            center: -6.0 + 12.0 * self.c1 - 8.0 * self.c2 + self.c0,
            face: 1.0 - 4.0 * self.c1 + 4.0 * self.c2,
            edge: self.c1 - 2.0 * self.c2,
            corner: self.c2,
        }
    }

    /// Lateral operator multiplying the neighbouring planes:
    /// `P = I + c1 (Dx + Dy) + c2 Dx Dy`.
    pub fn off_plane(&self) -> LateralStencil {
        LateralStencil::from_poly(C64::new(1.0, 0.0), self.c1, self.c2)
    }

    /// Lateral operator acting within a plane:
    /// `Q = (c0 - 2) + (1 - 2 c1)(Dx + Dy) + (c1 - 2 c2) Dx Dy`.
    pub fn in_plane(&self) -> LateralStencil {
        LateralStencil::from_poly(
            self.c0 - 2.0,
            1.0 - 2.0 * self.c1,
            self.c1 - 2.0 * self.c2,
        )
    }
}

/// Weights of the 27-point compact stencil grouped by neighbour class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactStencil {
    pub center: C64,
    pub face: C64,
    pub edge: C64,
    pub corner: C64,
}

impl CompactStencil {
    /// Weight of the neighbour at offset `(di, dj, dl)`, each in `-1..=1`.
    pub fn weight(&self, di: i32, dj: i32, dl: i32) -> C64 {
        match di.abs() + dj.abs() + dl.abs() {
            0 => self.center,
            1 => self.face,
            2 => self.edge,
            _ => self.corner,
        }
    }
}

/// A 9-point operator within a z-plane, `p0 I + p1 (Dx + Dy) + p2 Dx Dy`,
/// stored as weights for the centre, the four face and the four corner
/// neighbours.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LateralStencil {
    pub center: C64,
    pub face: C64,
    pub corner: C64,
}

impl LateralStencil {
    pub const ZERO: LateralStencil = LateralStencil {
        center: C64::new(0.0, 0.0),
        face: C64::new(0.0, 0.0),
        corner: C64::new(0.0, 0.0),
    };

    pub fn from_poly(p0: C64, p1: C64, p2: C64) -> Self {
        LateralStencil {
            center: p0 - 4.0 * p1 + 4.0 * p2,
            face: p1 - 2.0 * p2,
            corner: p2,
        }
    }

    pub fn identity() -> Self {
        Self::scalar(C64::new(1.0, 0.0))
    }

    pub fn scalar(a: C64) -> Self {
        LateralStencil {
            center: a,
            ..Self::ZERO
        }
    }

    /// Value of the operator on a lateral Fourier mode whose one-dimensional
    /// second differences have eigenvalues `ex` and `ey`.
    pub fn symbol(&self, ex: f64, ey: f64) -> C64 {
        let (p0, p1, p2) = self.poly();
        p0 + p1 * (ex + ey) + p2 * ex * ey
    }

    /// Inverse of [`from_poly`](Self::from_poly).
    pub fn poly(&self) -> (C64, C64, C64) {
        let p2 = self.corner;
        let p1 = self.face + 2.0 * p2;
        let p0 = self.center + 4.0 * p1 - 4.0 * p2;
        (p0, p1, p2)
    }

    #[inline(always)]
    pub fn eval(&self, c: C64, f: C64, e: C64) -> C64 {
        self.center * c + self.face * f + self.corner * e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() <= 1e-14 * (1.0 + b.norm())
    }

    #[test]
    fn plane_split_reproduces_27_point_weights() {
        let co = Coefficients::new(C64::new(400.0, 3.0), 1.0 / 64.0);
        let s = co.stencil();
        let (p, q) = (co.off_plane(), co.in_plane());
        assert!(close(q.center, s.center));
        assert!(close(q.face, s.face));
        assert!(close(p.center, s.face));
        assert!(close(q.corner, s.edge));
        assert!(close(p.face, s.edge));
        assert!(close(p.corner, s.corner));
    }

    #[test]
    fn poly_round_trip() {
        let st = LateralStencil::from_poly(C64::new(1.5, -2.0), C64::new(0.25, 0.5), C64::new(-3.0, 0.0));
        let (a, b, c) = st.poly();
        assert!(close(a, C64::new(1.5, -2.0)));
        assert!(close(b, C64::new(0.25, 0.5)));
        assert!(close(c, C64::new(-3.0, 0.0)));
    }

    #[test]
    fn zero_wavenumber_weights() {
        let s = Coefficients::new(C64::new(0.0, 0.0), 0.1).stencil();
        assert!(close(s.center, C64::new(-6.0 + 2.0 - 8.0 / 30.0, 0.0)));
        assert!(close(s.corner, C64::new(1.0 / 30.0, 0.0)));
        // weights of an operator annihilating constants sum to zero
        let total = s.center + 6.0 * s.face + 12.0 * s.edge + 8.0 * s.corner;
        assert!(total.norm() < 1e-14);
    }
}
