use crate::error::{Error, Result};

/// Per-iteration residual contraction factors predicted by the theory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundKind {
    /// Preconditioned system of order `order`: factor `c h^order`.
    Order { c: f64, h: f64, order: f64 },
    /// `max |d_ii| = m` of the diagonalised preconditioned residual operator.
    General { m: f64 },
    /// Chebyshev iteration over `[1 + m_hat, 1 + M_hat]`:
    /// factor `(M_hat - m_hat) / (4 (1 + m_hat))`.
    Chebyshev { m_hat: f64, big_m_hat: f64 },
    /// Second-order preconditioning of the 1D scheme: `k^4 h^2 / (12 delta0)`.
    OneD { k: f64, h: f64, delta0: f64 },
    /// 3D all-Dirichlet estimate for small `k`: `3/4`.
    ThreeD,
}

pub fn theoretical_bound(kind: BoundKind) -> Result<f64> {
    match kind {
        BoundKind::Order { c, h, order } => {
            if !(h > 0.0) {
                return Err(Error::InvalidParameter("h must be positive".into()));
            }
            Ok(c * h.powf(order))
        }
        BoundKind::General { m } => Ok(m),
        BoundKind::Chebyshev { m_hat, big_m_hat } => {
            if !(1.0 + m_hat > 0.0) {
                return Err(Error::InvalidParameter(format!("need 1 + m_hat > 0, got m_hat = {m_hat}")));
            }
            Ok((big_m_hat - m_hat) / (4.0 * (1.0 + m_hat)))
        }
        BoundKind::OneD { k, h, delta0 } => {
            if !(delta0 > 0.0) {
                return Err(Error::InvalidParameter(format!("delta0 must be positive, got {delta0}")));
            }
            Ok(k.powi(4) * h * h / (12.0 * delta0))
        }
        BoundKind::ThreeD => Ok(0.75),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_d_factor_arithmetic() {
        let v = theoretical_bound(BoundKind::OneD { k: 20.0, h: 1.0 / 64.0, delta0: 4.0 }).unwrap();
        assert!((v - 160000.0 / (4096.0 * 48.0)).abs() < 1e-12);
        assert!((v - 0.8138).abs() < 1e-4);
    }

    #[test]
    fn fixed_and_degenerate_factors() {
        assert_eq!(theoretical_bound(BoundKind::ThreeD).unwrap(), 0.75);
        assert_eq!(theoretical_bound(BoundKind::Chebyshev { m_hat: 0.2, big_m_hat: 0.2 }).unwrap(), 0.0);
        assert!(theoretical_bound(BoundKind::OneD { k: 1.0, h: 0.1, delta0: 0.0 }).is_err());
        assert!(theoretical_bound(BoundKind::Chebyshev { m_hat: -1.0, big_m_hat: 0.0 }).is_err());
    }
}
