use crate::domain::{Method, C64};
use crate::error::{Error, Result};
use crate::krylov::{solve_sks, IterationConfig, System};

/// Order of the preconditioned matrix estimated from two grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiEstimate {
    /// `||r_2|| / ||r_1||` of SKS on the fine grid (step `h`).
    pub eps_h: f64,
    /// The same ratio on the coarse grid (step `gamma h`).
    pub eps_gamma_h: f64,
    pub gamma: f64,
    pub psi: f64,
}

/// `psi = (ln eps_gamma_h - ln eps_h) / ln gamma`
pub fn psi_from_ratios(eps_h: f64, eps_gamma_h: f64, gamma: f64) -> Result<PsiEstimate> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("grid ratio must exceed 1, got {gamma}")));
    }
    if !(eps_h > 0.0 && eps_gamma_h > 0.0) || !eps_h.is_finite() || !eps_gamma_h.is_finite() {
        return Err(Error::InvalidParameter(
            "residual ratios must be positive and finite; psi is undefined".into(),
        ));
    }
    Ok(PsiEstimate {
        eps_h,
        eps_gamma_h,
        gamma,
        psi: (eps_gamma_h.ln() - eps_h.ln()) / gamma.ln(),
    })
}

/// Ratio of the second to the first SKS residual.
fn first_ratio<S: System + ?Sized>(sys: &S, f: &[C64]) -> Result<f64> {
    let cfg = IterationConfig {
        method: Method::Sks,
        max_iter: 2,
        tol: f64::MIN_POSITIVE,
        ..Default::default()
    };
    let (_, rep) = solve_sks(sys, f, &cfg)?;
    let h = &rep.residual_history;
    if h.len() < 3 || h[1] == 0.0 {
        return Err(Error::InvalidParameter(
            "zero residual on the first SKS iteration; psi is undefined".into(),
        ));
    }
    Ok(h[2] / h[1])
}

/// Runs exactly two SKS iterations on each grid.
pub fn estimate_psi<S: System + ?Sized, T: System + ?Sized>(
    coarse: (&S, &[C64]),
    fine: (&T, &[C64]),
    gamma: f64,
) -> Result<PsiEstimate> {
    let eps_gamma_h = first_ratio(coarse.0, coarse.1)?;
    let eps_h = first_ratio(fine.0, fine.1)?;
    psi_from_ratios(eps_h, eps_gamma_h, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_ratios_give_zero() {
        let p = psi_from_ratios(0.3, 0.3, 2.0).unwrap();
        assert_eq!(p.psi, 0.0);
    }

    #[test]
    fn quadratic_contraction_gives_two() {
        let p = psi_from_ratios(0.01, 0.04, 2.0).unwrap();
        assert!((p.psi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_ratio() {
        assert!(psi_from_ratios(0.0, 0.1, 2.0).is_err());
    }
}
