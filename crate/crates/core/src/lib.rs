//! Sixth-order compact finite differences for the Helmholtz equation
//! `Δu + k²u = f` on boxes, solved by Krylov iterations preconditioned with
//! the second-order operator and a fast lateral-transform solver.
//!
//! ```
//! use compact_helmholtz::{Family, IterationConfig, ManufacturedProblem, Method};
//! use num_complex::Complex64;
//!
//! let problem = ManufacturedProblem::new(Family::Dirichlet3d, Complex64::new(5.0, 0.0));
//! let disc = problem.discretize(16).unwrap();
//! let f = disc.assemble_rhs();
//! let cfg = IterationConfig::with_method(Method::Gmres);
//! let (u, report) = compact_helmholtz::solve(&disc, &f.data, &cfg).unwrap();
//! assert!(report.converged());
//! assert!(problem.exact_error(&disc, &u) < 1e-5);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discretization;
pub mod domain;
pub mod error;
pub mod krylov;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod precond;
pub mod problems;
pub mod spectra;

pub use discretization::{validate_setup, Discretization};
pub use domain::{
    Axis, BoundaryConfig, Face, FaceCondition, FaceData, FaceKind, Field, Grid, Method, Side, SolveReport,
    SolveStatus, SourceModel, Wavenumber, ZeroSource, C64,
};
pub use error::{Error, Result};
pub use krylov::{estimate_psi, solve, theoretical_bound, BoundKind, IterationConfig, PsiEstimate, System};
pub use operator::{validate_setup_1d, Discretization1d, Order};
pub use precond::FastSolver;
pub use problems::{Family, ManufacturedProblem};
pub use spectra::{eig_1d, eig_3d, spectrum_summary, SpectrumSummary, Which};

/// Guide chapters, compiled as doc-tests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/compact-scheme.md")]
    mod compact_scheme {}
    #[doc = include_str!("../../../book/src/boundaries.md")]
    mod boundaries {}
    #[doc = include_str!("../../../book/src/preconditioner.md")]
    mod preconditioner {}
    #[doc = include_str!("../../../book/src/iterations.md")]
    mod iterations {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
