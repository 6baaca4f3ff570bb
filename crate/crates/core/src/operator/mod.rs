//! Matrix-free sixth-order operator, its second-order companion and the
//! right-hand side assembly.

pub mod ghost;
pub mod kernel;
pub mod one_d;
pub mod stencil;

pub use ghost::{build_ghost_plan, GhostPlan, Order};
pub use kernel::{PlaneOperator, ZEnd};
pub use one_d::{validate_setup_1d, Discretization1d};
pub use stencil::{Coefficients, CompactStencil, LateralStencil};
