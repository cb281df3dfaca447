//! Worked applications of the period bound to three PDE families:
//! smoothing exponents for reaction-diffusion nonlinearities, explicit
//! Lipschitz constants and period bounds for diffusive Lotka-Volterra
//! systems, and a measured advective Lipschitz constant for the 2D
//! incompressible flow on a periodic box.
//!
//! Each submodule is independent; they share only the constants layer.

pub mod lv;
pub mod nse;
pub mod rd;

pub use lv::{
    lv_infinity_bound, lv_infinity_lipschitz, lv_lipschitz, lv_period_bound, LotkaVolterraParams,
    LvPeriodBound,
};
pub use nse::{
    dealias_cutoff, nse_bilinear, nse_lipschitz_ratio, nse_period_bound, NseField,
};
pub use rd::{rd_alpha, ReactionDiffusionGrowth};
