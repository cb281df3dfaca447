//! Lower bounds on the minimal period of periodic orbits of semilinear
//! evolution equations `u' = -A u + f(u)`, together with the numerical
//! machinery needed to audit those bounds on concrete systems.
//!
//! The crate is organized around a finite diagonal spectral model:
//!
//! * [`spectral`]: the operator calculus (`A^α`, `e^{−At}`, spectral
//!   projections) on eigenbasis coefficients.
//! * [`bounds`]: the period bound constants and the bracket function whose
//!   infimum defines them, plus classical comparison bounds and a discrete
//!   Wirtinger inequality check.
//! * [`evolution`]: exponential integrators for the semilinear flow and a
//!   sampled-pair Lipschitz estimator.
//! * [`orbits`]: constructed orbits with exact period and Lipschitz data,
//!   period detection and Newton refinement, and audits of the bound and
//!   of the estimate chain it rests on.
//! * [`applications`]: the bound instantiated for reaction-diffusion,
//!   Lotka-Volterra, and 2D incompressible-flow systems.

pub mod applications;
pub mod bounds;
pub mod error;
pub mod evolution;
pub mod orbits;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{SpectralSplit, SpectrumModel, StateVector};
