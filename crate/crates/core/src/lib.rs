//! Numerical machinery for the time-fractional modified Kuramoto-Sivashinsky
//! equation
//!
//! ```text
//! D^α_t u = -u_xxxx - u_xx + (1-λ)(u_x)² + λ(u_xx)²,   0 < α ≤ 1,
//! ```
//!
//! built around its three-dimensional invariant subspace
//! `W₃ = ⟨1, cos γx, sin γx⟩`, `γ = √((1-λ)/λ)`.
//!
//! The crate is split into:
//!
//! * [`special_functions`]: Gamma, erf/erfc and the two-parameter
//!   Mittag-Leffler function for real arguments.
//! * [`fractional_calculus`]: discrete Caputo (L1) and Riemann-Liouville
//!   (product trapezoid) operators, power-law rules and a numerical Laplace
//!   transform.
//! * [`invariant_subspace`]: the mKS operator restricted to `W₃`, its
//!   coefficient map and two independent invariance checks.
//! * [`mks_solution`]: closed-form solutions, particular cases, analytic PDE
//!   residuals, the Mittag-Leffler composition gap and a predictor-corrector
//!   solver for the reduced system.
//! * [`cli`]: the `fracmks` command-line front end.

pub mod cli;
pub mod compensated;
mod error;
pub mod fractional_calculus;
pub mod invariant_subspace;
pub mod mks_solution;
pub mod quadrature;
pub mod special_functions;

pub use error::{Error, Result};
pub use fractional_calculus::{FractionalOrder, SampledFunction, TimeGrid};
pub use invariant_subspace::{InvarianceReport, MksParams, SubspaceElement};
pub use mks_solution::{
    C1Mode, GapReport, ParticularCase, ResidualReport, Solution, SolutionParams,
};
pub use special_functions::{erf, erfc, gamma, ln_gamma, mittag_leffler, MLParams, MLResult};
