//! Gamma, error function and the two-parameter Mittag-Leffler function on
//! the real line.

mod erf;
mod gamma;
mod mittag_leffler;

pub use erf::{erf, erfc};
pub use gamma::{gamma, ln_gamma, rgamma, GAMMA_MAX_ARG};
pub use mittag_leffler::{
    mittag_leffler, mittag_leffler_with, ml_value, MLMethod, MLParams, MLResult, MlConfig,
};
