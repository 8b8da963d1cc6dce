use std::f64::consts::PI;

use crate::{Error, Result};

// Lanczos approximation with g = 607/128 and 15 terms (Godfrey's coefficients).
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_502_4;

/// Largest argument whose Gamma value is finite in f64.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Claimed relative error bound of [`gamma`] for arguments in `[0.1, 171]`.
pub(crate) const GAMMA_REL_ERR: f64 = 2e-15;

fn lanczos_series(x: f64) -> f64 {
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    ser
}

/// `sin(πx)` with exact zeros at the integers and no loss for large `|x|`.
pub(crate) fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // Reduce to r ∈ [-1, 1]; sin(π r) has period 2.
    let r = x - 2.0 * (0.5 * x).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Γ(x) without pole checking: NaN at the poles.
pub(crate) fn gamma_raw(x: f64) -> f64 {
    if x.is_nan() || is_pole(x) {
        return f64::NAN;
    }
    if x.fract() == 0.0 && x <= 23.0 {
        // Exact up to 22!.
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_raw(1.0 - x));
    }
    if x > GAMMA_MAX_ARG {
        return f64::INFINITY;
    }
    let base = x + LANCZOS_G_HALF;
    // base^(x+1/2) split in two halves so the product does not overflow early.
    let half_pow = base.powf(0.5 * (x + 0.5));
    let prefactor = (-base).exp() * (SQRT_2PI * lanczos_series(x) / x);
    (half_pow * prefactor) * half_pow
}

/// The Euler Gamma function.
///
/// Fails at the poles `0, -1, -2, …`; returns `+inf` above [`GAMMA_MAX_ARG`].
pub fn gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::GammaPole(x));
    }
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    Ok(gamma_raw(x))
}

/// `1/Γ(x)`, an entire function: exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x > GAMMA_MAX_ARG {
        return (-ln_gamma_pos(x)).exp();
    }
    if x < 0.5 && 1.0 - x > GAMMA_MAX_ARG {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π with Γ(1-x) beyond range.
        return f64::INFINITY.copysign(sin_pi(x));
    }
    1.0 / gamma_raw(x)
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // ln Γ(x) = ln Γ(x+1) - ln x
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    let base = x + LANCZOS_G_HALF;
    (x + 0.5) * base.ln() - base + (SQRT_2PI * lanczos_series(x) / x).ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}
