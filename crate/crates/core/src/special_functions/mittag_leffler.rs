//! Two-parameter Mittag-Leffler function for real arguments.
//!
//! ```text
//! E_{α,β}(z) = Σ_{k≥0} z^k / Γ(αk + β)
//! ```
//!
//! For `z < 0` and `0 < α ≤ 1` the evaluation regime is chosen from the
//! scale `X = |z|^{1/α}`, which controls both the largest series term
//! (about `e^X`) and the smallest asymptotic term (about `e^{-X}`):
//!
//! * `X ≤ series_limit`: power series with compensated summation.
//! * `X ≥ asymptotic_limit`: `-Σ_{k=1}^{K} z^{-k}/Γ(β-αk)`, truncated at the
//!   smallest term.
//! * in between: the Gorenflo-Loutchko-Luchko integral representation
//!   (`α < 1`) or a finite integral in `s` (`α = 1`).
//!
//! Positive arguments always use the series, whose terms are all positive.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::{gamma_raw, ln_gamma_pos, rgamma, sin_pi, GAMMA_MAX_ARG, GAMMA_REL_ERR};
use crate::compensated::CompensatedSum;
use crate::quadrature::{self, QuadConfig};
use crate::{Error, Result};

/// The `(α, β)` pair of `E_{α,β}`; both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    alpha: f64,
    beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// `E_α = E_{α,1}`.
    pub fn classical(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MLMethod {
    Series,
    Asymptotic,
    Integral,
    ClosedForm,
}

impl std::fmt::Display for MLMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MLMethod::Series => "series",
            MLMethod::Asymptotic => "asymptotic",
            MLMethod::Integral => "integral",
            MLMethod::ClosedForm => "closed_form",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLResult {
    pub value: f64,
    /// Bound on `|value - E_{α,β}(z)|` under the regime's assumptions.
    pub abs_error_estimate: f64,
    pub method: MLMethod,
}

/// Regime thresholds and truncation rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlConfig {
    /// Series is used for `z < 0` while `|z|^{1/α}` stays at or below this.
    pub series_limit: f64,
    /// Asymptotic expansion is used for `z < 0` once `|z|^{1/α}` reaches this.
    pub asymptotic_limit: f64,
    /// Maximum number of series terms.
    pub term_cap: usize,
    /// A series term is negligible when `|term| ≤ rel_tol · |partial sum|`.
    pub rel_tol: f64,
    /// Number of consecutive negligible terms required to stop.
    pub negligible_run: usize,
    pub quadrature: QuadConfig,
}

impl Default for MlConfig {
    fn default() -> Self {
        Self {
            series_limit: 4.0,
            asymptotic_limit: 40.0,
            term_cap: 10_000,
            rel_tol: 1e-16,
            negligible_run: 3,
            quadrature: QuadConfig {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_subdivisions: 4000,
            },
        }
    }
}

/// Evaluates `E_{α,β}(z)` with the default [`MlConfig`].
pub fn mittag_leffler(params: MLParams, z: f64) -> Result<MLResult> {
    mittag_leffler_with(params, z, &MlConfig::default())
}

/// Convenience wrapper returning only the value.
pub fn ml_value(params: MLParams, z: f64) -> Result<f64> {
    mittag_leffler(params, z).map(|r| r.value)
}

pub fn mittag_leffler_with(params: MLParams, z: f64, cfg: &MlConfig) -> Result<MLResult> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("argument must be finite, got {z}")));
    }
    let MLParams { alpha, beta } = params;
    if z == 0.0 {
        let value = rgamma(beta);
        return Ok(MLResult {
            value,
            abs_error_estimate: value.abs() * GAMMA_REL_ERR,
            method: MLMethod::ClosedForm,
        });
    }
    if alpha == 1.0 {
        if let Some(r) = exponential_closed_form(beta, z) {
            return Ok(r);
        }
    }
    if z > 0.0 || alpha > 1.0 {
        return series(alpha, beta, z, cfg);
    }
    let scale = (-z).powf(1.0 / alpha);
    if scale <= cfg.series_limit {
        series(alpha, beta, z, cfg)
    } else if scale >= cfg.asymptotic_limit {
        asymptotic(alpha, beta, z, cfg)
    } else if alpha < 1.0 {
        integral_lower_beta(alpha, beta, z, cfg)
    } else {
        integral_alpha_one(beta, z, cfg)
    }
}

/// `E_{1,1}(z) = e^z` and `E_{1,2}(z) = (e^z - 1)/z`.
fn exponential_closed_form(beta: f64, z: f64) -> Option<MLResult> {
    let value = if beta == 1.0 {
        z.exp()
    } else if beta == 2.0 {
        z.exp_m1() / z
    } else {
        return None;
    };
    Some(MLResult {
        value,
        abs_error_estimate: 2.0 * f64::EPSILON * value.abs(),
        method: MLMethod::ClosedForm,
    })
}

fn series(alpha: f64, beta: f64, z: f64, cfg: &MlConfig) -> Result<MLResult> {
    let ln_abs_z = z.abs().ln();
    let mut acc = CompensatedSum::new();
    let mut bound = 0.0;
    let mut negligible = 0;
    for k in 0..cfg.term_cap {
        let arg = alpha * k as f64 + beta;
        let (term, rel_err) = if arg <= GAMMA_MAX_ARG && k <= 300 {
            let t = z.powi(k as i32) / gamma_raw(arg);
            (t, GAMMA_REL_ERR + 8.0 * f64::EPSILON)
        } else {
            let ln_mag = k as f64 * ln_abs_z - ln_gamma_pos(arg);
            let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            (sign * ln_mag.exp(), (ln_mag.abs() + 8.0) * f64::EPSILON)
        };
        if !term.is_finite() {
            return Err(Error::Overflow("Mittag-Leffler series"));
        }
        acc.add(term);
        bound += term.abs() * rel_err;
        if term.abs() <= cfg.rel_tol * acc.value().abs() {
            negligible += 1;
            if negligible >= cfg.negligible_run {
                let value = acc.value();
                if !value.is_finite() {
                    return Err(Error::Overflow("Mittag-Leffler series"));
                }
                return Ok(MLResult {
                    value,
                    abs_error_estimate: bound
                        + 2.0 * f64::EPSILON * acc.abs_sum()
                        + 2.0 * term.abs(),
                    method: MLMethod::Series,
                });
            }
        } else {
            negligible = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "Mittag-Leffler series",
        budget: cfg.term_cap,
    })
}

/// `E_{α,β}(z) ≈ -Σ_{k≥1} z^{-k}/Γ(β-αk)` for large negative `z`, `α ≤ 1`.
fn asymptotic(alpha: f64, beta: f64, z: f64, cfg: &MlConfig) -> Result<MLResult> {
    let mut acc = CompensatedSum::new();
    let mut last_nonzero = f64::INFINITY;
    let mut omitted = 0.0;
    for k in 1..cfg.term_cap {
        let arg = beta - alpha * k as f64;
        if 1.0 - arg > GAMMA_MAX_ARG {
            break;
        }
        let inv_pow = z.powi(-(k as i32));
        if inv_pow == 0.0 {
            break;
        }
        let term = -inv_pow * rgamma(arg);
        if term == 0.0 {
            continue;
        }
        if term.abs() > last_nonzero {
            // Past the smallest term: the expansion starts diverging.
            omitted = last_nonzero;
            break;
        }
        acc.add(term);
        last_nonzero = term.abs();
        if term.abs() <= cfg.rel_tol * acc.value().abs() {
            omitted = term.abs();
            break;
        }
    }
    if omitted == 0.0 {
        omitted = last_nonzero.min(acc.value().abs());
    }
    // At α = 1 the exponential contribution z^{1-β} e^{z} is dropped.
    let exponential = if alpha == 1.0 {
        z.abs().powf(1.0 - beta) * z.exp()
    } else {
        0.0
    };
    Ok(MLResult {
        value: acc.value(),
        abs_error_estimate: omitted
            + exponential
            + (GAMMA_REL_ERR + 4.0 * f64::EPSILON) * acc.abs_sum(),
        method: MLMethod::Asymptotic,
    })
}

/// Integral regime for `0 < α < 1`, `z < 0`.
///
/// Brings `β` below `1 + α` with `E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z`
/// and then integrates
///
/// ```text
/// E_{α,β}(z) = ∫₀^∞ χ^{(1-β)/α} e^{-χ^{1/α}}
///              (χ sin(π(1-β)) - z sin(π(1-β+α))) / (χ² - 2χz cos(απ) + z²) dχ / (απ)
/// ```
fn integral_lower_beta(alpha: f64, beta: f64, z: f64, cfg: &MlConfig) -> Result<MLResult> {
    if beta >= 1.0 + alpha {
        let lower = integral_lower_beta(alpha, beta - alpha, z, cfg)?;
        let value = (lower.value - rgamma(beta - alpha)) / z;
        return Ok(MLResult {
            value,
            abs_error_estimate: lower.abs_error_estimate / z.abs()
                + 2.0 * f64::EPSILON * value.abs(),
            method: MLMethod::Integral,
        });
    }
    let x = -z;
    let cos_ap = (alpha * PI).cos();
    let s1 = sin_pi(1.0 - beta);
    let s2 = sin_pi(1.0 - beta + alpha);
    let power = (1.0 - beta) / alpha;
    let inv_alpha = 1.0 / alpha;
    let kernel = |chi: f64| {
        if chi == 0.0 {
            // A χ^{power < 0} endpoint singularity is integrable; the node
            // itself carries no mass.
            return if power == 0.0 { s2 / x } else { 0.0 };
        }
        let damp = (-chi.powf(inv_alpha)).exp();
        let num = chi * s1 + x * s2;
        let den = chi * chi + 2.0 * chi * x * cos_ap + x * x;
        chi.powf(power) * damp * num / den
    };
    // e^{-χ^{1/α}} < e^{-50} beyond this point.
    let chi_max = 50f64.powf(alpha);
    let mut points = vec![0.0];
    if x < chi_max {
        points.push(x);
    }
    points.push(chi_max);
    let q = quadrature::integrate(kernel, &points, &cfg.quadrature)?;
    let scale = 1.0 / (alpha * PI);
    let value = q.value * scale;
    Ok(MLResult {
        value,
        abs_error_estimate: q.abs_error * scale + 4.0 * f64::EPSILON * value.abs() + 1e-20,
        method: MLMethod::Integral,
    })
}

/// Integral regime for `α = 1`, `z < 0`, `β ∉ {1, 2}`:
/// `E_{1,β}(z) = (1/Γ(β-1)) ∫₀¹ e^{zs} (1-s)^{β-2} ds` for `β > 1`, with the
/// upward recurrence `E_{1,β} = 1/Γ(β) + z E_{1,β+1}` below.
fn integral_alpha_one(beta: f64, z: f64, cfg: &MlConfig) -> Result<MLResult> {
    if beta <= 1.0 {
        let upper = integral_alpha_one(beta + 1.0, z, cfg)?;
        let value = rgamma(beta) + z * upper.value;
        return Ok(MLResult {
            value,
            abs_error_estimate: z.abs() * upper.abs_error_estimate
                + 2.0 * f64::EPSILON * (rgamma(beta).abs() + (z * upper.value).abs()),
            method: MLMethod::Integral,
        });
    }
    if let Some(r) = exponential_closed_form(beta, z) {
        return Ok(r);
    }
    let exponent = beta - 2.0;
    let integrand = |s: f64| {
        let w = 1.0 - s;
        if w == 0.0 {
            return 0.0;
        }
        (z * s).exp() * w.powf(exponent)
    };
    let q = quadrature::integrate(integrand, &[0.0, 1.0], &cfg.quadrature)?;
    let scale = rgamma(beta - 1.0);
    let value = q.value * scale;
    Ok(MLResult {
        value,
        abs_error_estimate: q.abs_error * scale.abs() + 4.0 * f64::EPSILON * value.abs(),
        method: MLMethod::Integral,
    })
}
