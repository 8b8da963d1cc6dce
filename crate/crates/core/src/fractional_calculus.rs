//! Discrete fractional operators on uniform grids.
//!
//! * [`caputo_l1`]: L1 scheme for the Caputo derivative, order `2 - α`.
//! * [`rl_integral`]: product-trapezoid rule for the Riemann-Liouville
//!   integral `J^α f(t) = (1/Γ(α)) ∫₀ᵗ (t-τ)^{α-1} f(τ) dτ`.
//! * [`caputo_power`] / [`rl_integral_power`]: closed-form action on `t^γ`.
//! * [`laplace_numeric`]: truncated Laplace transform by adaptive quadrature.

use serde::{Deserialize, Serialize};

use crate::quadrature::{self, QuadConfig};
use crate::special_functions::{gamma, rgamma};
use crate::{Error, Result};

/// Order `α ∈ (0, 1]` of a time-fractional operator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(order: FractionalOrder) -> f64 {
        order.0
    }
}

/// Uniform nodes `t_k = k·t_max/n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::Domain(format!("t_max must be > 0, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(Error::Domain(format!(
                "a time grid needs at least 2 steps, got {n_steps}"
            )));
        }
        Ok(Self { t_max, n_steps })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    /// Number of nodes, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, k: usize) -> f64 {
        self.t_max * k as f64 / self.n_steps as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.node(k))
    }

    /// Index of the node equal to `t` (up to `1e-9` steps), if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let pos = t / self.step();
        let k = pos.round();
        if k < 0.0 || k > self.n_steps as f64 || (pos - k).abs() > 1e-9 {
            return None;
        }
        Some(k as usize)
    }
}

/// Values of a function of time on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl FnMut(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    /// Fallible variant of [`SampledFunction::from_fn`].
    pub fn try_from_fn(grid: TimeGrid, f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.nodes().map(f).collect::<Result<_>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn last(&self) -> f64 {
        self.values[self.grid.n_steps]
    }

    /// Value at the grid node equal to `t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        self.grid
            .index_of(t)
            .map(|k| self.values[k])
            .ok_or(Error::OffGrid {
                t,
                step: self.grid.step(),
            })
    }

    fn map_values(&self, values: Vec<f64>) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values,
        }
    }
}

/// Riemann-Liouville integral `J^α f` by product-trapezoid quadrature.
///
/// `f` is interpolated piecewise linearly and the weakly singular kernel is
/// integrated exactly against each hat function:
///
/// ```text
/// J^α f(t_k) ≈ h^α/Γ(α+2) Σ_{j=0}^{k} a_{j,k} f_j
/// a_{0,k} = (k-1)^{α+1} - (k-1-α) k^α
/// a_{j,k} = (k-j+1)^{α+1} - 2(k-j)^{α+1} + (k-j-1)^{α+1},   0 < j < k
/// a_{k,k} = 1
/// ```
pub fn rl_integral(f: &SampledFunction, order: FractionalOrder) -> SampledFunction {
    let alpha = order.value();
    let n = f.grid.n_steps;
    let h = f.grid.step();
    let scale = h.powf(alpha) * rgamma(alpha + 2.0);
    let pow_a1: Vec<f64> = (0..=n).map(|d| (d as f64).powf(alpha + 1.0)).collect();
    // Interior weights depend only on the distance d = k - j.
    let interior: Vec<f64> = (0..n)
        .map(|d| {
            if d == 0 {
                1.0
            } else {
                pow_a1[d + 1] - 2.0 * pow_a1[d] + pow_a1[d - 1]
            }
        })
        .collect();
    let fv = &f.values;
    let mut out = vec![0.0; n + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let first = pow_a1[k - 1] - (kf - 1.0 - alpha) * kf.powf(alpha);
        let mut acc = first * fv[0];
        for j in 1..=k {
            acc += interior[k - j] * fv[j];
        }
        *slot = scale * acc;
    }
    f.map_values(out)
}

/// L1 discretisation of the Caputo derivative:
///
/// ```text
/// D^α f(t_k) ≈ h^{-α}/Γ(2-α) Σ_{j=0}^{k-1} ((j+1)^{1-α} - j^{1-α}) (f_{k-j} - f_{k-j-1})
/// ```
///
/// Node 0 is 0 (empty sum). At `α = 1` this is the backward difference.
pub fn caputo_l1(f: &SampledFunction, order: FractionalOrder) -> SampledFunction {
    let alpha = order.value();
    let n = f.grid.n_steps;
    let scale = f.grid.step().powf(-alpha) * rgamma(2.0 - alpha);
    let weights: Vec<f64> = (0..n)
        .map(|j| {
            if j == 0 {
                // 0^0 would be 1 at α = 1.
                return 1.0;
            }
            let j = j as f64;
            (j + 1.0).powf(1.0 - alpha) - j.powf(1.0 - alpha)
        })
        .collect();
    let diffs: Vec<f64> = f.values.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = vec![0.0; n + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        // diffs[k-j-1] = f_{k-j} - f_{k-j-1}
        let acc: f64 = (0..k).map(|j| weights[j] * diffs[k - j - 1]).sum();
        *slot = scale * acc;
    }
    f.map_values(out)
}

fn check_power_args(gamma_exp: f64, t: f64) -> Result<()> {
    if !(gamma_exp > -1.0) {
        return Err(Error::Domain(format!(
            "power exponent must exceed -1, got {gamma_exp}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be > 0, got {t}")));
    }
    Ok(())
}

/// `D^α t^γ = Γ(γ+1)/Γ(γ-α+1) t^{γ-α}`; the Caputo derivative of a constant
/// (`γ = 0`) is 0.
pub fn caputo_power(gamma_exp: f64, order: FractionalOrder, t: f64) -> Result<f64> {
    check_power_args(gamma_exp, t)?;
    if gamma_exp == 0.0 {
        return Ok(0.0);
    }
    let alpha = order.value();
    Ok(gamma(gamma_exp + 1.0)? * rgamma(gamma_exp - alpha + 1.0) * t.powf(gamma_exp - alpha))
}

/// `J^α t^γ = Γ(γ+1)/Γ(γ+α+1) t^{γ+α}`.
pub fn rl_integral_power(gamma_exp: f64, order: FractionalOrder, t: f64) -> Result<f64> {
    check_power_args(gamma_exp, t)?;
    let alpha = order.value();
    Ok(gamma(gamma_exp + 1.0)? * rgamma(gamma_exp + alpha + 1.0) * t.powf(gamma_exp + alpha))
}

/// Result of [`laplace_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEstimate {
    pub value: f64,
    /// Adaptive-quadrature error estimate on `[0, t_cut]`.
    pub quadrature_error: f64,
    /// `max|f| · e^{-s t_cut} / s`, with the maximum over sampled nodes.
    pub tail_bound: f64,
    pub t_cut: f64,
}

impl LaplaceEstimate {
    pub fn abs_error_estimate(&self) -> f64 {
        self.quadrature_error + self.tail_bound
    }
}

/// `∫₀^{t_cut} e^{-st} f(t) dt`; `t_cut` defaults to `40/s`.
pub fn laplace_numeric<F: FnMut(f64) -> f64>(
    mut f: F,
    s: f64,
    t_cut: Option<f64>,
) -> Result<LaplaceEstimate> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "Laplace variable must be > 0, got {s}"
        )));
    }
    let t_cut = t_cut.unwrap_or(40.0 / s);
    if !(t_cut.is_finite() && t_cut > 0.0) {
        return Err(Error::Domain(format!("t_cut must be > 0, got {t_cut}")));
    }
    let mut max_abs: f64 = 0.0;
    let integrand = |t: f64| {
        let v = f(t);
        max_abs = max_abs.max(v.abs());
        (-s * t).exp() * v
    };
    let cfg = QuadConfig {
        abs_tol: 1e-9,
        rel_tol: 1e-9,
        max_subdivisions: 2000,
    };
    let q = quadrature::integrate(integrand, &[0.0, t_cut], &cfg)?;
    if !q.value.is_finite() || !max_abs.is_finite() {
        return Err(Error::Domain("Laplace integrand is not finite".into()));
    }
    Ok(LaplaceEstimate {
        value: q.value,
        quadrature_error: q.abs_error,
        tail_bound: max_abs * (-s * t_cut).exp() / s,
        t_cut,
    })
}

/// `max_k |J^α(D^α f)(t_k) - (f(t_k) - f(0))|` with both discrete operators.
pub fn verify_inversion(f: &SampledFunction, order: FractionalOrder) -> f64 {
    let recovered = rl_integral(&caputo_l1(f, order), order);
    let f0 = f.values[0];
    recovered
        .values
        .iter()
        .zip(&f.values)
        .map(|(r, v)| (r - (v - f0)).abs())
        .fold(0.0, f64::max)
}
