//! Exact and numerical solutions of the time-fractional mKS equation on `W₃`.
//!
//! Writing `u(t, x) = C₁(t) + C₂(t) cos γx + C₃(t) sin γx` turns the PDE into
//!
//! ```text
//! D^α C₁ = (1-λ)γ² (C₂² + C₃²)
//! D^α C₂ = θ C₂
//! D^α C₃ = θ C₃
//! ```
//!
//! so `C₂,₃(t) = C₂,₃(0) E_α(θ t^α)` and `C₁ = C₁(0) + J^α[(1-λ)γ²(C₂² + C₃²)]`.
//! The closed form for `C₁` ([`coeff_c1_paper`]) replaces `E_α(θt^α)²` by
//! `E_α(θ(2t)^α)`, which holds only at `α = 1`; [`composition_gap`] measures
//! the difference and [`pde_residual`] shows where it ends up.

pub mod abm;

use std::f64::consts::SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::fractional_calculus::{rl_integral, FractionalOrder, SampledFunction, TimeGrid};
use crate::invariant_subspace::{apply_operator_pointwise, MksParams, SubspaceElement};
use crate::special_functions::{ml_value, rgamma, MLParams};
use crate::{Error, Result};

/// Parameters of a solution on `W₃`: operator, time order and initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionParams {
    pub mks: MksParams,
    pub order: FractionalOrder,
    pub c1_0: f64,
    pub c2_0: f64,
    pub c3_0: f64,
}

impl SolutionParams {
    /// Initial data `C₁(0) = 0`, `C₂(0) = C₃(0) = 1`.
    pub fn new(mks: MksParams, order: FractionalOrder) -> Self {
        Self {
            mks,
            order,
            c1_0: 0.0,
            c2_0: 1.0,
            c3_0: 1.0,
        }
    }

    /// Requires finite data with `C₂(0)·C₃(0) ≠ 0`.
    pub fn with_initial(mut self, c1_0: f64, c2_0: f64, c3_0: f64) -> Result<Self> {
        if ![c1_0, c2_0, c3_0].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("initial data must be finite".into()));
        }
        if c2_0 * c3_0 == 0.0 {
            return Err(Error::Domain("initial data needs C2(0)·C3(0) != 0".into()));
        }
        self.c1_0 = c1_0;
        self.c2_0 = c2_0;
        self.c3_0 = c3_0;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.order.value()
    }

    /// `(1-λ)γ²(C₂(0)² + C₃(0)²)`, the amplitude of the `C₁` forcing.
    pub fn forcing(&self) -> f64 {
        (1.0 - self.mks.lambda())
            * self.mks.gamma_sq()
            * (self.c2_0 * self.c2_0 + self.c3_0 * self.c3_0)
    }
}

/// How `C₁(t)` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C1Mode {
    /// `C₁(0) + k t^α E_{α,α+1}(θ(2t)^α)`.
    PaperClosedForm,
    /// `C₁(0) + J^α[k E_α(θτ^α)²]` by product-trapezoid quadrature.
    Quadrature,
}

impl fmt::Display for C1Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            C1Mode::PaperClosedForm => "paper",
            C1Mode::Quadrature => "quadrature",
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )))
    }
}

/// `E_α(θ t^α)`, the oscillatory amplitude for unit initial data.
pub fn coeff_c2_c3(t: f64, p: &SolutionParams) -> Result<f64> {
    check_time(t)?;
    let alpha = p.alpha();
    ml_value(MLParams::classical(alpha)?, p.mks.theta() * t.powf(alpha))
}

/// Closed-form `C₁(t) = C₁(0) + k t^α E_{α,α+1}(θ(2t)^α)`, `k` = [`SolutionParams::forcing`].
pub fn coeff_c1_paper(t: f64, p: &SolutionParams) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(p.c1_0);
    }
    let alpha = p.alpha();
    let z = p.mks.theta() * (2.0 * t).powf(alpha);
    let e = ml_value(MLParams::new(alpha, alpha + 1.0)?, z)?;
    Ok(p.c1_0 + p.forcing() * t.powf(alpha) * e)
}

/// `D^α` of [`coeff_c1_paper`]: `k E_α(θ(2t)^α)`.
fn caputo_c1_paper(t: f64, p: &SolutionParams) -> Result<f64> {
    let alpha = p.alpha();
    let z = p.mks.theta() * (2.0 * t).powf(alpha);
    Ok(p.forcing() * ml_value(MLParams::classical(alpha)?, z)?)
}

/// `k E_α(θt^α)²`, the true right-hand side of the `C₁` equation.
fn c1_forcing(t: f64, p: &SolutionParams) -> Result<f64> {
    let e = coeff_c2_c3(t, p)?;
    Ok(p.forcing() * e * e)
}

/// `C₁` on `grid` from `J^α` of the exact forcing, without the composition step.
pub fn coeff_c1_quadrature(grid: &TimeGrid, p: &SolutionParams) -> Result<SampledFunction> {
    let forcing = SampledFunction::try_from_fn(*grid, |t| c1_forcing(t, p))?;
    let integral = rl_integral(&forcing, p.order);
    let values = integral.values().iter().map(|v| v + p.c1_0).collect();
    SampledFunction::new(*grid, values)
}

#[derive(Debug, Clone, PartialEq)]
enum C1Source {
    Paper,
    Quadrature(SampledFunction),
}

/// `u(t, x)` with `C₁` taken from one of the [`C1Mode`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    params: SolutionParams,
    c1: C1Source,
}

impl Solution {
    pub fn paper(params: SolutionParams) -> Self {
        Self {
            params,
            c1: C1Source::Paper,
        }
    }

    /// Precomputes `C₁` on `grid`; evaluation is then restricted to its nodes.
    pub fn quadrature(params: SolutionParams, grid: &TimeGrid) -> Result<Self> {
        Ok(Self {
            params,
            c1: C1Source::Quadrature(coeff_c1_quadrature(grid, &params)?),
        })
    }

    /// `grid` is required for [`C1Mode::Quadrature`] and ignored otherwise.
    pub fn new(params: SolutionParams, mode: C1Mode, grid: Option<&TimeGrid>) -> Result<Self> {
        match mode {
            C1Mode::PaperClosedForm => Ok(Self::paper(params)),
            C1Mode::Quadrature => {
                let grid =
                    grid.ok_or_else(|| Error::Domain("quadrature mode needs a time grid".into()))?;
                Self::quadrature(params, grid)
            }
        }
    }

    pub fn params(&self) -> &SolutionParams {
        &self.params
    }

    pub fn mode(&self) -> C1Mode {
        match self.c1 {
            C1Source::Paper => C1Mode::PaperClosedForm,
            C1Source::Quadrature(_) => C1Mode::Quadrature,
        }
    }

    pub fn c1(&self, t: f64) -> Result<f64> {
        match &self.c1 {
            C1Source::Paper => coeff_c1_paper(t, &self.params),
            C1Source::Quadrature(samples) => samples.value_at(t),
        }
    }

    /// Basis coordinates `(C₁, C₂, C₃)` at time `t`.
    pub fn coefficients(&self, t: f64) -> Result<SubspaceElement> {
        let e = coeff_c2_c3(t, &self.params)?;
        Ok(SubspaceElement::new(
            self.c1(t)?,
            self.params.c2_0 * e,
            self.params.c3_0 * e,
        ))
    }

    pub fn evaluate(&self, t: f64, x: f64) -> Result<f64> {
        let c = self.coefficients(t)?;
        let (s, co) = (self.params.mks.gamma() * x).sin_cos();
        Ok(c.c1 + c.c2 * co + c.c3 * s)
    }
}

/// `R(t, x) = D^α u - F[u]` on a tensor grid, rows indexed by `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub c1_mode: C1Mode,
    pub t_nodes: Vec<f64>,
    pub x_nodes: Vec<f64>,
    pub residual_field: Vec<Vec<f64>>,
    pub max_abs_residual: f64,
    /// `(t, x)` where `|R|` is largest.
    pub argmax: (f64, f64),
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs_residual <= tol
    }
}

/// Analytic PDE residual of the solution with `C₁` per `mode`.
///
/// Spatial derivatives come from the basis; the time derivatives are
/// `D^α C₂,₃ = θ C₂,₃` and, for `C₁`, the closed form's own derivative
/// `k E_α(θ(2t)^α)` or, in quadrature mode, the integrand `k E_α(θt^α)²`.
pub fn pde_residual(
    p: &SolutionParams,
    t_nodes: &[f64],
    x_nodes: &[f64],
    mode: C1Mode,
) -> Result<ResidualReport> {
    if t_nodes.is_empty() || x_nodes.is_empty() {
        return Err(Error::Domain("residual grid must be non-empty".into()));
    }
    if let Some(t) = t_nodes.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!(
            "residual times must be > 0, got {t}"
        )));
    }
    let theta = p.mks.theta();
    let gamma = p.mks.gamma();
    let mut field = Vec::with_capacity(t_nodes.len());
    let mut max_abs_residual: f64 = 0.0;
    let mut argmax = (t_nodes[0], x_nodes[0]);
    for &t in t_nodes {
        let e = coeff_c2_c3(t, p)?;
        let (c2, c3) = (p.c2_0 * e, p.c3_0 * e);
        let d_c1 = match mode {
            C1Mode::PaperClosedForm => caputo_c1_paper(t, p)?,
            C1Mode::Quadrature => c1_forcing(t, p)?,
        };
        // F[u] does not see the constant mode, so C₁ itself is not needed.
        let elem = SubspaceElement::new(0.0, c2, c3);
        let row: Vec<f64> = x_nodes
            .iter()
            .map(|&x| {
                let (s, c) = (gamma * x).sin_cos();
                let d_u = d_c1 + theta * c2 * c + theta * c3 * s;
                d_u - apply_operator_pointwise(elem, &p.mks, x)
            })
            .collect();
        for (&x, &r) in x_nodes.iter().zip(&row) {
            if r.abs() > max_abs_residual {
                max_abs_residual = r.abs();
                argmax = (t, x);
            }
        }
        field.push(row);
    }
    Ok(ResidualReport {
        c1_mode: mode,
        t_nodes: t_nodes.to_vec(),
        x_nodes: x_nodes.to_vec(),
        residual_field: field,
        max_abs_residual,
        argmax,
    })
}

/// `g(t) = E_α(θ(2t)^α) - E_α(θt^α)²` per sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub alpha: f64,
    pub theta: f64,
    pub t_samples: Vec<f64>,
    pub gaps: Vec<f64>,
    pub max_abs_gap: f64,
}

pub fn composition_gap(order: FractionalOrder, theta: f64, t_samples: &[f64]) -> Result<GapReport> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    let alpha = order.value();
    let ml = MLParams::classical(alpha)?;
    let gaps = t_samples
        .iter()
        .map(|&t| {
            check_time(t)?;
            let single = ml_value(ml, theta * t.powf(alpha))?;
            let double = ml_value(ml, theta * (2.0 * t).powf(alpha))?;
            Ok(double - single * single)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_abs_gap = gaps.iter().fold(0.0, |m: f64, g| m.max(g.abs()));
    Ok(GapReport {
        alpha,
        theta,
        t_samples: t_samples.to_vec(),
        gaps,
        max_abs_gap,
    })
}

/// Closed-form special cases, all with `C₁(0) = 0`, `C₂(0) = C₃(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParticularCase {
    /// `λ = 1/2`: `t^α/Γ(α+1) + cos x + sin x`.
    Half,
    /// `λ = 1/m`, any `α`.
    GeneralM(u32),
    /// `λ = 1/m`, `α = 1`.
    Alpha1M(u32),
    /// `λ = 1/m`, `α = 1/2`, with oscillatory factor `e^{θt}` rather than `E_{1/2}(θ√t)`.
    AlphaHalfM(u32),
}

fn check_m(m: u32) -> Result<f64> {
    if m <= 2 {
        return Err(Error::Domain(format!("m must be an integer > 2, got {m}")));
    }
    Ok(m as f64)
}

fn check_order(order: FractionalOrder, expected: f64, case: &str) -> Result<()> {
    if order.value() == expected {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{case} requires alpha = {expected}, got {}",
            order.value()
        )))
    }
}

pub fn particular_case(
    t: f64,
    x: f64,
    order: FractionalOrder,
    case: ParticularCase,
) -> Result<f64> {
    check_time(t)?;
    let alpha = order.value();
    match case {
        ParticularCase::Half => Ok(t.powf(alpha) * rgamma(alpha + 1.0) + x.cos() + x.sin()),
        ParticularCase::GeneralM(m) => {
            let m = check_m(m)?;
            let theta = (m - 1.0) * (2.0 - m);
            let ml = MLParams::classical(alpha)?;
            let pref = 2f64.powf(1.0 - alpha) * (m - 1.0) / (m * (2.0 - m));
            let c1 = pref * (ml_value(ml, theta * 2f64.powf(alpha) * t.powf(alpha))? - 1.0);
            let osc = ml_value(ml, theta * t.powf(alpha))?;
            let gx = (m - 1.0).sqrt() * x;
            Ok(c1 + osc * gx.cos() + osc * gx.sin())
        }
        ParticularCase::Alpha1M(m) => {
            let m = check_m(m)?;
            check_order(order, 1.0, "Alpha1M")?;
            let theta = (m - 1.0) * (2.0 - m);
            let c1 = (m - 1.0) / (m * (2.0 - m)) * ((2.0 * theta * t).exp() - 1.0);
            let osc = (theta * t).exp();
            let gx = (m - 1.0).sqrt() * x;
            Ok(c1 + osc * gx.cos() + osc * gx.sin())
        }
        ParticularCase::AlphaHalfM(m) => {
            let m = check_m(m)?;
            check_order(order, 0.5, "AlphaHalfM")?;
            let theta = (m - 1.0) * (2.0 - m);
            let ml = MLParams::classical(0.5)?;
            let c1 = SQRT_2 * (m - 1.0) / (m * (2.0 - m))
                * (ml_value(ml, SQRT_2 * theta * t.sqrt())? - 1.0);
            let gx = (m - 1.0).sqrt() * x;
            Ok(c1 + (theta * t).exp() * (gx.cos() + gx.sin()))
        }
    }
}

/// `C₁, C₂, C₃` from the predictor-corrector solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSolution {
    pub c1: SampledFunction,
    pub c2: SampledFunction,
    pub c3: SampledFunction,
}

/// Integrates the reduced system directly, without Mittag-Leffler functions.
pub fn reduced_system_numeric(p: &SolutionParams, grid: &TimeGrid) -> Result<ReducedSolution> {
    let a = (1.0 - p.mks.lambda()) * p.mks.gamma_sq();
    let theta = p.mks.theta();
    let ys = abm::solve(
        |y: &[f64; 3]| [a * (y[1] * y[1] + y[2] * y[2]), theta * y[1], theta * y[2]],
        [p.c1_0, p.c2_0, p.c3_0],
        p.order,
        grid,
    );
    let column = |i: usize| SampledFunction::new(*grid, ys.iter().map(|y| y[i]).collect());
    Ok(ReducedSolution {
        c1: column(0)?,
        c2: column(1)?,
        c3: column(2)?,
    })
}
