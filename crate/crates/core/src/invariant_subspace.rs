//! The three-dimensional subspace `W₃ = ⟨1, cos γx, sin γx⟩` and the mKS
//! operator
//!
//! ```text
//! F[u] = -u_xxxx - u_xx + (1-λ) u_x² + λ u_xx²
//! ```
//!
//! which maps `W₃` into itself when `γ² = (1-λ)/λ`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Nodes per period used by [`invariance_check`].
pub const FIT_NODES: usize = 64;
/// Random coefficients are drawn uniformly from `[-COEFF_RANGE, COEFF_RANGE]`.
pub const COEFF_RANGE: f64 = 2.0;

/// Parameters of the mKS operator: `λ`, `γ = √((1-λ)/λ)`, `θ = γ²(1-γ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MksParams {
    lambda: f64,
    gamma_sq: f64,
    gamma: f64,
    theta: f64,
}

impl MksParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Domain(format!(
                "lambda must lie in (0, 1), got {lambda}"
            )));
        }
        Ok(Self::from_parts(lambda, (1.0 - lambda) / lambda))
    }

    /// `λ = 1/m`, so that `γ² = m - 1` is exact for integer `m`.
    pub fn from_m(m: f64) -> Result<Self> {
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::Domain(format!("m must be > 1, got {m}")));
        }
        Ok(Self::from_parts(1.0 / m, m - 1.0))
    }

    fn from_parts(lambda: f64, gamma_sq: f64) -> Self {
        Self {
            lambda,
            gamma_sq,
            gamma: gamma_sq.sqrt(),
            theta: gamma_sq * (1.0 - gamma_sq),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma_sq(&self) -> f64 {
        self.gamma_sq
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Spatial period `2π/γ` of the oscillatory basis functions.
    pub fn period(&self) -> f64 {
        TAU / self.gamma
    }
}

/// `h(x) = c1 + c2 cos γx + c3 sin γx`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SubspaceElement {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl SubspaceElement {
    pub const ZERO: SubspaceElement = SubspaceElement {
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
    };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.c1 - other.c1)
            .abs()
            .max((self.c2 - other.c2).abs())
            .max((self.c3 - other.c3).abs())
    }
}

pub fn evaluate_element(elem: SubspaceElement, params: &MksParams, x: f64) -> f64 {
    let (s, c) = (params.gamma * x).sin_cos();
    elem.c1 + elem.c2 * c + elem.c3 * s
}

/// `F[h](x)` from the closed-form x-derivatives of the basis.
pub fn apply_operator_pointwise(elem: SubspaceElement, params: &MksParams, x: f64) -> f64 {
    let g = params.gamma;
    let g2 = params.gamma_sq;
    let (s, c) = (g * x).sin_cos();
    let osc = elem.c2 * c + elem.c3 * s;
    let u_x = g * (elem.c3 * c - elem.c2 * s);
    let u_xx = -g2 * osc;
    let u_xxxx = g2 * g2 * osc;
    -u_xxxx - u_xx + (1.0 - params.lambda) * u_x * u_x + params.lambda * u_xx * u_xx
}

/// Coordinates of `F[h]` in the basis:
/// `((1-λ)γ²(c2²+c3²), θ c2, θ c3)`.
pub fn coefficient_map(elem: SubspaceElement, params: &MksParams) -> SubspaceElement {
    SubspaceElement {
        c1: (1.0 - params.lambda) * params.gamma_sq * (elem.c2 * elem.c2 + elem.c3 * elem.c3),
        c2: params.theta * elem.c2,
        c3: params.theta * elem.c3,
    }
}

/// `max |L[F[h]](x)|` over `x_nodes`, with `L[y] = y''' + γ² y'`, whose
/// kernel is exactly `W₃`.
pub fn annihilator_residual(elem: SubspaceElement, params: &MksParams, x_nodes: &[f64]) -> f64 {
    let f = coefficient_map(elem, params);
    let g = params.gamma;
    let g2 = params.gamma_sq;
    x_nodes
        .iter()
        .map(|&x| {
            let (s, c) = (g * x).sin_cos();
            let d1 = g * (f.c3 * c - f.c2 * s);
            let d3 = g * g2 * (f.c2 * s - f.c3 * c);
            (d3 + g2 * d1).abs()
        })
        .fold(0.0, f64::max)
}

/// Least-squares projection of samples onto `{1, cos γx, sin γx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFit {
    pub coefficients: SubspaceElement,
    /// `max_k |values[k] - fit(x_k)|`.
    pub max_residual: f64,
}

/// Fits `values` sampled at `xs` by the normal equations.
pub fn fit_to_basis(params: &MksParams, xs: &[f64], values: &[f64]) -> Result<BasisFit> {
    if xs.len() != values.len() || xs.len() < 3 {
        return Err(Error::Domain(
            "basis fit needs at least 3 matching nodes and values".into(),
        ));
    }
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (&x, &v) in xs.iter().zip(values) {
        let (s, c) = (params.gamma * x).sin_cos();
        let row = [1.0, c, s];
        for i in 0..3 {
            atb[i] += row[i] * v;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let sol = solve3(ata, atb).ok_or_else(|| {
        Error::Domain("basis fit is singular; nodes do not separate the basis".into())
    })?;
    let coefficients = SubspaceElement::new(sol[0], sol[1], sol[2]);
    let max_residual = xs
        .iter()
        .zip(values)
        .map(|(&x, &v)| (v - evaluate_element(coefficients, params, x)).abs())
        .fold(0.0, f64::max);
    Ok(BasisFit {
        coefficients,
        max_residual,
    })
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Equispaced nodes covering one period `[0, 2π/γ)`.
pub fn period_nodes(params: &MksParams, n: usize) -> Vec<f64> {
    let period = params.period();
    (0..n).map(|k| period * k as f64 / n as f64).collect()
}

/// The coefficient triples drawn by [`invariance_check`] for a given seed.
pub fn random_elements(trials: usize, seed: u64) -> Vec<SubspaceElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let mut draw = || rng.gen_range(-COEFF_RANGE..=COEFF_RANGE);
            SubspaceElement::new(draw(), draw(), draw())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub lambda: f64,
    pub seed: u64,
    pub trials: usize,
    /// Largest pointwise misfit of `F[h]` against its projection onto `W₃`.
    pub max_fit_residual: f64,
    /// Largest deviation of the fitted coordinates from [`coefficient_map`].
    pub max_coefficient_error: f64,
    pub max_annihilator_residual: f64,
    pub tolerance: f64,
    /// Both the fit residual and the coefficient error are within tolerance.
    pub passed: bool,
}

/// Samples `F[h]` for random `h ∈ W₃` and checks that it stays in `W₃`.
pub fn invariance_check(
    params: &MksParams,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<InvarianceReport> {
    if trials == 0 {
        return Err(Error::Domain(
            "invariance check needs at least one trial".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let xs = period_nodes(params, FIT_NODES);
    let mut max_fit_residual: f64 = 0.0;
    let mut max_coefficient_error: f64 = 0.0;
    let mut max_annihilator_residual: f64 = 0.0;
    for elem in random_elements(trials, seed) {
        let values: Vec<f64> = xs
            .iter()
            .map(|&x| apply_operator_pointwise(elem, params, x))
            .collect();
        let fit = fit_to_basis(params, &xs, &values)?;
        let expected = coefficient_map(elem, params);
        max_fit_residual = max_fit_residual.max(fit.max_residual);
        max_coefficient_error = max_coefficient_error.max(fit.coefficients.max_abs_diff(&expected));
        max_annihilator_residual =
            max_annihilator_residual.max(annihilator_residual(elem, params, &xs));
    }
    Ok(InvarianceReport {
        lambda: params.lambda,
        seed,
        trials,
        max_fit_residual,
        max_coefficient_error,
        max_annihilator_residual,
        tolerance: tol,
        passed: max_fit_residual <= tol && max_coefficient_error <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn third() -> MksParams {
        MksParams::new(1.0 / 3.0).unwrap()
    }

    #[test]
    fn params_relations() {
        let p = third();
        assert!((p.gamma_sq() - 2.0).abs() <= f64::EPSILON * 2.0);
        assert!((p.theta() + 2.0).abs() < 1e-14);
        let half = MksParams::new(0.5).unwrap();
        assert_eq!(half.gamma(), 1.0);
        assert_eq!(half.theta(), 0.0);
        let m3 = MksParams::from_m(3.0).unwrap();
        assert_eq!(m3.gamma_sq(), 2.0);
        assert_eq!(m3.theta(), -2.0);
        assert_eq!(MksParams::from_m(2.0).unwrap().theta(), 0.0);
        assert!(MksParams::new(1.0).is_err());
        assert!(MksParams::new(0.0).is_err());
        assert!(MksParams::from_m(1.0).is_err());
    }

    #[test]
    fn element_values() {
        let half = MksParams::new(0.5).unwrap();
        let e = SubspaceElement::new(0.0, 1.0, 1.0);
        assert_eq!(
            evaluate_element(SubspaceElement::new(1.0, 0.0, 0.0), &third(), 2.3),
            1.0
        );
        assert_eq!(evaluate_element(e, &half, 0.0), 1.0);
        assert!((evaluate_element(e, &half, PI / 4.0) - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn operator_examples() {
        let p = MksParams::from_m(3.0).unwrap();
        let v = apply_operator_pointwise(SubspaceElement::new(0.0, 1.0, 1.0), &p, 0.0);
        assert!((v - 2.0 / 3.0).abs() < 1e-14, "{v}");
        let half = MksParams::new(0.5).unwrap();
        let v = apply_operator_pointwise(SubspaceElement::new(0.0, 1.0, 0.0), &half, 0.0);
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(
            apply_operator_pointwise(SubspaceElement::new(3.0, 0.0, 0.0), &p, 1.1),
            0.0
        );
    }

    #[test]
    fn coefficient_examples() {
        let p = MksParams::from_m(3.0).unwrap();
        let f = coefficient_map(SubspaceElement::new(0.0, 1.0, 1.0), &p);
        assert!((f.c1 - 8.0 / 3.0).abs() < 1e-14);
        assert_eq!((f.c2, f.c3), (-2.0, -2.0));
        assert_eq!(
            coefficient_map(SubspaceElement::new(5.0, 0.0, 0.0), &p),
            SubspaceElement::ZERO
        );
        let half = MksParams::new(0.5).unwrap();
        let f = coefficient_map(SubspaceElement::new(0.0, 1.0, 1.0), &half);
        assert_eq!((f.c1, f.c2, f.c3), (1.0, 0.0, 0.0));
    }

    #[test]
    fn annihilator_kills_basis() {
        let p = third();
        let xs = [0.0, PI / 8.0, PI / 4.0];
        assert!(annihilator_residual(SubspaceElement::new(0.0, 1.0, 1.0), &p, &xs) <= 1e-12);
        assert_eq!(annihilator_residual(SubspaceElement::ZERO, &p, &xs), 0.0);
    }

    #[test]
    fn fit_recovers_exact_element() {
        let p = MksParams::new(0.3).unwrap();
        let xs = period_nodes(&p, FIT_NODES);
        let target = SubspaceElement::new(0.4, -1.3, 0.7);
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| evaluate_element(target, &p, x))
            .collect();
        let fit = fit_to_basis(&p, &xs, &vals).unwrap();
        assert!(fit.coefficients.max_abs_diff(&target) < 1e-14);
        assert!(fit.max_residual < 1e-14);
        let zeros = vec![0.0; xs.len()];
        let fit = fit_to_basis(&p, &xs, &zeros).unwrap();
        assert_eq!(fit.coefficients, SubspaceElement::ZERO);
        assert_eq!(fit.max_residual, 0.0);
    }

    #[test]
    fn fit_rejects_degenerate_nodes() {
        let p = third();
        assert!(fit_to_basis(&p, &[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(fit_to_basis(&p, &[0.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn invariance_passes() {
        for (lambda, seed) in [(0.3, 42), (0.7, 7), (0.5, 0)] {
            let r = invariance_check(&MksParams::new(lambda).unwrap(), 100, seed, 1e-10).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn invariance_argument_validation() {
        let p = third();
        assert!(invariance_check(&p, 0, 1, 1e-10).is_err());
        assert!(invariance_check(&p, 1, 1, 0.0).is_err());
    }

    #[test]
    fn random_elements_are_seeded_and_bounded() {
        let a = random_elements(50, 9);
        assert_eq!(a, random_elements(50, 9));
        assert_ne!(a, random_elements(50, 10));
        assert!(a
            .iter()
            .all(|e| [e.c1, e.c2, e.c3].iter().all(|c| c.abs() <= COEFF_RANGE)));
    }
}
