//! Fractional Adams-Bashforth-Moulton predictor-corrector for autonomous
//! systems `D^α y = f(y)`, `y(0) = y0`, on a uniform grid.
//!
//! Predictor (product rectangle):
//!
//! ```text
//! yᴾ_{n+1} = y0 + h^α/Γ(α+1) Σ_{j=0}^{n} ((n+1-j)^α - (n-j)^α) f_j
//! ```
//!
//! Corrector (product trapezoid):
//!
//! ```text
//! y_{n+1} = y0 + h^α/Γ(α+2) (f(yᴾ_{n+1}) + Σ_{j=0}^{n} a_{j,n+1} f_j)
//! ```

use crate::fractional_calculus::{FractionalOrder, TimeGrid};
use crate::special_functions::rgamma;

pub fn solve<const N: usize>(
    rhs: impl Fn(&[f64; N]) -> [f64; N],
    y0: [f64; N],
    order: FractionalOrder,
    grid: &TimeGrid,
) -> Vec<[f64; N]> {
    let alpha = order.value();
    let steps = grid.n_steps();
    let h_alpha = grid.step().powf(alpha);
    let pred_scale = h_alpha * rgamma(alpha + 1.0);
    let corr_scale = h_alpha * rgamma(alpha + 2.0);

    let pow_a: Vec<f64> = (0..=steps + 1).map(|d| (d as f64).powf(alpha)).collect();
    let pow_a1: Vec<f64> = (0..=steps + 1)
        .map(|d| (d as f64).powf(alpha + 1.0))
        .collect();
    // Predictor weight for distance d = n - j.
    let pred_w: Vec<f64> = (0..=steps).map(|d| pow_a[d + 1] - pow_a[d]).collect();
    // Corrector weight for 1 <= j <= n at distance d = n - j.
    let corr_w: Vec<f64> = (0..steps)
        .map(|d| pow_a1[d + 2] - 2.0 * pow_a1[d + 1] + pow_a1[d])
        .collect();

    let mut ys = Vec::with_capacity(steps + 1);
    let mut fs = Vec::with_capacity(steps + 1);
    ys.push(y0);
    fs.push(rhs(&y0));

    for n in 0..steps {
        let nf = n as f64;
        let first = pow_a1[n] - (nf - alpha) * pow_a[n + 1];
        let mut pred = [0.0; N];
        let mut corr = [0.0; N];
        for i in 0..N {
            pred[i] = pred_w[n] * fs[0][i];
            corr[i] = first * fs[0][i];
        }
        for (j, f) in fs.iter().enumerate().skip(1) {
            let d = n - j;
            for i in 0..N {
                pred[i] += pred_w[d] * f[i];
                corr[i] += corr_w[d] * f[i];
            }
        }
        let mut y_pred = y0;
        for i in 0..N {
            y_pred[i] += pred_scale * pred[i];
        }
        let f_pred = rhs(&y_pred);
        let mut y_next = y0;
        for i in 0..N {
            y_next[i] += corr_scale * (corr[i] + f_pred[i]);
        }
        fs.push(rhs(&y_next));
        ys.push(y_next);
    }
    ys
}
