use std::f64::consts::PI;

use crate::compensated::two_prod;

/// Below this magnitude erf uses its power series.
const SERIES_LIMIT: f64 = 2.5;
/// At and above this argument erfc uses the Laplace continued fraction
/// rather than `1 - erf`, which would lose relative accuracy.
const FRACTION_LIMIT: f64 = 2.0;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// `exp(-x²)` with the rounding error of `x²` folded back in.
fn exp_neg_sq(x: f64) -> f64 {
    let (sq, lo) = two_prod(x, x);
    (-sq).exp() * (1.0 - lo)
}

/// erf(x) = (2/√π) x e^{-x²} Σ (2x²)^n / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * exp_neg_sq(x) * sum
}

/// erfc(x) for x ≥ FRACTION_LIMIT via
/// √π e^{x²} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))).
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    exp_neg_sq(x) / (PI.sqrt() * f)
}

/// The error function `(2/√π) ∫₀ˣ e^{-y²} dy`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        erf_series(x)
    } else {
        (1.0 - erfc_continued_fraction(ax)).copysign(x)
    }
}

/// The complementary error function `1 - erf(x)`, accurate in relative terms
/// for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= FRACTION_LIMIT {
        erfc_continued_fraction(x)
    } else if x <= -SERIES_LIMIT {
        2.0 - erfc_continued_fraction(-x)
    } else {
        1.0 - erf_series(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_oddness() {
        assert_eq!(erf(0.0), 0.0);
        for &x in &[0.3, 1.0, 2.49, 2.51, 4.0] {
            assert_eq!(erf(-x), -erf(x));
        }
    }

    #[test]
    fn saturates() {
        assert_eq!(erf(30.0), 1.0);
        assert_eq!(erfc(30.0), 0.0);
        assert_eq!(erfc(-30.0), 2.0);
    }

    #[test]
    fn continuous_across_switch() {
        let below = erfc(FRACTION_LIMIT - 1e-12);
        let above = erfc(FRACTION_LIMIT);
        assert!(((below - above) / above).abs() < 1e-11);
    }

    #[test]
    fn erfc_plus_erf_is_one() {
        for &x in &[-3.0, -1.0, 0.2, 1.7, 2.7] {
            assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-15);
        }
    }
}
