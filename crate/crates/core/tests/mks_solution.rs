use std::f64::consts::PI;

use fracmks::fractional_calculus::{caputo_l1, FractionalOrder, SampledFunction, TimeGrid};
use fracmks::invariant_subspace::{period_nodes, MksParams};
use fracmks::mks_solution::{
    coeff_c1_paper, coeff_c1_quadrature, coeff_c2_c3, composition_gap, particular_case,
    pde_residual, reduced_system_numeric, C1Mode, ParticularCase, Solution, SolutionParams,
};
use fracmks::special_functions::{ml_value, MLParams};
use proptest::prelude::*;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn params(mks: MksParams, alpha: f64) -> SolutionParams {
    SolutionParams::new(mks, order(alpha))
}

fn sample_points() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for t in [0.0, 0.1, 0.5, 1.0, 1.7, 2.0] {
        for x in [0.0, 0.4, 1.3, 2.9, 5.0] {
            pts.push((t, x));
        }
    }
    pts
}

#[test]
fn general_m_equals_closed_form_solution() {
    // The m-parameterised form and the t^α E_{α,α+1} form agree for every α.
    for m in [3u32, 4, 5] {
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let sol = Solution::paper(params(MksParams::from_m(m as f64).unwrap(), alpha));
            for (t, x) in sample_points() {
                let a = particular_case(t, x, order(alpha), ParticularCase::GeneralM(m)).unwrap();
                let b = sol.evaluate(t, x).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "m={m} α={alpha} t={t} x={x}"
                );
            }
        }
    }
}

#[test]
fn half_case_equals_closed_form_solution() {
    for alpha in [0.3, 0.5, 1.0] {
        let sol = Solution::paper(params(MksParams::new(0.5).unwrap(), alpha));
        for (t, x) in sample_points() {
            let a = particular_case(t, x, order(alpha), ParticularCase::Half).unwrap();
            assert!((a - sol.evaluate(t, x).unwrap()).abs() < 1e-14);
        }
    }
}

#[test]
fn alpha_half_case_shares_only_the_constant_mode() {
    let half = order(0.5);
    for m in [3u32, 4] {
        // cos γx + sin γx vanishes at γx = 3π/4, leaving C₁ alone.
        let x0 = 0.75 * PI / ((m - 1) as f64).sqrt();
        for t in [0.1, 0.5, 1.0, 2.0] {
            let general = particular_case(t, x0, half, ParticularCase::GeneralM(m)).unwrap();
            let alt = particular_case(t, x0, half, ParticularCase::AlphaHalfM(m)).unwrap();
            assert!((general - alt).abs() < 1e-10, "m={m} t={t}");
        }
        // e^{θt} differs from E_{1/2}(θ√t) away from t = 0.
        let general = particular_case(1.0, 0.0, half, ParticularCase::GeneralM(m)).unwrap();
        let alt = particular_case(1.0, 0.0, half, ParticularCase::AlphaHalfM(m)).unwrap();
        assert!((general - alt).abs() > 1e-2, "m={m}");
    }
}

#[test]
fn general_m_at_alpha_one_matches_exponential_case() {
    for m in [3u32, 4, 7] {
        for (t, x) in sample_points() {
            let g =
                particular_case(t, x, FractionalOrder::ONE, ParticularCase::GeneralM(m)).unwrap();
            let e =
                particular_case(t, x, FractionalOrder::ONE, ParticularCase::Alpha1M(m)).unwrap();
            assert!((g - e).abs() <= 1e-12, "m={m} t={t} x={x}");
        }
    }
}

#[test]
fn closed_form_vs_predictor_corrector() {
    let fine = TimeGrid::new(1.0, 4096).unwrap();
    let coarse = TimeGrid::new(1.0, 1024).unwrap();
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        for lambda in [1.0 / 3.0, 0.25, 0.5] {
            let p = params(MksParams::new(lambda).unwrap(), alpha);
            let exact = coeff_c2_c3(1.0, &p).unwrap();
            let err = |g: &TimeGrid| {
                let r = reduced_system_numeric(&p, g).unwrap();
                (r.c2.last() - exact).abs().max((r.c3.last() - exact).abs())
            };
            let (e_fine, e_coarse) = (err(&fine), err(&coarse));
            assert!(e_fine <= 1e-3, "α={alpha} λ={lambda}: {e_fine}");
            assert!(
                e_fine < e_coarse || e_coarse == 0.0,
                "α={alpha} λ={lambda}: {e_coarse} -> {e_fine}"
            );
        }
    }
}

#[test]
fn c1_modes_agree_only_at_alpha_one() {
    let grid = TimeGrid::new(1.0, 4000).unwrap();
    let half_grid = TimeGrid::new(1.0, 2000).unwrap();
    let mks = MksParams::from_m(3.0).unwrap();

    let p1 = params(mks, 1.0);
    let q = coeff_c1_quadrature(&grid, &p1).unwrap().last();
    let q_coarse = coeff_c1_quadrature(&half_grid, &p1).unwrap().last();
    let quad_tol = 4.0 * (q - q_coarse).abs();
    assert!((coeff_c1_paper(1.0, &p1).unwrap() - q).abs() <= quad_tol.max(1e-12));

    let p = params(mks, 0.5);
    let q = coeff_c1_quadrature(&grid, &p).unwrap().last();
    let q_coarse = coeff_c1_quadrature(&half_grid, &p).unwrap().last();
    let quad_tol = 4.0 * (q - q_coarse).abs();
    let gap = (coeff_c1_paper(1.0, &p).unwrap() - q).abs();
    assert!(gap > 10.0 * quad_tol, "gap {gap} vs tolerance {quad_tol}");
}

#[test]
fn l1_confirms_analytic_time_derivatives() {
    let grid = TimeGrid::new(1.0, 4000).unwrap();
    let mks = MksParams::from_m(3.0).unwrap();
    for alpha in [0.5, 0.75] {
        let p = params(mks, alpha);
        let ml = MLParams::classical(alpha).unwrap();
        let k = 2.0 * (1.0 - mks.lambda()) * mks.gamma_sq();

        // D^α of the closed-form C₁ is k E_α(θ(2t)^α).
        let c1 = SampledFunction::try_from_fn(grid, |t| coeff_c1_paper(t, &p)).unwrap();
        let d = caputo_l1(&c1, order(alpha)).last();
        let expected = k * ml_value(ml, mks.theta() * 2f64.powf(alpha)).unwrap();
        assert!((d - expected).abs() < 5e-3, "α={alpha}: {d} vs {expected}");

        // D^α of the quadrature C₁ is the forcing k E_α(θt^α)².
        let cq = coeff_c1_quadrature(&grid, &p).unwrap();
        let d = caputo_l1(&cq, order(alpha)).last();
        let e = coeff_c2_c3(1.0, &p).unwrap();
        assert!(
            (d - k * e * e).abs() < 5e-3,
            "α={alpha}: {d} vs {}",
            k * e * e
        );
    }
}

#[test]
fn quadrature_residual_is_small() {
    let mks = MksParams::from_m(3.0).unwrap();
    let ts: Vec<f64> = (1..=20).map(|k| k as f64 * 0.1).collect();
    let r = pde_residual(
        &params(mks, 0.5),
        &ts,
        &period_nodes(&mks, 16),
        C1Mode::Quadrature,
    )
    .unwrap();
    assert!(r.max_abs_residual <= 5e-3);
    assert_eq!(r.c1_mode, C1Mode::Quadrature);
}

#[test]
fn paper_residual_reports_location() {
    let mks = MksParams::from_m(3.0).unwrap();
    let ts = [0.5, 1.0, 1.5];
    let r = pde_residual(&params(mks, 0.5), &ts, &[0.0, 1.0], C1Mode::PaperClosedForm).unwrap();
    let max_in_field = r
        .residual_field
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    assert_eq!(r.max_abs_residual, max_in_field);
    // g(t) peaks before t = 1 for θ = -2, α = 1/2.
    assert_eq!(r.argmax.0, 0.5);
}

#[test]
fn non_unit_initial_data_at_alpha_one() {
    let mks = MksParams::from_m(4.0).unwrap();
    let p = params(mks, 1.0).with_initial(0.3, 2.0, -0.5).unwrap();
    let ts: Vec<f64> = (1..=10).map(|k| k as f64 * 0.2).collect();
    let r = pde_residual(&p, &ts, &period_nodes(&mks, 16), C1Mode::PaperClosedForm).unwrap();
    assert!(r.max_abs_residual <= 1e-9);
    let sol = Solution::paper(p);
    assert!((sol.evaluate(0.0, 0.0).unwrap() - 2.3).abs() < 1e-15);

    let grid = TimeGrid::new(1.0, 2048).unwrap();
    let num = reduced_system_numeric(&p, &grid).unwrap();
    let c = sol.coefficients(1.0).unwrap();
    assert!((num.c1.last() - c.c1).abs() < 1e-5);
    assert!((num.c2.last() - c.c2).abs() < 1e-5);
    assert!((num.c3.last() - c.c3).abs() < 1e-5);
}

#[test]
fn gap_matches_reference_for_half_order() {
    let ts = [0.5, 1.0, 1.5, 2.0];
    let r = composition_gap(order(0.5), -2.0, &ts).unwrap();
    // Reference values from a 30-digit series evaluation.
    let expected = [
        0.142_362_545_049_566_3,
        0.123_594_331_125_837_25,
        0.110_726_503_581_228_82,
        0.101_345_980_860_865_22,
    ];
    for (g, e) in r.gaps.iter().zip(expected) {
        assert!((g - e).abs() < 1e-10, "{g} vs {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn half_lambda_is_exact_for_every_order(alpha in 0.01f64..=1.0, t in 0.01f64..3.0) {
        let p = params(MksParams::new(0.5).unwrap(), alpha);
        let r = pde_residual(&p, &[t], &period_nodes(&p.mks, 16), C1Mode::PaperClosedForm).unwrap();
        prop_assert!(r.max_abs_residual <= 1e-12);
    }

    #[test]
    fn paper_residual_is_x_independent(alpha in 0.2f64..=1.0, m in 3u32..6, t in 0.05f64..2.0) {
        let mks = MksParams::from_m(m as f64).unwrap();
        let p = params(mks, alpha);
        let r = pde_residual(&p, &[t], &period_nodes(&mks, 24), C1Mode::PaperClosedForm).unwrap();
        let g = composition_gap(order(alpha), mks.theta(), &[t]).unwrap().gaps[0];
        let k = 2.0 * (1.0 - mks.lambda()) * mks.gamma_sq();
        for v in &r.residual_field[0] {
            prop_assert!((v - k * g).abs() <= 1e-10);
        }
    }

    #[test]
    fn initial_data_is_reproduced(alpha in 0.1f64..=1.0, lambda in 0.1f64..0.9, x in 0.0f64..7.0) {
        let p = params(MksParams::new(lambda).unwrap(), alpha);
        let gx = p.mks.gamma() * x;
        let u0 = Solution::paper(p).evaluate(0.0, x).unwrap();
        prop_assert!((u0 - (gx.cos() + gx.sin())).abs() < 1e-15);
    }
}
