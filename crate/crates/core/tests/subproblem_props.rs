mod common;

use common::{subproblem_suite, suite};
use oa_core::subproblems::{solve_f, solve_p, slater_margin, POutcome, SlaterMargin, SubproblemConfig};

#[test]
fn linearized_optimality_and_cut_exclusion() {
    let st = subproblem_suite(1e-6);
    assert!(st.errors.is_empty(), "{:?}", st.errors);
    assert!(st.feasible >= 500, "only {} feasible subproblems", st.feasible);
    assert!(st.infeasible > 0);
    assert_eq!(st.gap_failures, 0, "worst gap {:e}", st.worst_gap);
    assert_eq!(st.exclusion_failures, 0);
}

#[test]
fn kkt_residuals_and_multiplier_signs() {
    let cfg = SubproblemConfig::<f64>::default();
    for prob in suite().iter().take(40) {
        for y in prob.y_points().take(10) {
            match solve_p(prob, &y, &cfg).unwrap() {
                POutcome::Feasible(out) => {
                    assert!(out.stationarity_residual <= 1e-7, "{}", out.stationarity_residual);
                    for (mu, g) in out.multipliers.iter().zip(&out.con_values) {
                        assert!(*mu >= 0.0);
                        assert!(*g <= 1e-8);
                        assert!((mu * g).abs() <= 1e-7, "complementarity {mu} * {g}");
                    }
                }
                POutcome::Infeasible => {
                    let out = solve_f(prob, &y, &[], &cfg).unwrap();
                    assert!(out.infeas_measure > 0.0);
                    assert!(out.stationarity_residual <= 1e-7, "{}", out.stationarity_residual);
                    for (i, mu) in out.multipliers.iter().enumerate() {
                        assert!((-1e-9..=1.0 + 1e-9).contains(mu), "{mu}");
                        if out.partition.positive.contains(&i) {
                            assert!((mu - 1.0).abs() <= 1e-7);
                        }
                        if out.partition.negative.contains(&i) {
                            assert!(mu.abs() <= 1e-7);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn feasibility_subproblem_respects_hard_constraints() {
    let cfg = SubproblemConfig::<f64>::default();
    let mut checked = 0;
    for prob in suite().iter() {
        for y in prob.y_points().take(6) {
            if !matches!(solve_p(prob, &y, &cfg).unwrap(), POutcome::Infeasible) {
                continue;
            }
            for i in 0..prob.m() {
                let hard = [i];
                let margin = slater_margin(prob, &y, &hard, &cfg).unwrap();
                match solve_f(prob, &y, &hard, &cfg) {
                    Ok(out) => {
                        assert!(out.con_values[i] <= 1e-8);
                        assert!(out.partition.hard == vec![i]);
                        checked += 1;
                    }
                    Err(_) => assert!(matches!(margin, SlaterMargin::Infeasible) || matches!(margin, SlaterMargin::Margin(d) if d < 0.0)),
                }
            }
        }
    }
    assert!(checked > 0);
}
