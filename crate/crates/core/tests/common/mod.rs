#![allow(dead_code)]

use oa_core::instances::{random_instance, RandomSpec};
use oa_core::lp::{solve_lp, LpProblem, LpSolution, LpStatus};
use oa_core::milp::MilpProblem;
use oa_core::problem::MinlpProblem;
use oa_core::subproblems::{
    solve_f, solve_p, verify_cut_exclusion, verify_linearized_optimality, POutcome, SubproblemConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SIZE: u64 = 100;

pub fn suite() -> Vec<MinlpProblem<f64>> {
    (0..SUITE_SIZE).map(|s| random_instance(s, &RandomSpec::default())).collect()
}

fn q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> f64 {
    rng.gen_range(lo..=hi) as f64 / 4.0
}

/// Feasible random LP: rows are satisfied by a hidden point. Bounds mix free,
/// one-sided and boxed variables; `boxed` forces every variable into a box.
pub fn random_lp(seed: u64, boxed: bool) -> LpProblem<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=7);
    let c: Vec<f64> = (0..n).map(|_| q(&mut rng, -12, 12)).collect();
    let mut lp = LpProblem::new(c);
    let z0: Vec<f64> = (0..n).map(|_| q(&mut rng, -8, 8)).collect();
    for (j, zj) in z0.iter().enumerate() {
        let kind = if boxed { 3 } else { rng.gen_range(0..4) };
        let lo = zj - q(&mut rng, 0, 12);
        let hi = zj + q(&mut rng, 0, 12);
        match kind {
            0 => lp.set_bounds(j, None, None),
            1 => lp.set_bounds(j, Some(lo), None),
            2 => lp.set_bounds(j, None, Some(hi)),
            _ => lp.set_bounds(j, Some(lo), Some(hi)),
        }
    }
    for _ in 0..m {
        let a: Vec<f64> = (0..n).map(|_| q(&mut rng, -8, 8)).collect();
        let slack = if rng.gen_bool(0.3) { 0.0 } else { q(&mut rng, 0, 8) };
        let rhs = a.iter().zip(&z0).map(|(x, y)| x * y).sum::<f64>() + slack;
        lp.add_row(a, rhs);
    }
    lp
}

/// Worst violation among strong duality, dual feasibility, complementarity
/// and primal feasibility, scaled by `max(1, |obj|)` where relevant.
pub fn kkt_violation(lp: &LpProblem<f64>, sol: &LpSolution<f64>) -> f64 {
    assert_eq!(sol.status, LpStatus::Optimal);
    let scale = sol.obj.abs().max(1.0);
    let primal = sol.primal_residual(lp);
    let dual_obj = sol.dual_objective(lp, &1e-12).expect("reduced cost on an infinite bound");
    let gap = (dual_obj - sol.obj).abs() / scale;
    let mut dual = 0.0f64;
    for mu in &sol.row_duals {
        dual = dual.max(-mu);
    }
    for j in 0..lp.num_vars() {
        let mut d = lp.c[j];
        for (row, mu) in lp.rows.iter().zip(&sol.row_duals) {
            d += row.coeffs[j] * mu;
        }
        dual = dual.max((d - sol.bound_duals[j]).abs());
        let (lo, hi) = &lp.bounds[j];
        if lo.is_none() {
            dual = dual.max(sol.bound_duals[j]);
        }
        if hi.is_none() {
            dual = dual.max(-sol.bound_duals[j]);
        }
    }
    let comp = sol.complementarity_residual(lp);
    primal.max(gap).max(dual).max(comp)
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (v, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                        *v -= f * p;
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Minimum over all vertices of a bounded LP (every variable boxed).
/// `None` means no feasible vertex.
pub fn vertex_enumeration(lp: &LpProblem<f64>) -> Option<f64> {
    let n = lp.num_vars();
    let mut cons: Vec<(Vec<f64>, f64)> = lp.rows.iter().map(|r| (r.coeffs.clone(), r.rhs)).collect();
    for (j, (lo, hi)) in lp.bounds.iter().enumerate() {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), hi.expect("boxed")));
        e[j] = -1.0;
        cons.push((e, -lo.expect("boxed")));
    }
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = idx.iter().map(|&i| cons[i].0.clone()).collect();
        let b = idx.iter().map(|&i| cons[i].1).collect();
        if let Some(z) = solve_square(a, b) {
            let feasible = cons
                .iter()
                .all(|(a, b)| a.iter().zip(&z).map(|(x, y)| x * y).sum::<f64>() <= b + 1e-9);
            if feasible {
                let v: f64 = lp.c.iter().zip(&z).map(|(x, y)| x * y).sum();
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        // next n-combination of cons
        let k = cons.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < k - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Small MILP whose integer variables have boxes of at most five points.
pub fn random_milp(seed: u64) -> MilpProblem<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let n_int = rng.gen_range(1..=3);
    let n_cont = rng.gen_range(0..=2);
    let n = n_int + n_cont;
    let m = rng.gen_range(1..=4);
    let c: Vec<f64> = (0..n).map(|_| q(&mut rng, -12, 12)).collect();
    let mut lp = LpProblem::new(c);
    for j in 0..n {
        if j < n_int {
            let lo = rng.gen_range(-2..=1) as f64;
            lp.set_bounds(j, Some(lo), Some(lo + rng.gen_range(0..=4) as f64));
        } else {
            let lo = q(&mut rng, -8, 0);
            lp.set_bounds(j, Some(lo), Some(lo + q(&mut rng, 1, 12)));
        }
    }
    for _ in 0..m {
        let a: Vec<f64> = (0..n).map(|_| q(&mut rng, -8, 8)).collect();
        let rhs = q(&mut rng, -4, 12);
        lp.add_row(a, rhs);
    }
    let integer_mask = (0..n).map(|j| j < n_int).collect();
    MilpProblem { lp, integer_mask }
}

/// Enumerates integer assignments and solves the continuous remainder.
pub fn milp_enumeration(p: &MilpProblem<f64>) -> Option<f64> {
    let ints: Vec<usize> = (0..p.lp.num_vars()).filter(|&j| p.integer_mask[j]).collect();
    let ranges: Vec<(i64, i64)> = ints
        .iter()
        .map(|&j| {
            let (lo, hi) = &p.lp.bounds[j];
            (lo.unwrap() as i64, hi.unwrap() as i64)
        })
        .collect();
    let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    let mut best: Option<f64> = None;
    loop {
        let mut lp = p.lp.clone();
        for (k, &j) in ints.iter().enumerate() {
            lp.set_bounds(j, Some(point[k] as f64), Some(point[k] as f64));
        }
        let sol = solve_lp(&lp).unwrap();
        if sol.status == LpStatus::Optimal {
            best = Some(best.map_or(sol.obj, |b: f64| b.min(sol.obj)));
        }
        let mut k = point.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if point[k] < ranges[k].1 {
                point[k] += 1;
                break;
            }
            point[k] = ranges[k].0;
        }
    }
}

#[derive(Debug, Default)]
pub struct SuiteStats {
    pub feasible: usize,
    pub infeasible: usize,
    pub worst_gap: f64,
    pub gap_failures: usize,
    pub exclusion_failures: usize,
    pub errors: Vec<String>,
}

/// Solves the subproblem at every assignment of every suite instance and
/// checks linearized optimality (feasible) or cut exclusion (infeasible).
pub fn subproblem_suite(gap_tol: f64) -> SuiteStats {
    let cfg = SubproblemConfig::<f64>::default();
    let mut st = SuiteStats::default();
    for (seed, prob) in suite().iter().enumerate() {
        for y in prob.y_points() {
            match solve_p(prob, &y, &cfg) {
                Ok(POutcome::Feasible(out)) => {
                    st.feasible += 1;
                    match verify_linearized_optimality(&out, prob, &cfg) {
                        Ok(gap) => {
                            st.worst_gap = st.worst_gap.max(gap);
                            if gap > gap_tol {
                                st.gap_failures += 1;
                            }
                        }
                        Err(e) => st.errors.push(format!("seed {seed} y {y:?}: {e}")),
                    }
                }
                Ok(POutcome::Infeasible) => {
                    st.infeasible += 1;
                    match solve_f(prob, &y, &[], &cfg).and_then(|o| verify_cut_exclusion(&o, prob, &cfg)) {
                        Ok(true) => {}
                        Ok(false) => st.exclusion_failures += 1,
                        Err(e) => st.errors.push(format!("seed {seed} y {y:?}: {e}")),
                    }
                }
                Err(e) => st.errors.push(format!("seed {seed} y {y:?}: {e}")),
            }
        }
    }
    st
}
