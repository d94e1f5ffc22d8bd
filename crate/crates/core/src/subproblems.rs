//! The fixed-`y` subproblems as epigraph LPs, and recovery of KKT data from
//! their duals.
//!
//! `P^y` minimizes `f(·, y)` subject to `g(·, y) ≤ 0` over the box `X`.
//! `F^y` minimizes `Σ_{i∉J} [g_i(·, y)]_+` subject to `g_i(·, y) ≤ 0` for
//! `i ∈ J`. Both are written with one epigraph variable per objective term and
//! one row per affine piece, so the simplex multipliers of the piece rows are
//! exactly the convex-combination weights behind a KKT-compatible choice of
//! subgradients: the weights of a term sum to the multiplier of its function,
//! and stationarity of the LP in `x` is stationarity of the KKT system.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{solve_lp_with, LpConfig, LpError, LpProblem, LpSolution, LpStatus};
use crate::problem::{MinlpProblem, ProblemError};
use crate::pwl::{one_hot_active, ActiveChoice, JointSubgradient, PwlError, PwlFunction};
use crate::scalar::{dot, ints_to_scalars, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubproblemError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("constraint index {0} out of range")]
    BadIndex(usize),
    #[error("hard constraints {0:?} admit no x in X at this y")]
    HardConstraintsInfeasible(Vec<usize>),
    #[error("feasibility subproblem reached zero infeasibility ({0}); y is feasible")]
    NotInfeasible(f64),
    #[error("constraint {constraint}: slack multiplier {value} outside [0, 1]")]
    DualOutOfRange { constraint: usize, value: f64 },
    #[error("subproblem LP reported unbounded over a compact box")]
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct SubproblemConfig<T> {
    pub lp: LpConfig<T>,
    /// Piece activity tolerance.
    pub tol_act: T,
    /// Sign tolerance when partitioning constraints at an infeasible point.
    pub tol_partition: T,
    /// Dual mass below which a term falls back to its first active piece.
    pub weight_tol: T,
    /// Distance to a bound that still counts as on the bound.
    pub bound_tol: T,
}

impl<T: Scalar> Default for SubproblemConfig<T> {
    fn default() -> Self {
        Self {
            lp: LpConfig::default(),
            tol_act: T::tolerance(1e-8),
            tol_partition: T::tolerance(1e-8),
            weight_tol: T::tolerance(1e-9),
            bound_tol: T::tolerance(1e-9),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleOutcome<T> {
    pub y: Vec<i64>,
    pub x_star: Vec<T>,
    pub f_value: T,
    pub obj_subgrad: JointSubgradient<T>,
    pub con_subgrads: Vec<JointSubgradient<T>>,
    pub con_values: Vec<T>,
    pub multipliers: Vec<T>,
    pub stationarity_residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Constraints kept hard (`J`).
    pub hard: Vec<usize>,
    /// Softened constraints with `g_i = 0` at the solution.
    pub zero: Vec<usize>,
    /// Softened constraints with `g_i > 0`.
    pub positive: Vec<usize>,
    /// Softened constraints with `g_i < 0`.
    pub negative: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibleOutcome<T> {
    pub y: Vec<i64>,
    pub x_star: Vec<T>,
    pub infeas_measure: T,
    pub con_subgrads: Vec<JointSubgradient<T>>,
    pub con_values: Vec<T>,
    pub multipliers: Vec<T>,
    pub partition: Partition,
    pub stationarity_residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum POutcome<T> {
    Feasible(FeasibleOutcome<T>),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SlaterMargin<T> {
    /// `J` is empty: the condition holds vacuously.
    Vacuous,
    Margin(T),
    /// The margin LP itself is infeasible.
    Infeasible,
}

/// Where the rows of one function live inside an epigraph LP.
struct FunctionRows {
    term_rows: Vec<Vec<usize>>,
    /// Row whose dual is the function's multiplier when it has several terms.
    aggregate: Option<usize>,
}

#[derive(Clone, Copy)]
enum Epigraph {
    /// `g ≤ 0`
    Hard,
    /// `g ≤ s` with the given slack column.
    Slack(usize),
}

struct EpigraphLp<T> {
    n: usize,
    lp: LpProblem<T>,
}

impl<T: Scalar> EpigraphLp<T> {
    fn new(bounds: &[(T, T)]) -> Self {
        let n = bounds.len();
        let mut lp = LpProblem::new(vec![T::zero(); n]);
        for (j, (lo, hi)) in bounds.iter().enumerate() {
            lp.set_bounds(j, Some(lo.clone()), Some(hi.clone()));
        }
        Self { n, lp }
    }

    fn add_var(&mut self, cost: T, lower: Option<T>) -> usize {
        let idx = self.lp.c.len();
        self.lp.c.push(cost);
        self.lp.bounds.push((lower, None));
        for row in &mut self.lp.rows {
            row.coeffs.push(T::zero());
        }
        idx
    }

    /// Row `Σ_j coeffs_j z_j ≤ rhs` where `coeffs` covers the first `coeffs.len()` columns.
    fn add_row(&mut self, mut coeffs: Vec<T>, extra: &[(usize, T)], rhs: T) -> usize {
        coeffs.resize(self.lp.c.len(), T::zero());
        for (col, v) in extra {
            coeffs[*col] = coeffs[*col].clone() + v.clone();
        }
        self.lp.add_row(coeffs, rhs);
        self.lp.rows.len() - 1
    }

    /// `Σ_t max_k piece_tk(x, y) ≤ θ` for an objective (one epigraph column per term, cost 1).
    fn add_objective(&mut self, f: &PwlFunction<T>, y: &[T]) -> FunctionRows {
        let mut term_rows = Vec::new();
        for term in f.terms() {
            let theta = self.add_var(T::one(), None);
            let rows = term
                .pieces()
                .iter()
                .map(|pc| {
                    let rhs = -(dot(&pc.b, y) + pc.c.clone());
                    self.add_row(pc.a.clone(), &[(theta, -T::one())], rhs)
                })
                .collect();
            term_rows.push(rows);
        }
        FunctionRows {
            term_rows,
            aggregate: None,
        }
    }

    /// `g(x, y) ≤ 0` or `g(x, y) ≤ s`.
    fn add_constraint(&mut self, g: &PwlFunction<T>, y: &[T], mode: Epigraph) -> FunctionRows {
        let slack_entry: Vec<(usize, T)> = match mode {
            Epigraph::Hard => vec![],
            Epigraph::Slack(col) => vec![(col, -T::one())],
        };
        if g.terms().len() == 1 {
            let rows = g.terms()[0]
                .pieces()
                .iter()
                .map(|pc| {
                    let rhs = -(dot(&pc.b, y) + pc.c.clone());
                    self.add_row(pc.a.clone(), &slack_entry, rhs)
                })
                .collect();
            return FunctionRows {
                term_rows: vec![rows],
                aggregate: None,
            };
        }
        let mut term_rows = Vec::new();
        let mut aux = Vec::new();
        for term in g.terms() {
            let u = self.add_var(T::zero(), None);
            aux.push((u, T::one()));
            let rows = term
                .pieces()
                .iter()
                .map(|pc| {
                    let rhs = -(dot(&pc.b, y) + pc.c.clone());
                    self.add_row(pc.a.clone(), &[(u, -T::one())], rhs)
                })
                .collect();
            term_rows.push(rows);
        }
        aux.extend(slack_entry);
        let aggregate = self.add_row(Vec::new(), &aux, T::zero());
        FunctionRows {
            term_rows,
            aggregate: Some(aggregate),
        }
    }

    fn x_of(&self, sol: &LpSolution<T>) -> Vec<T> {
        sol.z[..self.n].to_vec()
    }
}

impl FunctionRows {
    /// The function's multiplier: aggregate dual, or the dual mass of its single term.
    fn multiplier<T: Scalar>(&self, duals: &[T]) -> T {
        match self.aggregate {
            Some(r) => duals[r].clone(),
            None => self.term_rows[0]
                .iter()
                .fold(T::zero(), |acc, r| acc + duals[*r].clone()),
        }
    }

    /// Per-term convex weights from the duals; terms with no dual mass use their first active piece.
    fn weights<T: Scalar>(
        &self,
        g: &PwlFunction<T>,
        x: &[T],
        y: &[T],
        duals: &[T],
        cfg: &SubproblemConfig<T>,
    ) -> Vec<Vec<T>> {
        self.term_rows
            .iter()
            .zip(g.terms())
            .map(|(rows, term)| {
                let mass = rows.iter().fold(T::zero(), |acc, r| acc + duals[*r].clone());
                if mass <= cfg.weight_tol {
                    one_hot_active(term, x, y, ActiveChoice::FirstActive, &cfg.tol_act)
                } else {
                    rows.iter().map(|r| duals[*r].clone() / mass.clone()).collect()
                }
            })
            .collect()
    }
}

/// Componentwise distance of `v` to the normal cone of the box at `x`.
pub fn normal_cone_residual<T: Scalar>(v: &[T], x: &[T], bounds: &[(T, T)], bound_tol: &T) -> T {
    let mut worst = T::zero();
    for ((vj, xj), (lo, hi)) in v.iter().zip(x).zip(bounds) {
        let at_lo = xj.clone() - lo.clone() <= *bound_tol;
        let at_hi = hi.clone() - xj.clone() <= *bound_tol;
        let r = match (at_lo, at_hi) {
            (true, true) => T::zero(),
            (true, false) => vj.clone().max_of(T::zero()),
            (false, true) => (-vj.clone()).max_of(T::zero()),
            (false, false) => vj.abs(),
        };
        worst = worst.max_of(r);
    }
    worst
}

/// `-(alpha + Σ_i λ_i ξ_i)`, the vector that must lie in the normal cone.
fn stationarity_vector<T: Scalar>(
    n: usize,
    alpha: Option<&[T]>,
    multipliers: &[T],
    subgrads: &[JointSubgradient<T>],
) -> Vec<T> {
    let mut v: Vec<T> = match alpha {
        Some(a) => a.iter().map(|aj| -aj.clone()).collect(),
        None => vec![T::zero(); n],
    };
    for (lam, sg) in multipliers.iter().zip(subgrads) {
        if lam.is_zero() {
            continue;
        }
        for (vj, xi) in v.iter_mut().zip(&sg.alpha) {
            *vj = vj.clone() - lam.clone() * xi.clone();
        }
    }
    v
}

/// Solves `P^y`; on success returns the minimizer with KKT multipliers and subgradients.
pub fn solve_p<T: Scalar>(
    prob: &MinlpProblem<T>,
    y: &[i64],
    cfg: &SubproblemConfig<T>,
) -> Result<POutcome<T>, SubproblemError> {
    prob.check_y(y)?;
    let ys: Vec<T> = ints_to_scalars(y);
    let mut ep = EpigraphLp::new(prob.x_bounds());
    let obj_rows = ep.add_objective(prob.objective(), &ys);
    let con_rows: Vec<FunctionRows> = prob
        .constraints()
        .iter()
        .map(|g| ep.add_constraint(g, &ys, Epigraph::Hard))
        .collect();
    let sol = solve_lp_with(&ep.lp, &cfg.lp)?;
    match sol.status {
        LpStatus::Infeasible => return Ok(POutcome::Infeasible),
        LpStatus::Unbounded => return Err(SubproblemError::Unbounded),
        LpStatus::Optimal => {}
    }
    let x = ep.x_of(&sol);
    let duals = &sol.row_duals;

    let obj_weights = obj_rows.weights(prob.objective(), &x, &ys, duals, cfg);
    let obj_subgrad = prob
        .objective()
        .subgradient_from_weights(&x, &ys, &obj_weights, &cfg.tol_act)?;
    let mut multipliers = Vec::with_capacity(prob.m());
    let mut con_subgrads = Vec::with_capacity(prob.m());
    for (g, rows) in prob.constraints().iter().zip(&con_rows) {
        multipliers.push(rows.multiplier(duals).max_of(T::zero()));
        let w = rows.weights(g, &x, &ys, duals, cfg);
        con_subgrads.push(g.subgradient_from_weights(&x, &ys, &w, &cfg.tol_act)?);
    }
    let v = stationarity_vector(prob.n(), Some(&obj_subgrad.alpha), &multipliers, &con_subgrads);
    let stationarity_residual = normal_cone_residual(&v, &x, prob.x_bounds(), &cfg.bound_tol);
    Ok(POutcome::Feasible(FeasibleOutcome {
        y: y.to_vec(),
        f_value: prob.objective().eval(&x, &ys)?,
        con_values: prob.eval_constraints(&x, y)?,
        x_star: x,
        obj_subgrad,
        con_subgrads,
        multipliers,
        stationarity_residual,
    }))
}

/// Solves `F^y` with the constraints in `hard` kept as hard rows.
pub fn solve_f<T: Scalar>(
    prob: &MinlpProblem<T>,
    y: &[i64],
    hard: &[usize],
    cfg: &SubproblemConfig<T>,
) -> Result<InfeasibleOutcome<T>, SubproblemError> {
    prob.check_y(y)?;
    if let Some(bad) = hard.iter().find(|i| **i >= prob.m()) {
        return Err(SubproblemError::BadIndex(*bad));
    }
    let is_hard = |i: usize| hard.contains(&i);
    let ys: Vec<T> = ints_to_scalars(y);
    let mut ep = EpigraphLp::new(prob.x_bounds());
    let mut con_rows = Vec::with_capacity(prob.m());
    for (i, g) in prob.constraints().iter().enumerate() {
        let mode = if is_hard(i) {
            Epigraph::Hard
        } else {
            Epigraph::Slack(ep.add_var(T::one(), Some(T::zero())))
        };
        con_rows.push(ep.add_constraint(g, &ys, mode));
    }
    let sol = solve_lp_with(&ep.lp, &cfg.lp)?;
    match sol.status {
        LpStatus::Infeasible => {
            let mut h = hard.to_vec();
            h.sort_unstable();
            return Err(SubproblemError::HardConstraintsInfeasible(h));
        }
        LpStatus::Unbounded => return Err(SubproblemError::Unbounded),
        LpStatus::Optimal => {}
    }
    let x = ep.x_of(&sol);
    let duals = &sol.row_duals;
    let con_values = prob.eval_constraints(&x, y)?;

    let mut partition = Partition {
        hard: Vec::new(),
        zero: Vec::new(),
        positive: Vec::new(),
        negative: Vec::new(),
    };
    let mut measure = T::zero();
    let mut multipliers = Vec::with_capacity(prob.m());
    let mut con_subgrads = Vec::with_capacity(prob.m());
    let clamp_tol = T::tolerance(1e-9);
    for (i, (g, rows)) in prob.constraints().iter().zip(&con_rows).enumerate() {
        let gi = con_values[i].clone();
        let t = rows.multiplier(duals);
        let lam = if is_hard(i) {
            partition.hard.push(i);
            t.max_of(T::zero())
        } else if gi.abs() <= cfg.tol_partition {
            partition.zero.push(i);
            if t < -clamp_tol.clone() || t > T::one() + clamp_tol.clone() {
                return Err(SubproblemError::DualOutOfRange {
                    constraint: i,
                    value: t.approx_f64(),
                });
            }
            t.max_of(T::zero()).min_of(T::one())
        } else if gi > T::zero() {
            partition.positive.push(i);
            measure = measure + gi.clone();
            T::one()
        } else {
            partition.negative.push(i);
            T::zero()
        };
        multipliers.push(lam);
        let w = rows.weights(g, &x, &ys, duals, cfg);
        con_subgrads.push(g.subgradient_from_weights(&x, &ys, &w, &cfg.tol_act)?);
    }
    if measure <= cfg.tol_partition {
        return Err(SubproblemError::NotInfeasible(measure.approx_f64()));
    }
    let v = stationarity_vector(prob.n(), None, &multipliers, &con_subgrads);
    let stationarity_residual = normal_cone_residual(&v, &x, prob.x_bounds(), &cfg.bound_tol);
    Ok(InfeasibleOutcome {
        y: y.to_vec(),
        x_star: x,
        infeas_measure: measure,
        con_subgrads,
        con_values,
        multipliers,
        partition,
        stationarity_residual,
    })
}

/// `|min LP(x_j, y_j) - f(x_j, y_j)|` for the linearization built from `outcome`.
pub fn verify_linearized_optimality<T: Scalar>(
    outcome: &FeasibleOutcome<T>,
    prob: &MinlpProblem<T>,
    cfg: &SubproblemConfig<T>,
) -> Result<T, SubproblemError> {
    let xj = &outcome.x_star;
    let mut lp = LpProblem::new(outcome.obj_subgrad.alpha.clone());
    for (j, (lo, hi)) in prob.x_bounds().iter().enumerate() {
        lp.set_bounds(j, Some(lo.clone()), Some(hi.clone()));
    }
    for (gi, sg) in outcome.con_values.iter().zip(&outcome.con_subgrads) {
        // g_i(x_j) + ξ·(x - x_j) ≤ 0
        let rhs = dot(&sg.alpha, xj) - gi.clone();
        lp.add_row(sg.alpha.clone(), rhs);
    }
    let sol = solve_lp_with(&lp, &cfg.lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(SubproblemError::HardConstraintsInfeasible(
                (0..prob.m()).collect(),
            ))
        }
        LpStatus::Unbounded => return Err(SubproblemError::Unbounded),
    }
    let value = outcome.f_value.clone() + sol.obj - dot(&outcome.obj_subgrad.alpha, xj);
    Ok((value - outcome.f_value.clone()).abs())
}

/// True iff `{x ∈ X : g_i(x_l, y_l) + ξ_i·(x - x_l) ≤ 0 for all i}` is empty
/// for the linearizations carried by `outcome`.
pub fn verify_cut_exclusion<T: Scalar>(
    outcome: &InfeasibleOutcome<T>,
    prob: &MinlpProblem<T>,
    cfg: &SubproblemConfig<T>,
) -> Result<bool, SubproblemError> {
    let xl = &outcome.x_star;
    let mut lp = LpProblem::new(vec![T::zero(); prob.n()]);
    for (j, (lo, hi)) in prob.x_bounds().iter().enumerate() {
        lp.set_bounds(j, Some(lo.clone()), Some(hi.clone()));
    }
    for (gi, sg) in outcome.con_values.iter().zip(&outcome.con_subgrads) {
        let rhs = dot(&sg.alpha, xl) - gi.clone();
        lp.add_row(sg.alpha.clone(), rhs);
    }
    let sol = solve_lp_with(&lp, &cfg.lp)?;
    Ok(sol.status == LpStatus::Infeasible)
}

/// `max δ  s.t.  g_i(x, y) ≤ -δ (i ∈ J),  x ∈ X`.
pub fn slater_margin<T: Scalar>(
    prob: &MinlpProblem<T>,
    y: &[i64],
    subset: &[usize],
    cfg: &SubproblemConfig<T>,
) -> Result<SlaterMargin<T>, SubproblemError> {
    prob.check_y(y)?;
    if subset.is_empty() {
        return Ok(SlaterMargin::Vacuous);
    }
    if let Some(bad) = subset.iter().find(|i| **i >= prob.m()) {
        return Err(SubproblemError::BadIndex(*bad));
    }
    let ys: Vec<T> = ints_to_scalars(y);
    let mut ep = EpigraphLp::new(prob.x_bounds());
    let delta = ep.add_var(-T::one(), None);
    for &i in subset {
        // g_i ≤ s and s + δ ≤ 0
        let s = ep.add_var(T::zero(), None);
        ep.add_row(Vec::new(), &[(s, T::one()), (delta, T::one())], T::zero());
        ep.add_constraint(&prob.constraints()[i], &ys, Epigraph::Slack(s));
    }
    let sol = solve_lp_with(&ep.lp, &cfg.lp)?;
    Ok(match sol.status {
        LpStatus::Optimal => SlaterMargin::Margin(sol.z[delta].clone()),
        LpStatus::Infeasible => SlaterMargin::Infeasible,
        LpStatus::Unbounded => return Err(SubproblemError::Unbounded),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::example31;
    use crate::pwl::AffinePiece;

    fn cfg() -> SubproblemConfig<f64> {
        SubproblemConfig::default()
    }

    #[test]
    fn example31_first_subproblem_is_infeasible() {
        let prob = example31::<f64>();
        assert_eq!(solve_p(&prob, &[1], &cfg()).unwrap(), POutcome::Infeasible);
    }

    #[test]
    fn affine_objective_over_box() {
        let f = PwlFunction::affine(vec![1.0], vec![1.0], 0.0);
        let prob = MinlpProblem::new(f, vec![], vec![(0.0, 2.0)], vec![(1, 1)]).unwrap();
        let POutcome::Feasible(out) = solve_p(&prob, &[1], &cfg()).unwrap() else {
            panic!("feasible expected")
        };
        assert_eq!(out.x_star, vec![0.0]);
        assert_eq!(out.f_value, 1.0);
        assert_eq!(out.obj_subgrad.alpha, vec![1.0]);
        assert_eq!(out.obj_subgrad.beta, vec![1.0]);
        assert!(out.multipliers.is_empty());
        assert_eq!(out.stationarity_residual, 0.0);
        assert_eq!(verify_linearized_optimality(&out, &prob, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn example31_without_g1() {
        let prob = example31::<f64>();
        let prob = MinlpProblem::new(
            prob.objective().clone(),
            vec![prob.constraints()[1].clone()],
            prob.x_bounds().to_vec(),
            prob.y_bounds().to_vec(),
        )
        .unwrap();
        let POutcome::Feasible(out) = solve_p(&prob, &[1], &cfg()).unwrap() else {
            panic!("feasible expected")
        };
        assert_eq!(out.x_star, vec![0.0]);
        assert_eq!(out.f_value, 1.0);
        assert_eq!(out.multipliers, vec![0.0]);
        assert_eq!(out.obj_subgrad.alpha, vec![1.0]);
        assert!(out.stationarity_residual <= 1e-12);
    }

    #[test]
    fn feasibility_subproblem_with_hard_g2() {
        let prob = example31::<f64>();
        let out = solve_f(&prob, &[1], &[1], &cfg()).unwrap();
        assert!((out.x_star[0] - 1.0).abs() <= 1e-9);
        assert!((out.infeas_measure - 1.0).abs() <= 1e-9);
        assert!(out.stationarity_residual <= 1e-9);
        assert_eq!(out.partition.hard, vec![1]);
        assert_eq!(out.partition.positive, vec![0]);
        assert_eq!(out.multipliers[0], 1.0);
        // the dual is degenerate: either piece weights (1, 0) with λ2 = 1, or (1/2, 1/2) with λ2 = 0
        let xi = out.con_subgrads[0].alpha[0];
        let lam2 = out.multipliers[1];
        assert!((xi + lam2).abs() <= 1e-9, "stationarity: 1·ξ1 + λ2·1 = 0");
    }

    #[test]
    fn feasibility_subproblem_all_soft() {
        let prob = example31::<f64>();
        let out = solve_f(&prob, &[1], &[], &cfg()).unwrap();
        assert!((out.x_star[0] - 1.0).abs() <= 1e-9);
        assert!((out.infeas_measure - 1.0).abs() <= 1e-9);
        assert_eq!(out.partition.positive, vec![0]);
        assert_eq!(out.partition.zero, vec![1]);
        assert!(out.partition.negative.is_empty());
        assert!(out.multipliers[1] >= 0.0 && out.multipliers[1] <= 1.0);
        assert!(out.stationarity_residual <= 1e-9);
        assert!(verify_cut_exclusion(&out, &prob, &cfg()).unwrap());
    }

    #[test]
    fn constant_violation() {
        let f = PwlFunction::affine(vec![0.0], vec![0.0], 0.0);
        let g = PwlFunction::affine(vec![1.0], vec![0.0], 1.0);
        let prob = MinlpProblem::new(f, vec![g], vec![(0.0, 1.0)], vec![(0, 0)]).unwrap();
        let out = solve_f(&prob, &[0], &[], &cfg()).unwrap();
        assert_eq!(out.x_star, vec![0.0]);
        assert_eq!(out.infeas_measure, 1.0);
        assert_eq!(out.con_subgrads[0].alpha, vec![1.0]);
        assert_eq!(out.multipliers, vec![1.0]);
        assert_eq!(out.partition.positive, vec![0]);
    }

    #[test]
    fn feasibility_errors() {
        let prob = example31::<f64>();
        assert_eq!(
            solve_f(&prob, &[1], &[0, 1], &cfg()).unwrap_err(),
            SubproblemError::HardConstraintsInfeasible(vec![0, 1])
        );
        assert_eq!(
            solve_f(&prob, &[1], &[5], &cfg()).unwrap_err(),
            SubproblemError::BadIndex(5)
        );
        assert!(matches!(
            solve_f(&prob, &[7], &[], &cfg()).unwrap_err(),
            SubproblemError::Problem(ProblemError::YOutOfBounds(_))
        ));
        // drop g1: y = 1 becomes feasible and F^y has nothing to measure
        let relaxed = MinlpProblem::new(
            prob.objective().clone(),
            vec![prob.constraints()[1].clone()],
            prob.x_bounds().to_vec(),
            prob.y_bounds().to_vec(),
        )
        .unwrap();
        assert!(matches!(
            solve_f(&relaxed, &[1], &[], &cfg()).unwrap_err(),
            SubproblemError::NotInfeasible(_)
        ));
    }

    #[test]
    fn slater_margins() {
        let prob = example31::<f64>();
        match slater_margin(&prob, &[1], &[1], &cfg()).unwrap() {
            SlaterMargin::Margin(m) => assert!((m - 1.0).abs() <= 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            slater_margin(&prob, &[1], &[], &cfg()).unwrap(),
            SlaterMargin::Vacuous
        );
        match slater_margin(&prob, &[1], &[0], &cfg()).unwrap() {
            SlaterMargin::Margin(m) => assert!(m < 0.0 && (m + 1.0).abs() <= 1e-12),
            other => panic!("{other:?}"),
        }
    }

    /// min max{x, -x} s.t. x ≤ 0.5 over [-1, 1], with b = 0 in the single y slot.
    fn abs_instance() -> MinlpProblem<f64> {
        let f = PwlFunction::max_affine(vec![
            AffinePiece::new(vec![1.0], vec![0.0], 0.0),
            AffinePiece::new(vec![-1.0], vec![0.0], 0.0),
        ])
        .unwrap();
        let g = PwlFunction::affine(vec![1.0], vec![0.0], -0.5);
        MinlpProblem::new(f, vec![g], vec![(-1.0, 1.0)], vec![(0, 0)]).unwrap()
    }

    #[test]
    fn kink_minimizer_has_zero_linearization_gap() {
        let prob = abs_instance();
        let POutcome::Feasible(out) = solve_p(&prob, &[0], &cfg()).unwrap() else {
            panic!()
        };
        assert!(out.x_star[0].abs() <= 1e-12);
        assert!(out.obj_subgrad.alpha[0].abs() <= 1e-12, "weights (1/2, 1/2) at the kink");
        assert!(verify_linearized_optimality(&out, &prob, &cfg()).unwrap() <= 1e-12);

        // the last-active choice (+1) at the kink: min x over [-1, 0.5] reaches -1
        let mut naive = out;
        naive.obj_subgrad.alpha = vec![1.0];
        let gap = verify_linearized_optimality(&naive, &prob, &cfg()).unwrap();
        assert!((gap - 1.0).abs() <= 1e-12);

        // away from the kink only the slope-one piece is active
        let err = prob
            .objective()
            .subgradient_from_weights(&[0.25], &[0.0], &[vec![0.0, 1.0]], &1e-8)
            .unwrap_err();
        assert!(matches!(err, PwlError::InactivePiece { .. }));
    }

    #[test]
    fn normal_cone_signs() {
        let b = [(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, 0.0)];
        let x = [0.0, 1.0, 0.5, 0.0];
        assert_eq!(normal_cone_residual(&[-2.0, 3.0, 0.0, 5.0], &x, &b, &1e-9), 0.0);
        assert_eq!(normal_cone_residual(&[1.0, 0.0, 0.0, 0.0], &x, &b, &1e-9), 1.0);
        assert_eq!(normal_cone_residual(&[0.0, -2.0, 0.0, 0.0], &x, &b, &1e-9), 2.0);
        assert_eq!(normal_cone_residual(&[0.0, 0.0, -0.5, 0.0], &x, &b, &1e-9), 0.5);
    }
}
