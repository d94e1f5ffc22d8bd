//! Cut pool and the relaxed MILP master over `(x, y, θ)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::LpProblem;
use crate::milp::{solve_milp_with, MilpConfig, MilpError, MilpProblem, MilpStatus};
use crate::problem::MinlpProblem;
use crate::pwl::JointSubgradient;
use crate::scalar::{dot, ints_to_scalars, Scalar};
use crate::subproblems::{FeasibleOutcome, InfeasibleOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutKind {
    /// `f(x_j, y_j) + (α, β)·(x - x_j, y - y_j) ≤ θ`
    Objective,
    /// `g_i(x_j, y_j) + (ξ, η)·(x - x_j, y - y_j) ≤ 0`
    Feasibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutSource {
    Objective,
    Constraint(usize),
}

/// `coeff_x·x + coeff_y·y + coeff_theta·θ ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut<T> {
    pub kind: CutKind,
    pub iter: usize,
    pub source: CutSource,
    pub coeff_x: Vec<T>,
    pub coeff_y: Vec<T>,
    pub coeff_theta: T,
    pub rhs: T,
}

impl<T: Scalar> Cut<T> {
    /// Linearization of a function with value `value` and subgradient `sg` at `(x0, y0)`.
    fn linearization(
        kind: CutKind,
        iter: usize,
        source: CutSource,
        value: &T,
        sg: &JointSubgradient<T>,
        x0: &[T],
        y0: &[T],
    ) -> Self {
        let coeff_theta = match kind {
            CutKind::Objective => -T::one(),
            CutKind::Feasibility => T::zero(),
        };
        Self {
            kind,
            iter,
            source,
            coeff_x: sg.alpha.clone(),
            coeff_y: sg.beta.clone(),
            coeff_theta,
            rhs: sg.apply(x0, y0) - value.clone(),
        }
    }

    /// `lhs - rhs` at a point; nonpositive means satisfied.
    pub fn violation(&self, x: &[T], y: &[T], theta: &T) -> T {
        dot(&self.coeff_x, x) + dot(&self.coeff_y, y) + self.coeff_theta.clone() * theta.clone()
            - self.rhs.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VisitTag {
    /// Feasible subproblem (the `T` set).
    Feasible,
    /// Infeasible subproblem (the `S` set).
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub iter: usize,
    pub y: Vec<i64>,
    pub tag: VisitTag,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MasterError {
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error("assignment y = {0:?} was already visited")]
    Revisit(Vec<i64>),
    #[error("master unbounded below: theta reached {theta} with objective cuts present (increase theta_max or check the cuts)")]
    UnboundedBelow { theta: f64 },
    #[error("epsilon for the incumbent row must be positive")]
    NonPositiveEpsilon,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CutPool<T> {
    cuts: Vec<Cut<T>>,
    visited: Vec<Visit>,
}

impl<T: Scalar> CutPool<T> {
    pub fn new() -> Self {
        Self {
            cuts: Vec::new(),
            visited: Vec::new(),
        }
    }

    pub fn cuts(&self) -> &[Cut<T>] {
        &self.cuts
    }

    pub fn visited(&self) -> &[Visit] {
        &self.visited
    }

    pub fn is_visited(&self, y: &[i64]) -> bool {
        self.visited.iter().any(|v| v.y == y)
    }

    pub fn count(&self, tag: VisitTag) -> usize {
        self.visited.iter().filter(|v| v.tag == tag).count()
    }

    pub fn has_objective_cuts(&self) -> bool {
        self.cuts.iter().any(|c| c.kind == CutKind::Objective)
    }

    fn visit(&mut self, iter: usize, y: &[i64], tag: VisitTag) -> Result<(), MasterError> {
        if self.is_visited(y) {
            return Err(MasterError::Revisit(y.to_vec()));
        }
        self.visited.push(Visit {
            iter,
            y: y.to_vec(),
            tag,
        });
        Ok(())
    }

    /// One objective cut and `m` constraint cuts at a solved `P^y`.
    pub fn add_optimality_cuts(
        &mut self,
        iter: usize,
        outcome: &FeasibleOutcome<T>,
    ) -> Result<usize, MasterError> {
        self.visit(iter, &outcome.y, VisitTag::Feasible)?;
        let ys = ints_to_scalars(&outcome.y);
        self.add_objective_cut(iter, &outcome.f_value, &outcome.obj_subgrad, &outcome.x_star, &ys);
        self.push_constraint_cuts(iter, &outcome.con_values, &outcome.con_subgrads, &outcome.x_star, &ys);
        Ok(1 + outcome.con_values.len())
    }

    /// `m` constraint cuts at a solved `F^y`.
    pub fn add_feasibility_cuts(
        &mut self,
        iter: usize,
        outcome: &InfeasibleOutcome<T>,
    ) -> Result<usize, MasterError> {
        self.visit(iter, &outcome.y, VisitTag::Infeasible)?;
        let ys = ints_to_scalars(&outcome.y);
        self.push_constraint_cuts(iter, &outcome.con_values, &outcome.con_subgrads, &outcome.x_star, &ys);
        Ok(outcome.con_values.len())
    }

    /// A bare objective linearization; does not touch the visited set.
    pub fn add_objective_cut(
        &mut self,
        iter: usize,
        value: &T,
        sg: &JointSubgradient<T>,
        x0: &[T],
        y0: &[T],
    ) {
        self.cuts.push(Cut::linearization(
            CutKind::Objective,
            iter,
            CutSource::Objective,
            value,
            sg,
            x0,
            y0,
        ));
    }

    fn push_constraint_cuts(
        &mut self,
        iter: usize,
        values: &[T],
        subgrads: &[JointSubgradient<T>],
        x0: &[T],
        y0: &[T],
    ) {
        for (i, (v, sg)) in values.iter().zip(subgrads).enumerate() {
            self.cuts.push(Cut::linearization(
                CutKind::Feasibility,
                iter,
                CutSource::Constraint(i),
                v,
                sg,
                x0,
                y0,
            ));
        }
    }

    /// One cut per line: `kind iter source coeff_x.. coeff_y.. coeff_theta rhs`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for cut in &self.cuts {
            let kind = match cut.kind {
                CutKind::Objective => "objective",
                CutKind::Feasibility => "feasibility",
            };
            let source = match cut.source {
                CutSource::Objective => "objective".to_string(),
                CutSource::Constraint(i) => format!("g{}", i + 1),
            };
            let _ = write!(out, "{kind} {} {source}", cut.iter);
            for v in cut
                .coeff_x
                .iter()
                .chain(&cut.coeff_y)
                .chain([&cut.coeff_theta, &cut.rhs])
            {
                let _ = write!(out, " {}", fmt_num(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Prints zero without a sign.
fn fmt_num<T: Scalar>(v: &T) -> String {
    if v.is_zero() {
        "0".to_string()
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct MasterConfig<T> {
    pub milp: MilpConfig<T>,
    /// Relative margin for `θ < UBD`: the row is `θ ≤ UBD - eps_ubd_rel·max(1, |UBD|)`.
    pub eps_ubd_rel: T,
    pub theta_max: T,
}

impl<T: Scalar> Default for MasterConfig<T> {
    fn default() -> Self {
        Self {
            milp: MilpConfig::default(),
            eps_ubd_rel: T::cast_f64(1e-6),
            theta_max: T::cast_f64(1e12),
        }
    }
}

impl<T: Scalar> MasterConfig<T> {
    pub fn eps_ubd(&self, ubd: &T) -> T {
        self.eps_ubd_rel.clone() * T::one().max_of(ubd.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MasterPoint<T> {
    pub x: Vec<T>,
    pub y: Vec<i64>,
    pub theta: T,
    /// θ sits on `-theta_max` because no objective cut bounds it yet.
    pub theta_at_floor: bool,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MasterOutcome<T> {
    Infeasible { nodes: usize },
    Solved(MasterPoint<T>),
}

/// Assembles the relaxed master from `pool` and solves it.
///
/// Variable layout is `(x, y, θ)`. With `ubd = Some(u)` the row
/// `θ ≤ u - eps` stands in for the strict `θ < u`.
pub fn build_and_solve_master<T: Scalar>(
    pool: &CutPool<T>,
    prob: &MinlpProblem<T>,
    ubd: Option<&T>,
    cfg: &MasterConfig<T>,
) -> Result<MasterOutcome<T>, MasterError> {
    if cfg.eps_ubd_rel <= T::zero() {
        return Err(MasterError::NonPositiveEpsilon);
    }
    let (n, p) = (prob.n(), prob.p());
    let nv = n + p + 1;
    let theta = n + p;
    let mut c = vec![T::zero(); nv];
    c[theta] = T::one();
    let mut lp = LpProblem::new(c);
    for (j, (lo, hi)) in prob.x_bounds().iter().enumerate() {
        lp.set_bounds(j, Some(lo.clone()), Some(hi.clone()));
    }
    for (k, (lo, hi)) in prob.y_bounds().iter().enumerate() {
        lp.set_bounds(n + k, Some(T::from_int(*lo)), Some(T::from_int(*hi)));
    }
    // with objective cuts θ is bounded below by a linear function on a box; keep it free
    // so the tableau never carries the theta_max offset
    let bounded_by_cuts = pool.has_objective_cuts();
    if bounded_by_cuts {
        lp.set_bounds(theta, None, None);
    } else {
        lp.set_bounds(theta, Some(-cfg.theta_max.clone()), Some(cfg.theta_max.clone()));
    }
    for cut in &pool.cuts {
        let mut row = Vec::with_capacity(nv);
        row.extend(cut.coeff_x.iter().cloned());
        row.extend(cut.coeff_y.iter().cloned());
        row.push(cut.coeff_theta.clone());
        lp.add_row(row, cut.rhs.clone());
    }
    if let Some(u) = ubd {
        let mut row = vec![T::zero(); nv];
        row[theta] = T::one();
        lp.add_row(row, u.clone() - cfg.eps_ubd(u));
    }
    let mut integer_mask = vec![false; nv];
    for flag in integer_mask.iter_mut().skip(n).take(p) {
        *flag = true;
    }
    let sol = solve_milp_with(&MilpProblem { lp, integer_mask }, &cfg.milp)?;
    if sol.status == MilpStatus::Infeasible {
        return Ok(MasterOutcome::Infeasible {
            nodes: sol.nodes_explored,
        });
    }
    let theta_val = sol.z[theta].clone();
    let floor = -cfg.theta_max.clone();
    if bounded_by_cuts && theta_val <= floor {
        return Err(MasterError::UnboundedBelow {
            theta: theta_val.approx_f64(),
        });
    }
    let y = sol.z[n..n + p]
        .iter()
        .map(|v| v.to_i64().expect("integral master value"))
        .collect();
    Ok(MasterOutcome::Solved(MasterPoint {
        x: sol.z[..n].to_vec(),
        y,
        theta_at_floor: !bounded_by_cuts,
        theta: theta_val,
        nodes: sol.nodes_explored,
    }))
}
