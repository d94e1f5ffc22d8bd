//! The outer-approximation loop.
//!
//! Each iteration solves the subproblem at the current assignment, adds its
//! linearizations to the pool, and asks the relaxed master for the next
//! assignment. The run ends when the master becomes infeasible. A repeated
//! assignment ends the run with [`OaStatus::CycleDetected`]; with KKT-selected
//! subgradients this cannot happen up to tolerances, with arbitrary active
//! pieces it can.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::master::{
    build_and_solve_master, CutPool, MasterConfig, MasterError, MasterOutcome, VisitTag,
};
use crate::problem::MinlpProblem;
use crate::pwl::{ActiveChoice, PwlError};
use crate::scalar::{ints_to_scalars, Scalar};
use crate::subproblems::{solve_f, solve_p, POutcome, SubproblemConfig, SubproblemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgradientMode {
    /// Subgradients from the subproblem duals.
    Kkt,
    /// First active piece of every term.
    NaiveFirst,
    /// Last active piece of every term.
    NaiveLast,
}

impl SubgradientMode {
    fn naive_choice(self) -> Option<ActiveChoice> {
        match self {
            SubgradientMode::Kkt => None,
            SubgradientMode::NaiveFirst => Some(ActiveChoice::FirstActive),
            SubgradientMode::NaiveLast => Some(ActiveChoice::LastActive),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubgradientMode::Kkt => "kkt",
            SubgradientMode::NaiveFirst => "naive-first",
            SubgradientMode::NaiveLast => "naive-last",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OaConfig<T> {
    pub mode: SubgradientMode,
    /// Defaults to the lower corner of `Y`.
    pub initial_y: Option<Vec<i64>>,
    /// Defaults to `min(10·|Y|, 10000)`.
    pub max_iter: Option<usize>,
    pub subproblem: SubproblemConfig<T>,
    pub master: MasterConfig<T>,
}

impl<T: Scalar> Default for OaConfig<T> {
    fn default() -> Self {
        Self {
            mode: SubgradientMode::Kkt,
            initial_y: None,
            max_iter: None,
            subproblem: SubproblemConfig::default(),
            master: MasterConfig::default(),
        }
    }
}

impl<T: Scalar> OaConfig<T> {
    pub fn with_mode(mode: SubgradientMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    pub fn effective_max_iter(&self, prob: &MinlpProblem<T>) -> usize {
        self.max_iter.unwrap_or_else(|| {
            let card = prob.y_cardinality().saturating_mul(10);
            card.min(10_000) as usize
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OaStatus {
    Optimal,
    Infeasible,
    IterLimit,
    CycleDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubKind {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MasterStatus {
    Solved,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MasterRecord<T> {
    pub status: MasterStatus,
    pub theta: Option<T>,
    pub x: Option<Vec<T>>,
    pub y_next: Option<Vec<i64>>,
    pub theta_at_floor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord<T> {
    pub k: usize,
    pub y: Vec<i64>,
    pub sub_kind: SubKind,
    /// `f(x_k, y_k)` for feasible subproblems, the infeasibility measure otherwise.
    pub sub_value: T,
    pub x: Vec<T>,
    pub t_count: usize,
    pub s_count: usize,
    pub ubd: Option<T>,
    /// Absent when the run stopped before the master solve.
    pub master: Option<MasterRecord<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Incumbent<T> {
    pub x: Vec<T>,
    pub y: Vec<i64>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OaResult<T> {
    pub status: OaStatus,
    pub incumbent: Option<Incumbent<T>>,
    pub trace: Vec<IterationRecord<T>>,
    pub visited: Vec<Vec<i64>>,
    pub pool: CutPool<T>,
    pub master_solves: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OaFailure {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("subproblem at iteration {k}: {source}")]
    Subproblem { k: usize, source: SubproblemError },
    #[error("master at iteration {k}: {source}")]
    Master { k: usize, source: MasterError },
}

impl From<(usize, PwlError)> for OaFailure {
    fn from((k, e): (usize, PwlError)) -> Self {
        OaFailure::Subproblem {
            k,
            source: SubproblemError::Pwl(e),
        }
    }
}

/// A failed run together with everything recorded before the failure.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{failure}")]
pub struct OaError<T: Scalar> {
    pub failure: OaFailure,
    pub partial: Box<OaResult<T>>,
}

struct State<T> {
    result: OaResult<T>,
}

impl<T: Scalar> State<T> {
    fn fail(self, failure: OaFailure) -> OaError<T> {
        OaError {
            failure,
            partial: Box::new(self.result),
        }
    }
}

pub fn run<T: Scalar>(prob: &MinlpProblem<T>, cfg: &OaConfig<T>) -> Result<OaResult<T>, OaError<T>> {
    let mut st = State {
        result: OaResult {
            status: OaStatus::IterLimit,
            incumbent: None,
            trace: Vec::new(),
            visited: Vec::new(),
            pool: CutPool::new(),
            master_solves: 0,
        },
    };
    let max_iter = cfg.effective_max_iter(prob);
    if max_iter == 0 {
        return Err(st.fail(OaFailure::Config("max_iter must be at least 1".into())));
    }
    let mut y = cfg.initial_y.clone().unwrap_or_else(|| prob.y_lower_corner());
    if !prob.contains_y(&y) {
        return Err(st.fail(OaFailure::Config(format!(
            "initial y {y:?} lies outside the integer box"
        ))));
    }
    let naive = cfg.mode.naive_choice();
    let tol_act = &cfg.subproblem.tol_act;
    let mut ubd: Option<T> = None;

    for k in 1..=max_iter {
        st.result.visited.push(y.clone());
        let ys: Vec<T> = ints_to_scalars(&y);
        let sub = match solve_p(prob, &y, &cfg.subproblem) {
            Ok(s) => s,
            Err(source) => return Err(st.fail(OaFailure::Subproblem { k, source })),
        };
        let (sub_kind, sub_value, x_k) = match sub {
            POutcome::Feasible(mut out) => {
                if let Some(choice) = naive {
                    let r = override_feasible(prob, &mut out, &ys, choice, tol_act);
                    if let Err(e) = r {
                        return Err(st.fail((k, e).into()));
                    }
                }
                if let Err(source) = st.result.pool.add_optimality_cuts(k, &out) {
                    return Err(st.fail(OaFailure::Master { k, source }));
                }
                let improves = ubd.as_ref().is_none_or(|u| out.f_value < *u);
                if improves {
                    ubd = Some(out.f_value.clone());
                    st.result.incumbent = Some(Incumbent {
                        x: out.x_star.clone(),
                        y: y.clone(),
                        value: out.f_value.clone(),
                    });
                }
                (SubKind::Feasible, out.f_value, out.x_star)
            }
            POutcome::Infeasible => {
                let mut out = match solve_f(prob, &y, &[], &cfg.subproblem) {
                    Ok(o) => o,
                    Err(source) => return Err(st.fail(OaFailure::Subproblem { k, source })),
                };
                if let Some(choice) = naive {
                    let r = override_infeasible(prob, &mut out.con_subgrads, &out.x_star, &ys, choice, tol_act);
                    if let Err(e) = r {
                        return Err(st.fail((k, e).into()));
                    }
                }
                if let Err(source) = st.result.pool.add_feasibility_cuts(k, &out) {
                    return Err(st.fail(OaFailure::Master { k, source }));
                }
                if let Some(choice) = naive {
                    // naive modes also linearize f at the feasibility point
                    let value = prob.objective().value_unchecked(&out.x_star, &ys);
                    match prob.objective().default_subgradient(&out.x_star, &ys, choice, tol_act) {
                        Ok(sg) => st.result.pool.add_objective_cut(k, &value, &sg, &out.x_star, &ys),
                        Err(e) => return Err(st.fail((k, e).into())),
                    }
                }
                (SubKind::Infeasible, out.infeas_measure, out.x_star)
            }
        };
        st.result.trace.push(IterationRecord {
            k,
            y: y.clone(),
            sub_kind,
            sub_value,
            x: x_k,
            t_count: st.result.pool.count(VisitTag::Feasible),
            s_count: st.result.pool.count(VisitTag::Infeasible),
            ubd: ubd.clone(),
            master: None,
        });

        let master = build_and_solve_master(&st.result.pool, prob, ubd.as_ref(), &cfg.master);
        st.result.master_solves += 1;
        let master = match master {
            Ok(m) => m,
            Err(source) => return Err(st.fail(OaFailure::Master { k, source })),
        };
        let record = st.result.trace.last_mut().expect("pushed above");
        match master {
            MasterOutcome::Infeasible { .. } => {
                record.master = Some(MasterRecord {
                    status: MasterStatus::Infeasible,
                    theta: None,
                    x: None,
                    y_next: None,
                    theta_at_floor: false,
                });
                st.result.status = if st.result.incumbent.is_some() {
                    OaStatus::Optimal
                } else {
                    OaStatus::Infeasible
                };
                return Ok(st.result);
            }
            MasterOutcome::Solved(pt) => {
                record.master = Some(MasterRecord {
                    status: MasterStatus::Solved,
                    theta: Some(pt.theta.clone()),
                    x: Some(pt.x.clone()),
                    y_next: Some(pt.y.clone()),
                    theta_at_floor: pt.theta_at_floor,
                });
                if st.result.pool.is_visited(&pt.y) {
                    st.result.visited.push(pt.y);
                    st.result.status = OaStatus::CycleDetected;
                    return Ok(st.result);
                }
                y = pt.y;
            }
        }
    }
    st.result.status = OaStatus::IterLimit;
    Ok(st.result)
}

fn override_feasible<T: Scalar>(
    prob: &MinlpProblem<T>,
    out: &mut crate::subproblems::FeasibleOutcome<T>,
    ys: &[T],
    choice: ActiveChoice,
    tol_act: &T,
) -> Result<(), PwlError> {
    out.obj_subgrad = prob
        .objective()
        .default_subgradient(&out.x_star, ys, choice, tol_act)?;
    override_infeasible(prob, &mut out.con_subgrads, &out.x_star, ys, choice, tol_act)
}

fn override_infeasible<T: Scalar>(
    prob: &MinlpProblem<T>,
    subgrads: &mut [crate::pwl::JointSubgradient<T>],
    x: &[T],
    ys: &[T],
    choice: ActiveChoice,
    tol_act: &T,
) -> Result<(), PwlError> {
    for (sg, g) in subgrads.iter_mut().zip(prob.constraints()) {
        *sg = g.default_subgradient(x, ys, choice, tol_act)?;
    }
    Ok(())
}

/// True iff no assignment appears twice in the visit log.
pub fn check_no_revisit<T: Scalar>(result: &OaResult<T>) -> bool {
    let v = &result.visited;
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
}

/// One log line per iteration.
pub fn format_iteration<T: Scalar>(rec: &IterationRecord<T>) -> String {
    let sub = match rec.sub_kind {
        SubKind::Feasible => "feasible",
        SubKind::Infeasible => "infeasible",
    };
    let ubd = rec
        .ubd
        .as_ref()
        .map_or_else(|| "inf".to_string(), |u| u.to_string());
    let master = match &rec.master {
        None => "master=none".to_string(),
        Some(m) => match m.status {
            MasterStatus::Infeasible => "master=infeasible".to_string(),
            MasterStatus::Solved => format!(
                "master=solved theta={}{} y_next={:?}",
                m.theta.as_ref().map(|t| t.to_string()).unwrap_or_default(),
                if m.theta_at_floor { "(floor)" } else { "" },
                m.y_next.as_deref().unwrap_or_default()
            ),
        },
    };
    format!(
        "k={} y={:?} sub={} value={} |T|={} |S|={} UBD={} {}",
        rec.k, rec.y, sub, rec.sub_value, rec.t_count, rec.s_count, ubd, master
    )
}
