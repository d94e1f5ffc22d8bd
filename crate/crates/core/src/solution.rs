//! Solver output: a serde document and a fixed-precision text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::master::{CutKind, CutPool, VisitTag};
use crate::oa::{MasterStatus, OaConfig, OaResult, OaStatus, SubKind};
use crate::oracle::{OracleResult, OracleStatus};
use crate::scalar::Scalar;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub k: usize,
    pub y: Vec<i64>,
    pub subproblem: SubKind,
    pub value: f64,
    pub x: Vec<f64>,
    pub feasible_visits: usize,
    pub infeasible_visits: usize,
    pub ubd: Option<f64>,
    pub master: Option<MasterStatus>,
    pub theta: Option<f64>,
    pub y_next: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSummary {
    pub total: usize,
    pub objective: usize,
    pub feasibility: usize,
    pub feasible_visits: usize,
    pub infeasible_visits: usize,
}

impl CutSummary {
    pub fn of<T: Scalar>(pool: &CutPool<T>) -> Self {
        let objective = pool
            .cuts()
            .iter()
            .filter(|c| c.kind == CutKind::Objective)
            .count();
        Self {
            total: pool.cuts().len(),
            objective,
            feasibility: pool.cuts().len() - objective,
            feasible_visits: pool.count(VisitTag::Feasible),
            infeasible_visits: pool.count(VisitTag::Infeasible),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scalar: String,
    pub mode: String,
    pub initial_y: Option<Vec<i64>>,
    pub max_iter: usize,
    pub eps_ubd_rel: f64,
    pub theta_max: f64,
    pub tol_feas: f64,
    pub tol_act: f64,
    pub int_tol: f64,
}

impl ConfigEcho {
    pub fn of<T: Scalar>(cfg: &OaConfig<T>, max_iter: usize, scalar: &str) -> Self {
        Self {
            scalar: scalar.to_string(),
            mode: cfg.mode.as_str().to_string(),
            initial_y: cfg.initial_y.clone(),
            max_iter,
            eps_ubd_rel: cfg.master.eps_ubd_rel.approx_f64(),
            theta_max: cfg.master.theta_max.approx_f64(),
            tol_feas: cfg.subproblem.lp.feas_tol.approx_f64(),
            tol_act: cfg.subproblem.tol_act.approx_f64(),
            int_tol: cfg.master.milp.int_tol.approx_f64(),
        }
    }
}

/// Machine-readable result of `solve` or `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: String,
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<i64>>,
    pub value: Option<f64>,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
    pub cuts: Option<CutSummary>,
    pub config: Option<ConfigEcho>,
}

fn vec_f64<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(Scalar::approx_f64).collect()
}

pub fn status_name(s: OaStatus) -> &'static str {
    match s {
        OaStatus::Optimal => "Optimal",
        OaStatus::Infeasible => "Infeasible",
        OaStatus::IterLimit => "IterLimit",
        OaStatus::CycleDetected => "CycleDetected",
    }
}

impl SolutionFile {
    pub fn from_oa<T: Scalar>(res: &OaResult<T>, config: ConfigEcho) -> Self {
        let trace = res
            .trace
            .iter()
            .map(|r| TraceEntry {
                k: r.k,
                y: r.y.clone(),
                subproblem: r.sub_kind,
                value: r.sub_value.approx_f64(),
                x: vec_f64(&r.x),
                feasible_visits: r.t_count,
                infeasible_visits: r.s_count,
                ubd: r.ubd.as_ref().map(Scalar::approx_f64),
                master: r.master.as_ref().map(|m| m.status),
                theta: r.master.as_ref().and_then(|m| m.theta.as_ref()).map(Scalar::approx_f64),
                y_next: r.master.as_ref().and_then(|m| m.y_next.clone()),
            })
            .collect();
        let inc = res.incumbent.as_ref();
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: "solve".into(),
            status: status_name(res.status).into(),
            x: inc.map(|i| vec_f64(&i.x)),
            y: inc.map(|i| i.y.clone()),
            value: inc.map(|i| i.value.approx_f64()),
            iterations: res.trace.len(),
            trace,
            cuts: Some(CutSummary::of(&res.pool)),
            config: Some(config),
        }
    }

    pub fn from_oracle<T: Scalar>(res: &OracleResult<T>) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: "oracle".into(),
            status: match res.status {
                OracleStatus::Optimal => "Optimal",
                OracleStatus::Infeasible => "Infeasible",
            }
            .into(),
            x: res.x.as_deref().map(vec_f64),
            y: res.y.clone(),
            value: res.value.as_ref().map(Scalar::approx_f64),
            iterations: res.per_y.len(),
            trace: Vec::new(),
            cuts: None,
            config: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable summary with 17 significant digits per number.
    pub fn to_text(&self) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let nums = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "status: {}", self.status);
        if let Some(v) = self.value {
            let _ = writeln!(s, "value: {}", num(v));
        }
        if let Some(x) = &self.x {
            let _ = writeln!(s, "x: {}", nums(x));
        }
        if let Some(y) = &self.y {
            let ys: Vec<String> = y.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "y: {}", ys.join(" "));
        }
        let _ = writeln!(s, "iterations: {}", self.iterations);
        if let Some(c) = &self.cuts {
            let _ = writeln!(
                s,
                "cuts: {} ({} objective, {} feasibility)",
                c.total, c.objective, c.feasibility
            );
        }
        s
    }
}
