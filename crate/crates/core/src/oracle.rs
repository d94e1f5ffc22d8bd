//! Reference solver: enumerate every integer assignment and solve the
//! continuous subproblem at each.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::MinlpProblem;
use crate::subproblems::{solve_p, POutcome, SubproblemConfig, SubproblemError};

/// Default ceiling on `|Y|`.
pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("|Y| = {size} exceeds the enumeration cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("subproblem at y = {y:?}: {source}")]
    Subproblem {
        y: Vec<i64>,
        source: SubproblemError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult<T> {
    pub status: OracleStatus,
    pub x: Option<Vec<T>>,
    pub y: Option<Vec<i64>>,
    pub value: Option<T>,
    /// Optimal subproblem value per assignment; `None` marks infeasible ones.
    pub per_y: BTreeMap<Vec<i64>, Option<T>>,
}

type Solved<T> = (Vec<i64>, Option<(Vec<T>, T)>);

pub fn brute_force<T: crate::scalar::Scalar>(
    prob: &MinlpProblem<T>,
    cfg: &SubproblemConfig<T>,
    cap: u128,
) -> Result<OracleResult<T>, OracleError> {
    let size = prob.y_cardinality();
    if size > cap {
        return Err(OracleError::TooLarge { size, cap });
    }
    let points: Vec<Vec<i64>> = prob.y_points().collect();
    let solved: Vec<Solved<T>> = points
        .into_par_iter()
        .map(|y| match solve_p(prob, &y, cfg) {
            Ok(POutcome::Feasible(out)) => Ok((y, Some((out.x_star, out.f_value)))),
            Ok(POutcome::Infeasible) => Ok((y, None)),
            Err(source) => Err(OracleError::Subproblem { y, source }),
        })
        .collect::<Result<_, _>>()?;

    // `solved` keeps enumeration order, so a strict comparison keeps the
    // lexicographically smallest minimizer.
    let mut best: Option<(Vec<T>, Vec<i64>, T)> = None;
    let mut per_y = BTreeMap::new();
    for (y, sol) in solved {
        if let Some((x, v)) = &sol {
            if best.as_ref().is_none_or(|(_, _, b)| v < b) {
                best = Some((x.clone(), y.clone(), v.clone()));
            }
        }
        per_y.insert(y, sol.map(|(_, v)| v));
    }
    Ok(match best {
        Some((x, y, v)) => OracleResult {
            status: OracleStatus::Optimal,
            x: Some(x),
            y: Some(y),
            value: Some(v),
            per_y,
        },
        None => OracleResult {
            status: OracleStatus::Infeasible,
            x: None,
            y: None,
            value: None,
            per_y,
        },
    })
}
