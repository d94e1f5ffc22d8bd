//! Best-bound branch-and-bound over the dense simplex.
//!
//! Node order is fully deterministic: the open node with the smallest parent
//! bound is taken next (ties by creation order), and the branching variable is
//! the most fractional integer variable (ties by lowest index).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{solve_lp_with, Bound, LpConfig, LpError, LpProblem, LpStatus};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilpProblem<T> {
    pub lp: LpProblem<T>,
    pub integer_mask: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("integer variable {0} needs finite lower and upper bounds")]
    UnboundedInteger(usize),
    #[error("integer mask has {got} entries for {expected} variables")]
    MaskLength { expected: usize, got: usize },
    #[error("LP relaxation is unbounded")]
    Unbounded,
    #[error("node limit of {0} reached")]
    NodeLimit(usize),
}

#[derive(Debug, Clone)]
pub struct MilpConfig<T> {
    pub lp: LpConfig<T>,
    pub int_tol: T,
    /// Nodes whose bound is within this of the incumbent are pruned.
    pub prune_tol: T,
    pub max_nodes: usize,
}

impl<T: Scalar> Default for MilpConfig<T> {
    fn default() -> Self {
        Self {
            lp: LpConfig::default(),
            int_tol: T::tolerance(1e-6),
            prune_tol: T::tolerance(1e-9),
            max_nodes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeOutcome {
    Infeasible,
    Pruned,
    Integral,
    Branched { var: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord<T> {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Node LP objective, absent when the node LP is infeasible.
    pub bound: Option<T>,
    pub outcome: NodeOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilpSolution<T> {
    pub status: MilpStatus,
    pub z: Vec<T>,
    pub obj: T,
    pub nodes_explored: usize,
    pub node_log: Vec<NodeRecord<T>>,
}

struct OpenNode<T> {
    id: usize,
    parent: Option<usize>,
    depth: usize,
    parent_bound: Option<T>,
    bounds: Vec<Bound<T>>,
}

pub fn solve_milp<T: Scalar>(p: &MilpProblem<T>) -> Result<MilpSolution<T>, MilpError> {
    solve_milp_with(p, &MilpConfig::default())
}

pub fn solve_milp_with<T: Scalar>(
    p: &MilpProblem<T>,
    cfg: &MilpConfig<T>,
) -> Result<MilpSolution<T>, MilpError> {
    let n = p.lp.num_vars();
    if p.integer_mask.len() != n {
        return Err(MilpError::MaskLength {
            expected: n,
            got: p.integer_mask.len(),
        });
    }
    for (j, is_int) in p.integer_mask.iter().enumerate() {
        if *is_int && !matches!(p.lp.bounds.get(j), Some((Some(_), Some(_)))) {
            return Err(MilpError::UnboundedInteger(j));
        }
    }
    // tighten integer bounds to integers
    let mut root_bounds = p.lp.bounds.clone();
    for (j, is_int) in p.integer_mask.iter().enumerate() {
        if *is_int {
            let (Some(lo), Some(hi)) = &root_bounds[j] else {
                unreachable!()
            };
            let lo = ceil_with_tol(lo, &cfg.int_tol);
            let hi = floor_with_tol(hi, &cfg.int_tol);
            if lo > hi {
                return Ok(infeasible(0, Vec::new()));
            }
            root_bounds[j] = (Some(lo), Some(hi));
        }
    }

    let mut open: Vec<OpenNode<T>> = vec![OpenNode {
        id: 0,
        parent: None,
        depth: 0,
        parent_bound: None,
        bounds: root_bounds,
    }];
    let mut next_id = 1usize;
    let mut log: Vec<NodeRecord<T>> = Vec::new();
    let mut incumbent: Option<(Vec<T>, T)> = None;
    let mut node_lp = p.lp.clone();

    while !open.is_empty() {
        if log.len() >= cfg.max_nodes {
            return Err(MilpError::NodeLimit(cfg.max_nodes));
        }
        let pick = select_best_bound(&open);
        let node = open.remove(pick);

        if let (Some(pb), Some((_, inc))) = (&node.parent_bound, &incumbent) {
            if pb.clone() >= inc.clone() - cfg.prune_tol.clone() {
                log.push(record(&node, node.parent_bound.clone(), NodeOutcome::Pruned));
                continue;
            }
        }

        node_lp.bounds.clone_from(&node.bounds);
        let sol = solve_lp_with(&node_lp, &cfg.lp)?;
        match sol.status {
            LpStatus::Infeasible => {
                log.push(record(&node, None, NodeOutcome::Infeasible));
                continue;
            }
            LpStatus::Unbounded => return Err(MilpError::Unbounded),
            LpStatus::Optimal => {}
        }
        let bound = sol.obj.clone();
        if let Some((_, inc)) = &incumbent {
            if bound >= inc.clone() - cfg.prune_tol.clone() {
                log.push(record(&node, Some(bound), NodeOutcome::Pruned));
                continue;
            }
        }

        match most_fractional(&sol.z, &p.integer_mask, &cfg.int_tol) {
            None => {
                let mut z = sol.z.clone();
                for (zj, is_int) in z.iter_mut().zip(&p.integer_mask) {
                    if *is_int {
                        *zj = round_half_up(zj);
                    }
                }
                log.push(record(&node, Some(bound.clone()), NodeOutcome::Integral));
                incumbent = Some((z, bound));
            }
            Some(var) => {
                log.push(record(&node, Some(bound.clone()), NodeOutcome::Branched { var }));
                let v = sol.z[var].clone();
                let down = Scalar::floor(&v);
                let up = down.clone() + T::one();
                let (lo, hi) = node.bounds[var].clone();
                let mut down_bounds = node.bounds.clone();
                down_bounds[var] = (lo, Some(down));
                let mut up_bounds = node.bounds;
                up_bounds[var] = (Some(up), hi);
                for bounds in [down_bounds, up_bounds] {
                    open.push(OpenNode {
                        id: next_id,
                        parent: Some(node.id),
                        depth: node.depth + 1,
                        parent_bound: Some(bound.clone()),
                        bounds,
                    });
                    next_id += 1;
                }
            }
        }
    }

    Ok(match incumbent {
        Some((z, obj)) => MilpSolution {
            status: MilpStatus::Optimal,
            z,
            obj,
            nodes_explored: log.len(),
            node_log: log,
        },
        None => infeasible(log.len(), log),
    })
}

fn infeasible<T: Scalar>(nodes: usize, log: Vec<NodeRecord<T>>) -> MilpSolution<T> {
    MilpSolution {
        status: MilpStatus::Infeasible,
        z: Vec::new(),
        obj: T::zero(),
        nodes_explored: nodes,
        node_log: log,
    }
}

fn record<T: Scalar>(node: &OpenNode<T>, bound: Option<T>, outcome: NodeOutcome) -> NodeRecord<T> {
    NodeRecord {
        id: node.id,
        parent: node.parent,
        depth: node.depth,
        bound,
        outcome,
    }
}

/// Smallest parent bound first; the root (no bound) and ties go by creation order.
fn select_best_bound<T: Scalar>(open: &[OpenNode<T>]) -> usize {
    let mut best = 0;
    for (k, node) in open.iter().enumerate().skip(1) {
        let better = match (&node.parent_bound, &open[best].parent_bound) {
            (Some(a), Some(b)) => a < b || (a == b && node.id < open[best].id),
            (None, Some(_)) => true,
            (Some(_), None) => false,
            (None, None) => node.id < open[best].id,
        };
        if better {
            best = k;
        }
    }
    best
}

fn most_fractional<T: Scalar>(z: &[T], mask: &[bool], int_tol: &T) -> Option<usize> {
    let half = T::one() / (T::one() + T::one());
    let mut best: Option<(usize, T)> = None;
    for (j, (zj, is_int)) in z.iter().zip(mask).enumerate() {
        if !*is_int {
            continue;
        }
        let frac = zj.clone() - Scalar::floor(zj);
        let dist = frac.clone().min_of(T::one() - frac);
        if dist <= *int_tol {
            continue;
        }
        // distance from 1/2: smaller is more fractional
        let score = (dist - half.clone()).abs();
        if best.as_ref().is_none_or(|(_, s)| score < *s) {
            best = Some((j, score));
        }
    }
    best.map(|(j, _)| j)
}

fn round_half_up<T: Scalar>(v: &T) -> T {
    let half = T::one() / (T::one() + T::one());
    Scalar::floor(&(v.clone() + half))
}

fn ceil_with_tol<T: Scalar>(v: &T, tol: &T) -> T {
    let f = Scalar::floor(v);
    if v.clone() - f.clone() <= *tol {
        f
    } else {
        f + T::one()
    }
}

fn floor_with_tol<T: Scalar>(v: &T, tol: &T) -> T {
    let f = Scalar::floor(v);
    if f.clone() + T::one() - v.clone() <= *tol {
        f + T::one()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::solve_lp;

    fn bounded(c: Vec<f64>, bounds: &[(f64, f64)]) -> LpProblem<f64> {
        let mut lp = LpProblem::new(c);
        for (j, (l, u)) in bounds.iter().enumerate() {
            lp.set_bounds(j, Some(*l), Some(*u));
        }
        lp
    }

    #[test]
    fn naive_master_of_fixture() {
        // variables (x, y, theta): min theta s.t. x + y <= theta, x - y + 1 <= 0, x - y <= 0
        let mut lp = bounded(vec![0.0, 0.0, 1.0], &[(0.0, 2.0), (1.0, 3.0), (-1e12, 1e12)]);
        lp.add_row(vec![1.0, 1.0, -1.0], 0.0);
        lp.add_row(vec![1.0, -1.0, 0.0], -1.0);
        lp.add_row(vec![1.0, -1.0, 0.0], 0.0);
        let p = MilpProblem {
            lp,
            integer_mask: vec![false, true, false],
        };
        let s = solve_milp(&p).unwrap();
        assert_eq!(s.status, MilpStatus::Optimal);
        assert!(s.z[0].abs() < 1e-9);
        assert_eq!(s.z[1], 1.0);
        assert!((s.z[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_integers_matches_lp() {
        let mut lp = bounded(vec![1.0, -2.0], &[(0.0, 4.0), (-1.0, 3.0)]);
        lp.add_row(vec![-1.0, 1.0], 0.5);
        let direct = solve_lp(&lp).unwrap();
        let s = solve_milp(&MilpProblem {
            lp,
            integer_mask: vec![false, false],
        })
        .unwrap();
        assert_eq!(s.obj, direct.obj);
        assert_eq!(s.z, direct.z);
        assert_eq!(s.nodes_explored, 1);
    }

    #[test]
    fn single_rounding_branch() {
        let mut lp = bounded(vec![1.0], &[(0.0, 3.0)]);
        lp.add_row(vec![-1.0], -0.4);
        let s = solve_milp(&MilpProblem {
            lp,
            integer_mask: vec![true],
        })
        .unwrap();
        assert_eq!(s.status, MilpStatus::Optimal);
        assert_eq!(s.z, vec![1.0]);
        assert_eq!(s.obj, 1.0);
    }

    #[test]
    fn integer_infeasible() {
        // 0.2 <= y <= 0.8 has no integer point
        let mut lp = bounded(vec![1.0], &[(0.0, 3.0)]);
        lp.add_row(vec![-1.0], -0.2);
        lp.add_row(vec![1.0], 0.8);
        let s = solve_milp(&MilpProblem {
            lp,
            integer_mask: vec![true],
        })
        .unwrap();
        assert_eq!(s.status, MilpStatus::Infeasible);
    }

    #[test]
    fn integer_variables_need_finite_bounds() {
        let lp = LpProblem::new(vec![1.0]);
        let err = solve_milp(&MilpProblem {
            lp,
            integer_mask: vec![true],
        })
        .unwrap_err();
        assert_eq!(err, MilpError::UnboundedInteger(0));
    }

    #[test]
    fn most_fractional_tie_goes_to_lowest_index() {
        assert_eq!(most_fractional(&[0.5, 1.5, 0.2], &[true, true, true], &1e-6), Some(0));
        assert_eq!(most_fractional(&[0.5, 1.5, 0.2], &[false, true, true], &1e-6), Some(1));
        assert_eq!(most_fractional(&[1.0, 2.0], &[true, true], &1e-6), None);
    }
}
