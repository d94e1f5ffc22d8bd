//! Dense two-phase primal simplex with Bland's rule.
//!
//! Problems are `min c·z  s.t.  A z ≤ b,  l ≤ z ≤ u` with optional bounds.
//! Internally each variable is shifted, reflected or split so the tableau only
//! sees nonnegative columns; finite upper bounds of shifted variables become
//! extra rows. Duals are reported against the caller's formulation:
//!
//! * `row_duals[i] ≥ 0` is the multiplier of row `i`,
//! * `bound_duals[j] = c_j + Σ_i row_duals[i]·A_ij` is the reduced cost of
//!   variable `j` (positive at an active lower bound, negative at an active
//!   upper bound, zero in between).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpRow<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
}

impl<T: Scalar> LpRow<T> {
    pub fn new(coeffs: Vec<T>, rhs: T) -> Self {
        Self { coeffs, rhs }
    }
}

/// `(lower, upper)`; `None` stands for an infinite side.
pub type Bound<T> = (Option<T>, Option<T>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem<T> {
    pub c: Vec<T>,
    pub rows: Vec<LpRow<T>>,
    pub bounds: Vec<Bound<T>>,
}

impl<T: Scalar> LpProblem<T> {
    /// All variables in `[0, ∞)` and no rows.
    pub fn new(c: Vec<T>) -> Self {
        let bounds = vec![(Some(T::zero()), None); c.len()];
        Self {
            c,
            rows: Vec::new(),
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<T>, rhs: T) {
        self.rows.push(LpRow::new(coeffs, rhs));
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) {
        self.bounds[var] = (lower, upper);
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.c.len();
        if self.bounds.len() != n {
            return Err(LpError::Malformed(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
            if row.coeffs.iter().chain([&row.rhs]).any(is_nan) {
                return Err(LpError::Malformed(format!("row {i} contains NaN")));
            }
        }
        if self.c.iter().any(is_nan) {
            return Err(LpError::Malformed("objective contains NaN".into()));
        }
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Err(LpError::Malformed(format!(
                        "variable {j} has lower bound {lo} above upper bound {hi}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[allow(clippy::eq_op)]
fn is_nan<T: Scalar>(v: &T) -> bool {
    v != v
}

#[derive(Debug, Clone)]
pub struct LpConfig<T> {
    pub feas_tol: T,
    pub opt_tol: T,
    pub pivot_tol: T,
    pub max_pivots: usize,
}

impl<T: Scalar> Default for LpConfig<T> {
    fn default() -> Self {
        Self {
            feas_tol: T::tolerance(1e-9),
            opt_tol: T::tolerance(1e-9),
            pivot_tol: T::tolerance(1e-11),
            max_pivots: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Primal point; empty unless `Optimal`.
    pub z: Vec<T>,
    pub obj: T,
    pub row_duals: Vec<T>,
    pub bound_duals: Vec<T>,
    pub iterations: usize,
    /// Optimal phase-one objective (sum of artificial values).
    pub phase1_objective: T,
    /// Improving direction when `Unbounded`: `c·ray < 0`, `A·ray ≤ 0`, bounds respected.
    pub ray: Option<Vec<T>>,
    /// Feasible point the ray starts from when `Unbounded`.
    pub ray_origin: Option<Vec<T>>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed LP: {0}")]
    Malformed(String),
    #[error("numerical breakdown in phase {phase} at pivot step {step}: largest candidate pivot {magnitude:e} is below tolerance")]
    NumericalBreakdown {
        phase: u8,
        step: usize,
        magnitude: f64,
    },
    #[error("pivot limit of {0} reached")]
    PivotLimit(usize),
}

#[derive(Debug, Clone)]
enum VarMap<T> {
    /// `z = lower + w`
    Shift { col: usize, lower: T },
    /// `z = upper - w`
    Reflect { col: usize, upper: T },
    /// `z = w⁺ - w⁻`
    Split { pos: usize, neg: usize },
}

struct Tableau<T> {
    m: usize,
    ncols: usize,
    data: Vec<T>,
    obj: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * (self.ncols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> &T {
        self.at(i, self.ncols)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.ncols + 1;
        let piv = self.data[r * w + e].clone();
        for j in 0..w {
            let v = self.data[r * w + j].clone() / piv.clone();
            self.data[r * w + j] = v;
        }
        self.data[r * w + e] = T::one();
        let pivot_row: Vec<T> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + e].clone();
            if factor.is_zero() {
                continue;
            }
            for (j, pv) in pivot_row.iter().enumerate() {
                if pv.is_zero() {
                    continue;
                }
                let v = self.data[i * w + j].clone() - factor.clone() * pv.clone();
                self.data[i * w + j] = v;
            }
            self.data[i * w + e] = T::zero();
        }
        let factor = self.obj[e].clone();
        if !factor.is_zero() {
            for (j, pv) in pivot_row.iter().enumerate() {
                if pv.is_zero() {
                    continue;
                }
                self.obj[j] = self.obj[j].clone() - factor.clone() * pv.clone();
            }
            self.obj[e] = T::zero();
        }
        self.basis[r] = e;
    }

    /// Sets the objective row to reduced costs for `cost` under the current basis.
    fn price(&mut self, cost: &[T]) {
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for i in 0..self.m {
            let cb = cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, o) in obj.iter_mut().enumerate() {
                *o = o.clone() - cb.clone() * self.at(i, j).clone();
            }
        }
        self.obj = obj;
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

struct Simplex<'a, T> {
    cfg: &'a LpConfig<T>,
    tab: Tableau<T>,
    pivots: usize,
}

impl<T: Scalar> Simplex<'_, T> {
    fn run_phase(&mut self, phase: u8, allowed: usize) -> Result<PhaseEnd, LpError> {
        let neg_opt = -self.cfg.opt_tol.clone();
        loop {
            let entering = (0..allowed).find(|&j| self.tab.obj[j] < neg_opt);
            let Some(e) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut candidates: Vec<(usize, T)> = Vec::new();
            let mut tiny = T::zero();
            for i in 0..self.tab.m {
                let a = self.tab.at(i, e);
                if *a > self.cfg.pivot_tol {
                    let rhs = self.tab.rhs(i).clone().max_of(T::zero());
                    candidates.push((i, rhs / a.clone()));
                } else if *a > tiny {
                    tiny = a.clone();
                }
            }
            // minimum ratio, ties (within feas_tol) broken by lowest basic index
            let leaving = candidates
                .iter()
                .map(|(_, r)| r.clone())
                .reduce(|a, b| a.min_of(b))
                .and_then(|min_ratio| {
                    candidates
                        .iter()
                        .filter(|(_, r)| r.clone() - min_ratio.clone() <= self.cfg.feas_tol)
                        .min_by_key(|(i, _)| self.tab.basis[*i])
                        .map(|(i, _)| *i)
                });
            match leaving {
                Some(r) => {
                    if self.pivots >= self.cfg.max_pivots {
                        return Err(LpError::PivotLimit(self.cfg.max_pivots));
                    }
                    self.tab.pivot(r, e);
                    self.pivots += 1;
                }
                None if phase == 1 => {
                    return Err(LpError::NumericalBreakdown {
                        phase,
                        step: self.pivots,
                        magnitude: tiny.approx_f64(),
                    })
                }
                None => return Ok(PhaseEnd::Unbounded(e)),
            }
        }
    }
}

/// Solves `p` with default tolerances.
pub fn solve_lp<T: Scalar>(p: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    solve_lp_with(p, &LpConfig::default())
}

pub fn solve_lp_with<T: Scalar>(
    p: &LpProblem<T>,
    cfg: &LpConfig<T>,
) -> Result<LpSolution<T>, LpError> {
    p.validate()?;
    let n = p.num_vars();
    let m0 = p.rows.len();

    // map each variable onto nonnegative tableau columns
    let mut maps = Vec::with_capacity(n);
    let mut nw = 0usize;
    let mut ub_rows: Vec<(usize, T)> = Vec::new();
    for (lo, hi) in &p.bounds {
        match (lo, hi) {
            (Some(l), hi) => {
                if let Some(u) = hi {
                    ub_rows.push((nw, u.clone() - l.clone()));
                }
                maps.push(VarMap::Shift {
                    col: nw,
                    lower: l.clone(),
                });
                nw += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflect {
                    col: nw,
                    upper: u.clone(),
                });
                nw += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: nw,
                    neg: nw + 1,
                });
                nw += 2;
            }
        }
    }

    let m = m0 + ub_rows.len();
    let mut rows_w: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs_w: Vec<T> = Vec::with_capacity(m);
    for row in &p.rows {
        let mut coeffs = vec![T::zero(); nw];
        let mut rhs = row.rhs.clone();
        for (a, map) in row.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match map {
                VarMap::Shift { col, lower } => {
                    coeffs[*col] = a.clone();
                    rhs = rhs - a.clone() * lower.clone();
                }
                VarMap::Reflect { col, upper } => {
                    coeffs[*col] = -a.clone();
                    rhs = rhs - a.clone() * upper.clone();
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] = a.clone();
                    coeffs[*neg] = -a.clone();
                }
            }
        }
        rows_w.push(coeffs);
        rhs_w.push(rhs);
    }
    for (col, width) in &ub_rows {
        let mut coeffs = vec![T::zero(); nw];
        coeffs[*col] = T::one();
        rows_w.push(coeffs);
        rhs_w.push(width.clone());
    }

    let mut cost_w = vec![T::zero(); nw];
    for (cj, map) in p.c.iter().zip(&maps) {
        match map {
            VarMap::Shift { col, .. } => cost_w[*col] = cj.clone(),
            VarMap::Reflect { col, .. } => cost_w[*col] = -cj.clone(),
            VarMap::Split { pos, neg } => {
                cost_w[*pos] = cj.clone();
                cost_w[*neg] = -cj.clone();
            }
        }
    }

    let flipped: Vec<bool> = rhs_w.iter().map(|r| *r < T::zero()).collect();
    let n_art = flipped.iter().filter(|f| **f).count();
    let slack0 = nw;
    let art0 = nw + m;
    let ncols = nw + m + n_art;
    let width = ncols + 1;
    let mut data = vec![T::zero(); m * width];
    let mut basis = vec![0usize; m];
    let mut next_art = art0;
    for i in 0..m {
        let sign = if flipped[i] { -T::one() } else { T::one() };
        for (j, a) in rows_w[i].iter().enumerate() {
            if !a.is_zero() {
                data[i * width + j] = sign.clone() * a.clone();
            }
        }
        data[i * width + slack0 + i] = sign.clone();
        data[i * width + ncols] = sign * rhs_w[i].clone();
        if flipped[i] {
            data[i * width + next_art] = T::one();
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = slack0 + i;
        }
    }

    let mut sx = Simplex {
        cfg,
        tab: Tableau {
            m,
            ncols,
            data,
            obj: Vec::new(),
            basis,
        },
        pivots: 0,
    };

    let mut phase1_objective = T::zero();
    if n_art > 0 {
        let mut cost1 = vec![T::zero(); ncols];
        for c in cost1.iter_mut().skip(art0) {
            *c = T::one();
        }
        sx.tab.price(&cost1);
        // phase one is bounded below by zero
        let _ = sx.run_phase(1, ncols)?;
        phase1_objective = -sx.tab.obj[ncols].clone();
        if phase1_objective > cfg.feas_tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                z: Vec::new(),
                obj: T::zero(),
                row_duals: Vec::new(),
                bound_duals: Vec::new(),
                iterations: sx.pivots,
                phase1_objective,
                ray: None,
                ray_origin: None,
            });
        }
        // drive zero-valued artificials out of the basis
        for i in 0..m {
            if sx.tab.basis[i] < art0 {
                continue;
            }
            let mut pick: Option<(usize, T)> = None;
            for j in 0..art0 {
                let a = sx.tab.at(i, j).abs();
                if a > cfg.pivot_tol && pick.as_ref().is_none_or(|(_, b)| a > *b) {
                    pick = Some((j, a));
                }
            }
            if let Some((j, _)) = pick {
                sx.tab.pivot(i, j);
                sx.pivots += 1;
            }
        }
    }

    let mut cost2 = cost_w.clone();
    cost2.resize(ncols, T::zero());
    sx.tab.price(&cost2);
    let end = sx.run_phase(2, art0)?;

    let mut w = vec![T::zero(); ncols];
    for i in 0..m {
        w[sx.tab.basis[i]] = sx.tab.rhs(i).clone();
    }
    let to_z = |w: &[T], shift: bool| -> Vec<T> {
        maps.iter()
            .map(|map| match map {
                VarMap::Shift { col, lower } => {
                    if shift {
                        lower.clone() + w[*col].clone()
                    } else {
                        w[*col].clone()
                    }
                }
                VarMap::Reflect { col, upper } => {
                    if shift {
                        upper.clone() - w[*col].clone()
                    } else {
                        -w[*col].clone()
                    }
                }
                VarMap::Split { pos, neg } => w[*pos].clone() - w[*neg].clone(),
            })
            .collect()
    };

    match end {
        PhaseEnd::Unbounded(e) => {
            let mut dw = vec![T::zero(); ncols];
            dw[e] = T::one();
            for i in 0..m {
                dw[sx.tab.basis[i]] = -sx.tab.at(i, e).clone();
            }
            Ok(LpSolution {
                status: LpStatus::Unbounded,
                z: Vec::new(),
                obj: T::zero(),
                row_duals: Vec::new(),
                bound_duals: Vec::new(),
                iterations: sx.pivots,
                phase1_objective,
                ray: Some(to_z(&dw, false)),
                ray_origin: Some(to_z(&w, true)),
            })
        }
        PhaseEnd::Optimal => {
            let z = to_z(&w, true);
            let obj = dot(&p.c, &z);
            let row_duals: Vec<T> = (0..m0)
                .map(|i| sx.tab.obj[slack0 + i].clone().max_of(T::zero()))
                .collect();
            let bound_duals: Vec<T> = (0..n)
                .map(|j| {
                    p.rows.iter().zip(&row_duals).fold(p.c[j].clone(), |acc, (row, mu)| {
                        acc + mu.clone() * row.coeffs[j].clone()
                    })
                })
                .collect();
            Ok(LpSolution {
                status: LpStatus::Optimal,
                z,
                obj,
                row_duals,
                bound_duals,
                iterations: sx.pivots,
                phase1_objective,
                ray: None,
                ray_origin: None,
            })
        }
    }
}

impl<T: Scalar> LpSolution<T> {
    /// Largest violation of a row or bound at `z`.
    pub fn primal_residual(&self, p: &LpProblem<T>) -> T {
        primal_residual(p, &self.z)
    }

    /// `-b·μ + Σ_j d_j·(active bound)`; `None` if a nonzero reduced cost sits on an infinite bound.
    pub fn dual_objective(&self, p: &LpProblem<T>, zero_tol: &T) -> Option<T> {
        let mut total = p
            .rows
            .iter()
            .zip(&self.row_duals)
            .fold(T::zero(), |acc, (row, mu)| acc - row.rhs.clone() * mu.clone());
        for (d, (lo, hi)) in self.bound_duals.iter().zip(&p.bounds) {
            if d.abs() <= *zero_tol {
                continue;
            }
            let bound = if *d > T::zero() { lo } else { hi };
            total = total + d.clone() * bound.clone()?;
        }
        Some(total)
    }

    /// Largest product of a multiplier and the slack of its row or bound.
    pub fn complementarity_residual(&self, p: &LpProblem<T>) -> T {
        let mut worst = T::zero();
        for (row, mu) in p.rows.iter().zip(&self.row_duals) {
            let slack = row.rhs.clone() - dot(&row.coeffs, &self.z);
            worst = worst.max_of((mu.clone() * slack).abs());
        }
        for ((d, (lo, hi)), zj) in self.bound_duals.iter().zip(&p.bounds).zip(&self.z) {
            if d.is_zero() {
                continue;
            }
            let gap = if *d > T::zero() {
                lo.as_ref().map(|l| zj.clone() - l.clone())
            } else {
                hi.as_ref().map(|u| u.clone() - zj.clone())
            };
            worst = match gap {
                Some(g) => worst.max_of((d.clone() * g).abs()),
                None => worst.max_of(d.abs()),
            };
        }
        worst
    }
}

pub fn primal_residual<T: Scalar>(p: &LpProblem<T>, z: &[T]) -> T {
    let mut worst = T::zero();
    for row in &p.rows {
        worst = worst.max_of(dot(&row.coeffs, z) - row.rhs.clone());
    }
    for (zj, (lo, hi)) in z.iter().zip(&p.bounds) {
        if let Some(l) = lo {
            worst = worst.max_of(l.clone() - zj.clone());
        }
        if let Some(u) = hi {
            worst = worst.max_of(zj.clone() - u.clone());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    /// `min s` s.t. `s ≥ 2 - x`, `s ≥ x`, `x ≤ 1`, `x ∈ [0,2]`, `s ≥ 0`; variables `(x, s)`.
    fn feasibility_lp<T: Scalar>() -> LpProblem<T> {
        let k = |v: i64| T::from_int(v);
        let mut p = LpProblem::new(vec![k(0), k(1)]);
        p.set_bounds(0, Some(k(0)), Some(k(2)));
        p.add_row(vec![k(-1), k(-1)], k(-2));
        p.add_row(vec![k(1), k(-1)], k(0));
        p.add_row(vec![k(1), k(0)], k(1));
        p
    }

    #[test]
    fn feasibility_lp_of_fixture() {
        let p = feasibility_lp::<f64>();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.z[0] - 1.0).abs() < 1e-12);
        assert!((s.z[1] - 1.0).abs() < 1e-12);
        assert!((s.obj - 1.0).abs() < 1e-12);
        let dual = s.dual_objective(&p, &1e-12).unwrap();
        assert!((dual - s.obj).abs() < 1e-9);
        assert!(s.complementarity_residual(&p) < 1e-9);
    }

    #[test]
    fn feasibility_lp_exact() {
        let p = feasibility_lp::<BigRational>();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.obj, BigRational::from_int(1));
        assert_eq!(s.z, vec![BigRational::from_int(1), BigRational::from_int(1)]);
        let zero = BigRational::zero();
        assert_eq!(s.dual_objective(&p, &zero).unwrap(), s.obj);
        assert_eq!(s.complementarity_residual(&p), zero);
    }

    #[test]
    fn empty_rows_zero_objective() {
        let mut p = LpProblem::new(vec![0.0]);
        p.set_bounds(0, Some(0.0), Some(1.0));
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.obj, 0.0);
    }

    #[test]
    fn unbounded_with_ray() {
        let p = LpProblem::new(vec![-1.0]);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        let ray = s.ray.unwrap();
        assert!(dot(&p.c, &ray) < 0.0);
        assert!(ray[0] > 0.0);
    }

    #[test]
    fn infeasible_detected_by_phase_one() {
        let mut p = LpProblem::new(vec![1.0]);
        p.set_bounds(0, Some(0.0), Some(1.0));
        p.add_row(vec![-1.0], -2.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.phase1_objective > 1e-9);
    }

    #[test]
    fn free_and_reflected_variables() {
        // min x - y, x free with x ≥ -3 as a row, y ≤ 4 with no lower bound, x + y ≥ -10
        let mut p = LpProblem::<f64>::new(vec![1.0, -1.0]);
        p.set_bounds(0, None, None);
        p.set_bounds(1, None, Some(4.0));
        p.add_row(vec![-1.0, 0.0], 3.0);
        p.add_row(vec![-1.0, -1.0], 10.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.obj - (-7.0)).abs() < 1e-12);
        assert!((s.z[0] + 3.0).abs() < 1e-12 && (s.z[1] - 4.0).abs() < 1e-12);
        assert!(s.bound_duals[1] < 0.0, "upper bound of y is active");
        let dual = s.dual_objective(&p, &1e-12).unwrap();
        assert!((dual - s.obj).abs() < 1e-9);
    }

    #[test]
    fn malformed_inputs_rejected() {
        let mut p = LpProblem::new(vec![1.0, 1.0]);
        p.add_row(vec![1.0], 1.0);
        assert!(matches!(solve_lp(&p), Err(LpError::Malformed(_))));
        let mut p = LpProblem::new(vec![1.0]);
        p.set_bounds(0, Some(2.0), Some(1.0));
        assert!(matches!(solve_lp(&p), Err(LpError::Malformed(_))));
        let p = LpProblem::new(vec![f64::NAN]);
        assert!(matches!(solve_lp(&p), Err(LpError::Malformed(_))));
    }

    #[test]
    fn pivot_limit_reported() {
        let p = feasibility_lp::<f64>();
        let cfg = LpConfig {
            max_pivots: 0,
            ..LpConfig::default()
        };
        assert_eq!(solve_lp_with(&p, &cfg), Err(LpError::PivotLimit(0)));
    }

    #[test]
    fn sub_tolerance_entries_count_as_zero() {
        // the only blocking entry for x is 1e-13, below the pivot tolerance
        let mut p = LpProblem::new(vec![-1.0]);
        p.add_row(vec![1e-13], 1.0);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        assert_eq!(sol.ray, Some(vec![1.0]));
    }
}
