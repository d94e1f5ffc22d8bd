//! Convex MINLP instances: `min f(x, y)  s.t.  g_i(x, y) ≤ 0,  x ∈ X,  y ∈ Y`
//! with `X` a finite box and `Y` the integer points of a finite box.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pwl::{PwlError, PwlFunction};
use crate::scalar::{ints_to_scalars, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("{what}: expected dimension {expected}, got {got}")]
    Dimension {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("{what}: lower bound {lo} exceeds upper bound {hi}")]
    EmptyBox { what: String, lo: String, hi: String },
    #[error("{0} constraint names for {1} constraints")]
    NameCount(usize, usize),
    #[error("y = {0:?} lies outside the integer box")]
    YOutOfBounds(Vec<i64>),
    #[error(transparent)]
    Pwl(#[from] PwlError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinlpProblem<T> {
    n: usize,
    p: usize,
    objective: PwlFunction<T>,
    constraints: Vec<PwlFunction<T>>,
    constraint_names: Vec<String>,
    x_bounds: Vec<(T, T)>,
    y_bounds: Vec<(i64, i64)>,
}

impl<T: Scalar> MinlpProblem<T> {
    pub fn new(
        objective: PwlFunction<T>,
        constraints: Vec<PwlFunction<T>>,
        x_bounds: Vec<(T, T)>,
        y_bounds: Vec<(i64, i64)>,
    ) -> Result<Self, ProblemError> {
        let names = (1..=constraints.len()).map(|i| format!("g{i}")).collect();
        Self::with_names(objective, constraints, names, x_bounds, y_bounds)
    }

    pub fn with_names(
        objective: PwlFunction<T>,
        constraints: Vec<PwlFunction<T>>,
        constraint_names: Vec<String>,
        x_bounds: Vec<(T, T)>,
        y_bounds: Vec<(i64, i64)>,
    ) -> Result<Self, ProblemError> {
        let (n, p) = (x_bounds.len(), y_bounds.len());
        let dim = |what: String, expected: usize, got: usize| {
            if expected == got {
                Ok(())
            } else {
                Err(ProblemError::Dimension {
                    what,
                    expected,
                    got,
                })
            }
        };
        dim("objective x-dimension".into(), n, objective.n())?;
        dim("objective y-dimension".into(), p, objective.p())?;
        for (name, g) in constraint_names.iter().zip(&constraints) {
            dim(format!("constraint {name} x-dimension"), n, g.n())?;
            dim(format!("constraint {name} y-dimension"), p, g.p())?;
        }
        if constraint_names.len() != constraints.len() {
            return Err(ProblemError::NameCount(
                constraint_names.len(),
                constraints.len(),
            ));
        }
        for (j, (lo, hi)) in x_bounds.iter().enumerate() {
            if lo > hi {
                return Err(ProblemError::EmptyBox {
                    what: format!("x_bounds[{j}]"),
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
        }
        for (j, (lo, hi)) in y_bounds.iter().enumerate() {
            if lo > hi {
                return Err(ProblemError::EmptyBox {
                    what: format!("y_bounds[{j}]"),
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
        }
        Ok(Self {
            n,
            p,
            objective,
            constraints,
            constraint_names,
            x_bounds,
            y_bounds,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &PwlFunction<T> {
        &self.objective
    }

    pub fn constraints(&self) -> &[PwlFunction<T>] {
        &self.constraints
    }

    pub fn constraint_names(&self) -> &[String] {
        &self.constraint_names
    }

    pub fn x_bounds(&self) -> &[(T, T)] {
        &self.x_bounds
    }

    pub fn y_bounds(&self) -> &[(i64, i64)] {
        &self.y_bounds
    }

    /// Number of integer points in `Y`, saturating at `u128::MAX`.
    pub fn y_cardinality(&self) -> u128 {
        self.y_bounds.iter().fold(1u128, |acc, (lo, hi)| {
            acc.saturating_mul((hi - lo) as u128 + 1)
        })
    }

    pub fn contains_y(&self, y: &[i64]) -> bool {
        y.len() == self.p
            && y
                .iter()
                .zip(&self.y_bounds)
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn check_y(&self, y: &[i64]) -> Result<(), ProblemError> {
        if self.contains_y(y) {
            Ok(())
        } else {
            Err(ProblemError::YOutOfBounds(y.to_vec()))
        }
    }

    /// Lexicographic enumeration of `Y` (last coordinate fastest).
    pub fn y_points(&self) -> YPoints<'_> {
        YPoints {
            bounds: &self.y_bounds,
            next: Some(self.y_bounds.iter().map(|(lo, _)| *lo).collect()),
        }
    }

    /// Lower corner of `Y`.
    pub fn y_lower_corner(&self) -> Vec<i64> {
        self.y_bounds.iter().map(|(lo, _)| *lo).collect()
    }

    pub fn eval_objective(&self, x: &[T], y: &[i64]) -> Result<T, PwlError> {
        self.objective.eval(x, &ints_to_scalars(y))
    }

    pub fn eval_constraints(&self, x: &[T], y: &[i64]) -> Result<Vec<T>, PwlError> {
        let ys = ints_to_scalars(y);
        self.constraints.iter().map(|g| g.eval(x, &ys)).collect()
    }

    /// Converts every coefficient into another scalar type.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MinlpProblem<U> {
        use crate::pwl::{AffinePiece, MaxAffineTerm};
        let map_fn = |g: &PwlFunction<T>| {
            let terms = g
                .terms()
                .iter()
                .map(|term| {
                    let pieces = term
                        .pieces()
                        .iter()
                        .map(|pc| {
                            AffinePiece::new(
                                pc.a.iter().map(&f).collect(),
                                pc.b.iter().map(&f).collect(),
                                f(&pc.c),
                            )
                        })
                        .collect();
                    MaxAffineTerm::new(pieces).expect("shape preserved")
                })
                .collect();
            PwlFunction::new(terms).expect("shape preserved")
        };
        MinlpProblem {
            n: self.n,
            p: self.p,
            objective: map_fn(&self.objective),
            constraints: self.constraints.iter().map(map_fn).collect(),
            constraint_names: self.constraint_names.clone(),
            x_bounds: self.x_bounds.iter().map(|(l, u)| (f(l), f(u))).collect(),
            y_bounds: self.y_bounds.clone(),
        }
    }
}

pub struct YPoints<'a> {
    bounds: &'a [(i64, i64)],
    next: Option<Vec<i64>>,
}

impl Iterator for YPoints<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        for k in (0..succ.len()).rev() {
            if succ[k] < self.bounds[k].1 {
                succ[k] += 1;
                advanced = true;
                break;
            }
            succ[k] = self.bounds[k].0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::AffinePiece;

    fn affine(n: usize, p: usize) -> PwlFunction<f64> {
        PwlFunction::affine(vec![1.0; n], vec![1.0; p], 0.0)
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let prob = MinlpProblem::new(
            affine(1, 2),
            vec![],
            vec![(0.0, 1.0)],
            vec![(0, 1), (-1, 1)],
        )
        .unwrap();
        let pts: Vec<_> = prob.y_points().collect();
        assert_eq!(
            pts,
            vec![
                vec![0, -1],
                vec![0, 0],
                vec![0, 1],
                vec![1, -1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
        assert_eq!(prob.y_cardinality(), 6);
    }

    #[test]
    fn empty_y_dimension_has_one_point() {
        let prob = MinlpProblem::new(affine(1, 0), vec![], vec![(0.0, 1.0)], vec![]).unwrap();
        assert_eq!(prob.y_points().collect::<Vec<_>>(), vec![Vec::<i64>::new()]);
        assert_eq!(prob.y_cardinality(), 1);
    }

    #[test]
    fn validation() {
        let err = MinlpProblem::new(affine(2, 1), vec![], vec![(0.0, 1.0)], vec![(0, 1)]);
        assert!(matches!(err, Err(ProblemError::Dimension { .. })));
        let err = MinlpProblem::new(affine(1, 1), vec![], vec![(2.0, 1.0)], vec![(0, 1)]);
        assert!(matches!(err, Err(ProblemError::EmptyBox { .. })));
        let g = PwlFunction::max_affine(vec![AffinePiece::new(vec![1.0], vec![], 0.0)]).unwrap();
        let err = MinlpProblem::new(affine(1, 1), vec![g], vec![(0.0, 1.0)], vec![(0, 1)]);
        assert!(matches!(err, Err(ProblemError::Dimension { .. })));
    }

    #[test]
    fn y_membership() {
        let prob = MinlpProblem::new(affine(1, 1), vec![], vec![(0.0, 1.0)], vec![(1, 3)]).unwrap();
        assert!(prob.contains_y(&[2]));
        assert!(!prob.contains_y(&[4]));
        assert!(!prob.contains_y(&[1, 1]));
        assert!(prob.check_y(&[0]).is_err());
    }
}
