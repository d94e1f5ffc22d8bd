//! Sums of max-affine functions of the joint variable `(x, y)` and their
//! subdifferential calculus.
//!
//! A function is `Σ_t max_k (a_tk·x + b_tk·y + c_tk)`. Any convex combination
//! of pieces active at a point, taken independently per term, is a joint
//! subgradient there, and its `x`-part is a subgradient of the partial
//! function `f(·, y)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{dot, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PwlError {
    #[error("dimension mismatch: expected {expected} {what} entries, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("max-affine term must contain at least one piece")]
    EmptyTerm,
    #[error("function must contain at least one term")]
    EmptyFunction,
    #[error("term {term}: weights are not a convex combination ({reason})")]
    InvalidWeights { term: usize, reason: String },
    #[error("term {term}: weight {weight} placed on piece {piece}, which is inactive by {gap}")]
    InactivePiece {
        term: usize,
        piece: usize,
        weight: f64,
        gap: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c: T,
}

impl<T: Scalar> AffinePiece<T> {
    pub fn new(a: Vec<T>, b: Vec<T>, c: T) -> Self {
        Self { a, b, c }
    }

    pub fn value(&self, x: &[T], y: &[T]) -> T {
        dot(&self.a, x) + dot(&self.b, y) + self.c.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxAffineTerm<T> {
    pieces: Vec<AffinePiece<T>>,
}

impl<T: Scalar> MaxAffineTerm<T> {
    pub fn new(pieces: Vec<AffinePiece<T>>) -> Result<Self, PwlError> {
        let first = pieces.first().ok_or(PwlError::EmptyTerm)?;
        let (n, p) = (first.a.len(), first.b.len());
        for piece in &pieces {
            check_len("x-coefficient", n, piece.a.len())?;
            check_len("y-coefficient", p, piece.b.len())?;
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[AffinePiece<T>] {
        &self.pieces
    }

    pub fn n(&self) -> usize {
        self.pieces[0].a.len()
    }

    pub fn p(&self) -> usize {
        self.pieces[0].b.len()
    }

    pub fn piece_values(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.pieces.iter().map(|pc| pc.value(x, y)).collect()
    }

    pub fn value(&self, x: &[T], y: &[T]) -> T {
        max_of_values(self.piece_values(x, y))
    }

    /// Indices of pieces within `tol` of the term's maximum, in piece order.
    pub fn active_pieces(&self, x: &[T], y: &[T], tol: &T) -> Result<Vec<usize>, PwlError> {
        check_len("x", self.n(), x.len())?;
        check_len("y", self.p(), y.len())?;
        Ok(active_from_values(&self.piece_values(x, y), tol))
    }
}

fn max_of_values<T: Scalar>(values: Vec<T>) -> T {
    values
        .into_iter()
        .reduce(|a, b| a.max_of(b))
        .expect("nonempty term")
}

fn active_from_values<T: Scalar>(values: &[T], tol: &T) -> Vec<usize> {
    let top = max_of_values(values.to_vec());
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| top.clone() - (*v).clone() <= *tol)
        .map(|(k, _)| k)
        .collect()
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), PwlError> {
    if expected != got {
        return Err(PwlError::DimensionMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PwlFunction<T> {
    terms: Vec<MaxAffineTerm<T>>,
}

/// A joint subgradient `(alpha, beta)` over `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSubgradient<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> JointSubgradient<T> {
    /// `alpha·dx + beta·dy`.
    pub fn apply(&self, dx: &[T], dy: &[T]) -> T {
        dot(&self.alpha, dx) + dot(&self.beta, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActiveChoice {
    FirstActive,
    LastActive,
}

impl<T: Scalar> PwlFunction<T> {
    pub fn new(terms: Vec<MaxAffineTerm<T>>) -> Result<Self, PwlError> {
        let first = terms.first().ok_or(PwlError::EmptyFunction)?;
        let (n, p) = (first.n(), first.p());
        for term in &terms {
            check_len("x-coefficient", n, term.n())?;
            check_len("y-coefficient", p, term.p())?;
        }
        Ok(Self { terms })
    }

    /// Single-piece function `a·x + b·y + c`.
    pub fn affine(a: Vec<T>, b: Vec<T>, c: T) -> Self {
        let term = MaxAffineTerm {
            pieces: vec![AffinePiece::new(a, b, c)],
        };
        Self { terms: vec![term] }
    }

    /// Single max-affine term.
    pub fn max_affine(pieces: Vec<AffinePiece<T>>) -> Result<Self, PwlError> {
        Self::new(vec![MaxAffineTerm::new(pieces)?])
    }

    pub fn terms(&self) -> &[MaxAffineTerm<T>] {
        &self.terms
    }

    pub fn n(&self) -> usize {
        self.terms[0].n()
    }

    pub fn p(&self) -> usize {
        self.terms[0].p()
    }

    fn check_point(&self, x: &[T], y: &[T]) -> Result<(), PwlError> {
        check_len("x", self.n(), x.len())?;
        check_len("y", self.p(), y.len())
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> Result<T, PwlError> {
        self.check_point(x, y)?;
        Ok(self.value_unchecked(x, y))
    }

    pub(crate) fn value_unchecked(&self, x: &[T], y: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, term| acc + term.value(x, y))
    }

    /// Combines pieces with per-term weights into a joint subgradient at `(x, y)`.
    ///
    /// Each term's weights must be nonnegative, sum to one within `1e-9`, and
    /// put no more than `1e-7` on pieces that are not within `tol_act` of the
    /// term's maximum at the anchor.
    pub fn subgradient_from_weights(
        &self,
        x: &[T],
        y: &[T],
        weights: &[Vec<T>],
        tol_act: &T,
    ) -> Result<JointSubgradient<T>, PwlError> {
        self.check_point(x, y)?;
        check_len("weight-vector", self.terms.len(), weights.len())?;
        let sum_tol = T::tolerance(1e-9);
        let stray_tol = T::tolerance(1e-7);
        let mut alpha = vec![T::zero(); self.n()];
        let mut beta = vec![T::zero(); self.p()];
        for (t, (term, w)) in self.terms.iter().zip(weights).enumerate() {
            check_len("weight", term.pieces.len(), w.len())?;
            if let Some(bad) = w.iter().find(|v| **v < -sum_tol.clone()) {
                return Err(PwlError::InvalidWeights {
                    term: t,
                    reason: format!("negative weight {bad}"),
                });
            }
            let total = w.iter().fold(T::zero(), |acc, v| acc + v.clone());
            if (total.clone() - T::one()).abs() > sum_tol {
                return Err(PwlError::InvalidWeights {
                    term: t,
                    reason: format!("weights sum to {total}"),
                });
            }
            let values = term.piece_values(x, y);
            let top = max_of_values(values.clone());
            for (k, (piece, wk)) in term.pieces.iter().zip(w).enumerate() {
                let gap = top.clone() - values[k].clone();
                if gap > *tol_act && *wk > stray_tol {
                    return Err(PwlError::InactivePiece {
                        term: t,
                        piece: k,
                        weight: wk.approx_f64(),
                        gap: gap.approx_f64(),
                    });
                }
                for (acc, coef) in alpha.iter_mut().zip(&piece.a) {
                    *acc = acc.clone() + wk.clone() * coef.clone();
                }
                for (acc, coef) in beta.iter_mut().zip(&piece.b) {
                    *acc = acc.clone() + wk.clone() * coef.clone();
                }
            }
        }
        Ok(JointSubgradient { alpha, beta })
    }

    /// Weight one on the first (or last) active piece of every term.
    pub fn default_subgradient(
        &self,
        x: &[T],
        y: &[T],
        choice: ActiveChoice,
        tol_act: &T,
    ) -> Result<JointSubgradient<T>, PwlError> {
        let weights = self.default_weights(x, y, choice, tol_act)?;
        self.subgradient_from_weights(x, y, &weights, tol_act)
    }

    pub fn default_weights(
        &self,
        x: &[T],
        y: &[T],
        choice: ActiveChoice,
        tol_act: &T,
    ) -> Result<Vec<Vec<T>>, PwlError> {
        self.check_point(x, y)?;
        Ok(self
            .terms
            .iter()
            .map(|term| one_hot_active(term, x, y, choice, tol_act))
            .collect())
    }
}

pub(crate) fn one_hot_active<T: Scalar>(
    term: &MaxAffineTerm<T>,
    x: &[T],
    y: &[T],
    choice: ActiveChoice,
    tol_act: &T,
) -> Vec<T> {
    let active = active_from_values(&term.piece_values(x, y), tol_act);
    let pick = match choice {
        ActiveChoice::FirstActive => active[0],
        ActiveChoice::LastActive => active[active.len() - 1],
    };
    let mut w = vec![T::zero(); term.pieces.len()];
    w[pick] = T::one();
    w
}
