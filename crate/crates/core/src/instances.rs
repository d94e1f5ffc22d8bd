//! Bundled instances and a seeded random instance generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problem::MinlpProblem;
use crate::pwl::{AffinePiece, MaxAffineTerm, PwlFunction};
use crate::scalar::Scalar;

/// Problem-file text of the two-constraint instance on which arbitrary
/// subgradients make outer approximation cycle.
pub const EXAMPLE31_TEXT: &str = include_str!("../../../fixtures/example31");

/// `min x + y  s.t.  max{-x+y+1, x-y+1} ≤ 0,  x - y ≤ 0,  x ∈ [0, 2],  y ∈ {1, 2, 3}`.
///
/// The instance is infeasible: the first constraint forces `|x - y| ≤ -1`.
pub fn example31<T: Scalar>() -> MinlpProblem<T> {
    let k = |v: i64| T::from_int(v);
    let f = PwlFunction::affine(vec![k(1)], vec![k(1)], k(0));
    let g1 = PwlFunction::max_affine(vec![
        AffinePiece::new(vec![k(-1)], vec![k(1)], k(1)),
        AffinePiece::new(vec![k(1)], vec![k(-1)], k(1)),
    ])
    .expect("two pieces");
    let g2 = PwlFunction::affine(vec![k(1)], vec![k(-1)], k(0));
    MinlpProblem::new(f, vec![g1, g2], vec![(k(0), k(2))], vec![(1, 3)]).expect("valid fixture")
}

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub max_n: usize,
    pub max_p: usize,
    pub max_m: usize,
    pub max_terms: usize,
    pub max_pieces: usize,
    pub max_y_points: u128,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            max_n: 4,
            max_p: 3,
            max_m: 4,
            max_terms: 2,
            max_pieces: 3,
            max_y_points: 200,
        }
    }
}

/// Deterministic random instance for `seed`. Coefficients are multiples of 1/4
/// so every datum is exact in binary floating point.
pub fn random_instance(seed: u64, spec: &RandomSpec) -> MinlpProblem<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=spec.max_n);
    let p = rng.gen_range(1..=spec.max_p);
    let m = rng.gen_range(0..=spec.max_m);

    let mut y_bounds = Vec::with_capacity(p);
    let per_dim = (spec.max_y_points as f64).powf(1.0 / p as f64).floor().max(1.0) as i64;
    for _ in 0..p {
        let width = rng.gen_range(0..per_dim.min(8));
        let lo = rng.gen_range(-3..=2);
        y_bounds.push((lo, lo + width));
    }
    let x_bounds: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let lo = quarter(&mut rng, -8, 0);
            let width = quarter(&mut rng, 1, 12);
            (lo, lo + width)
        })
        .collect();

    let objective = random_function(&mut rng, n, p, spec, 0.0);
    let constraints = (0..m)
        .map(|_| random_function(&mut rng, n, p, spec, -1.5))
        .collect();
    MinlpProblem::new(objective, constraints, x_bounds, y_bounds).expect("generator keeps shapes consistent")
}

fn quarter(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> f64 {
    rng.gen_range(lo..=hi) as f64 / 4.0
}

fn coeff(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-12..=12) as f64 / 4.0
}

fn random_function(rng: &mut ChaCha8Rng, n: usize, p: usize, spec: &RandomSpec, shift: f64) -> PwlFunction<f64> {
    let terms = rng.gen_range(1..=spec.max_terms);
    let terms = (0..terms)
        .map(|_| {
            let pieces = rng.gen_range(1..=spec.max_pieces);
            let pieces = (0..pieces)
                .map(|_| {
                    let a = (0..n).map(|_| coeff(rng)).collect();
                    let b = (0..p).map(|_| coeff(rng)).collect();
                    let c = coeff(rng) + shift;
                    AffinePiece::new(a, b, c)
                })
                .collect();
            MaxAffineTerm::new(pieces).expect("nonempty")
        })
        .collect();
    PwlFunction::new(terms).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic_and_bounded() {
        let spec = RandomSpec::default();
        for seed in 0..50 {
            let a = random_instance(seed, &spec);
            assert_eq!(a, random_instance(seed, &spec));
            assert!(a.n() <= 4 && a.p() <= 3 && a.m() <= 4);
            assert!(a.y_cardinality() <= 200);
        }
    }

    #[test]
    fn example31_shape() {
        let prob = example31::<f64>();
        assert_eq!((prob.n(), prob.p(), prob.m()), (1, 1, 2));
        assert_eq!(prob.constraints()[0].terms()[0].pieces().len(), 2);
        assert_eq!(prob.eval_constraints(&[1.0], &[1]).unwrap(), vec![1.0, 0.0]);
    }
}
