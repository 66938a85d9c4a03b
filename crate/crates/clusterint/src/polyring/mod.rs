//! Exact multivariate arithmetic over the rationals: polynomials, reduced
//! rational functions, truncated jets, univariate series and dense matrices.

mod gcd;
mod jet;
mod matrix;
mod monomial;
mod parse;
mod poly;
mod ratfun;
mod rational;
mod ring;
mod series;

pub use gcd::{gcd, gcd_many, pseudo_rem};
pub use jet::Jet;
pub use matrix::{exp_series, truncated_exp, Matrix, PolyMatrix, QMatrix, RatMatrix, COFACTOR_MAX};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::{same_vars, LowestTerm, Poly, VarSet, Vars};
pub use ratfun::{compose_all, RatFun};
pub use rational::{binomial, fmt_q, q, qf, random_q, Q};
pub use ring::{ExactDiv, Field, Ring};
pub use series::{Dual, Series};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Settings;

/// Bound on numerators and denominators of random evaluation points.
pub const SAMPLE_BOUND: i64 = 1000;

pub fn lowest_poly(f: &Poly) -> Result<LowestTerm<Poly>> {
    f.lowest_term().ok_or(Error::ZeroInput)
}

pub fn lowest_ratfun(f: &RatFun) -> Result<LowestTerm<RatFun>> {
    f.lowest_term().ok_or(Error::ZeroInput)
}

/// Values that can be evaluated at a rational point.
pub trait Evaluate {
    fn eval_at(&self, point: &[Q]) -> Option<Q>;
}

impl Evaluate for Poly {
    fn eval_at(&self, point: &[Q]) -> Option<Q> {
        Some(self.eval(point))
    }
}

impl Evaluate for RatFun {
    fn eval_at(&self, point: &[Q]) -> Option<Q> {
        self.eval(point)
    }
}

/// Partial derivatives; rows are variables and columns are functions.
pub fn jacobian(fs: &[RatFun], vars: &Vars) -> RatMatrix {
    Matrix::from_fn(vars.len(), fs.len(), |a, i| fs[i].derivative(a))
}

pub fn jacobian_poly(fs: &[Poly], vars: &Vars) -> PolyMatrix {
    Matrix::from_fn(vars.len(), fs.len(), |a, i| fs[i].derivative(a))
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| random_q(rng, SAMPLE_BOUND)).collect()
}

/// Exact rank of the evaluation of `m` at `point`; `None` if an entry is singular there.
pub fn numeric_rank_at<T: Evaluate + Clone>(m: &Matrix<T>, point: &[Q]) -> Option<usize> {
    let mut vals = Vec::with_capacity(m.rows() * m.cols());
    for e in m.entries() {
        vals.push(e.eval_at(point)?);
    }
    Some(Matrix::new(m.rows(), m.cols(), vals).rank())
}

/// Maximum rank over `settings.samples` seeded random points.
pub fn numeric_rank<T: Evaluate + Clone + Sync>(m: &Matrix<T>, nvars: usize, settings: &Settings) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    let mut rng = rng_for(settings.seed, 0);
    let points: Vec<Vec<Q>> = (0..settings.samples.max(1)).map(|_| random_point(&mut rng, nvars)).collect();
    let ranks = settings.exec.map(&points, |p| numeric_rank_at(m, p));
    ranks.into_iter().flatten().max().ok_or(Error::EvaluationSingular)
}
