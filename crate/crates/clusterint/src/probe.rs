//! Restriction of matrix functions to a random line `u = t·v` through the origin.
//!
//! Along the line every function becomes a power series in `t`. The valuation of the
//! restriction bounds the degree of the lowest term from above, with equality whenever
//! `v` avoids the zero set of that term.

use rand::Rng as _;

use crate::polyring::{exp_series, q, rng_for, Dual, Matrix, QMatrix, Series, Q};

/// `exp(t·v)` as a matrix of series truncated after `t^order`.
pub fn exp_line(v: &QMatrix, order: usize) -> Matrix<Series> {
    let a = v.map(|c| Series::linear(order, c.clone()));
    exp_series(&a, order as u32)
}

/// `exp(t·v + ε·e)` with `ε² = 0`; the `ε` part is the directional derivative along `e`.
pub fn exp_line_dual(v: &QMatrix, e: &QMatrix, order: usize) -> Matrix<Dual<Series>> {
    let a = Matrix::from_fn(v.rows(), v.cols(), |i, j| Dual {
        re: Series::linear(order, v.get(i, j).clone()),
        du: Series::constant(order, e.get(i, j).clone()),
    });
    exp_series(&a, order as u32 + 1)
}

/// Random integer matrix with entries in `[-bound, bound]`, built from a seeded stream.
pub fn random_matrix(m: usize, seed: u64, stream: u64, traceless: bool) -> QMatrix {
    let mut rng = rng_for(seed, stream);
    let mut v = Matrix::from_fn(m, m, |_, _| {
        let a: i64 = rng.gen_range(1..=97);
        q(if rng.gen_bool(0.5) { a } else { -a })
    });
    if traceless {
        let tr: Q = (0..m - 1).map(|i| v.get(i, i).clone()).sum();
        v.set(m - 1, m - 1, -tr);
    }
    v
}

/// Valuation of `det J` for a square matrix of series.
pub fn det_valuation(j: &Matrix<Series>) -> Option<usize> {
    if j.rows() == 0 {
        return Some(0);
    }
    j.det_laplace().valuation()
}
