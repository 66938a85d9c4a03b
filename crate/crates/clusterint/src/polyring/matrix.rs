use std::collections::HashMap;

use num_traits::One;

use super::jet::Jet;
use super::poly::Poly;
use super::ratfun::RatFun;
use super::rational::Q;
use super::ring::{ExactDiv, Field, Ring};

/// Largest size expanded by cofactors in [`Matrix::det`]; bigger matrices use fraction-free elimination.
pub const COFACTOR_MAX: usize = 4;

/// Dense row-major matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix = Matrix<Poly>;
pub type RatMatrix = Matrix<RatFun>;
pub type QMatrix = Matrix<Q>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Submatrix on the given (0-based) rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Horizontal concatenation.
    pub fn hcat(blocks: &[Matrix<T>]) -> Self {
        let rows = blocks[0].rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                out.extend_from_slice(b.row(i));
            }
        }
        Matrix { rows, cols, data: out }
    }
}

impl<T: Ring> Matrix<T> {
    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn add(&self, o: &Self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shapes do not match");
        let zero = self.data.first().or(o.data.first()).expect("nonempty matrix").zero_like();
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.vanishes() || b.vanishes() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let zero = self.data[0].zero_like();
        (0..self.rows)
            .map(|i| {
                let mut acc = zero.clone();
                for (k, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, k).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let one = self.data[0].one_like();
        let mut acc = Matrix::identity(self.rows, &one);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.vanishes())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).add(self.get(j, i)).vanishes()))
    }

    /// Division-free determinant by row expansion with memoised column subsets.
    pub fn det_laplace(&self) -> T {
        assert!(self.is_square() && self.rows > 0, "determinant needs a nonempty square matrix");
        assert!(self.rows <= 63, "matrix too large for cofactor expansion");
        let mut memo = HashMap::new();
        let full = (1u64 << self.cols) - 1;
        self.minor_rec(0, full, &mut memo)
    }

    fn minor_rec(&self, row: usize, mask: u64, memo: &mut HashMap<u64, T>) -> T {
        if mask == 0 {
            return self.data[0].one_like();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = self.data[0].zero_like();
        let mut pos = 0usize;
        let mut bits = mask;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = self.get(row, c);
            if !a.vanishes() {
                let sub = self.minor_rec(row + 1, mask & !(1u64 << c), memo);
                if !sub.vanishes() {
                    let t = a.mul(&sub);
                    acc = if pos.is_multiple_of(2) { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Determinants of the trailing principal submatrices: entry `i` is the minor on rows and columns `i..n`.
    pub fn trailing_principal_minors(&self) -> Vec<T> {
        assert!(self.is_square() && self.rows <= 63);
        let n = self.rows;
        let mut memo = HashMap::new();
        (0..n)
            .map(|i| {
                let mask = ((1u64 << n) - 1) & !((1u64 << i) - 1);
                self.minor_rec(i, mask, &mut memo)
            })
            .collect()
    }
}

impl<T: ExactDiv> Matrix<T> {
    /// Bareiss fraction-free elimination with row pivoting.
    pub fn det_bareiss(&self) -> T {
        assert!(self.is_square() && self.rows > 0, "determinant needs a nonempty square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut negate = false;
        let mut prev: Option<T> = None;
        for k in 0..n - 1 {
            if a.get(k, k).vanishes() {
                match (k + 1..n).find(|&i| !a.get(i, k).vanishes()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return self.data[0].zero_like(),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let mut v = a.get(i, j).mul(&pivot);
                    if !aik.vanishes() {
                        v = v.sub(&aik.mul(a.get(k, j)));
                    }
                    if let Some(p) = &prev {
                        v = v.div_exact(p);
                    }
                    a.set(i, j, v);
                }
            }
            prev = Some(pivot);
        }
        let d = a.get(n - 1, n - 1).clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }

    /// Cofactor expansion up to [`COFACTOR_MAX`], Bareiss elimination beyond.
    pub fn det(&self) -> T {
        if self.rows <= COFACTOR_MAX {
            self.det_laplace()
        } else {
            self.det_bareiss()
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Row-echelon rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a.get(i, c).vanishes()) else {
                continue;
            };
            a.swap_rows(rank, p);
            let inv = a.get(rank, c).inv();
            for i in rank + 1..self.rows {
                let f = a.get(i, c).mul(&inv);
                if f.vanishes() {
                    continue;
                }
                for j in c..self.cols {
                    let v = a.get(i, j).sub(&f.mul(a.get(rank, j)));
                    a.set(i, j, v);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let one = self.data[0].one_like();
        let mut a = self.clone();
        let mut b = Matrix::identity(n, &one);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).vanishes())?;
            a.swap_rows(c, p);
            b.swap_rows(c, p);
            let inv = a.get(c, c).inv();
            for j in 0..n {
                a.set(c, j, a.get(c, j).mul(&inv));
                b.set(c, j, b.get(c, j).mul(&inv));
            }
            for i in 0..n {
                if i == c || a.get(i, c).vanishes() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(c, j))));
                    b.set(i, j, b.get(i, j).sub(&f.mul(b.get(c, j))));
                }
            }
        }
        Some(b)
    }
}

/// `sum_{k <= kmax} m^k / k!` computed in the entry ring.
pub fn exp_series<T: Ring>(m: &Matrix<T>, kmax: u32) -> Matrix<T> {
    let one = m.get(0, 0).one_like();
    let mut acc = Matrix::identity(m.rows(), &one);
    let mut term = acc.clone();
    for k in 1..=kmax {
        let inv = one.constant_like(&Q::new(One::one(), k.into()));
        term = term.mul(m).scale(&inv);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// Matrix exponential of a polynomial matrix vanishing at the origin, truncated at total degree `d`.
pub fn truncated_exp(u: &PolyMatrix, d: u32) -> Matrix<Jet> {
    let jets = u.map(|p| Jet::new(p.clone(), d));
    exp_series(&jets, d)
}
