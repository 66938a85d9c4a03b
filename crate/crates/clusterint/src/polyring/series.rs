use num_traits::Zero;

use super::rational::Q;
use super::ring::Ring;

/// Univariate power series in `t` truncated after `t^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<Q>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Q::zero(); order + 1] }
    }

    pub fn constant(order: usize, c: Q) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * t`.
    pub fn linear(order: usize, c: Q) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

impl Ring for Series {
    fn zero_like(&self) -> Self {
        Series::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Series::constant(self.order(), num_traits::One::one())
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
    fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
    fn constant_like(&self, c: &Q) -> Self {
        Series::constant(self.order(), c.clone())
    }
}

/// First-order infinitesimal extension `re + eps * du`, with `du^2 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Ring> Dual<T> {
    pub fn real(re: T) -> Self {
        let du = re.zero_like();
        Dual { re, du }
    }
}

impl<T: Ring> Ring for Dual<T> {
    fn zero_like(&self) -> Self {
        Dual { re: self.re.zero_like(), du: self.re.zero_like() }
    }
    fn one_like(&self) -> Self {
        Dual { re: self.re.one_like(), du: self.re.zero_like() }
    }
    fn vanishes(&self) -> bool {
        self.re.vanishes() && self.du.vanishes()
    }
    fn add(&self, o: &Self) -> Self {
        Dual { re: self.re.add(&o.re), du: self.du.add(&o.du) }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual { re: self.re.sub(&o.re), du: self.du.sub(&o.du) }
    }
    fn mul(&self, o: &Self) -> Self {
        Dual { re: self.re.mul(&o.re), du: self.re.mul(&o.du).add(&self.du.mul(&o.re)) }
    }
    fn neg(&self) -> Self {
        Dual { re: self.re.neg(), du: self.du.neg() }
    }
    fn constant_like(&self, c: &Q) -> Self {
        Dual { re: self.re.constant_like(c), du: self.re.zero_like() }
    }
}
