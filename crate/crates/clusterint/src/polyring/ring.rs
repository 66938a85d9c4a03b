/// Commutative ring element that knows how to produce its own zero and one.
pub trait Ring: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Constant `c` in the same ring as `self`.
    fn constant_like(&self, c: &super::rational::Q) -> Self;
}

/// Rings with exact division by a known divisor.
pub trait ExactDiv: Ring {
    fn div_exact(&self, other: &Self) -> Self;
}

/// Rings that are fields.
pub trait Field: ExactDiv {
    fn inv(&self) -> Self;
}

impl Ring for super::rational::Q {
    fn zero_like(&self) -> Self {
        num_traits::Zero::zero()
    }
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }
    fn vanishes(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn constant_like(&self, c: &Self) -> Self {
        c.clone()
    }
}

impl ExactDiv for super::rational::Q {
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for super::rational::Q {
    fn inv(&self) -> Self {
        self.recip()
    }
}
