use super::poly::{LowestTerm, Poly, Vars};
use super::ring::Ring;

/// Polynomial known exactly up to and including total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    poly: Poly,
    order: u32,
}

impl Jet {
    pub fn new(poly: Poly, order: u32) -> Self {
        Jet { poly: poly.truncate(order), order }
    }

    pub fn zero(vars: &Vars, order: u32) -> Self {
        Jet { poly: Poly::zero(vars), order }
    }

    pub fn one(vars: &Vars, order: u32) -> Self {
        Jet { poly: Poly::one(vars), order }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The lowest term, provided it is determined at this order.
    pub fn lowest_term(&self) -> Option<LowestTerm<Poly>> {
        self.poly.lowest_term()
    }

    pub fn scale(&self, c: &super::rational::Q) -> Jet {
        Jet { poly: self.poly.scale(c), order: self.order }
    }
}

impl Ring for Jet {
    fn zero_like(&self) -> Self {
        Jet::zero(self.poly.vars(), self.order)
    }
    fn one_like(&self) -> Self {
        Jet::one(self.poly.vars(), self.order)
    }
    fn vanishes(&self) -> bool {
        self.poly.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.order.min(o.order);
        Jet { poly: self.poly.add_poly(&o.poly).truncate(d), order: d }
    }
    fn sub(&self, o: &Self) -> Self {
        let d = self.order.min(o.order);
        Jet { poly: self.poly.sub_poly(&o.poly).truncate(d), order: d }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.order.min(o.order);
        Jet { poly: self.poly.mul_truncated(&o.poly, d), order: d }
    }
    fn neg(&self) -> Self {
        Jet { poly: self.poly.neg_poly(), order: self.order }
    }
    fn constant_like(&self, c: &super::rational::Q) -> Self {
        Jet { poly: Poly::constant(self.poly.vars(), c.clone()), order: self.order }
    }
}
