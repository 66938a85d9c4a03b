use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{LowestTerm, Poly, Vars};
use super::rational::Q;
use super::ring::{ExactDiv, Field, Ring};

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Reduces `num / den`; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun { den: Poly::one(num.vars()), num };
        }
        if den.is_constant() {
            let c = den.constant_term();
            return RatFun { num: num.scale(&c.recip()), den: Poly::one(num.vars()) };
        }
        let g = if den.is_monomial() {
            let m = num.monomial_content().gcd(&den.leading().unwrap().0);
            Poly::monomial(num.vars(), m, Q::one())
        } else {
            gcd(&num, &den)
        };
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let inv = lc.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        RatFun { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        Self::from_poly(Poly::constant(vars, c))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::from_poly(Poly::var(vars, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_polynomial() {
            Some(self.num.scale(&self.den.constant_term().recip()))
        } else {
            None
        }
    }

    pub fn add_rf(&self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::new(self.num.add_poly(&o.num), self.den.clone());
        }
        RatFun::new(self.num.mul_poly(&o.den).add_poly(&o.num.mul_poly(&self.den)), self.den.mul_poly(&o.den))
    }

    pub fn neg_rf(&self) -> RatFun {
        RatFun { num: self.num.neg_poly(), den: self.den.clone() }
    }

    pub fn sub_rf(&self, o: &RatFun) -> RatFun {
        self.add_rf(&o.neg_rf())
    }

    pub fn mul_rf(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero(self.vars());
        }
        if self.is_polynomial() && o.is_polynomial() {
            return RatFun::from_poly(self.as_poly().unwrap().mul_poly(&o.as_poly().unwrap()));
        }
        // cross-cancel before multiplying to keep the gcd small
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = o.den.exact_div(&g1).unwrap();
        let c = o.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        RatFun::new(a.mul_poly(&c), b.mul_poly(&d))
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFun {
        self.mul_rf(&RatFun::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Q) -> RatFun {
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv_rf(&self) -> RatFun {
        assert!(!self.is_zero(), "inverse of zero");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div_rf(&self, o: &RatFun) -> RatFun {
        self.mul_rf(&o.inv_rf())
    }

    pub fn pow(&self, k: u32) -> RatFun {
        RatFun { num: self.num.pow(k), den: self.den.pow(k) }
    }

    pub fn derivative(&self, i: usize) -> RatFun {
        if self.is_polynomial() {
            return RatFun::from_poly(self.as_poly().unwrap().derivative(i));
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return RatFun::new(dn, self.den.clone());
        }
        RatFun::new(dn.mul_poly(&self.den).sub_poly(&self.num.mul_poly(&dd)), self.den.mul_poly(&self.den))
    }

    /// `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Lowest term as the quotient of the lowest terms of numerator and denominator.
    pub fn lowest_term(&self) -> Option<LowestTerm<RatFun>> {
        let n = self.num.lowest_term()?;
        let d = self.den.lowest_term().expect("nonzero denominator");
        Some(LowestTerm { term: RatFun::new(n.term, d.term), degree: n.degree - d.degree })
    }

    pub fn substitute(&self, i: usize, r: &RatFun) -> RatFun {
        compose_poly_rf(&self.num, i, r).div_rf(&compose_poly_rf(&self.den, i, r))
    }

    /// Substitutes `images[i]` for each variable.
    pub fn compose(&self, images: &[RatFun]) -> RatFun {
        compose_all(&self.num, images).div_rf(&compose_all(&self.den, images))
    }

    pub fn eq_up_to_sign(&self, o: &RatFun) -> bool {
        self == o || *self == o.neg_rf()
    }

    /// Constant `c` with `self = c * o`, if any.
    pub fn scalar_ratio(&self, o: &RatFun) -> Option<Q> {
        if self.den != o.den {
            return None;
        }
        self.num.scalar_ratio(&o.num)
    }
}

fn compose_poly_rf(p: &Poly, i: usize, r: &RatFun) -> RatFun {
    let coeffs = p.coeffs_in(i);
    let mut acc = RatFun::zero(p.vars());
    for c in coeffs.iter().rev() {
        acc = acc.mul_rf(r).add_rf(&RatFun::from_poly(c.clone()));
    }
    acc
}

pub fn compose_all(p: &Poly, images: &[RatFun]) -> RatFun {
    let target = images[0].vars().clone();
    let mut cache: std::collections::HashMap<(usize, u16), RatFun> = Default::default();
    let mut acc = RatFun::zero(&target);
    for (m, c) in p.terms() {
        let mut t = RatFun::constant(&target, c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let f = cache.entry((i, e)).or_insert_with(|| images[i].pow(e as u32)).clone();
            t = t.mul_rf(&f);
        }
        acc = acc.add_rf(&t);
    }
    acc
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| if p.len() > 1 { format!("({p})") } else { p.to_string() };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Ring for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        RatFun::one(self.vars())
    }
    fn vanishes(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_rf(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_rf(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_rf(o)
    }
    fn neg(&self) -> Self {
        self.neg_rf()
    }
    fn constant_like(&self, c: &Q) -> Self {
        RatFun::constant(self.vars(), c.clone())
    }
}

impl ExactDiv for RatFun {
    fn div_exact(&self, o: &Self) -> Self {
        self.div_rf(o)
    }
}

impl Field for RatFun {
    fn inv(&self) -> Self {
        self.inv_rf()
    }
}
