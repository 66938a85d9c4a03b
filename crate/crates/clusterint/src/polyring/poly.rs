use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::{fmt_q, Q};
use super::ring::{ExactDiv, Ring};

/// Ordered list of variable names shared by every polynomial built over it.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

pub type Vars = Arc<VarSet>;

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Vars {
        Arc::new(VarSet { names: names.into_iter().map(Into::into).collect() })
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Vars {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Sparse polynomial over the rationals; terms are kept in descending graded-lex order.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vars,
    terms: Vec<(Monomial, Q)>,
}

/// Lowest-degree homogeneous part of a function together with its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct LowestTerm<T> {
    pub term: T,
    pub degree: i64,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        Poly { vars: vars.clone(), terms: vec![(Monomial::one(vars.len()), c)] }
    }

    pub fn int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, Q::from_integer(BigInt::from(c)))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        Poly { vars: vars.clone(), terms: vec![(Monomial::var(vars.len(), i), Q::one())] }
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        Poly { vars: vars.clone(), terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut map: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), vars.len());
            *map.entry(m).or_insert_with(Q::zero) += c;
        }
        Self::from_map(vars, map)
    }

    fn from_map(vars: &Vars, map: HashMap<Monomial, Q>) -> Self {
        let mut terms: Vec<(Monomial, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { vars: vars.clone(), terms }
    }

    /// Terms already sorted descending and free of zeros.
    pub(crate) fn from_sorted(vars: &Vars, terms: Vec<(Monomial, Q)>) -> Self {
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Q {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Q::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    /// Smallest total degree of a term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0.degree())
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exp(i)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.0.exp(i) > 0)
    }

    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.uses_var(i)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.total_degree(), self.valuation()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let terms = self.terms.iter().filter(|t| t.0.degree() == d).cloned().collect();
        Poly::from_sorted(&self.vars, terms)
    }

    /// Lowest-degree homogeneous part. The zero polynomial has no lowest term.
    pub fn lowest_term(&self) -> Option<LowestTerm<Poly>> {
        let d = self.valuation()?;
        Some(LowestTerm { term: self.homogeneous_part(d), degree: d as i64 })
    }

    /// Drops all terms of total degree greater than `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        let terms = self.terms.iter().filter(|t| t.0.degree() <= d).cloned().collect();
        Poly::from_sorted(&self.vars, terms)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Poly::from_sorted(&self.vars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect();
        Poly::from_sorted(&self.vars, terms)
    }

    fn check_vars(&self, other: &Poly) {
        assert!(same_vars(&self.vars, &other.vars), "polynomials over different variable sets");
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        self.check_vars(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly::from_sorted(&self.vars, out)
    }

    pub fn add_poly(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub_poly(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn neg_poly(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly::from_sorted(&self.vars, terms)
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        self.mul_bounded(other, u32::MAX)
    }

    /// Product with every term of total degree above `d` discarded.
    pub fn mul_truncated(&self, other: &Poly, d: u32) -> Poly {
        self.mul_bounded(other, d)
    }

    fn mul_bounded(&self, other: &Poly, d: u32) -> Poly {
        self.check_vars(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.vars);
        }
        if self.terms.len() == 1 && self.terms[0].0.degree() <= d && d == u32::MAX {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 && d == u32::MAX {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        let mut map: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > d {
                continue;
            }
            let room = d - da;
            let start = other.terms.partition_point(|t| t.0.degree() > room);
            for (mb, cb) in &other.terms[start..] {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(&self.vars, map)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_poly(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                terms.push((m.with_exp(i, e - 1), c * Q::from_integer(BigInt::from(e))));
            }
        }
        // differentiation may break the ordering between terms
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly::from_sorted(&self.vars, terms)
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong dimension");
        let mut powers: Vec<Vec<Q>> = vec![vec![Q::one()]; self.nvars()];
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                v *= &pw[e as usize];
            }
            acc += v;
        }
        acc
    }

    /// Evaluates in any ring, one value per variable.
    pub fn eval_ring<T: Ring>(&self, vals: &[T]) -> T {
        assert_eq!(vals.len(), self.nvars(), "evaluation point has wrong dimension");
        let one = vals[0].one_like();
        let mut powers: Vec<Vec<T>> = vec![vec![one.clone()]; self.nvars()];
        let mut acc = one.zero_like();
        for (m, c) in &self.terms {
            let mut v = one.constant_like(c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().mul(&vals[i]);
                    pw.push(next);
                }
                v = v.mul(&pw[e as usize]);
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Replaces variable `i` by `p`.
    pub fn substitute(&self, i: usize, p: &Poly) -> Poly {
        self.check_vars(p);
        let mut pows: Vec<Poly> = vec![Poly::one(&self.vars)];
        let mut acc = Poly::zero(&self.vars);
        let mut by_power: BTreeMap<u16, Vec<(Monomial, Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power.entry(m.exp(i)).or_default().push((m.with_exp(i, 0), c.clone()));
        }
        for (e, terms) in by_power {
            while pows.len() <= e as usize {
                let next = pows.last().unwrap().mul_poly(p);
                pows.push(next);
            }
            let coeff = Poly::from_terms(&self.vars, terms);
            acc = acc.add_poly(&coeff.mul_poly(&pows[e as usize]));
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; the result lives over the images' variable set.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars(), "one image per variable is required");
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return self.clone(),
        };
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut acc = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e as u32)).clone();
                t = t.mul_poly(&p);
            }
            acc = acc.add_poly(&t);
        }
        acc
    }

    /// Re-expresses the polynomial over a larger variable set; `map[i]` is the new index of variable `i`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Poly {
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u16; n];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] += e;
            }
            (Monomial::from_exps(&exps), c.clone())
        });
        Poly::from_terms(target, terms)
    }

    /// Coefficients with respect to variable `i`: entry `k` multiplies `x_i^k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let deg = self.degree_in(i) as usize;
        let mut parts: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            parts[m.exp(i) as usize].push((m.with_exp(i, 0), c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly::from_sorted(&self.vars, t)
            })
            .collect()
    }

    pub fn from_coeffs_in(vars: &Vars, i: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                terms.push((m.with_exp(i, m.exp(i) + k as u16), a.clone()));
            }
        }
        Poly::from_terms(vars, terms)
    }

    /// Componentwise minimum of all exponent vectors.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars()),
            Some(first) => it.fold(first.0.clone(), |acc, t| acc.gcd(&t.0)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        let terms = self.terms.iter().map(|(n, c)| (m.quotient_of(n), c.clone())).collect();
        Poly::from_sorted(&self.vars, terms)
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn rational_content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        Q::new(num, den)
    }

    /// Integer coefficients with gcd one and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Scaled so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Quotient when `divisor` divides `self` exactly, `None` otherwise.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        self.check_vars(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = divisor.terms[0].clone();
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.push((lm.quotient_of(m), c / &lc));
            }
            return Some(Poly::from_sorted(&self.vars, terms));
        }
        if divisor.total_degree() > self.total_degree() || divisor.valuation() > self.valuation() {
            return None;
        }
        let mut rem: BTreeMap<Monomial, Q> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Q)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c / &lc;
            for (dm, dc) in &divisor.terms[1..] {
                let key = qm.mul(dm);
                let delta = &qc * dc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly::from_sorted(&self.vars, quot))
    }

    /// Evaluates with variable `i` set to zero.
    pub fn at_zero(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter(|t| t.0.exp(i) == 0).cloned().collect();
        Poly::from_sorted(&self.vars, terms)
    }

    /// Translation `x_i -> x_i + shift_i`.
    pub fn translate(&self, shift: &[Q]) -> Poly {
        let images: Vec<Poly> = (0..self.nvars())
            .map(|i| Poly::var(&self.vars, i).add_poly(&Poly::constant(&self.vars, shift[i].clone())))
            .collect();
        self.compose(&images)
    }

    /// True when equal to `other` or to `-other`.
    pub fn eq_up_to_sign(&self, other: &Poly) -> bool {
        self == other || *self == other.neg_poly()
    }

    /// Ratio `c` with `self = c * other`, if one exists.
    pub fn scalar_ratio(&self, other: &Poly) -> Option<Q> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() { Some(Q::one()) } else { None };
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let c = &self.terms[0].1 / &other.terms[0].1;
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            if a.0 != b.0 || a.1 != &b.1 * &c {
                return None;
            }
        }
        Some(c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &VarSet, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(vars.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text form: descending graded-lex terms, `p/q` coefficients, `x^e` powers.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_q(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", fmt_q(&a))?;
                }
                write_monomial(f, &self.vars, m)?;
            }
        }
        Ok(())
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        Poly::one(&self.vars)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_poly(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_poly(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_poly(o)
    }
    fn neg(&self) -> Self {
        self.neg_poly()
    }
    fn constant_like(&self, c: &Q) -> Self {
        Poly::constant(&self.vars, c.clone())
    }
}

impl ExactDiv for Poly {
    fn div_exact(&self, o: &Self) -> Self {
        self.exact_div(o).expect("inexact polynomial division")
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$inner(rhs)
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$inner(rhs)
            }
        }
    };
}

poly_binop!(Add, add, add_poly);
poly_binop!(Sub, sub, sub_poly);
poly_binop!(Mul, mul, mul_poly);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_poly()
    }
}
