//! Multivariate gcd over the rationals by recursive content extraction and
//! primitive pseudo-remainder sequences.

use super::poly::Poly;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    gcd_rec(a, b).monic()
}

/// Gcd of a list of polynomials, stopping early at a constant.
pub fn gcd_many<'a>(items: impl IntoIterator<Item = &'a Poly>) -> Option<Poly> {
    let mut acc: Option<Poly> = None;
    for p in items {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd_rec(&g, p).monic(),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            break;
        }
    }
    acc
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    let vars = a.vars().clone();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(&vars);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = Poly::monomial(&vars, ma.gcd(&mb), num_traits::One::one());
    let a1 = a.div_monomial(&ma).primitive();
    let b1 = b.div_monomial(&mb).primitive();
    if a1.is_constant() || b1.is_constant() {
        return mono;
    }
    if a1 == b1 {
        return mono.mul_poly(&a1);
    }
    let (small, large) = if a1.len() <= b1.len() { (&a1, &b1) } else { (&b1, &a1) };
    if large.exact_div(small).is_some() {
        return mono.mul_poly(small);
    }
    let v = match pick_main_var(&a1, &b1) {
        Some(v) => v,
        None => return mono,
    };
    let ca = content_in(&a1, v);
    let cb = content_in(&b1, v);
    let cont = gcd_rec(&ca, &cb);
    let mut p = a1.exact_div(&ca).expect("content divides").primitive();
    let mut q = b1.exact_div(&cb).expect("content divides").primitive();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let h = if p.degree_in(v) == 0 || q.degree_in(v) == 0 {
        Poly::one(&vars)
    } else {
        loop {
            let r = pseudo_rem(&p, &q, v);
            if r.is_zero() {
                break q;
            }
            if r.degree_in(v) == 0 {
                break Poly::one(&vars);
            }
            let cr = content_in(&r, v);
            p = q;
            q = r.exact_div(&cr).expect("content divides").primitive();
        }
    };
    mono.mul_poly(&cont).mul_poly(&h).primitive()
}

/// Variable occurring in both with the smallest combined degree, else any occurring one.
fn pick_main_var(a: &Poly, b: &Poly) -> Option<usize> {
    let n = a.nvars();
    let mut best: Option<(bool, u32, usize)> = None;
    for v in 0..n {
        let da = a.degree_in(v) as u32;
        let db = b.degree_in(v) as u32;
        if da == 0 && db == 0 {
            continue;
        }
        let both = da > 0 && db > 0;
        let key = (!both, da.max(db), v);
        if best.is_none_or(|bk| key < bk) {
            best = Some(key);
        }
    }
    best.map(|k| k.2)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in variable `v`.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let coeffs = p.coeffs_in(v);
    let mut acc: Option<Poly> = None;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        acc = Some(match acc {
            None => c.primitive(),
            Some(g) => gcd_rec(&g, c),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            return Poly::one(p.vars());
        }
    }
    acc.unwrap_or_else(|| Poly::one(p.vars()))
}

/// Pseudo-remainder of `a` by `b` with respect to variable `v`.
pub fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    let xv = Poly::var(a.vars(), v);
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let shift = xv.pow((dr - db) as u32);
        r = r.mul_poly(&lb).sub_poly(&lr.mul_poly(&shift).mul_poly(b));
        if !r.is_zero() {
            r = r.primitive();
        }
    }
    r
}
