//! The dual Poisson group `GL(n)*` inside `B × B₋`, its staircase cluster and Casimirs,
//! and their lowest terms at the identity.
//!
//! Coordinates on `B × B₋` are `x_ij` (`i ≤ j`) and `y_ij` (`i ≥ j`). On `G*` the diagonal
//! of `Y` is eliminated through `y_ii = 1/x_ii`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::poisson::{certify_system, deg_mu_low, log_volume, LinearPoissonStructure, PoissonStructure};
use crate::polyring::{
    binomial, compose_all, q, qf, random_point, rng_for, truncated_exp, Jet, LowestTerm, Matrix, Monomial, Poly,
    PolyMatrix, QMatrix, RatFun, RatMatrix, Ring, VarSet, Vars, Q,
};
use crate::report::IntegrableSystemReport;
use crate::typea::{entry_name, matrix_vars, minor, standard_coefficient};

fn sgn(a: usize, b: usize) -> i64 {
    (b as i64 - a as i64).signum()
}

/// Index tables for the upper/lower coordinates, 1-based `(i, j)`.
#[derive(Clone, Debug)]
struct Layout {
    x: Vec<Vec<Option<usize>>>,
    y: Vec<Vec<Option<usize>>>,
}

impl Layout {
    fn new(n: usize, with_diag_y: bool) -> (Self, Vec<String>) {
        let mut names = Vec::new();
        let mut x = vec![vec![None; n + 1]; n + 1];
        let mut y = vec![vec![None; n + 1]; n + 1];
        for i in 1..=n {
            for j in i..=n {
                x[i][j] = Some(names.len());
                names.push(entry_name("x", i, j));
            }
        }
        for i in 1..=n {
            for j in 1..=i {
                if j == i && !with_diag_y {
                    continue;
                }
                y[i][j] = Some(names.len());
                names.push(entry_name("y", i, j));
            }
        }
        (Layout { x, y }, names)
    }
}

/// Coordinates `x_ij (i ≤ j)`, `y_ij (i ≥ j)` on `B × B₋`.
pub fn bb_vars(n: usize) -> Vars {
    VarSet::new(Layout::new(n, true).1)
}

/// Free coordinates on `G*`: `x_ij (i ≤ j)`, `y_ij (i > j)`.
pub fn free_vars(n: usize) -> Vars {
    VarSet::new(Layout::new(n, false).1)
}

/// Entries `u11, u12, …` of `u = x − y`.
pub fn u_vars(n: usize) -> Vars {
    matrix_vars("u", n)
}

fn bb_matrices(n: usize, vars: &Vars) -> (PolyMatrix, PolyMatrix) {
    let (lay, _) = Layout::new(n, true);
    let pick = |t: &Vec<Vec<Option<usize>>>, i: usize, j: usize| match t[i][j] {
        Some(k) => Poly::var(vars, k),
        None => Poly::zero(vars),
    };
    (Matrix::from_fn(n, n, |r, c| pick(&lay.x, r + 1, c + 1)), Matrix::from_fn(n, n, |r, c| pick(&lay.y, r + 1, c + 1)))
}

/// The chart `y_ii = 1/x_ii` on `G*` with the structure `−Π` restricted to it.
#[derive(Clone, Debug)]
pub struct DualGroupChart {
    pub n: usize,
    pub vars: Vars,
    pub bb: Vars,
    /// `X`, `Y` over the `B × B₋` coordinates.
    pub x: PolyMatrix,
    pub y: PolyMatrix,
    /// `X`, `Y`, `Y⁻¹` and `U = XY⁻¹` on the free chart.
    pub x_free: PolyMatrix,
    pub y_free: RatMatrix,
    pub y_inv: PolyMatrix,
    pub u_free: PolyMatrix,
    pub pi_dual: PoissonStructure,
    layout: Layout,
    bb_layout: Layout,
}

/// The bracket `Π` of two `B × B₋` coordinates, as a polynomial over `vars`.
fn pi_bb(lay: &Layout, vars: &Vars, a: (bool, usize, usize), b: (bool, usize, usize)) -> Poly {
    let xe = |i: usize, j: usize| lay.x[i][j].map_or_else(|| Poly::zero(vars), |k| Poly::var(vars, k));
    let ye = |i: usize, j: usize| lay.y[i][j].map_or_else(|| Poly::zero(vars), |k| Poly::var(vars, k));
    let half = |c: i64| qf(c, 2);
    match (a, b) {
        ((false, i, j), (false, p, qq)) => xe(i, qq).mul_poly(&xe(p, j)).scale(&standard_coefficient(i, j, p, qq)),
        ((true, i, j), (true, p, qq)) => ye(i, qq).mul_poly(&ye(p, j)).scale(&standard_coefficient(i, j, p, qq)),
        ((true, i, j), (false, p, qq)) => {
            let t1 = ye(i, qq).mul_poly(&xe(p, j)).scale(&half(1 + sgn(j, qq)));
            let t2 = xe(i, qq).mul_poly(&ye(p, j)).scale(&half(1 + sgn(p, i)));
            t1.sub_poly(&t2)
        }
        ((false, ..), (true, ..)) => pi_bb(lay, vars, b, a).neg_poly(),
    }
}

impl DualGroupChart {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Restriction to `G*` of a polynomial on `B × B₋`.
    pub fn restrict(&self, p: &Poly) -> RatFun {
        let n = self.n;
        let diag: Vec<usize> = (1..=n).map(|i| self.bb_layout.y[i][i].unwrap()).collect();
        let mut kmax = vec![0u16; n];
        for (m, _) in p.terms() {
            for (i, &d) in diag.iter().enumerate() {
                kmax[i] = kmax[i].max(m.exp(d));
            }
        }
        let target = self.vars.len();
        let map = self.bb_to_free();
        let terms = p.terms().iter().map(|(m, c)| {
            let mut exps = vec![0u16; target];
            for (k, &e) in m.exps().iter().enumerate() {
                if let Some(f) = map[k] {
                    exps[f] += e;
                }
            }
            for (i, &d) in diag.iter().enumerate() {
                exps[self.layout.x[i + 1][i + 1].unwrap()] += kmax[i] - m.exp(d);
            }
            (Monomial::from_exps(&exps), c.clone())
        });
        let num = Poly::from_terms(&self.vars, terms);
        let mut den = vec![0u16; target];
        for i in 0..n {
            den[self.layout.x[i + 1][i + 1].unwrap()] = kmax[i];
        }
        RatFun::new(num, Poly::monomial(&self.vars, Monomial::from_exps(&den), Q::one()))
    }

    fn bb_to_free(&self) -> Vec<Option<usize>> {
        let n = self.n;
        let mut map = vec![None; self.bb.len()];
        for i in 1..=n {
            for j in 1..=n {
                if let (Some(b), Some(f)) = (self.bb_layout.x[i][j], self.layout.x[i][j]) {
                    map[b] = Some(f);
                }
                if let (Some(b), Some(f)) = (self.bb_layout.y[i][j], self.layout.y[i][j]) {
                    map[b] = Some(f);
                }
            }
        }
        map
    }

    /// The identity `(1, 1)` in the free chart.
    pub fn identity_point(&self) -> Vec<Q> {
        let mut pt = vec![Q::zero(); self.vars.len()];
        for i in 1..=self.n {
            pt[self.layout.x[i][i].unwrap()] = Q::one();
        }
        pt
    }

    /// Linear chart at the identity: `x_ij = u_ij (i < j)`, `x_ii = 1 + u_ii/2`, `y_ij = −u_ij (i > j)`.
    pub fn linear_chart(&self) -> Vec<Poly> {
        let n = self.n;
        let uv = u_vars(n);
        let u = |i: usize, j: usize| Poly::var(&uv, (i - 1) * n + (j - 1));
        let mut images = vec![Poly::zero(&uv); self.vars.len()];
        for i in 1..=n {
            for j in 1..=n {
                if let Some(k) = self.layout.x[i][j] {
                    images[k] = if i == j { Poly::one(&uv).add_poly(&u(i, i).scale(&qf(1, 2))) } else { u(i, j) };
                }
                if let Some(k) = self.layout.y[i][j] {
                    images[k] = u(i, j).neg_poly();
                }
            }
        }
        images
    }

    /// Lowest term at the identity, read through [`Self::linear_chart`].
    pub fn chart_low(&self, f: &RatFun) -> Result<LowestTerm<Poly>> {
        let images = self.linear_chart();
        let den = compose_truncated(f.den(), &images, 0);
        let d0 = den.constant_term();
        if d0.is_zero() {
            return Err(Error::NotRegular(f.to_string()));
        }
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut d = 1u32;
        loop {
            let num = compose_truncated(f.num(), &images, d);
            if let Some(low) = num.lowest_term() {
                return Ok(LowestTerm { term: low.term.scale(&d0.recip()), degree: low.degree });
            }
            if d as usize > 4 * self.vars.len() {
                return Err(Error::TruncationInsufficient { cap: d });
            }
            d *= 2;
        }
    }
}

/// `p(images)` keeping total degree `≤ d`.
fn compose_truncated(p: &Poly, images: &[Poly], d: u32) -> Poly {
    let target = images[0].vars().clone();
    let mut cache: std::collections::HashMap<(usize, u16), Poly> = std::collections::HashMap::new();
    let mut acc = Poly::zero(&target);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(&target, c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = cache.entry((i, e)).or_insert_with(|| {
                let mut r = Poly::one(&target);
                for _ in 0..e {
                    r = r.mul_truncated(&images[i], d);
                }
                r
            });
            t = t.mul_truncated(pw, d);
            if t.is_zero() {
                break;
            }
        }
        acc = acc.add_poly(&t);
    }
    acc
}

/// `(I + L)⁻¹` for strictly lower triangular `L`.
fn unipotent_inverse(l: &PolyMatrix) -> PolyMatrix {
    let n = l.rows();
    let one = Poly::one(l.get(0, 0).vars());
    let neg = l.neg();
    let mut acc = Matrix::identity(n, &one);
    let mut pw = acc.clone();
    for _ in 1..n {
        pw = pw.mul(&neg);
        acc = acc.add(&pw);
    }
    acc
}

pub fn build_dual_chart(n: usize) -> Result<DualGroupChart> {
    if n < 2 {
        return Err(Error::Input("GL(n)* needs n ≥ 2".into()));
    }
    let (layout, names) = Layout::new(n, false);
    let vars = VarSet::new(names);
    let (bb_layout, _) = Layout::new(n, true);
    let bb = bb_vars(n);
    let (x, y) = bb_matrices(n, &bb);
    let xv = |i: usize, j: usize| layout.x[i][j].map_or_else(|| Poly::zero(&vars), |k| Poly::var(&vars, k));
    let x_free = Matrix::from_fn(n, n, |r, c| xv(r + 1, c + 1));
    let y_free = Matrix::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        if i == j {
            RatFun::from_poly(xv(i, i)).inv_rf()
        } else {
            layout.y[i][j].map_or_else(|| RatFun::zero(&vars), |k| RatFun::var(&vars, k))
        }
    });
    // Y = diag(1/x_ii)(I + L) with L_ij = x_ii y_ij
    let l = Matrix::from_fn(n, n, |r, c| match layout.y[r + 1][c + 1] {
        Some(k) if r > c => xv(r + 1, r + 1).mul_poly(&Poly::var(&vars, k)),
        _ => Poly::zero(&vars),
    });
    let dx = Matrix::from_fn(n, n, |r, c| if r == c { xv(r + 1, r + 1) } else { Poly::zero(&vars) });
    let y_inv = unipotent_inverse(&l).mul(&dx);
    let u_free = x_free.mul(&y_inv);

    let mut coords = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if layout.x[i][j].is_some() {
                coords.push((layout.x[i][j].unwrap(), (false, i, j)));
            }
            if layout.y[i][j].is_some() {
                coords.push((layout.y[i][j].unwrap(), (true, i, j)));
            }
        }
    }
    coords.sort();
    let mut chart = DualGroupChart {
        n,
        vars: vars.clone(),
        bb: bb.clone(),
        x,
        y,
        x_free,
        y_free,
        y_inv,
        u_free,
        pi_dual: PoissonStructure::zero(&vars),
        layout,
        bb_layout: bb_layout.clone(),
    };
    let entries: Vec<Vec<RatFun>> = coords
        .iter()
        .map(|&(_, a)| coords.iter().map(|&(_, b)| chart.restrict(&pi_bb(&bb_layout, &bb, a, b)).neg_rf()).collect())
        .collect();
    chart.pi_dual = PoissonStructure::from_upper(&vars, |a, b| entries[a][b].clone());
    Ok(chart)
}

/// The staircase cluster, the Casimirs and the system `Φ` on `G*`.
#[derive(Clone, Debug)]
pub struct StaircaseSystem {
    pub n: usize,
    pub psi: PolyMatrix,
    /// `φ_1, …, φ_{(n−1)²}` over the `B × B₋` coordinates.
    pub phis: Vec<Poly>,
    /// `c_0, …, c_n` from `det(λY + X)`.
    pub cs: Vec<Poly>,
    /// `C_0, …, C_n`, the principal-minor sums of `U`, on the free chart.
    pub big_cs: Vec<Poly>,
    /// `c̄_0, …, c̄_n` on the free chart.
    pub cbars: Vec<Poly>,
    pub labels: Vec<String>,
    pub system: Vec<RatFun>,
}

impl StaircaseSystem {
    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn staircase_matrix(n: usize, x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let n1 = n - 1;
    let size = n1 * n1;
    let vars = x.get(0, 0).vars().clone();
    let mut m = Matrix::from_fn(size, size, |_, _| Poly::zero(&vars));
    for r in 0..n1 {
        for k in 0..n1 {
            let row = r * n1 + k;
            let w = if r == n1 - 1 { 1 } else { n };
            for t in 0..w {
                m.set(row, r * n + t, y.get(k + 1, t).clone());
            }
            if r >= 1 {
                for t in 0..n {
                    m.set(row, (r - 1) * n + t, x.get(k + 1, t).clone());
                }
            }
        }
    }
    m
}

/// The `n(n−1)`-square block matrix `Λ` whose trailing minors are the `λ_i`.
pub fn lambda_matrix(n: usize, x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let n1 = n - 1;
    let size = n * n1;
    let vars = x.get(0, 0).vars().clone();
    let mut m = Matrix::from_fn(size, size, |_, _| Poly::zero(&vars));
    for r in 0..n {
        for k in 0..n1 {
            let row = r * n1 + k;
            for t in 0..n {
                if r < n1 {
                    m.set(row, r * n + t, y.get(k + 1, t).clone());
                }
                if r >= 1 {
                    m.set(row, (r - 1) * n + t, x.get(k + 1, t).clone());
                }
            }
        }
    }
    m
}

/// Coefficients in `λ` of `det(λ·a + b)`, constant term first.
fn det_pencil(a: &PolyMatrix, b: &PolyMatrix) -> Vec<Poly> {
    let vars = a.get(0, 0).vars().clone();
    let k = vars.len();
    let mut names = vars.names().to_vec();
    names.push("lambda".into());
    let ext = VarSet::new(names);
    let map: Vec<usize> = (0..k).collect();
    let lam = Poly::var(&ext, k);
    let m = Matrix::from_fn(a.rows(), a.cols(), |r, c| {
        lam.mul_poly(&a.get(r, c).embed(&ext, &map)).add_poly(&b.get(r, c).embed(&ext, &map))
    });
    let d = m.det_laplace();
    let n = a.rows();
    let mut coeffs = d.coeffs_in(k);
    coeffs.resize(n + 1, Poly::zero(&ext));
    coeffs
        .iter()
        .map(|c| {
            Poly::from_terms(&vars, c.terms().iter().map(|(m, v)| (Monomial::from_exps(&m.exps()[..k]), v.clone())))
        })
        .collect()
}

pub fn build_staircase(chart: &DualGroupChart) -> StaircaseSystem {
    let n = chart.n;
    let psi = staircase_matrix(n, &chart.x, &chart.y);
    let phis = psi.trailing_principal_minors();
    let pencil = det_pencil(&chart.y, &chart.x);
    let cs = (0..=n)
        .map(|i| if (i * (n - 1)) % 2 == 1 { pencil[n - i].neg_poly() } else { pencil[n - i].clone() })
        .collect();
    let one = Poly::one(&chart.vars);
    let id = Matrix::identity(n, &one);
    let lam_i = det_pencil(&id, &chart.u_free);
    let big_cs: Vec<Poly> = (0..=n).map(|i| lam_i[n - i].clone()).collect();
    let cbars = det_pencil(&id, &chart.u_free.sub(&id));

    let mut labels = Vec::new();
    let mut phi_sys = Vec::new();
    for (k, p) in phis.iter().enumerate() {
        labels.push(format!("phi{}", k + 1));
        phi_sys.push(chart.restrict(p));
    }
    for i in 2..=n {
        labels.push(entry_name("x", i, i));
        phi_sys.push(RatFun::from_poly(chart.x_free.get(i - 1, i - 1).clone()));
    }
    for (i, c) in cbars.iter().enumerate().take(n) {
        labels.push(format!("cbar{i}"));
        phi_sys.push(RatFun::from_poly(c.clone()));
    }
    StaircaseSystem { n, psi, phis, cs, big_cs, cbars, labels, system: phi_sys }
}

/// Lowest terms of `Φ` in the `u` coordinates, through the linear chart.
pub fn lows_via_chart(
    chart: &DualGroupChart,
    s: &StaircaseSystem,
    settings: &Settings,
) -> Result<Vec<LowestTerm<Poly>>> {
    settings.exec.map(&s.system, |f| chart.chart_low(f)).into_iter().collect()
}

/// Sum of the principal `k × k` minors.
pub fn principal_minor_sum<T: Ring>(m: &Matrix<T>, k: usize) -> T {
    let n = m.rows();
    let one = m.get(0, 0).one_like();
    if k == 0 {
        return one;
    }
    let mut acc = one.zero_like();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        acc = acc.add(&m.submatrix(&idx, &idx).det_laplace());
    }
    acc
}

/// Lowest terms of `Φ` at `(exp x, exp y)` with `u = x − y`, by truncated exponentials of adaptive order.
pub fn lows_via_jets(chart: &DualGroupChart, s: &StaircaseSystem, cap: u32) -> Result<Vec<LowestTerm<Poly>>> {
    let n = chart.n;
    let uv = u_vars(n);
    let u = |i: usize, j: usize| Poly::var(&uv, i * n + j);
    let half = qf(1, 2);
    let xs = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => u(r, c),
        std::cmp::Ordering::Equal => u(r, r).scale(&half),
        _ => Poly::zero(&uv),
    });
    let ys = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Greater => u(r, c).neg_poly(),
        std::cmp::Ordering::Equal => u(r, r).scale(&half).neg_poly(),
        _ => Poly::zero(&uv),
    });
    let total = s.system.len();
    let mut out: Vec<Option<LowestTerm<Poly>>> = vec![None; total];
    let mut d = 2u32;
    loop {
        let xj = truncated_exp(&xs, d);
        let yj = truncated_exp(&ys, d);
        let yinv = truncated_exp(&ys.neg(), d);
        let mut vals: Vec<Jet> = vec![Jet::zero(&uv, d); chart.bb.len()];
        for i in 1..=n {
            for j in 1..=n {
                if let Some(k) = chart.bb_layout.x[i][j] {
                    vals[k] = xj.get(i - 1, j - 1).clone();
                }
                if let Some(k) = chart.bb_layout.y[i][j] {
                    vals[k] = yj.get(i - 1, j - 1).clone();
                }
            }
        }
        let one = Jet::one(&uv, d);
        let m = xj.mul(&yinv).sub(&Matrix::identity(n, &one));
        for (k, slot) in out.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            let label = &s.labels[k];
            let jet = if k < s.phis.len() {
                s.phis[k].eval_ring(&vals)
            } else if let Some(rest) = label.strip_prefix("cbar") {
                let i: usize = rest.parse().expect("label index");
                principal_minor_sum(&m, n - i)
            } else {
                let i = k - s.phis.len() + 2;
                xj.get(i - 1, i - 1).clone()
            };
            *slot = jet.lowest_term();
        }
        if out.iter().all(|o| o.is_some()) {
            return Ok(out.into_iter().map(|o| o.unwrap()).collect());
        }
        if d >= cap {
            return Err(Error::TruncationInsufficient { cap });
        }
        d = (d * 2).min(cap);
    }
}

fn e_col(n: usize, k: usize, vars: &Vars) -> Vec<Poly> {
    (1..=n).map(|r| if r == k { Poly::one(vars) } else { Poly::zero(vars) }).collect()
}

/// Columns `u^k e_1` for `k = 0..=n`.
fn krylov(u: &PolyMatrix) -> Vec<Vec<Poly>> {
    let n = u.rows();
    let vars = u.get(0, 0).vars().clone();
    let mut cols = vec![e_col(n, 1, &vars)];
    for k in 1..=n {
        let next = u.mul_vec(&cols[k - 1]);
        cols.push(next);
    }
    cols
}

fn det_of_cols(cols: &[Vec<Poly>]) -> Poly {
    let n = cols.len();
    Matrix::from_fn(n, n, |r, c| cols[c][r].clone()).det_laplace()
}

/// The generic matrix `u` over [`u_vars`].
pub fn u_matrix(n: usize) -> PolyMatrix {
    let uv = u_vars(n);
    Matrix::from_fn(n, n, |r, c| Poly::var(&uv, r * n + c))
}

/// `φ_{p(n−1)+i}^low` as the determinant of unit vectors and Krylov columns of `u`, up to sign.
pub fn lows_closed_form(n: usize, p: usize, i: usize) -> Poly {
    assert!((1..n).contains(&i) && p + 2 <= n, "index out of range");
    let u = u_matrix(n);
    let vars = u.get(0, 0).vars().clone();
    let kr = krylov(&u);
    let mut cols = Vec::new();
    if i <= p + 1 {
        for k in n - p + i..=n {
            cols.push(e_col(n, k, &vars));
        }
        for k in (2..=i).rev() {
            cols.push(e_col(n, k, &vars));
        }
        for k in (0..n - p).rev() {
            cols.push(kr[k].clone());
        }
    } else {
        for k in i - p..=i {
            cols.push(e_col(n, k, &vars));
        }
        for k in (0..n - p - 1).rev() {
            cols.push(kr[k].clone());
        }
    }
    det_of_cols(&cols)
}

/// `F(u) = [ue_1 … uⁿe_1]` over any ring.
pub fn krylov_matrix<T: Ring>(u: &Matrix<T>) -> Matrix<T> {
    let n = u.rows();
    let one = u.get(0, 0).one_like();
    let mut col: Vec<T> = (0..n).map(|r| if r == 0 { one.clone() } else { one.zero_like() }).collect();
    let mut cols = Vec::new();
    for _ in 0..n {
        col = u.mul_vec(&col);
        cols.push(col.clone());
    }
    Matrix::from_fn(n, n, |r, c| cols[c][r].clone())
}

fn interval(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

/// Row set `I_1` of the `F(u)` minor and its size, for either branch.
fn f_minor_rows(n: usize, p: usize, i: usize) -> Vec<usize> {
    if i <= p + 1 {
        interval(i + 1, n - p + i - 1)
    } else {
        let mut r = interval(2, i - p - 1);
        r.extend(interval(i + 1, n));
        r
    }
}

/// `φ_{p(n−1)+i}^low` as a minor of `F(u)` on rows `I_1` and the leading columns.
pub fn lows_f_minor(n: usize, p: usize, i: usize) -> Poly {
    let f = krylov_matrix(&u_matrix(n));
    let rows = f_minor_rows(n, p, i);
    let cols = interval(1, rows.len());
    if rows.is_empty() {
        return Poly::one(f.get(0, 0).vars());
    }
    minor(&f, &rows, &cols)
}

fn subsets_of(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = pool.len();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize == k {
            out.push((0..m).filter(|&t| mask & (1 << t) != 0).map(|t| pool[t]).collect());
        }
    }
    out
}

/// `det [ue_1 … u^k e_1]_I` as the sum over chains of products of minors of `u`.
pub fn krylov_minor_chain_sum(u: &PolyMatrix, rows: &[usize]) -> Poly {
    let n = u.rows();
    let vars = u.get(0, 0).vars().clone();
    let k = rows.len();
    if k == 0 {
        return Poly::one(&vars);
    }
    if k == 1 {
        return minor(u, rows, &[1]);
    }
    let pool = interval(2, n);
    let mut acc = Poly::zero(&vars);
    for next in subsets_of(&pool, k - 1) {
        let mut cols = vec![1];
        cols.extend(&next);
        let d = minor(u, rows, &cols);
        if d.is_zero() {
            continue;
        }
        acc = acc.add_poly(&d.mul_poly(&krylov_minor_chain_sum(u, &next)));
    }
    acc
}

/// The minor-chain expansion of `φ_{p(n−1)+i}^low`.
pub fn lows_minor_sum(n: usize, p: usize, i: usize) -> Poly {
    krylov_minor_chain_sum(&u_matrix(n), &f_minor_rows(n, p, i))
}

/// The Kostant-Kirillov-Souriau structure on `gl_n*`.
#[allow(non_camel_case_types)]
#[derive(Clone, Debug)]
pub struct KKSgl {
    pub n: usize,
    pub pi: LinearPoissonStructure,
}

/// `{u_pq, u_rs} = δ_ps u_rq − δ_rq u_ps`.
pub fn kks_gl(n: usize) -> KKSgl {
    let uv = u_vars(n);
    let u = |i: usize, j: usize| Poly::var(&uv, (i - 1) * n + (j - 1));
    let idx = |a: usize| (a / n + 1, a % n + 1);
    let pi = LinearPoissonStructure::from_upper(&uv, |a, b| {
        let (p, qq) = idx(a);
        let (r, s) = idx(b);
        let mut acc = Poly::zero(&uv);
        if p == s {
            acc = acc.add_poly(&u(r, qq));
        }
        if r == qq {
            acc = acc.sub_poly(&u(p, s));
        }
        acc
    })
    .expect("skew by construction");
    KKSgl { n, pi }
}

/// Linearization of `pi_dual` at the identity, transported to the `u` coordinates.
pub fn linearized_dual(chart: &DualGroupChart) -> Result<LinearPoissonStructure> {
    let n = chart.n;
    let lin = chart.pi_dual.linearize(&chart.identity_point())?;
    let images = chart.linear_chart();
    // displacement of each free coordinate as a linear form in u
    let disp: Vec<Poly> = images.iter().map(|p| p.sub_poly(&Poly::constant(p.vars(), p.constant_term()))).collect();
    let uv = u_vars(n);
    let mut owner = vec![(0usize, Q::zero()); n * n];
    for i in 1..=n {
        for j in 1..=n {
            let a = (i - 1) * n + (j - 1);
            owner[a] = if i <= j {
                (chart.layout.x[i][j].unwrap(), if i == j { q(2) } else { q(1) })
            } else {
                (chart.layout.y[i][j].unwrap(), q(-1))
            };
        }
    }
    LinearPoissonStructure::from_upper(&uv, |a, b| {
        let (fa, sa) = &owner[a];
        let (fb, sb) = &owner[b];
        lin.entry(*fa, *fb).compose(&disp).scale(&(sa * sb))
    })
}

/// `{φ_{p(n−1)+i}^low : i ≤ p+1}`, as 1-based indices into the `φ`s.
pub fn selected_phi_indices(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for p in 0..n - 1 {
        for i in 1..=(p + 1).min(n - 1) {
            out.push(p * (n - 1) + i);
        }
    }
    out.sort_unstable();
    out
}

/// Certifies the selected lows as an integrable system on `(gl_n*, KKS)`.
pub fn choose_integrable_system_dualgl(n: usize, settings: &Settings) -> Result<IntegrableSystemReport> {
    let chart = build_dual_chart(n)?;
    let s = build_staircase(&chart);
    choose_integrable_system_from(&chart, &s, settings)
}

pub fn choose_integrable_system_from(
    chart: &DualGroupChart,
    s: &StaircaseSystem,
    settings: &Settings,
) -> Result<IntegrableSystemReport> {
    let n = chart.n;
    let mut labels = Vec::new();
    let mut idx: Vec<usize> = selected_phi_indices(n).into_iter().map(|k| k - 1).collect();
    idx.extend((0..n).map(|i| s.index(&format!("cbar{i}")).expect("cbar label")));
    let chosen: Vec<RatFun> = idx.iter().map(|&k| s.system[k].clone()).collect();
    let lows: Vec<Poly> =
        settings.exec.map(&chosen, |f| chart.chart_low(f).map(|l| l.term)).into_iter().collect::<Result<_>>()?;
    for &k in &idx {
        labels.push(s.labels[k].clone());
    }
    let magic = (n * n + n) / 2;
    let kks = kks_gl(n);
    let construction = format!("dualgl n={n} selected={}", labels.join(","));
    let report = certify_system(&lows, &kks.pi, magic, settings, &construction)?;
    if report.independent_count < magic {
        return Err(Error::CountShortfall { expected: magic, found: report.independent_count });
    }
    Ok(report)
}

/// `F(u) = [ue_1 … uⁿe_1]`.
#[allow(non_snake_case)]
pub fn F_map(u: &QMatrix) -> QMatrix {
    krylov_matrix(u)
}

/// `u = f·f̃⁻¹` with `f̃ = [e_1 f^{[1,n−1]}]`.
#[allow(non_snake_case)]
pub fn F_inverse(f: &QMatrix) -> Result<QMatrix> {
    let n = f.rows();
    let ft = Matrix::from_fn(n, n, |r, c| {
        if c == 0 {
            if r == 0 {
                Q::one()
            } else {
                Q::zero()
            }
        } else {
            f.get(r, c - 1).clone()
        }
    });
    let inv = ft.inverse().ok_or(Error::SingularLocus)?;
    Ok(f.mul(&inv))
}

/// `c̄_i = Σ_{j ≥ i} (−1)^{j−i} C(j,i) C_{n−j}`, symbolically.
pub fn casimir_binomial_check(s: &StaircaseSystem) -> bool {
    let n = s.n;
    (0..=n).all(|i| {
        let vars = s.cbars[i].vars().clone();
        let mut acc = Poly::zero(&vars);
        for j in i..=n {
            let c = Q::from_integer(binomial(j as u64, i as u64));
            let t = s.big_cs[n - j].scale(&c);
            acc = if (j - i) % 2 == 0 { acc.add_poly(&t) } else { acc.sub_poly(&t) };
        }
        acc == s.cbars[i]
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRelations {
    pub tail: bool,
    pub phi: bool,
}

/// `λ_{n(n−1)−i+1} = x_{n−i+1,n−i+1}⋯x_nn` and `λ_i = φ_i·x_22⋯x_nn`.
pub fn lambda_relations(chart: &DualGroupChart, s: &StaircaseSystem) -> LambdaRelations {
    let n = chart.n;
    let lams = lambda_matrix(n, &chart.x, &chart.y).trailing_principal_minors();
    let size = n * (n - 1);
    let xd = |i: usize| chart.x.get(i - 1, i - 1).clone();
    let tail = (1..n).all(|i| {
        let want = (n - i + 1..=n).fold(Poly::one(&chart.bb), |acc, k| acc.mul_poly(&xd(k)));
        lams[size - i] == want
    });
    let x2n = (2..=n).fold(Poly::one(&chart.bb), |acc, k| acc.mul_poly(&xd(k)));
    let phi = s.phis.iter().enumerate().all(|(k, p)| lams[k] == p.mul_poly(&x2n));
    LambdaRelations { tail, phi }
}

/// Pieces of the expression of `λ_{p(n−1)+i}` through `U = XY⁻¹`: the trailing minor of `Y`,
/// the power of `det Y`, the block determinant, and the total power of `U` in that block.
fn expforphi_parts<T: Ring>(u: &Matrix<T>, y: &Matrix<T>, p: usize, i: usize, first_branch: bool) -> (T, u32, T, u32) {
    let n = u.rows();
    let one = u.get(0, 0).one_like();
    let pw: Vec<Matrix<T>> = (0..=n).map(|k| u.pow(k as u32)).collect();
    let col = |m: &Matrix<T>, c: usize| -> Vec<T> { (0..n).map(|r| m.get(r, c - 1).clone()).collect() };
    let mut cols = Vec::new();
    let mut t = 0u32;
    let (start, e) = if first_branch {
        for c in n - p + i..=n {
            cols.push(col(&pw[n - p], c));
            t += (n - p) as u32;
        }
        for c in 1..=i {
            cols.push(col(&pw[n - p - 1], c));
            t += (n - p - 1) as u32;
        }
        (n - p + i, n - p - 1)
    } else {
        for c in i - p..=i {
            cols.push(col(&pw[n - p - 1], c));
            t += (n - p - 1) as u32;
        }
        (i - p, n - p - 2)
    };
    for k in (0..=n - p - 2).rev() {
        cols.push(col(&pw[k], 1));
        t += k as u32;
    }
    let block = Matrix::from_fn(n, n, |r, c| cols[c][r].clone()).det_laplace();
    let ysub = if start > n {
        one
    } else {
        let idx: Vec<usize> = (start - 1..n).collect();
        y.submatrix(&idx, &idx).det_laplace()
    };
    (ysub, e as u32, block, t)
}

fn branches(p: usize, i: usize) -> Vec<bool> {
    let mut b = Vec::new();
    if i <= p + 1 {
        b.push(true);
    }
    if i > p {
        b.push(false);
    }
    b
}

/// Symbolic check of the `U = XY⁻¹` expressions of every `λ_k`, with `Ũ = X adj(Y)` clearing denominators.
pub fn expforphi_symbolic(chart: &DualGroupChart) -> bool {
    let n = chart.n;
    let lams = lambda_matrix(n, &chart.x, &chart.y).trailing_principal_minors();
    let delta = (0..n).fold(Poly::one(&chart.bb), |acc, k| acc.mul_poly(chart.y.get(k, k)));
    let adj = Matrix::from_fn(n, n, |r, c| {
        let rows: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let cols: Vec<usize> = (0..n).filter(|&k| k != r).collect();
        let m = chart.y.submatrix(&rows, &cols).det_laplace();
        if (r + c) % 2 == 1 {
            m.neg_poly()
        } else {
            m
        }
    });
    let ut = chart.x.mul(&adj);
    for p in 0..n - 1 {
        for i in 1..n {
            for b in branches(p, i) {
                let (ysub, e, block, t) = expforphi_parts(&ut, &chart.y, p, i, b);
                let lhs = lams[p * (n - 1) + i - 1].mul_poly(&delta.pow(t));
                let rhs = ysub.mul_poly(&delta.pow(e)).mul_poly(&block);
                if !lhs.eq_up_to_sign(&rhs) {
                    return false;
                }
            }
        }
    }
    true
}

/// The same identities at random rational points of `B × B₋`, with one sign per `(p, i, branch)` across points.
pub fn expforphi_sampled(chart: &DualGroupChart, settings: &Settings) -> bool {
    let n = chart.n;
    let lams = lambda_matrix(n, &chart.x, &chart.y).trailing_principal_minors();
    let mut rng = rng_for(settings.seed, 0x0065_7870);
    let mut signs: std::collections::HashMap<(usize, usize, bool), Q> = std::collections::HashMap::new();
    for _ in 0..settings.samples.max(1) {
        let pt = random_point(&mut rng, chart.bb.len());
        let xq = chart.x.map(|e| e.eval(&pt));
        let yq = chart.y.map(|e| e.eval(&pt));
        let Some(yinv) = yq.inverse() else { continue };
        let uq = xq.mul(&yinv);
        let det_y: Q = (0..n).map(|k| yq.get(k, k).clone()).product();
        for p in 0..n - 1 {
            for i in 1..n {
                let lam = lams[p * (n - 1) + i - 1].eval(&pt);
                for b in branches(p, i) {
                    let (ysub, e, block, _) = expforphi_parts(&uq, &yq, p, i, b);
                    let rhs = ysub * pow_q(&det_y, e) * block;
                    if rhs.is_zero() {
                        if !lam.is_zero() {
                            return false;
                        }
                        continue;
                    }
                    let ratio = &lam / &rhs;
                    if ratio != Q::one() && ratio != -Q::one() {
                        return false;
                    }
                    if *signs.entry((p, i, b)).or_insert_with(|| ratio.clone()) != ratio {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn pow_q(a: &Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogVolumeCheck {
    pub closed_form: bool,
    pub deg_mu_low: i64,
    pub half_rank: i64,
}

impl LogVolumeCheck {
    pub fn holds(&self) -> bool {
        self.closed_form && self.deg_mu_low == self.half_rank
    }
}

/// `μ_Φ = ±2(x_11⋯x_nn)ⁿ/(c̄_0⋯c̄_{n−1})` on the free chart, and `deg μ_Φ^low = ½(n² − n)`.
pub fn log_volume_identity_check(chart: &DualGroupChart, s: &StaircaseSystem) -> Result<LogVolumeCheck> {
    let n = chart.n;
    if !(2..=3).contains(&n) {
        return Err(Error::Input("the full log-volume check is limited to n ≤ 3".into()));
    }
    let mu = log_volume(&s.system)?;
    let xprod = (1..=n).fold(Poly::one(&chart.vars), |acc, k| acc.mul_poly(chart.x_free.get(k - 1, k - 1)));
    let cprod = s.cbars.iter().take(n).fold(Poly::one(&chart.vars), |acc, c| acc.mul_poly(c));
    let want = RatFun::new(xprod.pow(n as u32).scale(&q(2)), cprod);
    let closed_form = mu.coefficient.eq_up_to_sign(&want);
    let images: Vec<RatFun> = chart.linear_chart().into_iter().map(RatFun::from_poly).collect();
    let composed: Vec<RatFun> =
        s.system.iter().map(|f| compose_all(f.num(), &images).div_rf(&compose_all(f.den(), &images))).collect();
    let deg = deg_mu_low(&composed)?;
    Ok(LogVolumeCheck { closed_form, deg_mu_low: deg, half_rank: ((n * n - n) / 2) as i64 })
}
