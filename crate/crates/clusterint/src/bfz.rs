//! The BFZ extended cluster on `SL(n+1)` near the identity.
//!
//! Functions are evaluated at `exp(u)` for traceless `u`, with `u_{n+1,n+1}` eliminated,
//! as jets of adaptive order.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::poisson::{certify_system, LinearPoissonStructure, PoissonStructure};
use crate::polyring::{
    q, truncated_exp, Jet, LowestTerm, Matrix, Poly, PolyMatrix, QMatrix, RatFun, Ring, VarSet, Vars, Q,
};
use crate::probe::{det_valuation, exp_line_dual, random_matrix};
use crate::report::IntegrableSystemReport;
use crate::typea::{entry_name, kplus_kminus, minor, standard_coefficient, standard_gl, ReducedWord, WeylElt};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleWord {
    pub neg: ReducedWord,
    pub pos: ReducedWord,
}

impl DoubleWord {
    pub fn new(neg: ReducedWord, pos: ReducedWord) -> Result<Self> {
        let m = neg.m();
        if pos.m() != m {
            return Err(Error::DimensionMismatch(format!("words for SL({m}) and SL({})", pos.m())));
        }
        let w0 = WeylElt::longest(m);
        if neg.element() != w0 || pos.element() != w0 {
            return Err(Error::InvalidWord("both halves must be reduced words of the longest element".into()));
        }
        Ok(DoubleWord { neg, pos })
    }

    /// `(1, …, n, 1, …, n−1, …, 1)` on both sides.
    pub fn staircase(n: usize) -> Self {
        let w = ReducedWord::staircase(n + 1);
        DoubleWord { neg: w.clone(), pos: w }
    }

    pub fn is_staircase(&self) -> bool {
        let s = ReducedWord::staircase(self.neg.m());
        self.neg == s && self.pos == s
    }
}

/// A product of minors, each as (rows, columns).
pub type MinorProduct = Vec<(Vec<usize>, Vec<usize>)>;

/// Signed sum of products of ordinary minors with 1-based sorted rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorExpr {
    terms: Vec<(i64, MinorProduct)>,
}

impl MinorExpr {
    pub fn minor(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        MinorExpr { terms: vec![(1, vec![(rows, cols)])] }
    }

    /// `a·b − c·d` for single minors.
    pub fn product_difference(a: &MinorExpr, b: &MinorExpr, c: &MinorExpr, d: &MinorExpr) -> Self {
        let single = |e: &MinorExpr| e.terms[0].1[0].clone();
        MinorExpr { terms: vec![(1, vec![single(a), single(b)]), (-1, vec![single(c), single(d)])] }
    }

    pub fn as_minor(&self) -> Option<(&[usize], &[usize])> {
        match self.terms.as_slice() {
            [(1, f)] if f.len() == 1 => Some((&f[0].0, &f[0].1)),
            _ => None,
        }
    }

    pub fn eval<T: Ring>(&self, x: &Matrix<T>) -> T {
        let zero = x.get(0, 0).zero_like();
        self.terms.iter().fold(zero, |acc, (c, factors)| {
            let prod = factors.iter().fold(x.get(0, 0).one_like(), |p, (r, k)| p.mul(&minor(x, r, k)));
            let prod = prod.mul(&prod.constant_like(&q(*c)));
            acc.add(&prod)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    F(usize),
    Phi(usize),
    Psi(usize),
    G(usize),
    GPrime(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::F(i) => write!(f, "f{i}"),
            Label::Phi(k) => write!(f, "phi{k}"),
            Label::Psi(k) => write!(f, "psi{k}"),
            Label::G(i) => write!(f, "g{i}"),
            Label::GPrime(i) => write!(f, "g'{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BfzEntry {
    pub label: Label,
    pub expr: MinorExpr,
    pub jet: Jet,
    pub low: LowestTerm<Poly>,
}

#[derive(Clone, Debug)]
pub struct BFZCluster {
    pub n: usize,
    pub dword: DoubleWord,
    pub vars: Vars,
    pub u: PolyMatrix,
    pub order: u32,
    pub fs: Vec<BfzEntry>,
    pub phis: Vec<BfzEntry>,
    /// All `ψ_k`, the frozen `g_j` among them labelled as such.
    pub psis: Vec<BfzEntry>,
    pub gprimes: Vec<BfzEntry>,
    /// `g_j = psis[g_psi[j − 1]]`.
    pub g_psi: Vec<usize>,
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

/// Coordinates `u_ij` of `sl(m)`, row-major, without `u_mm`.
pub fn sl_vars(m: usize) -> Vars {
    VarSet::new(
        (1..=m)
            .flat_map(|i| (1..=m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != m || j != m)
            .map(|(i, j)| entry_name("u", i, j)),
    )
}

/// The generic traceless matrix, `u_mm = −(u_11 + ⋯ + u_{m−1,m−1})`.
pub fn sl_matrix(vars: &Vars, m: usize) -> PolyMatrix {
    let var = |i: usize, j: usize| Poly::var(vars, (i - 1) * m + (j - 1));
    Matrix::from_fn(m, m, |r, c| {
        if r == m - 1 && c == m - 1 {
            (1..m).fold(Poly::zero(vars), |acc, k| acc.sub_poly(&var(k, k)))
        } else {
            var(r + 1, c + 1)
        }
    })
}

/// Linearization at the identity of the standard structure on `SL(m)`, in the `u` coordinates.
pub fn pi0_sl(n: usize) -> LinearPoissonStructure {
    let m = n + 1;
    let vars = sl_vars(m);
    let u = sl_matrix(&vars, m);
    let idx = |a: usize| (a / m + 1, a % m + 1);
    let delta = |a: usize, b: usize| if a == b { Q::from_integer(1.into()) } else { Q::zero() };
    LinearPoissonStructure::from_upper(&vars, |a, b| {
        let (i, j) = idx(a);
        let (p, qq) = idx(b);
        let c = standard_coefficient(i, j, p, qq);
        if c.is_zero() {
            return Poly::zero(&vars);
        }
        u.get(p - 1, j - 1).scale(&delta(i, qq)).add_poly(&u.get(i - 1, qq - 1).scale(&delta(p, j))).scale(&c)
    })
    .expect("linear and skew by construction")
}

pub fn i_star(n: usize, i: usize) -> usize {
    n + 1 - i
}

fn index_classes(n: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let i0 = (1..=n).filter(|&i| i == i_star(n, i)).collect();
    let i1 = (1..=n).filter(|&i| i < i_star(n, i)).collect();
    let i2 = (1..=n).filter(|&i| i > i_star(n, i)).collect();
    (i0, i1, i2)
}

fn interval(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

struct Exprs {
    fs: Vec<MinorExpr>,
    phis: Vec<MinorExpr>,
    psis: Vec<MinorExpr>,
    g_psi: Vec<usize>,
}

fn cluster_exprs(n: usize, dword: &DoubleWord) -> Exprs {
    let m = n + 1;
    let w0 = WeylElt::longest(m);
    let fs = (1..=n).map(|i| MinorExpr::minor(interval(1, i), w0.image_of_initial(i))).collect();
    let neg = dword.neg.letters();
    let phis = (0..neg.len())
        .map(|k| {
            let i = neg[k];
            MinorExpr::minor(dword.neg.prefix(k + 1).image_of_initial(i), w0.image_of_initial(i))
        })
        .collect();
    let pos = dword.pos.letters();
    let l0 = pos.len();
    let psis = (0..l0)
        .map(|k| {
            let j = pos[k];
            let tail: Vec<usize> = pos[k + 1..].iter().rev().copied().collect();
            let v = WeylElt::from_word(m, &tail);
            MinorExpr::minor(w0.image_of_initial(j), v.image_of_initial(j))
        })
        .collect();
    let g_psi =
        (1..=n).map(|j| (0..l0).rev().find(|&k| pos[k] == j).expect("every letter occurs in a word of w0")).collect();
    Exprs { fs, phis, psis, g_psi }
}

fn low_of(j: &Jet) -> Option<LowestTerm<Poly>> {
    j.lowest_term()
}

pub fn build_bfz(n: usize, dword: &DoubleWord, d: u32, settings: &Settings) -> Result<BFZCluster> {
    build_bfz_capped(n, dword, d, 4 * n as u32, settings)
}

/// As [`build_bfz`], doubling the jet order until every lowest term is determined or `cap` is passed.
pub fn build_bfz_capped(n: usize, dword: &DoubleWord, d: u32, cap: u32, settings: &Settings) -> Result<BFZCluster> {
    if n < 1 || dword.neg.m() != n + 1 {
        return Err(Error::DimensionMismatch(format!("double word is not for SL({})", n + 1)));
    }
    let m = n + 1;
    let vars = sl_vars(m);
    let u = sl_matrix(&vars, m);
    let ex = cluster_exprs(n, dword);
    let (i0, i1, i2) = index_classes(n);
    let gprime_exprs: Vec<MinorExpr> = i2
        .iter()
        .map(|&i| {
            let s = i_star(n, i);
            MinorExpr::product_difference(
                &ex.fs[i - 1],
                &ex.psis[ex.g_psi[i - 1]],
                &ex.fs[s - 1],
                &ex.psis[ex.g_psi[s - 1]],
            )
        })
        .collect();
    let all: Vec<&MinorExpr> = ex.fs.iter().chain(&ex.phis).chain(&ex.psis).chain(&gprime_exprs).collect();
    let mut order = d.max(1);
    loop {
        let x = truncated_exp(&u, order);
        let jets = settings.exec.map(&all, |e| e.eval(&x));
        if let Some(lows) = jets.iter().map(low_of).collect::<Option<Vec<_>>>() {
            let mut it = jets.into_iter().zip(lows).zip(all.iter().map(|e| (*e).clone()));
            let mut take = |count: usize, label: &dyn Fn(usize) -> Label| -> Vec<BfzEntry> {
                (0..count)
                    .map(|k| {
                        let ((jet, low), expr) = it.next().expect("one jet per expression");
                        BfzEntry { label: label(k), expr, jet, low }
                    })
                    .collect()
            };
            let fs = take(n, &|k| Label::F(k + 1));
            let phis = take(ex.phis.len(), &|k| Label::Phi(k + 1));
            let g_of: Vec<Option<usize>> =
                (0..ex.psis.len()).map(|k| ex.g_psi.iter().position(|&p| p == k).map(|j| j + 1)).collect();
            let psis = take(ex.psis.len(), &|k| g_of[k].map(Label::G).unwrap_or(Label::Psi(k + 1)));
            let gprimes = take(i2.len(), &|k| Label::GPrime(i2[k]));
            return Ok(BFZCluster {
                n,
                dword: dword.clone(),
                vars,
                u,
                order,
                fs,
                phis,
                psis,
                gprimes,
                g_psi: ex.g_psi,
                i0,
                i1,
                i2,
            });
        }
        order *= 2;
        if order > cap {
            return Err(Error::TruncationInsufficient { cap });
        }
    }
}

impl BFZCluster {
    pub fn m(&self) -> usize {
        self.n + 1
    }

    pub fn l0(&self) -> usize {
        self.phis.len()
    }

    pub fn g(&self, i: usize) -> &BfzEntry {
        &self.psis[self.g_psi[i - 1]]
    }

    pub fn f(&self, i: usize) -> &BfzEntry {
        &self.fs[i - 1]
    }

    pub fn gprime(&self, i: usize) -> Option<&BfzEntry> {
        self.gprimes.iter().find(|e| e.label == Label::GPrime(i))
    }

    /// Minor of the traceless coordinate matrix.
    pub fn u_minor(&self, rows: &[usize], cols: &[usize]) -> Poly {
        minor(&self.u, rows, cols)
    }

    /// Exchangeable part: every `φ_k` and the `ψ_k` that are not some `g_j`.
    pub fn exchangeable(&self) -> Vec<&BfzEntry> {
        self.phis.iter().chain(self.psis.iter().filter(|e| matches!(e.label, Label::Psi(_)))).collect()
    }

    /// The modified extended cluster: `g_i` replaced by `g′_i` for `i ∈ I₂`.
    pub fn modified_cluster(&self) -> Vec<&BfzEntry> {
        let mut out: Vec<&BfzEntry> = self.fs.iter().chain(&self.phis).collect();
        for e in &self.psis {
            match e.label {
                Label::G(i) if self.i2.contains(&i) => out.push(self.gprime(i).expect("built for every i in I2")),
                _ => out.push(e),
            }
        }
        out
    }

    pub fn initial_cluster(&self) -> Vec<&BfzEntry> {
        self.fs.iter().chain(&self.phis).chain(&self.psis).collect()
    }

    pub fn construction(&self) -> String {
        let g: Vec<String> = self.g_psi.iter().map(|k| format!("psi{}", k + 1)).collect();
        format!("bfz n={} g-index={}", self.n, g.join(","))
    }
}

/// Labels and lowest terms selected by the degree-jump and admissibility rules.
pub fn select_bfz(c: &BFZCluster) -> Vec<(Label, Poly)> {
    let n = c.n;
    let deg = |e: &BfzEntry| e.low.degree;
    let mut out = Vec::new();
    // word (n, …, 1, i_1, …, i_l0) carries f_n, …, f_1, φ_1, …, φ_l0
    let mut letters: Vec<usize> = (1..=n).rev().collect();
    letters.extend_from_slice(c.dword.neg.letters());
    let entries: Vec<&BfzEntry> = (1..=n).rev().map(|i| c.f(i)).chain(&c.phis).collect();
    let km = kplus_kminus(&letters);
    for (p, e) in entries.iter().enumerate() {
        let next = km.plus[p].map(|q| deg(entries[q - 1])).unwrap_or(0);
        if deg(e) == next + 1 {
            out.push((e.label, e.low.term.clone()));
        }
    }
    let kp = kplus_kminus(c.dword.pos.letters());
    let jump = |k: usize| {
        let prev = kp.minus[k].map(|q| deg(&c.psis[q - 1])).unwrap_or(0);
        deg(&c.psis[k]) == prev + 1
    };
    for (k, e) in c.psis.iter().enumerate() {
        let admissible = match e.label {
            Label::G(i) if c.i2.contains(&i) => false,
            Label::G(i) if c.i1.contains(&i) => jump(k) || jump(c.g_psi[i_star(n, i) - 1]),
            _ => jump(k),
        };
        if admissible {
            out.push((e.label, e.low.term.clone()));
        }
    }
    for e in &c.gprimes {
        out.push((e.label, e.low.term.clone()));
    }
    out
}

pub fn choose_integrable_system_bfz(c: &BFZCluster, settings: &Settings) -> Result<IntegrableSystemReport> {
    let chosen = select_bfz(c);
    let labels: Vec<String> = chosen.iter().map(|(l, _)| l.to_string()).collect();
    let polys: Vec<Poly> = chosen.into_iter().map(|(_, p)| p).collect();
    let magic = c.l0() + c.n;
    let pi0 = pi0_sl(c.n);
    let construction = format!("{} selected={}", c.construction(), labels.join(","));
    let report = certify_system(&polys, &pi0, magic, settings, &construction)?;
    if report.independent_count < magic {
        return Err(Error::CountShortfall { expected: magic, found: report.independent_count });
    }
    Ok(report)
}

fn normalized(p: &Poly) -> String {
    if p.is_constant() {
        return "1".into();
    }
    if p.leading_coeff() < Q::zero() {
        p.neg_poly().to_string()
    } else {
        p.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GexpReport {
    pub cluster_variables: bool,
    pub f_lows: bool,
    pub g_lows: bool,
    pub modified_lows: bool,
}

impl GexpReport {
    pub fn all(&self) -> bool {
        self.cluster_variables && self.f_lows && self.g_lows && self.modified_lows
    }
}

/// Compares the computed lowest terms with the closed minor formulas in `u`, up to sign.
pub fn gexp_check(c: &BFZCluster) -> Result<GexpReport> {
    if !c.dword.is_staircase() {
        return Err(Error::WrongWord);
    }
    let n = c.n;
    let np1 = n + 1;
    let mut want: Vec<String> = Vec::new();
    for k in 2..=np1 {
        for l in k - 1..=np1 {
            if l + l > n + k {
                continue;
            }
            let rows = interval(k, l);
            let cols = interval(n + k - l + 1, np1);
            want.push(normalized(&c.u_minor(&rows, &cols)));
            want.push(normalized(&c.u_minor(&cols, &rows)));
        }
    }
    let mut got: Vec<String> = c.exchangeable().iter().map(|e| normalized(&e.low.term)).collect();
    for v in [&mut want, &mut got] {
        v.sort();
        v.dedup();
    }
    let cluster_variables = want == got;

    let f_lows = (1..=n).all(|i| {
        let twin = c.f(i).low.term.eq_up_to_sign(&c.f(n - i + 1).low.term);
        let closed =
            2 * i > n + 1 || c.f(i).low.term.eq_up_to_sign(&c.u_minor(&interval(1, i), &interval(n - i + 2, np1)));
        twin && closed
    });
    let g_lows =
        c.i0.iter()
            .chain(&c.i1)
            .all(|&i| c.g(i).low.term.eq_up_to_sign(&c.u_minor(&interval(n - i + 2, np1), &interval(1, i))));
    let modified_lows = c.i2.iter().all(|&i| {
        let a = interval(1, n - i + 1);
        let b = interval(i + 1, np1);
        let mut sum = Poly::zero(&c.vars);
        for k in n - i + 2..=i {
            let with = |s: &[usize]| {
                let mut v = s.to_vec();
                v.push(k);
                v.sort_unstable();
                v
            };
            sum = sum
                .add_poly(&c.u_minor(&b, &a).mul_poly(&c.u_minor(&with(&a), &with(&b))))
                .add_poly(&c.u_minor(&a, &b).mul_poly(&c.u_minor(&with(&b), &with(&a))));
        }
        c.gprime(i).is_some_and(|e| e.low.term.eq_up_to_sign(&sum))
    });
    Ok(GexpReport { cluster_variables, f_lows, g_lows, modified_lows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegCasRow {
    pub i: usize,
    pub product_degree: i64,
    pub twin_equal: bool,
    pub difference_degree: Option<i64>,
}

/// `(f_i g_i)^low = (f_{i*} g_{i*})^low`, and the difference gains exactly one degree when `i ≠ i*`.
pub fn degcas_check(c: &BFZCluster) -> Vec<DegCasRow> {
    let n = c.n;
    (1..=n)
        .map(|i| {
            let s = i_star(n, i);
            let prod = c.f(i).low.term.mul_poly(&c.g(i).low.term);
            let twin = c.f(s).low.term.mul_poly(&c.g(s).low.term);
            let difference_degree = if i == s {
                None
            } else {
                let e = c.gprime(i.max(s)).expect("built for every i in I2");
                Some(e.low.degree)
            };
            DegCasRow {
                i,
                product_degree: c.f(i).low.degree + c.g(i).low.degree,
                twin_equal: prod == twin,
                difference_degree,
            }
        })
        .collect()
}

/// `f_i / g_{i*}` brackets to zero with every function of the initial extended cluster on `GL(n+1)`.
pub fn frozen_casimir_check(n: usize, dword: &DoubleWord) -> Result<()> {
    let m = n + 1;
    let (vars, pi) = standard_gl(m);
    let x: PolyMatrix = Matrix::from_fn(m, m, |i, j| Poly::var(&vars, i * m + j));
    let ex = cluster_exprs(n, dword);
    let cluster: Vec<RatFun> =
        ex.fs.iter().chain(&ex.phis).chain(&ex.psis).map(|e| RatFun::from_poly(e.eval(&x))).collect();
    for i in 1..=n {
        let f = ex.fs[i - 1].eval(&x);
        let g = ex.psis[ex.g_psi[i_star(n, i) - 1]].eval(&x);
        let c = RatFun::new(f, g);
        for h in &cluster {
            if !casimir_against(&pi, &c, h) {
                return Err(Error::NotCasimir(format!("f{i}/g{} against {}", i_star(n, i), h)));
            }
        }
    }
    Ok(())
}

fn casimir_against(pi: &PoissonStructure, c: &RatFun, h: &RatFun) -> bool {
    pi.bracket(c, h).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuProbe {
    /// Smallest line valuation of `μ`, an upper bound for `deg μ^low`.
    pub upper_bound: i64,
    pub half_rank: i64,
    /// The bound meets the lower bound `½ rk π₀`, so it is the exact degree.
    pub certified: bool,
}

/// Lowest-degree bound of the log-volume form of the modified (or initial) extended cluster.
pub fn mu_low_probe(c: &BFZCluster, modified: bool, settings: &Settings) -> Result<MuProbe> {
    let fs: Vec<MinorExpr> =
        if modified { c.modified_cluster() } else { c.initial_cluster() }.into_iter().map(|e| e.expr.clone()).collect();
    let m = c.m();
    let dim = (m * m - 1) as i64;
    let directions: Vec<QMatrix> = (0..m * m - 1)
        .map(|a| {
            let (i, j) = (a / m, a % m);
            Matrix::from_fn(m, m, |r, s| {
                if (r, s) == (i, j) {
                    q(1)
                } else if i == j && r == m - 1 && s == m - 1 {
                    q(-1)
                } else {
                    Q::zero()
                }
            })
        })
        .collect();
    // a line inside the zero set of some lowest term is skipped
    let bounds = settings.exec.map_range(settings.samples.max(1), |s| {
        let v = random_matrix(m, settings.seed, s as u64, true);
        let mut order = 4 * m;
        while order <= 16 * m {
            let mut vals: Option<Vec<i64>> = None;
            let mut rows: Vec<Vec<crate::polyring::Series>> = Vec::new();
            for e in &directions {
                let x = exp_line_dual(&v, e, order);
                let ds: Vec<_> = fs.iter().map(|f| f.eval(&x)).collect();
                if vals.is_none() {
                    vals = ds.iter().map(|d| d.re.valuation().map(|v| v as i64)).collect::<Option<Vec<_>>>();
                    if vals.is_none() {
                        break;
                    }
                }
                rows.push(ds.into_iter().map(|d| d.du).collect());
            }
            if let Some(vals) = vals {
                let j = Matrix::from_fn(rows.len(), rows.len(), |a, b| rows[a][b].clone());
                if let Some(dv) = det_valuation(&j) {
                    return Some(dv as i64 - vals.iter().sum::<i64>() + dim);
                }
            }
            order *= 2;
        }
        None
    });
    let upper_bound = bounds.into_iter().flatten().min().ok_or(Error::TruncationInsufficient { cap: 16 * m as u32 })?;
    let half_rank = (pi0_sl(c.n).generic_rank(settings)? / 2) as i64;
    if upper_bound < half_rank {
        return Err(Error::InequalityViolated { deg_mu_low: upper_bound, half_rank });
    }
    Ok(MuProbe { upper_bound, half_rank, certified: upper_bound == half_rank })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeData {
    pub roots: Vec<(usize, usize)>,
    pub e_plus: Vec<Vec<i64>>,
    pub e_minus: Vec<Vec<i64>>,
}

fn root_vector(m: usize, (a, b): (usize, usize)) -> Vec<i64> {
    let mut v = vec![0; m];
    v[a - 1] += 1;
    v[b - 1] -= 1;
    v
}

fn is_root(v: &[i64]) -> bool {
    v.iter().filter(|&&c| c == 1).count() == 1
        && v.iter().filter(|&&c| c == -1).count() == 1
        && v.iter().all(|&c| c.abs() <= 1)
}

pub fn strongly_orthogonal(m: usize, a: (usize, usize), b: (usize, usize)) -> bool {
    let (va, vb) = (root_vector(m, a), root_vector(m, b));
    let sum: Vec<i64> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
    let diff: Vec<i64> = va.iter().zip(&vb).map(|(x, y)| x - y).collect();
    !is_root(&sum) && !is_root(&diff)
}

/// Highest root of each remaining orthogonal subsystem, recursively.
pub fn kostant_cascade(n: usize) -> CascadeData {
    let m = n + 1;
    let mut support: Vec<usize> = (1..=m).collect();
    let mut roots = Vec::new();
    while support.len() >= 2 {
        let beta = (support[0], *support.last().expect("nonempty"));
        roots.push(beta);
        // roots orthogonal to ε_a − ε_b avoid both indices
        support.retain(|&k| k != beta.0 && k != beta.1);
    }
    for (x, a) in roots.iter().enumerate() {
        for b in &roots[x + 1..] {
            assert!(strongly_orthogonal(m, *a, *b), "cascade roots are strongly orthogonal");
        }
    }
    let mut e_plus = vec![vec![0; m]; m];
    let mut e_minus = vec![vec![0; m]; m];
    for &(a, b) in &roots {
        e_plus[a - 1][b - 1] = 1;
        e_minus[b - 1][a - 1] = 1;
    }
    CascadeData { roots, e_plus, e_minus }
}

fn bracket(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b).sub(&b.mul(a))
}

/// Dimension of the stabilizer of `e₊ + e₋` in the dual Lie algebra, from the three membership conditions.
pub fn stabilizer_dimension(n: usize) -> usize {
    let m = n + 1;
    let cas = kostant_cascade(n);
    let to_q = |e: &Vec<Vec<i64>>| Matrix::from_fn(m, m, |i, j| q(e[i][j]));
    let (xp, xm) = (to_q(&cas.e_plus), to_q(&cas.e_minus));
    let unit = |i: usize, j: usize| Matrix::from_fn(m, m, |r, s| if (r, s) == (i, j) { q(1) } else { Q::zero() });
    let zero = Matrix::from_fn(m, m, |_, _| Q::zero());
    // unknowns as (h, n₊, n₋) triples
    let mut unknowns: Vec<(QMatrix, QMatrix, QMatrix)> = Vec::new();
    for k in 0..n {
        unknowns.push((unit(k, k).sub(&unit(k + 1, k + 1)), zero.clone(), zero.clone()));
    }
    for i in 0..m {
        for j in 0..m {
            if i < j {
                unknowns.push((zero.clone(), unit(i, j), zero.clone()));
            } else if i > j {
                unknowns.push((zero.clone(), zero.clone(), unit(i, j)));
            }
        }
    }
    let columns: Vec<Vec<Q>> = unknowns
        .iter()
        .map(|(h, np, nm)| {
            let a = bracket(&h.add(np), &xm);
            let b = bracket(np, &xm).add(&bracket(nm, &xp));
            let c = bracket(&h.sub(nm), &xp);
            let mut col = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    if i > j {
                        col.push(a.get(i, j).clone());
                    }
                    if i == j {
                        col.push(b.get(i, j).clone());
                    }
                    if i < j {
                        col.push(c.get(i, j).clone());
                    }
                }
            }
            col
        })
        .collect();
    let rows = columns[0].len();
    let mat: QMatrix = Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone());
    unknowns.len() - mat.rank()
}
