//! Type A data: weights in the ε-basis, permutations as Weyl group elements,
//! Weyl representatives, Bott–Samelson products and generalized minors.

use crate::error::{Error, Result};
use crate::poisson::PoissonStructure;
use crate::polyring::{qf, Matrix, Poly, PolyMatrix, RatFun, Ring, Vars, Q};

/// Integral weight of `gl_m` in the ε-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    /// `ω_i = ε_1 + ... + ε_i`.
    pub fn omega(m: usize, i: usize) -> Self {
        Weight { coords: (0..m).map(|a| if a < i { 1 } else { 0 }).collect() }
    }

    /// `α_i = ε_i − ε_{i+1}`.
    pub fn alpha(m: usize, i: usize) -> Self {
        let mut coords = vec![0; m];
        coords[i - 1] = 1;
        coords[i] = -1;
        Weight { coords }
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    /// `w(ε_a) = ε_{w(a)}`.
    pub fn act(&self, w: &WeylElt) -> Weight {
        let mut coords = vec![0; self.m()];
        for (a, &c) in self.coords.iter().enumerate() {
            coords[w.apply(a + 1) - 1] += c;
        }
        Weight { coords }
    }
}

/// `Σ a_k b_k`, so that `⟨α_i, α_i⟩ = 2`.
pub fn pairing(a: &Weight, b: &Weight) -> Result<i64> {
    if a.m() != b.m() {
        return Err(Error::DimensionMismatch(format!("weights of length {} and {}", a.m(), b.m())));
    }
    Ok(a.coords.iter().zip(&b.coords).map(|(x, y)| x * y).sum())
}

/// Permutation of `[1, m]` stored as its one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    perm: Vec<usize>,
}

impl WeylElt {
    pub fn identity(m: usize) -> Self {
        WeylElt { perm: (1..=m).collect() }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let m = perm.len();
        let mut seen = vec![false; m + 1];
        for &p in &perm {
            if p == 0 || p > m || seen[p] {
                return Err(Error::Input(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(WeylElt { perm })
    }

    /// Simple transposition `s_i`.
    pub fn simple(m: usize, i: usize) -> Self {
        let mut perm: Vec<usize> = (1..=m).collect();
        perm.swap(i - 1, i);
        WeylElt { perm }
    }

    /// `s_{i_1} ⋯ s_{i_k}`.
    pub fn from_word(m: usize, letters: &[usize]) -> Self {
        letters.iter().fold(Self::identity(m), |acc, &i| acc.compose(&Self::simple(m, i)))
    }

    /// Longest element `a ↦ m + 1 − a`.
    pub fn longest(m: usize) -> Self {
        WeylElt { perm: (1..=m).rev().collect() }
    }

    pub fn m(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, a: usize) -> usize {
        self.perm[a - 1]
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &WeylElt) -> WeylElt {
        WeylElt { perm: other.perm.iter().map(|&a| self.perm[a - 1]).collect() }
    }

    pub fn inverse(&self) -> WeylElt {
        let mut inv = vec![0; self.m()];
        for (a, &b) in self.perm.iter().enumerate() {
            inv[b - 1] = a + 1;
        }
        WeylElt { perm: inv }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.m();
        (0..n).map(|a| (a + 1..n).filter(|&b| self.perm[a] > self.perm[b]).count()).sum()
    }

    /// Sorted image of `{1, ..., i}`.
    pub fn image_of_initial(&self, i: usize) -> Vec<usize> {
        let mut s: Vec<usize> = (1..=i).map(|a| self.apply(a)).collect();
        s.sort_unstable();
        s
    }

    /// A reduced word, found by peeling off right descents.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        while let Some(i) = (1..w.m()).find(|&i| w.apply(i) > w.apply(i + 1)) {
            word.push(i);
            w = w.compose(&Self::simple(w.m(), i));
        }
        word.reverse();
        word
    }

    /// Every permutation of `[1, m]` in lexicographic order.
    pub fn all(m: usize) -> Vec<WeylElt> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=m).collect();
        loop {
            out.push(WeylElt { perm: cur.clone() });
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Word in the simple reflections of `S_m` whose length equals the length of its product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    m: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(m: usize, letters: Vec<usize>) -> Result<Self> {
        if m < 2 && !letters.is_empty() {
            return Err(Error::InvalidWord(format!("S_{m} has no simple reflections")));
        }
        if let Some(&bad) = letters.iter().find(|&&i| i == 0 || i >= m) {
            return Err(Error::InvalidWord(format!("letter {bad} outside [1, {}]", m - 1)));
        }
        if WeylElt::from_word(m, &letters).length() != letters.len() {
            return Err(Error::NotReduced(letters));
        }
        Ok(ReducedWord { m, letters })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn element(&self) -> WeylElt {
        WeylElt::from_word(self.m, &self.letters)
    }

    /// `s_{i_1} ⋯ s_{i_k}` for the prefix of length `k`.
    pub fn prefix(&self, k: usize) -> WeylElt {
        WeylElt::from_word(self.m, &self.letters[..k])
    }

    /// `(1, ..., n, 1, ..., n − 1, ..., 1, 2, 1)` for `S_{n+1}`.
    pub fn staircase(m: usize) -> Self {
        let n = m - 1;
        let letters = (0..n).flat_map(|r| 1..=n - r).collect();
        ReducedWord::new(m, letters).expect("staircase word is reduced")
    }
}

/// Constant matrix `s̄_i`: identity with block `[[0, −1], [1, 0]]` at `(i, i+1)`.
pub fn weyl_rep(i: usize, m: usize, vars: &Vars) -> PolyMatrix {
    let mut g = Matrix::identity(m, &Poly::one(vars));
    g.set(i - 1, i - 1, Poly::zero(vars));
    g.set(i, i, Poly::zero(vars));
    g.set(i - 1, i, Poly::int(vars, -1));
    g.set(i, i - 1, Poly::one(vars));
    g
}

/// `e_i(z)`: identity plus `z` at `(i, i+1)`.
pub fn elementary(i: usize, m: usize, z: &Poly) -> PolyMatrix {
    let mut g = Matrix::identity(m, &z.one_like());
    g.set(i - 1, i, z.clone());
    g
}

/// Prefix products `e_{i_1}(z_1) s̄_{i_1} ⋯ e_{i_k}(z_k) s̄_{i_k}` for `k = 1..l`.
pub fn bott_samelson_prefixes(word: &ReducedWord, vars: &Vars) -> Vec<PolyMatrix> {
    let m = word.m();
    let mut g = Matrix::identity(m, &Poly::one(vars));
    let mut out = Vec::with_capacity(word.len());
    for (k, &i) in word.letters().iter().enumerate() {
        let z = Poly::var(vars, k);
        g = g.mul(&elementary(i, m, &z)).mul(&weyl_rep(i, m, vars));
        out.push(g.clone());
    }
    out
}

/// The full Bott–Samelson product over `z_1..z_l`.
pub fn bott_samelson(word: &ReducedWord, vars: &Vars) -> PolyMatrix {
    bott_samelson_prefixes(word, vars).pop().unwrap_or_else(|| Matrix::identity(word.m(), &Poly::one(vars)))
}

/// Determinant on 1-based sorted rows and columns.
pub fn minor<T: Ring>(g: &Matrix<T>, rows: &[usize], cols: &[usize]) -> T {
    assert_eq!(rows.len(), cols.len(), "minor needs equally many rows and columns");
    if rows.is_empty() {
        return g.get(0, 0).one_like();
    }
    let r: Vec<usize> = rows.iter().map(|a| a - 1).collect();
    let c: Vec<usize> = cols.iter().map(|a| a - 1).collect();
    g.submatrix(&r, &c).det_laplace()
}

/// `Δ_{uω_i, vω_i}(g)`: rows `u([1,i])`, columns `v([1,i])`, both sorted.
pub fn generalized_minor<T: Ring>(u: &WeylElt, v: &WeylElt, i: usize, g: &Matrix<T>) -> T {
    minor(g, &u.image_of_initial(i), &v.image_of_initial(i))
}

/// Predecessor and successor maps of a word; entry `k − 1` describes index `k`, both 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMaps {
    pub minus: Vec<Option<usize>>,
    pub plus: Vec<Option<usize>>,
}

pub fn kplus_kminus(letters: &[usize]) -> KMaps {
    let l = letters.len();
    let minus = (0..l).map(|k| (0..k).rev().find(|&j| letters[j] == letters[k]).map(|j| j + 1)).collect();
    let plus = (0..l).map(|k| (k + 1..l).find(|&j| letters[j] == letters[k]).map(|j| j + 1)).collect();
    KMaps { minus, plus }
}

fn sign(a: i64) -> i64 {
    a.signum()
}

/// Variables `x11, x12, ...` of an `m × m` matrix, row-major.
pub fn matrix_vars(prefix: &str, m: usize) -> Vars {
    crate::polyring::VarSet::new((1..=m).flat_map(|i| (1..=m).map(move |j| entry_name(prefix, i, j))))
}

pub fn entry_name(prefix: &str, i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{prefix}{i}{j}")
    } else {
        format!("{prefix}{i}_{j}")
    }
}

/// Coefficient `½(sign(p−i) + sign(q−j))` of the standard bracket `{x_ij, x_pq} = c · x_iq x_pj`.
pub fn standard_coefficient(i: usize, j: usize, p: usize, q: usize) -> Q {
    qf(sign(p as i64 - i as i64) + sign(q as i64 - j as i64), 2)
}

/// Standard Poisson structure on `GL(m)` in the matrix entries.
pub fn standard_gl(m: usize) -> (Vars, PoissonStructure) {
    let vars = matrix_vars("x", m);
    let x = |i: usize, j: usize| Poly::var(&vars, (i - 1) * m + (j - 1));
    let idx = |a: usize| (a / m + 1, a % m + 1);
    let pi = PoissonStructure::from_upper(&vars, |a, b| {
        let (i, j) = idx(a);
        let (p, q) = idx(b);
        let c = standard_coefficient(i, j, p, q);
        RatFun::from_poly(x(i, q).mul_poly(&x(p, j)).scale(&c))
    });
    (vars, pi)
}
