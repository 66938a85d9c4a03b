//! Schubert cells in Bott–Samelson coordinates.
//!
//! The cluster functions `φ_k` are leading principal minors of the partial
//! Bott–Samelson products. Their brackets are log-canonical with constants
//! `λ_jk` given by weight pairings, and since `φ` is a triangular change of
//! coordinates (`φ_k = z_k φ_{k⁻} + ψ_k`) the Poisson structure in the `z`
//! coordinates is recovered by pulling back through the inverse Jacobian.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::poisson::{
    certify_system, pfaffian_coefficient, property_i_with_linear, LinearPoissonStructure, LogCanonicalSystem,
    PoissonStructure, PropertyIReport,
};
use crate::polyring::{q, LowestTerm, Matrix, Poly, PolyMatrix, QMatrix, RatFun, VarSet, Vars, Q};
use crate::report::IntegrableSystemReport;
use crate::typea::{bott_samelson_prefixes, kplus_kminus, minor, pairing, KMaps, ReducedWord, Weight};

#[derive(Clone, Debug)]
pub struct SchubertCell {
    pub m: usize,
    pub word: ReducedWord,
    pub vars: Vars,
    pub phis: Vec<Poly>,
    pub lambda: QMatrix,
    pub pi_z: PoissonStructure,
    pub pi0: LinearPoissonStructure,
    pub kmaps: KMaps,
    pub lows: Vec<LowestTerm<Poly>>,
}

/// `λ_jk = ⟨ω_{i_j} − u_j ω_{i_j}, ω_{i_k} + u_k ω_{i_k}⟩` for `j < k`, with `u_k = s_{i_1} ⋯ s_{i_k}`.
pub fn lambda_matrix(word: &ReducedWord) -> QMatrix {
    let m = word.m();
    let l = word.len();
    let letters = word.letters();
    let mut lam = Matrix::from_fn(l, l, |_, _| Q::zero());
    for j in 0..l {
        let wj = Weight::omega(m, letters[j]);
        let left = wj.sub(&wj.act(&word.prefix(j + 1)));
        for k in j + 1..l {
            let wk = Weight::omega(m, letters[k]);
            let right = wk.add(&wk.act(&word.prefix(k + 1)));
            let v = pairing(&left, &right).expect("same rank");
            lam.set(j, k, q(v));
            lam.set(k, j, q(-v));
        }
    }
    lam
}

/// `φ_k` as the leading principal `i_k × i_k` minor of the `k`-th prefix product.
pub fn cluster_functions(word: &ReducedWord, vars: &Vars) -> Vec<Poly> {
    let prefixes = bott_samelson_prefixes(word, vars);
    word.letters()
        .iter()
        .zip(prefixes.iter())
        .map(|(&i, g)| {
            let idx: Vec<usize> = (1..=i).collect();
            minor(g, &idx, &idx)
        })
        .collect()
}

pub fn build_cell(m: usize, letters: &[usize]) -> Result<SchubertCell> {
    let word = ReducedWord::new(m, letters.to_vec())?;
    let l = word.len();
    let vars = VarSet::indexed("z", l);
    let phis = cluster_functions(&word, &vars);
    let lambda = lambda_matrix(&word);
    let kmaps = kplus_kminus(word.letters());
    let pi_z = pullback_structure(&vars, &phis, &kmaps, &lambda)?;
    for j in 0..l {
        for k in j + 1..l {
            let br = pi_z.bracket_poly(&phis[j], &phis[k]);
            if br != phis[j].mul_poly(&phis[k]).scale(lambda.get(j, k)) {
                return Err(Error::NotLogCanonical(j + 1, k + 1));
            }
        }
    }
    let pi0 = pi_z.linearize(&vec![Q::zero(); l])?;
    let lows = phis.iter().map(|f| f.lowest_term().expect("cluster functions are nonzero")).collect();
    Ok(SchubertCell { m, word, vars, phis, lambda, pi_z, pi0, kmaps, lows })
}

/// Brackets of the `z` coordinates determined by `{φ_j, φ_k} = λ_jk φ_j φ_k`.
fn pullback_structure(vars: &Vars, phis: &[Poly], kmaps: &KMaps, lambda: &QMatrix) -> Result<PoissonStructure> {
    let l = phis.len();
    if l == 0 {
        return Ok(PoissonStructure::zero(vars));
    }
    // K_ka = dφ_k/dz_a is lower triangular with K_kk = φ_{k⁻} (or 1)
    let k: PolyMatrix = Matrix::from_fn(l, l, |r, a| if a <= r { phis[r].derivative(a) } else { Poly::zero(vars) });
    for r in 0..l {
        let expect = match kmaps.minus[r] {
            Some(p) => phis[p - 1].clone(),
            None => Poly::one(vars),
        };
        assert_eq!(k.get(r, r), &expect, "diagonal of the Jacobian is the predecessor function");
    }
    // K⁻¹ = N_ka / D_k with D_k = K_11 ⋯ K_kk
    let mut d: Vec<Poly> = Vec::with_capacity(l + 1);
    d.push(Poly::one(vars));
    for r in 0..l {
        let next = d[r].mul_poly(k.get(r, r));
        d.push(next);
    }
    let mut n: Vec<Vec<Poly>> = vec![vec![Poly::zero(vars); l]; l];
    for r in 0..l {
        n[r][r] = d[r].clone();
        for a in 0..r {
            let mut acc = Poly::zero(vars);
            for b in a..r {
                let kb = k.get(r, b);
                if kb.is_zero() || n[b][a].is_zero() {
                    continue;
                }
                // D_{r-1} / D_b, as a product of diagonal entries
                let mut ratio = Poly::one(vars);
                for c in b + 1..r {
                    ratio = ratio.mul_poly(k.get(c, c));
                }
                acc = acc.add_poly(&kb.mul_poly(&n[b][a]).mul_poly(&ratio));
            }
            n[r][a] = acc.neg_poly();
        }
    }
    // P_ab = Σ_{j,k} λ_jk (N_aj φ_j)(N_bk φ_k) / (D_a D_b)
    let a_mat: Vec<Vec<Poly>> = (0..l).map(|a| (0..l).map(|j| n[a][j].mul_poly(&phis[j])).collect()).collect();
    let t: Vec<Vec<Poly>> = (0..l)
        .map(|b| {
            (0..l)
                .map(|j| {
                    let mut acc = Poly::zero(vars);
                    for kk in 0..l {
                        let lam = lambda.get(j, kk);
                        if lam.is_zero() || a_mat[b][kk].is_zero() {
                            continue;
                        }
                        acc = acc.add_poly(&a_mat[b][kk].scale(lam));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut entries: Vec<Vec<Poly>> = vec![vec![Poly::zero(vars); l]; l];
    for a in 0..l {
        for b in a + 1..l {
            let mut s = Poly::zero(vars);
            for j in 0..l {
                if a_mat[a][j].is_zero() || t[b][j].is_zero() {
                    continue;
                }
                s = s.add_poly(&a_mat[a][j].mul_poly(&t[b][j]));
            }
            let den = d[a + 1].mul_poly(&d[b + 1]);
            entries[a][b] = s.exact_div(&den).ok_or(Error::NonPolynomialStructure(a + 1, b + 1))?;
        }
    }
    Ok(PoissonStructure::from_upper(vars, |a, b| RatFun::from_poly(entries[a][b].clone())))
}

impl SchubertCell {
    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    pub fn construction(&self) -> String {
        let w: Vec<String> = self.word.letters().iter().map(|i| i.to_string()).collect();
        format!("schubert m={} word={}", self.m, w.join(","))
    }

    /// Degree of `φ_{k⁻}^low` for 0-based `k`, with the empty predecessor of degree 0.
    pub fn pred_low_degree(&self, k: usize) -> i64 {
        self.kmaps.minus[k].map(|p| self.lows[p - 1].degree).unwrap_or(0)
    }

    /// 0-based indices `k` with `k⁺ = +∞`.
    pub fn frozen(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.kmaps.plus[k].is_none()).collect()
    }

    /// 0-based indices where the lowest-term degree jumps over the predecessor.
    pub fn jump_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.lows[k].degree == 1 + self.pred_low_degree(k)).collect()
    }

    pub fn d_w(&self) -> i64 {
        self.frozen().iter().map(|&k| self.lows[k].degree).sum()
    }

    pub fn log_canonical_system(&self) -> LogCanonicalSystem {
        LogCanonicalSystem::with_lambda(
            self.phis.iter().map(|p| RatFun::from_poly(p.clone())).collect(),
            self.lambda.clone(),
        )
    }

    pub fn property_i(&self, settings: &Settings) -> Result<PropertyIReport> {
        property_i_with_linear(&self.log_canonical_system(), &self.pi0, settings)
    }
}

pub fn choose_integrable_system(cell: &SchubertCell, settings: &Settings) -> Result<IntegrableSystemReport> {
    let chosen: Vec<Poly> = cell.jump_indices().iter().map(|&k| cell.lows[k].term.clone()).collect();
    let magic = cell.d_w() as usize;
    let report = certify_system(&chosen, &cell.pi0, magic, settings, &cell.construction())?;
    if report.independent_count < magic {
        return Err(Error::CountShortfall { expected: magic, found: report.independent_count });
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IndexMagic {
    pub d_w: i64,
    pub ind: i64,
    pub mag: i64,
    pub rank_check: bool,
}

pub fn index_and_magic(cell: &SchubertCell, settings: &Settings) -> Result<IndexMagic> {
    let l = cell.len() as i64;
    let d_w = cell.d_w();
    let rank = cell.pi0.generic_rank(settings)? as i64;
    Ok(IndexMagic { d_w, ind: 2 * d_w - l, mag: d_w, rank_check: rank == 2 * (l - d_w) })
}

#[derive(Clone, Debug)]
pub struct PfaffianCheck {
    pub holds: bool,
    pub coefficient: RatFun,
    pub frozen_product: Poly,
    pub low_degree: i64,
}

/// Compares `∏ φ_k / det J` with the product of the frozen functions up to a constant.
pub fn pfaffian_check(cell: &SchubertCell) -> Result<PfaffianCheck> {
    let pf = pfaffian_coefficient(&cell.log_canonical_system())?;
    let frozen_product = cell.frozen().iter().fold(Poly::one(&cell.vars), |acc, &k| acc.mul_poly(&cell.phis[k]));
    let holds = pf.coefficient.scalar_ratio(&RatFun::from_poly(frozen_product.clone())).is_some_and(|c| !c.is_zero());
    Ok(PfaffianCheck { holds, coefficient: pf.coefficient, frozen_product, low_degree: pf.low_degree })
}

/// Solid minors of the generic strictly upper triangular `m × m` matrix that contain the first row.
pub fn solid_first_row_minors(m: usize, vars: &Vars) -> Vec<Poly> {
    let mut idx = 0;
    let mut u = Matrix::from_fn(m, m, |_, _| Poly::zero(vars));
    for i in 0..m {
        for j in i + 1..m {
            u.set(i, j, Poly::var(vars, idx));
            idx += 1;
        }
    }
    let mut out = Vec::new();
    for s in 1..=m / 2 {
        for c in s + 1..=m - s + 1 {
            let rows: Vec<usize> = (1..=s).collect();
            let cols: Vec<usize> = (c..c + s).collect();
            out.push(minor(&u, &rows, &cols));
        }
    }
    out
}

/// Builds the staircase cell of `SL(m)` and runs [`solid_minor_check_cell`].
pub fn solid_minor_check(m: usize) -> Result<bool> {
    let word = ReducedWord::staircase(m);
    solid_minor_check_cell(&build_cell(m, word.letters())?)
}

/// Lowest terms of the staircase cell agree, as a set up to sign, with the solid first-row minors.
pub fn solid_minor_check_cell(cell: &SchubertCell) -> Result<bool> {
    if cell.word != ReducedWord::staircase(cell.m) {
        return Err(Error::WrongWord);
    }
    let expect = solid_first_row_minors(cell.m, &cell.vars);
    let normalize = |p: &Poly| if p.leading_coeff() < Q::zero() { p.neg_poly() } else { p.clone() };
    let mut got: Vec<String> = cell.lows.iter().map(|l| normalize(&l.term).to_string()).collect();
    let mut want: Vec<String> = expect.iter().map(|p| normalize(p).to_string()).collect();
    got.sort();
    got.dedup();
    want.sort();
    want.dedup();
    Ok(got == want)
}

#[derive(Clone, Debug)]
pub struct FlowReport {
    pub j: usize,
    pub brackets: Vec<Poly>,
}

/// For `k ≤ j` the bracket `{z_k, φ_j^low}` vanishes; for `k > j` it is affine in `z_k` over `ℚ[z_1..z_{k−1}]`.
pub fn flow_structure_check(cell: &SchubertCell, j: usize) -> Result<FlowReport> {
    let l = cell.len();
    if j == 0 || j > l {
        return Err(Error::Input(format!("j = {j} outside [1, {l}]")));
    }
    let low = &cell.lows[j - 1].term;
    let mut brackets = Vec::with_capacity(l);
    for k in 1..=l {
        let b = cell.pi0.bracket(&Poly::var(&cell.vars, k - 1), low);
        let ok = if k <= j { b.is_zero() } else { b.degree_in(k - 1) <= 1 && b.used_vars().iter().all(|&v| v < k) };
        if !ok {
            return Err(Error::StructureViolated { k, bracket: b.to_string() });
        }
        brackets.push(b);
    }
    Ok(FlowReport { j, brackets })
}
