//! Seeds in a field of rational functions, ordinary mutation and log-volume forms.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::poisson::{deg_mu_low, log_volume, LogVolumeForm, PoissonStructure};
use crate::polyring::{jacobian, numeric_rank, parse_poly, RatFun, VarSet, Vars, Q};

/// Largest diagonal entry tried when symmetrizing an exchange matrix.
pub const SYMMETRIZER_BOUND: i64 = 12;

/// `(Φ, ex, M)`: `M` has a row per cluster index and a column per exchangeable index.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub vars: Vars,
    pub cluster: Vec<RatFun>,
    pub labels: Vec<String>,
    pub ex: Vec<usize>,
    pub m: Vec<Vec<i64>>,
}

impl Seed {
    /// Checks shapes and skew-symmetrizability; independence is checked by [`Seed::is_independent`].
    pub fn new(
        vars: &Vars,
        cluster: Vec<RatFun>,
        labels: Vec<String>,
        ex: Vec<usize>,
        m: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = cluster.len();
        if labels.len() != n || m.len() != n || m.iter().any(|r| r.len() != ex.len()) {
            return Err(Error::DimensionMismatch(format!(
                "seed of size {n} needs {n} labels and an {n}x{} matrix",
                ex.len()
            )));
        }
        if ex.iter().any(|&k| k >= n) {
            return Err(Error::Input("exchangeable index out of range".into()));
        }
        let s = Seed { vars: vars.clone(), cluster, labels, ex, m };
        if skew_symmetrizer(&s.principal_part()).is_none() {
            return Err(Error::NotSkewSymmetrizable);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster.is_empty()
    }

    /// `M` restricted to exchangeable rows.
    pub fn principal_part(&self) -> Vec<Vec<i64>> {
        self.ex.iter().map(|&k| self.m[k].clone()).collect()
    }

    pub fn is_independent(&self, settings: &Settings) -> Result<bool> {
        let j = jacobian(&self.cluster, &self.vars);
        Ok(numeric_rank(&j, self.vars.len(), settings)? == self.len())
    }

    /// Mutation in direction `k` (a cluster index in `ex`).
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        let col = self.ex.iter().position(|&e| e == k).ok_or(Error::NotMutable(k))?;
        let one = RatFun::one(&self.vars);
        let (mut pos, mut neg) = (one.clone(), one);
        for (j, row) in self.m.iter().enumerate() {
            let e = row[col];
            if e > 0 {
                pos = pos.mul_rf(&self.cluster[j].pow(e as u32));
            } else if e < 0 {
                neg = neg.mul_rf(&self.cluster[j].pow((-e) as u32));
            }
        }
        let mut cluster = self.cluster.clone();
        cluster[k] = pos.add_rf(&neg).div_rf(&self.cluster[k]);
        let m = (0..self.len())
            .map(|i| {
                (0..self.ex.len())
                    .map(|c| {
                        let j = self.ex[c];
                        if i == k || j == k {
                            -self.m[i][c]
                        } else {
                            let mik = self.m[i][col];
                            let mkj = self.m[k][c];
                            self.m[i][c] + (mik.abs() * mkj + mik * mkj.abs()) / 2
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Seed { vars: self.vars.clone(), cluster, labels: self.labels.clone(), ex: self.ex.clone(), m })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Seed> {
        path.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    pub fn log_volume(&self) -> Result<LogVolumeForm> {
        check_square(self)?;
        log_volume(&self.cluster)
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            vars: self.vars.names().to_vec(),
            labels: self.labels.clone(),
            cluster: self.cluster.iter().map(canonical).collect(),
            ex: self.ex.clone(),
            m: self.m.clone(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Seed> {
        let vars = VarSet::new(j.vars.clone());
        let cluster = j.cluster.iter().map(|s| parse_ratfun(s, &vars)).collect::<Result<Vec<_>>>()?;
        Seed::new(&vars, cluster, j.labels.clone(), j.ex.clone(), j.m.clone())
    }
}

fn check_square(s: &Seed) -> Result<()> {
    if s.len() != s.vars.len() {
        return Err(Error::DimensionMismatch(format!("{} functions on {} coordinates", s.len(), s.vars.len())));
    }
    Ok(())
}

/// Text form read back by [`parse_ratfun`]: `num` or `(num)/(den)`.
pub fn canonical(f: &RatFun) -> String {
    if f.den().is_constant() {
        f.num().to_string()
    } else {
        format!("({})/({})", f.num(), f.den())
    }
}

pub fn parse_ratfun(s: &str, vars: &Vars) -> Result<RatFun> {
    let t = s.trim();
    if t.starts_with('(') {
        let mut depth = 0i32;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        let rest = t[i + 1..].trim_start();
                        if let Some(den) = rest.strip_prefix('/') {
                            let num = parse_poly(&t[1..i], vars)?;
                            let den = parse_poly(den, vars)?;
                            if den.is_zero() {
                                return Err(Error::Parse("zero denominator".into()));
                            }
                            return Ok(RatFun::new(num, den));
                        }
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    Ok(RatFun::from_poly(parse_poly(t, vars)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub vars: Vec<String>,
    pub labels: Vec<String>,
    pub cluster: Vec<String>,
    pub ex: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<i64>>,
}

/// Positive integers `d` with `d_i b_ij = −d_j b_ji`, smallest per connected component, all at most [`SYMMETRIZER_BOUND`].
/// `b` is the square exchangeable block, indexed by positions in `ex`.
pub fn skew_symmetrizer(rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() < n) {
        return None;
    }
    let b = |i: usize, j: usize| rows[i][j];
    for i in 0..n {
        if b(i, i) != 0 {
            return None;
        }
        for j in 0..n {
            if (b(i, j) == 0) != (b(j, i) == 0) || b(i, j) * b(j, i) > 0 {
                return None;
            }
        }
    }
    let mut d: Vec<Option<Q>> = vec![None; n];
    let mut out = vec![0i64; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Q::one());
        let mut comp = vec![root];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if b(i, j) == 0 {
                    continue;
                }
                // d_j = −d_i b_ij / b_ji
                let want = d[i].clone().unwrap() * Q::from_integer(b(i, j).into()) / Q::from_integer((-b(j, i)).into());
                match &d[j] {
                    Some(v) if *v != want => return None,
                    Some(_) => {}
                    None => {
                        d[j] = Some(want);
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
        }
        let lcm = comp
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &i| num_integer::Integer::lcm(&acc, d[i].as_ref().unwrap().denom()));
        let scaled: Vec<num_bigint::BigInt> =
            comp.iter().map(|&i| (d[i].clone().unwrap() * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = scaled.iter().fold(num_bigint::BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
        for (&i, v) in comp.iter().zip(&scaled) {
            let v = v / &g;
            if !v.is_positive() || v > SYMMETRIZER_BOUND.into() {
                return None;
            }
            out[i] = i64::try_from(v).ok()?;
        }
    }
    Some(out)
}

/// Whether the log-volume form after `path` equals `±` the initial one.
pub fn log_volume_invariance(s: &Seed, path: &[usize]) -> Result<bool> {
    let before = s.log_volume()?;
    let after = s.mutate_path(path)?.log_volume()?;
    Ok(before.coefficient.eq_up_to_sign(&after.coefficient))
}

/// `φ̄_j = c_j M_j` for frozen `j`: a Casimir `c_j` and a monomial `M_j` in the frozen variables.
#[derive(Clone, Debug)]
pub struct FrozenModification {
    pub replacements: Vec<Replacement>,
}

#[derive(Clone, Debug)]
pub struct Replacement {
    pub target: usize,
    pub casimir: RatFun,
    /// `(cluster index, exponent)` pairs, every index frozen.
    pub monomial: Vec<(usize, u32)>,
}

impl FrozenModification {
    pub fn identity() -> Self {
        FrozenModification { replacements: Vec::new() }
    }

    /// The modified extended cluster.
    pub fn apply(&self, s: &Seed) -> Result<Vec<RatFun>> {
        let mut out = s.cluster.clone();
        for r in &self.replacements {
            if s.ex.contains(&r.target) || r.monomial.iter().any(|(i, _)| s.ex.contains(i) || *i >= s.len()) {
                return Err(Error::Input("modifications act on frozen variables only".into()));
            }
            out[r.target] = r.casimir.mul_rf(&cluster_monomial(s, &r.monomial));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ModifiedVolume {
    pub form: LogVolumeForm,
    /// `Some(true)` when one mutation leaves the modified form unchanged up to sign; `None` if `ex` is empty.
    pub path_independent: Option<bool>,
}

/// Log-volume form of the modified extended cluster, after certifying every `c_j` as a Casimir of `pi`.
pub fn modified_log_volume(
    s: &Seed,
    modification: &FrozenModification,
    pi: &PoissonStructure,
) -> Result<ModifiedVolume> {
    check_square(s)?;
    for r in &modification.replacements {
        let casimir = (0..s.vars.len()).all(|a| pi.bracket(&r.casimir, &RatFun::var(&s.vars, a)).is_zero());
        if !casimir {
            return Err(Error::NotCasimir(r.casimir.to_string()));
        }
    }
    let form = log_volume(&modification.apply(s)?)?;
    let path_independent = match s.ex.first() {
        Some(&k) => {
            let other = log_volume(&modification.apply(&s.mutate(k)?)?)?;
            Some(other.coefficient.eq_up_to_sign(&form.coefficient))
        }
        None => None,
    };
    Ok(ModifiedVolume { form, path_independent })
}

/// `deg μ^low` of a system at `point`, after moving the point to the origin.
pub fn deg_mu_low_at(functions: &[RatFun], point: &[Q]) -> Result<i64> {
    let moved: Vec<RatFun> =
        functions.iter().map(|f| RatFun::new(f.num().translate(point), f.den().translate(point))).collect();
    deg_mu_low(&moved)
}

/// `∏ φ_i^{e_i}` over the given cluster indices.
pub fn cluster_monomial(s: &Seed, monomial: &[(usize, u32)]) -> RatFun {
    monomial.iter().fold(RatFun::one(&s.vars), |acc, &(i, e)| acc.mul_rf(&s.cluster[i].pow(e)))
}
