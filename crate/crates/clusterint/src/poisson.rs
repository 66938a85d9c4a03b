//! Poisson structures in coordinates: brackets, linearization at a zero,
//! log-canonicity, log-volume forms, Property I and Pfaffian coefficients.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::polyring::{
    jacobian_poly, numeric_rank, random_point, rng_for, LowestTerm, Matrix, Poly, PolyMatrix, QMatrix, RatFun,
    RatMatrix, Vars, Q,
};
use crate::report::IntegrableSystemReport;

/// Bivector with rational-function coefficients `P_ab = {v_a, v_b}`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    vars: Vars,
    p: RatMatrix,
    poly: Option<PolyMatrix>,
}

impl PoissonStructure {
    pub fn new(vars: &Vars, p: RatMatrix) -> Result<Self> {
        let n = vars.len();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch(format!("bracket matrix must be {n}x{n}")));
        }
        if !p.is_antisymmetric() {
            return Err(Error::Input("bracket matrix is not skew-symmetric".into()));
        }
        let poly =
            if p.entries().iter().all(|e| e.is_polynomial()) { Some(p.map(|e| e.as_poly().unwrap())) } else { None };
        Ok(PoissonStructure { vars: vars.clone(), p, poly })
    }

    /// Builds the structure from its upper-triangular entries.
    pub fn from_upper(vars: &Vars, mut f: impl FnMut(usize, usize) -> RatFun) -> Self {
        let n = vars.len();
        let mut p = Matrix::from_fn(n, n, |_, _| RatFun::zero(vars));
        for a in 0..n {
            for b in a + 1..n {
                let v = f(a, b);
                p.set(b, a, v.neg_rf());
                p.set(a, b, v);
            }
        }
        Self::new(vars, p).expect("skew by construction")
    }

    pub fn from_poly(vars: &Vars, p: PolyMatrix) -> Result<Self> {
        Self::new(vars, p.map(|e| RatFun::from_poly(e.clone())))
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_upper(vars, |_, _| RatFun::zero(vars))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.p
    }

    pub fn poly_matrix(&self) -> Option<&PolyMatrix> {
        self.poly.as_ref()
    }

    pub fn entry(&self, a: usize, b: usize) -> &RatFun {
        self.p.get(a, b)
    }

    pub fn bracket(&self, f: &RatFun, g: &RatFun) -> RatFun {
        if let (Some(fp), Some(gp)) = (f.as_poly(), g.as_poly()) {
            if self.poly.is_some() {
                return RatFun::from_poly(self.bracket_poly(&fp, &gp));
            }
        }
        let n = self.vars.len();
        let df: Vec<RatFun> = (0..n).map(|a| f.derivative(a)).collect();
        let dg: Vec<RatFun> = (0..n).map(|a| g.derivative(a)).collect();
        let mut acc = RatFun::zero(&self.vars);
        for a in 0..n {
            for b in a + 1..n {
                let pab = self.p.get(a, b);
                if pab.is_zero() {
                    continue;
                }
                let w = df[a].mul_rf(&dg[b]).sub_rf(&df[b].mul_rf(&dg[a]));
                if !w.is_zero() {
                    acc = acc.add_rf(&pab.mul_rf(&w));
                }
            }
        }
        acc
    }

    /// Bracket of polynomials for a structure with polynomial coefficients.
    pub fn bracket_poly(&self, f: &Poly, g: &Poly) -> Poly {
        let p = self.poly.as_ref().expect("structure has non-polynomial coefficients");
        poly_bracket(p, f, g)
    }

    /// `Some(λ)` when `{f, g} = λ f g` exactly.
    pub fn is_log_canonical(&self, f: &RatFun, g: &RatFun) -> Option<Q> {
        log_canonical_ratio(&self.bracket(f, g), f, g)
    }

    /// Degree-one part at `at`; every coefficient must vanish and be regular there.
    pub fn linearize(&self, at: &[Q]) -> Result<LinearPoissonStructure> {
        let n = self.vars.len();
        let mut lin = Matrix::from_fn(n, n, |_, _| Poly::zero(&self.vars));
        let translate = at.iter().any(|c| !c.is_zero());
        for a in 0..n {
            for b in a + 1..n {
                let e = self.p.get(a, b);
                if e.is_zero() {
                    continue;
                }
                let (num, den) = if translate {
                    (e.num().translate(at), e.den().translate(at))
                } else {
                    (e.num().clone(), e.den().clone())
                };
                let d0 = den.constant_term();
                if d0.is_zero() {
                    return Err(Error::NotRegular(format!("{{{}, {}}}", self.vars.name(a), self.vars.name(b))));
                }
                if !num.constant_term().is_zero() {
                    return Err(Error::NotVanishing(format!("{{{}, {}}}", self.vars.name(a), self.vars.name(b))));
                }
                let l = num.homogeneous_part(1).scale(&d0.recip());
                lin.set(b, a, l.neg_poly());
                lin.set(a, b, l);
            }
        }
        LinearPoissonStructure::new(&self.vars, lin)
    }

    pub fn generic_rank(&self, settings: &Settings) -> Result<usize> {
        match &self.poly {
            Some(p) => numeric_rank(p, self.vars.len(), settings),
            None => numeric_rank(&self.p, self.vars.len(), settings),
        }
    }

    /// Cyclic sums `{v_a,{v_b,v_c}} + {v_b,{v_c,v_a}} + {v_c,{v_a,v_b}}` all vanish.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.vars.len();
        let d: Vec<Vec<RatFun>> = (0..n).map(|a| (0..n).map(|b| self.p.get(a, b).clone()).collect()).collect();
        let inner = |a: usize, b: usize, c: usize| -> RatFun {
            // {v_a, P_bc}
            let mut acc = RatFun::zero(&self.vars);
            for (e, pae) in d[a].iter().enumerate() {
                if pae.is_zero() {
                    continue;
                }
                let der = d[b][c].derivative(e);
                if !der.is_zero() {
                    acc = acc.add_rf(&pae.mul_rf(&der));
                }
            }
            acc
        };
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = inner(a, b, c).add_rf(&inner(b, c, a)).add_rf(&inner(c, a, b));
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub(crate) fn poly_bracket(p: &PolyMatrix, f: &Poly, g: &Poly) -> Poly {
    let n = p.rows();
    let fv = f.used_vars();
    let gv = g.used_vars();
    if fv.is_empty() || gv.is_empty() {
        return Poly::zero(f.vars());
    }
    let mut df: Vec<Option<Poly>> = vec![None; n];
    let mut dg: Vec<Option<Poly>> = vec![None; n];
    for &a in &fv {
        df[a] = Some(f.derivative(a));
    }
    for &b in &gv {
        dg[b] = Some(g.derivative(b));
    }
    let mut acc = Poly::zero(f.vars());
    for &a in &fv {
        for &b in &gv {
            if a == b {
                continue;
            }
            let pab = p.get(a, b);
            if pab.is_zero() {
                continue;
            }
            let t = df[a].as_ref().unwrap().mul_poly(dg[b].as_ref().unwrap());
            acc = acc.add_poly(&pab.mul_poly(&t));
        }
    }
    acc
}

fn log_canonical_ratio(br: &RatFun, f: &RatFun, g: &RatFun) -> Option<Q> {
    if br.is_zero() {
        return Some(Q::zero());
    }
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let r = br.div_rf(&f.mul_rf(g));
    r.as_poly().filter(|p| p.is_constant()).map(|p| p.constant_term())
}

/// Linear Poisson structure: every coefficient is homogeneous of degree one.
#[derive(Clone, Debug)]
pub struct LinearPoissonStructure {
    vars: Vars,
    p: PolyMatrix,
}

impl LinearPoissonStructure {
    pub fn new(vars: &Vars, p: PolyMatrix) -> Result<Self> {
        let n = vars.len();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch(format!("bracket matrix must be {n}x{n}")));
        }
        if !p.is_antisymmetric() {
            return Err(Error::Input("bracket matrix is not skew-symmetric".into()));
        }
        if p.entries().iter().any(|e| !e.is_zero() && (!e.is_homogeneous() || e.total_degree() != Some(1))) {
            return Err(Error::Input("linear structure has a non-linear coefficient".into()));
        }
        Ok(LinearPoissonStructure { vars: vars.clone(), p })
    }

    pub fn from_upper(vars: &Vars, mut f: impl FnMut(usize, usize) -> Poly) -> Result<Self> {
        let n = vars.len();
        let mut p = Matrix::from_fn(n, n, |_, _| Poly::zero(vars));
        for a in 0..n {
            for b in a + 1..n {
                let v = f(a, b);
                p.set(b, a, v.neg_poly());
                p.set(a, b, v);
            }
        }
        Self::new(vars, p)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.p
    }

    pub fn entry(&self, a: usize, b: usize) -> &Poly {
        self.p.get(a, b)
    }

    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        poly_bracket(&self.p, f, g)
    }

    pub fn bracket_rf(&self, f: &RatFun, g: &RatFun) -> RatFun {
        match (f.as_poly(), g.as_poly()) {
            (Some(a), Some(b)) => RatFun::from_poly(self.bracket(&a, &b)),
            _ => self.as_poisson().bracket(f, g),
        }
    }

    pub fn as_poisson(&self) -> PoissonStructure {
        PoissonStructure::from_poly(&self.vars, self.p.clone()).expect("linear structure is skew")
    }

    pub fn generic_rank(&self, settings: &Settings) -> Result<usize> {
        numeric_rank(&self.p, self.vars.len(), settings)
    }

    pub fn jacobi_holds(&self) -> bool {
        let n = self.vars.len();
        let xs: Vec<Poly> = (0..n).map(|i| Poly::var(&self.vars, i)).collect();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = self
                        .bracket(&xs[a], self.p.get(b, c))
                        .add_poly(&self.bracket(&xs[b], self.p.get(c, a)))
                        .add_poly(&self.bracket(&xs[c], self.p.get(a, b)));
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True when `f` Poisson-commutes with every coordinate.
    pub fn is_casimir(&self, f: &Poly) -> bool {
        (0..self.vars.len()).all(|a| self.bracket(&Poly::var(&self.vars, a), f).is_zero())
    }
}

/// `n` independent pairwise log-canonical functions with their constants `λ`.
#[derive(Clone, Debug)]
pub struct LogCanonicalSystem {
    pub functions: Vec<RatFun>,
    pub lambda: QMatrix,
}

impl LogCanonicalSystem {
    /// Computes `λ` for every pair and fails on the first non-log-canonical pair.
    pub fn certify(pi: &PoissonStructure, functions: Vec<RatFun>, settings: &Settings) -> Result<Self> {
        let n = functions.len();
        if n != pi.vars().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} functions on a {}-dimensional chart",
                n,
                pi.vars().len()
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let lams = settings.exec.map(&pairs, |&(i, j)| pi.is_log_canonical(&functions[i], &functions[j]));
        let mut lambda = Matrix::from_fn(n, n, |_, _| Q::zero());
        for (&(i, j), l) in pairs.iter().zip(lams) {
            let l = l.ok_or(Error::NotLogCanonical(i, j))?;
            lambda.set(j, i, -l.clone());
            lambda.set(i, j, l);
        }
        Ok(LogCanonicalSystem { functions, lambda })
    }

    /// Trusts the caller-supplied constants.
    pub fn with_lambda(functions: Vec<RatFun>, lambda: QMatrix) -> Self {
        LogCanonicalSystem { functions, lambda }
    }

    pub fn vars(&self) -> &Vars {
        self.functions[0].vars()
    }
}

/// Coefficient of the log-volume form with respect to `dz_1 ∧ ... ∧ dz_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogVolumeForm {
    pub coefficient: RatFun,
}

impl LogVolumeForm {
    /// Degree of the lowest term of the form (coefficient degree plus `n`).
    pub fn low_degree(&self) -> i64 {
        let n = self.coefficient.vars().len() as i64;
        self.coefficient.lowest_term().expect("nonzero form").degree + n
    }
}

/// Jacobian determinant of rational functions as `num / den` with the column denominators kept apart.
pub(crate) struct JacobianDet {
    pub det_num: Poly,
    pub den_squares: Poly,
}

pub(crate) fn jacobian_det(fs: &[RatFun]) -> JacobianDet {
    let vars = fs[0].vars().clone();
    let n = vars.len();
    // column i of d(n_i/d_i) scaled by d_i^2 is polynomial
    let mut m = Matrix::from_fn(n, fs.len(), |_, _| Poly::zero(&vars));
    let mut den_sq = Poly::one(&vars);
    for (i, f) in fs.iter().enumerate() {
        let (num, den) = (f.num(), f.den());
        let plain = den.is_constant();
        for a in 0..n {
            let e = if plain {
                num.derivative(a).scale(&den.constant_term().recip())
            } else {
                num.derivative(a).mul_poly(den).sub_poly(&num.mul_poly(&den.derivative(a)))
            };
            m.set(a, i, e);
        }
        if !plain {
            den_sq = den_sq.mul_poly(&den.mul_poly(den));
        }
    }
    JacobianDet { det_num: m.det(), den_squares: den_sq }
}

pub fn log_volume(functions: &[RatFun]) -> Result<LogVolumeForm> {
    if functions.is_empty() {
        return Err(Error::Input("empty system".into()));
    }
    let jd = jacobian_det(functions);
    if jd.det_num.is_zero() {
        return Err(Error::DependentSystem);
    }
    // det J / prod f = det_num / (prod d^2 * prod(n/d)) = det_num / (prod n * prod d)
    let mut num_prod = Poly::one(functions[0].vars());
    let mut den_prod = Poly::one(functions[0].vars());
    for f in functions {
        num_prod = num_prod.mul_poly(f.num());
        if !f.den().is_constant() {
            den_prod = den_prod.mul_poly(f.den());
        }
    }
    Ok(LogVolumeForm { coefficient: RatFun::new(jd.det_num, num_prod.mul_poly(&den_prod)) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PropertyIReport {
    pub deg_mu_low: i64,
    pub half_rank: i64,
    pub holds: bool,
}

/// Lowest-term degree of the log-volume form, computed from the Jacobian determinant and the factors separately.
pub fn deg_mu_low(functions: &[RatFun]) -> Result<i64> {
    let n = functions[0].vars().len() as i64;
    let jd = jacobian_det(functions);
    let dj = jd.det_num.lowest_term().ok_or(Error::DependentSystem)?.degree
        - jd.den_squares.lowest_term().expect("nonzero").degree;
    let mut sum = 0;
    for f in functions {
        sum += f.lowest_term().ok_or(Error::ZeroInput)?.degree;
    }
    Ok(dj + n - sum)
}

pub fn property_i_check(
    sys: &LogCanonicalSystem,
    pi: &PoissonStructure,
    settings: &Settings,
) -> Result<PropertyIReport> {
    let zero = vec![Q::zero(); pi.vars().len()];
    let pi0 = pi.linearize(&zero)?;
    property_i_with_linear(sys, &pi0, settings)
}

pub fn property_i_with_linear(
    sys: &LogCanonicalSystem,
    pi0: &LinearPoissonStructure,
    settings: &Settings,
) -> Result<PropertyIReport> {
    let d = deg_mu_low(&sys.functions)?;
    let half = (pi0.generic_rank(settings)? / 2) as i64;
    if d < half {
        return Err(Error::InequalityViolated { deg_mu_low: d, half_rank: half });
    }
    Ok(PropertyIReport { deg_mu_low: d, half_rank: half, holds: d == half })
}

/// `∏ f_i / det J` together with its lowest-term degree as a multivector.
#[derive(Clone, Debug)]
pub struct PfaffianCoefficient {
    pub coefficient: RatFun,
    pub low_degree: i64,
}

pub fn pfaffian_coefficient(sys: &LogCanonicalSystem) -> Result<PfaffianCoefficient> {
    let mu = log_volume(&sys.functions)?;
    let coefficient = mu.coefficient.inv_rf();
    let n = coefficient.vars().len() as i64;
    let low_degree = coefficient.lowest_term().expect("nonzero").degree - n;
    let dmu = deg_mu_low(&sys.functions)?;
    debug_assert_eq!(low_degree, -dmu);
    Ok(PfaffianCoefficient { coefficient, low_degree })
}

/// Indices kept by scanning in order and keeping each function that raises the Jacobian rank.
pub fn greedy_independent(functions: &[Poly], vars: &Vars, settings: &Settings) -> Vec<usize> {
    let mut rng = rng_for(settings.seed, 1);
    let points: Vec<Vec<Q>> = (0..settings.samples.max(1)).map(|_| random_point(&mut rng, vars.len())).collect();
    let grads: Vec<Vec<Poly>> = functions.iter().map(|f| (0..vars.len()).map(|a| f.derivative(a)).collect()).collect();
    // gradients evaluated once per sample point
    let values: Vec<Vec<Vec<Q>>> =
        settings.exec.map(&points, |pt| grads.iter().map(|g| g.iter().map(|d| d.eval(pt)).collect()).collect());
    let mut chosen: Vec<usize> = Vec::new();
    let mut rank = 0;
    for i in 0..functions.len() {
        let mut trial = chosen.clone();
        trial.push(i);
        let r = values
            .iter()
            .map(|vals| {
                let m = Matrix::from_fn(trial.len(), vars.len(), |r, c| vals[trial[r]][c].clone());
                m.rank()
            })
            .max()
            .unwrap_or(0);
        if r > rank {
            rank = r;
            chosen = trial;
        }
    }
    chosen
}

/// Number of independent functions among `functions` (numeric Jacobian rank).
pub fn independent_count(functions: &[Poly], vars: &Vars, settings: &Settings) -> Result<usize> {
    if functions.is_empty() {
        return Ok(0);
    }
    let j = jacobian_poly(functions, vars);
    numeric_rank(&j, vars.len(), settings)
}

/// All pairwise brackets vanish symbolically.
pub fn pairwise_involutive(functions: &[Poly], pi0: &LinearPoissonStructure, settings: &Settings) -> bool {
    let n = functions.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    settings.exec.all(&pairs, |&(i, j)| pi0.bracket(&functions[i], &functions[j]).is_zero())
}

/// Certifies involutivity and independence of a chosen family and packages the report.
pub fn certify_system(
    functions: &[Poly],
    pi0: &LinearPoissonStructure,
    magic_number: usize,
    settings: &Settings,
    construction: &str,
) -> Result<IntegrableSystemReport> {
    let involutive = pairwise_involutive(functions, pi0, settings);
    let independent = independent_count(functions, pi0.vars(), settings)?;
    Ok(IntegrableSystemReport {
        variables: pi0.vars().names().to_vec(),
        functions: functions.iter().map(|f| f.to_string()).collect(),
        involutive,
        independent_count: independent,
        magic_number,
        seed: settings.seed,
        construction: construction.to_string(),
    })
}

/// Lowest terms of a log-canonical system, certified involutive, reduced greedily to an independent family.
pub fn extract_integrable_system(
    sys: &LogCanonicalSystem,
    pi0: &LinearPoissonStructure,
    settings: &Settings,
    construction: &str,
) -> Result<IntegrableSystemReport> {
    let vars = pi0.vars();
    let lows: Vec<LowestTerm<RatFun>> =
        sys.functions.iter().map(|f| f.lowest_term().ok_or(Error::ZeroInput)).collect::<Result<_>>()?;
    let polys: Vec<Poly> = lows
        .iter()
        .map(|l| l.term.as_poly().ok_or_else(|| Error::Input("lowest term is not polynomial".into())))
        .collect::<Result<_>>()?;
    let half = pi0.generic_rank(settings)? / 2;
    let magic = vars.len() - half;
    let keep = greedy_independent(&polys, vars, settings);
    let chosen: Vec<Poly> = keep.iter().map(|&i| polys[i].clone()).collect();
    let mut report = certify_system(&chosen, pi0, magic, settings, construction)?;
    // involutivity is certified on the full set of lows
    report.involutive = pairwise_involutive(&polys, pi0, settings);
    if report.independent_count < magic {
        return Err(Error::CountShortfall { expected: magic, found: report.independent_count });
    }
    Ok(report)
}
