use std::sync::OnceLock;

use proptest::prelude::*;

use clusterint::bfz::{build_bfz, pi0_sl, DoubleWord};
use clusterint::cluster::{log_volume_invariance, skew_symmetrizer, Seed};
use clusterint::dualgl::{build_dual_chart, build_staircase, kks_gl, lows_via_jets};
use clusterint::exec::Settings;
use clusterint::poisson::{deg_mu_low, LinearPoissonStructure};
use clusterint::polyring::{Poly, RatFun, VarSet};
use clusterint::schubert::{build_cell, pfaffian_check, SchubertCell};
use clusterint::typea::WeylElt;

/// A family of pairwise log-canonical functions together with their lowest terms and `π₀`.
struct Pool {
    lows: Vec<Poly>,
    pi0: LinearPoissonStructure,
}

fn s4_cells() -> &'static Vec<SchubertCell> {
    static CELLS: OnceLock<Vec<SchubertCell>> = OnceLock::new();
    CELLS.get_or_init(|| {
        WeylElt::all(4).iter().filter(|w| w.length() > 0).map(|w| build_cell(4, &w.reduced_word()).unwrap()).collect()
    })
}

fn s5_cells() -> &'static Vec<SchubertCell> {
    static CELLS: OnceLock<Vec<SchubertCell>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let all = WeylElt::all(5);
        // every 12th element, longest included
        let mut picks: Vec<&WeylElt> = all.iter().step_by(12).filter(|w| w.length() > 0).collect();
        let longest = WeylElt::longest(5);
        let last = all.iter().find(|w| **w == longest).unwrap();
        picks.push(last);
        picks.iter().map(|w| build_cell(5, &w.reduced_word()).unwrap()).collect()
    })
}

fn pools() -> &'static Vec<Pool> {
    static POOLS: OnceLock<Vec<Pool>> = OnceLock::new();
    POOLS.get_or_init(|| {
        let mut out: Vec<Pool> = s4_cells()
            .iter()
            .chain(s5_cells())
            .map(|c| Pool { lows: c.lows.iter().map(|l| l.term.clone()).collect(), pi0: c.pi0.clone() })
            .collect();
        let c = build_bfz(2, &DoubleWord::staircase(2), 2, &Settings::default()).unwrap();
        out.push(Pool { lows: c.initial_cluster().iter().map(|e| e.low.term.clone()).collect(), pi0: pi0_sl(2) });
        let chart = build_dual_chart(3).unwrap();
        let lows = lows_via_jets(&chart, &build_staircase(&chart), 8).unwrap();
        out.push(Pool { lows: lows.into_iter().map(|l| l.term).collect(), pi0: kks_gl(3).pi });
        out
    })
}

fn monomial(lows: &[Poly], exps: &[u32]) -> Poly {
    lows.iter().zip(exps).fold(Poly::one(lows[0].vars()), |acc, (f, &e)| acc.mul_poly(&f.pow(e)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    /// Monomials in a log-canonical family are again log-canonical, so their lowest terms commute under `π₀`.
    #[test]
    fn lows_of_log_canonical_pairs_commute(pick in any::<prop::sample::Index>(), a in prop::collection::vec(0u32..2, 10), b in prop::collection::vec(0u32..2, 10)) {
        let pools = pools();
        let pool = &pools[pick.index(pools.len())];
        let l = pool.lows.len().min(10);
        let f = monomial(&pool.lows[..l], &a[..l]);
        let g = monomial(&pool.lows[..l], &b[..l]);
        prop_assert!(pool.pi0.bracket(&f, &g).is_zero());
    }
}

fn skew_seed(n: usize, ex_len: usize, upper: &[i64], d: &[i64], frozen: &[i64]) -> Seed {
    let v = VarSet::new((1..=n).map(|i| format!("a{i}")));
    let cluster: Vec<RatFun> = (0..n).map(|i| RatFun::var(&v, i)).collect();
    let ex: Vec<usize> = (0..ex_len).collect();
    // b_ij = s_ij d_j makes d a symmetrizer
    let mut m: Vec<Vec<i64>> = vec![vec![0; ex_len]; n];
    let mut t = 0;
    for i in 0..ex_len {
        for j in i + 1..ex_len {
            m[i][j] = upper[t] * d[j];
            m[j][i] = -upper[t] * d[i];
            t += 1;
        }
    }
    for i in ex_len..n {
        for j in 0..ex_len {
            m[i][j] = frozen[(i - ex_len) * ex_len + j];
        }
    }
    Seed::new(&v, cluster, (1..=n).map(|i| format!("p{i}")).collect(), ex, m).unwrap()
}

fn seed_strategy() -> impl Strategy<Value = (Seed, Vec<usize>)> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), 1usize..=n.min(4)))
        .prop_flat_map(|(n, e)| {
            let pairs = e * (e - 1) / 2;
            (
                Just(n),
                Just(e),
                prop::collection::vec(-2i64..=2, pairs),
                prop::collection::vec(1i64..=2, e),
                prop::collection::vec(-1i64..=1, (n - e) * e),
                prop::collection::vec(0usize..e, 0..=3),
            )
        })
        .prop_map(|(n, e, upper, d, frozen, path)| (skew_seed(n, e, &upper, &d, &frozen), path))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn log_volume_is_mutation_invariant((seed, path) in seed_strategy()) {
        prop_assert!(log_volume_invariance(&seed, &path).unwrap());
    }

    #[test]
    fn mutation_is_an_involution((seed, path) in seed_strategy()) {
        let t = seed.mutate_path(&path).unwrap();
        let mut back = path.clone();
        back.reverse();
        prop_assert_eq!(t.mutate_path(&back).unwrap(), seed);
    }

    #[test]
    fn mutation_keeps_the_symmetrizer((seed, path) in seed_strategy()) {
        let d = skew_symmetrizer(&seed.principal_part());
        prop_assert!(d.is_some());
        let t = seed.mutate_path(&path).unwrap();
        prop_assert_eq!(skew_symmetrizer(&t.principal_part()), d);
    }
}

/// `deg Pf^low = −deg μ^low`, with the Pfaffian read off as a constant times the frozen product.
#[test]
fn pfaffian_degree_duality_on_schubert_systems() {
    for cell in s4_cells().iter().chain(s5_cells()) {
        let pf = pfaffian_check(cell).unwrap();
        assert!(pf.holds, "{}", cell.construction());
        let l = cell.len() as i64;
        let frozen_low = pf.frozen_product.lowest_term().unwrap().degree;
        let mu = deg_mu_low(&cell.log_canonical_system().functions).unwrap();
        assert_eq!(frozen_low - l, pf.low_degree, "{}", cell.construction());
        assert_eq!(pf.low_degree, -mu, "{}", cell.construction());
    }
}

#[test]
fn low_degree_bound_on_schubert_systems() {
    let settings = Settings::default();
    for cell in s4_cells().iter().chain(s5_cells()) {
        let r = cell.property_i(&settings).unwrap();
        assert!(r.deg_mu_low >= r.half_rank && r.holds, "{}", cell.construction());
    }
}

#[test]
fn pools_cover_the_shipped_families() {
    assert_eq!(s4_cells().len(), 23);
    assert!(s5_cells().iter().any(|c| c.len() == 10));
    assert_eq!(pools().len(), 23 + s5_cells().len() + 2);
}
