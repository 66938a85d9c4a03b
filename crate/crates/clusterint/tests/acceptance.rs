//! One PASS/FAIL line per acceptance criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use clusterint::bfz::{
    build_bfz, choose_integrable_system_bfz, degcas_check, gexp_check, mu_low_probe, stabilizer_dimension, BFZCluster,
    DoubleWord,
};
use clusterint::cluster::{log_volume_invariance, Seed};
use clusterint::dualgl::*;
use clusterint::exec::Settings;
use clusterint::poisson::deg_mu_low;
use clusterint::polyring::{parse_poly, random_point, rng_for, Matrix, Poly, RatFun, VarSet, Vars};
use clusterint::schubert::*;
use clusterint::typea::WeylElt;

/// Every `(deg μ^low, ½ rk π₀)` pair seen during the run.
static DEGREE_BOUNDS: Mutex<Vec<(String, i64, i64)>> = Mutex::new(Vec::new());

fn record(what: impl Into<String>, deg: i64, half: i64) {
    DEGREE_BOUNDS.lock().unwrap().push((what.into(), deg, half));
}

fn p(vars: &Vars, s: &str) -> Poly {
    parse_poly(s, vars).unwrap()
}

fn check_cell(cell: &SchubertCell, s: &Settings) {
    let r = cell.property_i(s).unwrap();
    record(cell.construction(), r.deg_mu_low, r.half_rank);
}

fn criterion_1() {
    let s = Settings::default();
    let cell = build_cell(4, &[1, 2, 3, 1, 2, 1]).unwrap();
    let v = &cell.vars;
    let want = ["z1", "z2", "z3", "z1*z4 - z2", "z2*z5 - z3*z4", "z1*z4*z6 - z1*z5 - z2*z6 + z3"];
    for (f, w) in cell.phis.iter().zip(want) {
        assert_eq!(f, &p(v, w));
    }
    let table = [
        (1, 2, "-z1*z2", "0"),
        (1, 3, "-z1*z3", "0"),
        (1, 4, "z1*z4 - 2*z2", "-2*z2"),
        (1, 5, "z1*z5 - 2*z3", "-2*z3"),
        (1, 6, "0", "0"),
        (2, 3, "-z2*z3", "0"),
        (2, 4, "-z2*z4", "0"),
        (2, 5, "-2*z3*z4", "0"),
        (2, 6, "z2*z6 - 2*z3", "-2*z3"),
        (3, 4, "0", "0"),
        (3, 5, "-z3*z5", "0"),
        (3, 6, "-z3*z6", "0"),
        (4, 5, "-z4*z5", "0"),
        (4, 6, "z4*z6 - 2*z5", "-2*z5"),
        (5, 6, "-z5*z6", "0"),
    ];
    for (a, b, full, lin) in table {
        let (za, zb) = (Poly::var(v, a - 1), Poly::var(v, b - 1));
        assert_eq!(cell.pi_z.bracket_poly(&za, &zb), p(v, full), "pi {a} {b}");
        assert_eq!(cell.pi0.bracket(&za, &zb), p(v, lin), "pi0 {a} {b}");
    }
    assert!(solid_minor_check_cell(&cell).unwrap());
    let report = choose_integrable_system(&cell, &s).unwrap();
    assert_eq!(report.functions, ["z1", "z2", "z3", "z2*z5 - z3*z4"]);
    assert!(report.passes());
    let pf = pfaffian_check(&cell).unwrap();
    assert!(pf.holds);
    assert_eq!(pf.frozen_product, p(v, "z3").mul_poly(&p(v, want[4])).mul_poly(&p(v, want[5])));
    assert_eq!(pf.low_degree, -2);
    let pi = cell.property_i(&s).unwrap();
    assert_eq!((pi.deg_mu_low, pi.half_rank, pi.holds), (2, 2, true));
    record("SL4 example", pi.deg_mu_low, pi.half_rank);
}

fn criterion_2() {
    for m in 2..=5 {
        assert!(solid_minor_check(m).unwrap(), "m = {m}");
    }
}

fn sampled_s5() -> Vec<WeylElt> {
    let mut rng = rng_for(42, 5);
    let mut all: Vec<WeylElt> = WeylElt::all(5).into_iter().filter(|w| w.length() > 0).collect();
    all.shuffle(&mut rng);
    all.truncate(10);
    all
}

fn criterion_3() {
    let s = Settings::default();
    let mut seen = 0;
    for w in WeylElt::all(4).into_iter().chain(sampled_s5()) {
        let word = w.reduced_word();
        seen += 1;
        if word.is_empty() {
            // identity: ℓ = d_w = 0 and π₀ = 0
            continue;
        }
        let cell = build_cell(w.m(), &word).unwrap();
        let im = index_and_magic(&cell, &s).unwrap();
        let rank = cell.pi0.generic_rank(&s).unwrap() as i64;
        assert_eq!(rank, 2 * (cell.len() as i64 - im.d_w), "{word:?}");
        let report = choose_integrable_system(&cell, &s).unwrap();
        assert_eq!(report.functions.len() as i64, im.d_w, "{word:?}");
        assert!(report.passes(), "{word:?}");
        check_cell(&cell, &s);
    }
    assert_eq!(seen, 34);
}

fn criterion_4() {
    for w in WeylElt::all(4) {
        let word = w.reduced_word();
        if word.is_empty() {
            continue;
        }
        let cell = build_cell(4, &word).unwrap();
        for j in 1..=cell.len() {
            flow_structure_check(&cell, j).unwrap();
        }
    }
}

fn bfz(n: usize) -> BFZCluster {
    build_bfz(n, &DoubleWord::staircase(n), n as u32, &Settings::default()).unwrap()
}

fn criterion_5() {
    let s = Settings::default();
    for (n, count) in [(2, 5), (3, 9)] {
        let c = bfz(n);
        assert!(gexp_check(&c).unwrap().all(), "n = {n}");
        for row in degcas_check(&c) {
            assert!(row.twin_equal);
            if let Some(d) = row.difference_degree {
                assert_eq!(d, row.product_degree + 1);
            }
        }
        let r = choose_integrable_system_bfz(&c, &s).unwrap();
        assert_eq!(r.functions.len(), count);
        assert!(r.passes() && r.involutive && r.independent_count == count);
    }
    for n in 1..=5 {
        assert_eq!(stabilizer_dimension(n), n);
    }
    let c = bfz(2);
    for modified in [true, false] {
        let m = mu_low_probe(&c, modified, &s).unwrap();
        record(format!("BFZ n=2 modified={modified}"), m.upper_bound, m.half_rank);
        if modified {
            assert!(m.certified);
        }
    }
}

fn criterion_6() {
    let s = Settings::default();
    let c3 = build_dual_chart(3).unwrap();
    let st3 = build_staircase(&c3);
    let bb = &c3.bb;
    let phis = [
        "-x33*y32*y21^2 + x33*y22*y31*y21 + x23*y31*y32*y21 - x22*y31*y33*y21 - x23*y22*y31^2",
        "-x33*y21*y32 + x23*y31*y32 - x22*y31*y33",
        "x23*y31 - x33*y21",
        "y31",
    ];
    for (f, w) in st3.phis.iter().zip(phis) {
        assert_eq!(f, &p(bb, w));
    }
    let uv = u_vars(3);
    let jets = lows_via_jets(&c3, &st3, 8).unwrap();
    let lows = [
        "u32*u21^2 - u22*u31*u21 + u31*u33*u21 - u23*u31^2",
        "u31",
        "u21",
        "-u31",
        "1",
        "1",
        "u11*u22*u33 + u12*u23*u31 + u21*u13*u32 - u13*u22*u31 - u11*u23*u32 - u12*u21*u33",
        "-u12*u21 + u11*u22 - u13*u31 - u23*u32 + u11*u33 + u22*u33",
        "u11 + u22 + u33",
    ];
    for (j, w) in jets.iter().zip(lows) {
        assert!(j.term.eq_up_to_sign(&p(&uv, w)));
    }
    let r3 = choose_integrable_system_from(&c3, &st3, &s).unwrap();
    assert!(r3.passes());
    let picked = [0, 2, 3, 6, 7, 8];
    assert_eq!(r3.functions.len(), 6);
    for (f, &k) in r3.functions.iter().zip(&picked) {
        assert!(p(&uv, f).eq_up_to_sign(&p(&uv, lows[k])), "{f}");
    }
    for n in 2..=4 {
        let c = build_dual_chart(n).unwrap();
        let st = build_staircase(&c);
        let lows = lows_via_chart(&c, &st, &s).unwrap();
        for pp in 0..n - 1 {
            for i in 1..n {
                let low = &lows[pp * (n - 1) + i - 1].term;
                let closed = lows_closed_form(n, pp, i);
                assert!(low.eq_up_to_sign(&closed));
                assert!(lows_f_minor(n, pp, i).eq_up_to_sign(&closed));
                assert!(lows_minor_sum(n, pp, i).eq_up_to_sign(&closed));
            }
        }
        let u = u_matrix(n);
        for i in 0..n {
            let low = &lows[st.index(&format!("cbar{i}")).unwrap()];
            assert_eq!(low.term, principal_minor_sum(&u, n - i));
            assert_eq!(low.degree, (n - i) as i64);
        }
        assert!(casimir_binomial_check(&st), "n = {n}");
        let r = choose_integrable_system_from(&c, &st, &s).unwrap();
        assert!(r.passes());
        assert_eq!(r.independent_count, (n * n + n) / 2);
    }
    let mut rng = rng_for(7, 1);
    for _ in 0..20 {
        let pt = random_point(&mut rng, 25);
        let u = Matrix::from_fn(5, 5, |r, c| pt[r * 5 + c].clone());
        assert_eq!(F_inverse(&F_map(&u)).unwrap(), u);
    }
    for n in 2..=3 {
        let c = build_dual_chart(n).unwrap();
        let st = build_staircase(&c);
        let t = Instant::now();
        let r = log_volume_identity_check(&c, &st).unwrap();
        assert!(r.closed_form && r.holds(), "n = {n}");
        record(format!("GL({n})* staircase"), r.deg_mu_low, r.half_rank);
        assert!(t.elapsed() < Duration::from_secs(600));
    }
}

fn random_seed(rng: &mut impl Rng) -> (Seed, Vec<usize>) {
    let n = rng.gen_range(2..=5);
    let e = rng.gen_range(1..=n.min(4));
    let d: Vec<i64> = (0..e).map(|_| rng.gen_range(1..=2)).collect();
    let v = VarSet::new((1..=n).map(|i| format!("a{i}")));
    let mut m = vec![vec![0i64; e]; n];
    for i in 0..e {
        for j in i + 1..e {
            let x = rng.gen_range(-2..=2);
            m[i][j] = x * d[j];
            m[j][i] = -x * d[i];
        }
    }
    for row in m.iter_mut().skip(e) {
        for x in row.iter_mut() {
            *x = rng.gen_range(-1..=1);
        }
    }
    let cluster: Vec<RatFun> = (0..n).map(|i| RatFun::var(&v, i)).collect();
    let seed = Seed::new(&v, cluster, (1..=n).map(|i| format!("p{i}")).collect(), (0..e).collect(), m).unwrap();
    let path = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..e)).collect();
    (seed, path)
}

fn criterion_7() {
    let s = Settings::default();
    let mut cells: Vec<SchubertCell> = Vec::new();
    for w in WeylElt::all(4).into_iter().chain(sampled_s5()) {
        let word = w.reduced_word();
        if !word.is_empty() {
            cells.push(build_cell(w.m(), &word).unwrap());
        }
    }
    let c2 = bfz(2);
    let chart = build_dual_chart(3).unwrap();
    let dual_lows: Vec<Poly> =
        lows_via_jets(&chart, &build_staircase(&chart), 8).unwrap().into_iter().map(|l| l.term).collect();
    let mut pools: Vec<(Vec<Poly>, clusterint::poisson::LinearPoissonStructure)> =
        cells.iter().map(|c| (c.lows.iter().map(|l| l.term.clone()).collect(), c.pi0.clone())).collect();
    pools.push((c2.initial_cluster().iter().map(|e| e.low.term.clone()).collect(), clusterint::bfz::pi0_sl(2)));
    pools.push((dual_lows, kks_gl(3).pi));
    let mut rng = rng_for(42, 7);
    for _ in 0..100 {
        let (lows, pi0) = &pools[rng.gen_range(0..pools.len())];
        let mono = |rng: &mut rand_chacha::ChaCha8Rng| {
            lows.iter().fold(Poly::one(lows[0].vars()), |acc, f| if rng.gen_bool(0.4) { acc.mul_poly(f) } else { acc })
        };
        let (f, g) = (mono(&mut rng), mono(&mut rng));
        assert!(pi0.bracket(&f, &g).is_zero());
    }
    for _ in 0..40 {
        let (seed, path) = random_seed(&mut rng);
        assert!(log_volume_invariance(&seed, &path).unwrap(), "{path:?}");
    }
    for cell in &cells {
        let pf = pfaffian_check(cell).unwrap();
        assert!(pf.holds);
        let mu = deg_mu_low(&cell.log_canonical_system().functions).unwrap();
        assert_eq!(pf.low_degree, -mu, "{}", cell.construction());
        check_cell(cell, &s);
    }
    let seen = DEGREE_BOUNDS.lock().unwrap();
    assert!(seen.len() > 40);
    for (what, deg, half) in seen.iter() {
        assert!(deg >= half, "{what}: {deg} < {half}");
    }
}

fn main() {
    let criteria: [(&str, fn(), Duration); 7] = [
        ("SL(4) Schubert golden example", criterion_1, Duration::from_secs(5)),
        ("solid first-row minors for SL(m), m = 2..5", criterion_2, Duration::from_secs(60)),
        ("rank and count formula on S4 and sampled S5", criterion_3, Duration::from_secs(300)),
        ("flow structure for every w in S4", criterion_4, Duration::from_secs(300)),
        ("BFZ lowest terms, degrees, counts, stabilizer", criterion_5, Duration::from_secs(180)),
        ("GL(n)* staircase system", criterion_6, Duration::from_secs(900)),
        ("framework property suites", criterion_7, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        let el = t.elapsed();
        let within = el <= *budget;
        let status = if ok && within { "PASS" } else { "FAIL" };
        if status == "FAIL" {
            failed += 1;
        }
        let note = if ok && !within { format!(" (over the {}s budget)", budget.as_secs()) } else { String::new() };
        println!("{status} criterion {}: {name} [{:.1}s]{note}", k + 1, el.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
