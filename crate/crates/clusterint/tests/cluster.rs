use clusterint::bfz::{build_bfz, DoubleWord, Label};
use clusterint::cluster::*;
use clusterint::exec::Settings;
use clusterint::polyring::{parse_poly, q, Matrix, Poly, PolyMatrix, RatFun, VarSet, Q};
use clusterint::typea::standard_gl;
use clusterint::Error;

fn rf(vars: &clusterint::polyring::Vars, s: &str) -> RatFun {
    parse_ratfun(s, vars).unwrap()
}

fn two_seed() -> Seed {
    let v = VarSet::new(["a", "b"]);
    Seed::new(&v, vec![rf(&v, "a"), rf(&v, "b")], vec!["p1".into(), "p2".into()], vec![0], vec![vec![0], vec![1]])
        .unwrap()
}

#[test]
fn exchange_relation_small() {
    let s = two_seed();
    let t = s.mutate(0).unwrap();
    assert_eq!(t.cluster[0], rf(&s.vars, "(b + 1)/(a)"));
    assert_eq!(t.m, vec![vec![0], vec![-1]]);
    assert_eq!(t.mutate(0).unwrap(), s);
    assert!(matches!(s.mutate(1), Err(Error::NotMutable(1))));
}

#[test]
fn empty_products_give_two() {
    let v = VarSet::new(["a", "b"]);
    let s =
        Seed::new(&v, vec![rf(&v, "a"), rf(&v, "b")], vec!["p1".into(), "p2".into()], vec![0], vec![vec![0], vec![0]])
            .unwrap();
    assert_eq!(s.mutate(0).unwrap().cluster[0], rf(&v, "(2)/(a)"));
}

#[test]
fn volume_invariance_small() {
    let s = two_seed();
    assert!(log_volume_invariance(&s, &[]).unwrap());
    assert!(log_volume_invariance(&s, &[0]).unwrap());
    assert!(log_volume_invariance(&s, &[0, 0, 0]).unwrap());
}

#[test]
fn rank_two_quiver() {
    let v = VarSet::new(["a", "b", "c"]);
    let cl = vec![rf(&v, "a"), rf(&v, "b"), rf(&v, "c")];
    let m = vec![vec![0, 1], vec![-1, 0], vec![1, -1]];
    let s = Seed::new(&v, cl, vec!["x1".into(), "x2".into(), "y".into()], vec![0, 1], m).unwrap();
    assert!(s.is_independent(&Settings::default()).unwrap());
    for path in [vec![0], vec![0, 1], vec![0, 1, 0], vec![1, 0, 1, 0, 1]] {
        assert!(log_volume_invariance(&s, &path).unwrap(), "{path:?}");
    }
    // the old variable is recovered from the exchange relation in the new cluster
    let t = s.mutate(0).unwrap();
    let back = t.mutate(0).unwrap();
    assert_eq!(back.cluster, s.cluster);
}

#[test]
fn symmetrizer_search() {
    assert_eq!(skew_symmetrizer(&[vec![0, 1], vec![-1, 0]]), Some(vec![1, 1]));
    assert_eq!(skew_symmetrizer(&[vec![0, 2], vec![-1, 0]]), Some(vec![1, 2]));
    assert_eq!(skew_symmetrizer(&[vec![0, 1], vec![1, 0]]), None);
    assert_eq!(skew_symmetrizer(&[vec![0, 13], vec![-1, 0]]), None);
    // inconsistent cycle
    assert_eq!(skew_symmetrizer(&[vec![0, 1, -1], vec![-2, 0, 1], vec![1, -1, 0]]), None);
    let b = vec![vec![0, 2], vec![-1, 0]];
    let v = VarSet::new(["a", "b"]);
    let s = Seed::new(&v, vec![rf(&v, "a"), rf(&v, "b")], vec!["p".into(), "q".into()], vec![0, 1], b).unwrap();
    let d = skew_symmetrizer(&s.principal_part()).unwrap();
    let t = s.mutate(1).unwrap();
    assert_eq!(skew_symmetrizer(&t.principal_part()), Some(d));
}

#[test]
fn seed_json_round_trip() {
    let s = two_seed().mutate(0).unwrap();
    let j = serde_json::to_string(&s.to_json()).unwrap();
    assert!(j.contains("\"M\""));
    let back: SeedJson = serde_json::from_str(&j).unwrap();
    assert_eq!(Seed::from_json(&back).unwrap(), s);
}

#[test]
fn trivial_and_constant_modifications() {
    let v = VarSet::new(["a", "b"]);
    let (_, pi) = standard_gl(1);
    let _ = pi;
    let s = two_seed();
    let zero_pi = clusterint::poisson::PoissonStructure::zero(&v);
    let base = s.log_volume().unwrap();
    let same = modified_log_volume(&s, &FrozenModification::identity(), &zero_pi).unwrap();
    assert_eq!(same.form.coefficient, base.coefficient);
    assert_eq!(same.path_independent, Some(true));
    let scale = FrozenModification {
        replacements: vec![Replacement { target: 1, casimir: RatFun::constant(&v, q(3)), monomial: vec![(1, 1)] }],
    };
    let scaled = modified_log_volume(&s, &scale, &zero_pi).unwrap();
    assert_eq!(scaled.form.coefficient, base.coefficient);
}

#[test]
fn modification_needs_casimir() {
    let (vars, pi) = standard_gl(2);
    let x = |s: &str| RatFun::from_poly(parse_poly(s, &vars).unwrap());
    let cl = vec![x("x11"), x("x12"), x("x21"), x("x22")];
    let s = Seed::new(&vars, cl, (1..=4).map(|k| format!("v{k}")).collect(), vec![], vec![vec![]; 4]).unwrap();
    let bad = FrozenModification { replacements: vec![Replacement { target: 0, casimir: x("x12"), monomial: vec![] }] };
    assert!(matches!(modified_log_volume(&s, &bad, &pi), Err(Error::NotCasimir(_))));
    let det = x("x11*x22 - x12*x21");
    let good = FrozenModification { replacements: vec![Replacement { target: 3, casimir: det, monomial: vec![] }] };
    assert!(modified_log_volume(&s, &good, &pi).is_ok());
}

#[test]
fn bfz_rank_two_modification_on_gl3() {
    let settings = Settings::default();
    let c = build_bfz(2, &DoubleWord::staircase(2), 2, &settings).unwrap();
    let (vars, pi) = standard_gl(3);
    let x: PolyMatrix = Matrix::from_fn(3, 3, |i, j| Poly::var(&vars, i * 3 + j));
    let entries = c.initial_cluster();
    let mut cluster: Vec<RatFun> = entries.iter().map(|e| RatFun::from_poly(e.expr.eval(&x))).collect();
    let mut labels: Vec<String> = entries.iter().map(|e| e.label.to_string()).collect();
    cluster.push(RatFun::from_poly(x.det_laplace()));
    labels.push("det".into());
    let at = |l: Label| entries.iter().position(|e| e.label == l).unwrap();
    let (f1, f2, g1, g2) = (at(Label::F(1)), at(Label::F(2)), at(Label::G(1)), at(Label::G(2)));
    let s = Seed::new(&vars, cluster, labels, vec![], vec![vec![]; 9]).unwrap();
    assert!(s.is_independent(&settings).unwrap());
    // g'_2 = f2 g2 − f1 g1 = (1 − f1 g1/(f2 g2)) · f2 g2
    let ratio = s.cluster[f1].mul_rf(&s.cluster[g1]).div_rf(&s.cluster[f2].mul_rf(&s.cluster[g2]));
    let casimir = RatFun::one(&vars).sub_rf(&ratio);
    let modification = FrozenModification {
        replacements: vec![Replacement { target: g2, casimir, monomial: vec![(f2, 1), (g2, 1)] }],
    };
    let modified = modification.apply(&s).unwrap();
    let gprime = c.gprime(2).unwrap().expr.eval(&x);
    assert!(modified[g2].as_poly().unwrap().eq_up_to_sign(&gprime));
    let mv = modified_log_volume(&s, &modification, &pi).unwrap();
    assert_eq!(mv.path_independent, None);
    // degrees are taken on SL(3): x33 solved from det = 1 over the other eight entries
    let sl = VarSet::new(["x11", "x12", "x13", "x21", "x22", "x23", "x31", "x32"]);
    let v = |k: usize| RatFun::var(&sl, k);
    let rest = parse_poly("-x11*x23*x32 + x12*x23*x31 + x13*x21*x32 - x13*x22*x31", &sl).unwrap();
    let minor = parse_poly("x11*x22 - x12*x21", &sl).unwrap();
    let x33 = RatFun::new(Poly::one(&sl).sub_poly(&rest), minor);
    let vals: Vec<RatFun> = (0..8).map(v).chain([x33]).collect();
    let on_sl = |fs: &[RatFun]| -> Vec<RatFun> {
        fs[..8].iter().map(|f| f.num().eval_ring(&vals).div_rf(&f.den().eval_ring(&vals))).collect()
    };
    let identity: Vec<Q> = [1, 0, 0, 0, 1, 0, 0, 0].into_iter().map(q).collect();
    assert_eq!(deg_mu_low_at(&on_sl(&modified), &identity).unwrap(), 3);
    assert_eq!(deg_mu_low_at(&on_sl(&s.cluster), &identity).unwrap(), 4);
}
