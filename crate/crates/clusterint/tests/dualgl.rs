use clusterint::dualgl::*;
use clusterint::exec::Settings;
use clusterint::polyring::{parse_poly, q, Matrix, Poly, QMatrix, RatFun};

fn p(vars: &clusterint::polyring::Vars, s: &str) -> Poly {
    parse_poly(s, vars).unwrap()
}

#[test]
fn chart_brackets_rank_two() {
    let c = build_dual_chart(2).unwrap();
    let v = &c.vars;
    let var = |s: &str| RatFun::var(v, v.index_of(s).unwrap());
    assert!(c.pi_dual.bracket(&var("x11"), &var("x11")).is_zero());
    // {y21, x11} = ½(y21 x11 − 0) from the mixed family; π* = −Π
    let b = c.pi_dual.bracket(&var("x11"), &var("y21"));
    assert_eq!(b, RatFun::from_poly(p(v, "1/2*x11*y21")));
    assert!(c.pi_dual.jacobi_holds());
    let s = build_staircase(&c);
    let cbar0 = RatFun::from_poly(s.cbars[0].clone());
    for k in 0..v.len() {
        assert!(c.pi_dual.bracket(&cbar0, &RatFun::var(v, k)).is_zero());
    }
}

#[test]
fn rank_three_staircase() {
    let c = build_dual_chart(3).unwrap();
    let s = build_staircase(&c);
    let bb = &c.bb;
    assert_eq!(s.phis[3], p(bb, "y31"));
    assert_eq!(s.phis[2], p(bb, "x23*y31 - x33*y21"));
    assert_eq!(s.phis[1], p(bb, "-x33*y21*y32 + x23*y31*y32 - x22*y31*y33"));
    assert_eq!(
        s.phis[0],
        p(bb, "-x33*y32*y21^2 + x33*y22*y31*y21 + x23*y31*y32*y21 - x22*y31*y33*y21 - x23*y22*y31^2")
    );
    assert_eq!(s.system.len(), 9);
    assert_eq!(s.labels, ["phi1", "phi2", "phi3", "phi4", "x22", "x33", "cbar0", "cbar1", "cbar2"]);
    assert!(casimir_binomial_check(&s));
    let cas: Vec<RatFun> = s.cbars.iter().take(3).map(|c| RatFun::from_poly(c.clone())).collect();
    for f in &cas {
        for k in 0..c.vars.len() {
            assert!(c.pi_dual.bracket(f, &RatFun::var(&c.vars, k)).is_zero());
        }
    }
}

#[test]
fn rank_two_staircase() {
    let c = build_dual_chart(2).unwrap();
    let s = build_staircase(&c);
    assert_eq!(s.psi.rows(), 1);
    assert_eq!(s.phis[0], p(&c.bb, "y21"));
    assert!(casimir_binomial_check(&s));
}

#[test]
fn rank_three_lows() {
    let c = build_dual_chart(3).unwrap();
    let s = build_staircase(&c);
    let settings = Settings::default();
    let jets = lows_via_jets(&c, &s, 8).unwrap();
    let chart = lows_via_chart(&c, &s, &settings).unwrap();
    let uv = u_vars(3);
    for (a, b) in jets.iter().zip(&chart) {
        assert_eq!(a.term, b.term);
        assert_eq!(a.degree, b.degree);
    }
    let want = [
        // expansion of Δ_{23,12}Δ_{2,1} + Δ_{23,13}Δ_{3,1}
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
    for (k, w) in want.iter().enumerate() {
        assert!(jets[k].term.eq_up_to_sign(&p(&uv, w)), "{}: {}", s.labels[k], jets[k].term);
    }
    assert_eq!(jets[6].term, p(&uv, want[6]));
    assert_eq!(jets[8].term, p(&uv, want[8]));
}

#[test]
fn rank_two_jets() {
    let c = build_dual_chart(2).unwrap();
    let s = build_staircase(&c);
    let jets = lows_via_jets(&c, &s, 8).unwrap();
    let uv = u_vars(2);
    assert_eq!(jets[2].term, p(&uv, "u11*u22 - u12*u21"));
}

#[test]
fn closed_forms_agree_with_lows() {
    let settings = Settings::default();
    for n in 2..=4 {
        let c = build_dual_chart(n).unwrap();
        let s = build_staircase(&c);
        let lows = lows_via_chart(&c, &s, &settings).unwrap();
        for pp in 0..n - 1 {
            for i in 1..n {
                let k = pp * (n - 1) + i - 1;
                let closed = lows_closed_form(n, pp, i);
                assert!(lows[k].term.eq_up_to_sign(&closed), "n={n} p={pp} i={i}");
                assert!(lows_f_minor(n, pp, i).eq_up_to_sign(&closed), "F-minor n={n} p={pp} i={i}");
                assert!(lows_minor_sum(n, pp, i).eq_up_to_sign(&closed), "chain sum n={n} p={pp} i={i}");
            }
        }
        let u = u_matrix(n);
        for i in 0..n {
            let low = &lows[s.index(&format!("cbar{i}")).unwrap()];
            assert_eq!(low.term, principal_minor_sum(&u, n - i));
            assert_eq!(low.degree, (n - i) as i64);
        }
    }
}

#[test]
fn rank_four_example_relations() {
    let c = build_dual_chart(4).unwrap();
    let s = build_staircase(&c);
    let lows = lows_via_chart(&c, &s, &Settings::default()).unwrap();
    let phi = |k: usize| lows[k - 1].term.clone();
    let uv = u_vars(4);
    assert!(phi(5).eq_up_to_sign(&phi(2)));
    assert!(phi(6).eq_up_to_sign(&p(&uv, "u41")));
    assert!(phi(7).eq_up_to_sign(&p(&uv, "u21")));
    assert!(phi(8).eq_up_to_sign(&p(&uv, "u31")));
    assert!(phi(9).eq_up_to_sign(&phi(6)));
    assert_eq!(phi(1).len(), 86);
    let u = u_matrix(4);
    let d = |r: &[usize], cols: &[usize]| clusterint::typea::minor(&u, r, cols);
    let three = |rows: &[usize]| {
        d(rows, &[1, 2])
            .mul_poly(&d(&[2], &[1]))
            .add_poly(&d(rows, &[1, 3]).mul_poly(&d(&[3], &[1])))
            .add_poly(&d(rows, &[1, 4]).mul_poly(&d(&[4], &[1])))
    };
    assert!(phi(2).eq_up_to_sign(&three(&[3, 4])));
    assert!(phi(3).eq_up_to_sign(&three(&[2, 4])));
    assert!(phi(4).eq_up_to_sign(&three(&[2, 3])));
    let rows = [2, 3, 4];
    let expansion = d(&rows, &[1, 2, 3])
        .mul_poly(&three(&[2, 3]))
        .add_poly(&d(&rows, &[1, 2, 4]).mul_poly(&three(&[2, 4])))
        .add_poly(&d(&rows, &[1, 3, 4]).mul_poly(&three(&[3, 4])));
    assert!(phi(1).eq_up_to_sign(&expansion));
}

#[test]
fn integrable_system_selection() {
    let settings = Settings::default();
    let r3 = choose_integrable_system_dualgl(3, &settings).unwrap();
    assert!(r3.passes());
    assert_eq!(r3.functions.len(), 6);
    assert!(r3.construction.ends_with("selected=phi1,phi3,phi4,cbar0,cbar1,cbar2"));
    let r2 = choose_integrable_system_dualgl(2, &settings).unwrap();
    assert!(r2.passes());
    assert_eq!(r2.functions.len(), 3);
    let r4 = choose_integrable_system_dualgl(4, &settings).unwrap();
    assert!(r4.passes());
    assert_eq!(r4.independent_count, 10);
}

#[test]
fn kks_properties() {
    let settings = Settings::default();
    for n in 2..=4 {
        let k = kks_gl(n);
        assert!(k.pi.jacobi_holds());
        assert_eq!(k.pi.generic_rank(&settings).unwrap(), n * n - n);
        let u = u_matrix(n);
        for e in 1..=n {
            let m = u.pow(e as u32);
            let tr = (0..n).fold(Poly::zero(u.get(0, 0).vars()), |acc, i| acc.add_poly(m.get(i, i)));
            assert!(k.pi.is_casimir(&tr), "tr(u^{e}) at n={n}");
        }
    }
}

#[test]
fn kks_is_the_linearized_dual_structure() {
    for n in 2..=3 {
        let c = build_dual_chart(n).unwrap();
        let lin = linearized_dual(&c).unwrap();
        let k = kks_gl(n);
        let same = lin.matrix() == k.pi.matrix();
        let opposite = lin.matrix() == &k.pi.matrix().neg();
        assert!(same || opposite, "n={n}");
    }
}

#[test]
fn different_from_gelfand_zeitlin() {
    let k = kks_gl(3);
    let uv = u_vars(3);
    let phi4 = p(&uv, "-u31");
    assert!(!k.pi.bracket(&phi4, &p(&uv, "u11 + u22")).is_zero());
    assert!(!k.pi.bracket(&phi4, &p(&uv, "u22 + u33")).is_zero());
}

#[test]
fn lambda_relations_hold() {
    for n in 2..=4 {
        let c = build_dual_chart(n).unwrap();
        let s = build_staircase(&c);
        let r = lambda_relations(&c, &s);
        assert!(r.tail && r.phi, "n={n}");
    }
}

#[test]
fn expforphi_identities() {
    for n in 2..=3 {
        let c = build_dual_chart(n).unwrap();
        assert!(expforphi_symbolic(&c), "n={n}");
    }
    let c = build_dual_chart(4).unwrap();
    assert!(expforphi_sampled(&c, &Settings::default()));
}

#[test]
fn krylov_map_round_trips() {
    let n = 4;
    let jordan = Matrix::from_fn(n, n, |r, c| if r == c + 1 { q(1) } else { q(0) });
    let f = F_map(&jordan);
    let want = Matrix::from_fn(n, n, |r, c| if r == c + 1 { q(1) } else { q(0) });
    assert_eq!(f, want);
    assert_eq!(F_inverse(&f).unwrap(), jordan);
    let zero: QMatrix = Matrix::from_fn(n, n, |_, _| q(0));
    assert!(F_inverse(&F_map(&zero)).is_err());
    let mut rng = clusterint::polyring::rng_for(7, 1);
    for _ in 0..20 {
        let pt = clusterint::polyring::random_point(&mut rng, 25);
        let u = Matrix::from_fn(5, 5, |r, c| pt[r * 5 + c].clone());
        assert_eq!(F_inverse(&F_map(&u)).unwrap(), u);
    }
}

#[test]
fn selected_indices() {
    assert_eq!(selected_phi_indices(2), [1]);
    assert_eq!(selected_phi_indices(3), [1, 3, 4]);
    assert_eq!(selected_phi_indices(4), [1, 4, 5, 7, 8, 9]);
}

#[test]
fn log_volume_rank_two() {
    let c = build_dual_chart(2).unwrap();
    let s = build_staircase(&c);
    let r = log_volume_identity_check(&c, &s).unwrap();
    assert!(r.closed_form);
    assert_eq!(r.deg_mu_low, 1);
    assert!(r.holds());
}

#[test]
fn log_volume_rank_three() {
    let c = build_dual_chart(3).unwrap();
    let s = build_staircase(&c);
    let r = log_volume_identity_check(&c, &s).unwrap();
    assert!(r.closed_form);
    assert_eq!(r.deg_mu_low, 3);
}
