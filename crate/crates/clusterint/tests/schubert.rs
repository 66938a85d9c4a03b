use clusterint::polyring::{parse_poly, Poly};
use clusterint::schubert::*;
use clusterint::Settings;

const SL4: [usize; 6] = [1, 2, 3, 1, 2, 1];

fn p(cell: &SchubertCell, s: &str) -> Poly {
    parse_poly(s, &cell.vars).unwrap()
}

#[test]
fn sl4_functions() {
    let cell = build_cell(4, &SL4).unwrap();
    let want = ["z1", "z2", "z3", "z1*z4 - z2", "z2*z5 - z3*z4", "z1*z4*z6 - z1*z5 - z2*z6 + z3"];
    for (f, w) in cell.phis.iter().zip(want) {
        assert_eq!(f, &p(&cell, w));
    }
}

#[test]
fn sl4_bracket_tables() {
    let cell = build_cell(4, &SL4).unwrap();
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
        let za = Poly::var(&cell.vars, a - 1);
        let zb = Poly::var(&cell.vars, b - 1);
        assert_eq!(cell.pi_z.bracket_poly(&za, &zb), p(&cell, full), "pi {a} {b}");
        assert_eq!(cell.pi0.bracket(&za, &zb), p(&cell, lin), "pi0 {a} {b}");
    }
}

#[test]
fn sl4_lows_and_selection() {
    let cell = build_cell(4, &SL4).unwrap();
    let degs: Vec<i64> = cell.lows.iter().map(|l| l.degree).collect();
    assert_eq!(degs, vec![1, 1, 1, 1, 2, 1]);
    assert!(solid_minor_check_cell(&cell).unwrap());
    let report = choose_integrable_system(&cell, &Settings::default()).unwrap();
    assert_eq!(report.functions, vec!["z1", "z2", "z3", "z2*z5 - z3*z4"]);
    assert!(report.passes());
}

#[test]
fn sl4_index_pfaffian_property_i() {
    let cell = build_cell(4, &SL4).unwrap();
    let s = Settings::default();
    assert_eq!(index_and_magic(&cell, &s).unwrap(), IndexMagic { d_w: 4, ind: 2, mag: 4, rank_check: true });
    let pf = pfaffian_check(&cell).unwrap();
    assert!(pf.holds);
    assert_eq!(pf.low_degree, -2);
    let pi = cell.property_i(&s).unwrap();
    assert_eq!((pi.deg_mu_low, pi.half_rank, pi.holds), (2, 2, true));
}

#[test]
fn rank_one() {
    let cell = build_cell(2, &[1]).unwrap();
    assert_eq!(cell.phis[0], p(&cell, "z1"));
    assert!(cell.pi0.matrix().is_zero());
    let s = Settings::default();
    assert_eq!(index_and_magic(&cell, &s).unwrap(), IndexMagic { d_w: 1, ind: 1, mag: 1, rank_check: true });
    assert_eq!(choose_integrable_system(&cell, &s).unwrap().functions, vec!["z1"]);
    assert!(pfaffian_check(&cell).unwrap().holds);
}

#[test]
fn sl3_longest() {
    let cell = build_cell(3, &[1, 2, 1]).unwrap();
    let low3 = &cell.lows[2].term;
    assert!(low3.eq_up_to_sign(&p(&cell, "z2")));
    let s = Settings::default();
    assert_eq!(choose_integrable_system(&cell, &s).unwrap().functions, vec!["z1", "z2"]);
    assert_eq!(index_and_magic(&cell, &s).unwrap(), IndexMagic { d_w: 2, ind: 1, mag: 2, rank_check: true });
}

#[test]
fn solid_minors_small_ranks() {
    for m in 2..=4 {
        assert!(solid_minor_check(m).unwrap(), "m = {m}");
    }
}

#[test]
fn solid_minor_needs_staircase() {
    let cell = build_cell(3, &[2, 1, 2]).unwrap();
    assert!(matches!(solid_minor_check_cell(&cell), Err(clusterint::Error::WrongWord)));
}

#[test]
fn non_reduced_word_rejected() {
    assert!(build_cell(3, &[1, 1]).is_err());
}

#[test]
fn sl4_flow_structure() {
    let cell = build_cell(4, &SL4).unwrap();
    for j in 1..=6 {
        flow_structure_check(&cell, j).unwrap();
    }
}

#[test]
fn all_of_s4() {
    use clusterint::typea::WeylElt;
    let s = Settings::default();
    for w in WeylElt::all(4) {
        let word = w.reduced_word();
        if word.is_empty() {
            continue;
        }
        let cell = build_cell(4, &word).unwrap();
        let im = index_and_magic(&cell, &s).unwrap();
        assert!(im.rank_check, "{word:?}");
        let report = choose_integrable_system(&cell, &s).unwrap();
        assert!(report.passes(), "{word:?}");
        assert!(pfaffian_check(&cell).unwrap().holds, "{word:?}");
        assert!(cell.property_i(&s).unwrap().holds, "{word:?}");
        for j in 1..=cell.len() {
            flow_structure_check(&cell, j).unwrap();
        }
    }
}

#[test]
fn solid_minors_rank_five() {
    assert!(solid_minor_check(5).unwrap());
}
