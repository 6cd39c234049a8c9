use flagsoc::charring::Character;
use flagsoc::lie::RootVectors;
use flagsoc::modcat::*;
use flagsoc::sheafcoh::ledger::{ledger_check, parse, G2_PA2_SCRIPT};
use flagsoc::sheafcoh::*;
use flagsoc::{ParabolicSpec, RootDatum, RootType, Weight};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn w(c: &[i64]) -> Weight {
    Weight::new(c)
}

#[test]
fn bott_examples() {
    let a2 = RootDatum::of(RootType::A2);
    assert!(bott_line(&a2, &w(&[-1, -1])).parts.is_empty());
    let top = bott_line(&a2, &w(&[-2, -2]));
    assert_eq!(top.parts, BTreeMap::from([(3, BTreeMap::from([(Weight::ZERO, 1)]))]));
    let h0 = bott_line(&a2, &w(&[1, 2]));
    assert_eq!(h0.degree_dim(&a2, 0).unwrap(), 15);
    let g2 = RootDatum::of(RootType::G2);
    assert_eq!(bott_line(&g2, &w(&[-2, -2])).nonzero_degrees(), vec![6]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn serre_duality(a in -6i64..6, b in -6i64..6, k in 0usize..3) {
        let kind = [RootType::A2, RootType::B2, RootType::G2][k];
        let d = RootDatum::of(kind);
        let lam = w(&[a, b]);
        let dual = Weight::ZERO - lam - w(&[2, 2]);
        let n = d.positive.len();
        let x = bott_line(&d, &lam);
        let y = bott_line(&d, &dual);
        let xs: Vec<(usize, Character<i64>)> =
            x.nonzero_degrees().into_iter().map(|i| (n - i, x.degree_character(&d, i).unwrap().dual())).collect();
        let ys: Vec<(usize, Character<i64>)> =
            y.nonzero_degrees().into_iter().map(|i| (i, y.degree_character(&d, i).unwrap())).collect();
        prop_assert_eq!(xs, ys);
    }

    #[test]
    fn kodaira_vanishing(a in 1i64..5, b in 1i64..5, k in 0usize..3) {
        let kind = [RootType::A2, RootType::B2, RootType::G2][k];
        let d = RootDatum::of(kind);
        let p = bott_line(&d, &(w(&[a, b]) - w(&[2, 2])));
        prop_assert!(p.parts.keys().all(|&i| i == 0));
    }
}

#[test]
fn a1_euler_matrix() {
    let cat = catalog(RootType::A1, &ParabolicSpec::borel(), Family::Socle).unwrap();
    let m = euler_matrix(&cat).unwrap();
    assert_eq!(m.chi.len(), 2);
    assert!(m.unimodular());
    assert_eq!(m.chi[0][0], 1);
    assert_eq!(m.chi[1][1], 1);
    assert_eq!(m.chi[0][1] * m.chi[1][0], 0);
    assert_eq!(m.chi[0][1] + m.chi[1][0], 2);
}

#[test]
fn determinant_examples() {
    assert_eq!(determinant(&[vec![2, 1], vec![1, 1]]), 1);
    assert_eq!(determinant(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), -3);
    assert_eq!(determinant(&[]), 1);
}

#[test]
fn kapranov_homs() {
    let cat = catalog(RootType::A2, &ParabolicSpec::borel(), Family::Kapranov).unwrap();
    let d = cat.datum();
    let table = ext_table(&cat).unwrap();
    let names: Vec<String> = cat.sheaves().iter().map(|(x, _)| x.name()).collect();
    let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
    let mut nonzero = 0;
    for (x, row) in table.iter().enumerate() {
        for (y, h) in row.iter().enumerate() {
            assert!(h.is_exact());
            assert!(h.parts.keys().all(|&k| k == 0));
            if x != y && h.degree_dim(&d, 0).unwrap() != 0 {
                nonzero += 1;
            }
        }
    }
    assert_eq!(nonzero, 14);
    let top_word = d.find_element(&[1, 0, 1]).unwrap().name();
    let top = &table[idx("e")][idx(&top_word)];
    assert_eq!(top.parts[&0], BTreeMap::from([(w(&[1, 1]), 1)]));
    assert_eq!(top.degree_dim(&d, 0).unwrap(), 8);
    let into = idx("s1s2");
    let count = (0..names.len()).filter(|&x| x != into && table[x][into].degree_dim(&d, 0).unwrap() != 0).count();
    assert_eq!(count, 4);
}

#[test]
fn poset_verify_all() {
    let mut cats = Vec::new();
    for (kind, p) in supported(Family::Socle) {
        cats.push(catalog(kind, &p, Family::Socle).unwrap());
    }
    for n in 3..=4 {
        cats.push(quadric_catalog(n).unwrap());
    }
    for cat in cats {
        let r = poset_verify(&cat).unwrap();
        assert!(r.pass, "{} {}: {:?}", cat.kind, cat.parabolic.name(), r.failures);
        let n = r.elements.len();
        assert_eq!(r.euler_consistent, n * n);
        let m = euler_matrix(&cat).unwrap();
        assert!(m.unimodular(), "{} {}", cat.kind, cat.parabolic.name());
    }
}

#[test]
fn g2_borel_top_pair() {
    let cat = catalog(RootType::G2, &ParabolicSpec::borel(), Family::Socle).unwrap();
    let d = cat.datum();
    let rv = RootVectors::new(&d).unwrap();
    let s = cat.sheaves();
    let find = |word: &[u8]| {
        let x = d.find_element(word).unwrap();
        s.iter().find(|(y, _)| y.mat == x.mat).unwrap().1.clone()
    };
    let h = hom_ext(&d, &rv, &find(&[0, 1, 0, 1, 0]), &find(&[0, 1, 0, 1])).unwrap();
    assert!(h.is_exact());
    assert_eq!(h.parts, BTreeMap::from([(0, BTreeMap::from([(Weight::ZERO, 1)]))]));
}

#[test]
fn filtered_cohomology_matches_euler() {
    let d = RootDatum::of(RootType::G2);
    let rv = RootVectors::new(&d).unwrap();
    for f in named_fixtures(RootType::G2).unwrap() {
        for g in &f.guises {
            let g = g.twisted(w(&[-1, 0]));
            let p = cohom_filtered(&d, &rv, &g).unwrap();
            let ch = char_of(&d, &g).unwrap();
            assert_eq!(p.euler, euler_of_character(&d, &ch), "{}", f.name);
        }
    }
}

#[test]
fn pushforward_matches_bott() {
    for kind in [RootType::A2, RootType::B2, RootType::G2] {
        let d = RootDatum::of(kind);
        for a in -5..=5 {
            for b in -5..=5 {
                let lam = w(&[a, b]);
                for j in 0..2 {
                    let direct = euler_of_character(&d, &Character::monomial(lam, 1));
                    let pushed = match pushforward_line(&d, j, &lam) {
                        None => BTreeMap::new(),
                        Some((k, h)) => {
                            let a = d.simple_root(j);
                            let ch = Character::from_terms((0..=h.0[j]).map(|t| (h - t * a, 1)));
                            let mut e = euler_of_character(&d, &ch);
                            if k % 2 == 1 {
                                e.values_mut().for_each(|m| *m = -*m);
                            }
                            e
                        }
                    };
                    assert_eq!(direct, pushed, "{kind} {lam:?} {j}");
                }
            }
        }
    }
}

#[test]
fn shipped_ledger_replays() {
    let s = parse(G2_PA2_SCRIPT).unwrap();
    let r = ledger_check(&s).unwrap();
    assert!(r.pass(), "{:?}", r);
    assert_eq!(r.steps_replayed, s.steps.len());
}

#[test]
fn mutated_ledger_fails_at_first_cone() {
    let text = G2_PA2_SCRIPT.replace("axiom s1s2s1\n", "");
    let s = parse(&text).unwrap();
    let r = ledger_check(&s).unwrap();
    assert!(!r.pass());
    let first_cone = text.lines().position(|l| l.starts_with("cone")).unwrap() + 1;
    assert_eq!(r.failure.unwrap(), format!("line {first_cone}: invalid input: E(s1s2s1) is not known"));
}

#[test]
fn ledger_rejects_bad_boxes() {
    let bad = "catalog socle G2 a2\naxiom s1\ncone P line(-1 0) = [line(-1 0) / line(0 0)]\n";
    let r = ledger_check(&parse(bad).unwrap()).unwrap();
    assert!(r.failure.unwrap().starts_with("line 3"));
    assert!(parse("catalog socle G2 a2\nfrobnicate\n").is_err());
    assert!(parse("axiom e\n").is_err());
}
