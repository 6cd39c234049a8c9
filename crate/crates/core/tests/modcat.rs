use flagsoc::alcovekl::KlModule;
use flagsoc::charring::{weyl_character, Character};
use flagsoc::modcat::*;
use flagsoc::{ParabolicSpec, RootDatum, RootType, Weight};

fn w(c: &[i64]) -> Weight {
    Weight::new(c)
}

fn all_catalogs() -> Vec<Catalog> {
    let mut out = Vec::new();
    for fam in [Family::Socle, Family::Kapranov, Family::Quadric] {
        for (kind, p) in supported(fam) {
            out.push(catalog(kind, &p, fam).unwrap());
        }
    }
    out
}

#[test]
fn catalog_sizes() {
    for cat in all_catalogs() {
        let d = cat.datum();
        assert_eq!(cat.entries.len(), d.min_coset_reps(&cat.parabolic).unwrap().len());
    }
    let g = catalog(RootType::G2, &ParabolicSpec::new(vec![1]), Family::Socle).unwrap();
    assert_eq!(g.entries.len(), 6);
    assert!(matches!(g.entries[3].1.layers[0][0].kind, AtomKind::Named(_)));
    for n in 3..=5 {
        let q = quadric_catalog(n).unwrap();
        assert_eq!(q.entries.len(), if n % 2 == 1 { n + 1 } else { n + 2 });
    }
}

#[test]
fn realizations_match_descriptions() {
    for cat in all_catalogs() {
        let d = cat.datum();
        for (x, f) in cat.entries.iter().cloned().chain(cat.sheaves()) {
            let m = realize(&d, &f).unwrap();
            assert_eq!(m.character(), char_of(&d, &f).unwrap(), "{} {}", cat.kind, x.name());
        }
    }
}

#[test]
fn dual_is_an_involution() {
    for cat in all_catalogs() {
        let d = cat.datum();
        for (_, f) in &cat.entries {
            let dd = dual_desc(&d, f).unwrap();
            assert_eq!(char_of(&d, &dd).unwrap(), char_of(&d, f).unwrap().dual());
            assert_eq!(&dual_desc(&d, &dd).unwrap(), f);
        }
    }
}

#[test]
fn atom_characters() {
    let a2 = RootDatum::of(RootType::A2);
    let ch = char_of(&a2, &FiltDesc::single(nabla1(1, w(&[0, 1])), "")).unwrap();
    assert_eq!(ch, Character::from_terms([(w(&[0, 1]), 1), (w(&[1, -1]), 1)]));
    let dual = dual_atom(&a2, &delta1(0, w(&[1, 0]))).unwrap();
    let expect = Character::from_terms([(w(&[1, -1]), 1), (w(&[-1, 0]), 1)]);
    assert_eq!(atom_char(&a2, &dual).unwrap(), expect);
    assert_eq!(atom_char(&a2, &line(w(&[2, -1]))).unwrap(), Character::monomial(w(&[2, -1]), 1));
}

#[test]
fn g2_fixture_guises_agree() {
    let d = RootDatum::of(RootType::G2);
    let fx = named_fixtures(RootType::G2).unwrap();
    for f in &fx {
        let chars: Vec<_> = f.guises.iter().map(|g| char_of(&d, g).unwrap()).collect();
        for c in &chars[1..] {
            assert_eq!(c, &chars[0], "{}", f.name);
        }
    }
    let omega2 = fx.iter().find(|f| f.name == "D(w2) as P_a2-module").unwrap();
    let ch = char_of(&d, &omega2.guises[0]).unwrap();
    assert_eq!(ch, weyl_character(&d, &w(&[0, 1])).unwrap());
    assert_eq!(ch.total(), 14);
    assert_eq!(omega2.guises[0].layers.len(), 7);
}

#[test]
fn g2_borel_top_entry_has_two_summands() {
    let cat = catalog(RootType::G2, &ParabolicSpec::borel(), Family::Socle).unwrap();
    assert!(cat.speculative);
    let d = cat.datum();
    let x = d.find_element(&[0, 1, 0, 1, 0]).unwrap();
    let f = cat.entry(&x).unwrap();
    assert_eq!(f.layers.len(), 1);
    assert_eq!(f.layers[0].len(), 2);
    let sheaf = cat.sheaves().into_iter().find(|(y, _)| y.mat == x.mat).unwrap().1;
    assert_eq!(sheaf.layers[0].len(), 1);
}

fn smallest_prime_at_least(h: i64) -> i64 {
    (h..).find(|&n| (2..n).all(|k| n % k != 0)).unwrap()
}

#[test]
fn soc1_matches_socle_tables() {
    for kind in RootType::small() {
        let d = RootDatum::of(kind);
        let mut primes = vec![smallest_prime_at_least(d.coxeter_number()), 5, 7];
        primes.retain(|&p| p >= d.coxeter_number());
        primes.sort();
        primes.dedup();
        for p in primes {
            let kl = KlModule::new(kind, p).unwrap();
            for (k, par) in supported(Family::Socle) {
                if k != kind || !classes_separated(&kl.geometry, &par).unwrap() {
                    assert!(p < 7 || k != kind, "{kind} {} collides at p={p}", par.name());
                    continue;
                }
                let cat = catalog(kind, &par, Family::Socle).unwrap();
                for (w, ok) in soc1_check(&kl, &cat).unwrap() {
                    assert!(ok, "{kind} {} p={p} {w}", par.name());
                }
            }
        }
    }
}

#[test]
fn golden_catalogs() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for cat in all_catalogs() {
        let name = format!("{}_{}_{}.json", cat.family.name(), cat.kind.label(), cat.parabolic.name()).replace(['(', ')'], "");
        let path = dir.join(name);
        let got = cat.to_json();
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        let want: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(got, want, "{}", path.display());
    }
}
