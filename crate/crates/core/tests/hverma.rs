use flagsoc::alcovekl::{KlModule, RestrictedSimples};
use flagsoc::hverma::*;
use flagsoc::{ParabolicSpec, RootType, Weight};

fn run(kind: RootType, p: i64) {
    let kl = KlModule::new(kind, p).unwrap();
    let s = RestrictedSimples::compute(&kl).unwrap();
    let d = &kl.geometry.datum;
    let tb = socle_table(&kl, &ParabolicSpec::borel(), &Weight::ZERO).unwrap();
    for par in ParabolicSpec::all_proper(d.rank) {
        let t = socle_table(&kl, &par, &Weight::ZERO).unwrap();
        let (_, _, wp) = d.longest_elements(&par).unwrap();
        let mass = t.mass(&s, d.rank).unwrap();
        eprintln!("{} {} loewy {} mass {} anomalies {:?}", d.kind.label(), par.name(), t.loewy_length(), mass, t.anomalies);
        assert!(t.anomalies.is_empty());
        assert_eq!(t.loewy_length(), wp.len() as i64 + 1);
        assert_eq!(mass, p.pow(par.unipotent_roots(d).len() as u32));
        assert!(q_one_check(&t, &kl, &s).unwrap());
        assert!(containment_check(&t, &tb));
        assert!(duality_check(&kl, &t).unwrap());
        assert!(epsilon_layer_check(&kl, &par).unwrap().iter().all(|x| x.1));
    }
}

#[test]
fn a1() { run(RootType::A1, 3) }
#[test]
fn a2() { run(RootType::A2, 5) }
#[test]
fn b2() { run(RootType::B2, 5) }
#[test]
fn g2() { run(RootType::G2, 7) }
