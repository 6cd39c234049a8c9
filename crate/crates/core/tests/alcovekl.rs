use flagsoc::alcovekl::{KlModule, RestrictedSimples};
use flagsoc::{RootType, Weight};

#[test]
fn a2_p5_baby_verma_of_zero() {
    let kl = KlModule::new(RootType::A2, 5).unwrap();
    let f = kl.nabla_factors(&Weight::ZERO).unwrap();
    for (c, q) in &f {
        eprintln!("{c} {q:?}");
    }
    assert_eq!(f.len(), 9);
}

#[test]
fn g2_restricted_simple() {
    let kl = KlModule::new(RootType::G2, 7).unwrap();
    let s = RestrictedSimples::compute(&kl).unwrap();
    assert_eq!(s.chars[&Weight::new(&[2, 0])].total(), 26);
}
