pub mod alcovekl;
pub mod charring;
pub mod error;
pub mod hverma;
pub mod laurent;
pub mod lie;
pub mod quadric;
pub mod modcat;
pub mod rootsys;
pub mod sheafcoh;

pub use charring::{Character, Scalar};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use rootsys::{ParabolicSpec, RootDatum, RootType, Weight, WeylElement};

/// Integer-valued formal character.
pub type CharPoly = Character<i64>;
