//! Filtered descriptions of `B`- and `P`-modules, the catalogs of the
//! modules `E_w`, and their explicit realizations over characteristic 0.

use crate::alcovekl::{Geometry, KlModule};
use crate::charring::{weyl_character, Character};
use crate::error::{Error, Result};
use crate::hverma::{epsilon, restricted_part, socle_table, SocleTable};
use crate::lie::{fint, finv, fmul, Module, SparseVec};
use crate::rootsys::{ParabolicSpec, RootDatum, RootType, Weight, WeylElement};
use crate::CharPoly;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Generator of a submodule of a direct sum of Weyl modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gen {
    WeightSpace { summand: usize, weight: Weight },
    /// Every weight space of the summand except the listed ones.
    WeightSpacesExcept { summand: usize, except: Vec<Weight> },
    /// `sum F_root^(k) v` over terms `(summand, weight, root, k)`, where `v`
    /// spans a one-dimensional weight space.
    Combo(Vec<(usize, Weight, usize, u32)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecipeKind {
    Quotient,
    Sub,
}

/// `(sum of Delta(summands)) / Dist(P_levi)(gens)`, or that submodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub kind: RecipeKind,
    pub summands: Vec<Weight>,
    pub gens: Vec<Gen>,
    pub levi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModule {
    pub label: String,
    pub recipe: Recipe,
    pub ch: CharPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    /// The trivial module; the weight lives in the twist.
    Line,
    DeltaRank1 { root: usize, highest: Weight },
    NablaRank1 { root: usize, highest: Weight },
    SimpleRank1 { root: usize, highest: Weight },
    WeylG(Weight),
    DualWeylG(Weight),
    /// Induced module of the Levi on `levi`; irreducible in characteristic 0.
    NablaLevi { levi: Vec<usize>, highest: Weight },
    Named(Box<NamedModule>),
    Dual(Box<AtomKind>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub kind: AtomKind,
    pub twist: Weight,
}

/// Layers bottom to top; each layer a direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltDesc {
    pub layers: Vec<Vec<Atom>>,
    pub source: String,
}

pub fn line(lambda: Weight) -> Atom {
    Atom { kind: AtomKind::Line, twist: lambda }
}

pub fn delta1(root: usize, highest: Weight) -> Atom {
    Atom { kind: AtomKind::DeltaRank1 { root, highest }, twist: Weight::ZERO }
}

pub fn nabla1(root: usize, highest: Weight) -> Atom {
    Atom { kind: AtomKind::NablaRank1 { root, highest }, twist: Weight::ZERO }
}

pub fn weyl(highest: Weight) -> Atom {
    Atom { kind: AtomKind::WeylG(highest), twist: Weight::ZERO }
}

impl Atom {
    pub fn twisted(mut self, t: Weight) -> Atom {
        self.twist += t;
        self
    }
}

impl FiltDesc {
    pub fn single(a: Atom, source: &str) -> FiltDesc {
        FiltDesc { layers: vec![vec![a]], source: source.into() }
    }

    pub fn sum(atoms: Vec<Atom>, source: &str) -> FiltDesc {
        FiltDesc { layers: vec![atoms], source: source.into() }
    }

    /// Layers given bottom to top, each a direct sum.
    pub fn boxed(layers: Vec<Vec<Atom>>, source: &str) -> FiltDesc {
        FiltDesc { layers, source: source.into() }
    }

    pub fn twisted(&self, t: Weight) -> FiltDesc {
        FiltDesc {
            layers: self.layers.iter().map(|l| l.iter().map(|a| a.clone().twisted(t)).collect()).collect(),
            source: self.source.clone(),
        }
    }

    pub fn layer(&self, i: usize) -> Option<&[Atom]> {
        self.layers.get(i).map(|l| l.as_slice())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.layers.iter().flatten()
    }
}

fn rank1_char(d: &RootDatum, root: usize, highest: &Weight) -> Result<CharPoly> {
    let n = highest.0[root];
    if n < 0 {
        return Err(Error::NotDominant(format!("{highest} for alpha_{}", root + 1)));
    }
    let a = d.simple_root(root);
    Ok(Character::from_terms((0..=n).map(|k| (*highest - k * a, 1))))
}

fn lowest_in_levi(d: &RootDatum, levi: &[usize], highest: &Weight) -> Result<Weight> {
    let (_, wl, _) = d.longest_elements(&ParabolicSpec::new(levi.to_vec()))?;
    Ok(wl.act(d, highest))
}

fn kind_char(d: &RootDatum, k: &AtomKind) -> Result<CharPoly> {
    match k {
        AtomKind::Line => Ok(Character::monomial(Weight::ZERO, 1)),
        AtomKind::DeltaRank1 { root, highest }
        | AtomKind::NablaRank1 { root, highest }
        | AtomKind::SimpleRank1 { root, highest } => rank1_char(d, *root, highest),
        AtomKind::WeylG(l) => weyl_character(d, l),
        AtomKind::DualWeylG(l) => Ok(weyl_character(d, l)?),
        AtomKind::NablaLevi { levi, highest } => {
            Ok(Module::levi_irreducible(d, levi, *highest)?.character())
        }
        AtomKind::Named(n) => Ok(n.ch.clone()),
        AtomKind::Dual(inner) => Ok(kind_char(d, inner)?.dual()),
    }
}

pub fn atom_char(d: &RootDatum, a: &Atom) -> Result<CharPoly> {
    Ok(kind_char(d, &a.kind)?.shift(a.twist))
}

pub fn char_of(d: &RootDatum, desc: &FiltDesc) -> Result<CharPoly> {
    let mut ch = Character::zero();
    for a in desc.atoms() {
        ch = &ch + &atom_char(d, a)?;
    }
    Ok(ch)
}

fn dual_kind(d: &RootDatum, k: &AtomKind) -> Result<AtomKind> {
    let refl = |root: usize, h: &Weight| -(d.reflect(root, h));
    let (w0, _, _) = d.longest_elements(&ParabolicSpec::borel())?;
    Ok(match k {
        AtomKind::Line => AtomKind::Line,
        AtomKind::DeltaRank1 { root, highest } => AtomKind::NablaRank1 { root: *root, highest: refl(*root, highest) },
        AtomKind::NablaRank1 { root, highest } => AtomKind::DeltaRank1 { root: *root, highest: refl(*root, highest) },
        AtomKind::SimpleRank1 { root, highest } => AtomKind::SimpleRank1 { root: *root, highest: refl(*root, highest) },
        AtomKind::WeylG(l) => AtomKind::DualWeylG(-w0.act(d, l)),
        AtomKind::DualWeylG(l) => AtomKind::WeylG(-w0.act(d, l)),
        AtomKind::NablaLevi { levi, highest } => {
            AtomKind::NablaLevi { levi: levi.clone(), highest: -lowest_in_levi(d, levi, highest)? }
        }
        AtomKind::Named(n) => AtomKind::Dual(Box::new(AtomKind::Named(n.clone()))),
        AtomKind::Dual(inner) => (**inner).clone(),
    })
}

pub fn dual_atom(d: &RootDatum, a: &Atom) -> Result<Atom> {
    Ok(Atom { kind: dual_kind(d, &a.kind)?, twist: -a.twist })
}

pub fn dual_desc(d: &RootDatum, desc: &FiltDesc) -> Result<FiltDesc> {
    let layers = desc
        .layers
        .iter()
        .rev()
        .map(|l| l.iter().map(|a| dual_atom(d, a)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(FiltDesc { layers, source: desc.source.clone() })
}

fn realize_recipe(d: &RootDatum, r: &Recipe) -> Result<Module> {
    let mut m = Module::zero(d.rank);
    let mut offsets = Vec::new();
    for s in &r.summands {
        offsets.push(m.dim());
        m = m.direct_sum(&Module::weyl(d, *s)?);
    }
    let end = |k: usize| offsets.get(k + 1).copied().unwrap_or(m.dim());
    let one_dim = |k: usize, w: &Weight| -> Result<usize> {
        let idx: Vec<usize> = (offsets[k]..end(k)).filter(|&i| m.weights[i] == *w).collect();
        match idx.as_slice() {
            [i] => Ok(*i),
            _ => Err(Error::Module(format!("weight {w} of summand {k} has multiplicity {}", idx.len()))),
        }
    };
    let mut gens: Vec<SparseVec> = Vec::new();
    for g in &r.gens {
        match g {
            Gen::WeightSpace { summand, weight } => {
                for i in offsets[*summand]..end(*summand) {
                    if m.weights[i] == *weight {
                        gens.push(vec![(i, 1)]);
                    }
                }
            }
            Gen::WeightSpacesExcept { summand, except } => {
                for i in offsets[*summand]..end(*summand) {
                    if !except.contains(&m.weights[i]) {
                        gens.push(vec![(i, 1)]);
                    }
                }
            }
            Gen::Combo(terms) => {
                let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
                for (k, w, root, pow) in terms {
                    let mut v: SparseVec = vec![(one_dim(*k, w)?, 1)];
                    let mut fact = 1i64;
                    for t in 1..=*pow {
                        v = m.f[*root].apply(&v);
                        fact *= t as i64;
                    }
                    let inv = finv(fint(fact));
                    for (i, x) in v {
                        let e = acc.entry(i).or_insert(0);
                        *e = crate::lie::fadd(*e, fmul(x, inv));
                    }
                }
                gens.push(acc.into_iter().filter(|(_, x)| *x != 0).collect());
            }
        }
    }
    let sub = m.generate(&gens, &r.levi)?;
    let mut out = match r.kind {
        RecipeKind::Quotient => m.quotient(&sub),
        RecipeKind::Sub => m.submodule(&sub),
    };
    for (i, e) in out.e.iter_mut().enumerate() {
        if !r.levi.contains(&i) {
            *e = None;
        }
    }
    Ok(out)
}

pub fn named(d: &RootDatum, label: &str, recipe: Recipe) -> Result<Atom> {
    let ch = realize_recipe(d, &recipe)?.character();
    Ok(Atom { kind: AtomKind::Named(Box::new(NamedModule { label: label.into(), recipe, ch })), twist: Weight::ZERO })
}

fn realize_kind(d: &RootDatum, k: &AtomKind) -> Result<Module> {
    match k {
        AtomKind::Line => Ok(Module::line(d.rank, Weight::ZERO)),
        AtomKind::DeltaRank1 { root, highest }
        | AtomKind::NablaRank1 { root, highest }
        | AtomKind::SimpleRank1 { root, highest } => Module::rank1(d, *root, *highest),
        AtomKind::WeylG(l) => Module::weyl(d, *l),
        AtomKind::DualWeylG(l) => {
            let (w0, _, _) = d.longest_elements(&ParabolicSpec::borel())?;
            Ok(Module::weyl(d, -w0.act(d, l))?.dual())
        }
        AtomKind::NablaLevi { levi, highest } => Module::levi_irreducible(d, levi, *highest),
        AtomKind::Named(n) => realize_recipe(d, &n.recipe),
        AtomKind::Dual(inner) => Ok(realize_kind(d, inner)?.dual()),
    }
}

pub fn realize_atom(d: &RootDatum, a: &Atom) -> Result<Module> {
    Ok(realize_kind(d, &a.kind)?.shift(a.twist))
}

/// Explicit module for a description with a single (split) layer.
pub fn realize(d: &RootDatum, desc: &FiltDesc) -> Result<Module> {
    if desc.layers.len() != 1 {
        return Err(Error::Module(format!("{} has {} layers and no canonical extension", desc.source, desc.layers.len())));
    }
    let mut m = Module::zero(d.rank);
    for a in &desc.layers[0] {
        m = m.direct_sum(&realize_atom(d, a)?);
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Socle,
    Kapranov,
    Quadric,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "socle" => Ok(Family::Socle),
            "kapranov" => Ok(Family::Kapranov),
            "quadric" => Ok(Family::Quadric),
            _ => Err(Error::UnsupportedFamily(s.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Socle => "socle",
            Family::Kapranov => "kapranov",
            Family::Quadric => "quadric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub family: Family,
    pub kind: RootType,
    pub parabolic: ParabolicSpec,
    /// Ordered as `W^P` by length then word.
    pub entries: Vec<(WeylElement, FiltDesc)>,
    pub speculative: bool,
    /// Entry replaced when passing to sheaves: `(w, description)`.
    pub sheaf_override: Option<(WeylElement, FiltDesc)>,
}

impl Catalog {
    pub fn datum(&self) -> RootDatum {
        RootDatum::of(self.kind)
    }

    pub fn entry(&self, w: &WeylElement) -> Option<&FiltDesc> {
        self.entries.iter().find(|(x, _)| x.mat == w.mat).map(|(_, f)| f)
    }

    /// The modules defining the sheaves `E_w`.
    pub fn sheaves(&self) -> Vec<(WeylElement, FiltDesc)> {
        self.entries
            .iter()
            .map(|(w, f)| match &self.sheaf_override {
                Some((x, g)) if x.mat == w.mat => (w.clone(), g.clone()),
                _ => (w.clone(), f.clone()),
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let d = self.datum();
        let entry = |w: &WeylElement, f: &FiltDesc| {
            json!({
                "w": w.name(),
                "source": f.source,
                "layers": f.layers.iter().map(|l| l.iter().map(|a| atom_json(a, d.rank)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        };
        json!({
            "version": 1,
            "family": self.family.name(),
            "type": self.kind.label(),
            "parabolic": self.parabolic.name(),
            "speculative": self.speculative,
            "entries": self.entries.iter().map(|(w, f)| entry(w, f)).collect::<Vec<_>>(),
            "sheaf_override": self.sheaf_override.as_ref().map(|(w, f)| entry(w, f)),
        })
    }
}

fn kind_json(k: &AtomKind, r: usize) -> Value {
    match k {
        AtomKind::Line => json!({"atom": "line"}),
        AtomKind::DeltaRank1 { root, highest } => json!({"atom": "delta1", "root": root + 1, "highest": highest.to_vec(r)}),
        AtomKind::NablaRank1 { root, highest } => json!({"atom": "nabla1", "root": root + 1, "highest": highest.to_vec(r)}),
        AtomKind::SimpleRank1 { root, highest } => json!({"atom": "simple1", "root": root + 1, "highest": highest.to_vec(r)}),
        AtomKind::WeylG(l) => json!({"atom": "weyl", "highest": l.to_vec(r)}),
        AtomKind::DualWeylG(l) => json!({"atom": "dual_weyl", "highest": l.to_vec(r)}),
        AtomKind::NablaLevi { levi, highest } => json!({
            "atom": "nabla_levi",
            "levi": levi.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "highest": highest.to_vec(r),
        }),
        AtomKind::Named(n) => json!({"atom": "named", "label": n.label, "dim": n.ch.total()}),
        AtomKind::Dual(inner) => json!({"atom": "dual", "of": kind_json(inner, r)}),
    }
}

pub fn atom_json(a: &Atom, rank: usize) -> Value {
    let mut v = kind_json(&a.kind, rank);
    v["twist"] = json!(a.twist.to_vec(rank));
    v
}

fn w2(a: i64, b: i64) -> Weight {
    Weight::new(&[a, b])
}

fn element(d: &RootDatum, word: &str) -> Result<WeylElement> {
    d.find_element(&WeylElement::parse_word(word)?)
}

fn assemble(
    d: &RootDatum,
    family: Family,
    parabolic: ParabolicSpec,
    list: Vec<(&str, FiltDesc)>,
) -> Result<Catalog> {
    let reps = d.min_coset_reps(&parabolic)?;
    let mut found: Vec<(WeylElement, FiltDesc)> = Vec::new();
    for (word, f) in list {
        let w = element(d, word)?;
        if !reps.iter().any(|r| r.mat == w.mat) {
            return Err(Error::Invalid(format!("{word} is not in W^P for {}", parabolic.name())));
        }
        found.push((w, f));
    }
    let mut entries = Vec::new();
    for r in &reps {
        let (_, f) = found
            .iter()
            .find(|(w, _)| w.mat == r.mat)
            .ok_or_else(|| Error::Invalid(format!("no entry for {}", r.name())))?;
        entries.push((r.clone(), f.clone()));
    }
    Ok(Catalog { family, kind: d.kind, parabolic, entries, speculative: false, sheaf_override: None })
}

/// Named modules of type `G2` (and `B2` where noted) used by the catalogs.
pub mod g2 {
    use super::*;

    pub fn omega1() -> Weight {
        w2(1, 0)
    }
    pub fn omega2() -> Weight {
        w2(0, 1)
    }
    pub fn rho() -> Weight {
        w2(1, 1)
    }

    /// `Delta(w1) / Dist(P_a2)(Delta(w1)_{-a1})`.
    pub fn q_a2_v3(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "D(w1)/Dist(P_a2)(D(w1)_{-a1})",
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![omega1()],
                gens: vec![Gen::WeightSpace { summand: 0, weight: -d.simple_root(0) }],
                levi: vec![1],
            },
        )
    }

    /// `Dist(P_a2)(Delta(w1)_{-a1})`.
    pub fn dist_a2_v3(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "Dist(P_a2)(D(w1)_{-a1})",
            Recipe {
                kind: RecipeKind::Sub,
                summands: vec![omega1()],
                gens: vec![Gen::WeightSpace { summand: 0, weight: -d.simple_root(0) }],
                levi: vec![1],
            },
        )
    }

    /// `ker(Delta(w1) ->> w1)`, for `G2` or `B2`.
    pub fn ker_top(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "ker(D(w1)->>w1)",
            Recipe {
                kind: RecipeKind::Sub,
                summands: vec![omega1()],
                gens: vec![Gen::WeightSpacesExcept { summand: 0, except: vec![omega1()] }],
                levi: vec![],
            },
        )
    }

    /// `ker(Delta(w1) ->> Delta^a1(w1))`.
    pub fn ker_a1(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "ker(D(w1)->>D^a1(w1))",
            Recipe {
                kind: RecipeKind::Sub,
                summands: vec![omega1()],
                gens: vec![Gen::WeightSpacesExcept { summand: 0, except: vec![omega1(), omega1() - d.simple_root(0)] }],
                levi: vec![0],
            },
        )
    }

    /// `Delta(w1) / Delta^a1(w1 - w2)`.
    pub fn q_a1_low(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "D(w1)/D^a1(w1-w2)",
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![omega1()],
                gens: vec![Gen::WeightSpace { summand: 0, weight: omega1() - omega2() }],
                levi: vec![0],
            },
        )
    }

    /// `Delta(w_i) / (-w_i)`, for `G2` or `B2`.
    pub fn q_lowest(d: &RootDatum, i: usize) -> Result<Atom> {
        let w = Weight::unit(i);
        named(
            d,
            &format!("D(w{})/(-w{})", i + 1, i + 1),
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![w],
                gens: vec![Gen::WeightSpace { summand: 0, weight: -w }],
                levi: vec![],
            },
        )
    }

    /// `(Delta(w2) + Delta(w1)) / Dist(P_a1)(k(v2+v1) + Delta(w2)_{-a2})`.
    pub fn q_sum_a1(d: &RootDatum) -> Result<Atom> {
        let a1 = d.simple_root(0);
        named(
            d,
            "(D(w2)+D(w1))/Dist(P_a1)(k(v2+v1)+D(w2)_{-a2})",
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![omega2(), omega1()],
                gens: vec![
                    Gen::Combo(vec![(0, a1, 0, 0), (1, a1, 0, 0)]),
                    Gen::WeightSpace { summand: 0, weight: -d.simple_root(1) },
                ],
                levi: vec![0],
            },
        )
    }

    fn v43() -> Gen {
        let a1 = w2(2, -1);
        Gen::Combo(vec![(0, a1, 0, 2), (1, a1, 0, 2)])
    }

    /// `(Delta(w2) + Delta(w1)) / Dist(P_a2)(k(v4+v3) + Delta(w2)_{-3w1+w2})`.
    pub fn q_sum_a2(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "(D(w2)+D(w1))/Dist(P_a2)(k(v4+v3)+D(w2)_{-3w1+w2})",
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![omega2(), omega1()],
                gens: vec![v43(), Gen::WeightSpace { summand: 0, weight: w2(-3, 1) }],
                levi: vec![1],
            },
        )
    }

    /// `Dist(P_a2)(v4+v3)` inside `Delta(w2) + Delta(w1)`.
    pub fn dist_v43(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "Dist(P_a2)(v4+v3)",
            Recipe { kind: RecipeKind::Sub, summands: vec![omega2(), omega1()], gens: vec![v43()], levi: vec![1] },
        )
    }

    /// `Dist(P_a1)(Delta(w2)_{-a2})`.
    pub fn dist_a1_low(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "Dist(P_a1)(D(w2)_{-a2})",
            Recipe {
                kind: RecipeKind::Sub,
                summands: vec![omega2()],
                gens: vec![Gen::WeightSpace { summand: 0, weight: -d.simple_root(1) }],
                levi: vec![0],
            },
        )
    }

    /// `Delta(w2) / Dist(P_a1)(Delta(w2)_{-a2})`.
    pub fn q_a1_low2(d: &RootDatum) -> Result<Atom> {
        named(
            d,
            "D(w2)/Dist(P_a1)(D(w2)_{-a2})",
            Recipe {
                kind: RecipeKind::Quotient,
                summands: vec![omega2()],
                gens: vec![Gen::WeightSpace { summand: 0, weight: -d.simple_root(1) }],
                levi: vec![0],
            },
        )
    }
}

/// The catalog of a supported `(type, P, family)`.
pub fn catalog(kind: RootType, p: &ParabolicSpec, family: Family) -> Result<Catalog> {
    match family {
        Family::Socle => socle_catalog(kind, p),
        Family::Kapranov => {
            if kind != RootType::A2 || !p.subset.is_empty() {
                return Err(Error::UnsupportedFamily(format!("kapranov for {} {}", kind.label(), p.name())));
            }
            kapranov_a2()
        }
        Family::Quadric => {
            let n = match kind {
                RootType::Bk(k) if k >= 2 && p.subset == (1..k).collect::<Vec<_>>() => 2 * k - 1,
                RootType::Dk(k) if p.subset == (1..k).collect::<Vec<_>>() => 2 * k - 2,
                _ => return Err(Error::UnsupportedFamily(format!("quadric for {} {}", kind.label(), p.name()))),
            };
            quadric_catalog(n)
        }
    }
}

/// Every `(type, P)` with a catalog in the given family.
pub fn supported(family: Family) -> Vec<(RootType, ParabolicSpec)> {
    let pa = |i: usize| ParabolicSpec::new(vec![i]);
    match family {
        Family::Socle => vec![
            (RootType::A1, ParabolicSpec::borel()),
            (RootType::A2, pa(0)),
            (RootType::A2, pa(1)),
            (RootType::A2, ParabolicSpec::borel()),
            (RootType::B2, pa(1)),
            (RootType::B2, pa(0)),
            (RootType::B2, ParabolicSpec::borel()),
            (RootType::G2, pa(1)),
            (RootType::G2, pa(0)),
            (RootType::G2, ParabolicSpec::borel()),
        ],
        Family::Kapranov => vec![(RootType::A2, ParabolicSpec::borel())],
        Family::Quadric => (3..=5).map(quadric_type).collect(),
    }
}

fn socle_catalog(kind: RootType, p: &ParabolicSpec) -> Result<Catalog> {
    let d = RootDatum::of(kind);
    let w = |c: [i64; 2]| Weight::new(&c);
    let src = |s: &str| s.to_string();
    let one = |a: Atom, s: &str| FiltDesc::single(a, s);
    let unsupported = || Error::UnsupportedFamily(format!("socle catalog for {} {}", kind.label(), p.name()));
    let (list, speculative, over): (Vec<(&str, FiltDesc)>, bool, Option<(&str, FiltDesc)>) = match (kind, p.subset.as_slice()) {
        (RootType::A1, []) => {
            let s = src("SL2, P = B");
            (vec![("e", one(line(Weight::ZERO), &s)), ("s1", one(line(Weight::new(&[-1])), &s))], false, None)
        }
        (RootType::A2, [0]) => {
            let s = "SL3, P = P_a1";
            (
                vec![("e", one(line(w([0, 0])), s)), ("s2", one(line(w([0, -1])), s)), ("s1s2", one(line(w([0, -2])), s))],
                false,
                None,
            )
        }
        (RootType::A2, [1]) => {
            let s = "SL3, P = P_a2 (mirror of P_a1)";
            (
                vec![("e", one(line(w([0, 0])), s)), ("s1", one(line(w([-1, 0])), s)), ("s2s1", one(line(w([-2, 0])), s))],
                false,
                None,
            )
        }
        (RootType::A2, []) => {
            let s = "SL3, P = B";
            let r = w([1, 1]);
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s1", one(line(w([-1, 0])), s)),
                    ("s2", one(line(w([0, -1])), s)),
                    ("s1s2", one(delta1(1, w([0, 1])).twisted(-r), s)),
                    ("s2s1", one(delta1(0, w([1, 0])).twisted(-r), s)),
                    ("s1s2s1", one(line(-r), s)),
                ],
                false,
                None,
            )
        }
        (RootType::B2, [1]) => {
            let s = "Sp4, P = P_a2";
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s1", one(line(w([-1, 0])), s)),
                    ("s2s1", one(line(w([-2, 0])), s)),
                    ("s1s2s1", one(line(w([-3, 0])), s)),
                ],
                false,
                None,
            )
        }
        (RootType::B2, [0]) => {
            let s = "Sp4, P = P_a1";
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s2", one(line(w([0, -1])), s)),
                    ("s1s2", one(delta1(0, w([1, -2])), s)),
                    ("s2s1s2", one(line(w([0, -2])), s)),
                ],
                false,
                None,
            )
        }
        (RootType::B2, []) => {
            let s = "Sp4, P = B";
            let r = w([1, 1]);
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s1", one(line(w([-1, 0])), s)),
                    ("s2", one(line(w([0, -1])), s)),
                    ("s1s2", one(g2::ker_top(&d)?.twisted(w([0, -1])), s)),
                    ("s2s1", one(delta1(0, w([1, 0])).twisted(-r), s)),
                    ("s1s2s1", one(g2::q_lowest(&d, 1)?.twisted(-r), s)),
                    ("s2s1s2", one(g2::q_lowest(&d, 0)?.twisted(-r), s)),
                    ("s1s2s1s2", one(line(-r), s)),
                ],
                false,
                None,
            )
        }
        (RootType::G2, [1]) => {
            let s = "G2, P = P_a2";
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s1", one(line(w([-1, 0])), s)),
                    ("s2s1", one(line(w([-2, 0])), s)),
                    ("s1s2s1", one(g2::q_a2_v3(&d)?.twisted(w([-3, 0])), s)),
                    ("s2s1s2s1", one(line(w([-3, 0])), s)),
                    ("s1s2s1s2s1", one(line(w([-4, 0])), s)),
                ],
                false,
                None,
            )
        }
        (RootType::G2, [0]) => {
            let s = "G2, P = P_a1";
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s2", one(line(w([0, -1])), s)),
                    ("s1s2", one(g2::ker_a1(&d)?.twisted(w([0, -1])), s)),
                    ("s2s1s2", one(delta1(0, w([1, -2])), s)),
                    ("s1s2s1s2", one(g2::q_a1_low(&d)?.twisted(w([0, -2])), s)),
                    ("s2s1s2s1s2", one(line(w([0, -2])), s)),
                ],
                false,
                None,
            )
        }
        (RootType::G2, []) => {
            let s = "G2, P = B (speculative)";
            let r = w([1, 1]);
            let top = FiltDesc::sum(vec![line(w([0, 0])), g2::q_lowest(&d, 1)?].into_iter().map(|a| a.twisted(-r)).collect(), s);
            (
                vec![
                    ("e", one(line(w([0, 0])), s)),
                    ("s1", one(line(w([-1, 0])), s)),
                    ("s2", one(line(w([0, -1])), s)),
                    ("s2s1", one(delta1(0, w([1, 0])).twisted(-r), s)),
                    ("s1s2", one(g2::ker_top(&d)?.twisted(w([0, -1])), s)),
                    ("s2s1s2", one(g2::q_a2_v3(&d)?.twisted(-r), s)),
                    ("s1s2s1", one(g2::q_sum_a1(&d)?.twisted(-r), s)),
                    ("s1s2s1s2", one(g2::q_sum_a2(&d)?.twisted(-r), s)),
                    ("s2s1s2s1", one(g2::q_a1_low(&d)?.twisted(-r), s)),
                    ("s2s1s2s1s2", one(g2::q_lowest(&d, 0)?.twisted(-r), s)),
                    ("s1s2s1s2s1", top),
                    ("s1s2s1s2s1s2", one(line(-r), s)),
                ],
                true,
                Some(("s1s2s1s2s1", one(g2::q_lowest(&d, 1)?.twisted(-r), "G2, P = B, sheaf substitution"))),
            )
        }
        _ => return Err(unsupported()),
    };
    let mut cat = assemble(&d, Family::Socle, p.clone(), list)?;
    cat.speculative = speculative;
    if let Some((word, f)) = over {
        cat.sheaf_override = Some((element(&d, word)?, f));
    }
    Ok(cat)
}

/// The complete strongly exceptional collection of `SL3/B` in its own
/// indexing.
pub fn kapranov_a2() -> Result<Catalog> {
    let d = RootDatum::of(RootType::A2);
    let w = |a, b| w2(a, b);
    let s = "SL3/B Kapranov";
    let one = |a: Atom| FiltDesc::single(a, s);
    assemble(
        &d,
        Family::Kapranov,
        ParabolicSpec::borel(),
        vec![
            ("e", one(line(w(-1, -1)))),
            ("s1", one(nabla1(1, w(0, 1)).twisted(w(-1, -1)))),
            ("s2s1", one(line(w(0, -1)))),
            ("s2", one(line(w(-1, 0)))),
            ("s1s2", one(nabla1(1, w(0, 1)).twisted(w(-1, 0)))),
            ("s2s1s2", one(line(w(0, 0)))),
        ],
    )
}

/// Root type of the group acting on the `n`-dimensional quadric.
pub fn quadric_type(n: usize) -> (RootType, ParabolicSpec) {
    let k = n / 2 + 1;
    let kind = if n % 2 == 1 { RootType::Bk(k) } else { RootType::Dk(k) };
    (kind, ParabolicSpec::new((1..k).collect()))
}

fn word(letters: &[usize]) -> String {
    if letters.is_empty() {
        "e".into()
    } else {
        letters.iter().map(|i| format!("s{i}")).collect()
    }
}

/// Sheaves on the quadric of dimension `n >= 3`.
pub fn quadric_catalog(n: usize) -> Result<Catalog> {
    if n < 3 || n / 2 + 1 > crate::rootsys::MAX_RANK {
        return Err(Error::UnsupportedFamily(format!("quadric of dimension {n}")));
    }
    let (kind, p) = quadric_type(n);
    let d = RootDatum::new(kind)?;
    let m = n / 2;
    let levi: Vec<usize> = p.subset.clone();
    let o = |i: i64| (-i) * Weight::unit(0);
    let s = format!("quadric Q^{n}");
    let mut list: Vec<(String, FiltDesc)> = Vec::new();
    let spin = |hi: usize, i: i64| -> Atom {
        Atom { kind: AtomKind::NablaLevi { levi: levi.clone(), highest: Weight::unit(hi - 1) }, twist: o(i) }
    };
    if n % 2 == 1 {
        // s_i ... s_1, i <= m+1, then s_j ... s_{m+1} ... s_1, j = m..1
        for i in 0..=m {
            let letters: Vec<usize> = (1..=i).rev().collect();
            list.push((word(&letters), FiltDesc::single(line(o(i as i64)), &s)));
        }
        let down: Vec<usize> = (1..=m + 1).rev().collect();
        list.push((word(&down), FiltDesc::single(spin(m + 1, m as i64 + 1), &s)));
        for (t, j) in (1..=m).rev().enumerate() {
            let mut letters: Vec<usize> = (j..=m).collect();
            letters.extend(&down);
            list.push((word(&letters), FiltDesc::single(line(o(m as i64 + 1 + t as i64)), &s)));
        }
    } else {
        for i in 0..m {
            let letters: Vec<usize> = (1..=i).rev().collect();
            list.push((word(&letters), FiltDesc::single(line(o(i as i64)), &s)));
        }
        let tail: Vec<usize> = (1..m).rev().collect();
        let mut a: Vec<usize> = vec![m];
        a.extend(&tail);
        list.push((word(&a), FiltDesc::single(spin(m + 1, m as i64), &s)));
        let mut b: Vec<usize> = vec![m + 1];
        b.extend(&tail);
        list.push((word(&b), FiltDesc::single(spin(m, m as i64), &s)));
        for (t, j) in (1..=m).rev().enumerate() {
            let mut letters: Vec<usize> = (j..=m).collect();
            letters.push(m + 1);
            letters.extend(&tail);
            list.push((word(&letters), FiltDesc::single(line(o(m as i64 + t as i64)), &s)));
        }
    }
    let list = list.iter().map(|(w, f)| (w.as_str(), f.clone())).collect();
    assemble(&d, Family::Quadric, p, list)
}

/// Named filtration boxes, each with several guises of one module.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub guises: Vec<FiltDesc>,
}

pub fn named_fixtures(kind: RootType) -> Result<Vec<Fixture>> {
    if kind != RootType::G2 {
        return Err(Error::UnsupportedFamily(format!("fixtures for {}", kind.label())));
    }
    let d = RootDatum::of(kind);
    let w = |a, b| w2(a, b);
    let l = |a, b| line(w(a, b));
    let da2 = |a, b| delta1(1, w(a, b));
    let da1 = |a, b| delta1(0, w(a, b));
    let bx = |layers: Vec<Vec<Atom>>, s: &str| FiltDesc::boxed(layers, s);
    let fx = |name: &str, guises: Vec<FiltDesc>| Fixture { name: name.into(), guises };
    Ok(vec![
        fx(
            "D(w1) as P_a2-module",
            vec![
                bx(vec![vec![l(-1, 0)], vec![da2(-2, 1)], vec![l(0, 0)], vec![da2(-1, 1)], vec![l(1, 0)]], "box"),
                FiltDesc::single(weyl(w(1, 0)), "Weyl module"),
            ],
        ),
        fx(
            "D(w2) as P_a2-module",
            vec![
                bx(
                    vec![
                        vec![da2(-3, 1)],
                        vec![l(-1, 0)],
                        vec![da2(-2, 1)],
                        vec![da2(-3, 2), l(0, 0)],
                        vec![da2(-1, 1)],
                        vec![l(1, 0)],
                        vec![da2(0, 1)],
                    ],
                    "box",
                ),
                FiltDesc::single(weyl(w(0, 1)), "Weyl module"),
            ],
        ),
        fx(
            "Dist(P_a2)(v3)",
            vec![bx(vec![vec![l(-1, 0)], vec![da2(-2, 1)]], "box"), FiltDesc::single(g2::dist_a2_v3(&d)?, "explicit")],
        ),
        fx(
            "D(w1)/Dist(P_a2)(v3)",
            vec![
                bx(vec![vec![l(0, 0)], vec![da2(-1, 1)], vec![l(1, 0)]], "box"),
                FiltDesc::single(g2::q_a2_v3(&d)?, "explicit"),
            ],
        ),
        fx(
            "D(w2)/(-w2) as B-module",
            vec![
                bx(
                    vec![
                        vec![da1(3, 0).twisted(w(0, -2))],
                        vec![da1(2, 0).twisted(w(0, -1)), l(0, 0)],
                        vec![da1(3, 0).twisted(w(0, -1))],
                        vec![l(0, 1)],
                    ],
                    "box",
                ),
                FiltDesc::single(g2::q_lowest(&d, 1)?, "explicit"),
            ],
        ),
        fx(
            "Dist(P_a1)(D(w2)_{-a2})",
            vec![bx(vec![vec![l(0, -1)], vec![da1(3, -2)]], "box"), FiltDesc::single(g2::dist_a1_low(&d)?, "explicit")],
        ),
        fx(
            "D(w2)/Dist(P_a1)(D(w2)_{-a2})",
            vec![
                bx(
                    vec![vec![l(-2, 1)], vec![da2(0, 1).twisted(w(-3, 1))], vec![g2::ker_top(&d)?.twisted(w(1, 0))]],
                    "box",
                ),
                FiltDesc::single(g2::q_a1_low2(&d)?, "explicit"),
            ],
        ),
        fx(
            "Dist(P_a2)(v4+v3)",
            vec![
                bx(
                    vec![vec![da2(0, 1).twisted(w(-3, 0))], vec![l(-1, 0)], vec![da2(0, 1).twisted(w(-2, 0))]],
                    "P_a2-box",
                ),
                bx(vec![vec![l(0, -1)], vec![da1(2, 0).twisted(w(-1, -1))], vec![l(-2, 1)]], "B-box"),
                FiltDesc::single(g2::dist_v43(&d)?, "explicit"),
            ],
        ),
        fx(
            "ker(D(w1)->>D^a1(w1))",
            vec![bx(vec![vec![da1(1, -1)], vec![da1(2, -1)]], "box"), FiltDesc::single(g2::ker_a1(&d)?, "explicit")],
        ),
    ])
}

/// Multiplicity space of `L(epsilon_w)` in socle layer `l(w)+1` of a
/// table at `0`, untwisted by Frobenius.
pub fn soc1_from_table(g: &Geometry, t: &SocleTable, w: &WeylElement) -> CharPoly {
    let eps = epsilon(g, w);
    let mut ch = Character::zero();
    for (c, m) in t.layer(w.len() as i64 + 1) {
        if restricted_part(g, &c) != eps {
            continue;
        }
        let mut mu = Weight::ZERO;
        for i in 0..g.rank() {
            mu.0[i] = (c.0[i] - eps.0[i]) / g.p;
        }
        ch.add_term(mu, m);
    }
    ch
}

/// Are the classes `epsilon_w`, `w` in `W^P`, pairwise distinct?
pub fn classes_separated(g: &Geometry, p: &ParabolicSpec) -> Result<bool> {
    let reps = g.datum.min_coset_reps(p)?;
    let mut seen: Vec<Weight> = reps.iter().map(|w| epsilon(g, w)).collect();
    seen.sort();
    seen.dedup();
    Ok(seen.len() == reps.len())
}

/// For each entry: does its character match the socle table?
pub fn soc1_check(kl: &KlModule, cat: &Catalog) -> Result<Vec<(String, bool)>> {
    let g = &kl.geometry;
    if !classes_separated(g, &cat.parabolic)? {
        return Err(Error::Invalid(format!("classes epsilon_w collide at p = {}", g.p)));
    }
    let t = socle_table(kl, &cat.parabolic, &Weight::ZERO)?;
    cat.entries
        .iter()
        .map(|(w, f)| Ok((w.name(), soc1_from_table(g, &t, w) == char_of(&g.datum, f)?)))
        .collect()
}
