//! Cohomology of homogeneous bundles on `G/B` over characteristic 0,
//! `Hom`/`Ext` between catalog sheaves, and the checks built on them.

pub mod ledger;

use crate::charring::{weyl_character, Character};
use crate::error::Result;
use crate::lie::{bott, cohomology, Module, RootVectors};
use crate::modcat::{atom_char, dual_atom, realize_atom, Catalog, FiltDesc};
use crate::rootsys::{RootDatum, Weight};
use crate::CharPoly;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Degree -> dominant weight -> multiplicity.
pub type Isotypic = BTreeMap<usize, BTreeMap<Weight, i64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Determinacy {
    Exact,
    EulerOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomProfile {
    /// Meaningful only when exact.
    pub parts: Isotypic,
    pub determinacy: Determinacy,
    /// Alternating sum, as dominant weight -> signed multiplicity.
    pub euler: BTreeMap<Weight, i64>,
}

impl CohomProfile {
    pub fn is_exact(&self) -> bool {
        self.determinacy == Determinacy::Exact
    }

    pub fn degree_character(&self, d: &RootDatum, i: usize) -> Result<CharPoly> {
        iso_character(d, self.parts.get(&i))
    }

    pub fn euler_character(&self, d: &RootDatum) -> Result<CharPoly> {
        iso_character(d, Some(&self.euler))
    }

    pub fn degree_dim(&self, d: &RootDatum, i: usize) -> Result<i64> {
        let mut s = 0;
        for (l, m) in self.parts.get(&i).into_iter().flatten() {
            s += m * d.weyl_dim(l)? as i64;
        }
        Ok(s)
    }

    pub fn euler_dim(&self, d: &RootDatum) -> Result<i64> {
        let mut s = 0;
        for (l, m) in &self.euler {
            s += m * d.weyl_dim(l)? as i64;
        }
        Ok(s)
    }

    pub fn nonzero_degrees(&self) -> Vec<usize> {
        self.parts.iter().filter(|(_, p)| p.values().any(|m| *m != 0)).map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self, d: &RootDatum) -> Value {
        let iso = |p: &BTreeMap<Weight, i64>| -> Value {
            p.iter().map(|(l, m)| json!({"highest": l.to_vec(d.rank), "mult": m})).collect()
        };
        json!({
            "determinacy": if self.is_exact() { "exact" } else { "euler-only" },
            "degrees": self.parts.iter().map(|(k, p)| json!({"degree": k, "summands": iso(p)})).collect::<Vec<_>>(),
            "euler": iso(&self.euler),
        })
    }
}

fn iso_character(d: &RootDatum, p: Option<&BTreeMap<Weight, i64>>) -> Result<CharPoly> {
    let mut ch = Character::zero();
    for (l, m) in p.into_iter().flatten() {
        ch = &ch + &weyl_character(d, l)?.scale(*m);
    }
    Ok(ch)
}

/// Euler characteristic of `L(M)` from the character of `M` alone.
pub fn euler_of_character(d: &RootDatum, ch: &CharPoly) -> BTreeMap<Weight, i64> {
    let mut out = BTreeMap::new();
    for (mu, c) in ch.iter() {
        if let Some((k, lam)) = bott(d, mu) {
            *out.entry(lam).or_insert(0) += if k % 2 == 0 { *c } else { -*c };
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

pub fn euler_dim_of_character(d: &RootDatum, ch: &CharPoly) -> Result<i64> {
    let mut s = 0;
    for (l, m) in euler_of_character(d, ch) {
        s += m * d.weyl_dim(&l)? as i64;
    }
    Ok(s)
}

/// Bott's theorem for one line bundle.
pub fn bott_line(d: &RootDatum, lambda: &Weight) -> CohomProfile {
    let mut parts = Isotypic::new();
    let mut euler = BTreeMap::new();
    if let Some((k, l)) = bott(d, lambda) {
        parts.insert(k, BTreeMap::from([(l, 1)]));
        euler.insert(l, if k % 2 == 0 { 1 } else { -1 });
    }
    CohomProfile { parts, determinacy: Determinacy::Exact, euler }
}

/// Cohomology of the bundle of an explicit `B`-module.
pub fn cohom_module(d: &RootDatum, rv: &RootVectors, m: &Module) -> Result<CohomProfile> {
    let h = cohomology(d, rv, m)?;
    let euler = euler_of_character(d, &m.character());
    let mut parts = h.parts;
    parts.retain(|_, p| {
        p.retain(|_, x| *x != 0);
        !p.is_empty()
    });
    Ok(CohomProfile {
        parts,
        determinacy: if h.certified { Determinacy::Exact } else { Determinacy::EulerOnly },
        euler,
    })
}

/// Combine a submodule profile with a quotient profile along the long
/// exact sequence, exact only when every connecting map is forced to vanish.
pub fn extend(sub: &CohomProfile, quot: &CohomProfile) -> CohomProfile {
    let mut euler = sub.euler.clone();
    for (l, m) in &quot.euler {
        *euler.entry(*l).or_insert(0) += m;
    }
    euler.retain(|_, m| *m != 0);
    let forced = sub.is_exact()
        && quot.is_exact()
        && quot.parts.iter().all(|(i, q)| {
            sub.parts.get(&(i + 1)).is_none_or(|r| q.keys().all(|l| r.get(l).is_none_or(|m| *m == 0)))
        });
    let mut parts = sub.parts.clone();
    for (i, q) in &quot.parts {
        let e = parts.entry(*i).or_default();
        for (l, m) in q {
            *e.entry(*l).or_insert(0) += m;
        }
    }
    CohomProfile { parts, determinacy: if forced { Determinacy::Exact } else { Determinacy::EulerOnly }, euler }
}

/// Cohomology of a module given by its layers, bottom to top.
pub fn cohom_layers(d: &RootDatum, rv: &RootVectors, layers: &[Module]) -> Result<CohomProfile> {
    let mut acc: Option<CohomProfile> = None;
    for m in layers {
        let h = cohom_module(d, rv, m)?;
        acc = Some(match acc {
            None => h,
            Some(a) => extend(&a, &h),
        });
    }
    Ok(acc.unwrap_or(CohomProfile { parts: Isotypic::new(), determinacy: Determinacy::Exact, euler: BTreeMap::new() }))
}

fn layer_module(d: &RootDatum, atoms: &[crate::modcat::Atom]) -> Result<Module> {
    let mut m = Module::zero(d.rank);
    for a in atoms {
        m = m.direct_sum(&realize_atom(d, a)?);
    }
    Ok(m)
}

pub fn cohom_filtered(d: &RootDatum, rv: &RootVectors, desc: &FiltDesc) -> Result<CohomProfile> {
    let layers = desc.layers.iter().map(|l| layer_module(d, l)).collect::<Result<Vec<_>>>()?;
    cohom_layers(d, rv, &layers)
}

/// `Ext^*(L(x), L(y)) = H^*(G/B, L(x^* (x) y))`, filtered by total layer
/// index.
pub fn hom_ext(d: &RootDatum, rv: &RootVectors, x: &FiltDesc, y: &FiltDesc) -> Result<CohomProfile> {
    let xd: Vec<Module> = x
        .layers
        .iter()
        .rev()
        .map(|l| layer_module(d, &l.iter().map(|a| dual_atom(d, a)).collect::<Result<Vec<_>>>()?))
        .collect::<Result<_>>()?;
    let ym: Vec<Module> = y.layers.iter().map(|l| layer_module(d, l)).collect::<Result<_>>()?;
    let mut layers = Vec::new();
    for k in 0..(xd.len() + ym.len() - 1) {
        let mut m = Module::zero(d.rank);
        for (i, a) in xd.iter().enumerate() {
            if k >= i && k - i < ym.len() {
                m = m.direct_sum(&a.tensor(&ym[k - i]));
            }
        }
        layers.push(m);
    }
    cohom_layers(d, rv, &layers)
}

/// Character of `x^* (x) y`.
pub fn hom_character(d: &RootDatum, x: &FiltDesc, y: &FiltDesc) -> Result<CharPoly> {
    let mut cx = Character::zero();
    for a in x.atoms() {
        cx = &cx + &atom_char(d, a)?;
    }
    let mut cy = Character::zero();
    for a in y.atoms() {
        cy = &cy + &atom_char(d, a)?;
    }
    Ok(&cx.dual() * &cy)
}

/// Derived direct image along `G/B -> G/P_alpha` of a line bundle:
/// `(degree, highest weight of the rank-one module)`, or `None` when zero.
pub fn pushforward_line(d: &RootDatum, root: usize, lambda: &Weight) -> Option<(usize, Weight)> {
    let n = lambda.0[root];
    match n {
        n if n >= 0 => Some((0, *lambda)),
        -1 => None,
        _ => Some((1, d.reflect(root, &(*lambda + d.rho)) - d.rho)),
    }
}

/// All pairwise profiles of the sheaves of a catalog, in `W^P` order.
pub fn ext_table(cat: &Catalog) -> Result<Vec<Vec<CohomProfile>>> {
    let d = cat.datum();
    let rv = RootVectors::new(&d)?;
    let sheaves = cat.sheaves();
    let n = sheaves.len();
    let cells: Vec<CohomProfile> = (0..n * n)
        .into_par_iter()
        .map(|k| hom_ext(&d, &rv, &sheaves[k / n].1, &sheaves[k % n].1))
        .collect::<Result<_>>()?;
    Ok(cells.chunks(n).map(|c| c.to_vec()).collect())
}

#[derive(Clone, Debug)]
pub struct PosetReport {
    pub elements: Vec<String>,
    pub end_is_k: Vec<bool>,
    pub hom_nonzero: Vec<Vec<bool>>,
    pub higher_zero: Vec<Vec<bool>>,
    /// `x > y` in the Bruhat order.
    pub greater: Vec<Vec<bool>>,
    pub exact: bool,
    /// Euler characteristic of each profile equals the one read off the
    /// character by Bott's theorem.
    pub euler_consistent: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl PosetReport {
    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "end_is_k": self.end_is_k,
            "hom_nonzero": self.hom_nonzero,
            "higher_ext_zero": self.higher_zero,
            "bruhat_greater": self.greater,
            "exact": self.exact,
            "euler_consistent_pairs": self.euler_consistent,
            "pass": self.pass,
            "failures": self.failures,
        })
    }
}

pub fn poset_verify(cat: &Catalog) -> Result<PosetReport> {
    let d = cat.datum();
    let sheaves = cat.sheaves();
    let table = ext_table(cat)?;
    poset_report(&d, &sheaves, &table)
}

pub fn poset_report(
    d: &RootDatum,
    sheaves: &[(crate::rootsys::WeylElement, FiltDesc)],
    table: &[Vec<CohomProfile>],
) -> Result<PosetReport> {
    let n = sheaves.len();
    let names: Vec<String> = sheaves.iter().map(|(w, _)| w.name()).collect();
    let mut failures = Vec::new();
    let mut end_is_k = Vec::new();
    let mut hom = vec![vec![false; n]; n];
    let mut higher = vec![vec![false; n]; n];
    let mut greater = vec![vec![false; n]; n];
    let mut exact = true;
    let mut consistent = 0;
    let trivial = BTreeMap::from([(Weight::ZERO, 1)]);
    for x in 0..n {
        for y in 0..n {
            let h = &table[x][y];
            exact &= h.is_exact();
            let ch = hom_character(d, &sheaves[x].1, &sheaves[y].1)?;
            if euler_of_character(d, &ch) == h.euler {
                consistent += 1;
            } else {
                failures.push(format!("Euler mismatch at ({}, {})", names[x], names[y]));
            }
            hom[x][y] = h.parts.get(&0).is_some_and(|p| !p.is_empty());
            higher[x][y] = h.parts.keys().all(|k| *k == 0);
            let (wx, wy) = (&sheaves[x].0, &sheaves[y].0);
            greater[x][y] = x != y && d.bruhat_leq(wy, wx);
            if x != y && hom[x][y] != greater[x][y] {
                failures.push(format!(
                    "Hom({}, {}) {} but {} > {} is {}",
                    names[x], names[y], if hom[x][y] { "nonzero" } else { "zero" }, names[x], names[y], greater[x][y]
                ));
            }
            if !higher[x][y] {
                failures.push(format!("Ext^{:?}({}, {}) nonzero", h.nonzero_degrees(), names[x], names[y]));
            }
        }
        let e = table[x][x].parts.get(&0) == Some(&trivial) && table[x][x].parts.len() == 1;
        if !e {
            failures.push(format!("End({}) is not k", names[x]));
        }
        end_is_k.push(e);
    }
    if !exact {
        failures.push("some profiles are only determined up to Euler characteristic".into());
    }
    Ok(PosetReport {
        elements: names,
        end_is_k,
        hom_nonzero: hom,
        higher_zero: higher,
        greater,
        exact,
        euler_consistent: consistent,
        pass: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug)]
pub struct EulerMatrix {
    pub order: Vec<String>,
    pub chi: Vec<Vec<i64>>,
    pub det: i128,
}

impl EulerMatrix {
    pub fn unimodular(&self) -> bool {
        self.det.abs() == 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "chi": self.chi,
            "det": self.det.to_string(),
            "unimodular": self.unimodular(),
        })
    }
}

/// `chi(x, y) = sum (-1)^i dim Ext^i(E_x, E_y)`.
pub fn euler_matrix(cat: &Catalog) -> Result<EulerMatrix> {
    let d = cat.datum();
    let sheaves = cat.sheaves();
    let mut chi = Vec::new();
    for (_, x) in &sheaves {
        let mut row = Vec::new();
        for (_, y) in &sheaves {
            row.push(euler_dim_of_character(&d, &hom_character(&d, x, y)?)?);
        }
        chi.push(row);
    }
    let det = determinant(&chi);
    Ok(EulerMatrix { order: sheaves.iter().map(|(w, _)| w.name()).collect(), chi, det })
}

/// Fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
