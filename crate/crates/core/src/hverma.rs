//! Socle series of parabolic baby Verma modules predicted from periodic
//! KL polynomials.

use crate::alcovekl::{Geometry, KLPoly, KlModule, RestrictedSimples};
use crate::charring::{hv_char_product, Character};
use crate::error::{Error, Result};
use crate::rootsys::{ParabolicSpec, Weight, WeylElement};
use crate::CharPoly;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct SocleTable {
    pub parabolic: ParabolicSpec,
    /// `0_A`.
    pub top: Weight,
    pub p: i64,
    /// `(layer, 0_C) -> multiplicity`.
    pub entries: BTreeMap<(i64, Weight), i64>,
    /// Coefficients that did not fit a layer (negative, or layer < 1).
    pub anomalies: Vec<String>,
    pub theorem_range: bool,
}

impl SocleTable {
    pub fn loewy_length(&self) -> i64 {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn layer(&self, i: i64) -> Vec<(Weight, i64)> {
        self.entries.iter().filter(|((j, _), _)| *j == i).map(|((_, c), m)| (*c, *m)).collect()
    }

    /// `q -> 1` totals per factor.
    pub fn totals(&self) -> BTreeMap<Weight, i64> {
        let mut out = BTreeMap::new();
        for ((_, c), m) in &self.entries {
            *out.entry(*c).or_insert(0) += m;
        }
        out
    }

    pub fn layer_character(&self, i: i64, simples: &RestrictedSimples, rank: usize) -> Result<CharPoly> {
        let mut ch = Character::zero();
        for (c, m) in self.layer(i) {
            let l = simples.hat_char(&c, rank).ok_or_else(|| Error::Invalid(format!("no simple for {c}")))?;
            ch = &ch + &l.scale(m);
        }
        Ok(ch)
    }

    pub fn mass(&self, simples: &RestrictedSimples, rank: usize) -> Result<i64> {
        let mut s = 0;
        for ((_, c), m) in &self.entries {
            s += m * simples.dim(c, rank).ok_or_else(|| Error::Invalid(format!("no simple for {c}")))?;
        }
        Ok(s)
    }

    pub fn to_csv(&self, g: &Geometry) -> Result<String> {
        let mut out = String::from("layer,alcove,weight,multiplicity\n");
        for ((i, c), m) in &self.entries {
            let u = g.alcove_point(&(*c + g.datum.rho))?;
            let shift = *c + g.datum.rho - u;
            let mut word = Geometry::word_name(&g.alcove_word(&u)?);
            if !shift.is_zero() {
                word = format!("{word}+{}", fmt_weight(&shift, g.rank()));
            }
            out.push_str(&format!("{i},{word},{},{m}\n", fmt_weight(c, g.rank())));
        }
        Ok(out)
    }
}

pub(crate) fn fmt_weight(w: &Weight, rank: usize) -> String {
    let parts: Vec<String> = w.coords(rank).iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Kostant partition function of `-gamma` over the Levi positive roots.
fn levi_partition(kl: &KlModule, p: &ParabolicSpec, gamma: &Weight) -> i64 {
    crate::charring::kostant_partition_levi(&kl.geometry.datum, gamma, p) as i64
}

/// Layers of `nabla-hat_P(A)` from the alternating KL sum.
pub fn socle_table(kl: &KlModule, p: &ParabolicSpec, top: &Weight) -> Result<SocleTable> {
    let g = &kl.geometry;
    let d = &g.datum;
    let prime = g.p;
    if !p.in_lambda_p(top) {
        return Err(Error::NotInLambdaP { weight: format!("{top}"), parabolic: p.name() });
    }
    if !g.is_regular(&(*top + d.rho)) {
        return Err(Error::NotRegular(format!("{top}")));
    }
    let bp = d.root_coords(&((prime - 1) * p.two_rho_p(d))).expect("2 rho_P in ZR");
    let in_box = |c: &Weight| -> bool {
        d.root_coords(&(*top - *c)).is_some_and(|x| x.iter().zip(&bp).all(|(&a, &b)| a >= 0 && a <= b))
    };
    let height = |w: &Weight| g.height(&(*w + d.rho));
    let wp = d.parabolic_subgroup(p)?;
    let levi = p.subset.clone();

    let mut terms: Vec<(Weight, i64)> = Vec::new();
    for w in &wp {
        let b0 = d.dot(w, top);
        let base = d.root_coords(&(*top - b0)).expect("dot orbit in top + ZR");
        let kmax: Vec<i64> = levi.iter().map(|&j| (bp[j] - base[j]).div_euclid(prime)).collect();
        if kmax.iter().any(|&k| k < 0) {
            continue;
        }
        let mut ks = vec![0i64; levi.len()];
        'odo: loop {
            let mut gamma = Weight::ZERO;
            for (t, &j) in levi.iter().enumerate() {
                gamma -= ks[t] * d.simple_root(j);
            }
            let coef = w.sign() * levi_partition(kl, p, &gamma);
            if coef != 0 {
                terms.push((b0 + prime * gamma, coef));
            }
            for t in 0..levi.len() {
                if ks[t] < kmax[t] {
                    ks[t] += 1;
                    continue 'odo;
                }
                ks[t] = 0;
            }
            break;
        }
    }

    let partial: Vec<HashMap<Weight, KLPoly>> = terms
        .par_iter()
        .map(|(b, coef)| -> Result<HashMap<Weight, KLPoly>> {
            let hb = height(b);
            let mut acc = HashMap::new();
            for (c, q) in kl.nabla_factors(b)? {
                if !in_box(&c) {
                    continue;
                }
                let qc = q.bar().shift((hb - height(&c)) as i32).scale(*coef);
                let e = acc.entry(c).or_insert_with(KLPoly::zero);
                *e = &*e + &qc;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut lhs: BTreeMap<Weight, KLPoly> = BTreeMap::new();
    for m in partial {
        for (c, q) in m {
            let e = lhs.entry(c).or_insert_with(KLPoly::zero);
            *e = &*e + &q;
        }
    }

    let ha = height(top);
    let mut entries = BTreeMap::new();
    let mut anomalies = Vec::new();
    for (c, q) in lhs {
        let dca = ha - height(&c);
        for (e, m) in q.terms() {
            let i = dca + 1 - e as i64;
            if m < 0 || i < 1 {
                anomalies.push(format!("C={} exponent {e} coefficient {m}", fmt_weight(&c, d.rank)));
            } else {
                entries.insert((i, c), m);
            }
        }
    }
    Ok(SocleTable {
        parabolic: p.clone(),
        top: *top,
        p: prime,
        entries,
        anomalies,
        theorem_range: d.rank <= 2 && prime >= d.coxeter_number(),
    })
}

/// `epsilon_w`: the representative of `w.0 + p Lambda` in the restricted box.
pub fn epsilon(g: &Geometry, w: &WeylElement) -> Weight {
    let z = g.datum.dot(w, &Weight::ZERO);
    let mut out = Weight::ZERO;
    for i in 0..g.rank() {
        out.0[i] = z.0[i].rem_euclid(g.p);
    }
    out
}

pub fn restricted_part(g: &Geometry, w: &Weight) -> Weight {
    let mut out = Weight::ZERO;
    for i in 0..g.rank() {
        out.0[i] = w.0[i].rem_euclid(g.p);
    }
    out
}

/// For each `w` in `W^P`: does layer `l(w)+1` of the table at `0_A = 0`
/// contain a factor of class `epsilon_w`?
pub fn epsilon_layer_check(kl: &KlModule, p: &ParabolicSpec) -> Result<Vec<(String, bool)>> {
    let g = &kl.geometry;
    let t = socle_table(kl, p, &Weight::ZERO)?;
    let reps = g.datum.min_coset_reps(p)?;
    Ok(reps
        .iter()
        .map(|w| {
            let eps = epsilon(g, w);
            let ok = t.layer(w.len() as i64 + 1).iter().any(|(c, _)| restricted_part(g, c) == eps);
            (w.name(), ok)
        })
        .collect())
}

/// Decompose a character of the principal block into `L-hat` factors by
/// peeling maximal weights.
pub fn decompose(ch: &CharPoly, simples: &RestrictedSimples, g: &Geometry) -> Result<BTreeMap<Weight, i64>> {
    let d = &g.datum;
    let mut rest = ch.clone();
    let mut out = BTreeMap::new();
    let key = |w: &Weight| -> i64 { d.root_coords_scaled(w).iter().sum::<i64>() * d.cartan_det().signum() };
    while !rest.is_zero() {
        let top = *rest.weights().max_by_key(|w| (key(w), **w)).unwrap();
        let c = rest.coeff(&top);
        let l = simples
            .hat_char(&top, d.rank)
            .ok_or_else(|| Error::Invalid(format!("{} has no simple", fmt_weight(&top, d.rank))))?;
        rest = &rest - &l.scale(c);
        *out.entry(top).or_insert(0) += c;
    }
    Ok(out)
}

/// Specialization at `q = 1` agrees with the decomposition of the product
/// character.
pub fn q_one_check(t: &SocleTable, kl: &KlModule, simples: &RestrictedSimples) -> Result<bool> {
    let g = &kl.geometry;
    let ch = hv_char_product(&g.datum, &t.top, &t.parabolic, g.p)?;
    Ok(decompose(&ch, simples, g)? == t.totals())
}

/// Each P-table entry is bounded by the B-table entry.
pub fn containment_check(tp: &SocleTable, tb: &SocleTable) -> bool {
    tp.entries.iter().all(|(k, m)| tb.entries.get(k).copied().unwrap_or(0) >= *m)
}

/// `L-hat(mu)^* = L-hat(-w0 mu^0 - p mu^1)`.
fn dual_label(g: &Geometry, mu: &Weight) -> Weight {
    let d = &g.datum;
    let (w0, _, _) = d.longest_elements(&ParabolicSpec::borel()).expect("small W");
    let m0 = restricted_part(g, mu);
    -w0.act(d, &m0) - (*mu - m0)
}

/// The table at `2(p-1)rho_P - 0_A` is the reversed, dualized table at `A`.
pub fn duality_check(kl: &KlModule, t: &SocleTable) -> Result<bool> {
    let g = &kl.geometry;
    let d = &g.datum;
    let other = (g.p - 1) * t.parabolic.two_rho_p(d) - t.top;
    let t2 = socle_table(kl, &t.parabolic, &other)?;
    let len = t.loewy_length();
    let mapped: BTreeMap<(i64, Weight), i64> =
        t.entries.iter().map(|((i, c), m)| ((len + 1 - i, dual_label(g, c)), *m)).collect();
    Ok(mapped == t2.entries)
}

pub fn summary_json(t: &SocleTable, kl: &KlModule, simples: &RestrictedSimples) -> Result<Value> {
    let g = &kl.geometry;
    let d = &g.datum;
    let mass = t.mass(simples, d.rank)?;
    let expected = g.p.pow(t.parabolic.unipotent_roots(d).len() as u32);
    Ok(json!({
        "type": d.kind.label(),
        "parabolic": t.parabolic.name(),
        "p": g.p,
        "top": t.top.to_vec(d.rank),
        "loewy_length": t.loewy_length(),
        "mass": mass,
        "expected_mass": expected,
        "mass_ok": mass == expected,
        "range": if t.theorem_range { "theorem" } else { "conjectural" },
        "anomalies": t.anomalies,
    }))
}
