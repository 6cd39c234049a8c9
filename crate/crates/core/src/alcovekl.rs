//! Alcove geometry for `W_p` under the dot action and the periodic
//! Kazhdan-Lusztig basis computing graded multiplicities in baby Verma
//! modules.
//!
//! Alcoves are encoded by the point `u = 0_A + rho` of `W_p rho` they
//! contain. In these coordinates the dot action is linear, and the walls
//! are the hyperplanes `<u, beta^vee> = p n`.

use crate::charring::{flatten, unflatten, Character, Shape};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rootsys::{RootDatum, RootType, Weight, WeylElement};
use crate::CharPoly;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

pub type KLPoly = LaurentPoly<i64>;

pub fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// `W_p` acting on `u`-coordinates, together with the data needed to walk
/// between alcoves.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub datum: RootDatum,
    pub p: i64,
    pub weyl: Vec<WeylElement>,
    theta: usize,
}

impl Geometry {
    pub fn new(kind: RootType, p: i64) -> Result<Geometry> {
        let datum = RootDatum::new(kind)?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let h = datum.coxeter_number();
        if p < h {
            return Err(Error::PrimeTooSmall { p, h });
        }
        let weyl = datum.enumerate_weyl()?;
        let theta = datum.highest_coroot();
        Ok(Geometry { datum, p, weyl, theta })
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// Number of generators `s0, s1, ..., sr` of `W_p`.
    pub fn num_generators(&self) -> usize {
        self.datum.rank + 1
    }

    /// `floor(<u, beta^vee> / p)` for every positive root.
    pub fn n_vector(&self, u: &Weight) -> Vec<i64> {
        (0..self.datum.positive.len()).map(|k| self.datum.pair_root(u, k).div_euclid(self.p)).collect()
    }

    pub fn height(&self, u: &Weight) -> i64 {
        self.n_vector(u).iter().sum()
    }

    pub fn is_regular(&self, u: &Weight) -> bool {
        (0..self.datum.positive.len()).all(|k| self.datum.pair_root(u, k).rem_euclid(self.p) != 0)
    }

    /// Index into `weyl` of the finite part of the affine element sending
    /// `rho` to `u`, or `None` when `u` is not in `W_p rho`.
    pub fn finite_part(&self, u: &Weight) -> Option<usize> {
        self.weyl.iter().position(|w| {
            let diff = *u - w.act(&self.datum, &self.datum.rho);
            self.datum.root_coords(&diff).is_some_and(|c| c.iter().all(|x| x % self.p == 0))
        })
    }

    /// Right action `x(rho) -> (x s)(rho)`; generator `0` is the affine one.
    pub fn right_act(&self, u: &Weight, s: usize) -> Result<Weight> {
        let w = self.finite_part(u).ok_or_else(|| Error::Invalid(format!("{u} is not an alcove point")))?;
        Ok(self.right_act_with(u, s, w))
    }

    fn right_act_with(&self, u: &Weight, s: usize, w: usize) -> Weight {
        let w = &self.weyl[w];
        if s == 0 {
            let shift = self.p - self.datum.coxeter_number() + 1;
            *u + shift * w.act(&self.datum, &self.datum.positive[self.theta].weight)
        } else {
            *u - w.act(&self.datum, &self.datum.simple_root(s - 1))
        }
    }

    /// The point of `W_p rho` in the alcove containing the regular point `v`.
    pub fn alcove_point(&self, v: &Weight) -> Result<Weight> {
        if !self.is_regular(v) {
            return Err(Error::NotRegular(format!("{}", *v - self.datum.rho)));
        }
        let d = &self.datum;
        let theta = &d.positive[self.theta];
        let mut x = *v;
        let mut ops: Vec<Option<usize>> = Vec::new();
        loop {
            if let Some(i) = (0..d.rank).find(|&i| x.0[i] < 0) {
                x = d.reflect(i, &x);
                ops.push(Some(i));
            } else {
                let t = d.pair_root(&x, self.theta);
                if t > self.p {
                    x = x - (t - self.p) * theta.weight;
                    ops.push(None);
                } else {
                    break;
                }
            }
        }
        let mut y = d.rho;
        for op in ops.iter().rev() {
            y = match op {
                Some(i) => d.reflect(*i, &y),
                None => y - (d.pair_root(&y, self.theta) - self.p) * theta.weight,
            };
        }
        Ok(y)
    }

    /// Alcove obtained by `lambda -> -lambda - 2 rho`, i.e. `u -> -u`.
    pub fn negate(&self, u: &Weight) -> Weight {
        self.alcove_point(&-*u).expect("negation preserves regularity")
    }

    /// Reduced word (generator indices, `0` affine) of the element sending
    /// `A+` to the alcove of `u`.
    pub fn alcove_word(&self, u: &Weight) -> Result<Vec<usize>> {
        let mut cur = *u;
        let mut word = Vec::new();
        let mut len = self.length_of_point(&cur);
        while len > 0 {
            let w = self.finite_part(&cur).ok_or_else(|| Error::Invalid(format!("{u} is not an alcove point")))?;
            let (s, next) = (0..self.num_generators())
                .map(|s| (s, self.right_act_with(&cur, s, w)))
                .find(|(_, v)| self.length_of_point(v) < len)
                .expect("some descent exists");
            word.push(s);
            cur = next;
            len -= 1;
        }
        word.reverse();
        Ok(word)
    }

    pub fn word_name(word: &[usize]) -> String {
        if word.is_empty() {
            "e".into()
        } else {
            word.iter().map(|s| format!("s{s}")).collect()
        }
    }

    pub fn point_of_word(&self, word: &[usize]) -> Result<Weight> {
        let mut u = self.datum.rho;
        for &s in word {
            if s > self.rank() {
                return Err(Error::BadSimpleRoot(s));
            }
            u = self.right_act(&u, s)?;
        }
        Ok(u)
    }

    fn length_of_point(&self, u: &Weight) -> i64 {
        self.n_vector(u).iter().map(|x| x.abs()).sum()
    }
}

/// `x = (w, p t)` acting by `u -> w(u) + p t` on `u`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineElement {
    pub finite: WeylElement,
    /// `t` in simple-root coordinates.
    pub translation: Vec<i64>,
}

impl AffineElement {
    pub fn identity(d: &RootDatum) -> AffineElement {
        AffineElement { finite: WeylElement::identity(d.rank), translation: vec![0; d.rank] }
    }

    pub fn simple(g: &Geometry, s: usize) -> AffineElement {
        let d = &g.datum;
        if s == 0 {
            let theta = &d.positive[g.theta];
            let mut word = Vec::new();
            let fin = g
                .weyl
                .iter()
                .find(|w| (0..d.rank).all(|i| w.act(d, &Weight::unit(i)) == d.reflect_root(g.theta, &Weight::unit(i))))
                .expect("s_theta in W");
            word.extend_from_slice(&fin.word);
            AffineElement {
                finite: WeylElement { word, mat: fin.mat.clone() },
                translation: theta.coords.clone(),
            }
        } else {
            AffineElement { finite: WeylElement::simple(d, s - 1), translation: vec![0; d.rank] }
        }
    }

    pub fn act(&self, g: &Geometry, u: &Weight) -> Weight {
        self.finite.act(&g.datum, u) + g.p * g.datum.from_root_coords(&self.translation)
    }

    /// `self * other`.
    pub fn compose(&self, g: &Geometry, other: &AffineElement) -> AffineElement {
        let d = &g.datum;
        let t = self.finite.act(d, &d.from_root_coords(&other.translation)) + d.from_root_coords(&self.translation);
        AffineElement {
            finite: self.finite.compose(d, &other.finite),
            translation: d.root_coords(&t).expect("W preserves ZR"),
        }
    }

    pub fn alcove(&self, g: &Geometry) -> Alcove {
        Alcove { point: self.act(g, &g.datum.rho) }
    }
}

/// Number of walls between `A+` and `x . A+`.
pub fn affine_length(g: &Geometry, x: &AffineElement) -> i64 {
    g.length_of_point(&x.act(g, &g.datum.rho))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alcove {
    /// `0_A + rho`.
    pub point: Weight,
}

impl Alcove {
    pub fn fundamental(g: &Geometry) -> Alcove {
        Alcove { point: g.datum.rho }
    }

    /// Alcove containing the regular weight `lambda` (dot action).
    pub fn containing(g: &Geometry, lambda: &Weight) -> Result<Alcove> {
        Ok(Alcove { point: g.alcove_point(&(*lambda + g.datum.rho))? })
    }

    pub fn zero(&self, g: &Geometry) -> Weight {
        self.point - g.datum.rho
    }

    pub fn element(&self, g: &Geometry) -> Result<AffineElement> {
        let w = g.finite_part(&self.point).ok_or_else(|| Error::Invalid("not an alcove point".into()))?;
        let fin = g.weyl[w].clone();
        let t = self.point - fin.act(&g.datum, &g.datum.rho);
        let c = g.datum.root_coords(&t).expect("translation in pZR");
        Ok(AffineElement { finite: fin, translation: c.into_iter().map(|x| x / g.p).collect() })
    }
}

/// Signed wall count `h(A) - h(C)`.
pub fn alcove_distance(g: &Geometry, c: &Alcove, a: &Alcove) -> i64 {
    g.height(&a.point) - g.height(&c.point)
}

/// Generic position of a weight of the principal block: the alcove point
/// and the `p Lambda` shift, `lambda + rho = u + p nu`.
fn split_block(g: &Geometry, lambda: &Weight) -> Result<(Weight, Weight)> {
    let v = *lambda + g.datum.rho;
    if !g.is_regular(&v) {
        return Err(Error::NotRegular(format!("{lambda}")));
    }
    let r = g.rank();
    let det = g.datum.cartan_det().abs();
    let n = det.pow(r as u32);
    for idx in 0..n {
        let nu = Weight::new(&unflatten(idx, &vec![det; r]));
        let u = v - g.p * nu;
        if g.finite_part(&u).is_some() {
            return Ok((u, nu));
        }
    }
    Err(Error::Invalid(format!("{lambda} is not in the principal block")))
}

type Pattern = Vec<(Weight, KLPoly)>;

/// Periodic Kazhdan-Lusztig basis, stored as one translation-invariant
/// pattern per finite part.
#[derive(Clone, Debug)]
pub struct KlModule {
    pub geometry: Geometry,
    pub window: i64,
    /// finite-part index -> (representative point, offsets from it)
    classes: BTreeMap<usize, (Weight, Pattern)>,
}

impl KlModule {
    /// Fill the table, enlarging the enumeration window from `window` until
    /// every class is reached or `max_window` is exceeded.
    pub fn compute(kind: RootType, p: i64, window: i64, max_window: i64) -> Result<KlModule> {
        let g = Geometry::new(kind, p)?;
        let mut m = window.max(1);
        loop {
            if let Some(classes) = fill(&g, m)? {
                return Ok(KlModule { geometry: g, window: m, classes });
            }
            m += 1;
            if m > max_window {
                return Err(Error::WindowTooSmall(max_window));
            }
        }
    }

    pub fn new(kind: RootType, p: i64) -> Result<KlModule> {
        KlModule::compute(kind, p, 2, 8)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// `KL(u)` as `(alcove point, coefficient)` pairs.
    pub fn kl_element(&self, u: &Weight) -> Result<Vec<(Weight, KLPoly)>> {
        let k = self.geometry.finite_part(u).ok_or_else(|| Error::Invalid(format!("{u} is not an alcove point")))?;
        let (rep, pat) = &self.classes[&k];
        let _ = rep;
        Ok(pat.iter().map(|(z, c)| (*z + *u, c.clone())).collect())
    }

    /// `p_{y,x}`: coefficient of `y` in `KL(x)`.
    pub fn kl_p(&self, y: &Weight, x: &Weight) -> Result<KLPoly> {
        Ok(self.kl_element(x)?.into_iter().find(|(z, _)| z == y).map(|(_, c)| c).unwrap_or_else(KLPoly::zero))
    }

    /// Composition factors of `nabla-hat(A)`: pairs `(C, p_{-A,-C})` over
    /// alcove points `C`.
    pub fn baby_verma_factors(&self, a: &Weight) -> Vec<(Weight, KLPoly)> {
        let g = &self.geometry;
        let ma = g.negate(a);
        let mut out = Vec::new();
        for (&k, (_, pat)) in &self.classes {
            for (z, c) in pat {
                let x = ma - *z;
                if g.finite_part(&x) == Some(k) {
                    out.push((g.negate(&x), c.clone()));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Factors of `nabla-hat(lambda)` for any `lambda` in the principal
    /// block: `(0_C, p_{-A,-C})` with `0_C` already translated.
    pub fn nabla_factors(&self, lambda: &Weight) -> Result<Vec<(Weight, KLPoly)>> {
        let (u, nu) = split_block(&self.geometry, lambda)?;
        let shift = self.geometry.p * nu - self.geometry.datum.rho;
        Ok(self.baby_verma_factors(&u).into_iter().map(|(c, q)| (c + shift, q)).collect())
    }

    /// `Q^{C,A}(v) = v^{d(C,A)} p_{-A,-C}(v^{-1})`.
    pub fn kl_q(&self, c: &Alcove, a: &Alcove) -> Result<KLPoly> {
        let g = &self.geometry;
        let pa = g.negate(&a.point);
        let pc = g.negate(&c.point);
        let p = self.kl_p(&pa, &pc)?;
        Ok(p.bar().shift(alcove_distance(g, c, a) as i32))
    }

    /// Versioned JSON cache keyed by alcove words.
    pub fn to_json(&self) -> Result<Value> {
        let g = &self.geometry;
        let mut entries = Vec::new();
        for (rep, pat) in self.classes.values() {
            let x = Geometry::word_name(&g.alcove_word(rep)?);
            for (z, c) in pat {
                let y = Geometry::word_name(&g.alcove_word(&(*z + *rep))?);
                let (lo, coeffs) = poly_parts(c);
                entries.push(json!({"x": x, "y": y, "lo": lo, "coeffs": coeffs}));
            }
        }
        Ok(json!({
            "version": 1,
            "type": g.datum.kind.label(),
            "p": g.p,
            "window": self.window,
            "entries": entries,
        }))
    }

    pub fn from_json(v: &Value) -> Result<KlModule> {
        let bad = |m: &str| Error::Cache(m.to_string());
        if v["version"].as_i64() != Some(1) {
            return Err(bad("unsupported version"));
        }
        let kind = RootType::parse(v["type"].as_str().ok_or_else(|| bad("missing type"))?)?;
        let p = v["p"].as_i64().ok_or_else(|| bad("missing p"))?;
        let window = v["window"].as_i64().ok_or_else(|| bad("missing window"))?;
        let g = Geometry::new(kind, p)?;
        let mut classes: BTreeMap<usize, (Weight, Pattern)> = BTreeMap::new();
        let parse_word = |s: &str| -> Result<Vec<usize>> {
            if s == "e" {
                return Ok(Vec::new());
            }
            s.split('s').skip(1).map(|t| t.parse::<usize>().map_err(|_| bad("bad word"))).collect()
        };
        for e in v["entries"].as_array().ok_or_else(|| bad("missing entries"))? {
            let x = g.point_of_word(&parse_word(e["x"].as_str().ok_or_else(|| bad("x"))?)?)?;
            let y = g.point_of_word(&parse_word(e["y"].as_str().ok_or_else(|| bad("y"))?)?)?;
            let lo = e["lo"].as_i64().ok_or_else(|| bad("lo"))? as i32;
            let coeffs: Vec<i64> = e["coeffs"]
                .as_array()
                .ok_or_else(|| bad("coeffs"))?
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| bad("coeff")))
                .collect::<Result<_>>()?;
            let k = g.finite_part(&x).ok_or_else(|| bad("x is not an alcove"))?;
            let entry = classes.entry(k).or_insert_with(|| (x, Vec::new()));
            if entry.0 != x {
                return Err(bad("two representatives for one class"));
            }
            entry.1.push((y - x, KLPoly::from_coeffs(lo, coeffs)));
        }
        for (_, pat) in classes.values_mut() {
            pat.sort_by(|a, b| a.0.cmp(&b.0));
        }
        if classes.len() != g.weyl.len() {
            return Err(bad("incomplete table"));
        }
        Ok(KlModule { geometry: g, window, classes })
    }

    /// Load from `path` if it holds a table for these parameters, otherwise
    /// compute and write it.
    pub fn load_or_compute(kind: RootType, p: i64, path: &std::path::Path) -> Result<KlModule> {
        if let Ok(text) = std::fs::read_to_string(path) {
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
            if v["type"].as_str() == Some(&kind.label()) && v["p"].as_i64() == Some(p) {
                return KlModule::from_json(&v);
            }
        }
        let m = KlModule::new(kind, p)?;
        let text = serde_json::to_string_pretty(&m.to_json()?).map_err(|e| Error::Cache(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(m)
    }
}

fn poly_parts(c: &KLPoly) -> (i32, Vec<i64>) {
    match (c.low_degree(), c.high_degree()) {
        (Some(lo), Some(hi)) => (lo, (lo..=hi).map(|k| c.coeff(k)).collect()),
        _ => (0, Vec::new()),
    }
}

struct Filler<'a> {
    g: &'a Geometry,
    known: HashMap<Weight, Pattern>,
    classes: BTreeMap<usize, (Weight, Pattern)>,
}

impl Filler<'_> {
    fn get(&self, u: &Weight) -> Option<Pattern> {
        if let Some(k) = self.known.get(u) {
            return Some(k.iter().map(|(z, c)| (*z + *u, c.clone())).collect());
        }
        let k = self.g.finite_part(u)?;
        self.classes.get(&k).map(|(_, pat)| pat.iter().map(|(z, c)| (*z + *u, c.clone())).collect())
    }

    fn store(&mut self, u: Weight, kl: Vec<(Weight, KLPoly)>) -> Result<()> {
        let mut pat: Pattern = kl.into_iter().map(|(z, c)| (z - u, c)).collect();
        pat.sort_by(|a, b| a.0.cmp(&b.0));
        let k = self.g.finite_part(&u).expect("alcove point");
        match self.classes.get(&k) {
            Some((_, old)) if *old != pat => {
                return Err(Error::Invalid(format!("KL pattern at {u} is not translation invariant")))
            }
            Some(_) => {}
            None => {
                self.classes.insert(k, (u, pat.clone()));
            }
        }
        self.known.insert(u, pat);
        Ok(())
    }

    /// Special-vertex star: `u` in `p nu + A+` gives `sum_y v^{l(y)} (p nu + y)`.
    fn star(&self, u: &Weight) -> Option<Vec<(Weight, KLPoly)>> {
        let g = self.g;
        let d = &g.datum;
        let mut nu = Weight::ZERO;
        for i in 0..d.rank {
            nu.0[i] = u.0[i].div_euclid(g.p);
        }
        if g.n_vector(&(d.rho + g.p * nu)) != g.n_vector(u) {
            return None;
        }
        let base = *u - g.p * nu;
        let mut seen: HashMap<Weight, i32> = HashMap::from([(base, 0)]);
        let mut frontier = vec![base];
        let mut lvl = 0;
        while !frontier.is_empty() {
            lvl += 1;
            let mut next = Vec::new();
            for x in frontier {
                for i in 0..d.rank {
                    let y = d.reflect(i, &x);
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(y) {
                        e.insert(lvl);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        Some(seen.into_iter().map(|(y, l)| (g.p * nu + y, KLPoly::monomial(l, 1))).collect())
    }

    fn recurse(&self, u: &Weight) -> Option<Vec<(Weight, KLPoly)>> {
        let g = self.g;
        let hu = g.height(u);
        let wu = g.finite_part(u)?;
        'gen: for s in 0..g.num_generators() {
            let v = g.right_act_with(u, s, wu);
            if g.height(&v) >= hu {
                continue;
            }
            let Some(kv) = self.get(&v) else { continue };
            let mut x: HashMap<Weight, KLPoly> = HashMap::new();
            for (b, c) in kv {
                let bs = g.right_act_with(&b, s, g.finite_part(&b)?);
                let up = g.height(&bs) > g.height(&b);
                let e = x.entry(bs).or_insert_with(KLPoly::zero);
                *e = &*e + &c;
                let e = x.entry(b).or_insert_with(KLPoly::zero);
                *e = &*e + &c.shift(if up { 1 } else { -1 });
            }
            x.retain(|_, c| !c.is_zero());
            loop {
                let worst = x
                    .iter()
                    .filter(|(w, c)| *w != u && c.has_nonpositive_terms())
                    .map(|(w, _)| (g.height(w), *w))
                    .max();
                let Some((_, w)) = worst else { break };
                let Some(kw) = self.get(&w) else { continue 'gen };
                let mu = x[&w].nonpositive_symmetrized();
                for (z, cz) in kw {
                    let e = x.entry(z).or_insert_with(KLPoly::zero);
                    *e = &*e - &(&mu * &cz);
                    if e.is_zero() {
                        x.remove(&z);
                    }
                }
            }
            if x.get(u) != Some(&KLPoly::one()) {
                continue;
            }
            let mut out: Vec<(Weight, KLPoly)> = x.into_iter().collect();
            out.sort_by(|a, b| a.0.cmp(&b.0));
            return Some(out);
        }
        None
    }
}

/// Enumerate alcoves with `|n_beta| <= m`, then fill patterns. Returns
/// `None` when some class stays unreached.
fn fill(g: &Geometry, m: i64) -> Result<Option<BTreeMap<usize, (Weight, Pattern)>>> {
    let rho = g.datum.rho;
    let mut seen = std::collections::HashSet::from([rho]);
    let mut frontier = vec![rho];
    let mut all = vec![rho];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for u in frontier {
            let w = g.finite_part(&u).expect("alcove point");
            for s in 0..g.num_generators() {
                let v = g.right_act_with(&u, s, w);
                if g.n_vector(&v).iter().all(|x| x.abs() <= m) && seen.insert(v) {
                    next.push(v);
                    all.push(v);
                }
            }
        }
        frontier = next;
    }
    all.sort_by_key(|u| (g.height(u), *u));
    let mut f = Filler { g, known: HashMap::new(), classes: BTreeMap::new() };
    for _ in 0..64 {
        let mut progress = false;
        for u in &all {
            if f.known.contains_key(u) {
                continue;
            }
            let kl = f.star(u).or_else(|| f.recurse(u));
            if let Some(kl) = kl {
                f.store(*u, kl)?;
                progress = true;
            }
            if f.classes.len() == g.weyl.len() {
                return Ok(Some(f.classes));
            }
        }
        if !progress {
            break;
        }
    }
    Ok(None)
}

/// Assemble `sum_i v^{d+1-i} m_i` from a layer table.
pub fn socle_poly_rhs(d: i64, layers: &BTreeMap<i64, i64>) -> KLPoly {
    layers.iter().fold(KLPoly::zero(), |acc, (&i, &m)| &acc + &KLPoly::monomial((d + 1 - i) as i32, m))
}

/// Inverse of [`socle_poly_rhs`].
pub fn extract_layers(d: i64, q: &KLPoly) -> BTreeMap<i64, i64> {
    q.terms().map(|(e, m)| (d + 1 - e as i64, m)).collect()
}

/// Characters of the restricted simple modules of the principal block,
/// from the graded decomposition numbers of baby Verma modules.
#[derive(Clone, Debug)]
pub struct RestrictedSimples {
    pub p: i64,
    pub chars: BTreeMap<Weight, CharPoly>,
}

impl RestrictedSimples {
    pub fn compute(kl: &KlModule) -> Result<RestrictedSimples> {
        let g = &kl.geometry;
        let d = &g.datum;
        let p = g.p;
        let r = d.rank;
        let mut restricted = Vec::new();
        let total = p.pow(r as u32);
        for idx in 0..total {
            let c = unflatten(idx, &vec![p; r]);
            let lam = Weight::new(&c);
            if g.is_regular(&(lam + d.rho)) && split_block(g, &lam).is_ok() {
                restricted.push(lam);
            }
        }
        let shape = Shape::new(d, p);
        let dims = shape.dims.clone();
        let size: i64 = dims.iter().product();
        let mut cells: Vec<(i64, Vec<i64>)> = (0..size).map(|i| (i, unflatten(i, &dims))).collect();
        cells.sort_by_key(|(_, c)| c.iter().sum::<i64>());

        let pos: HashMap<Weight, usize> = restricted.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        // (source index, depth offset in root coords, multiplicity)
        let mut deps: Vec<Vec<(usize, Vec<i64>, i64)>> = Vec::new();
        for lam in &restricted {
            let mut v = Vec::new();
            for (c, q) in kl.nabla_factors(lam)? {
                if c == *lam {
                    continue;
                }
                let mut c0 = Weight::ZERO;
                for i in 0..r {
                    c0.0[i] = c.0[i].rem_euclid(p);
                }
                let src = *pos.get(&c0).ok_or_else(|| Error::Invalid(format!("factor {c0} outside the block")))?;
                let off = d.root_coords(&(*lam - c)).ok_or_else(|| Error::Invalid("factor not below".into()))?;
                v.push((src, off, q.eval_one()));
            }
            deps.push(v);
        }
        let mut table = vec![vec![0i64; size as usize]; restricted.len()];
        for (idx, c) in &cells {
            for li in 0..restricted.len() {
                let mut val = shape.get(c);
                for (src, off, m) in &deps[li] {
                    let rel: Vec<i64> = c.iter().zip(off).map(|(a, b)| a - b).collect();
                    if rel.iter().zip(&dims).all(|(&a, &b)| a >= 0 && a < b) {
                        val -= m * table[*src][flatten(&rel, &dims) as usize];
                    }
                }
                table[li][*idx as usize] = val;
            }
        }
        let mut chars = BTreeMap::new();
        for (li, lam) in restricted.iter().enumerate() {
            let mut ch = Character::zero();
            for (idx, c) in &cells {
                let v = table[li][*idx as usize];
                if v != 0 {
                    ch.add_term(*lam - d.from_root_coords(c), v);
                }
            }
            chars.insert(*lam, ch);
        }
        Ok(RestrictedSimples { p, chars })
    }

    /// `ch L-hat(lambda) = ch L(lambda^0) e^{p lambda^1}`.
    pub fn hat_char(&self, lambda: &Weight, rank: usize) -> Option<CharPoly> {
        let mut l0 = Weight::ZERO;
        for i in 0..rank {
            l0.0[i] = lambda.0[i].rem_euclid(self.p);
        }
        self.chars.get(&l0).map(|c| c.shift(*lambda - l0))
    }

    pub fn dim(&self, lambda: &Weight, rank: usize) -> Option<i64> {
        self.hat_char(lambda, rank).map(|c| c.total())
    }
}

/// `ch L-hat` for the alcove `A` of the principal block.
pub fn irr_char_principal(kl: &KlModule, simples: &RestrictedSimples, a: &Alcove) -> Result<CharPoly> {
    let z = a.zero(&kl.geometry);
    simples
        .hat_char(&z, kl.geometry.rank())
        .ok_or_else(|| Error::Invalid(format!("{z} has no restricted simple in the table")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_lengths() {
        let g = Geometry::new(RootType::A1, 3).unwrap();
        let s0 = AffineElement::simple(&g, 0);
        assert_eq!(affine_length(&g, &s0), 1);
        let t = AffineElement { finite: WeylElement::identity(1), translation: vec![1] };
        assert_eq!(affine_length(&g, &t), 2);
        let a = Alcove::fundamental(&g);
        assert_eq!(alcove_distance(&g, &a, &s0.alcove(&g)), 1);
    }

    #[test]
    fn right_action_matches_composition() {
        let g = Geometry::new(RootType::G2, 7).unwrap();
        let mut x = AffineElement::identity(&g.datum);
        let mut u = g.datum.rho;
        for &s in &[0usize, 1, 2, 1, 0, 2, 1] {
            x = x.compose(&g, &AffineElement::simple(&g, s));
            u = g.right_act(&u, s).unwrap();
            assert_eq!(x.act(&g, &g.datum.rho), u);
        }
        let w = g.alcove_word(&u).unwrap();
        assert_eq!(g.point_of_word(&w).unwrap(), u);
    }
}
