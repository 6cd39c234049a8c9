//! Replayable generation certificates.
//!
//! A script grows a set of objects known to lie in the subcategory
//! generated by the sheaves of a catalog. Objects live on `G/P` (space `P`)
//! or on `G/B` (space `B`). Every step is checked at the level of
//! characters before its conclusion is added. See the README for the
//! grammar.

use crate::charring::{weyl_character, Character};
use crate::error::{Error, Result};
use crate::modcat::{catalog, char_of, Catalog, Family};
use crate::rootsys::{ParabolicSpec, RootDatum, RootType, Weight, WeylElement};
use crate::CharPoly;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    P,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obj {
    Zero,
    Line(Weight),
    /// Rank-one module of the given simple root and highest weight.
    Delta(usize, Weight),
    /// Catalog sheaf, by its canonical word.
    E(String),
    /// Layers bottom to top, each a direct sum.
    Boxed(Vec<Vec<Obj>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Axiom(String),
    Cone { space: Space, obj: Obj, layers: Vec<Vec<Obj>> },
    Tensor { space: Space, obj: Obj, weyl: Weight, layers: Vec<Vec<Obj>> },
    Koszul { space: Space, weyl: Weight, at: Weight },
    Generator { obj: Obj, via: Obj },
    Pushforward(Obj),
}

#[derive(Clone, Debug)]
pub struct LedgerScript {
    pub kind: RootType,
    pub parabolic: ParabolicSpec,
    pub family: Family,
    pub targets: Vec<(Space, Obj)>,
    /// `(line number, step)`.
    pub steps: Vec<(usize, Step)>,
}

#[derive(Clone, Debug)]
pub struct LedgerReport {
    pub steps_replayed: usize,
    pub known: usize,
    pub failure: Option<String>,
    pub missing_targets: Vec<String>,
}

impl LedgerReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none() && self.missing_targets.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "steps_replayed": self.steps_replayed,
            "known_objects": self.known,
            "failure": self.failure,
            "missing_targets": self.missing_targets,
        })
    }
}

fn fmt_w(w: &Weight, r: usize) -> String {
    w.coords(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

struct Shown<'a>(&'a Obj, usize);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.1;
        match self.0 {
            Obj::Zero => write!(f, "zero"),
            Obj::Line(w) => write!(f, "line({})", fmt_w(w, r)),
            Obj::Delta(i, w) => write!(f, "delta({}; {})", i + 1, fmt_w(w, r)),
            Obj::E(w) => write!(f, "E({w})"),
            Obj::Boxed(layers) => {
                let ls: Vec<String> = layers
                    .iter()
                    .map(|l| l.iter().map(|o| Shown(o, r).to_string()).collect::<Vec<_>>().join(" | "))
                    .collect();
                write!(f, "[{}]", ls.join(" / "))
            }
        }
    }
}

impl Obj {
    pub fn show(&self, rank: usize) -> String {
        Shown(self, rank).to_string()
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    line: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::LedgerParse { line: self.line, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(t.as_bytes()) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{t}`")))
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[st..self.i]).into_owned()
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let st = self.i;
        if self.i < self.s.len() && self.s[self.i] == b'-' {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().map_err(|_| self.err("expected an integer"))
    }

    /// Space-separated integers up to `)`.
    fn weight(&mut self, rank: usize) -> Result<Weight> {
        let mut c = Vec::new();
        for _ in 0..rank {
            c.push(self.int()?);
        }
        Ok(Weight::new(&c))
    }

    fn paren_weight(&mut self, rank: usize) -> Result<Weight> {
        self.expect("(")?;
        let w = self.weight(rank)?;
        self.expect(")")?;
        Ok(w)
    }

    fn layers(&mut self, rank: usize) -> Result<Vec<Vec<Obj>>> {
        self.expect("[")?;
        let mut layers = vec![vec![self.obj(rank)?]];
        loop {
            if self.eat("]") {
                return Ok(layers);
            }
            if self.eat("/") {
                layers.push(vec![self.obj(rank)?]);
            } else if self.eat("|") {
                let o = self.obj(rank)?;
                layers.last_mut().unwrap().push(o);
            } else {
                return Err(self.err("expected `/`, `|` or `]`"));
            }
        }
    }

    fn obj(&mut self, rank: usize) -> Result<Obj> {
        self.ws();
        if self.s.get(self.i) == Some(&b'[') {
            return Ok(Obj::Boxed(self.layers(rank)?));
        }
        match self.ident().as_str() {
            "zero" => Ok(Obj::Zero),
            "line" => Ok(Obj::Line(self.paren_weight(rank)?)),
            "delta" | "nabla" => {
                self.expect("(")?;
                let i = self.int()?;
                if i < 1 || i as usize > rank {
                    return Err(self.err(format!("simple root {i} out of range")));
                }
                self.expect(";")?;
                let w = self.weight(rank)?;
                self.expect(")")?;
                Ok(Obj::Delta(i as usize - 1, w))
            }
            "E" => {
                self.expect("(")?;
                let w = self.ident();
                self.expect(")")?;
                Ok(Obj::E(w))
            }
            other => Err(self.err(format!("unknown object `{other}`"))),
        }
    }

    fn space(&mut self) -> Result<Space> {
        match self.ident().as_str() {
            "P" => Ok(Space::P),
            "B" => Ok(Space::B),
            s => Err(self.err(format!("unknown space `{s}`"))),
        }
    }

    fn done(&mut self) -> Result<()> {
        self.ws();
        if self.i == self.s.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }
}

pub fn parse(text: &str) -> Result<LedgerScript> {
    let mut header: Option<(RootType, ParabolicSpec, Family)> = None;
    let mut targets = Vec::new();
    let mut steps = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let mut p = Parser { s: content.as_bytes(), i: 0, line };
        let kw = p.ident();
        if kw == "catalog" {
            let fam = Family::parse(&p.ident()).map_err(|e| p.err(e.to_string()))?;
            let kind = RootType::parse(&p.ident()).map_err(|e| p.err(e.to_string()))?;
            let par = ParabolicSpec::parse(&p.ident(), kind.rank()).map_err(|e| p.err(e.to_string()))?;
            p.done()?;
            header = Some((kind, par, fam));
            continue;
        }
        let rank = header.as_ref().ok_or_else(|| p.err("`catalog` must come first"))?.0.rank();
        let step = match kw.as_str() {
            "target" => {
                let sp = p.space()?;
                p.expect("lines")?;
                let a = p.paren_weight(rank)?;
                p.expect("..")?;
                let b = p.paren_weight(rank)?;
                p.done()?;
                let diff = b - a;
                let g = diff.coords(rank).iter().fold(0i64, |g, &x| gcd(g, x.abs()));
                if g == 0 {
                    targets.push((sp, Obj::Line(a)));
                } else {
                    let mut step = Weight::ZERO;
                    for i in 0..rank {
                        step.0[i] = diff.0[i] / g;
                    }
                    for t in 0..=g {
                        targets.push((sp, Obj::Line(a + t * step)));
                    }
                }
                continue;
            }
            "axiom" => Step::Axiom(p.ident()),
            "cone" => {
                let space = p.space()?;
                let obj = p.obj(rank)?;
                p.expect("=")?;
                Step::Cone { space, obj, layers: p.layers(rank)? }
            }
            "tensor" => {
                let space = p.space()?;
                let obj = p.obj(rank)?;
                p.expect("weyl")?;
                let weyl = p.paren_weight(rank)?;
                p.expect("=")?;
                Step::Tensor { space, obj, weyl, layers: p.layers(rank)? }
            }
            "koszul" => {
                let space = p.space()?;
                p.expect("weyl")?;
                let weyl = p.paren_weight(rank)?;
                p.expect("at")?;
                Step::Koszul { space, weyl, at: p.paren_weight(rank)? }
            }
            "generator" => {
                p.expect("B")?;
                let obj = p.obj(rank)?;
                p.expect("via")?;
                Step::Generator { obj, via: p.obj(rank)? }
            }
            "pushforward" => {
                p.expect("B")?;
                Step::Pushforward(p.obj(rank)?)
            }
            other => return Err(p.err(format!("unknown step `{other}`"))),
        };
        p.done()?;
        steps.push((line, step));
    }
    let (kind, parabolic, family) = header.ok_or(Error::LedgerParse { line: 0, msg: "missing `catalog` line".into() })?;
    Ok(LedgerScript { kind, parabolic, family, targets, steps })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct State {
    d: RootDatum,
    cat: Catalog,
    known: BTreeSet<(Space, String)>,
}

impl State {
    fn key(&self, o: &Obj) -> String {
        o.show(self.d.rank)
    }

    fn element(&self, word: &str) -> Result<WeylElement> {
        let w = self.d.find_element(&WeylElement::parse_word(word)?)?;
        if self.cat.entry(&w).is_none() {
            return Err(Error::Invalid(format!("E({word}) is not in the catalog")));
        }
        Ok(w)
    }

    fn normalize(&self, o: &Obj) -> Result<Obj> {
        Ok(match o {
            Obj::E(word) => Obj::E(self.element(word)?.name()),
            Obj::Delta(i, w) if w.0[*i] == 0 => Obj::Line(*w),
            Obj::Delta(i, w) if w.0[*i] < 0 => {
                return Err(Error::Invalid(format!("delta({}; ..) with negative pairing", i + 1)))
            }
            Obj::Boxed(layers) => Obj::Boxed(
                layers.iter().map(|l| l.iter().map(|x| self.normalize(x)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
            ),
            _ => o.clone(),
        })
    }

    fn character(&self, o: &Obj) -> Result<CharPoly> {
        Ok(match o {
            Obj::Zero => Character::zero(),
            Obj::Line(w) => Character::monomial(*w, 1),
            Obj::Delta(i, w) => {
                let a = self.d.simple_root(*i);
                Character::from_terms((0..=w.0[*i]).map(|k| (*w - k * a, 1)))
            }
            Obj::E(word) => {
                let w = self.element(word)?;
                let desc = self.cat.sheaves().into_iter().find(|(x, _)| x.mat == w.mat).unwrap().1;
                char_of(&self.d, &desc)?
            }
            Obj::Boxed(layers) => {
                let mut ch = Character::zero();
                for o in layers.iter().flatten() {
                    ch = &ch + &self.character(o)?;
                }
                ch
            }
        })
    }

    fn is_known(&self, sp: Space, o: &Obj) -> bool {
        match o {
            Obj::Zero => true,
            Obj::Boxed(layers) => {
                self.known.contains(&(sp, self.key(o))) || layers.iter().flatten().all(|x| self.is_known(sp, x))
            }
            _ => self.known.contains(&(sp, self.key(o))),
        }
    }

    fn add(&mut self, sp: Space, o: &Obj) {
        match o {
            Obj::Zero => {}
            Obj::Boxed(layers) if layers.len() == 1 => {
                for x in &layers[0] {
                    self.add(sp, x);
                }
            }
            _ => {
                self.known.insert((sp, self.key(o)));
            }
        }
    }

    /// `obj` is known and filtered by `layers`: the unknown layers must be
    /// consecutive, and their span becomes known.
    fn cone(&mut self, sp: Space, obj: &Obj, layers: &[Vec<Obj>]) -> Result<()> {
        let ch = self.character(obj)?;
        let mut sum = Character::zero();
        for o in layers.iter().flatten() {
            sum = &sum + &self.character(o)?;
        }
        if ch != sum {
            return Err(Error::Invalid(format!("layers do not add up to {}", self.key(obj))));
        }
        let unknown: Vec<usize> =
            (0..layers.len()).filter(|&i| !layers[i].iter().all(|x| self.is_known(sp, x))).collect();
        if !self.is_known(sp, obj) {
            if unknown.is_empty() {
                self.add(sp, obj);
                return Ok(());
            }
            return Err(Error::Invalid(format!("{} is not known", self.key(obj))));
        }
        let (Some(&a), Some(&b)) = (unknown.first(), unknown.last()) else {
            return Err(Error::Invalid(format!("nothing new from {}", self.key(obj))));
        };
        if b - a + 1 != unknown.len() {
            let names: Vec<String> = unknown
                .iter()
                .flat_map(|&i| layers[i].iter().filter(|x| !self.is_known(sp, x)).map(|x| self.key(x)))
                .collect();
            return Err(Error::Invalid(format!("unreachable: {}", names.join(", "))));
        }
        self.add(sp, &Obj::Boxed(layers[a..=b].to_vec()));
        Ok(())
    }

    fn levi_root(&self) -> Result<usize> {
        match self.cat.parabolic.subset.as_slice() {
            [j] => Ok(*j),
            _ => Err(Error::Invalid("pushforward needs a minimal parabolic".into())),
        }
    }

    /// Image on `G/P` of an object on `G/B`, up to shift.
    fn push(&self, o: &Obj) -> Result<Obj> {
        let j = self.levi_root()?;
        Ok(match o {
            Obj::Line(w) => match super::pushforward_line(&self.d, j, w) {
                None => Obj::Zero,
                Some((_, h)) => self.normalize(&Obj::Delta(j, h))?,
            },
            _ => {
                self.check_p_module(o)?;
                o.clone()
            }
        })
    }

    fn check_p_module(&self, o: &Obj) -> Result<()> {
        let j = self.levi_root()?;
        match o {
            Obj::Zero => Ok(()),
            Obj::Line(w) if w.0[j] == 0 => Ok(()),
            Obj::Delta(i, _) if *i == j => Ok(()),
            Obj::Boxed(layers) => layers.iter().flatten().try_for_each(|x| self.check_p_module(x)),
            _ => Err(Error::Invalid(format!("{} is not a P-module", self.key(o)))),
        }
    }

    fn step(&mut self, s: &Step) -> Result<()> {
        match s {
            Step::Axiom(word) => {
                let w = self.element(word)?;
                let e = Obj::E(w.name());
                self.add(Space::P, &e);
                let desc = self.cat.sheaves().into_iter().find(|(x, _)| x.mat == w.mat).unwrap().1;
                if let [layer] = desc.layers.as_slice() {
                    if let [a] = layer.as_slice() {
                        let simple = match &a.kind {
                            crate::modcat::AtomKind::Line => Some(Obj::Line(a.twist)),
                            crate::modcat::AtomKind::DeltaRank1 { root, highest }
                            | crate::modcat::AtomKind::NablaRank1 { root, highest }
                                if a.twist.is_zero() =>
                            {
                                Some(self.normalize(&Obj::Delta(*root, *highest))?)
                            }
                            _ => None,
                        };
                        if let Some(o) = simple {
                            self.add(Space::P, &o);
                        }
                    }
                }
                Ok(())
            }
            Step::Cone { space, obj, layers } => {
                let obj = self.normalize(obj)?;
                let Obj::Boxed(layers) = self.normalize(&Obj::Boxed(layers.clone()))? else { unreachable!() };
                self.cone(*space, &obj, &layers)
            }
            Step::Tensor { space, obj, weyl, layers } => {
                let obj = self.normalize(obj)?;
                if !self.is_known(*space, &obj) {
                    return Err(Error::Invalid(format!("{} is not known", self.key(&obj))));
                }
                let Obj::Boxed(layers) = self.normalize(&Obj::Boxed(layers.clone()))? else { unreachable!() };
                let want = &weyl_character(&self.d, weyl)? * &self.character(&obj)?;
                let prod = Obj::Boxed(layers.clone());
                if self.character(&prod)? != want {
                    return Err(Error::Invalid(format!("box is not the tensor product with Delta({})", fmt_w(weyl, self.d.rank))));
                }
                self.add(*space, &Obj::Boxed(vec![vec![prod.clone()]]));
                self.known.insert((*space, self.key(&prod)));
                self.cone(*space, &prod, &layers)
            }
            Step::Koszul { space, weyl, at } => {
                let ws: Vec<Weight> = weyl_character(&self.d, weyl)?
                    .iter()
                    .flat_map(|(w, m)| std::iter::repeat_n(*w, *m as usize))
                    .collect();
                let n = ws.len();
                // exterior powers as characters
                let mut ext: Vec<CharPoly> = vec![Character::zero(); n + 1];
                for mask in 0u64..(1 << n) {
                    let mut s = Weight::ZERO;
                    for (t, w) in ws.iter().enumerate() {
                        if mask >> t & 1 == 1 {
                            s += *w;
                        }
                    }
                    ext[mask.count_ones() as usize].add_term(s, 1);
                }
                let mut total = Character::zero();
                for (k, e) in ext.iter().enumerate() {
                    let term = e.shift(*at - (k as i64) * *weyl);
                    total = if k % 2 == 0 { &total + &term } else { &total - &term };
                }
                if !total.is_zero() {
                    return Err(Error::Invalid("Koszul complex is not exact on characters".into()));
                }
                let terms: Vec<Obj> = (0..=n).map(|k| Obj::Line(*at - (k as i64) * *weyl)).collect();
                let unknown: Vec<&Obj> = terms.iter().filter(|o| !self.is_known(*space, o)).collect();
                match unknown.as_slice() {
                    [o] => {
                        let o = (*o).clone();
                        self.add(*space, &o);
                        Ok(())
                    }
                    [] => Err(Error::Invalid("nothing new from the Koszul complex".into())),
                    many => Err(Error::Invalid(format!(
                        "unreachable: {}",
                        many.iter().map(|o| self.key(o)).collect::<Vec<_>>().join(", ")
                    ))),
                }
            }
            Step::Generator { obj, via } => {
                let obj = self.normalize(obj)?;
                let via = self.normalize(via)?;
                let image = self.push(&obj)?;
                if image != via {
                    return Err(Error::Invalid(format!("{} pushes forward to {}", self.key(&obj), self.key(&image))));
                }
                if !self.is_known(Space::P, &via) {
                    return Err(Error::Invalid(format!("unreachable: {} on G/P", self.key(&via))));
                }
                self.add(Space::B, &obj);
                Ok(())
            }
            Step::Pushforward(obj) => {
                let obj = self.normalize(obj)?;
                if !self.is_known(Space::B, &obj) {
                    return Err(Error::Invalid(format!("unreachable: {} on G/B", self.key(&obj))));
                }
                let image = self.push(&obj)?;
                self.add(Space::P, &image);
                Ok(())
            }
        }
    }
}

pub fn ledger_check(script: &LedgerScript) -> Result<LedgerReport> {
    let cat = catalog(script.kind, &script.parabolic, script.family)?;
    let mut st = State { d: cat.datum(), cat, known: BTreeSet::new() };
    let mut replayed = 0;
    let mut failure = None;
    for (line, s) in &script.steps {
        match st.step(s) {
            Ok(()) => replayed += 1,
            Err(e) => {
                failure = Some(format!("line {line}: {e}"));
                break;
            }
        }
    }
    let missing = if failure.is_some() {
        Vec::new()
    } else {
        let mut m = Vec::new();
        for (sp, o) in &script.targets {
            let o = st.normalize(o)?;
            if !st.is_known(*sp, &o) {
                m.push(format!("{sp:?}:{}", st.key(&o)));
            }
        }
        m
    };
    Ok(LedgerReport { steps_replayed: replayed, known: st.known.len(), failure, missing_targets: missing })
}

/// The shipped certificate for `G2`, `P = P_a2`.
pub const G2_PA2_SCRIPT: &str = include_str!("../../ledgers/g2_pa2.ledger");
