//! Explicit finite-dimensional representations of the Lie algebra in
//! characteristic 0, reduced modulo the prime `2^61 - 1`, and the
//! cohomology of the associated homogeneous bundles on `G/B`.
//!
//! A module is a weight basis with the matrices of the simple lowering
//! operators `F_i` and, when available, the raising operators `E_i`.
//! `B` is the negative Borel, so the `F_i` alone determine the
//! `B`-structure.

use crate::charring::{dominant_rep, weyl_character, Character};
use crate::error::{Error, Result};
use crate::rootsys::{RootDatum, Weight};
use crate::CharPoly;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
pub fn fadd(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn fsub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

#[inline]
pub fn fmul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    fadd(lo, hi)
}

pub fn fpow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = fmul(r, a);
        }
        a = fmul(a, a);
        e >>= 1;
    }
    r
}

pub fn finv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero");
    fpow(a, MODULUS - 2)
}

pub fn fint(x: i64) -> u64 {
    if x >= 0 {
        (x as u64) % MODULUS
    } else {
        fsub(0, ((-x) as u64) % MODULUS)
    }
}

pub type SparseVec = Vec<(usize, u64)>;

/// Linear map given column by column: `cols[j]` is the image of basis
/// vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl Op {
    pub fn zero(rows: usize, cols: usize) -> Op {
        Op { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: HashMap<usize, u64> = HashMap::new();
        for &(j, a) in v {
            for &(i, b) in &self.cols[j] {
                let e = acc.entry(i).or_insert(0);
                *e = fadd(*e, fmul(a, b));
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|(_, x)| *x != 0).collect();
        out.sort_unstable();
        out
    }

    /// `self * other`.
    pub fn compose(&self, other: &Op) -> Op {
        Op { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn sub(&self, other: &Op) -> Op {
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, u64> = a.iter().copied().collect();
                for &(i, x) in b {
                    let e = acc.entry(i).or_insert(0);
                    *e = fsub(*e, x);
                }
                acc.into_iter().filter(|(_, x)| *x != 0).collect()
            })
            .collect();
        Op { rows: self.rows, cols }
    }

    pub fn scale(&self, k: u64) -> Op {
        Op {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.iter().map(|&(i, x)| (i, fmul(x, k))).filter(|x| x.1 != 0).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    fn transpose_neg(&self) -> Op {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, x) in c {
                cols[i].push((j, fsub(0, x)));
            }
        }
        Op { rows: self.cols.len(), cols }
    }
}

#[derive(Clone, Debug)]
pub struct Module {
    pub rank: usize,
    pub weights: Vec<Weight>,
    pub f: Vec<Op>,
    /// Raising operators when the module carries them (Levi part of a
    /// parabolic, or all of `g`).
    pub e: Vec<Option<Op>>,
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn character(&self) -> CharPoly {
        let mut c = Character::zero();
        for w in &self.weights {
            c.add_term(*w, 1);
        }
        c
    }

    pub fn zero(rank: usize) -> Module {
        Module { rank, weights: Vec::new(), f: vec![Op::zero(0, 0); rank], e: vec![Some(Op::zero(0, 0)); rank] }
    }

    pub fn line(rank: usize, lambda: Weight) -> Module {
        Module { rank, weights: vec![lambda], f: vec![Op::zero(1, 1); rank], e: vec![Some(Op::zero(1, 1)); rank] }
    }

    /// The irreducible module of the Levi of `P_{alpha_i}` with highest
    /// weight `lambda`, inflated with the other root vectors acting by 0.
    pub fn rank1(d: &RootDatum, i: usize, lambda: Weight) -> Result<Module> {
        let n = lambda.0[i];
        if n < 0 {
            return Err(Error::Module(format!("rank-1 highest weight {lambda} has negative pairing with alpha_{}", i + 1)));
        }
        let dim = n as usize + 1;
        let a = d.simple_root(i);
        let weights: Vec<Weight> = (0..dim).map(|k| lambda - (k as i64) * a).collect();
        let mut f = vec![Op::zero(dim, dim); d.rank];
        let mut e = vec![Some(Op::zero(dim, dim)); d.rank];
        let mut fi = Op::zero(dim, dim);
        let mut ei = Op::zero(dim, dim);
        for k in 0..dim {
            if k + 1 < dim {
                fi.cols[k].push((k + 1, 1));
            }
            if k > 0 {
                ei.cols[k].push((k - 1, fint(k as i64 * (n - k as i64 + 1))));
            }
        }
        f[i] = fi;
        e[i] = Some(ei);
        for (j, ej) in e.iter_mut().enumerate() {
            if j != i && dim > 1 {
                // other simple roots lie in the unipotent radical of P_alpha
                *ej = None;
            }
        }
        Ok(Module { rank: d.rank, weights, f, e })
    }

    /// Irreducible `g`-module of dominant highest weight `lambda`.
    pub fn weyl(d: &RootDatum, lambda: Weight) -> Result<Module> {
        if !d.is_dominant(&lambda) {
            return Err(Error::NotDominant(format!("{lambda}")));
        }
        let ch = weyl_character(d, &lambda)?;
        let all: Vec<usize> = (0..d.rank).collect();
        let m = Module::levi_irreducible(d, &all, lambda)?;
        if m.character() != ch {
            return Err(Error::Module(format!("V({lambda}) built with the wrong character")));
        }
        Ok(m)
    }

    /// Irreducible module of the Levi factor on `levi` with highest weight
    /// `lambda`, inflated: the other lowering operators act by 0 and the
    /// other raising operators are absent.
    pub fn levi_irreducible(d: &RootDatum, levi: &[usize], lambda: Weight) -> Result<Module> {
        if levi.iter().any(|&i| lambda.0[i] < 0) {
            return Err(Error::NotDominant(format!("{lambda} for the Levi {levi:?}")));
        }
        let r = d.rank;
        let mut weights: Vec<Weight> = vec![lambda];
        let mut basis_of: HashMap<Weight, Vec<usize>> = HashMap::from([(lambda, vec![0])]);
        let mut fcols: Vec<Vec<SparseVec>> = vec![vec![Vec::new()]; r];
        let mut ecols: Vec<Vec<SparseVec>> = vec![vec![Vec::new()]; r];
        let mut level: BTreeSet<Weight> = levi.iter().filter(|&&i| lambda.0[i] > 0).map(|&i| lambda - d.simple_root(i)).collect();
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for nu in level {
                // candidates F_i b with b of weight nu + alpha_i
                let mut cands: Vec<(usize, usize, Vec<SparseVec>)> = Vec::new();
                for &i in levi {
                    let above = nu + d.simple_root(i);
                    for &b in basis_of.get(&above).map(|v| v.as_slice()).unwrap_or(&[]) {
                        // E_j F_i b = F_i E_j b + delta_ij <wt b, alpha_i^vee> b
                        let mut img = vec![Vec::new(); r];
                        for &j in levi {
                            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
                            for &(c, x) in &ecols[j][b] {
                                for &(t, y) in &fcols[i][c] {
                                    let e = acc.entry(t).or_insert(0);
                                    *e = fadd(*e, fmul(x, y));
                                }
                            }
                            if i == j {
                                let e = acc.entry(b).or_insert(0);
                                *e = fadd(*e, fint(above.0[i]));
                            }
                            img[j] = acc.into_iter().filter(|(_, x)| *x != 0).collect::<SparseVec>();
                        }
                        cands.push((i, b, img));
                    }
                }
                let mut coord: HashMap<(usize, usize), usize> = HashMap::new();
                for (_, _, img) in &cands {
                    for (j, v) in img.iter().enumerate() {
                        for &(t, _) in v {
                            let n = coord.len();
                            coord.entry((j, t)).or_insert(n);
                        }
                    }
                }
                let ncoord = coord.len();
                let dense = |img: &Vec<SparseVec>| -> Vec<u64> {
                    let mut v = vec![0u64; ncoord];
                    for (j, s) in img.iter().enumerate() {
                        for &(t, x) in s {
                            v[coord[&(j, t)]] = x;
                        }
                    }
                    v
                };
                let mut solver = Solver::new(ncoord);
                let mut chosen: Vec<usize> = Vec::new();
                let mut exprs: Vec<Vec<(usize, u64)>> = Vec::new();
                for (k, (_, _, img)) in cands.iter().enumerate() {
                    match solver.insert(dense(img)) {
                        Ok(idx) => {
                            debug_assert_eq!(idx, chosen.len());
                            chosen.push(k);
                            exprs.push(vec![(idx, 1)]);
                        }
                        Err(combo) => exprs.push(combo),
                    }
                }
                if chosen.is_empty() {
                    continue;
                }
                let start = weights.len();
                let ids: Vec<usize> = (0..chosen.len()).map(|t| start + t).collect();
                for &k in &chosen {
                    weights.push(nu);
                    for i in 0..r {
                        fcols[i].push(Vec::new());
                        ecols[i].push(cands[k].2[i].clone());
                    }
                }
                for (k, (i, b, _)) in cands.iter().enumerate() {
                    fcols[*i][*b] = exprs[k].iter().map(|&(t, x)| (ids[t], x)).collect();
                }
                basis_of.insert(nu, ids);
                for &i in levi {
                    next.insert(nu - d.simple_root(i));
                }
            }
            level = next;
        }
        let n = weights.len();
        let f = fcols.into_iter().map(|cols| Op { rows: n, cols }).collect();
        let e = ecols
            .into_iter()
            .enumerate()
            .map(|(i, cols)| (levi.contains(&i) || n == 1).then_some(Op { rows: n, cols }))
            .collect();
        Ok(Module { rank: r, weights, f, e })
    }

    /// `M (x) nu`; raising operators survive only where `nu` is orthogonal.
    pub fn shift(&self, nu: Weight) -> Module {
        let e = self
            .e
            .iter()
            .enumerate()
            .map(|(i, e)| if nu.0[i] == 0 { e.clone() } else { None })
            .collect();
        Module { rank: self.rank, weights: self.weights.iter().map(|w| *w + nu).collect(), f: self.f.clone(), e }
    }

    pub fn dual(&self) -> Module {
        Module {
            rank: self.rank,
            weights: self.weights.iter().map(|w| -*w).collect(),
            f: self.f.iter().map(|o| o.transpose_neg()).collect(),
            e: self.e.iter().map(|o| o.as_ref().map(|o| o.transpose_neg())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        let n = self.dim();
        let m = other.dim();
        let join = |a: &Op, b: &Op| -> Op {
            let mut cols = a.cols.clone();
            cols.extend(b.cols.iter().map(|c| c.iter().map(|&(i, x)| (i + n, x)).collect()));
            Op { rows: n + m, cols }
        };
        Module {
            rank: self.rank,
            weights: self.weights.iter().chain(&other.weights).copied().collect(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| join(a, b)).collect(),
            e: self
                .e
                .iter()
                .zip(&other.e)
                .map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => Some(join(a, b)),
                    _ => None,
                })
                .collect(),
        }
    }

    pub fn tensor(&self, other: &Module) -> Module {
        let n = self.dim();
        let m = other.dim();
        let idx = |a: usize, b: usize| a * m + b;
        let mut weights = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                weights.push(self.weights[a] + other.weights[b]);
            }
        }
        let tens = |x: &Op, y: &Op| -> Op {
            let mut cols = Vec::with_capacity(n * m);
            for a in 0..n {
                for b in 0..m {
                    let mut c: SparseVec = Vec::new();
                    for &(a2, v) in &x.cols[a] {
                        c.push((idx(a2, b), v));
                    }
                    for &(b2, v) in &y.cols[b] {
                        c.push((idx(a, b2), v));
                    }
                    c.sort_unstable();
                    cols.push(c);
                }
            }
            Op { rows: n * m, cols }
        };
        Module {
            rank: self.rank,
            weights,
            f: self.f.iter().zip(&other.f).map(|(x, y)| tens(x, y)).collect(),
            e: self
                .e
                .iter()
                .zip(&other.e)
                .map(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => Some(tens(x, y)),
                    _ => None,
                })
                .collect(),
        }
    }

    /// Forget the raising operators.
    pub fn to_borel(&self) -> Module {
        Module { rank: self.rank, weights: self.weights.clone(), f: self.f.clone(), e: vec![None; self.rank] }
    }

    pub fn unit_vector(&self, i: usize) -> SparseVec {
        vec![(i, 1)]
    }

    /// Basis indices of the weight space of `nu`.
    pub fn weight_space(&self, nu: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == *nu).collect()
    }

    /// Smallest subspace containing `gens` and stable under all `F_i` and
    /// under `E_i` for `i` in `levi`.
    pub fn generate(&self, gens: &[SparseVec], levi: &[usize]) -> Result<Subspace> {
        let mut ops: Vec<&Op> = self.f.iter().collect();
        for &i in levi {
            ops.push(self.e[i].as_ref().ok_or_else(|| Error::Module(format!("no E_{} on this module", i + 1)))?);
        }
        let mut sub = Subspace::new(self.dim());
        let mut queue: Vec<SparseVec> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if let Some(row) = sub.insert(&v) {
                for o in &ops {
                    let w = o.apply(&row);
                    if !w.is_empty() {
                        queue.push(w);
                    }
                }
            }
        }
        Ok(sub)
    }

    /// The subspace spanned by the given basis vectors (not checked for
    /// stability).
    pub fn span(&self, idx: &[usize]) -> Subspace {
        let mut s = Subspace::new(self.dim());
        for &i in idx {
            s.insert(&vec![(i, 1)]);
        }
        s
    }

    pub fn is_stable(&self, s: &Subspace) -> bool {
        s.rows.iter().all(|r| {
            self.f.iter().chain(self.e.iter().flatten()).all(|o| s.contains(&o.apply(r)))
        })
    }

    pub fn quotient(&self, s: &Subspace) -> Module {
        let pivots: std::collections::HashSet<usize> = s.pivots.iter().copied().collect();
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !pivots.contains(i)).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let n = keep.len();
        let induced = |o: &Op| -> Op {
            let cols = keep
                .iter()
                .map(|&j| {
                    let v = s.reduce(&o.cols[j]);
                    let mut c: SparseVec = v.into_iter().map(|(i, x)| (pos[&i], x)).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            Op { rows: n, cols }
        };
        Module {
            rank: self.rank,
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
            f: self.f.iter().map(&induced).collect(),
            e: self.e.iter().map(|o| o.as_ref().map(&induced)).collect(),
        }
    }

    pub fn submodule(&self, s: &Subspace) -> Module {
        let n = s.rows.len();
        let weights: Vec<Weight> = s.rows.iter().map(|r| self.weights[r[0].0]).collect();
        let pos: HashMap<usize, usize> = s.pivots.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let induced = |o: &Op| -> Op {
            let cols = s
                .rows
                .iter()
                .map(|r| {
                    let v = o.apply(r);
                    let mut c: SparseVec =
                        v.iter().filter_map(|&(i, x)| pos.get(&i).map(|&k| (k, x))).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            Op { rows: n, cols }
        };
        Module {
            rank: self.rank,
            weights,
            f: self.f.iter().map(&induced).collect(),
            e: self.e.iter().map(|o| o.as_ref().map(&induced)).collect(),
        }
    }
}

/// Subspace in reduced row echelon form; each row is normalized to 1 at
/// its pivot and vanishes at every other pivot.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: usize,
    pub rows: Vec<SparseVec>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, u64> = v.iter().copied().collect();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = acc.get(&p).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            for &(i, x) in r {
                let e = acc.entry(i).or_insert(0);
                *e = fsub(*e, fmul(c, x));
            }
        }
        acc.into_iter().filter(|(_, x)| *x != 0).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert `v`; returns the new row when `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let w = self.reduce(v);
        let &(p, c) = w.first()?;
        let inv = finv(c);
        let row: SparseVec = w.iter().map(|&(i, x)| (i, fmul(x, inv))).collect();
        for r in self.rows.iter_mut() {
            let c = r.iter().find(|(i, _)| *i == p).map(|x| x.1).unwrap_or(0);
            if c != 0 {
                let mut acc: BTreeMap<usize, u64> = r.iter().copied().collect();
                for &(i, x) in &row {
                    let e = acc.entry(i).or_insert(0);
                    *e = fsub(*e, fmul(c, x));
                }
                *r = acc.into_iter().filter(|(_, x)| *x != 0).collect();
            }
        }
        self.rows.push(row.clone());
        self.pivots.push(p);
        Some(row)
    }
}

/// Incremental Gaussian elimination that also records how each reduced
/// row is expressed in the independent inputs.
struct Solver {
    n: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    count: usize,
}

impl Solver {
    fn new(n: usize) -> Solver {
        Solver { n, rows: Vec::new(), count: 0 }
    }

    /// `Ok(index)` if independent, else the expression of `v` in the
    /// previously accepted vectors.
    fn insert(&mut self, mut v: Vec<u64>) -> std::result::Result<usize, Vec<(usize, u64)>> {
        debug_assert_eq!(v.len(), self.n);
        let mut combo = vec![0u64; self.count + 1];
        combo[self.count] = 1;
        for (p, row, rc) in &self.rows {
            let c = v[*p];
            if c == 0 {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a = fsub(*a, fmul(c, *b));
            }
            for (a, b) in combo.iter_mut().zip(rc) {
                *a = fsub(*a, fmul(c, *b));
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(p) => {
                let inv = finv(v[p]);
                for a in v.iter_mut() {
                    *a = fmul(*a, inv);
                }
                for a in combo.iter_mut() {
                    *a = fmul(*a, inv);
                }
                self.rows.push((p, v, combo));
                for r in self.rows.iter_mut() {
                    r.2.resize(self.count + 1, 0);
                }
                self.count += 1;
                Ok(self.count - 1)
            }
            None => {
                // 0 = v - sum(...) means v = -(combo without the last entry)
                let expr: Vec<(usize, u64)> =
                    combo[..self.count].iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, &x)| (i, fsub(0, x))).collect();
                Err(expr)
            }
        }
    }
}

/// Rank modulo `MODULUS` of the span of sparse vectors, each a list of
/// `(index, value)` pairs in any order with possible repeats.
pub fn sparse_rank(vectors: Vec<Vec<(usize, u64)>>) -> usize {
    let mut vs: Vec<Vec<(usize, u64)>> = vectors
        .into_iter()
        .map(|mut v| {
            v.sort_unstable_by_key(|e| e.0);
            let mut out: Vec<(usize, u64)> = Vec::with_capacity(v.len());
            for (i, x) in v {
                match out.last_mut() {
                    Some(l) if l.0 == i => l.1 = fadd(l.1, x),
                    _ => out.push((i, x)),
                }
            }
            out.retain(|e| e.1 != 0);
            out
        })
        .filter(|v| !v.is_empty())
        .collect();
    vs.sort_by_key(|v| v.len());
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut scratch = Vec::new();
    for mut v in vs {
        while let Some(&(lead, c)) = v.first() {
            let Some(p) = pivots.get(&lead) else {
                let inv = finv(c);
                v.iter_mut().for_each(|e| e.1 = fmul(e.1, inv));
                pivots.insert(lead, v);
                break;
            };
            // v - c * p, both sorted with leading coefficient cancelling
            scratch.clear();
            let (mut i, mut j) = (1, 1);
            while i < v.len() || j < p.len() {
                if j == p.len() || (i < v.len() && v[i].0 < p[j].0) {
                    scratch.push(v[i]);
                    i += 1;
                } else if i == v.len() || p[j].0 < v[i].0 {
                    scratch.push((p[j].0, fsub(0, fmul(c, p[j].1))));
                    j += 1;
                } else {
                    let x = fsub(v[i].1, fmul(c, p[j].1));
                    if x != 0 {
                        scratch.push((v[i].0, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            std::mem::swap(&mut v, &mut scratch);
        }
    }
    pivots.len()
}

/// Lowering operators for every positive root, built as iterated
/// commutators of the simple ones, with their structure constants.
#[derive(Clone, Debug)]
pub struct RootVectors {
    /// For a non-simple root `k`: `F_k = [F_i, F_j]` with `(i, j)` simple
    /// index and root index.
    recipe: Vec<Option<(usize, usize)>>,
    /// `[F_a, F_b] = c F_{a+b}`; entry `(a, b) -> (index of a+b, c)`.
    pub brackets: HashMap<(usize, usize), (usize, u64)>,
}

impl RootVectors {
    pub fn new(d: &RootDatum) -> Result<RootVectors> {
        let n = d.positive.len();
        let mut recipe = vec![None; n];
        for k in 0..n {
            let r = &d.positive[k];
            if r.height() == 1 {
                continue;
            }
            let (i, j) = (0..d.rank)
                .find_map(|i| {
                    let w = r.weight - d.simple_root(i);
                    d.positive.iter().position(|s| s.weight == w).map(|j| (i, j))
                })
                .ok_or_else(|| Error::Module("root without a simple predecessor".into()))?;
            recipe[k] = Some((i, j));
        }
        let mut rv = RootVectors { recipe, brackets: HashMap::new() };
        let theta = d.positive[d.highest_root()].weight;
        let adj = Module::weyl(d, theta)?;
        let fs = rv.operators(d, &adj);
        for a in 0..n {
            for b in 0..n {
                let sum = d.positive[a].weight + d.positive[b].weight;
                let comm = fs[a].compose(&fs[b]).sub(&fs[b].compose(&fs[a]));
                match d.positive.iter().position(|r| r.weight == sum) {
                    Some(c) => {
                        let (j, x) = fs[c].cols.iter().enumerate().find_map(|(j, col)| col.first().map(|&(i, x)| ((j, i), x))).unwrap();
                        let y = comm.cols[j.0].iter().find(|(i, _)| *i == j.1).map(|t| t.1).unwrap_or(0);
                        let coef = fmul(y, finv(x));
                        if comm != fs[c].scale(coef) {
                            return Err(Error::Module("root vectors are not proportional".into()));
                        }
                        if coef != 0 {
                            rv.brackets.insert((a, b), (c, coef));
                        }
                    }
                    None => {
                        if !comm.is_zero() {
                            return Err(Error::Module("bracket outside the root system".into()));
                        }
                    }
                }
            }
        }
        Ok(rv)
    }

    pub fn operators(&self, d: &RootDatum, m: &Module) -> Vec<Op> {
        let n = d.positive.len();
        let mut out: Vec<Option<Op>> = vec![None; n];
        for k in 0..n {
            let simple = (0..d.rank).find(|&i| d.positive[k].weight == d.simple_root(i));
            if let Some(i) = simple {
                out[k] = Some(m.f[i].clone());
            }
        }
        for k in 0..n {
            if let Some((i, j)) = self.recipe[k] {
                let fj = out[j].clone().expect("lower roots first");
                let fi = &m.f[i];
                out[k] = Some(fi.compose(&fj).sub(&fj.compose(fi)));
            }
        }
        out.into_iter().map(|o| o.unwrap()).collect()
    }
}

/// `H^*(G/B, L(M))` as a graded `G`-character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    /// degree -> dominant highest weight -> multiplicity
    pub parts: BTreeMap<usize, BTreeMap<Weight, i64>>,
    /// False when a Chevalley-Eilenberg computation modulo the prime
    /// left cohomology in two degrees for one isotypic component.
    pub certified: bool,
    /// Isotypic components that needed an explicit complex.
    pub resolved: Vec<Weight>,
}

impl Cohomology {
    pub fn degree_character(&self, d: &RootDatum, i: usize) -> Result<CharPoly> {
        let mut ch = Character::zero();
        if let Some(p) = self.parts.get(&i) {
            for (l, m) in p {
                ch = &ch + &weyl_character(d, l)?.scale(*m);
            }
        }
        Ok(ch)
    }

    pub fn degree_dim(&self, d: &RootDatum, i: usize) -> Result<i64> {
        let mut s = 0;
        if let Some(p) = self.parts.get(&i) {
            for (l, m) in p {
                s += *m * d.weyl_dim(l)? as i64;
            }
        }
        Ok(s)
    }

    pub fn is_zero_above(&self, i: usize) -> bool {
        self.parts.iter().all(|(k, p)| *k <= i || p.values().all(|m| *m == 0))
    }

    /// Euler characteristic as an integer.
    pub fn euler(&self, d: &RootDatum) -> Result<i64> {
        let mut s = 0;
        for &k in self.parts.keys() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            s += sign * self.degree_dim(d, k)?;
        }
        Ok(s)
    }
}

/// Bott: `(degree, dominant weight)` for a line, or `None` when singular.
pub fn bott(d: &RootDatum, mu: &Weight) -> Option<(usize, Weight)> {
    let mut v = *mu + d.rho;
    if d.positive.iter().any(|r| crate::rootsys::pair(&v, &r.coroot) == 0) {
        return None;
    }
    let mut len = 0;
    while let Some(i) = (0..d.rank).find(|&i| v.0[i] < 0) {
        v = d.reflect(i, &v);
        len += 1;
    }
    Some((len, v - d.rho))
}

/// Cohomology of the bundle attached to the `B`-module `m`.
pub fn cohomology(d: &RootDatum, rv: &RootVectors, m: &Module) -> Result<Cohomology> {
    let mut e1: BTreeMap<Weight, BTreeMap<usize, i64>> = BTreeMap::new();
    for w in &m.weights {
        if let Some((k, lam)) = bott(d, w) {
            *e1.entry(lam).or_default().entry(k).or_insert(0) += 1;
        }
    }
    let mut out = Cohomology { parts: BTreeMap::new(), certified: true, resolved: Vec::new() };
    for (lam, degs) in e1 {
        let mults: BTreeMap<usize, i64> = if degs.len() == 1 {
            degs
        } else {
            out.resolved.push(lam);
            let (res, cert) = isotypic_ce(d, rv, m, &lam, &degs)?;
            out.certified &= cert;
            res
        };
        for (k, c) in mults {
            if c != 0 {
                *out.parts.entry(k).or_default().entry(lam).or_insert(0) += c;
            }
        }
    }
    Ok(out)
}

/// Multiplicity of `V(lambda)` in each `H^k(G/B, L(M))`, as
/// `dim H^k(n^-, V(lambda)^* (x) M)_0` from the Chevalley-Eilenberg complex.
pub(crate) fn isotypic_ce(
    d: &RootDatum,
    rv: &RootVectors,
    m: &Module,
    lam: &Weight,
    e1: &BTreeMap<usize, i64>,
) -> Result<(BTreeMap<usize, i64>, bool)> {
    let v = Module::weyl(d, *lam)?.dual();
    let fv = rv.operators(d, &v);
    let fm = rv.operators(d, &m.to_borel());
    let npos = d.positive.len();
    let mut v_by_w: HashMap<Weight, Vec<usize>> = HashMap::new();
    for (i, w) in v.weights.iter().enumerate() {
        v_by_w.entry(*w).or_default().push(i);
    }
    let mut m_by_w: HashMap<Weight, Vec<usize>> = HashMap::new();
    for (i, w) in m.weights.iter().enumerate() {
        m_by_w.entry(*w).or_default().push(i);
    }
    // basis of N_nu: pairs (a, b)
    let mut cache: HashMap<Weight, (Vec<(usize, usize)>, HashMap<(usize, usize), usize>)> = HashMap::new();
    let mut space = |nu: Weight| -> (Vec<(usize, usize)>, HashMap<(usize, usize), usize>) {
        cache
            .entry(nu)
            .or_insert_with(|| {
                let mut basis = Vec::new();
                for (wa, ia) in &v_by_w {
                    if let Some(ib) = m_by_w.get(&(nu - *wa)) {
                        for &a in ia {
                            for &b in ib {
                                basis.push((a, b));
                            }
                        }
                    }
                }
                basis.sort_unstable();
                let pos = basis.iter().enumerate().map(|(i, x)| (*x, i)).collect();
                (basis, pos)
            })
            .clone()
    };
    let subsets_by_size: Vec<Vec<u32>> = {
        let mut v = vec![Vec::new(); npos + 1];
        for s in 0u32..(1 << npos) {
            v[s.count_ones() as usize].push(s);
        }
        v
    };
    let wt = |s: u32| -> Weight {
        let mut w = Weight::ZERO;
        for k in 0..npos {
            if s >> k & 1 == 1 {
                w = w - d.positive[k].weight;
            }
        }
        w
    };
    // offsets of each subset's block in C^k
    let mut blocks: Vec<HashMap<u32, (usize, usize)>> = Vec::new();
    let mut dims = Vec::new();
    for k in 0..=npos {
        let mut off = 0;
        let mut map = HashMap::new();
        for &s in &subsets_by_size[k] {
            let n = space(wt(s)).0.len();
            map.insert(s, (off, n));
            off += n;
        }
        blocks.push(map);
        dims.push(off);
    }
    let mut ranks = vec![0usize; npos + 1];
    for k in 0..npos {
        if dims[k] == 0 || dims[k + 1] == 0 {
            continue;
        }
        // column vectors of d: C^k -> C^{k+1}
        let mut mat: Vec<Vec<(usize, u64)>> = vec![Vec::new(); dims[k]];
        for &s2 in &subsets_by_size[k + 1] {
            let (roff, rn) = blocks[k + 1][&s2];
            if rn == 0 {
                continue;
            }
            let (_, rpos) = space(wt(s2));
            let elems: Vec<usize> = (0..npos).filter(|&t| s2 >> t & 1 == 1).collect();
            // action terms
            for (i, &bi) in elems.iter().enumerate() {
                let s = s2 & !(1 << bi);
                let (coff, cn) = blocks[k][&s];
                if cn == 0 {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { MODULUS - 1 };
                let (cbasis, _) = space(wt(s));
                for (col, &(a, b)) in cbasis.iter().enumerate() {
                    for &(a2, x) in &fv[bi].cols[a] {
                        mat[coff + col].push((roff + rpos[&(a2, b)], fmul(sign, x)));
                    }
                    for &(b2, x) in &fm[bi].cols[b] {
                        mat[coff + col].push((roff + rpos[&(a, b2)], fmul(sign, x)));
                    }
                }
            }
            // bracket terms
            for i in 0..elems.len() {
                for j in (i + 1)..elems.len() {
                    let Some(&(g, c)) = rv.brackets.get(&(elems[i], elems[j])) else { continue };
                    let rest = s2 & !(1 << elems[i]) & !(1 << elems[j]);
                    if rest >> g & 1 == 1 {
                        continue;
                    }
                    let t = rest | (1 << g);
                    let before = (rest & ((1u32 << g) - 1)).count_ones() as usize;
                    let neg = (i + j + before) % 2 == 1;
                    let coef = if neg { fsub(0, c) } else { c };
                    let (coff, cn) = blocks[k][&t];
                    if cn == 0 {
                        continue;
                    }
                    for r in 0..cn {
                        mat[coff + r].push((roff + r, coef));
                    }
                }
            }
        }
        ranks[k] = sparse_rank(mat);
    }
    let mut res = BTreeMap::new();
    for k in 0..=npos {
        let h = dims[k] as i64 - ranks[k] as i64 - if k > 0 { ranks[k - 1] as i64 } else { 0 };
        if h != 0 {
            res.insert(k, h);
        }
    }
    let euler_e1: i64 = e1.iter().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).sum();
    let euler: i64 = res.iter().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).sum();
    if euler != euler_e1 {
        return Err(Error::Module(format!("Euler characteristic mismatch at {lam}")));
    }
    let certified = res.len() <= 1;
    Ok((res, certified))
}

/// Dominant weight `lambda` with `dim V(lambda)`; used for quick checks.
pub fn dominant_of(d: &RootDatum, w: &Weight) -> Weight {
    dominant_rep(d, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootType;

    #[test]
    fn g2_weyl_modules() {
        let d = RootDatum::of(RootType::G2);
        for (l, n) in [([1, 0], 7), ([0, 1], 14), ([2, 0], 27), ([1, 1], 64)] {
            let m = Module::weyl(&d, Weight::new(&l)).unwrap();
            assert_eq!(m.dim(), n);
            assert!(m.is_stable(&m.span(&[])));
        }
    }

    #[test]
    fn ce_matches_bott_on_lines() {
        for kind in [RootType::A2, RootType::B2, RootType::G2] {
            let d = RootDatum::of(kind);
            let rv = RootVectors::new(&d).unwrap();
            for mu in [[0, 0], [-2, 1], [1, -3], [-3, -2], [2, 2]] {
                let mu = Weight::new(&mu);
                let m = Module::line(d.rank, mu);
                if let Some((k, lam)) = bott(&d, &mu) {
                    let e1 = BTreeMap::from([(k, 1)]);
                    let (res, cert) = isotypic_ce(&d, &rv, &m, &lam, &e1).unwrap();
                    assert!(cert);
                    assert_eq!(res, e1, "{kind:?} {mu}");
                }
            }
        }
    }

    #[test]
    fn global_sections_of_weyl_module() {
        let d = RootDatum::of(RootType::B2);
        let rv = RootVectors::new(&d).unwrap();
        let v = Module::weyl(&d, Weight::new(&[1, 1])).unwrap().to_borel();
        let h = cohomology(&d, &rv, &v).unwrap();
        assert_eq!(h.parts.len(), 1);
        assert_eq!(h.parts[&0], BTreeMap::from([(Weight::new(&[1, 1]), 1)]));
        assert!(!h.resolved.is_empty());
    }
}
