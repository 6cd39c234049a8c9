//! Frobenius direct image of the structure sheaf on a smooth quadric:
//! Hilbert function of the truncated coordinate ring, spin-sheaf ranks and
//! the multiplicities of the summands.

use crate::charring::Character;
use crate::error::{Error, Result};
use crate::modcat::{char_of, catalog, quadric_catalog, quadric_type, Catalog, Family};
use crate::rootsys::{ParabolicSpec, RootDatum, RootType, Weight};
use serde_json::{json, Value};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadricParams {
    pub n: usize,
    pub p: u64,
}

impl QuadricParams {
    pub fn new(n: usize, p: u64) -> Result<QuadricParams> {
        if n < 3 {
            return Err(Error::Invalid(format!("quadric dimension {n} < 3")));
        }
        if p < 3 || (2..p).take_while(|k| k * k <= p).any(|k| p % k == 0) {
            return Err(Error::Invalid(format!("{p} is not an odd prime")));
        }
        Ok(QuadricParams { n, p })
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// Number of variables, `dim E`.
    pub fn vars(&self) -> usize {
        self.n + 2
    }

    /// Above this degree the truncated ring vanishes.
    pub fn top_degree(&self) -> usize {
        (self.p as usize - 1) * self.vars()
    }
}

/// Coefficient of `t^j` in `(1 - t^2) ((1 - t^p) / (1 - t))^(n + 2)`.
/// Agrees with [`abar_dim`] only while `q` is a nonzerodivisor.
pub fn abar_series(j: usize, q: &QuadricParams) -> i64 {
    let p = q.p as usize;
    let mut poly = vec![1i64];
    for _ in 0..q.vars() {
        let mut next = vec![0i64; poly.len() + p - 1];
        for (i, c) in poly.iter().enumerate() {
            for k in 0..p {
                next[i + k] += c;
            }
        }
        poly = next;
    }
    let at = |k: usize| poly.get(k).copied().unwrap_or(0);
    at(j) - if j >= 2 { at(j - 2) } else { 0 }
}

/// Monomials of `k[x]/(x_i^p)` by degree, split by torus weight. The
/// variables are `x_1, x_-1, ..., x_{m+1}, x_-(m+1)` followed by `x_0` when
/// `n` is odd.
pub struct TruncatedRing {
    pub params: QuadricParams,
    blocks: Vec<HashMap<Vec<i64>, Vec<Vec<u8>>>>,
}

impl TruncatedRing {
    pub fn new(q: QuadricParams) -> TruncatedRing {
        let nv = q.vars();
        let pairs = q.m() + 1;
        let p = q.p as u8;
        let mut blocks: Vec<HashMap<Vec<i64>, Vec<Vec<u8>>>> = vec![HashMap::new(); q.top_degree() + 1];
        let mut e = vec![0u8; nv];
        loop {
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            let wt: Vec<i64> = (0..pairs).map(|k| e[2 * k] as i64 - e[2 * k + 1] as i64).collect();
            blocks[deg].entry(wt).or_default().push(e.clone());
            let mut i = 0;
            while i < nv && e[i] == p - 1 {
                e[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
            e[i] += 1;
        }
        for b in blocks.iter_mut() {
            for v in b.values_mut() {
                v.sort();
            }
        }
        TruncatedRing { params: q, blocks }
    }

    pub fn dim(&self, j: usize) -> usize {
        self.blocks.get(j).map_or(0, |b| b.values().map(|v| v.len()).sum())
    }

    /// `q * m` as a list of monomials with coefficients.
    fn times_q(&self, mono: &[u8]) -> Vec<(Vec<u8>, u64)> {
        let p = self.params.p as u8;
        let pairs = self.params.m() + 1;
        let mut out = Vec::new();
        for k in 0..pairs {
            let mut t = mono.to_vec();
            t[2 * k] += 1;
            t[2 * k + 1] += 1;
            if t[2 * k] < p && t[2 * k + 1] < p {
                out.push((t, 1));
            }
        }
        if self.params.odd() {
            let z = 2 * pairs;
            let mut t = mono.to_vec();
            t[z] += 2;
            if t[z] < p {
                out.push((t, 1));
            }
        }
        out
    }

    /// Rank over `F_p` of multiplication by `q` from degree `j - 2` to `j`.
    pub fn q_rank(&self, j: usize) -> usize {
        if j < 2 || j >= self.blocks.len() {
            return 0;
        }
        let mut total = 0;
        for (wt, src) in &self.blocks[j - 2] {
            let Some(dst) = self.blocks[j].get(wt) else { continue };
            let pos: HashMap<&[u8], usize> = dst.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
            let cols: Vec<Vec<(usize, u64)>> = src
                .iter()
                .map(|m| self.times_q(m).into_iter().map(|(t, c)| (pos[t.as_slice()], c)).collect())
                .collect();
            total += rank_mod(cols, self.params.p);
        }
        total
    }

    pub fn abar_dim(&self, j: usize) -> usize {
        self.dim(j) - self.q_rank(j)
    }
}

/// Rank over `F_p` of a set of sparse vectors.
pub fn rank_mod(vectors: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    let inv = |a: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut v in vectors {
        v.sort_unstable_by_key(|e| e.0);
        v.retain(|e| e.1 % p != 0);
        while let Some(&(lead, c)) = v.first() {
            let Some(pv) = pivots.get(&lead) else {
                let i = inv(c);
                v.iter_mut().for_each(|e| e.1 = e.1 * i % p);
                pivots.insert(lead, v);
                break;
            };
            let mut acc: std::collections::BTreeMap<usize, u64> = v.iter().copied().collect();
            for &(i, x) in pv {
                let e = acc.entry(i).or_insert(0);
                *e = (*e + p - c * x % p) % p;
            }
            v = acc.into_iter().filter(|e| e.1 != 0).collect();
        }
    }
    pivots.len()
}

/// `dim A-bar_j` for `A-bar = k[x] / (x_i^p, q)` over `F_p`.
pub fn abar_dim(j: usize, q: &QuadricParams) -> usize {
    TruncatedRing::new(*q).abar_dim(j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinRanks {
    /// `(label, rank)` for each spin sheaf.
    pub sheaves: Vec<(String, u64)>,
    /// `dim L(w_{m+1})` (odd) or `dim L(w_m) + dim L(w_{m+1})` (even).
    pub denominator: u64,
}

fn levi_dim(d: &RootDatum, par: &ParabolicSpec, lambda: &Weight) -> Result<u64> {
    let (mut num, mut den) = (1i128, 1i128);
    for r in par.levi_roots(d) {
        num *= (0..d.rank).map(|j| (lambda.0[j] + d.rho.0[j]) * r.coroot[j]).sum::<i64>() as i128;
        den *= (0..d.rank).map(|j| d.rho.0[j] * r.coroot[j]).sum::<i64>() as i128;
    }
    if num % den != 0 {
        return Err(Error::NonIntegral(format!("Levi dimension of {lambda}")));
    }
    Ok((num / den) as u64)
}

pub fn spin_ranks(q: &QuadricParams) -> Result<SpinRanks> {
    let (kind, par) = quadric_type(q.n);
    let d = RootDatum::new(kind)?;
    let m = q.m();
    if q.odd() {
        let w = Weight::unit(m);
        Ok(SpinRanks {
            sheaves: vec![(format!("S(w{})", m + 1), levi_dim(&d, &par, &w)?)],
            denominator: d.weyl_dim(&w)?,
        })
    } else {
        let (a, b) = (Weight::unit(m - 1), Weight::unit(m));
        Ok(SpinRanks {
            sheaves: vec![
                (format!("S(w{m})"), levi_dim(&d, &par, &a)?),
                (format!("S(w{})", m + 1), levi_dim(&d, &par, &b)?),
            ],
            denominator: d.weyl_dim(&a)? + d.weyl_dim(&b)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompRow {
    pub label: String,
    pub rank: u64,
    pub mult: u64,
}

#[derive(Clone, Debug)]
pub struct DecompTable {
    pub params: QuadricParams,
    pub rows: Vec<DecompRow>,
    /// `r` (odd `n`) or `s` (even `n`).
    pub spin_mult: u64,
    /// Below `n + 1` the table is the formula only.
    pub formula_only: bool,
}

impl DecompTable {
    pub fn rank_sum(&self) -> u64 {
        self.rows.iter().map(|r| r.rank * r.mult).sum()
    }

    pub fn conserved(&self) -> bool {
        self.rank_sum() == self.params.p.pow(self.params.n as u32)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("summand,rank,multiplicity\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.label, r.rank, r.mult));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.params.n,
            "p": self.params.p,
            "spin_multiplicity": self.spin_mult,
            "formula_only": self.formula_only,
            "rank_sum": self.rank_sum(),
            "expected": self.params.p.pow(self.params.n as u32),
            "conserved": self.conserved(),
        })
    }
}

/// Assemble the decomposition of the Frobenius direct image. Errors when
/// the spin multiplicity is not an integer.
pub fn multiplicities(q: &QuadricParams) -> Result<DecompTable> {
    let ring = TruncatedRing::new(*q);
    let (n, m, p) = (q.n, q.m(), q.p as usize);
    let a = |j: i64| -> u64 { if j < 0 { 0 } else { ring.abar_dim(j as usize) as u64 } };
    let spin = spin_ranks(q)?;
    let special = if q.odd() { m + 1 } else { m };
    let low = a((m * p) as i64 - n as i64);
    let rows_o = (0..n).map(|i| DecompRow {
        label: format!("O(-{i})"),
        rank: 1,
        mult: if i == special { low } else { a((i * p) as i64) },
    });
    let mut rows: Vec<DecompRow> = rows_o.collect();
    let high = if q.odd() { a(((m + 1) * p) as i64) } else { a((m * p) as i64) };
    let num = high.checked_sub(low).ok_or_else(|| Error::NonIntegral("negative spin multiplicity".into()))?;
    if num % spin.denominator != 0 {
        return Err(Error::NonIntegral(format!("{num} / {} at n={n}, p={p}", spin.denominator)));
    }
    let mult = num / spin.denominator;
    for (label, rank) in &spin.sheaves {
        rows.push(DecompRow { label: format!("{label}(-{special})"), rank: *rank, mult });
    }
    Ok(DecompTable { params: *q, rows, spin_mult: mult, formula_only: (q.p as usize) < n + 1 })
}

#[derive(Clone, Debug)]
pub struct CatalogCheck {
    pub size: usize,
    pub expected_size: usize,
    /// Entries matching the rank-two catalog under the exchange of the two
    /// simple roots.
    pub matches: Vec<(String, bool)>,
}

impl CatalogCheck {
    pub fn pass(&self) -> bool {
        self.size == self.expected_size && self.matches.iter().all(|m| m.1)
    }
}

/// Sizes of the `W^P` lists, and for `n = 3` agreement with the `B2`
/// catalog on `P_a1`.
pub fn quadric_catalog_check(n: usize) -> Result<CatalogCheck> {
    let cat = quadric_catalog(n)?;
    let expected_size = if n % 2 == 1 { n + 1 } else { n + 2 };
    let mut matches = Vec::new();
    if n == 3 {
        let b2 = catalog(RootType::B2, &ParabolicSpec::new(vec![0]), Family::Socle)?;
        matches = compare_swapped(&cat, &b2)?;
    }
    Ok(CatalogCheck { size: cat.entries.len(), expected_size, matches })
}

fn compare_swapped(q: &Catalog, b2: &Catalog) -> Result<Vec<(String, bool)>> {
    let dq = q.datum();
    let db = b2.datum();
    let swap = |w: &Weight| Weight::new(&[w.0[1], w.0[0]]);
    let mut out = Vec::new();
    for (x, f) in &q.entries {
        let word: Vec<u8> = x.word.iter().map(|&i| 1 - i).collect();
        let y = db.find_element(&word)?;
        let ok = match b2.entry(&y) {
            None => false,
            Some(g) => {
                let cq = char_of(&dq, f)?;
                let cb = char_of(&db, g)?;
                Character::from_terms(cq.iter().map(|(w, c)| (swap(w), *c))) == cb
            }
        };
        out.push((x.name(), ok));
    }
    Ok(out)
}
