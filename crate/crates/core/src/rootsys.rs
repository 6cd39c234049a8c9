//! Root data, Weyl groups and parabolic combinatorics.
//!
//! Weights live in fundamental-weight coordinates. The Cartan matrix is
//! stored as `C[i][j] = <alpha_i, alpha_j^vee>`, so the simple root
//! `alpha_i` is row `i` of `C`. For `B2` the first simple root is short
//! (the `Sp4` labeling); the general-rank `Bk` data use the orthogonal
//! labeling with the last simple root short.

use crate::error::{Error, Result};
use serde_json::{json, Value};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub const MAX_RANK: usize = 4;
const WEYL_LIMIT: usize = 4096;

/// An integral weight in fundamental-weight coordinates. Unused trailing
/// coordinates are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub [i64; MAX_RANK]);

impl Weight {
    pub const ZERO: Weight = Weight([0; MAX_RANK]);

    pub fn new(c: &[i64]) -> Weight {
        assert!(c.len() <= MAX_RANK, "weight has too many coordinates");
        let mut w = [0; MAX_RANK];
        w[..c.len()].copy_from_slice(c);
        Weight(w)
    }

    pub fn unit(i: usize) -> Weight {
        let mut w = [0; MAX_RANK];
        w[i] = 1;
        Weight(w)
    }

    pub fn coords(&self, rank: usize) -> &[i64] {
        &self.0[..rank]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn to_vec(&self, rank: usize) -> Vec<i64> {
        self.0[..rank].to_vec()
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.iter().rposition(|&c| c != 0).map_or(1, |k| k + 1).max(2);
        write!(f, "(")?;
        for (k, c) in self.0[..n].iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, o: Weight) -> Weight {
        for k in 0..MAX_RANK {
            self.0[k] += o.0[k];
        }
        self
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, o: Weight) {
        *self = *self + o;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, o: Weight) -> Weight {
        for k in 0..MAX_RANK {
            self.0[k] -= o.0[k];
        }
        self
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, o: Weight) {
        *self = *self - o;
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(mut self) -> Weight {
        for c in self.0.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<Weight> for i64 {
    type Output = Weight;
    fn mul(self, mut w: Weight) -> Weight {
        for c in w.0.iter_mut() {
            *c *= self;
        }
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootType {
    A1,
    A2,
    B2,
    G2,
    /// Orthogonal type `B_k`, last simple root short.
    Bk(usize),
    /// Orthogonal type `D_k`.
    Dk(usize),
}

impl RootType {
    pub fn parse(s: &str) -> Result<RootType> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(RootType::A1),
            "A2" => Ok(RootType::A2),
            "B2" | "C2" => Ok(RootType::B2),
            "G2" => Ok(RootType::G2),
            _ => Err(Error::UnknownType(s.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RootType::A1 => "A1".into(),
            RootType::A2 => "A2".into(),
            RootType::B2 => "B2".into(),
            RootType::G2 => "G2".into(),
            RootType::Bk(k) => format!("Bk({k})"),
            RootType::Dk(k) => format!("Dk({k})"),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RootType::A1 => 1,
            RootType::A2 | RootType::B2 | RootType::G2 => 2,
            RootType::Bk(k) | RootType::Dk(k) => *k,
        }
    }

    /// The four types with full enumeration support.
    pub fn small() -> [RootType; 4] {
        [RootType::A1, RootType::A2, RootType::B2, RootType::G2]
    }

    fn cartan(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        if n == 0 || n > MAX_RANK {
            return Err(Error::RankTooLarge(n));
        }
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        match self {
            RootType::A1 => {}
            RootType::A2 => {
                c[0][1] = -1;
                c[1][0] = -1;
            }
            RootType::B2 => {
                c[0][1] = -1;
                c[1][0] = -2;
            }
            RootType::G2 => {
                c[0][1] = -1;
                c[1][0] = -3;
            }
            RootType::Bk(k) => {
                for i in 0..k - 1 {
                    c[i][i + 1] = -1;
                    c[i + 1][i] = -1;
                }
                if *k >= 2 {
                    // alpha_{k-1} long, alpha_k short
                    c[k - 2][k - 1] = -2;
                    c[k - 1][k - 2] = -1;
                }
            }
            RootType::Dk(k) => {
                if *k < 3 {
                    return Err(Error::UnknownType(self.label()));
                }
                for i in 0..k - 2 {
                    c[i][i + 1] = -1;
                    c[i + 1][i] = -1;
                }
                c[k - 3][k - 1] = -1;
                c[k - 1][k - 3] = -1;
            }
        }
        Ok(c)
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A positive root with its simple-root and simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub weight: Weight,
    pub coords: Vec<i64>,
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub kind: RootType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// `(alpha_i, alpha_i) / 2`, normalized so that short roots give 1.
    pub sym: Vec<i64>,
    /// Positive roots sorted by height, then by coordinates.
    pub positive: Vec<Root>,
    pub rho: Weight,
    det: i64,
    adj: Vec<Vec<i64>>,
}

fn det_adj(c: &[Vec<i64>]) -> (i64, Vec<Vec<i64>>) {
    let n = c.len();
    fn det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut d = 0;
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            d += s * m[0][j] * det(&minor);
        }
        d
    }
    let d = det(c);
    let mut adj = vec![vec![0; n]; n];
    if n == 1 {
        adj[0][0] = 1;
        return (d, adj);
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = c
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det(&minor);
        }
    }
    (d, adj)
}

impl RootDatum {
    pub fn new(kind: RootType) -> Result<RootDatum> {
        let cartan = kind.cartan()?;
        let rank = cartan.len();
        let (det, adj) = det_adj(&cartan);

        // symmetrizer: C_ij e_j = C_ji e_i
        let mut sym = vec![0i64; rank];
        let mut num = vec![0i64; rank];
        let mut den = vec![0i64; rank];
        num[0] = 1;
        den[0] = 1;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..rank {
                if j != i && cartan[i][j] != 0 && num[j] == 0 {
                    num[j] = num[i] * cartan[j][i];
                    den[j] = den[i] * cartan[i][j];
                    stack.push(j);
                }
            }
        }
        let l = den.iter().fold(1i64, |a, &b| lcm(a, b.abs()));
        for j in 0..rank {
            sym[j] = num[j] * (l / den[j].abs()) * den[j].signum();
        }
        let g = sym.iter().fold(0i64, |a, &b| gcd(a, b));
        for s in sym.iter_mut() {
            *s /= g;
        }

        // roots by reflecting simple roots
        let mut all: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut frontier: Vec<(Vec<i64>, Vec<i64>)> = (0..rank)
            .map(|i| {
                let mut b = vec![0; rank];
                b[i] = 1;
                (b.clone(), b)
            })
            .collect();
        while let Some((b, bc)) = frontier.pop() {
            if !seen.insert(b.clone()) {
                continue;
            }
            for i in 0..rank {
                // <beta, alpha_i^vee>
                let k: i64 = (0..rank).map(|j| b[j] * cartan[j][i]).sum();
                let m: i64 = (0..rank).map(|j| bc[j] * cartan[i][j]).sum();
                let mut nb = b.clone();
                nb[i] -= k;
                let mut nbc = bc.clone();
                nbc[i] -= m;
                frontier.push((nb, nbc));
            }
            all.push((b, bc));
            if all.len() > 10_000 {
                return Err(Error::RankTooLarge(rank));
            }
        }
        let mut positive: Vec<Root> = all
            .into_iter()
            .filter(|(b, _)| b.iter().all(|&x| x >= 0))
            .map(|(b, bc)| {
                let mut w = [0i64; MAX_RANK];
                for (k, wk) in w.iter_mut().enumerate().take(rank) {
                    *wk = (0..rank).map(|j| b[j] * cartan[j][k]).sum();
                }
                Root { weight: Weight(w), coords: b, coroot: bc }
            })
            .collect();
        positive.sort_by(|a, b| a.height().cmp(&b.height()).then(a.coords.cmp(&b.coords)));
        let rho = Weight::new(&vec![1; rank]);
        Ok(RootDatum { kind, rank, cartan, sym, positive, rho, det, adj })
    }

    pub fn of(kind: RootType) -> RootDatum {
        RootDatum::new(kind).expect("built-in root type")
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::new(&self.cartan[i])
    }

    /// `<lambda, beta^vee>` for a coroot given in simple-coroot coordinates.
    pub fn pairing(&self, lambda: &Weight, coroot: &[i64]) -> Result<i64> {
        if coroot.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: coroot.len() });
        }
        Ok(pair(lambda, coroot))
    }

    /// `<lambda, beta^vee>` for the `k`-th positive root.
    pub fn pair_root(&self, lambda: &Weight, k: usize) -> i64 {
        pair(lambda, &self.positive[k].coroot)
    }

    /// Index of the highest root (largest height; for `B2`/`G2` the long one).
    pub fn highest_root(&self) -> usize {
        self.positive.len() - 1
    }

    /// Index of the highest short root coroot partner: the coroot `theta^vee`
    /// of largest height, which bounds the fundamental alcove.
    pub fn highest_coroot(&self) -> usize {
        (0..self.positive.len())
            .max_by_key(|&k| (self.positive[k].coroot.iter().sum::<i64>(), k))
            .unwrap()
    }

    pub fn coxeter_number(&self) -> i64 {
        pair(&self.rho, &self.positive[self.highest_coroot()].coroot) + 1
    }

    /// Simple-root coordinates of `lambda`, scaled by `det(C)`.
    pub fn root_coords_scaled(&self, lambda: &Weight) -> Vec<i64> {
        (0..self.rank).map(|j| (0..self.rank).map(|i| lambda.0[i] * self.adj[i][j]).sum()).collect()
    }

    pub fn cartan_det(&self) -> i64 {
        self.det
    }

    /// Simple-root coordinates of `lambda` when it lies in the root lattice.
    pub fn root_coords(&self, lambda: &Weight) -> Option<Vec<i64>> {
        let s = self.root_coords_scaled(lambda);
        if s.iter().all(|&x| x % self.det == 0) {
            Some(s.into_iter().map(|x| x / self.det).collect())
        } else {
            None
        }
    }

    pub fn from_root_coords(&self, c: &[i64]) -> Weight {
        let mut w = [0i64; MAX_RANK];
        for (k, wk) in w.iter_mut().enumerate().take(self.rank) {
            *wk = (0..self.rank).map(|j| c[j] * self.cartan[j][k]).sum();
        }
        Weight(w)
    }

    pub fn in_root_lattice(&self, lambda: &Weight) -> bool {
        self.root_coords(lambda).is_some()
    }

    /// Sign of `lambda` in the dominance order: `Some(true)` when `lambda`
    /// is a nonnegative combination of simple roots.
    pub fn is_nonneg_combination(&self, lambda: &Weight) -> bool {
        self.root_coords_scaled(lambda).iter().all(|&x| x * self.det.signum() >= 0)
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.0[..self.rank].iter().all(|&c| c >= 0)
    }

    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let k = lambda.0[i];
        let mut out = *lambda;
        for j in 0..self.rank {
            out.0[j] -= k * self.cartan[i][j];
        }
        out
    }

    /// Reflection in an arbitrary positive root.
    pub fn reflect_root(&self, k: usize, lambda: &Weight) -> Weight {
        let r = &self.positive[k];
        *lambda - pair(lambda, &r.coroot) * r.weight
    }

    pub fn dot(&self, w: &WeylElement, lambda: &Weight) -> Weight {
        w.act(self, &(*lambda + self.rho)) - self.rho
    }

    /// Bilinear form scaled so that it is integral on `Lambda x ZR`.
    /// Returns `(lambda, beta)` for `beta` given in root coordinates.
    pub fn form_with_root(&self, lambda: &Weight, beta_coords: &[i64]) -> i64 {
        (0..self.rank).map(|j| lambda.0[j] * self.sym[j] * beta_coords[j]).sum()
    }

    /// Weyl dimension formula.
    pub fn weyl_dim(&self, lambda: &Weight) -> Result<u64> {
        if !self.is_dominant(lambda) {
            return Err(Error::NotDominant(format!("{lambda}")));
        }
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        let lr = *lambda + self.rho;
        for r in &self.positive {
            num *= pair(&lr, &r.coroot) as i128;
            den *= pair(&self.rho, &r.coroot) as i128;
            let g = gcd128(num, den);
            num /= g;
            den /= g;
        }
        if den != 1 {
            return Err(Error::NonIntegral(format!("Weyl dimension of {lambda}")));
        }
        Ok(num as u64)
    }

    /// Enumerate `W` in BFS order by length. Each element carries the
    /// lexicographically least reduced word.
    pub fn enumerate_weyl(&self) -> Result<Vec<WeylElement>> {
        let mut order: HashMap<Weight, usize> = HashMap::new();
        let mut els = vec![WeylElement::identity(self.rank)];
        order.insert(self.rho, 0);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next: Vec<(Weight, Vec<u8>)> = Vec::new();
            for &e in &layer {
                let w = &els[e];
                for i in 0..self.rank {
                    // w s_i longer iff w(alpha_i) > 0
                    let img = w.act(self, &self.simple_root(i));
                    if !self.is_nonneg_combination(&img) {
                        continue;
                    }
                    let mut word = w.word.clone();
                    word.push(i as u8);
                    let key = w.act(self, &self.reflect(i, &self.rho));
                    next.push((key, word));
                }
            }
            next.sort_by(|a, b| a.1.cmp(&b.1));
            let mut new_layer = Vec::new();
            for (key, word) in next {
                if order.contains_key(&key) {
                    continue;
                }
                order.insert(key, els.len());
                new_layer.push(els.len());
                els.push(WeylElement::from_word(self, &word)?);
                if els.len() > WEYL_LIMIT {
                    return Err(Error::WeylTooLarge(WEYL_LIMIT));
                }
            }
            layer = new_layer;
        }
        Ok(els)
    }

    /// Bruhat order via the subword property on `y`'s stored reduced word.
    pub fn bruhat_leq(&self, x: &WeylElement, y: &WeylElement) -> bool {
        if x.len() > y.len() {
            return false;
        }
        let target = x.act(self, &self.rho);
        let n = y.word.len();
        // images of rho under all subword products, built right to left
        let mut set: HashSet<Weight> = HashSet::new();
        set.insert(self.rho);
        for k in (0..n).rev() {
            let i = y.word[k] as usize;
            let add: Vec<Weight> = set.iter().map(|v| self.reflect(i, v)).collect();
            set.extend(add);
        }
        set.contains(&target)
    }

    /// Minimal length coset representatives `W^P`, ordered by length then word.
    pub fn min_coset_reps(&self, p: &ParabolicSpec) -> Result<Vec<WeylElement>> {
        let w = self.enumerate_weyl()?;
        let mut out: Vec<WeylElement> = w
            .into_iter()
            .filter(|w| p.subset.iter().all(|&i| self.is_nonneg_combination(&w.act(self, &self.simple_root(i)))))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.word.cmp(&b.word)));
        Ok(out)
    }

    /// `(w0, w_P, w^P = w0 w_P)`.
    pub fn longest_elements(&self, p: &ParabolicSpec) -> Result<(WeylElement, WeylElement, WeylElement)> {
        let all = self.enumerate_weyl()?;
        let w0 = all.iter().max_by_key(|w| w.len()).unwrap().clone();
        let wp = all
            .iter()
            .filter(|w| w.word.iter().all(|&i| p.subset.contains(&(i as usize))))
            .max_by_key(|w| w.len())
            .unwrap()
            .clone();
        let prod = w0.compose(self, &wp);
        let key = prod.act(self, &self.rho);
        let wup = all.iter().find(|w| w.act(self, &self.rho) == key).unwrap().clone();
        Ok((w0, wp, wup))
    }

    /// Elements of `W_P`.
    pub fn parabolic_subgroup(&self, p: &ParabolicSpec) -> Result<Vec<WeylElement>> {
        Ok(self
            .enumerate_weyl()?
            .into_iter()
            .filter(|w| w.word.iter().all(|&i| p.subset.contains(&(i as usize))))
            .collect())
    }

    pub fn find_element(&self, word: &[u8]) -> Result<WeylElement> {
        let w = WeylElement::from_word(self, word)?;
        let key = w.act(self, &self.rho);
        Ok(self
            .enumerate_weyl()?
            .into_iter()
            .find(|x| x.act(self, &self.rho) == key)
            .unwrap_or(w))
    }

    /// Number of positive roots sent to negative roots by `w`.
    pub fn inversions(&self, w: &WeylElement) -> usize {
        self.positive.iter().filter(|r| !self.is_nonneg_combination(&w.act(self, &r.weight))).count()
    }

    /// Versioned JSON description.
    pub fn to_json(&self) -> Value {
        json!({
            "version": 1,
            "type": self.kind.label(),
            "rank": self.rank,
            "cartan": self.cartan,
            "rho": self.rho.to_vec(self.rank),
            "coxeter_number": self.coxeter_number(),
            "positive_roots": self.positive.iter().map(|r| json!({
                "weight": r.weight.to_vec(self.rank),
                "root_coords": r.coords,
                "coroot_coords": r.coroot,
            })).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn pair(lambda: &Weight, coroot: &[i64]) -> i64 {
    coroot.iter().enumerate().map(|(i, &c)| lambda.0[i] * c).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd128(b, a % b)
    }
}

/// Element of `W` given by a reduced word, with its action matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<u8>,
    /// `w(lambda)_i = sum_j mat[i][j] lambda_j`.
    pub mat: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> WeylElement {
        let mut mat = vec![vec![0; rank]; rank];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = 1;
        }
        WeylElement { word: Vec::new(), mat }
    }

    pub fn simple(d: &RootDatum, i: usize) -> WeylElement {
        let n = d.rank;
        let mut mat = vec![vec![0; n]; n];
        for (k, row) in mat.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = i64::from(k == j) - if j == i { d.cartan[i][k] } else { 0 };
            }
        }
        WeylElement { word: vec![i as u8], mat }
    }

    pub fn from_word(d: &RootDatum, word: &[u8]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(d.rank);
        for &i in word {
            if i as usize >= d.rank {
                return Err(Error::BadSimpleRoot(i as usize));
            }
            w = w.compose(d, &WeylElement::simple(d, i as usize));
        }
        w.word = word.to_vec();
        Ok(w)
    }

    /// Parse `e`, `w0`-free words like `s1s2s1` (1-based letters).
    pub fn parse_word(s: &str) -> Result<Vec<u8>> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for part in s.split('s').skip(1) {
            let k: u8 = part.parse().map_err(|_| Error::BadWord(s.to_string()))?;
            if k == 0 {
                return Err(Error::BadWord(s.to_string()));
            }
            out.push(k - 1);
        }
        if !s.starts_with('s') {
            return Err(Error::BadWord(s.to_string()));
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn name(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }

    pub fn act(&self, _d: &RootDatum, lambda: &Weight) -> Weight {
        let n = self.mat.len();
        let mut out = [0i64; MAX_RANK];
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = (0..n).map(|j| self.mat[i][j] * lambda.0[j]).sum();
        }
        Weight(out)
    }

    /// Product `self * other` (apply `other` first). The word is the
    /// concatenation, which need not be reduced.
    pub fn compose(&self, _d: &RootDatum, other: &WeylElement) -> WeylElement {
        let n = self.mat.len();
        let mut mat = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                mat[i][j] = (0..n).map(|k| self.mat[i][k] * other.mat[k][j]).sum();
            }
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement { word, mat }
    }

    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Parabolic `P_I` given by a subset `I` of simple roots (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicSpec {
    pub subset: Vec<usize>,
}

impl ParabolicSpec {
    pub fn borel() -> ParabolicSpec {
        ParabolicSpec { subset: Vec::new() }
    }

    pub fn new(mut subset: Vec<usize>) -> ParabolicSpec {
        subset.sort_unstable();
        subset.dedup();
        ParabolicSpec { subset }
    }

    /// Parse `b`, `a1`, `a2`, `a1a2` / `g`.
    pub fn parse(s: &str, rank: usize) -> Result<ParabolicSpec> {
        let s = s.trim().to_ascii_lowercase();
        if s == "b" || s.is_empty() {
            return Ok(ParabolicSpec::borel());
        }
        if s == "g" {
            return Ok(ParabolicSpec::new((0..rank).collect()));
        }
        let mut out = Vec::new();
        for part in s.split('a').skip(1) {
            let k: usize = part.parse().map_err(|_| Error::Invalid(format!("parabolic `{s}`")))?;
            if k == 0 || k > rank {
                return Err(Error::BadSimpleRoot(k));
            }
            out.push(k - 1);
        }
        if !s.starts_with('a') {
            return Err(Error::Invalid(format!("parabolic `{s}`")));
        }
        Ok(ParabolicSpec::new(out))
    }

    /// All proper parabolics `B <= P < G` of the datum.
    pub fn all_proper(rank: usize) -> Vec<ParabolicSpec> {
        let mut out = vec![ParabolicSpec::borel()];
        if rank == 2 {
            out.push(ParabolicSpec::new(vec![0]));
            out.push(ParabolicSpec::new(vec![1]));
        }
        out
    }

    pub fn name(&self) -> String {
        if self.subset.is_empty() {
            "B".into()
        } else {
            let s: String = self.subset.iter().map(|i| format!("a{}", i + 1)).collect();
            format!("P_{s}")
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.subset.contains(&i)
    }

    pub fn in_lambda_p(&self, lambda: &Weight) -> bool {
        self.subset.iter().all(|&i| lambda.0[i] == 0)
    }

    pub fn is_levi_root(&self, r: &Root) -> bool {
        r.coords.iter().enumerate().all(|(j, &c)| c == 0 || self.contains(j))
    }

    /// Positive roots of the Levi, `R_I^+`.
    pub fn levi_roots<'a>(&self, d: &'a RootDatum) -> Vec<&'a Root> {
        d.positive.iter().filter(|r| self.is_levi_root(r)).collect()
    }

    /// `R^+ \ R_I`.
    pub fn unipotent_roots<'a>(&self, d: &'a RootDatum) -> Vec<&'a Root> {
        d.positive.iter().filter(|r| !self.is_levi_root(r)).collect()
    }

    pub fn two_rho_p(&self, d: &RootDatum) -> Weight {
        self.unipotent_roots(d).iter().fold(Weight::ZERO, |a, r| a + r.weight)
    }

    /// A generator of `Lambda_P` used for the nonzero test parameter.
    pub fn lambda_p_generator(&self, d: &RootDatum) -> Weight {
        let j = (0..d.rank).find(|&j| !self.contains(j)).unwrap_or(0);
        if self.subset.len() == d.rank {
            Weight::ZERO
        } else {
            Weight::unit(j)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (t, n) in [(RootType::A1, 1), (RootType::A2, 3), (RootType::B2, 4), (RootType::G2, 6)] {
            assert_eq!(RootDatum::of(t).positive.len(), n);
        }
        assert_eq!(RootDatum::of(RootType::Bk(3)).positive.len(), 9);
        assert_eq!(RootDatum::of(RootType::Dk(4)).positive.len(), 12);
    }

    #[test]
    fn b2_first_root_short() {
        let d = RootDatum::of(RootType::B2);
        assert_eq!(d.sym, vec![1, 2]);
        let g = RootDatum::of(RootType::G2);
        assert_eq!(g.sym, vec![1, 3]);
    }

    #[test]
    fn word_parse() {
        assert_eq!(WeylElement::parse_word("s1s2s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(WeylElement::parse_word("e").unwrap(), Vec::<u8>::new());
        assert!(WeylElement::parse_word("x1").is_err());
    }
}
