//! Finitely supported characters `sum c_lambda e^lambda` on the weight lattice.

use crate::error::{Error, Result};
use crate::rootsys::{ParabolicSpec, RootDatum, Weight};
use num_traits::{PrimInt, Signed};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

/// Integer coefficient types usable in characters and polynomials.
pub trait Scalar: PrimInt + Signed + Debug + Display + Send + Sync + 'static {}
impl<T: PrimInt + Signed + Debug + Display + Send + Sync + 'static> Scalar for T {}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Character<T> {
    terms: BTreeMap<Weight, T>,
}

impl<T: Scalar> Debug for Character<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<T: Scalar> Character<T> {
    pub fn zero() -> Self {
        Character { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Weight::ZERO, T::one())
    }

    pub fn monomial(w: Weight, c: T) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, T)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in it {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, w: Weight, c: T) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(T::zero);
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &Weight) -> T {
        self.terms.get(w).copied().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &T)> {
        self.terms.iter()
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    /// Sum of all coefficients (the dimension for a genuine module).
    pub fn total(&self) -> T {
        self.terms.values().fold(T::zero(), |a, &b| a + b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, k: T) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Character { terms: self.terms.iter().map(|(w, &c)| (*w, c * k)).collect() }
    }

    /// Multiply by `e^mu`.
    pub fn shift(&self, mu: Weight) -> Self {
        Character { terms: self.terms.iter().map(|(w, &c)| (*w + mu, c)).collect() }
    }

    pub fn map_weights<F: Fn(&Weight) -> Weight>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, &c)| (f(w), c)))
    }

    /// `e^lambda -> e^{-lambda}`.
    pub fn dual(&self) -> Self {
        Character { terms: self.terms.iter().map(|(w, &c)| (-*w, c)).collect() }
    }

    /// `e^lambda -> e^{p lambda}`.
    pub fn dilate(&self, p: i64) -> Self {
        Character { terms: self.terms.iter().map(|(w, &c)| (p * *w, c)).collect() }
    }

    pub fn cast<U: Scalar>(&self) -> Character<U> {
        Character {
            terms: self.terms.iter().map(|(w, c)| (*w, U::from(*c).expect("coefficient overflow"))).collect(),
        }
    }

    /// Rows `[coords, coefficient]` sorted lexicographically by weight.
    pub fn to_rows(&self, rank: usize) -> Vec<(Vec<i64>, T)> {
        self.terms.iter().map(|(w, &c)| (w.to_vec(rank), c)).collect()
    }

    pub fn to_json(&self, rank: usize) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!([w.to_vec(rank), c.to_i64().expect("coefficient fits i64")]))
                .collect(),
        )
    }

    /// Highest weights with respect to the dominance order (maximal elements
    /// of the support).
    pub fn maximal_weights(&self, d: &RootDatum) -> Vec<Weight> {
        let ws: Vec<Weight> = self.terms.keys().copied().collect();
        ws.iter()
            .filter(|&&a| !ws.iter().any(|&b| b != a && d.is_nonneg_combination(&(b - a)) && d.in_root_lattice(&(b - a))))
            .copied()
            .collect()
    }

    /// Apply `s_i` to every weight.
    pub fn reflect(&self, d: &RootDatum, i: usize) -> Self {
        self.map_weights(|w| d.reflect(i, w))
    }
}

impl<T: Scalar> Add for &Character<T> {
    type Output = Character<T>;
    fn add(self, o: &Character<T>) -> Character<T> {
        let mut out = self.clone();
        for (w, &c) in &o.terms {
            out.add_term(*w, c);
        }
        out
    }
}

impl<T: Scalar> Add for Character<T> {
    type Output = Character<T>;
    fn add(self, o: Character<T>) -> Character<T> {
        &self + &o
    }
}

impl<T: Scalar> Sub for &Character<T> {
    type Output = Character<T>;
    fn sub(self, o: &Character<T>) -> Character<T> {
        let mut out = self.clone();
        for (w, &c) in &o.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl<T: Scalar> Sub for Character<T> {
    type Output = Character<T>;
    fn sub(self, o: Character<T>) -> Character<T> {
        &self - &o
    }
}

impl<T: Scalar> Neg for Character<T> {
    type Output = Character<T>;
    fn neg(self) -> Character<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for &Character<T> {
    type Output = Character<T>;
    fn mul(self, o: &Character<T>) -> Character<T> {
        let mut acc: HashMap<Weight, T> = HashMap::with_capacity(self.len() * o.len());
        for (a, &x) in &self.terms {
            for (b, &y) in &o.terms {
                let e = acc.entry(*a + *b).or_insert_with(T::zero);
                *e = *e + x * y;
            }
        }
        Character { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl<T: Scalar> Mul for Character<T> {
    type Output = Character<T>;
    fn mul(self, o: Character<T>) -> Character<T> {
        &self * &o
    }
}

impl<T: Scalar> std::iter::Sum for Character<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

/// Dominant weight multiplicities by Freudenthal's formula.
fn freudenthal(d: &RootDatum, lambda: &Weight) -> BTreeMap<Weight, i64> {
    let lr = *lambda + d.rho;
    let norm = |mu: &Weight| -> i64 {
        // (lambda+rho, lambda+rho) - (mu+rho, mu+rho) = (lambda-mu, lambda+mu+2rho)
        let diff = d.root_coords(&(*lambda - *mu)).expect("weight in lambda - ZR");
        d.form_with_root(&(lr + *mu + d.rho), &diff)
    };
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    // BFS over dominant weights below lambda, by depth
    let mut by_depth: BTreeMap<i64, Vec<Weight>> = BTreeMap::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![*lambda];
    seen.insert(*lambda);
    while let Some(mu) = stack.pop() {
        let depth: i64 = d.root_coords(&(*lambda - mu)).unwrap().iter().sum();
        by_depth.entry(depth).or_default().push(mu);
        for r in &d.positive {
            let nu = dominant_rep(d, &(mu - r.weight));
            if d.is_nonneg_combination(&(*lambda - nu)) && seen.insert(nu) {
                stack.push(nu);
            }
        }
    }
    let lookup = |mult: &HashMap<Weight, i64>, w: &Weight| -> i64 {
        mult.get(&dominant_rep(d, w)).copied().unwrap_or(0)
    };
    for (_, mus) in by_depth {
        for mu in mus {
            if mu == *lambda {
                mult.insert(mu, 1);
                continue;
            }
            let mut rhs = 0i64;
            for r in &d.positive {
                let mut k = 1;
                loop {
                    let nu = mu + k * r.weight;
                    if !d.is_nonneg_combination(&(*lambda - nu)) {
                        break;
                    }
                    let m = lookup(&mult, &nu);
                    if m != 0 {
                        rhs += d.form_with_root(&nu, &r.coords) * m;
                    }
                    k += 1;
                }
            }
            let den = norm(&mu);
            let m = 2 * rhs / den;
            debug_assert_eq!(2 * rhs % den, 0);
            mult.insert(mu, m);
        }
    }
    mult.into_iter().filter(|(_, m)| *m != 0).collect()
}

/// The dominant element of the `W`-orbit of `w`.
pub fn dominant_rep(d: &RootDatum, w: &Weight) -> Weight {
    let mut v = *w;
    loop {
        match (0..d.rank).find(|&i| v.0[i] < 0) {
            Some(i) => v = d.reflect(i, &v),
            None => return v,
        }
    }
}

/// The `W`-orbit of `w`.
pub fn orbit(d: &RootDatum, w: &Weight) -> Vec<Weight> {
    let mut seen = vec![*w];
    let mut k = 0;
    while k < seen.len() {
        let v = seen[k];
        for i in 0..d.rank {
            let u = d.reflect(i, &v);
            if !seen.contains(&u) {
                seen.push(u);
            }
        }
        k += 1;
    }
    seen
}

/// Character of the irreducible module of highest weight `lambda` in
/// characteristic 0.
pub fn weyl_character(d: &RootDatum, lambda: &Weight) -> Result<Character<i64>> {
    if !d.is_dominant(lambda) {
        return Err(Error::NotDominant(format!("{lambda}")));
    }
    let mut out = Character::zero();
    for (mu, m) in freudenthal(d, lambda) {
        for nu in orbit(d, &mu) {
            out.add_term(nu, m);
        }
    }
    Ok(out)
}

/// Character of the Levi module of highest weight `lambda` for the Levi of
/// `P_I`: `lambda` must be `I`-dominant.
pub fn levi_character(d: &RootDatum, p: &ParabolicSpec, lambda: &Weight) -> Result<Character<i64>> {
    if p.subset.iter().any(|&i| lambda.0[i] < 0) {
        return Err(Error::NotDominant(format!("{lambda} for the Levi of {}", p.name())));
    }
    match p.subset.len() {
        0 => Ok(Character::monomial(*lambda, 1)),
        1 => {
            let a = p.subset[0];
            let n = lambda.0[a];
            let alpha = d.simple_root(a);
            Ok(Character::from_terms((0..=n).map(|k| (*lambda - k * alpha, 1))))
        }
        k if k == d.rank => weyl_character(d, lambda),
        _ => Err(Error::Invalid("Levi of intermediate rank".into())),
    }
}

/// Number of ways to write `-gamma` as a sum of positive roots of `R_I`.
pub fn kostant_partition_levi(d: &RootDatum, gamma: &Weight, p: &ParabolicSpec) -> u64 {
    let Some(c) = d.root_coords(&(-*gamma)) else { return 0 };
    if c.iter().any(|&x| x < 0) {
        return 0;
    }
    let roots: Vec<Vec<i64>> = p.levi_roots(d).iter().map(|r| r.coords.clone()).collect();
    let mut memo: HashMap<(Vec<i64>, usize), u64> = HashMap::new();
    fn go(t: Vec<i64>, k: usize, roots: &[Vec<i64>], memo: &mut HashMap<(Vec<i64>, usize), u64>) -> u64 {
        if t.iter().all(|&x| x == 0) {
            return 1;
        }
        if k == roots.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(t.clone(), k)) {
            return v;
        }
        let mut total = 0;
        let mut cur = t.clone();
        loop {
            total += go(cur.clone(), k + 1, roots, memo);
            for (x, r) in cur.iter_mut().zip(&roots[k]) {
                *x -= r;
            }
            if cur.iter().any(|&x| x < 0) {
                break;
            }
        }
        memo.insert((t, k), total);
        total
    }
    go(c, 0, &roots, &mut memo)
}

/// `1 + e^{-beta} + ... + e^{-(p-1) beta}`.
fn truncated_geometric(beta: Weight, p: i64) -> Character<i64> {
    Character::from_terms((0..p).map(|k| (-(k * beta), 1)))
}

/// Product side: `e^nu prod_{beta in R+ \ R_I} (1 - e^{-p beta}) / (1 - e^{-beta})`.
pub fn hv_char_product(d: &RootDatum, nu: &Weight, p: &ParabolicSpec, prime: i64) -> Result<Character<i64>> {
    if !p.in_lambda_p(nu) {
        return Err(Error::NotInLambdaP { weight: format!("{nu}"), parabolic: p.name() });
    }
    let mut out = Character::monomial(*nu, 1);
    for r in p.unipotent_roots(d) {
        out = &out * &truncated_geometric(r.weight, prime);
    }
    Ok(out)
}

/// `ch nabla-hat(mu) = e^mu prod_{beta > 0} (1 + ... + e^{-(p-1) beta})`.
pub fn hv_char_borel(d: &RootDatum, mu: &Weight, prime: i64) -> Character<i64> {
    hv_char_product(d, mu, &ParabolicSpec::borel(), prime).expect("Borel accepts every weight")
}

/// Dense table of `prod_{beta>0} (1 + ... + e^{-(p-1) beta})` indexed by
/// root coordinates of the depth below the top weight.
pub(crate) struct Shape {
    pub(crate) dims: Vec<i64>,
    data: Vec<i64>,
}

impl Shape {
    pub(crate) fn new(d: &RootDatum, prime: i64) -> Shape {
        let dims: Vec<i64> = (0..d.rank)
            .map(|j| d.positive.iter().map(|r| r.coords[j]).sum::<i64>() * (prime - 1) + 1)
            .collect();
        let size: i64 = dims.iter().product();
        let mut data = vec![0i64; size as usize];
        data[0] = 1;
        let mut reach = vec![0i64; d.rank];
        for r in &d.positive {
            for (j, x) in reach.iter_mut().enumerate() {
                *x += r.coords[j] * (prime - 1);
            }
            // multiply by the geometric factor in place using a running sum along r
            let mut next = vec![0i64; size as usize];
            for idx in 0..size as usize {
                let c = unflatten(idx as i64, &dims);
                if c.iter().zip(&reach).any(|(a, b)| a > b) {
                    continue;
                }
                let mut s = 0;
                for k in 0..prime {
                    let src: Vec<i64> = c.iter().zip(&r.coords).map(|(a, b)| a - k * b).collect();
                    if src.iter().any(|&x| x < 0) {
                        break;
                    }
                    s += data[flatten(&src, &dims) as usize];
                }
                next[idx] = s;
            }
            data = next;
        }
        Shape { dims, data }
    }

    pub(crate) fn get(&self, c: &[i64]) -> i64 {
        if c.iter().zip(&self.dims).any(|(&a, &b)| a < 0 || a >= b) {
            return 0;
        }
        self.data[flatten(c, &self.dims) as usize]
    }
}

pub(crate) fn flatten(c: &[i64], dims: &[i64]) -> i64 {
    let mut idx = 0;
    for (a, b) in c.iter().zip(dims) {
        idx = idx * b + a;
    }
    idx
}

pub(crate) fn unflatten(mut idx: i64, dims: &[i64]) -> Vec<i64> {
    let mut c = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        c[k] = idx % dims[k];
        idx /= dims[k];
    }
    c
}

/// Alternating side:
/// `sum_{w in W_P, gamma in ZR_I} (-1)^l(w) P_I(gamma) ch nabla-hat(w.nu + p gamma)`,
/// evaluated on the support box `nu - [0, 2(p-1) rho_P]` of the product side.
pub fn hv_char_sum(d: &RootDatum, nu: &Weight, p: &ParabolicSpec, prime: i64) -> Result<Character<i64>> {
    if !p.in_lambda_p(nu) {
        return Err(Error::NotInLambdaP { weight: format!("{nu}"), parabolic: p.name() });
    }
    let shape = Shape::new(d, prime);
    let bp = d.root_coords(&((prime - 1) * p.two_rho_p(d))).expect("2 rho_P in ZR");
    let bfull: Vec<i64> = shape.dims.iter().map(|x| x - 1).collect();
    let wp = d.parabolic_subgroup(p)?;
    let box_dims: Vec<i64> = bp.iter().map(|x| x + 1).collect();
    let box_size: i64 = box_dims.iter().product();
    let mut acc = vec![0i64; box_size as usize];

    // gamma = -sum_{j in I} k_j alpha_j; nabla-hat(mu) meets the box only
    // while nu - mu stays within [-2(p-1)rho, 2(p-1)rho_P]
    let levi: Vec<usize> = p.subset.clone();
    for w in &wp {
        let top = d.dot(w, nu);
        let base = d.root_coords(&(*nu - top)).expect("dot orbit stays in nu + ZR");
        let kmax: Vec<i64> = levi.iter().map(|&j| (bp[j] - base[j]).div_euclid(prime)).collect();
        if kmax.iter().any(|&k| k < 0) {
            continue;
        }
        let mut ks = vec![0i64; levi.len()];
        'odometer: loop {
            let mut delta = base.clone();
            let mut gamma = Weight::ZERO;
            for (t, &j) in levi.iter().enumerate() {
                delta[j] += prime * ks[t];
                gamma -= ks[t] * d.simple_root(j);
            }
            let overlaps = delta.iter().zip(&bp).zip(&bfull).all(|((&x, &hi), &lo)| x <= hi && x >= -lo);
            let coef = w.sign() * kostant_partition_levi(d, &gamma, p) as i64;
            if overlaps && coef != 0 {
                for idx in 0..box_size {
                    let c = unflatten(idx, &box_dims);
                    // x = nu - c, and mu - x = c - delta
                    let rel: Vec<i64> = c.iter().zip(&delta).map(|(a, b)| a - b).collect();
                    let v = shape.get(&rel);
                    if v != 0 {
                        acc[idx as usize] += coef * v;
                    }
                }
            }
            for t in 0..levi.len() {
                if ks[t] < kmax[t] {
                    ks[t] += 1;
                    continue 'odometer;
                }
                ks[t] = 0;
            }
            break;
        }
    }
    let mut out = Character::zero();
    for idx in 0..box_size {
        let c = unflatten(idx, &box_dims);
        out.add_term(*nu - d.from_root_coords(&c), acc[idx as usize]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootType;

    #[test]
    fn a2_adjoint() {
        let d = RootDatum::of(RootType::A2);
        let c = weyl_character(&d, &d.rho).unwrap();
        assert_eq!(c.total(), 8);
        assert_eq!(c.coeff(&Weight::ZERO), 2);
        assert_eq!(c.len(), 7);
    }

    #[test]
    fn g2_small() {
        let d = RootDatum::of(RootType::G2);
        assert_eq!(weyl_character(&d, &Weight::new(&[1, 0])).unwrap().total(), 7);
        assert_eq!(weyl_character(&d, &Weight::new(&[0, 1])).unwrap().total(), 14);
    }

    #[test]
    fn kostant_rank_one() {
        let d = RootDatum::of(RootType::G2);
        let p = ParabolicSpec::new(vec![0]);
        assert_eq!(kostant_partition_levi(&d, &(-3 * d.simple_root(0)), &p), 1);
        assert_eq!(kostant_partition_levi(&d, &d.simple_root(0), &p), 0);
        assert_eq!(kostant_partition_levi(&d, &Weight::ZERO, &p), 1);
    }
}
