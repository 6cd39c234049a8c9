//! Laurent polynomials in one variable with integer coefficients.

use crate::charring::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `sum_k c[k] v^{lo + k}`, normalized: no zero at either end, and the
/// zero polynomial has empty `c`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly<T> {
    lo: i32,
    c: Vec<T>,
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, T::one())
    }

    pub fn monomial(k: i32, a: T) -> Self {
        Self::from_coeffs(k, vec![a])
    }

    pub fn from_coeffs(lo: i32, c: Vec<T>) -> Self {
        let mut p = LaurentPoly { lo, c };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i32;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: i32) -> T {
        let i = k - self.lo;
        if i < 0 || i as usize >= self.c.len() {
            T::zero()
        } else {
            self.c[i as usize]
        }
    }

    pub fn low_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn high_degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.lo + self.c.len() as i32 - 1)
    }

    /// Nonzero terms `(degree, coefficient)` in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(i, &x)| (self.lo + i as i32, x))
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { lo: self.lo + k, c: self.c.clone() }
    }

    /// `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        match self.high_degree() {
            None => Self::zero(),
            Some(h) => LaurentPoly { lo: -h, c: self.c.iter().rev().copied().collect() },
        }
    }

    pub fn eval_one(&self) -> T {
        self.c.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_coeffs(self.lo, self.c.iter().map(|&x| x * k).collect())
    }

    /// `sum_{k<=0} c_k v^k + sum_{k<0} c_k v^{-k}`: the self-dual element
    /// agreeing with `self` in nonpositive degrees.
    pub fn nonpositive_symmetrized(&self) -> Self {
        let mut out = Self::zero();
        for (k, a) in self.terms() {
            if k <= 0 {
                out = &out + &Self::monomial(k, a);
                if k < 0 {
                    out = &out + &Self::monomial(-k, a);
                }
            }
        }
        out
    }

    pub fn has_nonpositive_terms(&self) -> bool {
        self.low_degree().is_some_and(|l| l <= 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.c.iter().all(|x| !x.is_negative())
    }
}

impl<T: Scalar> Add for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, o: &LaurentPoly<T>) -> LaurentPoly<T> {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.high_degree().unwrap().max(o.high_degree().unwrap());
        let c = (lo..=hi).map(|k| self.coeff(k) + o.coeff(k)).collect();
        LaurentPoly::from_coeffs(lo, c)
    }
}

impl<T: Scalar> Sub for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, o: &LaurentPoly<T>) -> LaurentPoly<T> {
        self + &(-o.clone())
    }
}

impl<T: Scalar> Neg for LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly { lo: self.lo, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Scalar> Mul for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, o: &LaurentPoly<T>) -> LaurentPoly<T> {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        LaurentPoly::from_coeffs(self.lo + o.lo, c)
    }
}

impl<T: Scalar> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, a)| match k {
                0 => format!("{a}"),
                1 => format!("{a}v"),
                _ => format!("{a}v^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = LaurentPoly<i64>;

    #[test]
    fn arithmetic() {
        let a = P::from_coeffs(-1, vec![1, 0, 2]);
        let b = P::monomial(1, 3);
        assert_eq!((&a * &b).coeff(2), 6);
        assert_eq!((&a - &a), P::zero());
        assert_eq!(a.bar().coeff(-1), 2);
        assert_eq!(a.nonpositive_symmetrized(), P::from_coeffs(-1, vec![1, 0, 1]));
    }
}
