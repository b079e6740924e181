//! Sparse multivariate polynomials over up to 32 variables.
//!
//! A monomial packs one exponent byte per variable into four `u64` words, so
//! multiplication of monomials is word addition. Exponents are kept below 128
//! so that a product never carries across bytes; exceeding that panics.

use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::par;
use crate::rational::{self, Rational};

pub const MAX_VARS: usize = 32;

const HIGH: u64 = 0x8080_8080_8080_8080;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono([u64; 4]);

impl Mono {
    pub const ONE: Mono = Mono([0; 4]);

    pub fn var(i: usize) -> Mono {
        Mono::ONE.times_var(i, 1)
    }

    pub fn from_exponents(exps: &[u32]) -> Mono {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut m = Mono::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m = m.times_var(i, e);
        }
        m
    }

    pub fn exponent(&self, i: usize) -> u32 {
        ((self.0[i / 8] >> ((i % 8) * 8)) & 0xff) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn times_var(self, i: usize, e: u32) -> Mono {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        let mut out = self;
        let cur = self.exponent(i) + e;
        assert!(cur < 128, "exponent overflow in monomial");
        let shift = (i % 8) * 8;
        out.0[i / 8] = (out.0[i / 8] & !(0xff << shift)) | ((cur as u64) << shift);
        out
    }

    pub fn mul(self, other: Mono) -> Mono {
        let mut out = [0u64; 4];
        for k in 0..4 {
            let s = self.0[k] + other.0[k];
            assert!(s & HIGH == 0, "exponent overflow in monomial");
            out[k] = s;
        }
        Mono(out)
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .map(|w| w.to_le_bytes().iter().map(|&b| b as u32).sum::<u32>())
            .sum()
    }

    /// Lexicographic comparison of exponent vectors, variable 0 most significant.
    pub fn lex_cmp(&self, other: &Mono) -> std::cmp::Ordering {
        for i in 0..MAX_VARS {
            let c = self.exponent(i).cmp(&other.exponent(i));
            if c.is_ne() {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<u32> = self.exponents(MAX_VARS);
        let last = e.iter().rposition(|&x| x > 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &e[..last])
    }
}

/// Exact coefficient ring.
pub trait Coeff: Clone + PartialEq + Send + Sync + fmt::Debug {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_rational(&self) -> Rational;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        rational::int(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Checked machine integers; overflow panics rather than wrapping.
impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign(&mut self, o: &Self) {
        *self = self.checked_add(*o).expect("integer coefficient overflow");
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("integer coefficient overflow")
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("integer coefficient overflow")
    }
    fn to_rational(&self) -> Rational {
        Rational::from_integer((*self).into())
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    terms: FxHashMap<Mono, C>,
}

pub type IntPoly = Poly<i128>;

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: FxHashMap::default() }
    }

    pub fn constant(c: C) -> Self {
        Poly::monomial(Mono::ONE, c)
    }

    pub fn one() -> Self {
        Poly::constant(C::from_i64(1))
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Mono::var(i), C::from_i64(1))
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

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Terms in lexicographic monomial order, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(Mono, C)> {
        let mut v: Vec<(Mono, C)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| b.0.lex_cmp(&a.0));
        v
    }

    pub fn add_term(&mut self, m: Mono, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign(c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &Poly<C>) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }

    /// `self += c * o`.
    pub fn add_scaled(&mut self, o: &Poly<C>, c: &C) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(*m, &x.mul(c));
        }
    }

    pub fn scale(&self, c: &C) -> Poly<C> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    pub fn neg(&self) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.neg())).collect() }
    }

    pub fn sub(&self, o: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.add_scaled(o, &C::from_i64(-1));
        out
    }

    /// Multiplies by the monomial `m` and the scalar `c`.
    pub fn shift_scale(&self, m: Mono, c: &C) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Poly<C>) -> Poly<C> {
        let (a, b) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        if b.is_zero() {
            return Poly::zero();
        }
        let small: Vec<(Mono, C)> = b.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let big: Vec<(Mono, C)> = a.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let work = big.len() * small.len();
        if work < 1 << 16 || par::threads() == 1 {
            return mul_into(&big, &small);
        }
        let chunk = big.len().div_ceil(par::threads() * 4).max(64);
        let chunks: Vec<&[(Mono, C)]> = big.chunks(chunk).collect();
        let parts = par::map_collect(&chunks, |c| mul_into(c, &small));
        let mut out = Poly::zero();
        for p in parts {
            out.add_assign(&p);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly<C> {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Value at a rational point; variable `i` takes `point[i]`.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut total = <Rational as Zero>::zero();
        for (m, c) in &self.terms {
            let mut v = c.to_rational();
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Total degrees occurring, deduplicated and ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c));
        }
        out
    }

    pub fn to_rational(&self) -> Poly<Rational> {
        self.map_coeffs(|c| c.to_rational())
    }
}

fn mul_into<C: Coeff>(a: &[(Mono, C)], b: &[(Mono, C)]) -> Poly<C> {
    let mut terms: FxHashMap<Mono, C> = FxHashMap::default();
    terms.reserve(a.len().max(b.len()) * 2);
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(*mb);
            let v = ca.mul(cb);
            match terms.get_mut(&m) {
                Some(e) => e.add_assign(&v),
                None => {
                    terms.insert(m, v);
                }
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Poly { terms }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.sorted_terms()).finish()
    }
}

impl Poly<Rational> {
    /// Clears denominators: returns `(L, L * self)` with integer coefficients.
    pub fn to_integer(&self) -> Option<(num_bigint::BigInt, IntPoly)> {
        let l = rational::denominator_lcm(self.terms.values());
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            let v = (c * Rational::from_integer(l.clone())).to_integer();
            out.add_term(*m, &rational::bigint_to_i128(&v)?);
        }
        Some((l, out))
    }

    pub fn is_one(&self) -> bool {
        self.len() == 1 && One::is_one(&self.coeff(&Mono::ONE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> IntPoly {
        IntPoly::var(i)
    }

    #[test]
    fn monomial_packing() {
        let m = Mono::from_exponents(&[1, 0, 3, 0, 0, 0, 0, 0, 2]);
        assert_eq!(m.exponent(2), 3);
        assert_eq!(m.exponent(8), 2);
        assert_eq!(m.degree(), 6);
        let n = m.mul(Mono::var(31));
        assert_eq!(n.exponent(31), 1);
        assert_eq!(n.degree(), 7);
    }

    #[test]
    fn binomial_square() {
        let p = x(0).sub(&x(1).neg()); // x0 + x1
        let sq = p.mul(&p);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Mono::from_exponents(&[1, 1])), 2);
        let diff = p.mul(&x(0).sub(&x(1)));
        assert_eq!(diff.len(), 2);
        assert_eq!(diff.coeff(&Mono::from_exponents(&[0, 2])), -1);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = x(0).mul(&x(1));
        let q = x(1).mul(&x(0));
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn eval_at_point() {
        let p = x(0).mul(&x(0)).sub(&x(1)).scale(&3);
        let v = p.eval(&[rational::int(2), rational::frac(1, 2)]);
        assert_eq!(v, rational::frac(21, 2));
    }

    #[test]
    fn large_product_matches_sequential() {
        let mut a = IntPoly::zero();
        for i in 0..300 {
            a.add_term(Mono::from_exponents(&[i % 7, i % 5, i % 3, i % 11]), &((i as i128 % 13) - 6));
        }
        let b = a.clone();
        let prod = a.mul(&b);
        let seq = mul_into(
            &a.terms().map(|(m, c)| (*m, *c)).collect::<Vec<_>>(),
            &b.terms().map(|(m, c)| (*m, *c)).collect::<Vec<_>>(),
        );
        assert_eq!(prod, seq);
    }
}
