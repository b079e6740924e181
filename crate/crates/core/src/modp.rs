//! Arithmetic modulo the Mersenne prime `2^61 - 1` and incremental row
//! echelon forms over it.
//!
//! Used only for one-sided certificates: a rank computed modulo `p` never
//! exceeds the rank over the rationals of the same (p-integral) vectors, and a
//! vector outside a span modulo `p` is outside it over the rationals.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::rational::Rational;

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let s = lo + (hi & P) + ((x >> 122) as u64);
    let s = (s & P) + (s >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

pub fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        P - a
    }
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Panics on zero.
pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero mod p");
    pow(a, P - 2)
}

pub fn from_i64(v: i64) -> u64 {
    if v >= 0 {
        v as u64 % P
    } else {
        neg(v.unsigned_abs() % P)
    }
}

pub fn from_bigint(v: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let mut r = v % &p;
    if r < BigInt::zero() {
        r += &p;
    }
    r.to_u64().expect("residue fits")
}

/// `None` when the denominator is divisible by `p`.
pub fn from_rational(r: &Rational) -> Option<u64> {
    let d = from_bigint(&r.denom());
    if d == 0 {
        return None;
    }
    Some(mul(from_bigint(&r.numer()), inv(d)))
}

/// Row echelon basis (not reduced) with dense rows.
#[derive(Debug, Clone)]
pub struct ModBasis {
    dim: usize,
    rows: Vec<Vec<u64>>,
    row_of_pivot: Vec<Option<usize>>,
}

impl ModBasis {
    pub fn new(dim: usize) -> Self {
        ModBasis { dim, rows: Vec::new(), row_of_pivot: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot; zero iff `v` is in the
    /// span.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for c in 0..self.dim {
            if v[c] == 0 {
                continue;
            }
            if let Some(r) = self.row_of_pivot[c] {
                // stored rows are normalized to 1 at their pivot
                let f = v[c];
                let row = &self.rows[r];
                for j in c..self.dim {
                    if row[j] != 0 {
                        v[j] = sub(v[j], mul(f, row[j]));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        if self.rank() == self.dim {
            return false;
        }
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv(v[p]);
        for x in v.iter_mut().skip(p) {
            *x = mul(*x, s);
        }
        self.row_of_pivot[p] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn insert_sparse(&mut self, v: &[(usize, u64)]) -> bool {
        let mut d = vec![0u64; self.dim];
        for &(j, x) in v {
            d[j] = add(d[j], x);
        }
        self.insert(d)
    }

    pub fn contains_sparse(&self, v: &[(usize, u64)]) -> bool {
        let mut d = vec![0u64; self.dim];
        for &(j, x) in v {
            d[j] = add(d[j], x);
        }
        self.contains(d)
    }
}

/// Rank of a list of dense rows.
pub fn rank(dim: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> usize {
    let mut b = ModBasis::new(dim);
    for r in rows {
        b.insert(r);
        if b.rank() == dim {
            break;
        }
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn field_ops() {
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(add(P - 1, 2), 1);
        assert_eq!(sub(1, 2), P - 1);
        assert_eq!(reduce128(u128::MAX % (P as u128 * P as u128)), (u128::MAX % (P as u128 * P as u128) % P as u128) as u64);
        assert_eq!(mul(from_rational(&frac(-1, 3)).unwrap(), 3), P - 1);
        assert_eq!(from_i64(-5), P - 5);
    }

    #[test]
    fn echelon() {
        let mut b = ModBasis::new(3);
        assert!(b.insert(vec![1, 2, 3]));
        assert!(b.insert(vec![2, 4, 7]));
        assert!(!b.insert(vec![3, 6, 10]));
        assert!(b.contains(vec![0, 0, 5]));
        assert!(!b.contains(vec![0, 1, 0]));
        assert_eq!(rank(3, vec![vec![1, 1, 1], vec![2, 2, 2]]), 1);
    }
}
