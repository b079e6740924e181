//! Polynomials in generator symbols `T_1, ..., T_k`.
//!
//! A monomial is the sorted multiset of 0-based generator indices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::{self, Rational};
use crate::words::MultiDegree;

pub type TMonomial = Vec<u16>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TPoly {
    terms: BTreeMap<TMonomial, Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn one() -> Self {
        TPoly::monomial(Vec::new(), Rational::one())
    }

    pub fn symbol(i: u16) -> Self {
        TPoly::monomial(vec![i], Rational::one())
    }

    pub fn monomial(mut m: TMonomial, c: Rational) -> Self {
        m.sort_unstable();
        let mut p = TPoly::zero();
        p.add_term(m, c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&TMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `m` must already be sorted.
    pub fn add_term(&mut self, m: TMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, o: &TPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &o.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, o: &TPoly) -> TPoly {
        let mut out = self.clone();
        out.add_scaled(o, &Rational::one());
        out
    }

    pub fn sub(&self, o: &TPoly) -> TPoly {
        let mut out = self.clone();
        out.add_scaled(o, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> TPoly {
        let mut out = TPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, o: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(merge(a, b), x * y);
            }
        }
        out
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, m: &[u16]) -> TPoly {
        TPoly { terms: self.terms.iter().map(|(a, x)| (merge(a, m), x.clone())).collect() }
    }

    /// Multidegree of every term, given the generators' multidegrees.
    pub fn multidegrees(&self, gen_mdegs: &[MultiDegree], d: usize) -> Vec<MultiDegree> {
        let mut out: Vec<MultiDegree> = self.terms.keys().map(|m| monomial_multidegree(m, gen_mdegs, d)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Substitutes polynomials for symbols: `T_i` becomes `images[i]`.
    pub fn compose(&self, images: &[TPoly]) -> TPoly {
        let mut out = TPoly::zero();
        for (m, c) in &self.terms {
            let mut t = TPoly::monomial(Vec::new(), c.clone());
            for &i in m {
                t = t.mul(&images[i as usize]);
                if t.is_zero() {
                    break;
                }
            }
            out.add_scaled(&t, &Rational::one());
        }
        out
    }

    /// Value at a point given the symbol values.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, &i| acc * &values[i as usize]))
            .sum()
    }

    /// Text like `1/6*t_1*t_2 + 1/3*t_4^2`.
    pub fn display(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if !mag.is_one() || m.is_empty() {
                parts.push(rational::to_text(&mag));
            }
            let mut i = 0;
            while i < m.len() {
                let j = m[i..].iter().take_while(|&&x| x == m[i]).count();
                let name = &labels[m[i] as usize];
                parts.push(if j > 1 { format!("{name}^{j}") } else { name.clone() });
                i += j;
            }
            s.push_str(&parts.join("*"));
        }
        s
    }

    pub fn to_json(&self, labels: &[String]) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: rational::to_text(c),
                symbols: m.iter().map(|&i| labels[i as usize].clone()).collect(),
            })
            .collect()
    }

    pub fn from_json(terms: &[TermJson], labels: &[String]) -> Result<TPoly> {
        let mut out = TPoly::zero();
        for t in terms {
            let mut m = Vec::with_capacity(t.symbols.len());
            for s in &t.symbols {
                let i = labels
                    .iter()
                    .position(|l| l == s)
                    .ok_or_else(|| crate::Error::Parse(format!("unknown generator {s:?}")))?;
                m.push(i as u16);
            }
            m.sort_unstable();
            out.add_term(m, rational::parse(&t.coeff)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub symbols: Vec<String>,
}

/// Sorted union of two sorted multisets.
pub fn merge(a: &[u16], b: &[u16]) -> TMonomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn monomial_multidegree(m: &[u16], gen_mdegs: &[MultiDegree], d: usize) -> MultiDegree {
    m.iter().fold(MultiDegree::zero(d), |acc, &i| acc.add(&gen_mdegs[i as usize]))
}

/// Converts an exponent vector over the listed symbols to a monomial.
pub fn from_exponents(symbols: &[u16], exps: &[u32]) -> TMonomial {
    let mut m = Vec::new();
    for (&s, &e) in symbols.iter().zip(exps) {
        for _ in 0..e {
            m.push(s);
        }
    }
    m.sort_unstable();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn arithmetic_and_display() {
        let labels: Vec<String> = (1..=5).map(|i| format!("t_{i}")).collect();
        let p = TPoly::symbol(0).mul(&TPoly::symbol(1)).scale(&frac(1, 6)).add(&TPoly::symbol(3).mul(&TPoly::symbol(3)).scale(&frac(1, 3)));
        assert_eq!(p.display(&labels), "1/6*t_1*t_2 + 1/3*t_4^2");
        let json = p.to_json(&labels);
        assert_eq!(TPoly::from_json(&json, &labels).unwrap(), p);
        assert!(p.sub(&p).is_zero());
        assert_eq!(merge(&[0, 2, 2], &[1, 2]), vec![0, 1, 2, 2, 2]);
        let img = vec![TPoly::symbol(4), TPoly::one(), TPoly::zero(), TPoly::symbol(3), TPoly::zero()];
        assert_eq!(p.compose(&img), TPoly::symbol(4).scale(&frac(1, 6)).add(&TPoly::symbol(3).mul(&TPoly::symbol(3)).scale(&frac(1, 3))));
    }
}
