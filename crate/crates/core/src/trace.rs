//! The formal trace algebra: polynomials in the symbols `Tr(w)`, one per
//! cyclic word `w`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::words::{self, CyclicWord, MultiDegree, Word};

/// A product of formal traces, stored as a sorted multiset of factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TraceMonomial {
    factors: Vec<CyclicWord>,
}

impl TraceMonomial {
    pub fn one() -> Self {
        TraceMonomial::default()
    }

    pub fn new(mut factors: Vec<CyclicWord>) -> Self {
        factors.sort();
        TraceMonomial { factors }
    }

    pub fn trace(w: CyclicWord) -> Self {
        TraceMonomial { factors: vec![w] }
    }

    pub fn factors(&self) -> &[CyclicWord] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    pub fn multidegree(&self, d: usize) -> MultiDegree {
        self.factors.iter().fold(MultiDegree::zero(d), |acc, f| acc.add(&f.multidegree(d)))
    }

    pub fn max_factor_degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    pub fn mul(&self, o: &TraceMonomial) -> TraceMonomial {
        let mut f = self.factors.clone();
        f.extend(o.factors.iter().cloned());
        TraceMonomial::new(f)
    }

    /// Factors in display order: longer first, then lexicographic.
    pub fn display_factors(&self) -> Vec<CyclicWord> {
        let mut f = self.factors.clone();
        f.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.letters().cmp(b.letters())));
        f
    }

    /// Bracket notation when every letter is a single digit.
    pub fn to_bracket(&self) -> String {
        let f = self.display_factors();
        words::bracket(&f).unwrap_or_else(|| words::explicit(&f))
    }
}

/// Degree first, then the factor sequences lexicographically.
impl Ord for TraceMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for TraceMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TracePolynomial {
    terms: BTreeMap<TraceMonomial, Rational>,
}

impl TracePolynomial {
    pub fn zero() -> Self {
        TracePolynomial::default()
    }

    pub fn one() -> Self {
        TracePolynomial::from_monomial(TraceMonomial::one(), rational::int(1))
    }

    pub fn from_monomial(m: TraceMonomial, c: Rational) -> Self {
        let mut p = TracePolynomial::zero();
        p.add_term(m, c);
        p
    }

    /// The single formal trace `Tr(w)`.
    pub fn trace(w: &Word) -> Self {
        TracePolynomial::from_monomial(TraceMonomial::trace(CyclicWord::new(w)), rational::int(1))
    }

    pub fn trace_of(letters: &[u8]) -> Result<Self> {
        Ok(TracePolynomial::trace(&Word::new(letters.to_vec())?))
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&TraceMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &TraceMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: TraceMonomial, c: Rational) {
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

    pub fn add(&self, o: &TracePolynomial) -> TracePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &TracePolynomial) -> TracePolynomial {
        self.add(&o.scale(&rational::int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> TracePolynomial {
        if c.is_zero() {
            return TracePolynomial::zero();
        }
        TracePolynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn multiply(&self, o: &TracePolynomial) -> TracePolynomial {
        let mut out = TracePolynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    /// Replaces every letter `l` by the word `assignment(l)` and
    /// re-canonicalizes the factors.
    pub fn substitute(&self, assignment: &dyn Fn(u8) -> Option<Word>) -> Result<TracePolynomial> {
        let mut cache: BTreeMap<u8, Word> = BTreeMap::new();
        let mut image = |l: u8| -> Result<Word> {
            if let Some(w) = cache.get(&l) {
                return Ok(w.clone());
            }
            let w = assignment(l).ok_or(Error::UnassignedLetter(l))?;
            cache.insert(l, w.clone());
            Ok(w)
        };
        let mut out = TracePolynomial::zero();
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors.len());
            for f in &m.factors {
                let mut letters = Vec::new();
                for &l in f.letters() {
                    letters.extend_from_slice(image(l)?.letters());
                }
                factors.push(CyclicWord::new(&Word::new(letters)?));
            }
            out.add_term(TraceMonomial::new(factors), c.clone());
        }
        Ok(out)
    }

    /// Substitution by a table: letter `l` maps to `table[l - 1]`.
    pub fn substitute_words(&self, table: &[Word]) -> Result<TracePolynomial> {
        self.substitute(&|l| table.get(l as usize - 1).cloned())
    }

    /// `None` when the terms do not share one multidegree.
    pub fn multidegree(&self, d: usize) -> Option<MultiDegree> {
        let mut it = self.terms.keys().map(|m| m.multidegree(d));
        let first = it.next()?;
        it.all(|md| md == first).then_some(first)
    }

    /// Homogeneous components by multidegree.
    pub fn split_by_multidegree(&self, d: usize) -> BTreeMap<MultiDegree, TracePolynomial> {
        let mut out: BTreeMap<MultiDegree, TracePolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.multidegree(d)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn max_letter(&self) -> u8 {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|f| f.word().max_letter()))
            .max()
            .unwrap_or(0)
    }

    /// Drops every term containing a factor `Tr(l)` for a letter with
    /// `vanishing(l)`; used for traceless letters.
    pub fn drop_single_letter_traces(&self, vanishing: &dyn Fn(u8) -> bool) -> TracePolynomial {
        let mut out = TracePolynomial::zero();
        for (m, c) in &self.terms {
            if !m.factors.iter().any(|f| f.degree() == 1 && vanishing(f.letters()[0])) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Signed sum in bracket notation, e.g. `[1234] + [1243] - [12][34]`.
    pub fn to_bracket(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&TraceMonomial, &Rational)> = self.terms.iter().collect();
        // fewest factors first, then by the displayed factor sequence
        let key = |m: &TraceMonomial| {
            let f: Vec<Vec<u8>> = m.display_factors().iter().map(|w| w.letters().to_vec()).collect();
            (m.factors.len(), f)
        };
        terms.sort_by_cached_key(|t| key(t.0));
        let mut s = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() || m.is_one() {
                s.push_str(&rational::to_text(&mag));
                if !m.is_one() {
                    s.push('*');
                }
            }
            if !m.is_one() {
                s.push_str(&m.to_bracket());
            }
        }
        s
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(m, c)| JsonTerm {
                coeff: rational::to_text(c),
                factors: m.factors.iter().map(|f| f.letters().to_vec()).collect(),
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[JsonTerm]) -> Result<TracePolynomial> {
        let mut out = TracePolynomial::zero();
        for t in terms {
            let factors = t
                .factors
                .iter()
                .map(|f| CyclicWord::from_letters(f.clone()))
                .collect::<Result<Vec<_>>>()?;
            out.add_term(TraceMonomial::new(factors), rational::parse(&t.coeff)?);
        }
        Ok(out)
    }
}

/// One serialized term: `{"coeff": "p/q", "factors": [[1,2],[3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub factors: Vec<Vec<u8>>,
}

impl Serialize for TracePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TracePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        TracePolynomial::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

/// Exponent vectors `e` with `sum e_i * mdegs[i] == md`, lexicographically
/// descending (the first variable's exponent varies slowest, largest first).
pub fn graded_exponents(mdegs: &[MultiDegree], md: &MultiDegree) -> Vec<Vec<u32>> {
    fn rec(
        i: usize,
        mdegs: &[MultiDegree],
        rest: &MultiDegree,
        reach: &[Vec<bool>],
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if rest.is_zero() {
            let mut e = cur.clone();
            e.resize(mdegs.len(), 0);
            out.push(e);
            return;
        }
        if i == mdegs.len() {
            return;
        }
        // letters still needed must be reachable from the remaining variables
        for (l, &c) in rest.0.iter().enumerate() {
            if c > 0 && !reach[i][l] {
                return;
            }
        }
        let g = &mdegs[i];
        let mut max = u32::MAX;
        for (l, &c) in g.0.iter().enumerate() {
            if c > 0 {
                max = max.min(rest.0.get(l).copied().unwrap_or(0) / c);
            }
        }
        if g.is_zero() {
            max = 0;
        }
        let mut e = max;
        loop {
            let mut r = rest.clone();
            for (l, &c) in g.0.iter().enumerate() {
                if c > 0 {
                    r.0[l] -= c * e;
                }
            }
            cur.push(e);
            rec(i + 1, mdegs, &r, reach, cur, out);
            cur.pop();
            if e == 0 {
                break;
            }
            e -= 1;
        }
    }
    let d = md.len();
    if mdegs.iter().any(|g| g.len() > d) {
        return Vec::new();
    }
    // reach[i][l]: some variable at index >= i involves letter l
    let mut reach = vec![vec![false; d]; mdegs.len() + 1];
    for i in (0..mdegs.len()).rev() {
        let mut r = reach[i + 1].clone();
        for (l, &c) in mdegs[i].0.iter().enumerate() {
            if c > 0 {
                r[l] = true;
            }
        }
        reach[i] = r;
    }
    let mut out = Vec::new();
    rec(0, mdegs, md, &reach, &mut Vec::new(), &mut out);
    out
}

/// All products of the given monomials with multidegree `md`.
pub fn graded_piece(vars: &[TraceMonomial], md: &MultiDegree) -> Vec<TraceMonomial> {
    let d = md.len();
    let mdegs: Vec<MultiDegree> = vars.iter().map(|v| v.multidegree(d)).collect();
    graded_exponents(&mdegs, md)
        .into_iter()
        .map(|e| {
            let mut m = TraceMonomial::one();
            for (v, &k) in vars.iter().zip(&e) {
                for _ in 0..k {
                    m = m.mul(v);
                }
            }
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(letters: &[u8]) -> TracePolynomial {
        TracePolynomial::trace_of(letters).unwrap()
    }

    fn mono(ws: &[&[u8]]) -> TraceMonomial {
        TraceMonomial::new(ws.iter().map(|w| CyclicWord::from_letters(w.to_vec()).unwrap()).collect())
    }

    #[test]
    fn multiply_examples() {
        let p = tr(&[1]).multiply(&tr(&[2]));
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&mono(&[&[1], &[2]])), rational::int(1));
        assert!(tr(&[1, 2]).sub(&tr(&[2, 1])).is_zero());
        let s = tr(&[1, 2]).add(&tr(&[1]).multiply(&tr(&[2])));
        let sq = s.multiply(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&mono(&[&[1, 2], &[1], &[2]])), rational::int(2));
        assert_eq!(sq.coeff(&mono(&[&[1, 2], &[1, 2]])), rational::int(1));
        assert_eq!(sq.coeff(&mono(&[&[1], &[1], &[2], &[2]])), rational::int(1));
    }

    #[test]
    fn substitute_examples() {
        let p = tr(&[1, 2]);
        let table = [Word::new(vec![3]).unwrap(), Word::new(vec![1, 2]).unwrap()];
        let q = p.substitute_words(&table).unwrap();
        assert_eq!(q, tr(&[1, 2, 3]));
        let id: Vec<Word> = (1..=3).map(|l| Word::new(vec![l]).unwrap()).collect();
        let r = tr(&[1, 3, 2]).multiply(&tr(&[2]));
        assert_eq!(r.substitute_words(&id).unwrap(), r);
        assert_eq!(tr(&[4]).substitute_words(&id), Err(Error::UnassignedLetter(4)));
    }

    #[test]
    fn graded_piece_examples() {
        let a = mono(&[&[1]]);
        let b = mono(&[&[2]]);
        let c = mono(&[&[1, 1]]);
        let dd = mono(&[&[1, 2]]);
        let e = mono(&[&[2, 2]]);
        let gens = [a, b, c.clone(), dd.clone(), e.clone()];
        let total: usize =
            MultiDegree::all_of_total(2, 2).iter().map(|md| graded_piece(&gens, md).len()).sum();
        assert_eq!(total, 6);
        assert_eq!(graded_piece(&gens, &MultiDegree::zero(2)), vec![TraceMonomial::one()]);
        let piece = graded_piece(&[c.clone(), dd.clone(), e.clone()], &MultiDegree(vec![2, 2]));
        assert_eq!(piece, vec![c.mul(&e), dd.mul(&dd)]);
    }

    #[test]
    fn bracket_and_json() {
        let p = tr(&[1, 2, 3, 4]).sub(&tr(&[1, 2]).multiply(&tr(&[3, 4])));
        assert_eq!(p.to_bracket(), "[1234] - [12][34]");
        let json = serde_json::to_string(&p).unwrap();
        let back: TracePolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(TracePolynomial::zero().to_bracket(), "0");
        let half = tr(&[1]).scale(&rational::frac(-1, 2));
        assert_eq!(half.to_bracket(), "-1/2*[1]");
    }
}
