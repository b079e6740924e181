//! Words in the letters `1..=d`, their rotation classes, multidegrees, and the
//! two compact text notations: tuple notation `(1132,223,1,3)` for argument
//! tuples and bracket notation `[12][34]` for trace monomials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonempty sequence of 1-based letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if letters.contains(&0) {
            return Err(Error::LetterOutOfRange { letter: 0, d: 0 });
        }
        Ok(Word(letters))
    }

    /// Checks that every letter is at most `d`.
    pub fn with_alphabet(letters: Vec<u8>, d: usize) -> Result<Self> {
        let w = Word::new(letters)?;
        if let Some(&l) = w.0.iter().find(|&&l| l as usize > d) {
            return Err(Error::LetterOutOfRange { letter: l, d });
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_letter(&self) -> u8 {
        *self.0.iter().max().unwrap()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn multidegree(&self, d: usize) -> MultiDegree {
        let mut counts = vec![0u32; d.max(self.max_letter() as usize)];
        for &l in &self.0 {
            counts[l as usize - 1] += 1;
        }
        MultiDegree(counts)
    }
}

impl TryFrom<Vec<u8>> for Word {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u8> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Start index of the lexicographically least rotation (two-pointer minimum
/// expression, linear time).
pub fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// A rotation class of words, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn new(w: &Word) -> CyclicWord {
        let k = least_rotation(&w.0);
        CyclicWord(w.rotate(k))
    }

    pub fn from_letters(letters: Vec<u8>) -> Result<CyclicWord> {
        Ok(CyclicWord::new(&Word::new(letters)?))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[u8] {
        &self.0 .0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn multidegree(&self, d: usize) -> MultiDegree {
        self.0.multidegree(d)
    }
}

/// Canonical representative of `w` under rotation.
pub fn canonicalize(w: &Word) -> CyclicWord {
    CyclicWord::new(w)
}

impl TryFrom<Vec<u8>> for CyclicWord {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        CyclicWord::from_letters(v)
    }
}

impl From<CyclicWord> for Vec<u8> {
    fn from(w: CyclicWord) -> Self {
        w.0 .0
    }
}

/// Ordered by degree first, then lexicographically.
impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.letters()).cmp(&(other.degree(), other.letters()))
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

/// Letter counts, indexed by letter - 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(d: usize) -> Self {
        MultiDegree(vec![0; d])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn padded(&self, len: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), 0);
        v
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        let len = self.len().max(other.len());
        let (a, b) = (self.padded(len), other.padded(len));
        MultiDegree(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    /// `self - other` when it stays non-negative.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        let len = self.len().max(other.len());
        let (a, b) = (self.padded(len), other.padded(len));
        let mut out = Vec::with_capacity(len);
        for (x, y) in a.iter().zip(&b) {
            out.push(x.checked_sub(*y)?);
        }
        out.truncate(self.len().max(1));
        Some(MultiDegree(out))
    }

    pub fn resized(&self, d: usize) -> MultiDegree {
        let mut v = self.0.clone();
        v.resize(d, 0);
        MultiDegree(v)
    }

    /// Non-increasing counts (the letter-permutation orbit representative).
    pub fn is_partition(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn sorted_desc(&self) -> MultiDegree {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        MultiDegree(v)
    }

    /// Applies a letter permutation: letter `i+1` becomes `perm[i]`.
    pub fn permute_letters(&self, perm: &[u8]) -> MultiDegree {
        let mut v = vec![0; self.len()];
        for (i, &c) in self.0.iter().enumerate() {
            v[perm[i] as usize - 1] = c;
        }
        MultiDegree(v)
    }

    /// Every multidegree with `d` entries summing to `total`, lexicographically
    /// descending.
    pub fn all_of_total(d: usize, total: u32) -> Vec<MultiDegree> {
        fn rec(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
            if d == 1 {
                cur.push(left);
                out.push(MultiDegree(cur.clone()));
                cur.pop();
                return;
            }
            for c in (0..=left).rev() {
                cur.push(c);
                rec(d - 1, left - c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d == 0 {
            return out;
        }
        rec(d, total, &mut Vec::new(), &mut out);
        out
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        other.checked_sub(self).is_some()
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn multidegree(w: &Word, d: usize) -> MultiDegree {
    w.multidegree(d)
}

/// Parses `(1132,223,1,3)`. Arity is the caller's concern.
pub fn parse_tuple(text: &str, d: usize) -> Result<Vec<Word>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("tuple must be parenthesised: {text:?}")))?;
    if d > 9 {
        return Err(Error::Parse("tuple notation needs at most 9 letters".into()));
    }
    inner
        .split(',')
        .map(|part| {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::Parse(format!("empty monomial in {text:?}")));
            }
            let letters = part
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&v| v >= 1)
                        .map(|v| v as u8)
                        .ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {text:?}")))
                })
                .collect::<Result<Vec<u8>>>()?;
            Word::with_alphabet(letters, d)
        })
        .collect()
}

pub fn print_tuple(words: &[Word]) -> String {
    let parts: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Bracket notation for a product of traces; `None` when a letter exceeds 9.
pub fn bracket(factors: &[CyclicWord]) -> Option<String> {
    if factors.is_empty() {
        return Some("1".to_string());
    }
    if factors.iter().any(|w| w.word().max_letter() > 9) {
        return None;
    }
    Some(factors.iter().map(|w| w.to_string()).collect())
}

/// Explicit form `Tr(X1X2)Tr(X10)`, valid for any alphabet size.
pub fn explicit(factors: &[CyclicWord]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|w| {
            let inner: String = w.letters().iter().map(|l| format!("X{l}")).collect();
            format!("Tr({inner})")
        })
        .collect()
}

/// All cyclic words with the given letter counts, ascending.
pub fn cyclic_words_of(md: &MultiDegree) -> Vec<CyclicWord> {
    let total = md.total() as usize;
    if total == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut counts = md.0.clone();
    let mut cur = Vec::with_capacity(total);
    // the least rotation starts with the smallest letter present
    let first = counts.iter().position(|&c| c > 0).unwrap();
    counts[first] -= 1;
    cur.push(first as u8 + 1);
    fn rec(counts: &mut Vec<u32>, cur: &mut Vec<u8>, total: usize, out: &mut Vec<CyclicWord>) {
        if cur.len() == total {
            if least_rotation(cur) == 0 {
                out.push(CyclicWord(Word(cur.clone())));
            }
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                cur.push(l as u8 + 1);
                rec(counts, cur, total, out);
                cur.pop();
                counts[l] += 1;
            }
        }
    }
    rec(&mut counts, &mut cur, total, &mut out);
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u8]) -> Word {
        Word::new(s.to_vec()).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&w(&[2, 3, 1])).letters(), &[1, 2, 3]);
        assert_eq!(canonicalize(&w(&[1, 1, 3, 2])).letters(), &[1, 1, 3, 2]);
        assert_eq!(canonicalize(&w(&[2, 1, 1, 3])).letters(), &[1, 1, 3, 2]);
        assert_eq!(canonicalize(&w(&[3, 3])).letters(), &[3, 3]);
        assert_eq!(canonicalize(&w(&[2, 1, 2, 1])).letters(), &[1, 2, 1, 2]);
        assert_eq!(Word::new(vec![]), Err(Error::EmptyWord));
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(w(&[1, 3, 3, 1, 3, 2]).multidegree(3), MultiDegree(vec![2, 1, 3]));
        assert_eq!(w(&[1]).multidegree(3), MultiDegree(vec![1, 0, 0]));
        let t = parse_tuple("(111,22,3,3)", 3).unwrap();
        let cat = t.iter().skip(1).fold(t[0].clone(), |a, b| a.concat(b));
        assert_eq!(cat.multidegree(3), MultiDegree(vec![3, 2, 2]));
    }

    #[test]
    fn tuple_notation() {
        let t = parse_tuple("(1132,223,1,3)", 3).unwrap();
        assert_eq!(t, vec![w(&[1, 1, 3, 2]), w(&[2, 2, 3]), w(&[1]), w(&[3])]);
        assert_eq!(print_tuple(&t), "(1132,223,1,3)");
        let t = parse_tuple("(12,3,4)", 4).unwrap();
        assert_eq!(t, vec![w(&[1, 2]), w(&[3]), w(&[4])]);
        assert!(parse_tuple("(1,,2)", 3).is_err());
        assert!(parse_tuple("(14,2)", 3).is_err());
        assert!(parse_tuple("(10,2)", 3).is_err());
        assert!(parse_tuple("12,3", 3).is_err());
    }

    #[test]
    fn bracket_notation() {
        let a = CyclicWord::new(&w(&[1, 2]));
        let b = CyclicWord::new(&w(&[3, 4]));
        assert_eq!(bracket(&[a, b]).unwrap(), "[12][34]");
        assert_eq!(bracket(&[CyclicWord::new(&w(&[1, 2, 3, 4]))]).unwrap(), "[1234]");
        assert_eq!(bracket(&[]).unwrap(), "1");
        let big = CyclicWord::new(&w(&[1, 10]));
        assert!(bracket(&[big.clone()]).is_none());
        assert_eq!(explicit(&[big]), "Tr(X1X10)");
    }

    #[test]
    fn enumerate_necklaces() {
        let md = MultiDegree(vec![2, 2]);
        let ws: Vec<String> = cyclic_words_of(&md).iter().map(|c| c.to_string()).collect();
        assert_eq!(ws, vec!["[1122]", "[1212]"]);
        // 3 letters once each: 2 necklaces
        assert_eq!(cyclic_words_of(&MultiDegree(vec![1, 1, 1])).len(), 2);
        // (n-1)! necklaces for n distinct letters
        assert_eq!(cyclic_words_of(&MultiDegree(vec![1; 5])).len(), 24);
    }

    #[test]
    fn multidegree_helpers() {
        assert_eq!(MultiDegree::all_of_total(3, 2).len(), 6);
        assert_eq!(MultiDegree::all_of_total(3, 2)[0], MultiDegree(vec![2, 0, 0]));
        let a = MultiDegree(vec![3, 2, 2]);
        assert_eq!(a.checked_sub(&MultiDegree(vec![1, 1, 0])), Some(MultiDegree(vec![2, 1, 2])));
        assert_eq!(a.checked_sub(&MultiDegree(vec![4, 0, 0])), None);
        assert!(a.is_partition());
        assert_eq!(a.permute_letters(&[3, 1, 2]), MultiDegree(vec![2, 2, 3]));
    }
}
