//! The fundamental trace identity `F(M_1, ..., M_{n+1})` and the multilinear
//! argument tuples used to build trace reductions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::par;
use crate::rational;
use crate::trace::{TraceMonomial, TracePolynomial};
use crate::words::{CyclicWord, Word};

/// Nagata–Higman numbers known exactly.
pub fn nagata_higman(n: usize) -> Result<usize> {
    match n {
        1 => Ok(1),
        2 => Ok(3),
        3 => Ok(6),
        4 => Ok(10),
        _ => Err(Error::Unsupported(format!("N({n}) is not known"))),
    }
}

/// A bijection of `{0, ..., m-1}` (printed 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation { images: (0..m).collect() }
    }

    /// From 1-based cycles, e.g. `[[1, 2], [3]]`.
    pub fn from_cycles(m: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                if a == 0 || b == 0 || a > m || b > m {
                    return Err(Error::Parse(format!("cycle entry out of range in {c:?}")));
                }
                images[a - 1] = b - 1;
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Cycles (0-based), each starting at its minimal element, ordered by
    /// that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                c.push(j);
                j = self.images[j];
            }
            out.push(c);
        }
        out
    }

    pub fn sign(&self) -> i64 {
        let even = self.cycles().iter().filter(|c| c.len() % 2 == 0).count();
        if even % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `m` points in lexicographic order of images.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..m).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// `Tr_sigma(M)`: one trace factor per cycle of `sigma`, concatenating the
/// arguments in the order the cycle visits them.
pub fn tr_sigma(sigma: &Permutation, args: &[Word]) -> Result<TraceMonomial> {
    if sigma.len() != args.len() {
        return Err(Error::Arity { expected: sigma.len(), got: args.len() });
    }
    let factors = sigma
        .cycles()
        .into_iter()
        .map(|c| {
            let letters: Vec<u8> = c.iter().flat_map(|&i| args[i].letters().iter().copied()).collect();
            CyclicWord::new(&Word::new(letters).expect("arguments are nonempty"))
        })
        .collect();
    Ok(TraceMonomial::new(factors))
}

/// `F(M) = sum over sigma of sign(sigma) * Tr_sigma(M)`, normalized so that
/// the terms of the full cycles have coefficient +1 (an overall factor
/// `(-1)^n` for `n + 1` arguments).
pub fn fundamental_identity(args: &[Word]) -> Result<TracePolynomial> {
    if args.is_empty() {
        return Err(Error::Arity { expected: 1, got: 0 });
    }
    let norm = if args.len() % 2 == 0 { -1 } else { 1 };
    let perms = Permutation::all(args.len());
    let terms = par::map_collect(&perms, |s| (tr_sigma(s, args).unwrap(), norm * s.sign()));
    let mut out = TracePolynomial::zero();
    for (m, s) in terms {
        out.add_term(m, rational::int(s));
    }
    Ok(out)
}

/// `F` for an `n x n` identity; checks the arity `n + 1`.
pub fn fundamental_identity_n(n: usize, args: &[Word]) -> Result<TracePolynomial> {
    if args.len() != n + 1 {
        return Err(Error::Arity { expected: n + 1, got: args.len() });
    }
    fundamental_identity(args)
}

/// Sort key for tuple positions: longer words first, then lexicographic.
fn position_key(w: &Word) -> (std::cmp::Reverse<usize>, &[u8]) {
    (std::cmp::Reverse(w.len()), w.letters())
}

/// Canonical order of the positions of a tuple (F is symmetric in them).
pub fn sort_tuple(mut t: Vec<Word>) -> Vec<Word> {
    t.sort_by(|a, b| position_key(a).cmp(&position_key(b)));
    t
}

/// Tuples of `n + 1` nonempty words using each of the letters
/// `1..=N(n)+1` exactly once, up to reordering positions.
pub fn multilinear_tuples(n: usize) -> Result<Vec<Vec<Word>>> {
    let big_n = nagata_higman(n)?;
    let letters: Vec<u8> = (1..=big_n as u8 + 1).collect();
    let mut out: BTreeSet<(Vec<usize>, Vec<Vec<u8>>)> = BTreeSet::new();
    // assign each letter a block, blocks opened in order of first use
    fn partitions(
        letters: &[u8],
        k: usize,
        blocks: &mut Vec<Vec<u8>>,
        sink: &mut dyn FnMut(&[Vec<u8>]),
    ) {
        if letters.is_empty() {
            if blocks.len() == k {
                sink(blocks);
            }
            return;
        }
        let (l, rest) = (letters[0], &letters[1..]);
        for b in 0..blocks.len() {
            blocks[b].push(l);
            partitions(rest, k, blocks, sink);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![l]);
            partitions(rest, k, blocks, sink);
            blocks.pop();
        }
    }
    let mut sink = |blocks: &[Vec<u8>]| {
        // every ordering of every block
        let orders: Vec<Vec<Vec<u8>>> = blocks
            .iter()
            .map(|b| {
                Permutation::all(b.len())
                    .iter()
                    .map(|p| (0..b.len()).map(|i| b[p.apply(i)]).collect())
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; blocks.len()];
        loop {
            let t: Vec<Word> =
                idx.iter().enumerate().map(|(b, &i)| Word::new(orders[b][i].clone()).unwrap()).collect();
            let t = sort_tuple(t);
            let shape: Vec<usize> = t.iter().map(|w| usize::MAX - w.len()).collect();
            out.insert((shape, t.into_iter().map(Vec::from).collect()));
            let mut b = 0;
            loop {
                if b == idx.len() {
                    return;
                }
                idx[b] += 1;
                if idx[b] < orders[b].len() {
                    break;
                }
                idx[b] = 0;
                b += 1;
            }
        }
    };
    partitions(&letters, n + 1, &mut Vec::new(), &mut sink);
    Ok(out
        .into_iter()
        .map(|(_, t)| t.into_iter().map(|w| Word::new(w).unwrap()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_tuple;

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_cycles(3, &[vec![1, 2], vec![3]]).unwrap();
        assert_eq!(p.sign(), -1);
        assert_eq!(p.cycles(), vec![vec![0, 1], vec![2]]);
        assert_eq!(Permutation::all(4).len(), 24);
        let s: i64 = Permutation::all(4).iter().map(|p| p.sign()).sum();
        assert_eq!(s, 0);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn tr_sigma_examples() {
        let args = parse_tuple("(1,2,3)", 3).unwrap();
        let p = Permutation::from_cycles(3, &[vec![1, 2], vec![3]]).unwrap();
        assert_eq!(tr_sigma(&p, &args).unwrap().to_bracket(), "[12][3]");
        let id = Permutation::identity(3);
        assert_eq!(tr_sigma(&id, &args).unwrap().to_bracket(), "[1][2][3]");
        let args = parse_tuple("(12,3,4)", 4).unwrap();
        let c = Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(tr_sigma(&c, &args).unwrap().to_bracket(), "[1234]");
        assert!(tr_sigma(&c, &args[..2]).is_err());
    }

    #[test]
    fn fundamental_identity_examples() {
        let f = fundamental_identity(&parse_tuple("(12,3,4)", 4).unwrap()).unwrap();
        assert_eq!(f.to_bracket(), "[1234] + [1243] - [12][34] - [123][4] - [124][3] + [12][3][4]");
        let f = fundamental_identity(&parse_tuple("(1,2)", 2).unwrap()).unwrap();
        assert_eq!(f.to_bracket(), "[12] - [1][2]");
        assert!(fundamental_identity_n(2, &parse_tuple("(12,3)", 3).unwrap()).is_err());
    }

    #[test]
    fn multilinear_tuple_counts() {
        assert_eq!(multilinear_tuples(1).unwrap(), vec![parse_tuple("(1,2)", 2).unwrap()]);
        let t2 = multilinear_tuples(2).unwrap();
        assert_eq!(t2.len(), 12);
        assert_eq!(t2[0], parse_tuple("(12,3,4)", 4).unwrap());
        for t in &t2 {
            let mut letters: Vec<u8> = t.iter().flat_map(|w| w.letters().to_vec()).collect();
            letters.sort();
            assert_eq!(letters, vec![1, 2, 3, 4]);
        }
        assert!(multilinear_tuples(5).is_err());
    }
}
