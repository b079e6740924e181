//! The evaluation map from formal traces to polynomial functions on tuples of
//! matrices, symbolically and at exact rational points.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{IntPoly, Mono, Poly, MAX_VARS};
use crate::rational::{self, Rational};
use crate::trace::{TraceMonomial, TracePolynomial};
use crate::words::CyclicWord;

pub type ScalarPolynomial = Poly<Rational>;
pub type DenseMatrix = Vec<Vec<Rational>>;

/// Shape of the generic matrices: size, number of letters, which letters are
/// traceless, and whether letter 1 is diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenericMatrixSpec {
    pub n: usize,
    pub d: usize,
    pub traceless: Vec<bool>,
    pub diagonal_first: bool,
}

/// A linear form in the entry variables.
type Linear = Vec<(usize, i64)>;

impl GenericMatrixSpec {
    pub fn plain(n: usize, d: usize) -> Self {
        GenericMatrixSpec { n, d, traceless: vec![false; d], diagonal_first: false }
    }

    pub fn traceless(n: usize, d: usize) -> Self {
        GenericMatrixSpec { n, d, traceless: vec![true; d], diagonal_first: false }
    }

    pub fn with_diagonal_first(mut self) -> Self {
        self.diagonal_first = true;
        self
    }

    pub fn is_traceless(&self, letter: u8) -> bool {
        self.traceless.get(letter as usize - 1).copied().unwrap_or(false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::Dimension("n and d must be positive".into()));
        }
        if self.traceless.len() != self.d {
            return Err(Error::Dimension("one traceless flag per letter".into()));
        }
        if self.num_vars() > MAX_VARS {
            return Err(Error::Unsupported(format!(
                "{} entry variables exceed the limit of {MAX_VARS}",
                self.num_vars()
            )));
        }
        Ok(())
    }

    fn free_entries(&self, k: usize) -> Vec<(usize, usize)> {
        let n = self.n;
        let tl = self.traceless[k - 1];
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.diagonal_first && k == 1 && i != j {
                    continue;
                }
                if tl && i == n - 1 && j == n - 1 {
                    continue;
                }
                out.push((i, j));
            }
        }
        out
    }

    /// First variable index of letter `k`.
    pub fn var_offset(&self, k: usize) -> usize {
        (1..k).map(|l| self.free_entries(l).len()).sum()
    }

    pub fn num_vars(&self) -> usize {
        (1..=self.d).map(|l| self.free_entries(l).len()).sum()
    }

    fn entry_forms(&self, k: usize) -> Vec<Vec<Linear>> {
        let n = self.n;
        let off = self.var_offset(k);
        let mut m: Vec<Vec<Linear>> = vec![vec![Vec::new(); n]; n];
        for (idx, (i, j)) in self.free_entries(k).into_iter().enumerate() {
            m[i][j].push((off + idx, 1));
        }
        if self.traceless[k - 1] {
            let mut last = Vec::new();
            for i in 0..n - 1 {
                for &(v, c) in &m[i][i] {
                    last.push((v, -c));
                }
            }
            m[n - 1][n - 1] = last;
        }
        m
    }

    /// The generic matrix of letter `k` with polynomial entries.
    pub fn generic_matrix(&self, k: usize) -> Result<Vec<Vec<ScalarPolynomial>>> {
        if k == 0 || k > self.d {
            return Err(Error::LetterOutOfRange { letter: k as u8, d: self.d });
        }
        self.validate()?;
        Ok(self
            .entry_forms(k)
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|form| {
                        let mut p = ScalarPolynomial::zero();
                        for (v, c) in form {
                            p.add_term(Mono::var(v), &rational::int(c));
                        }
                        p
                    })
                    .collect()
            })
            .collect())
    }

    /// Values of the entry variables at a matrix tuple that respects the spec.
    pub fn point_values(&self, matrices: &[DenseMatrix]) -> Result<Vec<Rational>> {
        check_shapes(self, matrices)?;
        let mut out = Vec::with_capacity(self.num_vars());
        for k in 1..=self.d {
            let m = &matrices[k - 1];
            if self.traceless[k - 1] && !trace(m).is_zero() {
                return Err(Error::Dimension(format!("matrix {k} must be traceless")));
            }
            if self.diagonal_first && k == 1 {
                for i in 0..self.n {
                    for j in 0..self.n {
                        if i != j && !m[i][j].is_zero() {
                            return Err(Error::Dimension("matrix 1 must be diagonal".into()));
                        }
                    }
                }
            }
            for (i, j) in self.free_entries(k) {
                out.push(m[i][j].clone());
            }
        }
        Ok(out)
    }
}

fn check_shapes(spec: &GenericMatrixSpec, matrices: &[DenseMatrix]) -> Result<()> {
    if matrices.len() != spec.d {
        return Err(Error::Dimension(format!("expected {} matrices, got {}", spec.d, matrices.len())));
    }
    for m in matrices {
        if m.len() != spec.n || m.iter().any(|r| r.len() != spec.n) {
            return Err(Error::Dimension(format!("matrices must be {0}x{0}", spec.n)));
        }
    }
    Ok(())
}

/// Symbolic evaluation with a cache of trace images per cyclic word.
pub struct PiEvaluator {
    spec: GenericMatrixSpec,
    forms: Vec<Vec<Vec<Linear>>>,
    cache: Mutex<FxHashMap<CyclicWord, Arc<IntPoly>>>,
}

impl PiEvaluator {
    pub fn new(spec: GenericMatrixSpec) -> Result<Self> {
        spec.validate()?;
        let forms = (1..=spec.d).map(|k| spec.entry_forms(k)).collect();
        Ok(PiEvaluator { spec, forms, cache: Mutex::new(FxHashMap::default()) })
    }

    pub fn spec(&self) -> &GenericMatrixSpec {
        &self.spec
    }

    /// `tr` of the product of generic matrices spelled by `w`.
    pub fn trace_image(&self, w: &CyclicWord) -> Result<Arc<IntPoly>> {
        if let Some(p) = self.cache.lock().unwrap().get(w) {
            return Ok(p.clone());
        }
        let letters = w.letters();
        if let Some(&l) = letters.iter().find(|&&l| l as usize > self.spec.d || l == 0) {
            return Err(Error::LetterOutOfRange { letter: l, d: self.spec.d });
        }
        let p = Arc::new(self.compute_trace(letters));
        self.cache.lock().unwrap().insert(w.clone(), p.clone());
        Ok(p)
    }

    fn compute_trace(&self, letters: &[u8]) -> IntPoly {
        let n = self.spec.n;
        if letters.len() == 1 && self.spec.is_traceless(letters[0]) {
            return IntPoly::zero();
        }
        let first = &self.forms[letters[0] as usize - 1];
        let mut total = IntPoly::zero();
        for i in 0..n {
            // row i of the running product
            let mut row: Vec<IntPoly> = first[i].iter().map(linear_poly).collect();
            for &l in &letters[1..] {
                let a = &self.forms[l as usize - 1];
                let mut next = vec![IntPoly::zero(); n];
                for (k, entry) in row.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    for (j, slot) in next.iter_mut().enumerate() {
                        for &(v, c) in &a[k][j] {
                            slot.add_assign(&entry.shift_scale(Mono::var(v), &(c as i128)));
                        }
                    }
                }
                row = next;
            }
            total.add_assign(&row[i]);
        }
        total
    }

    /// Image of a product of traces.
    pub fn monomial_image(&self, m: &TraceMonomial) -> Result<IntPoly> {
        let mut out = IntPoly::one();
        for f in m.factors() {
            let img = self.trace_image(f)?;
            if img.is_zero() {
                return Ok(IntPoly::zero());
            }
            out = out.mul(&img);
        }
        Ok(out)
    }

    /// `(L, L * pi(p))` with integer coefficients.
    pub fn pi_scaled(&self, p: &TracePolynomial) -> Result<(BigInt, IntPoly)> {
        let l = rational::denominator_lcm(p.terms().map(|(_, c)| c));
        let lr = Rational::from_integer(l.clone());
        let mut out = IntPoly::zero();
        for (m, c) in p.terms() {
            let k = rational::to_i128(&(c * &lr))
                .ok_or_else(|| Error::Unsupported("coefficient too large for the fast path".into()))?;
            let img = self.monomial_image(m)?;
            out.add_scaled(&img, &k);
        }
        Ok((l, out))
    }

    pub fn pi(&self, p: &TracePolynomial) -> Result<ScalarPolynomial> {
        let (l, q) = self.pi_scaled(p)?;
        let inv = Rational::new(BigInt::from(1), l);
        Ok(q.to_rational().scale(&inv))
    }
}

fn linear_poly(form: &Linear) -> IntPoly {
    let mut p = IntPoly::zero();
    for &(v, c) in form {
        p.add_term(Mono::var(v), &(c as i128));
    }
    p
}

/// One-shot symbolic evaluation.
pub fn pi(p: &TracePolynomial, spec: &GenericMatrixSpec) -> Result<ScalarPolynomial> {
    PiEvaluator::new(spec.clone())?.pi(p)
}

pub fn matrix_product(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for (k, x) in a[i].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * &b[k][j];
            }
        }
    }
    out
}

pub fn trace(m: &DenseMatrix) -> Rational {
    m.iter().enumerate().map(|(i, r)| r[i].clone()).sum()
}

pub fn identity_matrix(n: usize) -> DenseMatrix {
    (0..n).map(|i| (0..n).map(|j| rational::int((i == j) as i64)).collect()).collect()
}

/// Exact value of `pi(p)` at the given matrices.
pub fn eval_at(p: &TracePolynomial, matrices: &[DenseMatrix]) -> Result<Rational> {
    let n = matrices.first().map_or(0, |m| m.len());
    if matrices.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(Error::Dimension("matrices must share one square size".into()));
    }
    let mut memo: FxHashMap<&CyclicWord, Rational> = FxHashMap::default();
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for f in m.factors() {
            if !memo.contains_key(f) {
                let mut prod: Option<DenseMatrix> = None;
                for &l in f.letters() {
                    let x = matrices
                        .get(l as usize - 1)
                        .ok_or(Error::LetterOutOfRange { letter: l, d: matrices.len() })?;
                    prod = Some(match prod {
                        None => x.clone(),
                        Some(q) => matrix_product(&q, x),
                    });
                }
                memo.insert(f, trace(&prod.unwrap()));
            }
            v *= &memo[f];
        }
        total += v;
    }
    Ok(total)
}

/// Seeded random matrices with entries `p/q`, `p` in [-9, 9], `q` in [1, 4].
pub fn random_matrices(spec: &GenericMatrixSpec, seed: u64) -> Vec<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n;
    (1..=spec.d)
        .map(|k| {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    if spec.diagonal_first && k == 1 && i != j {
                        continue;
                    }
                    let p: i64 = rng.gen_range(-9..=9);
                    let q: i64 = rng.gen_range(1..=4);
                    *x = rational::frac(p, q);
                }
            }
            if spec.traceless[k - 1] {
                let s: Rational = (0..n - 1).map(|i| m[i][i].clone()).sum();
                m[n - 1][n - 1] = -s;
            }
            m
        })
        .collect()
}

/// Integer matrices with entries in [-9, 9], for cheap exact evaluation.
pub fn random_integer_matrices(spec: &GenericMatrixSpec, seed: u64) -> Vec<Vec<Vec<i64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n;
    (1..=spec.d)
        .map(|k| {
            let mut m = vec![vec![0i64; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    if spec.diagonal_first && k == 1 && i != j {
                        continue;
                    }
                    *x = rng.gen_range(-9..=9);
                }
            }
            if spec.traceless[k - 1] {
                let s: i64 = (0..n - 1).map(|i| m[i][i]).sum();
                m[n - 1][n - 1] = -s;
            }
            m
        })
        .collect()
}

pub fn to_dense(m: &[Vec<i64>]) -> DenseMatrix {
    m.iter().map(|r| r.iter().map(|&x| rational::int(x)).collect()).collect()
}

/// `true` when the scalar polynomial is a constant equal to `c`.
pub fn is_constant(p: &ScalarPolynomial, c: &Rational) -> bool {
    if c.is_zero() {
        return p.is_zero();
    }
    p.len() == 1 && p.coeff(&Mono::ONE) == *c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn tr(letters: &[u8]) -> TracePolynomial {
        TracePolynomial::trace_of(letters).unwrap()
    }

    #[test]
    fn generic_matrix_shapes() {
        let plain = GenericMatrixSpec::plain(2, 1);
        let m = plain.generic_matrix(1).unwrap();
        assert_eq!(m[0][0], ScalarPolynomial::var(0));
        assert_eq!(m[1][1], ScalarPolynomial::var(3));
        let tl = GenericMatrixSpec::traceless(2, 1);
        let m = tl.generic_matrix(1).unwrap();
        assert_eq!(m[1][1], ScalarPolynomial::var(0).neg());
        let s = GenericMatrixSpec::traceless(3, 3).with_diagonal_first();
        assert_eq!(s.num_vars(), 18);
        assert_eq!(s.var_offset(2), 2);
        assert!(s.generic_matrix(4).is_err());
    }

    #[test]
    fn pi_examples() {
        let spec = GenericMatrixSpec::plain(2, 2);
        let p = pi(&tr(&[1]), &spec).unwrap();
        let expect = ScalarPolynomial::var(0).sub(&ScalarPolynomial::var(3).neg());
        assert_eq!(p, expect);
        assert!(pi(&tr(&[1, 2]).sub(&tr(&[2, 1])), &spec).unwrap().is_zero());
        let tl = GenericMatrixSpec::traceless(3, 2);
        assert!(pi(&tr(&[2]), &tl).unwrap().is_zero());
    }

    #[test]
    fn eval_examples() {
        let a: DenseMatrix = vec![
            vec![rational::int(1), rational::int(2)],
            vec![rational::int(3), rational::int(4)],
        ];
        assert_eq!(eval_at(&tr(&[1]), &[a.clone()]).unwrap(), rational::int(5));
        let v = eval_at(&tr(&[1, 2]), &[identity_matrix(2), a.clone()]).unwrap();
        assert_eq!(v, rational::int(5));
        let bad = vec![vec![rational::int(1)]];
        assert!(eval_at(&tr(&[1, 2]), &[a, bad]).is_err());
    }

    #[test]
    fn random_matrices_properties() {
        let spec = GenericMatrixSpec::traceless(3, 2);
        assert_eq!(random_matrices(&spec, 7), random_matrices(&spec, 7));
        for m in random_matrices(&spec, 11) {
            assert!(trace(&m).is_zero());
        }
        let plain = GenericMatrixSpec::plain(2, 2);
        let differing = (0..100u64)
            .filter(|&s| random_matrices(&plain, s) != random_matrices(&plain, s + 1000))
            .count();
        assert_eq!(differing, 100);
    }

    #[test]
    fn symbolic_matches_point_evaluation() {
        let spec = GenericMatrixSpec::traceless(3, 3).with_diagonal_first();
        let ev = PiEvaluator::new(spec.clone()).unwrap();
        let p = tr(&[1, 2, 3, 2]).multiply(&tr(&[3, 3])).add(&tr(&[1, 1, 2, 2]).scale(&rational::frac(1, 3)));
        let sym = ev.pi(&p).unwrap();
        for seed in 0..3 {
            let ms = random_matrices(&spec, seed);
            let point = spec.point_values(&ms).unwrap();
            assert_eq!(sym.eval(&point), eval_at(&p, &ms).unwrap());
        }
        let w = Word::new(vec![2, 3, 1]).unwrap();
        assert_eq!(ev.trace_image(&CyclicWord::new(&w)).unwrap().degrees(), vec![3]);
    }
}
