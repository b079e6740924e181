//! Trace reductions and the rewriting map `R` into polynomials in a fixed
//! generating set.
//!
//! A reduction rule expresses `Tr(X_1 ... X_{N+1})` (with `N` the
//! Nagata–Higman number) through products of shorter traces. It is found as a
//! combination of fundamental identities of multilinear tuples whose
//! full-length terms cancel except for the target trace.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{self, GenericMatrixSpec, PiEvaluator};
use crate::generators::{GeneratorImages, GeneratorTable};
use crate::identities::{fundamental_identity, multilinear_tuples, nagata_higman};
use crate::linalg::{self, IntRow, RationalMatrix};
use crate::par;
use crate::poly::Mono;
use crate::rational::{self, Rational};
use crate::tpoly::TPoly;
use crate::trace::{TraceMonomial, TracePolynomial};
use crate::words::{cyclic_words_of, parse_tuple, print_tuple, CyclicWord, MultiDegree, Word};

/// The linear system `A x = e_1` whose solutions give reduction rules.
#[derive(Debug, Clone)]
pub struct ReductionSystem {
    pub n: usize,
    /// Full-length traces in `N + 1` letters; row 0 is `[12...N+1]`.
    pub rows: Vec<CyclicWord>,
    pub columns: Vec<Vec<Word>>,
    pub matrix: RationalMatrix,
}

pub fn build_reduction_system(n: usize) -> Result<ReductionSystem> {
    let big_n = nagata_higman(n)?;
    if n > 3 {
        eprintln!("warning: the reduction system for n = {n} is expensive");
    }
    let rows = cyclic_words_of(&MultiDegree(vec![1; big_n + 1]));
    let index: FxHashMap<&CyclicWord, usize> = rows.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let columns = multilinear_tuples(n)?;
    let entries = par::map_collect(&columns, |t| full_length_part(t, big_n + 1));
    let mut matrix = RationalMatrix::zeros(rows.len(), columns.len());
    for (c, part) in entries.into_iter().enumerate() {
        for (w, v) in part? {
            matrix.set(index[&w], c, v);
        }
    }
    Ok(ReductionSystem { n, rows, columns, matrix })
}

/// Single-factor terms of `F(tuple)` of the given degree.
fn full_length_part(tuple: &[Word], degree: usize) -> Result<Vec<(CyclicWord, Rational)>> {
    let f = fundamental_identity(tuple)?;
    Ok(f.terms()
        .filter(|(m, _)| m.factors().len() == 1 && m.degree() == degree)
        .map(|(m, c)| (m.factors()[0].clone(), c.clone()))
        .collect())
}

/// How to pick a solution of the (underdetermined for `n >= 3`) system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnOrder {
    /// Echelon particular solution in the canonical column order.
    Canonical,
    /// Echelon particular solution with the columns visited breadth-first
    /// from the target row, alternating rows and the columns that touch
    /// them. Gives a much sparser rule for `n = 3`.
    BreadthFirst,
    /// Echelon particular solution after a seeded shuffle of the columns.
    Shuffled(u64),
}

/// `Tr(X_1 ... X_{N+1}) = rhs`, with `rhs = -sum_c x_c * lower(F(tuple_c))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionRule {
    pub n: usize,
    /// `N(n) + 1`.
    pub letters: usize,
    pub combination: Vec<(Vec<Word>, Rational)>,
    pub rhs: TracePolynomial,
    pub order: ColumnOrder,
    terms: Vec<(Rational, Vec<Vec<u8>>)>,
}

impl ReductionRule {
    /// Assembles the rule from a combination of tuples and checks that the
    /// full-length terms cancel down to the target trace.
    pub fn from_combination(n: usize, combination: Vec<(Vec<Word>, Rational)>, order: ColumnOrder) -> Result<Self> {
        let big_n = nagata_higman(n)?;
        let letters = big_n + 1;
        let target = CyclicWord::from_letters((1..=letters as u8).collect())?;
        let mut total = TracePolynomial::zero();
        for (t, x) in &combination {
            if t.len() != n + 1 {
                return Err(Error::Arity { expected: n + 1, got: t.len() });
            }
            let mut all: Vec<u8> = t.iter().flat_map(|w| w.letters().to_vec()).collect();
            all.sort_unstable();
            if all != (1..=letters as u8).collect::<Vec<_>>() {
                return Err(Error::Parse(format!("{} is not multilinear in 1..={letters}", print_tuple(t))));
            }
            total = total.add(&fundamental_identity(t)?.scale(x));
        }
        let mut rhs = TracePolynomial::zero();
        for (m, c) in total.terms() {
            if m.factors().len() == 1 {
                let expect = if m.factors()[0] == target { Rational::one() } else { Rational::zero() };
                if *c != expect {
                    return Err(Error::Verification(format!("full-length term {m} has coefficient {}", rational::to_text(c))));
                }
            } else {
                rhs.add_term(m.clone(), -c.clone());
            }
        }
        if total.coeff(&TraceMonomial::trace(target)).is_zero() {
            return Err(Error::Verification("combination does not produce the target trace".into()));
        }
        let terms = rule_terms(&rhs);
        Ok(ReductionRule { n, letters, combination, rhs, order, terms })
    }

    pub fn big_n(&self) -> usize {
        self.letters - 1
    }

    pub fn lhs(&self) -> TracePolynomial {
        TracePolynomial::trace_of(&(1..=self.letters as u8).collect::<Vec<_>>()).expect("nonempty")
    }

    /// `lhs - rhs`, a trace identity.
    pub fn identity(&self) -> TracePolynomial {
        self.lhs().sub(&self.rhs)
    }

    /// The rule with `Tr(X_j) = 0` for `j <= N`; the last slot stays general.
    pub fn traceless_rhs(&self) -> TracePolynomial {
        let big_n = self.big_n() as u8;
        self.rhs.drop_single_letter_traces(&|l| l <= big_n)
    }

    /// Checks that `lhs - rhs` is a trace identity: symbolically for `n <= 2`,
    /// at `points` seeded random points otherwise.
    pub fn verify(&self, points: usize, seed: u64) -> Result<()> {
        let id = self.identity();
        let spec = GenericMatrixSpec::plain(self.n, self.letters);
        if self.n <= 2 {
            let img = PiEvaluator::new(spec)?.pi(&id)?;
            if !img.is_zero() {
                return Err(Error::Verification("rule is not a trace identity".into()));
            }
            return Ok(());
        }
        for k in 0..points as u64 {
            let ms = eval::random_matrices(&spec, seed.wrapping_add(k));
            if !eval::eval_at(&id, &ms)?.is_zero() {
                return Err(Error::Verification(format!("rule fails at random point {k}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = RuleJson {
            n: self.n,
            letters: self.letters,
            order: self.order,
            combination: self
                .combination
                .iter()
                .map(|(t, x)| CombinationJson { tuple: print_tuple(t), coeff: rational::to_text(x) })
                .collect(),
            rhs: Some(self.rhs.to_json_terms()),
        };
        serde_json::to_value(json).expect("rule serializes")
    }

    /// Imports a rule from its combination; a stored `rhs` must agree.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: RuleJson = serde_json::from_str(text)?;
        let d = json.letters;
        let combination = json
            .combination
            .iter()
            .map(|c| Ok((parse_tuple(&c.tuple, d)?, rational::parse(&c.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        let rule = ReductionRule::from_combination(json.n, combination, json.order)?;
        if rule.letters != json.letters {
            return Err(Error::Parse("letter count does not match n".into()));
        }
        if let Some(rhs) = json.rhs {
            if TracePolynomial::from_json_terms(&rhs)? != rule.rhs {
                return Err(Error::Verification("stored rhs does not match the combination".into()));
            }
        }
        Ok(rule)
    }
}

fn rule_terms(rhs: &TracePolynomial) -> Vec<(Rational, Vec<Vec<u8>>)> {
    rhs.terms().map(|(m, c)| (c.clone(), m.factors().iter().map(|f| f.letters().to_vec()).collect())).collect()
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    n: usize,
    letters: usize,
    order: ColumnOrder,
    combination: Vec<CombinationJson>,
    #[serde(default)]
    rhs: Option<Vec<crate::trace::JsonTerm>>,
}

#[derive(Serialize, Deserialize)]
struct CombinationJson {
    tuple: String,
    coeff: String,
}

/// Solves `A x = e_1` over the given columns (in that order) and assembles
/// the rule.
pub fn solve_on_columns(system: &ReductionSystem, columns: &[usize], order: ColumnOrder) -> Result<ReductionRule> {
    let sub = system.matrix.select_columns(columns);
    let mut e1 = vec![Rational::zero(); system.rows.len()];
    e1[0] = Rational::one();
    let x = linalg::solve(&sub, &e1)?;
    let combination = columns
        .iter()
        .zip(x)
        .filter(|(_, v)| !v.is_zero())
        .map(|(&c, v)| (system.columns[c].clone(), v))
        .collect();
    ReductionRule::from_combination(system.n, combination, order)
}

/// A verified reduction rule for `n x n` matrices.
pub fn solve_reduction(n: usize, order: ColumnOrder) -> Result<ReductionRule> {
    let system = build_reduction_system(n)?;
    solve_system(&system, order)
}

pub fn solve_system(system: &ReductionSystem, order: ColumnOrder) -> Result<ReductionRule> {
    let mut columns: Vec<usize> = (0..system.columns.len()).collect();
    match order {
        ColumnOrder::Canonical => {}
        ColumnOrder::BreadthFirst => columns = breadth_first_columns(system),
        ColumnOrder::Shuffled(seed) => columns.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    let rule = solve_on_columns(system, &columns, order)?;
    rule.verify(5, 0x5eed)?;
    Ok(rule)
}

fn breadth_first_columns(system: &ReductionSystem) -> Vec<usize> {
    let t = system.matrix.transpose();
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); system.rows.len()];
    for c in 0..system.columns.len() {
        for (r, _) in t.row(c) {
            row_cols[*r].push(c);
        }
    }
    let mut seen_row = vec![false; system.rows.len()];
    let mut seen_col = vec![false; system.columns.len()];
    let mut order = Vec::with_capacity(system.columns.len());
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen_row[0] = true;
    while let Some(r) = queue.pop_front() {
        for &c in &row_cols[r] {
            if seen_col[c] {
                continue;
            }
            seen_col[c] = true;
            order.push(c);
            for (r2, _) in t.row(c) {
                if !seen_row[*r2] {
                    seen_row[*r2] = true;
                    queue.push_back(*r2);
                }
            }
        }
    }
    // columns not connected to the target row cannot contribute
    order
}

/// The three columns of the worked `2 x 2` example.
pub fn subsystem_columns_n2() -> Vec<Vec<Word>> {
    ["(12,3,4)", "(41,2,3)", "(24,1,3)"].iter().map(|t| parse_tuple(t, 4).unwrap()).collect()
}

/// One application of the rule to the canonical representative
/// `i_1 ... i_k` of `t`: `X_j := i_j` for `j <= N`, and the last slot takes
/// the tail `i_{N+1} ... i_k`.
pub fn reduce_once(t: &CyclicWord, rule: &ReductionRule) -> Result<TracePolynomial> {
    reduce_once_with(t, rule, &|_| false)
}

/// As `reduce_once`, dropping terms in which a slot `j <= N` forms a
/// single-letter trace of a letter with `vanishing(letter)`.
pub fn reduce_once_with(t: &CyclicWord, rule: &ReductionRule, vanishing: &dyn Fn(u8) -> bool) -> Result<TracePolynomial> {
    let big_n = rule.big_n();
    let w = t.letters();
    if w.len() <= big_n {
        return Err(Error::DegreeTooSmall { degree: w.len(), bound: big_n });
    }
    let mut out = TracePolynomial::zero();
    for (m, c) in substituted_terms(w, rule, vanishing) {
        out.add_term(m, c);
    }
    Ok(out)
}

fn substituted_terms(w: &[u8], rule: &ReductionRule, vanishing: &dyn Fn(u8) -> bool) -> Vec<(TraceMonomial, Rational)> {
    let big_n = rule.big_n();
    let tail = &w[big_n..];
    let mut out = Vec::with_capacity(rule.terms.len());
    'terms: for (c, factors) in &rule.terms {
        let mut fs = Vec::with_capacity(factors.len());
        for f in factors {
            if f.len() == 1 && (f[0] as usize) <= big_n && vanishing(w[f[0] as usize - 1]) {
                continue 'terms;
            }
            let mut letters = Vec::with_capacity(w.len());
            for &l in f {
                if l as usize <= big_n {
                    letters.push(w[l as usize - 1]);
                } else {
                    letters.extend_from_slice(tail);
                }
            }
            fs.push(CyclicWord::from_letters(letters).expect("nonempty"));
        }
        out.push((TraceMonomial::new(fs), c.clone()));
    }
    out
}

/// Expressions of short traces (degree `<= N`) in the generators, built one
/// multidegree at a time.
pub struct RewriteTable {
    table: GeneratorTable,
    images: GeneratorImages,
    degrees: Vec<u32>,
    max_degree: usize,
    pieces: RwLock<FxHashMap<MultiDegree, Arc<RewritePiece>>>,
}

/// The rewrites of one multidegree.
#[derive(Debug)]
pub struct RewritePiece {
    pub words: BTreeMap<CyclicWord, TPoly>,
    /// Dimension of the relations among the generator monomials of this
    /// multidegree (0 means every rewrite is unique).
    pub kernel_dim: usize,
}

/// Rows examined without progress before switching to kernel checks.
const PATIENCE: usize = 40;

impl RewriteTable {
    pub fn new(table: GeneratorTable) -> Result<Self> {
        let max_degree = nagata_higman(table.n)?;
        // restricting the first matrix to diagonal ones is injective on
        // invariants, and expressions are read off from linear dependencies
        let spec = table.spec().with_diagonal_first();
        let images = GeneratorImages::new(&table, spec)?;
        let degrees = table.entries.iter().map(|g| g.degree()).collect();
        Ok(RewriteTable { table, images, degrees, max_degree, pieces: RwLock::new(FxHashMap::default()) })
    }

    pub fn generators(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// The rewrite of a trace of degree `<= N`.
    pub fn lookup(&self, w: &CyclicWord) -> Result<TPoly> {
        if w.degree() == 1 && self.table.spec().is_traceless(w.letters()[0]) {
            return Ok(TPoly::zero());
        }
        if w.degree() > self.max_degree {
            return Err(Error::DegreeTooSmall { degree: w.degree(), bound: self.max_degree });
        }
        let piece = self.piece(&w.multidegree(self.table.d))?;
        Ok(piece.words[w].clone())
    }

    pub fn piece(&self, md: &MultiDegree) -> Result<Arc<RewritePiece>> {
        if let Some(p) = self.pieces.read().unwrap().get(md) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.build_piece(md)?);
        self.pieces.write().unwrap().insert(md.clone(), p.clone());
        Ok(p)
    }

    fn build_piece(&self, md: &MultiDegree) -> Result<RewritePiece> {
        let spec = self.table.spec();
        let words: Vec<CyclicWord> = cyclic_words_of(md)
            .into_iter()
            .filter(|w| !(w.degree() == 1 && spec.is_traceless(w.letters()[0])))
            .collect();
        let monos = self.table.core_monomials(md);
        let k = monos.len();
        let mut cols = par::map_collect(&monos, |m| self.images.monomial_image(m, &self.degrees));
        cols.extend(par::map_collect(&words, |w| self.images.evaluator().trace_image(w).map(|p| (*p).clone())));
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        let basis = linalg::row_space_of_int_rows(k + words.len(), &transpose_images(&cols), PATIENCE);
        let mut out = BTreeMap::new();
        for (j, w) in words.iter().enumerate() {
            let c = k + j;
            if basis.is_pivot(c) {
                return Err(Error::RewriteGap(md.clone()));
            }
            let mut p = TPoly::zero();
            for piv in basis.pivots().into_iter().filter(|&piv| piv < k) {
                let row = basis.row_for_pivot(piv).unwrap();
                if let Ok(pos) = row.binary_search_by_key(&c, |(col, _)| *col) {
                    p.add_term(monos[piv].clone(), row[pos].1.clone());
                }
            }
            out.insert(w.clone(), p);
        }
        let kernel_dim = k - basis.pivots().into_iter().filter(|&p| p < k).count();
        Ok(RewritePiece { words: out, kernel_dim })
    }
}

/// Coefficient rows (one per scalar monomial) of a list of polynomials
/// regarded as columns.
pub fn transpose_images(cols: &[crate::poly::IntPoly]) -> Vec<IntRow> {
    let mut index: FxHashMap<Mono, usize> = FxHashMap::default();
    let mut rows: Vec<IntRow> = Vec::new();
    for (c, p) in cols.iter().enumerate() {
        for (m, v) in p.terms() {
            let r = *index.entry(*m).or_insert_with(|| {
                rows.push(Vec::new());
                rows.len() - 1
            });
            rows[r].push((c, *v));
        }
    }
    rows
}

/// The rewriting map `R`: reduce every long trace with the rule, then look up
/// the short ones.
pub struct Reducer {
    rule: ReductionRule,
    rewrite: RewriteTable,
    vanishing: Vec<bool>,
    memo: RwLock<FxHashMap<CyclicWord, Arc<TPoly>>>,
}

impl Reducer {
    pub fn new(rule: ReductionRule, table: GeneratorTable) -> Result<Self> {
        if rule.n != table.n {
            return Err(Error::Dimension(format!("rule is for n = {}, table for n = {}", rule.n, table.n)));
        }
        let spec = table.spec();
        let vanishing = (1..=table.d as u8).map(|l| spec.is_traceless(l)).collect();
        let rewrite = RewriteTable::new(table)?;
        Ok(Reducer { rule, rewrite, vanishing, memo: RwLock::new(FxHashMap::default()) })
    }

    pub fn rule(&self) -> &ReductionRule {
        &self.rule
    }

    pub fn rewrite_table(&self) -> &RewriteTable {
        &self.rewrite
    }

    pub fn generators(&self) -> &GeneratorTable {
        self.rewrite.generators()
    }

    fn is_vanishing(&self, l: u8) -> bool {
        self.vanishing.get(l as usize - 1).copied().unwrap_or(false)
    }

    /// `R(Tr(w))`.
    pub fn reduce_word(&self, w: &CyclicWord) -> Result<Arc<TPoly>> {
        if let Some(p) = self.memo.read().unwrap().get(w) {
            return Ok(p.clone());
        }
        if let Some(&l) = w.letters().iter().find(|&&l| l == 0 || l as usize > self.vanishing.len()) {
            return Err(Error::LetterOutOfRange { letter: l, d: self.vanishing.len() });
        }
        let p = if w.degree() <= self.rewrite.max_degree() {
            self.rewrite.lookup(w)?
        } else {
            let mut acc = TPoly::zero();
            for (m, c) in substituted_terms(w.letters(), &self.rule, &|l| self.is_vanishing(l)) {
                let r = self.reduce_monomial(&m)?;
                acc.add_scaled(&r, &c);
            }
            acc
        };
        let p = Arc::new(p);
        self.memo.write().unwrap().insert(w.clone(), p.clone());
        Ok(p)
    }

    pub fn reduce_monomial(&self, m: &TraceMonomial) -> Result<TPoly> {
        let mut factors: Vec<Arc<TPoly>> = Vec::with_capacity(m.factors().len());
        for f in m.factors() {
            let r = self.reduce_word(f)?;
            if r.is_zero() {
                return Ok(TPoly::zero());
            }
            factors.push(r);
        }
        // multiply small factors first
        factors.sort_by_key(|p| p.len());
        let mut acc = TPoly::one();
        for f in factors {
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    /// `R(p)`.
    pub fn apply(&self, p: &TracePolynomial) -> Result<TPoly> {
        let mut out = TPoly::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.reduce_monomial(m)?, c);
        }
        Ok(out)
    }

    /// Number of memoized words.
    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

/// `R(p)` with a fresh reducer.
pub fn evaluation_map_r(p: &TracePolynomial, rule: &ReductionRule, gens: &GeneratorTable) -> Result<TPoly> {
    Reducer::new(rule.clone(), gens.clone())?.apply(p)
}
