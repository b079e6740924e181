//! Certification of a table of relation tuples: every tuple `M` stands for
//! the relation `R(F(M))` among the generators.
//!
//! Per candidate: (a) its letter count matches the declared multidegree,
//! (b) the relation vanishes under evaluation, (c) it is not generated by the
//! relations of smaller multidegree. Per multidegree: (d) the candidates
//! together with the products of smaller relations span all relations.
//!
//! Checks (c) and (d) use linear algebra modulo a large prime where that
//! gives a one-sided certificate: a vector outside a span modulo `p` is
//! outside it over the rationals, and a rank modulo `p` never exceeds the
//! rational rank. Completeness above the symbolic cutoff is certified by a
//! sandwich: the rank of the known relations (a lower bound for the relation
//! dimension) against the corank of an evaluation matrix at random points
//! (an upper bound).

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{self, GenericMatrixSpec};
use crate::generators::{GeneratorDef, GeneratorImages, GeneratorTable};
use crate::identities::{fundamental_identity_n, sort_tuple, Permutation};
use crate::linalg::EchelonBasis;
use crate::modp::{self, ModBasis};
use crate::par;
use crate::poly::{Coeff, Poly};
use crate::rational::Rational;
use crate::reduction::Reducer;
use crate::tpoly::{TPoly, TermJson};
use crate::words::{parse_tuple, print_tuple, MultiDegree, Word};

use super::{monomial_index, product_vectors, Relation, RelationEngine};

const C33_RELATIONS: &str = include_str!("../../data/c33_relations.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationBlock {
    pub degree: u32,
    pub header: Vec<u32>,
    pub tuples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTable {
    pub n: usize,
    pub d: usize,
    pub blocks: Vec<RelationBlock>,
}

/// A listed tuple and the relation it stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCandidate {
    /// As listed.
    pub text: String,
    pub tuple: Vec<Word>,
    /// The block header.
    pub declared: MultiDegree,
    pub block: usize,
    /// `R(F(tuple))`, filled by certification.
    pub reduced: Option<TPoly>,
}

impl RelationCandidate {
    /// Letter count of the tuple.
    pub fn multidegree(&self, d: usize) -> MultiDegree {
        self.tuple.iter().fold(MultiDegree::zero(d), |acc, w| acc.add(&w.multidegree(d)))
    }

    /// The tuple with positions in canonical order (`F` is symmetric in them).
    pub fn key(&self) -> String {
        tuple_key(&self.tuple)
    }
}

pub fn tuple_key(t: &[Word]) -> String {
    print_tuple(&sort_tuple(t.to_vec()))
}

impl RelationTable {
    /// The relation table of three generic 3x3 matrices.
    pub fn c33() -> RelationTable {
        RelationTable::from_json_str(C33_RELATIONS).expect("embedded relation table parses")
    }

    pub fn from_json_str(text: &str) -> Result<RelationTable> {
        let t: RelationTable = serde_json::from_str(text)?;
        for b in &t.blocks {
            if b.header.len() != t.d {
                return Err(Error::Parse(format!("header {:?} has wrong length", b.header)));
            }
        }
        Ok(t)
    }

    pub fn candidates(&self) -> Result<Vec<RelationCandidate>> {
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for text in &b.tuples {
                let tuple = parse_tuple(text, self.d)?;
                if tuple.len() != self.n + 1 {
                    return Err(Error::Arity { expected: self.n + 1, got: tuple.len() });
                }
                out.push(RelationCandidate {
                    text: text.clone(),
                    tuple,
                    declared: MultiDegree(b.header.clone()),
                    block: i,
                    reduced: None,
                });
            }
        }
        Ok(out)
    }
}

/// All permutations of the letters `1..=d`, as images of `1..=d`.
pub fn letter_permutations(d: usize) -> Vec<Vec<u8>> {
    Permutation::all(d).iter().map(|p| (0..d).map(|i| p.apply(i) as u8 + 1).collect()).collect()
}

/// Renames letter `l` to `perm[l - 1]` in every word.
pub fn permute_tuple(t: &[Word], perm: &[u8]) -> Vec<Word> {
    t.iter()
        .map(|w| Word::new(w.letters().iter().map(|&l| perm[l as usize - 1]).collect()).expect("nonempty"))
        .collect()
}

/// The distinct images of a tuple under letter permutations, in canonical
/// position order.
pub fn orbit(t: &[Word], d: usize) -> Vec<Vec<Word>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in letter_permutations(d) {
        let img = sort_tuple(permute_tuple(t, &p));
        if seen.insert(print_tuple(&img)) {
            out.push(img);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Evaluate symbolically up to this total degree, at random points above.
    pub symbolic_degree: u32,
    /// Number of random points above the symbolic cutoff.
    pub points: usize,
    pub seed: u64,
    /// Candidates above this total degree are skipped.
    pub max_degree: u32,
    /// Fail check (a) on a header mismatch instead of correcting it.
    pub strict_headers: bool,
    /// Run the completeness check (d).
    pub completeness: bool,
    /// Completeness is reported unverified above this many monomials.
    pub max_monomials: usize,
    /// Above the symbolic degree, compute the relation dimension exactly
    /// when the rank bounds do not meet and there are at most this many
    /// monomials.
    pub exact_monomials: usize,
    /// Include the reduced forms in the report.
    pub include_forms: bool,
    /// Progress lines on standard error.
    pub progress: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            symbolic_degree: 9,
            points: 5,
            seed: 1,
            max_degree: 12,
            strict_headers: false,
            completeness: true,
            max_monomials: 4000,
            exact_monomials: 400,
            include_forms: false,
            progress: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateStatus {
    Certified,
    Duplicate,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub tuple: String,
    pub multidegree: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub tuple: String,
    pub block_degree: u32,
    pub header: Vec<u32>,
    pub multidegree: Vec<u32>,
    /// The header disagreed with the letter count (and was corrected unless
    /// headers are strict).
    pub header_mismatch: bool,
    pub status: CandidateStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duplicate_of: Option<String>,
    /// First failed check: `a`, `b` or `c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// `symbolic` or `random-points`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<String>,
    pub terms: usize,
    pub orbit: Vec<OrbitEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Vec<TermJson>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Complete,
    Incomplete,
    Unverified,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultidegreeReport {
    pub multidegree: Vec<u32>,
    pub monomials: usize,
    pub candidates: usize,
    /// Dimension of the span of products of smaller relations.
    pub lower_rank: usize,
    /// The same with the candidates and their images under letter
    /// permutations fixing the multidegree added.
    pub rank_with_candidates: usize,
    /// Rank gained from those images beyond the candidates themselves.
    pub image_rank: usize,
    /// Exact relation dimension (symbolic kernel), when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_dim: Option<usize>,
    /// Upper bound from random evaluation, above the symbolic cutoff.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_dim_upper: Option<usize>,
    /// Minimal relations in this multidegree: relation dimension minus
    /// `lower_rank`, when the relation dimension is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_relations: Option<usize>,
    pub completeness: Completeness,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub config: CertifyConfig,
    pub rule: serde_json::Value,
    pub prime: u64,
    pub candidates: Vec<CandidateReport>,
    pub multidegrees: Vec<MultidegreeReport>,
    /// Relations (candidates and their letter permutations) reduced.
    pub relations_reduced: usize,
    pub certified: usize,
    pub duplicates: usize,
    pub failed: usize,
    pub unverified_multidegrees: usize,
    /// Multidegrees where the candidates provably miss relations.
    pub incomplete_multidegrees: usize,
    /// No candidate failed checks (a)-(c).
    pub passed: bool,
}

fn mix(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^ (z >> 31)
}

fn progress(cfg: &CertifyConfig, msg: impl FnOnce() -> String) {
    if cfg.progress {
        eprintln!("{}", msg());
    }
}

/// `R(F(t))`.
pub fn reduce_tuple(reducer: &Reducer, t: &[Word]) -> Result<TPoly> {
    reducer.apply(&fundamental_identity_n(reducer.rule().n, t)?)
}

/// Whether `pi(r) = 0`, symbolically over all variables.
fn vanishes_symbolically(images: &GeneratorImages, degrees: &[u32], r: &TPoly) -> Result<bool> {
    let mut acc: Poly<Rational> = Poly::zero();
    for (m, c) in r.terms() {
        let img = images.monomial_image(m, degrees)?;
        acc.add_scaled(&img.map_coeffs(|x| Coeff::to_rational(x)), c);
    }
    Ok(acc.is_zero())
}

/// Whether `pi(r)` vanishes at `points` seeded random integer points.
fn vanishes_at_points(gens: &GeneratorTable, r: &TPoly, points: usize, seed: u64) -> Result<bool> {
    let spec = gens.spec();
    for i in 0..points {
        let ms: Vec<_> = eval::random_integer_matrices(&spec, mix(seed, i as u64)).iter().map(|m| eval::to_dense(m)).collect();
        let values = gens.values_at(&ms)?;
        if !num_traits::Zero::is_zero(&r.eval(&values)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of all generators modulo `p` at a random point (central
/// generators get 0; they do not occur in relations).
fn generator_values_modp(gens: &GeneratorTable, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let n = gens.n;
    let spec = gens.spec();
    let mats: Vec<Vec<Vec<u64>>> = (1..=gens.d)
        .map(|k| {
            let mut m: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..modp::P)).collect()).collect();
            if spec.is_traceless(k as u8) {
                let s = (0..n - 1).fold(0, |acc, i| modp::add(acc, m[i][i]));
                m[n - 1][n - 1] = modp::neg(s);
            }
            m
        })
        .collect();
    let mut memo: FxHashMap<Vec<u8>, u64> = FxHashMap::default();
    let mut trace_of = |letters: &[u8]| -> u64 {
        if let Some(&v) = memo.get(letters) {
            return v;
        }
        let mut acc = mats[letters[0] as usize - 1].clone();
        for &l in &letters[1..] {
            let b = &mats[l as usize - 1];
            let mut out = vec![vec![0u64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if acc[i][k] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        out[i][j] = modp::add(out[i][j], modp::mul(acc[i][k], b[k][j]));
                    }
                }
            }
            acc = out;
        }
        let t = (0..n).fold(0, |s, i| modp::add(s, acc[i][i]));
        memo.insert(letters.to_vec(), t);
        t
    };
    gens.entries
        .iter()
        .map(|g| match &g.definition {
            GeneratorDef::Central(_) => 0,
            GeneratorDef::Trace(p) => {
                let mut total = 0;
                for (m, c) in p.terms() {
                    let mut v = modp::from_rational(c).expect("small denominators");
                    for f in m.factors() {
                        v = modp::mul(v, trace_of(f.letters()));
                    }
                    total = modp::add(total, v);
                }
                total
            }
        })
        .collect()
}

/// An upper bound for the relation dimension in a multidegree: the number of
/// monomials minus the rank, modulo `p`, of their values at random points.
/// Rows are added until `patience` consecutive rows bring nothing; stopping
/// early only weakens the bound.
pub fn relation_dim_upper_bound(gens: &GeneratorTable, monos: &[Vec<u16>], seed: u64, patience: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = ModBasis::new(monos.len());
    let mut idle = 0;
    while idle < patience && basis.rank() < monos.len() {
        let vals = generator_values_modp(gens, &mut rng);
        let row: Vec<u64> = monos.iter().map(|m| m.iter().fold(1, |acc, &i| modp::mul(acc, vals[i as usize]))).collect();
        if basis.insert(row) {
            idle = 0;
        } else {
            idle += 1;
        }
    }
    monos.len() - basis.rank()
}

fn to_modp_vector(index: &FxHashMap<Vec<u16>, usize>, r: &TPoly) -> Option<Vec<(usize, u64)>> {
    r.terms().map(|(m, c)| Some((*index.get(m)?, modp::from_rational(c)?))).collect()
}

struct Work {
    md: MultiDegree,
    active: bool,
    report: CandidateReport,
}

/// Runs checks (a)-(d) on the candidates, filling in their reduced forms.
pub fn certify_relation_table(
    candidates: &mut [RelationCandidate],
    reducer: &Reducer,
    cfg: &CertifyConfig,
) -> Result<CertificationReport> {
    let gens = reducer.generators();
    let d = gens.d;

    // (a) and duplicates
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    let mut work: Vec<Work> = Vec::with_capacity(candidates.len());
    for c in candidates.iter() {
        let md = c.multidegree(d);
        let mismatch = md != c.declared;
        let orbit_entries = orbit(&c.tuple, d)
            .iter()
            .map(|t| OrbitEntry { tuple: print_tuple(t), multidegree: tuple_md(t, d).0 })
            .collect();
        let mut report = CandidateReport {
            tuple: c.text.clone(),
            block_degree: c.declared.total(),
            header: c.declared.0.clone(),
            multidegree: md.0.clone(),
            header_mismatch: mismatch,
            status: CandidateStatus::Certified,
            duplicate_of: None,
            failed_stage: None,
            message: None,
            vanishing: None,
            terms: 0,
            orbit: orbit_entries,
            reduced: None,
        };
        let mut active = true;
        if md.total() > cfg.max_degree {
            report.status = CandidateStatus::Skipped;
            active = false;
        } else if mismatch && cfg.strict_headers {
            report.status = CandidateStatus::Failed;
            report.failed_stage = Some("a".into());
            report.message = Some(format!("letter count {md} differs from the header {}", c.declared));
            active = false;
        } else if let Some(first) = seen.get(&c.key()) {
            report.status = CandidateStatus::Duplicate;
            report.duplicate_of = Some(first.clone());
            active = false;
        } else {
            seen.insert(c.key(), c.text.clone());
        }
        work.push(Work { md, active, report });
    }
    let targets: BTreeSet<MultiDegree> = work.iter().filter(|w| w.active).map(|w| w.md.clone()).collect();

    // relations to reduce: the candidates, and every letter permutation of a
    // candidate that lies below (or on) some target multidegree
    let mut jobs: Vec<(String, Vec<Word>)> = Vec::new();
    let mut job_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut add_job = |t: Vec<Word>, jobs: &mut Vec<(String, Vec<Word>)>| -> usize {
        let k = tuple_key(&t);
        *job_of.entry(k.clone()).or_insert_with(|| {
            jobs.push((k, t));
            jobs.len() - 1
        })
    };
    let mut cand_job = vec![usize::MAX; candidates.len()];
    for (i, c) in candidates.iter().enumerate() {
        if work[i].active {
            cand_job[i] = add_job(c.tuple.clone(), &mut jobs);
        }
    }
    for (i, c) in candidates.iter().enumerate() {
        if !work[i].active {
            continue;
        }
        for img in orbit(&c.tuple, d) {
            let md = tuple_md(&img, d);
            if targets.iter().any(|t| md.le(t)) {
                add_job(img, &mut jobs);
            }
        }
    }
    // cheap ones first so the memo fills bottom-up
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&j| (tuple_md(&jobs[j].1, d).total(), j));
    let mut reduced: Vec<Option<TPoly>> = vec![None; jobs.len()];
    let mut last_degree = 0;
    for chunk in order.chunk_by(|&a, &b| tuple_md(&jobs[a].1, d).total() == tuple_md(&jobs[b].1, d).total()) {
        let deg = tuple_md(&jobs[chunk[0]].1, d).total();
        if deg != last_degree {
            progress(cfg, || format!("reducing {} relations of degree {deg}", chunk.len()));
            last_degree = deg;
        }
        let out = par::map_collect(chunk, |&j| reduce_tuple(reducer, &jobs[j].1));
        for (&j, r) in chunk.iter().zip(out) {
            reduced[j] = Some(r?);
        }
    }
    let pool: Vec<Relation> = jobs
        .iter()
        .zip(&reduced)
        .map(|((_, t), r)| Relation { multidegree: tuple_md(t, d), poly: r.clone().unwrap() })
        .collect();

    // (a) homogeneity and (b) vanishing
    let full_images = GeneratorImages::new(gens, gens.spec())?;
    let degrees: Vec<u32> = gens.entries.iter().map(|g| g.degree()).collect();
    let checks = par::map_range(candidates.len(), |i| -> Result<Option<(String, String, Option<String>)>> {
        if !work[i].active {
            return Ok(None);
        }
        let r = &pool[cand_job[i]].poly;
        let md = &work[i].md;
        let mds = r.multidegrees(&gens.multidegrees(), d);
        if mds.iter().any(|m| m != md) {
            return Ok(Some(("a".into(), format!("reduced form is not homogeneous of multidegree {md}"), None)));
        }
        if r.is_zero() {
            return Ok(Some(("c".into(), "reduces to zero".into(), None)));
        }
        let (ok, how) = if md.total() <= cfg.symbolic_degree {
            (vanishes_symbolically(&full_images, &degrees, r)?, "symbolic")
        } else {
            (vanishes_at_points(gens, r, cfg.points, mix(cfg.seed, i as u64))?, "random-points")
        };
        if !ok {
            return Ok(Some(("b".into(), format!("pi does not vanish ({how})"), Some(how.into()))));
        }
        Ok(Some((String::new(), String::new(), Some(how.into()))))
    });
    for (i, c) in checks.into_iter().enumerate() {
        let Some((stage, msg, how)) = c? else { continue };
        let w = &mut work[i];
        w.report.vanishing = how;
        w.report.terms = pool[cand_job[i]].poly.len();
        if !stage.is_empty() {
            w.report.status = CandidateStatus::Failed;
            w.report.failed_stage = Some(stage);
            w.report.message = Some(msg);
        }
    }

    // (c) per candidate and (d) per multidegree
    let engine = if cfg.completeness {
        Some(RelationEngine::new(gens.clone())?)
    } else {
        None
    };
    let target_list: Vec<MultiDegree> = targets.into_iter().collect();
    let md_results = par::map_collect(&target_list, |md| -> Result<(MultidegreeReport, Vec<(usize, Option<String>)>)> {
        progress(cfg, || format!("multidegree {md}"));
        let monos = gens.core_monomials(md);
        let index = monomial_index(&monos);
        let members: Vec<usize> = (0..candidates.len())
            .filter(|&i| work[i].active && work[i].md == *md && work[i].report.status == CandidateStatus::Certified)
            .collect();
        let exact_dim = match &engine {
            Some(e) if md.total() <= cfg.symbolic_degree => Some(e.relation_space(md)?.dim()),
            _ => None,
        };
        let upper = if exact_dim.is_none() && cfg.completeness && monos.len() <= cfg.max_monomials {
            Some(relation_dim_upper_bound(gens, &monos, mix(cfg.seed, 0x5eed ^ md.total() as u64), 20))
        } else {
            None
        };
        let bound = exact_dim.or(upper);

        let mut lower = ModBasis::new(monos.len());
        let mut unmappable = false;
        for v in product_vectors(gens, md, &index, &pool, modp::from_rational) {
            if bound.is_some_and(|b| lower.rank() >= b) {
                break;
            }
            match v {
                Some(v) => {
                    lower.insert_sparse(&v);
                }
                None => unmappable = true,
            }
        }
        let mut with = lower.clone();
        let mut verdicts = Vec::new();
        for &i in &members {
            let r = &pool[cand_job[i]].poly;
            let verdict = match to_modp_vector(&index, r) {
                None => Some("coefficient not invertible modulo p".to_string()),
                Some(_) if unmappable => Some("a lower relation has a coefficient not invertible modulo p".to_string()),
                Some(v) if lower.contains_sparse(&v) => Some("lies in the span of smaller relations (modulo p)".to_string()),
                Some(v) => {
                    with.insert_sparse(&v);
                    None
                }
            };
            verdicts.push((i, verdict));
        }
        // letter permutations fixing the multidegree give further relations
        let mut images = 0;
        for r in pool.iter().filter(|r| r.multidegree == *md) {
            if let Some(v) = to_modp_vector(&index, &r.poly) {
                images += with.insert_sparse(&v) as usize;
            }
        }

        let same = || pool.iter().filter(|r| r.multidegree == *md).map(|r| &r.poly);
        let mut exact_dim = exact_dim;
        let mut lower_rank = lower.rank();
        let mut with_rank = with.rank();
        let (completeness, method) = if !cfg.completeness {
            (Completeness::Skipped, "not run".to_string())
        } else if upper.is_some_and(|u| with_rank == u) {
            (Completeness::Complete, "rank bounds".to_string())
        } else {
            // the bounds do not meet (or nothing is known yet): fall back to
            // the exact relation dimension where the multidegree is small
            if exact_dim.is_none() && monos.len() <= cfg.exact_monomials {
                if let Some(e) = &engine {
                    progress(cfg, || format!("multidegree {md}: exact relation space"));
                    exact_dim = Some(e.relation_space(md)?.dim());
                }
            }
            match exact_dim {
                Some(k) => {
                    lower_rank = exact_rank(gens, md, &index, &pool, std::iter::empty())?;
                    with_rank = exact_rank(gens, md, &index, &pool, same())?;
                    let c = if with_rank == k { Completeness::Complete } else { Completeness::Incomplete };
                    (c, "exact kernel".to_string())
                }
                None if upper.is_some() => (Completeness::Unverified, "rank bounds do not meet".to_string()),
                None => (Completeness::Unverified, format!("more than {} monomials", cfg.max_monomials)),
            }
        };
        let minimal = match (exact_dim, completeness) {
            (Some(k), _) => Some(k - lower_rank),
            (None, Completeness::Complete) => Some(with_rank - lower_rank),
            _ => None,
        };
        let report = MultidegreeReport {
            multidegree: md.0.clone(),
            monomials: monos.len(),
            candidates: members.len(),
            lower_rank,
            rank_with_candidates: with_rank,
            image_rank: images,
            relation_dim: exact_dim,
            relation_dim_upper: upper,
            minimal_relations: minimal,
            completeness,
            method,
        };
        progress(cfg, || {
            format!(
                "multidegree {md}: {} monomials, lower {} -> {} with candidates, {:?}",
                monos.len(),
                report.lower_rank,
                report.rank_with_candidates,
                report.completeness
            )
        });
        Ok((report, verdicts))
    });
    let mut multidegrees = Vec::new();
    for res in md_results {
        let (rep, verdicts) = res?;
        for (i, v) in verdicts {
            if let Some(msg) = v {
                work[i].report.status = CandidateStatus::Failed;
                work[i].report.failed_stage = Some("c".into());
                work[i].report.message = Some(msg);
            }
        }
        multidegrees.push(rep);
    }

    let labels = gens.labels();
    for (i, c) in candidates.iter_mut().enumerate() {
        if work[i].active {
            let r = pool[cand_job[i]].poly.clone();
            if cfg.include_forms {
                work[i].report.reduced = Some(r.to_json(&labels));
            }
            c.reduced = Some(r);
        }
    }
    let reports: Vec<CandidateReport> = work.into_iter().map(|w| w.report).collect();
    let count = |s: CandidateStatus| reports.iter().filter(|r| r.status == s).count();
    let failed = count(CandidateStatus::Failed);
    let incomplete = multidegrees.iter().filter(|m| m.completeness == Completeness::Incomplete).count();
    Ok(CertificationReport {
        config: cfg.clone(),
        rule: reducer.rule().to_json(),
        prime: modp::P,
        certified: count(CandidateStatus::Certified),
        duplicates: count(CandidateStatus::Duplicate),
        failed,
        unverified_multidegrees: multidegrees.iter().filter(|m| m.completeness == Completeness::Unverified).count(),
        incomplete_multidegrees: incomplete,
        passed: failed == 0,
        relations_reduced: pool.len(),
        candidates: reports,
        multidegrees,
    })
}

fn tuple_md(t: &[Word], d: usize) -> MultiDegree {
    t.iter().fold(MultiDegree::zero(d), |acc, w| acc.add(&w.multidegree(d)))
}

/// Exact rank of the products of smaller relations together with `extra`.
fn exact_rank<'a>(
    gens: &GeneratorTable,
    md: &MultiDegree,
    index: &FxHashMap<Vec<u16>, usize>,
    pool: &[Relation],
    extra: impl Iterator<Item = &'a TPoly>,
) -> Result<usize> {
    let mut basis = EchelonBasis::new(index.len());
    for v in product_vectors(gens, md, index, pool, |c| Some(c.clone())) {
        basis.insert(&v.ok_or_else(|| Error::Dimension("relation is not homogeneous".into()))?);
    }
    for r in extra {
        let mut v: Vec<(usize, Rational)> = r
            .terms()
            .map(|(m, c)| index.get(m).map(|&j| (j, c.clone())))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Dimension("relation is not homogeneous".into()))?;
        v.sort_by_key(|(j, _)| *j);
        basis.insert(&v);
    }
    Ok(basis.rank())
}

/// The relations `R(F(M))` for every candidate of total degree at most
/// `max_degree` and every letter permutation of it.
pub fn table_relations(reducer: &Reducer, table: &RelationTable, max_degree: u32) -> Result<Vec<Relation>> {
    let d = table.d;
    let mut seen = BTreeSet::new();
    let mut tuples = Vec::new();
    for c in table.candidates()? {
        if c.multidegree(d).total() > max_degree {
            continue;
        }
        for img in orbit(&c.tuple, d) {
            if seen.insert(print_tuple(&img)) {
                tuples.push(img);
            }
        }
    }
    let polys = par::map_collect(&tuples, |t| reduce_tuple(reducer, t));
    tuples
        .iter()
        .zip(polys)
        .map(|(t, p)| Ok(Relation { multidegree: tuple_md(t, d), poly: p? }))
        .collect()
}

/// The traceless spec of a generator table's shape.
pub fn spec_of(gens: &GeneratorTable) -> GenericMatrixSpec {
    gens.spec()
}
