//! Minimal presentations: generators degree by degree, relation spaces and
//! minimal relation counts, certification of a relation table, degree bounds
//! and Hilbert functions.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::eval::GenericMatrixSpec;
use crate::generators::{Generator, GeneratorDef, GeneratorImages, GeneratorTable};
use crate::identities::nagata_higman;
use crate::linalg::{self, EchelonBasis, SparseVec};
use crate::par;
use crate::rational::Rational;
use crate::reduction::transpose_images;
use crate::tpoly::{self, TMonomial, TPoly};
use crate::trace::TracePolynomial;
use crate::words::{cyclic_words_of, MultiDegree};

pub mod bounds;
pub mod certify;
pub mod hilbert;

pub use bounds::{derksen_bound, generic_bound, hsop_bound, hsop_consistency, krull_dimension, BoundInput, HsopReport, HsopTable};
pub use certify::{
    certify_relation_table, orbit, reduce_tuple, relation_dim_upper_bound, table_relations, CandidateReport, CandidateStatus,
    CertificationReport, CertifyConfig, Completeness, MultidegreeReport, RelationCandidate, RelationTable,
};
pub use hilbert::{hilbert_function, hilbert_function_presented};

/// Rows examined without progress before switching to kernel checks.
const PATIENCE: usize = 40;

/// Label of the central generator of letter `k` (`t_a`, `t_b`, ...).
pub fn central_label(k: usize) -> String {
    format!("t_{}", (b'a' + (k - 1) as u8) as char)
}

/// Order in which the cyclic words of a multidegree are offered as new
/// generators. The counts per multidegree do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WordOrder {
    #[default]
    Ascending,
    Descending,
}

/// Minimal generators up to `max_total_degree`, found multidegree by
/// multidegree as the traces of cyclic words that are independent of the
/// products of earlier generators.
pub fn minimal_generators(n: usize, d: usize, spec: &GenericMatrixSpec, max_total_degree: u32) -> Result<GeneratorTable> {
    minimal_generators_ordered(n, d, spec, max_total_degree, WordOrder::Ascending)
}

pub fn minimal_generators_ordered(
    n: usize,
    d: usize,
    spec: &GenericMatrixSpec,
    max_total_degree: u32,
    order: WordOrder,
) -> Result<GeneratorTable> {
    if spec.n != n || spec.d != d {
        return Err(Error::Dimension(format!("spec is for ({}, {}), asked for ({n}, {d})", spec.n, spec.d)));
    }
    let big_n = nagata_higman(n)?;
    if max_total_degree as usize > big_n {
        return Err(Error::CutoffExceeded(format!("generators have degree <= {big_n}, asked for {max_total_degree}")));
    }
    let traceless = spec.traceless.iter().all(|&t| t);
    if !traceless && spec.traceless.iter().any(|&t| t) {
        return Err(Error::Unsupported("mixed traceless and plain letters".into()));
    }
    let mut table = GeneratorTable { n, d, traceless, entries: Vec::new() };
    if traceless {
        for k in 1..=d {
            let mut md = MultiDegree::zero(d);
            md.0[k - 1] = 1;
            table.entries.push(Generator {
                label: central_label(k),
                group: None,
                multidegree: md,
                definition: GeneratorDef::Central(k as u8),
            });
        }
    }
    let mut images = GeneratorImages::new(&table, table.spec().with_diagonal_first())?;
    let mut next = 1;
    for total in 1..=max_total_degree {
        let mds = MultiDegree::all_of_total(d, total);
        for md in mds {
            let mut words: Vec<_> = cyclic_words_of(&md)
                .into_iter()
                .filter(|w| !(w.degree() == 1 && table.spec().is_traceless(w.letters()[0])))
                .collect();
            if words.is_empty() {
                continue;
            }
            if order == WordOrder::Descending {
                words.reverse();
            }
            let degrees: Vec<u32> = table.entries.iter().map(Generator::degree).collect();
            let monos = table.core_monomials(&md);
            let k = monos.len();
            let mut cols = par::map_collect(&monos, |m| images.monomial_image(m, &degrees));
            cols.extend(par::map_collect(&words, |w| images.evaluator().trace_image(w).map(|p| (*p).clone())));
            let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
            let basis = linalg::row_space_of_int_rows(k + words.len(), &transpose_images(&cols), PATIENCE);
            for (j, w) in words.iter().enumerate() {
                if basis.is_pivot(k + j) {
                    let g = Generator {
                        label: format!("t_{next}"),
                        group: None,
                        multidegree: md.clone(),
                        definition: GeneratorDef::Trace(TracePolynomial::trace(w.word())),
                    };
                    next += 1;
                    images.push(&g)?;
                    table.entries.push(g);
                }
            }
        }
    }
    Ok(table)
}

/// The relations among the core generators in one multidegree.
#[derive(Debug)]
pub struct RelationSpace {
    pub multidegree: MultiDegree,
    pub monomials: Vec<TMonomial>,
    index: FxHashMap<TMonomial, usize>,
    /// Rank of the images of the monomials.
    pub image_rank: usize,
    /// Canonical kernel basis (from the reduced row echelon form).
    pub kernel: Vec<SparseVec>,
}

impl RelationSpace {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn index_of(&self, m: &[u16]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn to_tpoly(&self, v: &[(usize, Rational)]) -> TPoly {
        let mut p = TPoly::zero();
        for (j, c) in v {
            p.add_term(self.monomials[*j].clone(), c.clone());
        }
        p
    }

    /// Coordinates of a polynomial whose monomials all lie in this piece.
    pub fn vector(&self, p: &TPoly) -> Result<SparseVec> {
        let mut v: SparseVec = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let j = self
                .index_of(m)
                .ok_or_else(|| Error::Dimension(format!("monomial outside multidegree {}", self.multidegree)))?;
            v.push((j, c.clone()));
        }
        v.sort_by_key(|(j, _)| *j);
        Ok(v)
    }
}

/// Index of the monomials of a multidegree, in `core_monomials` order.
pub fn monomial_index(monos: &[TMonomial]) -> FxHashMap<TMonomial, usize> {
    monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// A relation together with its multidegree.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub multidegree: MultiDegree,
    pub poly: TPoly,
}

/// Kernels of the evaluation of generator monomials, per multidegree.
pub struct RelationEngine {
    table: GeneratorTable,
    images: GeneratorImages,
    degrees: Vec<u32>,
    spaces: RwLock<FxHashMap<MultiDegree, Arc<RelationSpace>>>,
}

impl RelationEngine {
    /// Kernels are computed with the first matrix diagonal, which does not
    /// change them.
    pub fn new(table: GeneratorTable) -> Result<Self> {
        let images = GeneratorImages::new(&table, table.spec().with_diagonal_first())?;
        let degrees = table.entries.iter().map(Generator::degree).collect();
        Ok(RelationEngine { table, images, degrees, spaces: RwLock::new(FxHashMap::default()) })
    }

    pub fn generators(&self) -> &GeneratorTable {
        &self.table
    }

    /// Basis of the polynomials in the core generators of multidegree `md`
    /// that evaluate to zero.
    pub fn relation_space(&self, md: &MultiDegree) -> Result<Arc<RelationSpace>> {
        if let Some(s) = self.spaces.read().unwrap().get(md) {
            return Ok(s.clone());
        }
        let monos = self.table.core_monomials(md);
        let cols = par::map_collect(&monos, |m| self.images.monomial_image(m, &self.degrees));
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        let basis = linalg::row_space_of_int_rows(monos.len(), &transpose_images(&cols), PATIENCE);
        let kernel = basis
            .kernel_basis()
            .into_iter()
            .map(|v| v.into_iter().enumerate().filter(|(_, x)| !num_traits::Zero::is_zero(x)).collect())
            .collect();
        let space = Arc::new(RelationSpace {
            multidegree: md.clone(),
            index: monomial_index(&monos),
            monomials: monos,
            image_rank: basis.rank(),
            kernel,
        });
        self.spaces.write().unwrap().insert(md.clone(), space.clone());
        Ok(space)
    }

    /// Products of the given relations with core monomials that land in
    /// `space`'s multidegree (only relations of strictly smaller multidegree
    /// contribute).
    pub fn products(&self, space: &RelationSpace, lower: &[Relation]) -> Vec<SparseVec> {
        product_vectors(&self.table, &space.multidegree, &space.index, lower, |c| Some(c.clone()))
            .into_iter()
            .map(|v| v.expect("rational coefficients always convert"))
            .collect()
    }

    /// Relations whose multidegree is not generated by relations of smaller
    /// multidegree, up to the given total degree, in ascending total degree.
    pub fn minimal_relations(&self, up_to_degree: u32) -> Result<Vec<Relation>> {
        let d = self.table.d;
        let mut found: Vec<Relation> = Vec::new();
        for total in 1..=up_to_degree {
            let mds = MultiDegree::all_of_total(d, total);
            let new = par::map_collect(&mds, |md| -> Result<Vec<Relation>> {
                let space = self.relation_space(md)?;
                if space.dim() == 0 {
                    return Ok(Vec::new());
                }
                let mut span = EchelonBasis::new(space.monomials.len());
                for v in self.products(&space, &found) {
                    span.insert(&v);
                }
                let mut out = Vec::new();
                for k in &space.kernel {
                    if span.insert(k).is_some() {
                        out.push(Relation { multidegree: md.clone(), poly: space.to_tpoly(k) });
                    }
                }
                Ok(out)
            });
            for r in new {
                found.extend(r?);
            }
        }
        Ok(found)
    }

    /// Number of new minimal relations per multidegree (nonzero entries only).
    pub fn minimal_relation_counts(&self, up_to_degree: u32) -> Result<BTreeMap<MultiDegree, usize>> {
        let mut out = BTreeMap::new();
        for r in self.minimal_relations(up_to_degree)? {
            *out.entry(r.multidegree).or_insert(0) += 1;
        }
        Ok(out)
    }
}

/// `u * r` for every relation `r` of multidegree strictly below `md` and every
/// core monomial `u` of the complementary multidegree, as coordinate vectors
/// in `index`. `conv` maps coefficients (e.g. to a prime field); `None` marks
/// a coefficient it cannot map.
pub fn product_vectors<T>(
    table: &GeneratorTable,
    md: &MultiDegree,
    index: &FxHashMap<TMonomial, usize>,
    lower: &[Relation],
    conv: impl Fn(&Rational) -> Option<T> + Sync,
) -> Vec<Option<Vec<(usize, T)>>>
where
    T: Send,
{
    let mut jobs: Vec<(&TPoly, TMonomial)> = Vec::new();
    let mut cofactors: FxHashMap<MultiDegree, Vec<TMonomial>> = FxHashMap::default();
    for r in lower {
        let Some(q) = md.checked_sub(&r.multidegree) else { continue };
        if q.is_zero() {
            continue;
        }
        let us = cofactors.entry(q.clone()).or_insert_with(|| table.core_monomials(&q));
        for u in us.iter() {
            jobs.push((&r.poly, u.clone()));
        }
    }
    par::map_collect(&jobs, |(p, u)| {
        let mut v = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let j = *index.get(&tpoly::merge(m, u))?;
            v.push((j, conv(c)?));
        }
        v.sort_by_key(|(j, _)| *j);
        Some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_generators() {
        let t = minimal_generators(2, 2, &GenericMatrixSpec::plain(2, 2), 3).unwrap();
        assert_eq!(t.multiplicities(), BTreeMap::from([(1, 2), (2, 3)]));
        let t = minimal_generators(2, 3, &GenericMatrixSpec::traceless(2, 3), 3).unwrap();
        assert_eq!(t.multiplicities(), BTreeMap::from([(1, 3), (2, 6), (3, 1)]));
        assert_eq!(t.entries[0].label, "t_a");
        assert!(minimal_generators(2, 2, &GenericMatrixSpec::plain(2, 2), 4).is_err());
    }

    #[test]
    fn two_by_two_relations() {
        let t = minimal_generators(2, 2, &GenericMatrixSpec::plain(2, 2), 3).unwrap();
        let e = RelationEngine::new(t).unwrap();
        assert!(e.minimal_relations(6).unwrap().is_empty());
        assert_eq!(e.relation_space(&MultiDegree::zero(2)).unwrap().dim(), 0);
        // three generic 2x2 matrices: one relation, in degree 6
        let t = minimal_generators(2, 3, &GenericMatrixSpec::traceless(2, 3), 3).unwrap();
        let e = RelationEngine::new(t).unwrap();
        let counts = e.minimal_relation_counts(6).unwrap();
        assert_eq!(counts, BTreeMap::from([(MultiDegree(vec![2, 2, 2]), 1)]));
    }
}
