//! Hilbert functions computed two ways: directly from trace monomials, and
//! from a presentation (generators modulo relations).
//!
//! Both work with the traceless part and account for the central traces
//! `tr(X_k)` by convolution: the algebra is a polynomial ring in the central
//! traces tensored with the traceless part.

use crate::error::{Error, Result};
use crate::eval::{GenericMatrixSpec, PiEvaluator};
use crate::generators::GeneratorTable;
use crate::identities::nagata_higman;
use crate::linalg::{self, EchelonBasis};
use crate::par;
use crate::reduction::transpose_images;
use crate::trace::{graded_piece, TraceMonomial};
use crate::words::{cyclic_words_of, MultiDegree};

use super::{monomial_index, product_vectors, Relation, PATIENCE};

/// Largest degree computed by default: unbounded for `n <= 2`, 7 for `n = 3`.
pub fn default_cutoff(n: usize) -> Option<u32> {
    match n {
        0..=2 => None,
        3 => Some(7),
        _ => Some(0),
    }
}

fn check_cutoff(k: u32, cutoff: Option<u32>) -> Result<()> {
    match cutoff {
        Some(c) if k > c => Err(Error::CutoffExceeded(format!("Hilbert function degree {k} > cutoff {c}"))),
        _ => Ok(()),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// `H(k) = sum_j core(j) * #(monomials of degree k - j in c central variables)`.
fn convolve(core: &[u64], central: usize) -> Vec<u64> {
    (0..core.len())
        .map(|k| {
            (0..=k)
                .map(|j| {
                    let free = if central == 0 {
                        (k == j) as u64
                    } else {
                        binomial((k - j + central - 1) as u64, (central - 1) as u64)
                    };
                    core[j] * free
                })
                .sum()
        })
        .collect()
}

/// Dimension of the traceless part in one multidegree: the rank of the
/// images of products of traces of words of degree `2..=N(n)`.
pub fn traceless_piece_dim(pi: &PiEvaluator, md: &MultiDegree, max_word: usize) -> Result<usize> {
    if md.is_zero() {
        return Ok(1);
    }
    let d = md.len();
    let mut vars = Vec::new();
    for total in 2..=max_word.min(md.total() as usize) {
        for sub in MultiDegree::all_of_total(d, total as u32) {
            if sub.le(md) {
                vars.extend(cyclic_words_of(&sub).into_iter().map(TraceMonomial::trace));
            }
        }
    }
    let monos = graded_piece(&vars, md);
    if monos.is_empty() {
        return Ok(0);
    }
    let cols = par::map_collect(&monos, |m| pi.monomial_image(m));
    let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(linalg::row_space_of_int_rows(monos.len(), &transpose_images(&cols), PATIENCE).rank())
}

/// `H(0), ..., H(k)` of the trace algebra of `d` generic `n x n` matrices.
/// The value does not depend on whether `spec` is plain or traceless; only
/// its shape is used.
pub fn hilbert_prefix(n: usize, d: usize, spec: &GenericMatrixSpec, k: u32, cutoff: Option<u32>) -> Result<Vec<u64>> {
    check_cutoff(k, cutoff)?;
    if spec.n != n || spec.d != d {
        return Err(Error::Dimension(format!("spec is for ({}, {}), asked for ({n}, {d})", spec.n, spec.d)));
    }
    let big_n = nagata_higman(n)?;
    let pi = PiEvaluator::new(GenericMatrixSpec::traceless(n, d).with_diagonal_first())?;
    let mut core = Vec::with_capacity(k as usize + 1);
    for total in 0..=k {
        let mds = MultiDegree::all_of_total(d, total);
        let dims = mds.iter().map(|md| traceless_piece_dim(&pi, md, big_n)).collect::<Result<Vec<_>>>()?;
        core.push(dims.iter().sum::<usize>() as u64);
    }
    Ok(convolve(&core, d))
}

/// Dimension of the degree-`k` piece, with the default cutoff.
pub fn hilbert_function(n: usize, d: usize, spec: &GenericMatrixSpec, k: u32) -> Result<u64> {
    Ok(*hilbert_prefix(n, d, spec, k, default_cutoff(n))?.last().unwrap())
}

/// `H(0), ..., H(k)` of the polynomial ring on the generators modulo the
/// ideal generated by `relations` (polynomials in the core generators).
pub fn presented_prefix(gens: &GeneratorTable, relations: &[Relation], k: u32, cutoff: Option<u32>) -> Result<Vec<u64>> {
    check_cutoff(k, cutoff)?;
    let central = gens.entries.iter().filter(|g| g.is_central()).count();
    let mut core = Vec::with_capacity(k as usize + 1);
    for total in 0..=k {
        let mut sum = 0u64;
        for md in MultiDegree::all_of_total(gens.d, total) {
            let monos = gens.core_monomials(&md);
            if monos.is_empty() {
                continue;
            }
            let index = monomial_index(&monos);
            let mut span = EchelonBasis::new(monos.len());
            for r in relations.iter().filter(|r| r.multidegree == md) {
                let mut v: Vec<_> = r
                    .poly
                    .terms()
                    .map(|(m, c)| index.get(m).map(|&j| (j, c.clone())))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Dimension(format!("relation is not homogeneous of multidegree {md}")))?;
                v.sort_by_key(|(j, _)| *j);
                span.insert(&v);
            }
            for v in product_vectors(gens, &md, &index, relations, |c| Some(c.clone())) {
                let v = v.ok_or_else(|| Error::Dimension("relation is not homogeneous".into()))?;
                if span.rank() == monos.len() {
                    break;
                }
                span.insert(&v);
            }
            sum += (monos.len() - span.rank()) as u64;
        }
        core.push(sum);
    }
    Ok(convolve(&core, central))
}

/// Dimension of the degree-`k` piece of the presented algebra, with the
/// default cutoff for `gens.n`.
pub fn hilbert_function_presented(gens: &GeneratorTable, relations: &[Relation], k: u32) -> Result<u64> {
    Ok(*presented_prefix(gens, relations, k, default_cutoff(gens.n))?.last().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{minimal_generators, RelationEngine};

    #[test]
    fn small_cases() {
        let spec = GenericMatrixSpec::plain(2, 2);
        // five free generators of degrees 1, 1, 2, 2, 2
        assert_eq!(hilbert_prefix(2, 2, &spec, 4, None).unwrap(), vec![1, 2, 6, 10, 20]);
        assert_eq!(hilbert_function(3, 3, &GenericMatrixSpec::plain(3, 3), 0).unwrap(), 1);
        assert!(matches!(hilbert_function(3, 3, &GenericMatrixSpec::plain(3, 3), 8), Err(Error::CutoffExceeded(_))));
        let gens = minimal_generators(2, 2, &spec, 3).unwrap();
        assert_eq!(presented_prefix(&gens, &[], 4, None).unwrap(), vec![1, 2, 6, 10, 20]);
    }

    #[test]
    fn three_two_by_two_matrices() {
        let spec = GenericMatrixSpec::traceless(2, 3);
        let gens = minimal_generators(2, 3, &spec, 3).unwrap();
        let rels = RelationEngine::new(gens.clone()).unwrap().minimal_relations(6).unwrap();
        assert_eq!(hilbert_prefix(2, 3, &spec, 8, None).unwrap(), presented_prefix(&gens, &rels, 8, None).unwrap());
    }
}
