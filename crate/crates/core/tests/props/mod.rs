//! Randomized properties shared by the property test target and the
//! acceptance run. Every property runs 100 cases from a fixed seed.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use tracealg::eval::{self, GenericMatrixSpec, PiEvaluator};
use tracealg::generators::GeneratorTable;
use tracealg::identities::fundamental_identity;
use tracealg::linalg::{kernel_basis, rank, rref, RationalMatrix};
use tracealg::presentation::minimal_generators;
use tracealg::rational::{self, Rational};
use tracealg::reduction::{solve_reduction, ColumnOrder, Reducer};
use tracealg::trace::TracePolynomial;
use tracealg::words::{canonicalize, CyclicWord, Word};

pub const CASES: u32 = 100;

fn runner(seed: u8) -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn check<S: Strategy>(seed: u8, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(seed).run(&strategy, test).map_err(|e| e.to_string())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn word(d: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1..=d, 1..=max_len)
}

/// Small trace polynomials in `d` letters: up to three terms, each a product
/// of up to two traces of short words.
fn trace_poly(d: u8) -> impl Strategy<Value = TracePolynomial> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(word(d, 3), 1..=2)), 1..=3).prop_map(|terms| {
        let mut p = TracePolynomial::zero();
        for (c, ws) in terms {
            let mut t = TracePolynomial::one().scale(&rational::int(c));
            for w in ws {
                t = t.multiply(&TracePolynomial::trace_of(&w).unwrap());
            }
            p = p.add(&t);
        }
        p
    })
}

pub fn rref_idempotent() -> Result<(), String> {
    check(1, matrix(), |rows| {
        let m = RationalMatrix::from_i64(&rows).unwrap();
        let (r, pivots) = rref(&m);
        let (rr, pivots2) = rref(&r);
        prop_assert_eq!(rr, r);
        prop_assert_eq!(pivots, pivots2);
        Ok(())
    })
}

pub fn rank_nullity() -> Result<(), String> {
    check(2, matrix(), |rows| {
        let m = RationalMatrix::from_i64(&rows).unwrap();
        let kernel = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + kernel.len(), m.ncols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == Rational::from(0)));
        }
        Ok(())
    })
}

pub fn pi_homomorphism() -> Result<(), String> {
    let pi = PiEvaluator::new(GenericMatrixSpec::plain(2, 2)).unwrap();
    check(3, (trace_poly(2), trace_poly(2)), |(p, q)| {
        let (a, b) = (pi.pi(&p).unwrap(), pi.pi(&q).unwrap());
        prop_assert_eq!(pi.pi(&p.multiply(&q)).unwrap(), a.mul(&b));
        prop_assert_eq!(pi.pi(&p.add(&q)).unwrap(), {
            let mut s = a.clone();
            s.add_assign(&b);
            s
        });
        Ok(())
    })
}

/// Scaling `X_k` by `l_k` scales `pi(Tr(w))` by the product of `l_k^(deg_k w)`.
pub fn pi_grading() -> Result<(), String> {
    let spec = GenericMatrixSpec::plain(3, 3);
    check(4, (word(3, 7), any::<u64>(), prop::collection::vec(-3i64..=3, 3)), |(w, seed, scales)| {
        let t = TracePolynomial::trace_of(&w).unwrap();
        let ms = eval::random_matrices(&spec, seed);
        let scaled: Vec<_> = ms
            .iter()
            .zip(&scales)
            .map(|(m, &l)| m.iter().map(|r| r.iter().map(|x| x * &rational::int(l)).collect()).collect())
            .collect();
        let mut factor = rational::int(1);
        for &l in &w {
            factor *= rational::int(scales[l as usize - 1]);
        }
        prop_assert_eq!(eval::eval_at(&t, &scaled).unwrap(), eval::eval_at(&t, &ms).unwrap() * factor);
        Ok(())
    })
}

fn reducer_23() -> (Reducer, GeneratorTable) {
    let gens = minimal_generators(2, 3, &GenericMatrixSpec::traceless(2, 3), 3).unwrap();
    let rule = solve_reduction(2, ColumnOrder::Canonical).unwrap();
    (Reducer::new(rule, gens.clone()).unwrap(), gens)
}

/// `R` is homogeneous, agrees with the input under `pi`, and is fixed by
/// re-expansion in traces.
pub fn reduction_properties() -> Result<(), String> {
    let (reducer, gens) = reducer_23();
    let pi = PiEvaluator::new(GenericMatrixSpec::traceless(2, 3)).unwrap();
    let mdegs = gens.multidegrees();
    check(5, word(3, 8), |w| {
        let t = TracePolynomial::trace_of(&w).unwrap();
        let md = Word::new(w.clone()).unwrap().multidegree(3);
        let r = reducer.apply(&t).unwrap();
        prop_assert!(r.multidegrees(&mdegs, 3).iter().all(|m| *m == md));
        let back = gens.expand(&r).unwrap();
        prop_assert_eq!(pi.pi(&back).unwrap(), pi.pi(&t).unwrap());
        prop_assert_eq!(reducer.apply(&back).unwrap(), r);
        Ok(())
    })
}

pub fn rotation_invariance() -> Result<(), String> {
    check(6, (word(4, 10), any::<usize>()), |(w, k)| {
        let w = Word::new(w).unwrap();
        let c = canonicalize(&w);
        let rotated = w.rotate(k % w.len());
        prop_assert_eq!(canonicalize(&rotated), c.clone());
        for i in 0..w.len() {
            prop_assert!(c.letters() <= w.rotate(i).letters());
        }
        prop_assert_eq!(c.clone(), CyclicWord::from_letters(rotated.letters().to_vec()).unwrap());
        Ok(())
    })
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(k: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap().install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(_: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

/// Identity expansion and reduction give identical results on one and on
/// several threads.
pub fn thread_determinism() -> Result<(), String> {
    let (reducer, _) = reducer_23();
    check(7, (prop::collection::vec(word(3, 3), 3), word(3, 7)), |(tuple, w)| {
        let tuple: Vec<Word> = tuple.into_iter().map(|x| Word::new(x).unwrap()).collect();
        let t = TracePolynomial::trace_of(&w).unwrap();
        let one = with_threads(1, || (fundamental_identity(&tuple).unwrap(), reducer.apply(&t).unwrap()));
        let many = with_threads(4, || (fundamental_identity(&tuple).unwrap(), reducer.apply(&t).unwrap()));
        prop_assert_eq!(one, many);
        Ok(())
    })
}

#[allow(dead_code)]
pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("rref idempotence", rref_idempotent),
        ("rank-nullity", rank_nullity),
        ("pi homomorphism", pi_homomorphism),
        ("pi grading", pi_grading),
        ("R idempotence and multigrading", reduction_properties),
        ("canonical rotation invariance", rotation_invariance),
        ("determinism across thread counts", thread_determinism),
    ]
}
