//! Degree bounds for the defining relations, and consistency checks of the
//! embedded homogeneous system of parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{GeneratorDef, GeneratorTable};
use crate::rational;
use crate::reduction::RewriteTable;
use crate::tpoly::{TMonomial, TPoly, TermJson};
use crate::trace::{JsonTerm, TracePolynomial};
use crate::words::MultiDegree;

const C33_HSOP: &str = include_str!("../../data/c33_hsop.json");

/// `(d - 1) n^2 + 1`, the Krull dimension for `d >= 2`.
pub fn krull_dimension(n: usize, d: usize) -> usize {
    (d - 1) * n * n + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInput {
    /// Generator degrees; sorted descending before use.
    pub degrees: Vec<u32>,
    pub dim: usize,
    /// Degree of the Hilbert series (numerator minus denominator degree).
    pub a: i64,
}

/// Sum of the `dim + 1` largest generator degrees plus `a`.
pub fn derksen_bound(b: &BoundInput) -> Result<i64> {
    if b.degrees.len() < b.dim + 1 {
        return Err(Error::TooFewDegrees { need: b.dim + 1, got: b.degrees.len() });
    }
    let mut d = b.degrees.clone();
    d.sort_unstable_by(|x, y| y.cmp(x));
    Ok(d[..=b.dim].iter().map(|&x| x as i64).sum::<i64>() + b.a)
}

/// The bound with every generator degree replaced by `n^2` and `a` by
/// `-dim`: `((d-1)n^2 + 2) n^2 - ((d-1)n^2 + 1)`.
pub fn generic_bound(n: usize, d: usize) -> i64 {
    let dim = krull_dimension(n, d);
    let b = BoundInput { degrees: vec![(n * n) as u32; dim + 1], dim, a: -(dim as i64) };
    derksen_bound(&b).expect("enough degrees")
}

/// The bound after dividing out a homogeneous system of parameters: the
/// quotient has dimension 0 and `a` grows by the sum of the parameter
/// degrees.
pub fn hsop_bound(degrees: &[u32], a: i64, hsop_degrees: &[u32]) -> Result<i64> {
    let shift: i64 = hsop_degrees.iter().map(|&x| x as i64).sum();
    derksen_bound(&BoundInput { degrees: degrees.to_vec(), dim: 0, a: a + shift })
}

#[derive(Debug, Clone, PartialEq)]
pub enum HsopElement {
    Central(u8),
    Trace(TracePolynomial),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsopTable {
    pub n: usize,
    pub d: usize,
    pub labels: Vec<String>,
    pub elements: Vec<HsopElement>,
    /// `(eliminated generator, sum of generators it is replaced by)`.
    pub elimination: Vec<(String, Vec<String>)>,
}

#[derive(Deserialize)]
struct HsopJson {
    n: usize,
    d: usize,
    elements: Vec<ElementJson>,
    #[serde(default)]
    elimination: Vec<EliminationJson>,
}

#[derive(Deserialize)]
struct ElementJson {
    label: String,
    #[serde(default)]
    central: Option<u8>,
    #[serde(default)]
    trace: Option<Vec<JsonTerm>>,
}

#[derive(Deserialize)]
struct EliminationJson {
    eliminate: String,
    to: Vec<String>,
}

impl HsopTable {
    pub fn c33() -> HsopTable {
        HsopTable::from_json_str(C33_HSOP).expect("embedded hsop table parses")
    }

    pub fn from_json_str(text: &str) -> Result<HsopTable> {
        let raw: HsopJson = serde_json::from_str(text)?;
        let mut labels = Vec::new();
        let mut elements = Vec::new();
        for e in raw.elements {
            let el = match (e.central, e.trace) {
                (Some(k), None) => HsopElement::Central(k),
                (None, Some(t)) => HsopElement::Trace(TracePolynomial::from_json_terms(&t)?),
                _ => return Err(Error::Parse(format!("{}: exactly one of central/trace expected", e.label))),
            };
            labels.push(e.label);
            elements.push(el);
        }
        let elimination = raw.elimination.into_iter().map(|e| (e.eliminate, e.to)).collect();
        Ok(HsopTable { n: raw.n, d: raw.d, labels, elements, elimination })
    }

    /// Total degree of every element.
    pub fn degrees(&self) -> Vec<u32> {
        self.elements
            .iter()
            .map(|e| match e {
                HsopElement::Central(_) => 1,
                HsopElement::Trace(p) => p.terms().map(|(m, _)| m.degree() as u32).max().unwrap_or(0),
            })
            .collect()
    }
}

/// Expresses a trace polynomial whose factors have degree at most `N(n)` in
/// the generators.
pub fn rewrite_short(rt: &RewriteTable, p: &TracePolynomial) -> Result<TPoly> {
    let mut out = TPoly::zero();
    for (m, c) in p.terms() {
        let mut t = TPoly::monomial(Vec::new(), c.clone());
        for f in m.factors() {
            t = t.mul(&rt.lookup(f)?);
        }
        out.add_scaled(&t, &rational::int(1));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HsopElementReport {
    pub label: String,
    pub degree: u32,
    /// The element in the generators.
    pub expression: Vec<TermJson>,
    /// Whether the elimination sends it to zero.
    pub eliminated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub trace: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HsopReport {
    pub count: usize,
    pub expected_count: usize,
    pub count_ok: bool,
    /// Eliminated variables are distinct generators, no target is itself
    /// eliminated, and every substitution preserves the total degree.
    pub elimination_well_defined: bool,
    pub elimination_problems: Vec<String>,
    pub elements: Vec<HsopElementReport>,
    pub identities: Vec<IdentityReport>,
    pub passed: bool,
}

/// The three degree-4 identities that let `t_18, t_19, t_20` replace the
/// traces of `x^2 y^2`, `x^2 z^2`, `y^2 z^2` in the parameter system.
pub fn degree_four_identities() -> Vec<(Vec<u8>, Vec<(&'static str, Vec<&'static str>)>)> {
    vec![
        (vec![1, 1, 2, 2], vec![("1/6", vec!["t_1", "t_2"]), ("1/3", vec!["t_4", "t_4"]), ("1/3", vec!["t_18"])]),
        (vec![1, 1, 3, 3], vec![("1/6", vec!["t_1", "t_3"]), ("1/3", vec!["t_5", "t_5"]), ("1/3", vec!["t_19"])]),
        (vec![2, 2, 3, 3], vec![("1/6", vec!["t_2", "t_3"]), ("1/3", vec!["t_6", "t_6"]), ("1/3", vec!["t_20"])]),
    ]
}

fn poly_from_labels(terms: &[(&str, Vec<&str>)], gens: &GeneratorTable) -> Result<TPoly> {
    let mut p = TPoly::zero();
    for (c, syms) in terms {
        let mut m: TMonomial = Vec::new();
        for s in syms {
            m.push(gens.index_of(s).ok_or_else(|| Error::Parse(format!("unknown generator {s}")))?);
        }
        m.sort_unstable();
        p.add_term(m, rational::parse(c)?);
    }
    Ok(p)
}

pub fn hsop_consistency(h: &HsopTable, gens: &GeneratorTable) -> Result<HsopReport> {
    let labels = gens.labels();
    let rt = RewriteTable::new(gens.clone())?;
    let expected_count = krull_dimension(h.n, h.d);

    // the substitution as images of generator symbols
    let mut problems = Vec::new();
    let mut images: Vec<TPoly> = (0..gens.len() as u16).map(TPoly::symbol).collect();
    let mut eliminated = BTreeSet::new();
    for (v, to) in &h.elimination {
        let Some(i) = gens.index_of(v) else {
            problems.push(format!("{v} is not a generator"));
            continue;
        };
        if !eliminated.insert(i) {
            problems.push(format!("{v} is eliminated twice"));
        }
        let mut img = TPoly::zero();
        for t in to {
            match gens.index_of(t) {
                Some(j) => {
                    if gens.entries[j as usize].multidegree.total() != gens.entries[i as usize].multidegree.total() {
                        problems.push(format!("{v} -> {t} changes the degree"));
                    }
                    img.add_term(vec![j], rational::int(1));
                }
                None => problems.push(format!("{t} is not a generator")),
            }
        }
        images[i as usize] = img;
    }
    for (v, to) in &h.elimination {
        for t in to {
            if gens.index_of(t).is_some_and(|j| eliminated.contains(&j)) {
                problems.push(format!("{v} -> {t}, but {t} is eliminated too"));
            }
        }
    }

    let degrees = h.degrees();
    let mut elements = Vec::new();
    for ((label, e), &deg) in h.labels.iter().zip(&h.elements).zip(&degrees) {
        let expr = match e {
            HsopElement::Central(k) => {
                let i = gens
                    .entries
                    .iter()
                    .position(|g| g.definition == GeneratorDef::Central(*k))
                    .ok_or_else(|| Error::Parse(format!("no central generator for letter {k}")))?;
                TPoly::symbol(i as u16)
            }
            HsopElement::Trace(p) => rewrite_short(&rt, p)?,
        };
        let reduced = expr.compose(&images);
        elements.push(HsopElementReport { label: label.clone(), degree: deg, expression: expr.to_json(&labels), eliminated: reduced.is_zero() });
    }

    let mut identities = Vec::new();
    for (w, terms) in degree_four_identities() {
        let expected = poly_from_labels(&terms, gens)?;
        let computed = rewrite_short(&rt, &TracePolynomial::trace_of(&w)?)?;
        identities.push(IdentityReport {
            trace: TracePolynomial::trace_of(&w)?.to_bracket(),
            expected: expected.display(&labels),
            computed: computed.display(&labels),
            ok: expected == computed,
        });
    }

    let count_ok = h.elements.len() == expected_count;
    let well_defined = problems.is_empty();
    let passed = count_ok && well_defined && elements.iter().all(|e| e.eliminated) && identities.iter().all(|i| i.ok);
    Ok(HsopReport {
        count: h.elements.len(),
        expected_count,
        count_ok,
        elimination_well_defined: well_defined,
        elimination_problems: problems,
        elements,
        identities,
        passed,
    })
}

/// Multidegree of a generator, by label.
pub fn generator_multidegree(gens: &GeneratorTable, label: &str) -> Option<MultiDegree> {
    gens.index_of(label).map(|i| gens.entries[i as usize].multidegree.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(generic_bound(3, 3), 161);
        let mut degrees = Vec::new();
        for (deg, k) in [(6, 10), (5, 9), (4, 9), (3, 11), (2, 6), (1, 3)] {
            degrees.extend(std::iter::repeat(deg).take(k));
        }
        assert_eq!(derksen_bound(&BoundInput { degrees: degrees.clone(), dim: 19, a: -27 }).unwrap(), 82);
        let h = HsopTable::c33();
        assert_eq!(h.degrees().iter().sum::<u32>(), 48);
        assert_eq!(hsop_bound(&degrees, -27, &h.degrees()).unwrap(), 27);
        assert!(matches!(
            derksen_bound(&BoundInput { degrees: vec![1, 2], dim: 19, a: 0 }),
            Err(Error::TooFewDegrees { need: 20, got: 2 })
        ));
    }

    #[test]
    fn c33_hsop() {
        let r = hsop_consistency(&HsopTable::c33(), &GeneratorTable::c33()).unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.count, 19);
        assert_eq!(r.identities[2].computed, "1/6*t_2*t_3 + 1/3*t_6^2 + 1/3*t_20");
    }
}
