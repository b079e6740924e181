//! Generator tables: named trace polynomials `t_i` that generate a trace
//! algebra, plus the evaluation of monomials in them.
//!
//! A table over traceless letters also carries one central generator per
//! letter (`tr(X_k)`). Central generators are algebraically independent of the
//! rest, so relation and Hilbert computations work with the non-central
//! ("core") generators only and account for the central ones by convolution.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::One;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{self, DenseMatrix, GenericMatrixSpec, PiEvaluator};
use crate::poly::IntPoly;
use crate::rational::Rational;
use crate::tpoly::{self, TMonomial, TPoly};
use crate::trace::{graded_exponents, JsonTerm, TracePolynomial};
use crate::words::MultiDegree;

const C33_GENERATORS: &str = include_str!("../data/c33_generators.json");

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorDef {
    /// `tr(X_k)` of the full (not traceless) matrix.
    Central(u8),
    Trace(TracePolynomial),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub label: String,
    /// Weight-group tag, kept as an opaque label.
    pub group: Option<String>,
    pub multidegree: MultiDegree,
    pub definition: GeneratorDef,
}

impl Generator {
    pub fn degree(&self) -> u32 {
        self.multidegree.total()
    }

    pub fn is_central(&self) -> bool {
        matches!(self.definition, GeneratorDef::Central(_))
    }

    /// The definition in bracket notation; `tr(X_k)` for central ones.
    pub fn describe(&self) -> String {
        match &self.definition {
            GeneratorDef::Central(k) => format!("tr(X_{k})"),
            GeneratorDef::Trace(p) => p.to_bracket(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorTable {
    pub n: usize,
    pub d: usize,
    /// Whether trace definitions are in traceless letters.
    pub traceless: bool,
    pub entries: Vec<Generator>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    traceless: Option<bool>,
    #[serde(default, skip_serializing)]
    #[allow(dead_code)]
    letters: Option<String>,
    generators: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    multidegree: Vec<u32>,
    definition: DefJson,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DefJson {
    Central(u8),
    Trace(Vec<JsonTerm>),
}

impl GeneratorTable {
    /// The 48 generators of the algebra of three generic 3x3 matrices.
    pub fn c33() -> GeneratorTable {
        GeneratorTable::from_json_str(C33_GENERATORS).expect("embedded generator table parses")
    }

    pub fn from_json_str(text: &str) -> Result<GeneratorTable> {
        let raw: TableJson = serde_json::from_str(text)?;
        let mut entries = Vec::with_capacity(raw.generators.len());
        for e in raw.generators {
            if e.multidegree.len() != raw.d {
                return Err(Error::Parse(format!("{}: multidegree has wrong length", e.label)));
            }
            let definition = match e.definition {
                DefJson::Central(k) => {
                    if k == 0 || k as usize > raw.d {
                        return Err(Error::LetterOutOfRange { letter: k, d: raw.d });
                    }
                    GeneratorDef::Central(k)
                }
                DefJson::Trace(terms) => GeneratorDef::Trace(TracePolynomial::from_json_terms(&terms)?),
            };
            entries.push(Generator {
                label: e.label,
                group: e.group,
                multidegree: MultiDegree(e.multidegree),
                definition,
            });
        }
        let has_central = entries.iter().any(Generator::is_central);
        let table = GeneratorTable { n: raw.n, d: raw.d, traceless: raw.traceless.unwrap_or(has_central), entries };
        table.check()?;
        Ok(table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = TableJson {
            n: self.n,
            d: self.d,
            traceless: Some(self.traceless),
            letters: None,
            generators: self
                .entries
                .iter()
                .map(|g| EntryJson {
                    label: g.label.clone(),
                    group: g.group.clone(),
                    multidegree: g.multidegree.0.clone(),
                    definition: match &g.definition {
                        GeneratorDef::Central(k) => DefJson::Central(*k),
                        GeneratorDef::Trace(p) => DefJson::Trace(p.to_json_terms()),
                    },
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("table serializes")
    }

    fn check(&self) -> Result<()> {
        if self.entries.len() > u16::MAX as usize {
            return Err(Error::Unsupported("too many generators".into()));
        }
        for g in &self.entries {
            if let GeneratorDef::Trace(p) = &g.definition {
                if p.max_letter() as usize > self.d {
                    return Err(Error::LetterOutOfRange { letter: p.max_letter(), d: self.d });
                }
                if p.multidegree(self.d).as_ref() != Some(&g.multidegree) {
                    return Err(Error::Parse(format!("{}: definition does not have the declared multidegree", g.label)));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix shape the trace definitions live on.
    pub fn spec(&self) -> GenericMatrixSpec {
        if self.traceless {
            GenericMatrixSpec::traceless(self.n, self.d)
        } else {
            GenericMatrixSpec::plain(self.n, self.d)
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|g| g.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<u16> {
        self.entries.iter().position(|g| g.label == label).map(|i| i as u16)
    }

    pub fn multidegrees(&self) -> Vec<MultiDegree> {
        self.entries.iter().map(|g| g.multidegree.clone()).collect()
    }

    /// Indices of the non-central generators.
    pub fn core_indices(&self) -> Vec<u16> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].is_central()).map(|i| i as u16).collect()
    }

    /// Number of generators per total degree.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for g in &self.entries {
            *out.entry(g.degree()).or_insert(0) += 1;
        }
        out
    }

    /// Degrees of all generators, descending.
    pub fn degrees_desc(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.entries.iter().map(Generator::degree).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Monomials in the core generators of multidegree `md`, in the order of
    /// `graded_exponents`.
    pub fn core_monomials(&self, md: &MultiDegree) -> Vec<TMonomial> {
        let core = self.core_indices();
        let mdegs: Vec<MultiDegree> = core.iter().map(|&i| self.entries[i as usize].multidegree.clone()).collect();
        graded_exponents(&mdegs, md).iter().map(|e| tpoly::from_exponents(&core, e)).collect()
    }

    pub fn monomial_multidegree(&self, m: &[u16]) -> MultiDegree {
        m.iter().fold(MultiDegree::zero(self.d), |acc, &i| acc.add(&self.entries[i as usize].multidegree))
    }

    /// The trace polynomial a polynomial in the generators stands for; central
    /// generators are not expressible this way.
    pub fn expand(&self, p: &TPoly) -> Result<TracePolynomial> {
        let mut out = TracePolynomial::zero();
        for (m, c) in p.terms() {
            let mut t = TracePolynomial::one().scale(c);
            for &i in m {
                match &self.entries[i as usize].definition {
                    GeneratorDef::Trace(q) => t = t.multiply(q),
                    GeneratorDef::Central(_) => {
                        return Err(Error::Unsupported("central generators have no trace expansion here".into()))
                    }
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Values of all generators at a matrix tuple. Central generators take the
    /// trace of their matrix.
    pub fn values_at(&self, matrices: &[DenseMatrix]) -> Result<Vec<Rational>> {
        self.entries
            .iter()
            .map(|g| match &g.definition {
                GeneratorDef::Central(k) => Ok(eval::trace(&matrices[*k as usize - 1])),
                GeneratorDef::Trace(p) => eval::eval_at(p, matrices),
            })
            .collect()
    }
}

/// Symbolic images of monomials in the core generators.
pub struct GeneratorImages {
    pi: PiEvaluator,
    images: Vec<Option<Arc<IntPoly>>>,
    prefixes: Mutex<FxHashMap<TMonomial, Arc<IntPoly>>>,
}

/// Prefixes up to this degree are cached.
const PREFIX_CACHE_DEGREE: u32 = 6;

impl GeneratorImages {
    /// Requires integer coefficients in every trace definition.
    pub fn new(table: &GeneratorTable, spec: GenericMatrixSpec) -> Result<Self> {
        let pi = PiEvaluator::new(spec)?;
        let mut out = GeneratorImages { pi, images: Vec::with_capacity(table.len()), prefixes: Mutex::new(FxHashMap::default()) };
        for g in &table.entries {
            out.push(g)?;
        }
        Ok(out)
    }

    /// Appends the image of one more generator (indices of earlier ones are
    /// unchanged, so cached prefixes stay valid).
    pub fn push(&mut self, g: &Generator) -> Result<()> {
        self.images.push(match &g.definition {
            GeneratorDef::Central(_) => None,
            GeneratorDef::Trace(p) => {
                let (l, img) = self.pi.pi_scaled(p)?;
                if !l.is_one() {
                    return Err(Error::Unsupported(format!("{} has non-integer coefficients", g.label)));
                }
                Some(Arc::new(img))
            }
        });
        Ok(())
    }

    pub fn evaluator(&self) -> &PiEvaluator {
        &self.pi
    }

    pub fn generator_image(&self, i: u16) -> Result<Arc<IntPoly>> {
        self.images[i as usize]
            .clone()
            .ok_or_else(|| Error::Unsupported("central generators have no image in the traceless ring".into()))
    }

    /// Image of a sorted monomial in core generators.
    pub fn monomial_image(&self, m: &[u16], degrees: &[u32]) -> Result<IntPoly> {
        if m.is_empty() {
            return Ok(IntPoly::one());
        }
        // longest cached prefix
        let mut k = m.len();
        let mut start: Option<Arc<IntPoly>> = None;
        {
            let cache = self.prefixes.lock().unwrap();
            while k > 1 {
                if let Some(p) = cache.get(&m[..k]) {
                    start = Some(p.clone());
                    break;
                }
                k -= 1;
            }
        }
        let mut acc: IntPoly = match start {
            Some(p) => (*p).clone(),
            None => {
                k = 1;
                (*self.generator_image(m[0])?).clone()
            }
        };
        let mut deg: u32 = m[..k].iter().map(|&i| degrees[i as usize]).sum();
        for j in k..m.len() {
            if acc.is_zero() {
                return Ok(acc);
            }
            let g = self.generator_image(m[j])?;
            acc = acc.mul(&g);
            deg += degrees[m[j] as usize];
            if deg <= PREFIX_CACHE_DEGREE && j + 1 < m.len() {
                self.prefixes.lock().unwrap().insert(m[..=j].to_vec(), Arc::new(acc.clone()));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::CyclicWord;

    #[test]
    fn embedded_table_shape() {
        let t = GeneratorTable::c33();
        assert_eq!(t.len(), 48);
        assert!(t.traceless);
        let m: Vec<(u32, usize)> = t.multiplicities().into_iter().collect();
        assert_eq!(m, vec![(1, 3), (2, 6), (3, 11), (4, 9), (5, 9), (6, 10)]);
        assert_eq!(t.core_indices().len(), 45);
        assert_eq!(t.index_of("t_18"), Some(20));
        let back = GeneratorTable::from_json_str(&t.to_json().to_string()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn monomial_counts() {
        let t = GeneratorTable::c33();
        assert_eq!(t.core_monomials(&MultiDegree(vec![3, 2, 2])).len(), 34);
        assert_eq!(t.core_monomials(&MultiDegree(vec![3, 3, 3])).len(), 145);
    }

    #[test]
    fn images_multiply() {
        let t = GeneratorTable::c33();
        let imgs = GeneratorImages::new(&t, t.spec()).unwrap();
        let degs: Vec<u32> = t.entries.iter().map(Generator::degree).collect();
        let a = t.index_of("t_1").unwrap();
        let b = t.index_of("t_4").unwrap();
        let p = imgs.monomial_image(&[a, b, b], &degs).unwrap();
        let x2 = imgs.evaluator().trace_image(&CyclicWord::from_letters(vec![1, 1]).unwrap()).unwrap();
        let xy = imgs.evaluator().trace_image(&CyclicWord::from_letters(vec![1, 2]).unwrap()).unwrap();
        assert_eq!(p, x2.mul(&xy).mul(&xy));
    }
}
