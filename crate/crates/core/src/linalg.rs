//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Pivoting is fixed everywhere: leftmost column, topmost row. Every derived
//! object (echelon forms, kernel bases, particular solutions) is therefore a
//! function of the input alone, independent of how the elimination steps are
//! scheduled across threads.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::rational::{denominator_lcm, Rational};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Ok(RationalMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds from sparse rows; entries are sorted and zeros dropped.
    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for mut r in rows {
            r.retain(|(_, v)| !v.is_zero());
            r.sort_by_key(|(j, _)| *j);
            if r.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Dimension("duplicate column in sparse row".into()));
            }
            if r.last().is_some_and(|(j, _)| *j >= cols) {
                return Err(Error::Dimension("column index out of range".into()));
            }
            data.push(r);
        }
        Ok(RationalMatrix { rows: data.len(), cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (c, v)),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![Rational::zero(); self.cols];
                for (j, v) in r {
                    d[*j] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector length {} != {} columns", v.len(), self.cols)));
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect())
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                data[*j].push((i, v.clone()));
            }
        }
        RationalMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> RationalMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut out: SparseVec =
                    r.iter().filter(|(j, _)| pos[*j] != usize::MAX).map(|(j, v)| (pos[*j], v.clone())).collect();
                out.sort_by_key(|(j, _)| *j);
                out
            })
            .collect();
        RationalMatrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> RationalMatrix {
        RationalMatrix { rows: rows.len(), cols: self.cols, data: rows.iter().map(|&r| self.data[r].clone()).collect() }
    }
}

/// `dst -= f * src` on sparse vectors.
fn axpy_sub(dst: &SparseVec, f: &Rational, src: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < dst.len() || b < src.len() {
        let ja = dst.get(a).map_or(usize::MAX, |e| e.0);
        let jb = src.get(b).map_or(usize::MAX, |e| e.0);
        if ja < jb {
            out.push(dst[a].clone());
            a += 1;
        } else if jb < ja {
            out.push((jb, -(f * &src[b].1)));
            b += 1;
        } else {
            let v = &dst[a].1 - f * &src[b].1;
            if !v.is_zero() {
                out.push((ja, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

fn scale(v: &mut SparseVec, f: &Rational) {
    for (_, x) in v.iter_mut() {
        *x = &*x * f;
    }
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut rows = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == rows.len() {
            break;
        }
        // rows r.. have no entries left of `col`
        let Some(p) = (r..rows.len()).find(|&i| rows[i].first().is_some_and(|(j, _)| *j == col)) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][0].1.recip();
        scale(&mut rows[r], &inv);
        let pivot_row = std::mem::take(&mut rows[r]);
        par::for_each_mut(&mut rows, |row| {
            if let Ok(k) = row.binary_search_by_key(&col, |(j, _)| *j) {
                let f = row[k].1.clone();
                *row = axpy_sub(row, &f, &pivot_row);
            }
        });
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    let out = RationalMatrix { rows: m.rows, cols: m.cols, data: rows };
    (out, pivots)
}

pub fn rank(m: &RationalMatrix) -> usize {
    row_space(m.cols, m.data.iter().cloned()).rank()
}

/// Right nullspace basis: one vector per free column (ascending), with that
/// free variable set to 1 and the other free variables 0.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    row_space(m.cols, m.data.iter().cloned()).kernel_basis()
}

/// One solution of `m x = b`: the echelon particular solution with every free
/// variable 0.
///
/// Columns are streamed left to right into a column echelon basis and the
/// scan stops as soon as `b` lies in the span of the columns seen so far. The
/// greedy column basis is exactly the set of rref pivot columns, and a
/// right-hand side in the span of an initial segment of it has zero
/// coordinates on later pivots, so the early stop does not change the result.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if b.len() != m.rows {
        return Err(Error::Dimension(format!("rhs length {} != {} rows", b.len(), m.rows)));
    }
    let columns = m.transpose();
    let target: SparseVec =
        b.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
    let mut basis = ColumnBasis::new(m.rows);
    if let Some(x) = basis.express(&target) {
        return Ok(x.to_dense(m.cols));
    }
    for c in 0..m.cols {
        if basis.push(c, &columns.data[c]) {
            if let Some(x) = basis.express(&target) {
                return Ok(x.to_dense(m.cols));
            }
        }
    }
    Err(Error::NoSolution)
}

/// Echelon basis of a growing set of columns, with each basis vector's
/// expression in terms of the original columns.
struct ColumnBasis {
    rows: Vec<(usize, SparseVec, SparseVec)>, // (pivot, reduced vector, combination of columns)
    by_pivot: Vec<Option<usize>>,
}

struct Combination(SparseVec);

impl Combination {
    fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (j, v) in &self.0 {
            x[*j] = v.clone();
        }
        x
    }
}

impl ColumnBasis {
    fn new(dim: usize) -> Self {
        ColumnBasis { rows: Vec::new(), by_pivot: vec![None; dim] }
    }

    /// Semi-reduction in pivot order; returns the residual and the
    /// coefficients of the basis vectors that were subtracted.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Rational)>) {
        let mut v = v.clone();
        let mut used = Vec::new();
        loop {
            let hit = v.iter().find_map(|(j, x)| self.by_pivot[*j].map(|k| (k, x.clone())));
            let Some((k, x)) = hit else { break };
            let (_, row, _) = &self.rows[k];
            v = axpy_sub(&v, &x, row);
            used.push((k, x));
        }
        (v, used)
    }

    fn push(&mut self, col: usize, v: &SparseVec) -> bool {
        let (res, used) = self.reduce(v);
        let Some((p, lead)) = res.first().cloned() else { return false };
        let inv = lead.recip();
        let mut res = res;
        scale(&mut res, &inv);
        let mut comb: SparseVec = vec![(col, Rational::one())];
        for (k, x) in used {
            comb = axpy_sub(&comb, &x, &self.rows[k].2);
        }
        scale(&mut comb, &inv);
        self.by_pivot[p] = Some(self.rows.len());
        self.rows.push((p, res, comb));
        true
    }

    fn express(&self, target: &SparseVec) -> Option<Combination> {
        let (res, used) = self.reduce(target);
        if !res.is_empty() {
            return None;
        }
        let mut x: SparseVec = Vec::new();
        for (k, c) in used {
            x = axpy_sub(&x, &-c, &self.rows[k].2);
        }
        Some(Combination(x))
    }
}

/// Reduced row echelon basis of a row space, built one row at a time.
///
/// Rows are kept fully reduced: every stored row is zero in every other
/// row's pivot column. The stored rows sorted by pivot are exactly the
/// nonzero rows of the rref of any matrix with this row space.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<SparseVec>,
    row_of_pivot: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new(), row_of_pivot: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_pivot[col].is_some()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.row_of_pivot[c].is_some()).collect()
    }

    /// Residual of `v` modulo the row space; zero exactly when `v` lies in it.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut acc: Vec<Rational> = Vec::new();
        let mut touched: Vec<usize> = Vec::new();
        let mut any_pivot = false;
        for (j, _) in v {
            if self.row_of_pivot[*j].is_some() {
                any_pivot = true;
                break;
            }
        }
        if !any_pivot {
            return v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        }
        acc.resize(self.dim, Rational::zero());
        let mut mark = vec![false; self.dim];
        for (j, x) in v {
            acc[*j] += x;
            if !mark[*j] {
                mark[*j] = true;
                touched.push(*j);
            }
        }
        for (j, x) in v {
            if let Some(k) = self.row_of_pivot[*j] {
                for (c, y) in &self.rows[k] {
                    acc[*c] -= x * y;
                    if !mark[*c] {
                        mark[*c] = true;
                        touched.push(*c);
                    }
                }
            }
        }
        touched.sort_unstable();
        let mut out = Vec::new();
        for c in touched {
            if !acc[c].is_zero() {
                out.push((c, std::mem::take(&mut acc[c])));
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns the new pivot column if the rank grew.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> Option<usize> {
        let mut r = self.reduce(v);
        let (p, lead) = r.first().cloned()?;
        let inv = lead.recip();
        scale(&mut r, &inv);
        par::for_each_mut(&mut self.rows, |row| {
            if let Ok(k) = row.binary_search_by_key(&p, |(j, _)| *j) {
                let f = row[k].1.clone();
                *row = axpy_sub(row, &f, &r);
            }
        });
        self.row_of_pivot[p] = Some(self.rows.len());
        self.rows.push(r);
        Some(p)
    }

    /// Stored rows ordered by pivot column.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        self.pivots().into_iter().map(|p| self.rows[self.row_of_pivot[p].unwrap()].clone()).collect()
    }

    pub fn row_for_pivot(&self, p: usize) -> Option<&SparseVec> {
        self.row_of_pivot[p].map(|k| &self.rows[k])
    }

    /// Right nullspace of the row space, in the canonical free-variable form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut basis = Vec::new();
        for f in (0..self.dim).filter(|&c| self.row_of_pivot[c].is_none()) {
            let mut v = vec![Rational::zero(); self.dim];
            v[f] = Rational::one();
            for row in &self.rows {
                let p = row[0].0;
                if let Ok(k) = row.binary_search_by_key(&f, |(j, _)| *j) {
                    v[p] = -row[k].1.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel vectors scaled to integers, one per free column (ascending).
    fn integer_kernel(&self) -> Vec<(usize, Vec<(usize, BigInt)>)> {
        let free: Vec<usize> = (0..self.dim).filter(|&c| self.row_of_pivot[c].is_none()).collect();
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.dim];
        for row in &self.rows {
            let p = row[0].0;
            for (j, x) in &row[1..] {
                cols[*j].push((p, x.clone()));
            }
        }
        free.into_iter()
            .map(|f| {
                let entries = &cols[f];
                let l = denominator_lcm(entries.iter().map(|(_, x)| x));
                let mut v: Vec<(usize, BigInt)> = entries
                    .iter()
                    .map(|(p, x)| (*p, -(x * Rational::from_integer(l.clone())).to_integer()))
                    .collect();
                v.push((f, l));
                v.sort_by_key(|(j, _)| *j);
                (f, v)
            })
            .collect()
    }
}

/// Row echelon basis of the span of `rows` (every row is processed).
pub fn row_space(dim: usize, rows: impl IntoIterator<Item = SparseVec>) -> EchelonBasis {
    let mut basis = EchelonBasis::new(dim);
    for r in rows {
        if basis.rank() == dim {
            break;
        }
        basis.insert(&r);
    }
    basis
}

/// Sparse integer row, used for coefficient matrices of polynomial images.
pub type IntRow = Vec<(usize, i128)>;

fn int_row_to_rational(r: &IntRow) -> SparseVec {
    r.iter().map(|(j, v)| (*j, Rational::from_integer((*v).into()))).collect()
}

/// Deterministic scramble of row indices so that row sampling does not follow
/// the (structured) monomial order.
fn scramble(i: usize) -> u64 {
    let mut z = (i as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Exact row space of a tall integer matrix.
///
/// Rows are inserted in a fixed pseudo-random order until `patience`
/// consecutive rows add nothing; every remaining row is then checked against
/// the integer-scaled kernel of the current basis and inserted if it is not
/// orthogonal to it. The result is the full row space (hence the exact rank
/// and the canonical kernel), not an estimate.
pub fn row_space_of_int_rows(dim: usize, rows: &[IntRow], patience: usize) -> EchelonBasis {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (scramble(i), i));
    let mut basis = EchelonBasis::new(dim);
    let mut idle = 0usize;
    let mut pos = 0usize;
    while pos < order.len() && idle < patience {
        if basis.rank() == dim {
            return basis;
        }
        if basis.insert(&int_row_to_rational(&rows[order[pos]])).is_some() {
            idle = 0;
        } else {
            idle += 1;
        }
        pos += 1;
    }
    if pos == order.len() || basis.rank() == dim {
        return basis;
    }
    let mut kernel = IntKernel::new(&basis);
    for &i in &order[pos..] {
        if !kernel.annihilates(&rows[i]) {
            basis.insert(&int_row_to_rational(&rows[i]));
            if basis.rank() == dim {
                return basis;
            }
            kernel = IntKernel::new(&basis);
        }
    }
    basis
}

/// Kernel vectors in `i64` when they fit, with a big-integer fallback.
struct IntKernel {
    small: Option<Vec<Vec<(usize, i64)>>>,
    big: Vec<Vec<(usize, BigInt)>>,
}

impl IntKernel {
    fn new(basis: &EchelonBasis) -> Self {
        let big: Vec<Vec<(usize, BigInt)>> = basis.integer_kernel().into_iter().map(|(_, v)| v).collect();
        let small = big
            .iter()
            .map(|v| v.iter().map(|(j, x)| x.to_i64().map(|y| (*j, y))).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        IntKernel { small, big }
    }

    fn annihilates(&self, row: &IntRow) -> bool {
        if let Some(small) = &self.small {
            if let Some(ok) = annihilates_small(small, row) {
                return ok;
            }
        }
        let dense_row: rustc_hash::FxHashMap<usize, BigInt> = row.iter().map(|(j, v)| (*j, BigInt::from(*v))).collect();
        self.big.iter().all(|k| {
            let s: BigInt = k.iter().filter_map(|(j, x)| dense_row.get(j).map(|r| r * x)).sum();
            s.is_zero()
        })
    }
}

/// `None` on i128 overflow.
fn annihilates_small(kernel: &[Vec<(usize, i64)>], row: &IntRow) -> Option<bool> {
    for k in kernel {
        // both sorted by column
        let (mut a, mut b) = (0, 0);
        let mut s: i128 = 0;
        while a < k.len() && b < row.len() {
            match k[a].0.cmp(&row[b].0) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    let t = (k[a].1 as i128).checked_mul(row[b].1)?;
                    s = s.checked_add(t)?;
                    a += 1;
                    b += 1;
                }
            }
        }
        if s != 0 {
            return Some(false);
        }
    }
    Some(true)
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading entry.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| if x.is_negative() { -BigInt::one() } else { BigInt::one() });
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_small_system() {
        let a = m(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let (r, piv) = rref(&a);
        assert_eq!(piv, vec![0, 1, 2]);
        assert_eq!(r, RationalMatrix::identity(3));
        assert_eq!(rank(&a), 3);
    }

    #[test]
    fn rref_zero_and_proportional() {
        let z = RationalMatrix::zeros(2, 3);
        let (r, piv) = rref(&z);
        assert!(piv.is_empty());
        assert_eq!(r, z);
        assert_eq!(rank(&z), 0);

        let a = m(&[&[2, 4], &[1, 2]]);
        let (r, piv) = rref(&a);
        assert_eq!(piv, vec![0]);
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&m(&[&[1, 1]])), vec![vec![int(-1), int(1)]]);
        assert!(kernel_basis(&RationalMatrix::identity(3)).is_empty());
        let k = kernel_basis(&RationalMatrix::zeros(1, 2));
        assert_eq!(k, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }

    #[test]
    fn solve_examples() {
        let a = m(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let x = solve(&a, &[int(1), int(0), int(0)]).unwrap();
        assert_eq!(x, vec![frac(1, 2), frac(1, 2), frac(-1, 2)]);

        let b = vec![int(3), frac(-2, 7), int(5)];
        assert_eq!(solve(&RationalMatrix::identity(3), &b).unwrap(), b);

        let c = m(&[&[1, 0], &[1, 0]]);
        assert_eq!(solve(&c, &[int(1), int(2)]), Err(Error::NoSolution));
        assert!(matches!(solve(&c, &[int(1)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn solve_matches_rref_particular_solution() {
        // free variables zero, pivots leftmost
        let a = m(&[&[1, 2, 1, 0], &[0, 0, 1, 1], &[1, 2, 2, 1]]);
        let b = [int(3), int(1), int(4)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![int(2), int(0), int(1), int(0)]);
    }

    #[test]
    fn echelon_basis_matches_rref() {
        let a = m(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2], &[2, 0, -2, 1]]);
        let (r, piv) = rref(&a);
        let b = row_space(4, a.data.clone());
        assert_eq!(b.pivots(), piv);
        let rows: Vec<SparseVec> = r.data.iter().filter(|x| !x.is_empty()).cloned().collect();
        assert_eq!(b.rref_rows(), rows);
    }

    #[test]
    fn tall_integer_rows_exact() {
        // 200 rows spanning a rank-2 space in 4 columns, with one late outlier
        let mut rows: Vec<IntRow> = (0..200).map(|i| vec![(0, i as i128 + 1), (1, 2 * (i as i128 + 1)), (3, 1)]).collect();
        rows.push(vec![(2, 5)]);
        let b = row_space_of_int_rows(4, &rows, 3);
        assert_eq!(b.rank(), 3);
        let all: Vec<SparseVec> = rows.iter().map(int_row_to_rational).collect();
        let full = row_space(4, all);
        assert_eq!(b.rref_rows(), full.rref_rows());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[frac(-1, 2), frac(1, 3), int(0)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }
}
