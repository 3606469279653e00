//! Exact rational scalars and sparse linear algebra.
//!
//! Everything downstream reduces to rank, kernel and solve over the
//! rationals. Elimination works on sparse rows kept in reduced row echelon
//! form, which is also what [`Subspace`] stores.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational number in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// Sparse vector: column index to nonzero entry.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Integer scalar.
pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// The scalar `n/d`. Panics when `d` is zero.
pub fn qq(n: i64, d: i64) -> Scalar {
    assert!(d != 0, "zero denominator");
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `num/den`, or `num` alone when the denominator is 1.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` with optional leading sign. Decimals are rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::parse(format!("not a rational literal: {s:?}"));
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Scalar::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(int(n)?, d))
        }
    }
}

/// Row-major sparse matrix without stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds from dense rows; all rows must have length `cols`.
    pub fn from_dense(cols: usize, rows: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::usage(format!("row {i} has length {}, expected {cols}", row.len())));
            }
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(cols, &dense).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Stores `x` at `(i, j)`; storing zero removes the entry.
    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    /// Adds `x` to the entry at `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, x: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, cur + x);
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rows as sparse vectors.
    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for (&(i, j), x) in &self.entries {
            out[i].insert(j, x.clone());
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (&(i, j), x) in &self.entries {
            out[i][j] = x.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(i, j), x) in &self.entries {
            t.entries.insert((j, i), x.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::usage(format!("vector length {} does not match {} columns", v.len(), self.cols)));
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (&(i, j), x) in &self.entries {
            if !v[j].is_zero() {
                out[i] += x * &v[j];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::usage(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let right = other.sparse_rows();
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(i, k), x) in &self.entries {
            for (&j, y) in &right[k] {
                out.add_to(i, j, &(x * y));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(i, j), x) in &other.entries {
            out.add_to(i, j, x);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(i, j), x) in &other.entries {
            out.add_to(i, j, &-x);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        let mut out = Self::zeros(self.rows, self.cols);
        if !c.is_zero() {
            for (&k, x) in &self.entries {
                out.entries.insert(k, x * c);
            }
        }
        out
    }

    /// `self - c * I`; the matrix must be square.
    pub fn shift(&self, c: &Scalar) -> SparseMatrix {
        assert_eq!(self.rows, self.cols, "shift needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out.add_to(i, i, &-c);
        }
        out
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &SparseMatrix) {
        for (&(i, j), x) in &block.entries {
            self.set(r0 + i, c0 + j, x.clone());
        }
    }

    fn check_same_shape(&self, other: &SparseMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::usage(format!("shape mismatch {}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }
}

fn axpy(target: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    for (&j, x) in v {
        let e = target.entry(j).or_insert_with(Scalar::zero);
        *e += c * x;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

/// A subspace of `Q^n` kept as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, pivots: BTreeMap::new() }
    }

    pub fn spanned_by<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduced basis vectors ordered by pivot column.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.pivots.values().cloned().collect()
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for (p, row) in &self.pivots {
            if let Some(c) = r.get(p).cloned() {
                axpy(&mut r, &-c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else {
            return false;
        };
        assert!(p < self.ambient, "vector index {p} outside ambient dimension {}", self.ambient);
        let inv = lead.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        for row in self.pivots.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.pivots.insert(p, r);
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.pivots.values().all(|v| self.contains(v))
    }

    /// Intersection with `other`, via the kernel of `[A | -B]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let a = self.basis();
        let b = other.basis();
        let cols = a.len() + b.len();
        let mut m = SparseMatrix::zeros(self.ambient, cols);
        for (k, v) in a.iter().enumerate() {
            for (&i, x) in v {
                m.set(i, k, x.clone());
            }
        }
        for (k, v) in b.iter().enumerate() {
            for (&i, x) in v {
                m.set(i, a.len() + k, -x.clone());
            }
        }
        let mut out = Subspace::new(self.ambient);
        for kv in kernel_basis(&m) {
            let mut w = SparseVec::new();
            for (k, v) in a.iter().enumerate() {
                if !kv[k].is_zero() {
                    axpy(&mut w, &kv[k], v);
                }
            }
            out.insert(&w);
        }
        out
    }
}

fn echelon(m: &SparseMatrix) -> Subspace {
    Subspace::spanned_by(m.cols(), m.sparse_rows().iter())
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m).dim()
}

/// Basis of the right null space, one vector per free column in increasing order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let e = echelon(m);
    let n = m.cols();
    let pivot_cols: Vec<usize> = e.pivot_columns().collect();
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !e.pivots.contains_key(c)) {
        let mut v = vec![Scalar::zero(); n];
        v[f] = Scalar::one();
        for &p in &pivot_cols {
            if let Some(x) = e.pivots[&p].get(&f) {
                v[p] = -x.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = rhs`, or `None` when the system is inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if rhs.len() != m.rows() {
        return Err(Error::usage(format!("right-hand side has length {}, matrix has {} rows", rhs.len(), m.rows())));
    }
    let n = m.cols();
    let mut rows = m.sparse_rows();
    for (row, b) in rows.iter_mut().zip(rhs) {
        if !b.is_zero() {
            row.insert(n, b.clone());
        }
    }
    let e = Subspace::spanned_by(n + 1, rows.iter());
    if e.pivots.contains_key(&n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n];
    for (&p, row) in &e.pivots {
        if let Some(b) = row.get(&n) {
            x[p] = b.clone();
        }
    }
    if m.mul_vec(&x)? != rhs {
        return Err(Error::invariant("solution failed to re-substitute"));
    }
    Ok(Some(x))
}

/// Converts a dense vector to sparse form.
pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Converts a sparse vector to dense form of length `n`.
pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// Whether a scalar is an integer.
pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

/// Absolute value helper kept here so callers avoid importing num traits.
pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
        assert_eq!(rank(&SparseMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(1, 3)).len(), 3);
        let k = kernel_basis(&SparseMatrix::from_i64(&[&[1, -1]]));
        assert_eq!(k, vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let x = solve(&SparseMatrix::identity(2), &[q(3), q(5)]).unwrap();
        assert_eq!(x, Some(vec![q(3), q(5)]));
        let m = SparseMatrix::from_i64(&[&[1, 1]]);
        let x = solve(&m, &[q(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], q(2));
        let m = SparseMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(solve(&m, &[q(0), q(1)]).unwrap(), None);
        assert!(matches!(solve(&m, &[q(0)]), Err(Error::Usage(_))));
    }

    #[test]
    fn scalar_text() {
        assert_eq!(format_scalar(&qq(4, -6)), "-2/3");
        assert_eq!(format_scalar(&q(7)), "7");
        assert_eq!(parse_scalar("-2/3").unwrap(), qq(-2, 3));
        assert_eq!(parse_scalar("+5").unwrap(), q(5));
        assert!(parse_scalar("0.5").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn subspace_intersection() {
        let e = |i: usize| SparseVec::from([(i, q(1))]);
        let a = Subspace::spanned_by(3, [e(0), e(1)].iter());
        let b = Subspace::spanned_by(3, [e(1), e(2)].iter());
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(1)));
    }
}
