//! Exact linear algebra over Q(i).
//!
//! Two elimination engines produce the same reduced row echelon form: a dense
//! one for narrow systems and a sparse incremental one used once the number of
//! columns exceeds [`SPARSE_THRESHOLD`]. Pivots are always the leftmost nonzero
//! column, so the result is canonical and subspaces compare structurally.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column count above which the sparse engine is used.
pub const SPARSE_THRESHOLD: usize = 64;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers, mostly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Matrix::from_rows(cols, data).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    fn check_same_shape(&self, rhs: &Matrix) -> Result<()> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (r, _) = dense_rref(&aug);
        for i in 0..n {
            if !r[(i, i)].is_one() {
                return None;
            }
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn pow(&self, e: usize) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self[(i, j)].is_zero()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}\n{self}", self.rows, self.cols)
    }
}

/// A sparse vector: strictly increasing column indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

pub fn dense_from_sparse(len: usize, v: &SparseVec) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (j, x) in v {
        out[*j] = x.clone();
    }
    out
}

/// `a - c * b`, merging sorted sparse vectors.
fn sparse_axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0);
        let cb = b.get(j).map(|e| e.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = &a[i].1 - &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -&(c * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn sparse_scale(v: &mut SparseVec, c: &Scalar) {
    for (_, x) in v.iter_mut() {
        *x = &*x * c;
    }
}

/// Incremental sparse row echelon form keyed by pivot column.
///
/// Rows are kept with a unit pivot at their first entry; [`Echelon::into_rref`]
/// back-substitutes to the reduced form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    cols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the current pivots (leading entries only).
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.first().cloned() {
            match self.rows.get(&lead) {
                Some(row) => v = sparse_axpy(&v, &c, row),
                None => break,
            }
        }
        v
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(j, _)| *j < self.cols));
        let mut v = self.reduce_leading(v);
        match v.first().cloned() {
            None => false,
            Some((lead, c)) => {
                let inv = c.inv().expect("nonzero pivot");
                sparse_scale(&mut v, &inv);
                self.rows.insert(lead, v);
                true
            }
        }
    }

    /// True if `v` lies in the row space (full reduction).
    pub fn contains(&self, v: SparseVec) -> bool {
        let mut v = v;
        let mut k = 0;
        while k < v.len() {
            let (col, c) = v[k].clone();
            match self.rows.get(&col) {
                Some(row) => v = sparse_axpy(&v, &c, row),
                None => k += 1,
            }
        }
        v.is_empty()
    }

    /// Reduced row echelon rows in pivot order.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let cols = self.cols;
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (pivot, row) in self.rows.into_iter().rev() {
            let mut v = row;
            let mut k = 1;
            while k < v.len() {
                let (col, c) = v[k].clone();
                match done.get(&col) {
                    Some(r) => v = sparse_axpy(&v, &c, r),
                    None => k += 1,
                }
            }
            debug_assert_eq!(v.first().map(|e| e.0), Some(pivot));
            debug_assert!(v.iter().all(|(j, _)| *j < cols));
            done.insert(pivot, v);
        }
        done.into_values().collect()
    }
}

/// Dense Gauss-Jordan: leftmost column, topmost nonzero row.
fn dense_rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..a.cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                if !a[(r, j)].is_zero() {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn sparse_rref_rows(cols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::new(cols);
    for v in rows {
        e.insert(v);
    }
    e.into_rref()
}

/// Unique RREF of `m`, same shape (zero rows at the bottom), and its rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    if m.cols <= SPARSE_THRESHOLD {
        let (r, p) = dense_rref(m);
        return (r, p.len());
    }
    let rows = sparse_rref_rows(m.cols, (0..m.rows).map(|i| sparse_from_dense(m.row(i))));
    let rank = rows.len();
    let mut out = Matrix::zero(m.rows, m.cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r {
            out[(i, *j)] = x.clone();
        }
    }
    (out, rank)
}

/// A linear subspace of Q(i)^ambient held as its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

/// Containment relation between two subspaces of the same ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceRelation {
    Equal,
    AInB,
    BInA,
    Incomparable,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    fn from_rref_rows(ambient: usize, rows: Vec<SparseVec>) -> Self {
        let mut basis = Matrix::zero(rows.len(), ambient);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r {
                basis[(i, *j)] = x.clone();
            }
        }
        Subspace { ambient, basis }
    }

    /// Canonical subspace from sparse generators.
    pub fn from_sparse(ambient: usize, gens: impl IntoIterator<Item = SparseVec>) -> Self {
        if ambient <= SPARSE_THRESHOLD {
            let rows: Vec<Vec<Scalar>> = gens
                .into_iter()
                .map(|v| dense_from_sparse(ambient, &v))
                .collect();
            let m = Matrix::from_rows(ambient, rows).expect("consistent widths");
            let (r, p) = dense_rref(&m);
            let rows = (0..p.len()).map(|i| sparse_from_dense(r.row(i))).collect();
            return Subspace::from_rref_rows(ambient, rows);
        }
        Subspace::from_rref_rows(ambient, sparse_rref_rows(ambient, gens))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    fn pivot(&self, i: usize) -> usize {
        self.basis
            .row(i)
            .iter()
            .position(|x| !x.is_zero())
            .expect("basis rows are nonzero")
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut w = v.to_vec();
        for i in 0..self.dim() {
            let p = self.pivot(i);
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (j, x) in self.basis.row(i).iter().enumerate() {
                if !x.is_zero() {
                    w[j] -= &(&c * x);
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Coordinates of `v` in the RREF basis, `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some((0..self.dim()).map(|i| v[self.pivot(i)].clone()).collect())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {})\n{}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

/// Null space of `m` as a canonical subspace of Q(i)^cols.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, rank) = rref(m);
    let rows = (0..rank).map(|i| sparse_from_dense(r.row(i))).collect();
    kernel_from_rref(m.cols, rows)
}

/// Null space of a system given by sparse rows.
pub fn kernel_sparse(cols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Subspace {
    if cols <= SPARSE_THRESHOLD {
        let dense: Vec<Vec<Scalar>> = rows
            .into_iter()
            .map(|v| dense_from_sparse(cols, &v))
            .collect();
        return kernel(&Matrix::from_rows(cols, dense).expect("consistent widths"));
    }
    kernel_from_rref(cols, sparse_rref_rows(cols, rows))
}

fn kernel_from_rref(cols: usize, rref_rows: Vec<SparseVec>) -> Subspace {
    let pivots: Vec<usize> = rref_rows.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // column view of the non-pivot entries
    let mut by_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
    for (r, row) in rref_rows.iter().enumerate() {
        for (j, x) in row.iter().skip(1) {
            by_col[*j].push((pivots[r], x.clone()));
        }
    }
    let gens = (0..cols).filter(|&j| !is_pivot[j]).map(|free| {
        let mut v: SparseVec = by_col[free].iter().map(|(p, x)| (*p, -x)).collect();
        v.push((free, Scalar::one()));
        v.sort_by_key(|e| e.0);
        v
    });
    Subspace::from_sparse(cols, gens.collect::<Vec<_>>())
}

/// Canonical span of equal-length vectors.
pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            found: v.len(),
        });
    }
    Ok(Subspace::from_sparse(
        ambient,
        vectors
            .iter()
            .map(|v| sparse_from_dense(v))
            .collect::<Vec<_>>(),
    ))
}

pub fn subspace_rel(a: &Subspace, b: &Subspace) -> Result<SubspaceRelation> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch {
            expected: a.ambient,
            found: b.ambient,
        });
    }
    let a_in_b = b.contains_subspace(a);
    let b_in_a = a.contains_subspace(b);
    Ok(match (a_in_b, b_in_a) {
        (true, true) => SubspaceRelation::Equal,
        (true, false) => SubspaceRelation::AInB,
        (false, true) => SubspaceRelation::BInA,
        (false, false) => SubspaceRelation::Incomparable,
    })
}
