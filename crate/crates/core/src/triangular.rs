//! The algebra `T(n)` of strictly upper triangular matrices, its
//! superdiagonal basis ordering, and the structure matrices of an extension.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::linalg::{span, Matrix};
use crate::scalar::Scalar;

/// Bijection between pairs `1 ≤ i < j ≤ n` and `0..n(n-1)/2`, ordered by
/// gap `j - i` and then by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        let pairs = (1..n)
            .flat_map(|gap| (1..=n - gap).map(move |i| (i, i + gap)))
            .collect();
        PairIndex { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || i >= j || j > self.n {
            return Err(Error::OutOfRange(format!(
                "pair ({i},{j}) for n = {}",
                self.n
            )));
        }
        let gap = j - i;
        // gaps 1..gap-1 contribute n-1, n-2, ..., n-gap+1 pairs
        let offset: usize = (1..gap).map(|g| self.n - g).sum();
        Ok(offset + i - 1)
    }

    /// Index of a pair already known to be valid.
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.index(i, j).expect("valid pair")
    }

    pub fn pair(&self, idx: usize) -> Result<(usize, usize)> {
        self.pairs
            .get(idx)
            .copied()
            .ok_or_else(|| Error::OutOfRange(format!("pair index {idx} for n = {}", self.n)))
    }

    /// `"{i}{j}"`, or `"{i}_{j}"` once indices can have two digits.
    pub fn code(&self, i: usize, j: usize) -> String {
        pair_code(self.n, i, j)
    }

    pub fn labels(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|&(i, j)| format!("N{}", self.code(i, j)))
            .collect()
    }
}

pub fn pair_code(n: usize, i: usize, j: usize) -> String {
    if n >= 10 {
        format!("{i}_{j}")
    } else {
        format!("{i}{j}")
    }
}

pub fn pair_index(n: usize, i: usize, j: usize) -> Result<usize> {
    PairIndex::new(n).index(i, j)
}

/// Labels of the extension generators: `X` alone, or `X1..Xf`.
pub fn generator_labels(f: usize) -> Vec<String> {
    if f == 1 {
        vec!["X".to_string()]
    } else {
        (1..=f).map(|a| format!("X{a}")).collect()
    }
}

/// `T(n)` with `[N_ij, N_kl] = δ_jk N_il - δ_il N_kj`.
pub fn triangular(n: usize) -> Result<StructureTable<Scalar>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("T(n) needs n >= 3, got {n}")));
    }
    let idx = PairIndex::new(n);
    let mut t = StructureTable::new(idx.labels());
    let one = Scalar::from_int(1);
    for (a, &(i, j)) in idx.pairs().iter().enumerate() {
        for (b, &(k, l)) in idx.pairs().iter().enumerate() {
            if j == k {
                t.add_term(a, b, idx.at(i, l), one.clone())?;
            }
            if i == l {
                t.add_term(a, b, idx.at(k, j), -&one)?;
            }
        }
    }
    Ok(t)
}

/// Right and left action of one generator on the nilradical:
/// `a[(ij, pq)]` is the coefficient of `N_pq` in `[N_ij, X]`,
/// `b[(ij, pq)]` the one in `[X, N_ij]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMatrices {
    pub a: Matrix,
    pub b: Matrix,
}

/// Reads `A^α`, `B^α` (α from 1) off an extension whose first basis
/// vectors are `T(n)` in pair order.
pub fn structure_matrices(
    ext: &StructureTable<Scalar>,
    n: usize,
    alpha: usize,
) -> Result<StructureMatrices> {
    let dn = n * (n - 1) / 2;
    if alpha == 0 || dn + alpha > ext.dim() {
        return Err(Error::OutOfRange(format!(
            "generator {alpha} in an extension of dimension {}",
            ext.dim()
        )));
    }
    let x = dn + alpha - 1;
    let mut a = Matrix::zero(dn, dn);
    let mut b = Matrix::zero(dn, dn);
    for r in 0..dn {
        for (m, side) in [(&mut a, (r, x)), (&mut b, (x, r))] {
            for (k, c) in ext.get(side.0, side.1) {
                if *k >= dn {
                    return Err(Error::InvalidParameters(format!(
                        "[{}, {}] leaves the nilradical",
                        ext.labels()[side.0],
                        ext.labels()[side.1]
                    )));
                }
                m[(r, *k)] = c.clone();
            }
        }
    }
    Ok(StructureMatrices { a, b })
}

/// Outcome of the structural checks on a right-action matrix `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightActionReport {
    pub upper_triangular: bool,
    pub off_diagonal_pattern: bool,
    pub diagonal_sums: bool,
    pub failures: Vec<String>,
}

impl RightActionReport {
    pub fn passed(&self) -> bool {
        self.upper_triangular && self.off_diagonal_pattern && self.diagonal_sums
    }
}

/// Positions `(row, col)` where `A` may carry off-diagonal entries:
/// `a_{12,2n}`, `a_{i(i+1),1n}` for `2 ≤ i ≤ n-2`, `a_{(n-1)n,1(n-1)}`.
pub fn allowed_off_diagonal(n: usize) -> BTreeSet<(usize, usize)> {
    let idx = PairIndex::new(n);
    let mut s = BTreeSet::new();
    s.insert((idx.at(1, 2), idx.at(2, n)));
    for i in 2..=n.saturating_sub(2) {
        s.insert((idx.at(i, i + 1), idx.at(1, n)));
    }
    s.insert((idx.at(n - 1, n), idx.at(1, n - 1)));
    s
}

pub fn check_lemma_2_4(m: &StructureMatrices, n: usize) -> RightActionReport {
    let idx = PairIndex::new(n);
    let a = &m.a;
    let allowed = allowed_off_diagonal(n);
    let mut failures = Vec::new();
    let name = |r: usize| {
        let (i, j) = idx.pair(r).expect("row in range");
        idx.code(i, j)
    };

    let upper_triangular = a.is_upper_triangular();
    if !upper_triangular {
        failures.push("A is not upper triangular".to_string());
    }

    let mut off_diagonal_pattern = true;
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if r != c && !a[(r, c)].is_zero() && !allowed.contains(&(r, c)) {
                off_diagonal_pattern = false;
                failures.push(format!(
                    "a_{{{},{}}} = {} is not allowed",
                    name(r),
                    name(c),
                    a[(r, c)]
                ));
            }
        }
    }

    let mut diagonal_sums = true;
    for &(i, k) in idx.pairs() {
        if k == i + 1 {
            continue;
        }
        let mut sum = Scalar::zero();
        for p in i..k {
            sum += &a[(idx.at(p, p + 1), idx.at(p, p + 1))];
        }
        let r = idx.at(i, k);
        if a[(r, r)] != sum {
            diagonal_sums = false;
            failures.push(format!(
                "a_{{{0},{0}}} = {1}, expected {2}",
                idx.code(i, k),
                a[(r, r)],
                sum
            ));
        }
    }

    RightActionReport {
        upper_triangular,
        off_diagonal_pattern,
        diagonal_sums,
        failures,
    }
}

/// `(a_{12,12}, …, a_{(n-1)n,(n-1)n})`.
pub fn superdiagonal_diagonal(a: &Matrix, n: usize) -> Vec<Scalar> {
    let idx = PairIndex::new(n);
    (1..n)
        .map(|i| a[(idx.at(i, i + 1), idx.at(i, i + 1))].clone())
        .collect()
}

/// Rank of the diagonal vectors, the size of a maximal nil-independent set.
pub fn nil_independent_count(diags: &[Vec<Scalar>]) -> usize {
    let Some(first) = diags.first() else {
        return 0;
    };
    span(first.len(), diags).map_or(0, |s| s.dim())
}

/// Nilpotency of a square matrix: zero diagonal when upper triangular,
/// otherwise `M^d = 0`.
pub fn is_nilpotent_matrix(m: &Matrix) -> bool {
    if m.is_upper_triangular() {
        m.diagonal().iter().all(Zero::is_zero)
    } else {
        is_nilpotent_by_powers(m)
    }
}

pub fn is_nilpotent_by_powers(m: &Matrix) -> bool {
    m.is_square() && m.pow(m.rows()).is_ok_and(|p| p.is_zero())
}
