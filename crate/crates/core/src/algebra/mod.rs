//! Algebras presented by structure constants.
//!
//! A [`StructureTable`] stores `[e_i, e_j] = Σ_k c[i][j][k] e_k` as a dense
//! `d × d` grid of sparse coefficient vectors. Coefficients are either exact
//! scalars or polynomials in named parameters; the latter support brackets and
//! Leibniz residues only.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

mod basis;
pub mod io;
mod ops;

pub use basis::{change_of_basis, BasisChange};
pub use ops::{derivation_matrix, SeriesSignature, Side};

/// Coefficient ring of a structure table.
pub trait Coeff: Clone + PartialEq + Zero + Send + Sync + fmt::Debug + fmt::Display {
    fn from_scalar(s: Scalar) -> Self;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn add_ref(&mut self, a: &Self);
    fn sub_ref(&mut self, a: &Self);
    fn negated(&self) -> Self;
}

impl Coeff for Scalar {
    fn from_scalar(s: Scalar) -> Self {
        s
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += &(a * b);
        }
    }

    fn add_ref(&mut self, a: &Self) {
        *self += a;
    }

    fn sub_ref(&mut self, a: &Self) {
        *self -= a;
    }

    fn negated(&self) -> Self {
        -self
    }
}

impl Coeff for Poly {
    fn from_scalar(s: Scalar) -> Self {
        Poly::constant(s)
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        if let Some(c) = a.as_constant() {
            self.add_scaled(b, &c);
        } else if let Some(c) = b.as_constant() {
            self.add_scaled(a, &c);
        } else {
            self.add_assign_ref(&(a * b));
        }
    }

    fn add_ref(&mut self, a: &Self) {
        self.add_assign_ref(a);
    }

    fn sub_ref(&mut self, a: &Self) {
        self.sub_assign_ref(a);
    }

    fn negated(&self) -> Self {
        -self
    }
}

/// Sparse vector over a coefficient ring: increasing indices, no zeros.
pub type Entries<C> = Vec<(usize, C)>;

/// A bilinear product on a `dim`-dimensional space with labelled basis.
#[derive(Clone, PartialEq)]
pub struct StructureTable<C> {
    labels: Vec<String>,
    grid: Vec<Entries<C>>,
}

/// A nonzero Leibniz residue at the basis triple `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residue<C> {
    pub triple: (usize, usize, usize),
    pub value: Vec<C>,
}

fn normalize_entries<C: Coeff>(mut v: Vec<(usize, C)>) -> Entries<C> {
    v.sort_by_key(|e| e.0);
    let mut out: Entries<C> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((last, acc)) if *last == k => acc.add_ref(&c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl<C: Coeff> StructureTable<C> {
    /// The zero product on the given basis.
    pub fn new(labels: Vec<String>) -> Self {
        let d = labels.len();
        StructureTable {
            labels,
            grid: vec![Vec::new(); d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.label_index(label)
            .ok_or_else(|| Error::OutOfRange(format!("no basis element {label:?}")))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.dim() {
            return Err(Error::OutOfRange(format!(
                "basis index {i} in dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Replaces `[e_i, e_j]`.
    pub fn set(&mut self, i: usize, j: usize, value: Vec<(usize, C)>) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        for (k, _) in &value {
            self.check(*k)?;
        }
        let d = self.dim();
        self.grid[i * d + j] = normalize_entries(value);
        Ok(())
    }

    /// Adds `c e_k` to `[e_i, e_j]`.
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, c: C) -> Result<()> {
        let mut v = self.get(i, j).to_vec();
        v.push((k, c));
        self.set(i, j, v)
    }

    /// Label-based variant of [`StructureTable::set`].
    pub fn set_by_label(&mut self, left: &str, right: &str, value: &[(C, &str)]) -> Result<()> {
        let i = self.index_of(left)?;
        let j = self.index_of(right)?;
        let v = value
            .iter()
            .map(|(c, l)| Ok((self.index_of(l)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.set(i, j, v)
    }

    /// `[e_i, e_j]` as a sparse vector.
    pub fn get(&self, i: usize, j: usize) -> &[(usize, C)] {
        &self.grid[i * self.dim() + j]
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> C {
        self.get(i, j)
            .iter()
            .find(|(m, _)| *m == k)
            .map_or_else(C::zero, |(_, c)| c.clone())
    }

    /// Nonzero products in `(i, j)` order.
    pub fn products(&self) -> impl Iterator<Item = (usize, usize, &[(usize, C)])> {
        let d = self.dim();
        self.grid
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(move |(ij, v)| (ij / d, ij % d, v.as_slice()))
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        v[i] = C::from_scalar(Scalar::one());
        v
    }

    /// Bilinear expansion `Σ x_i y_j [e_i, e_j]`.
    pub fn bracket(&self, x: &[C], y: &[C]) -> Result<Vec<C>> {
        let d = self.dim();
        for v in [x, y] {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
        }
        let mut out = vec![C::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entries = self.get(i, j);
                if entries.is_empty() {
                    continue;
                }
                let mut w = C::zero();
                w.add_mul(xi, yj);
                for (k, c) in entries {
                    out[*k].add_mul(&w, c);
                }
            }
        }
        Ok(out)
    }

    /// `out ± Σ_m v_m [e_m, e_j]` for sparse `v`.
    fn left_apply(&self, v: &[(usize, C)], j: usize, out: &mut [C], add: bool) {
        for (m, a) in v {
            let a = if add { a.clone() } else { a.negated() };
            for (k, c) in self.get(*m, j) {
                out[*k].add_mul(&a, c);
            }
        }
    }

    fn residue(&self, i: usize, j: usize, k: usize) -> Vec<C> {
        let mut r = vec![C::zero(); self.dim()];
        // [e_i, [e_j, e_k]]
        for (m, a) in self.get(j, k) {
            for (q, c) in self.get(i, *m) {
                r[*q].add_mul(a, c);
            }
        }
        // - [[e_i, e_j], e_k] + [[e_i, e_k], e_j]
        self.left_apply(self.get(i, j), k, &mut r, false);
        self.left_apply(self.get(i, k), j, &mut r, true);
        r
    }

    /// Nonzero vectors `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]`
    /// in triple-lexicographic order.
    pub fn leibniz_residues(&self) -> Vec<Residue<C>> {
        let d = self.dim();
        (0..d)
            .into_par_iter()
            .map(|i| {
                let mut local = Vec::new();
                for j in 0..d {
                    for k in 0..d {
                        let value = self.residue(i, j, k);
                        if value.iter().any(|c| !c.is_zero()) {
                            local.push(Residue {
                                triple: (i, j, k),
                                value,
                            });
                        }
                    }
                }
                local
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn is_leibniz(&self) -> bool {
        let d = self.dim();
        (0..d).into_par_iter().all(|i| {
            (0..d).all(|j| (0..d).all(|k| self.residue(i, j, k).iter().all(Zero::is_zero)))
        })
    }

    /// Skew-symmetry of the products on basis pairs.
    pub fn is_skew(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (i..d).all(|j| {
                let mut s = vec![C::zero(); d];
                for (k, c) in self.get(i, j).iter().chain(self.get(j, i)) {
                    s[*k].add_ref(c);
                }
                s.iter().all(Zero::is_zero)
            })
        })
    }

    pub fn is_lie(&self) -> bool {
        self.is_skew() && self.is_leibniz()
    }

    /// Direct sum with an abelian algebra on the extra labels.
    pub fn with_abelian(&self, extra: &[String]) -> Self {
        let mut labels = self.labels.clone();
        labels.extend(extra.iter().cloned());
        let mut out = StructureTable::new(labels);
        for (i, j, v) in self.products() {
            out.set(i, j, v.to_vec())
                .expect("indices within the summand");
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<StructureTable<D>> {
        let grid = self
            .grid
            .iter()
            .map(|v| {
                let mapped = v
                    .iter()
                    .map(|(k, c)| Ok((*k, f(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(normalize_entries(mapped))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureTable {
            labels: self.labels.clone(),
            grid,
        })
    }
}

impl StructureTable<Poly> {
    /// Evaluates every coefficient at a full assignment.
    pub fn eval(
        &self,
        assignment: &std::collections::HashMap<String, Scalar>,
    ) -> Result<StructureTable<Scalar>> {
        self.try_map(|p| p.eval(assignment))
    }

    pub fn partial_eval(&self, assignment: &std::collections::HashMap<String, Scalar>) -> Self {
        self.try_map(|p| Ok(p.partial_eval(assignment)))
            .expect("partial evaluation is total")
    }

    pub fn substitute(&self, map: &std::collections::HashMap<String, Poly>) -> Self {
        self.try_map(|p| Ok(p.substitute(map)))
            .expect("substitution is total")
    }

    /// All indeterminates occurring in the table, sorted.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = std::collections::BTreeSet::new();
        for v in &self.grid {
            for (_, p) in v {
                vars.extend(p.variables());
            }
        }
        vars.into_iter().map(|v| v.to_string()).collect()
    }
}

impl StructureTable<Scalar> {
    /// The same table with polynomial (constant) coefficients.
    pub fn to_poly(&self) -> StructureTable<Poly> {
        self.try_map(|c| Ok(Poly::constant(c.clone())))
            .expect("embedding is total")
    }
}

impl<C: Coeff> fmt::Debug for StructureTable<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StructureTable(dim {})", self.dim())?;
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for StructureTable<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, v) in self.products() {
            let terms: Vec<String> = v
                .iter()
                .map(|(k, c)| format!("({c})*{}", self.labels[*k]))
                .collect();
            writeln!(
                f,
                "[{}, {}] = {}",
                self.labels[i],
                self.labels[j],
                terms.join(" + ")
            )?;
        }
        Ok(())
    }
}

/// Labels `e1..ed`.
pub fn default_labels(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("e{i}")).collect()
}
