//! Seeded sampling of valid members of the master family.
//!
//! Once the diagonal of every right action is fixed, all residues of the
//! master family are linear in the remaining parameters (for `n ≥ 4`), so
//! the valid completions form a subspace that can be sampled exactly.

use std::collections::HashMap;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{dedup_monic, diagonal_names, master_parameter_names, master_symbolic, ExtensionSpec};
use crate::error::{Error, Result};
use crate::linalg::{kernel_sparse, SparseVec, Subspace};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::triangular::nil_independent_count;

/// Precomputed residues of the master family for fixed `(n, f)`.
#[derive(Clone, Debug)]
pub struct ExtensionSampler {
    n: usize,
    f: usize,
    diagonal: Vec<Vec<String>>,
    free: Vec<String>,
    residues: Vec<Poly>,
}

impl ExtensionSampler {
    pub fn new(n: usize, f: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Unsupported(format!(
                "sampling needs n >= 4, got {n}"
            )));
        }
        let table = master_symbolic(n, f)?;
        let residues = dedup_monic(table.leibniz_residues().into_iter().flat_map(|r| r.value));
        let diagonal: Vec<Vec<String>> = (1..=f).map(|a| diagonal_names(n, a)).collect();
        let fixed: std::collections::HashSet<&String> = diagonal.iter().flatten().collect();
        let free = master_parameter_names(n, f)
            .into_iter()
            .filter(|v| !fixed.contains(v))
            .collect();
        Ok(ExtensionSampler {
            n,
            f,
            diagonal,
            free,
            residues,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Parameters other than the superdiagonal diagonal entries.
    pub fn free_parameters(&self) -> &[String] {
        &self.free
    }

    /// The subspace of valid off-diagonal parameters for fixed diagonals,
    /// coordinates in [`ExtensionSampler::free_parameters`] order.
    pub fn completions(&self, diags: &[Vec<Scalar>]) -> Result<Subspace> {
        if diags.len() != self.f || diags.iter().any(|d| d.len() != self.n - 1) {
            return Err(Error::InvalidParameters(format!(
                "expected {} diagonal vectors of length {}",
                self.f,
                self.n - 1
            )));
        }
        let assignment: HashMap<String, Scalar> = self
            .diagonal
            .iter()
            .zip(diags)
            .flat_map(|(names, vals)| names.iter().cloned().zip(vals.iter().cloned()))
            .collect();
        let col: HashMap<&str, usize> = self
            .free
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let rows: Vec<Option<SparseVec>> = self
            .residues
            .par_iter()
            .map(|p| {
                let q = p.partial_eval(&assignment);
                if q.is_zero() {
                    return Some(Vec::new());
                }
                if !q.is_linear_form() {
                    return None;
                }
                let mut v: SparseVec = q
                    .linear_coefficients()
                    .into_iter()
                    .map(|(name, c)| (col[name], c.clone()))
                    .collect();
                v.sort_by_key(|e| e.0);
                Some(v)
            })
            .collect();
        let rows = rows
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::InvalidParameters(
                    "diagonal leaves a nonlinear or inconsistent system".into(),
                )
            })?;
        Ok(kernel_sparse(
            self.free.len(),
            rows.into_iter().filter(|r| !r.is_empty()),
        ))
    }

    /// A random valid completion of the given diagonals.
    pub fn sample_with_diagonals(
        &self,
        diags: &[Vec<Scalar>],
        rng: &mut ChaCha8Rng,
    ) -> Result<ExtensionSpec> {
        let space = self.completions(diags)?;
        let mut values = vec![Scalar::zero(); self.free.len()];
        for v in space.basis_vectors() {
            let c = Scalar::from_int(rng.gen_range(-2..=2));
            if c.is_zero() {
                continue;
            }
            for (x, y) in values.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x += &(&c * y);
                }
            }
        }
        let mut spec = ExtensionSpec::new(self.n, self.f)?;
        for (names, vals) in self.diagonal.iter().zip(diags) {
            for (name, v) in names.iter().zip(vals) {
                spec.set(name, v.clone())?;
            }
        }
        for (name, v) in self.free.iter().zip(values) {
            spec.set(name, v)?;
        }
        Ok(spec)
    }

    /// A random diagonal vector; with `traceless` its entries sum to zero.
    pub fn random_diagonal(&self, rng: &mut ChaCha8Rng, traceless: bool) -> Vec<Scalar> {
        let mut d: Vec<Scalar> = (0..self.n - 1)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Scalar::zero()
                } else {
                    Scalar::from_int(rng.gen_range(-3..=3))
                }
            })
            .collect();
        if traceless {
            let mut s = Scalar::zero();
            for x in &d[..self.n - 2] {
                s += x;
            }
            d[self.n - 2] = -s;
        }
        d
    }

    /// Random nil-independent diagonals: all traceless or all unconstrained.
    pub fn random_diagonals(&self, rng: &mut ChaCha8Rng, traceless: bool) -> Vec<Vec<Scalar>> {
        let traceless = traceless && self.f < self.n - 1;
        loop {
            let diags: Vec<Vec<Scalar>> = (0..self.f)
                .map(|_| self.random_diagonal(rng, traceless))
                .collect();
            if nil_independent_count(&diags) == self.f {
                return diags;
            }
        }
    }

    /// A random valid member, on the traceless branch about half the time.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> ExtensionSpec {
        loop {
            let traceless = rng.gen_bool(0.5);
            let diags = self.random_diagonals(rng, traceless);
            if let Ok(spec) = self.sample_with_diagonals(&diags, rng) {
                return spec;
            }
        }
    }
}
