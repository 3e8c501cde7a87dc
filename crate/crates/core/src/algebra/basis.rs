use num_traits::Zero;

use super::{Coeff, StructureTable};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// An invertible change of basis; row `i` of `p` expresses the new `e'_i`
/// in the old basis, `e'_i = Σ_j p_ij e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    p: Matrix,
    inv: Matrix,
}

impl BasisChange {
    pub fn new(p: Matrix) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::DimensionMismatch {
                expected: p.rows(),
                found: p.cols(),
            });
        }
        let inv = p.inverse().ok_or(Error::SingularBasisChange)?;
        Ok(BasisChange { p, inv })
    }

    pub fn identity(d: usize) -> Self {
        BasisChange {
            p: Matrix::identity(d),
            inv: Matrix::identity(d),
        }
    }

    /// Builds the change from sparse rows `e'_i = Σ c e_j`.
    pub fn from_sparse_rows(d: usize, rows: &[Vec<(usize, Scalar)>]) -> Result<Self> {
        if rows.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rows.len(),
            });
        }
        let mut p = Matrix::zero(d, d);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r {
                if *j >= d {
                    return Err(Error::OutOfRange(format!("basis index {j}")));
                }
                p[(i, *j)] += c;
            }
        }
        BasisChange::new(p)
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.p
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            p: self.inv.clone(),
            inv: self.p.clone(),
        }
    }

    /// Applies `self` first and then `next`: `e'' = P_next · P_self · e`.
    pub fn then(&self, next: &BasisChange) -> Result<BasisChange> {
        Ok(BasisChange {
            p: next.p.mul(&self.p)?,
            inv: self.inv.mul(&next.inv)?,
        })
    }
}

/// Transports the product to the new basis:
/// `c'_ij^r = Σ p_ik p_jl c_kl^m q_mr` with `q = p⁻¹`.
pub fn change_of_basis<C: Coeff>(
    a: &StructureTable<C>,
    p: &BasisChange,
) -> Result<StructureTable<C>> {
    let d = a.dim();
    if p.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }
    let rows: Vec<Vec<(usize, C)>> = (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| !p.p[(i, j)].is_zero())
                .map(|j| (j, C::from_scalar(p.p[(i, j)].clone())))
                .collect()
        })
        .collect();
    let q: Vec<Vec<(usize, C)>> = (0..d)
        .map(|m| {
            (0..d)
                .filter(|&r| !p.inv[(m, r)].is_zero())
                .map(|r| (r, C::from_scalar(p.inv[(m, r)].clone())))
                .collect()
        })
        .collect();
    let mut out = StructureTable::new(a.labels().to_vec());
    for i in 0..d {
        for j in 0..d {
            let mut old = vec![C::zero(); d];
            for (k, pik) in &rows[i] {
                for (l, pjl) in &rows[j] {
                    let entries = a.get(*k, *l);
                    if entries.is_empty() {
                        continue;
                    }
                    let mut w = C::zero();
                    w.add_mul(pik, pjl);
                    for (m, c) in entries {
                        old[*m].add_mul(&w, c);
                    }
                }
            }
            let mut new = vec![C::zero(); d];
            for (m, v) in old.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (r, qmr) in &q[m] {
                    new[*r].add_mul(v, qmr);
                }
            }
            let entries: Vec<(usize, C)> = new
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !entries.is_empty() {
                out.set(i, j, entries)?;
            }
        }
    }
    Ok(out)
}
