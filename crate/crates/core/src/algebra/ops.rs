//! Operations that need exact scalar coefficients: multiplication operators,
//! series, annihilators, ideals and derivations.

use num_traits::Zero;

use super::StructureTable;
use crate::error::{Error, Result};
use crate::linalg::{kernel_sparse, sparse_from_dense, Matrix, SparseVec, Subspace};
use crate::scalar::Scalar;

/// Which operand a multiplication operator fixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `L_x(y) = [x, y]`
    Left,
    /// `R_x(y) = [y, x]`
    Right,
}

/// Dimensions of the lower central and derived series.
pub type SeriesSignature = (Vec<usize>, Vec<usize>);

/// Reads a `d²` derivation vector (index `k*d + m` is row `k`, column `m`).
pub fn derivation_matrix(d: usize, v: &[Scalar]) -> Result<Matrix> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: v.len(),
        });
    }
    Matrix::from_rows(d, v.chunks(d.max(1)).map(<[Scalar]>::to_vec).collect())
}

impl StructureTable<Scalar> {
    fn check_len(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Matrix of `L_x` or `R_x`; column `m` is the image of `e_m`.
    pub fn mult_matrix(&self, x: &[Scalar], side: Side) -> Result<Matrix> {
        self.check_len(x)?;
        let d = self.dim();
        let mut m = Matrix::zero(d, d);
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for col in 0..d {
                let entries = match side {
                    Side::Left => self.get(p, col),
                    Side::Right => self.get(col, p),
                };
                for (k, c) in entries {
                    m[(*k, col)] += &(xp * c);
                }
            }
        }
        Ok(m)
    }

    /// `span{[u, v] : u ∈ a, v ∈ b}`.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let d = self.dim();
        for s in [a, b] {
            if s.ambient_dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.ambient_dim(),
                });
            }
        }
        let mut gens: Vec<SparseVec> = Vec::new();
        for u in a.basis_vectors() {
            for v in b.basis_vectors() {
                gens.push(sparse_from_dense(&self.bracket(&u, &v)?));
            }
        }
        Ok(Subspace::from_sparse(d, gens))
    }

    fn series(&self, next: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
        let d = self.dim();
        let mut terms = vec![Subspace::full(d)];
        for _ in 0..=d {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let t = next(last);
            if &t == last {
                break;
            }
            terms.push(t);
        }
        terms
    }

    /// `L¹ = L, L^{k+1} = [L^k, L]`, ending at zero or at stabilization.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim());
        self.series(|s| self.product_space(s, &full).expect("same ambient"))
    }

    /// `L^{[1]} = L, L^{[s+1]} = [L^{[s]}, L^{[s]}]`, same truncation.
    pub fn derived_series(&self) -> Vec<Subspace> {
        self.series(|s| self.product_space(s, s).expect("same ambient"))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series()
            .last()
            .is_some_and(Subspace::is_zero)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn series_signature(&self) -> SeriesSignature {
        let dims = |v: Vec<Subspace>| v.iter().map(Subspace::dim).collect();
        (
            dims(self.lower_central_series()),
            dims(self.derived_series()),
        )
    }

    /// `{v : [e_i, v] = 0 for all i}`.
    pub fn right_annihilator(&self) -> Subspace {
        let d = self.dim();
        let mut rows: Vec<SparseVec> = Vec::new();
        for i in 0..d {
            // component k of [e_i, v] is Σ_m v_m c[i][m][k]
            let mut by_k: Vec<SparseVec> = vec![Vec::new(); d];
            for m in 0..d {
                for (k, c) in self.get(i, m) {
                    by_k[*k].push((m, c.clone()));
                }
            }
            rows.extend(by_k.into_iter().filter(|r| !r.is_empty()));
        }
        kernel_sparse(d, rows)
    }

    pub fn is_ideal(&self, s: &Subspace) -> Result<bool> {
        let d = self.dim();
        if s.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.ambient_dim(),
            });
        }
        for u in s.basis_vectors() {
            for i in 0..d {
                let e = self.basis_vector(i);
                if !s.contains(&self.bracket(&e, &u)?) || !s.contains(&self.bracket(&u, &e)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks `D([e_i, e_j]) = [D e_i, e_j] + [e_i, D e_j]` on all basis pairs.
    pub fn is_derivation(&self, dmat: &Matrix) -> Result<bool> {
        let d = self.dim();
        if dmat.rows() != d || dmat.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: dmat.rows().max(dmat.cols()),
            });
        }
        let images: Vec<Vec<Scalar>> = (0..d).map(|m| dmat.column(m)).collect();
        for i in 0..d {
            for j in 0..d {
                let mut lhs = vec![Scalar::zero(); d];
                for (m, c) in self.get(i, j) {
                    for (k, x) in images[*m].iter().enumerate() {
                        if !x.is_zero() {
                            lhs[k] += &(c * x);
                        }
                    }
                }
                let a = self.bracket(&images[i], &self.basis_vector(j))?;
                let b = self.bracket(&self.basis_vector(i), &images[j])?;
                let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The derivation algebra as a subspace of the `d²` matrix entries,
    /// coordinate `k*d + m` holding `D[k][m]`.
    pub fn derivation_algebra(&self) -> Subspace {
        let d = self.dim();
        let var = |k: usize, m: usize| k * d + m;
        let mut rows: Vec<SparseVec> = Vec::new();
        for i in 0..d {
            for j in 0..d {
                // one equation per output component k
                let mut eqs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d];
                for (m, c) in self.get(i, j) {
                    for (k, eq) in eqs.iter_mut().enumerate() {
                        eq.push((var(k, *m), c.clone()));
                    }
                }
                for m in 0..d {
                    for (k, c) in self.get(m, j) {
                        eqs[*k].push((var(m, i), -c));
                    }
                    for (k, c) in self.get(i, m) {
                        eqs[*k].push((var(m, j), -c));
                    }
                }
                for eq in eqs {
                    let row = collect_sparse(eq);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        kernel_sparse(d * d, rows)
    }
}

fn collect_sparse(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (j, c) in v {
        match out.last_mut() {
            Some((last, acc)) if *last == j => *acc += &c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_labels;
    use num_traits::One;

    fn unit(d: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); d];
        v[i] = Scalar::one();
        v
    }

    fn heisenberg() -> StructureTable<Scalar> {
        let mut t = StructureTable::new(default_labels(3));
        t.set(0, 1, vec![(2, Scalar::one())]).unwrap();
        t.set(1, 0, vec![(2, -Scalar::one())]).unwrap();
        t
    }

    #[test]
    fn abelian_series_and_derivations() {
        let t = StructureTable::<Scalar>::new(default_labels(3));
        assert_eq!(t.series_signature(), (vec![3, 0], vec![3, 0]));
        assert_eq!(t.derivation_algebra().dim(), 9);
        assert_eq!(t.right_annihilator(), Subspace::full(3));
    }

    #[test]
    fn one_dimensional_zero_product() {
        let t = StructureTable::<Scalar>::new(default_labels(1));
        assert!(t.is_nilpotent() && t.is_solvable());
    }

    #[test]
    fn zero_dimensional_table() {
        let t = StructureTable::<Scalar>::new(Vec::new());
        assert!(t.is_leibniz() && t.is_lie() && t.is_nilpotent());
        assert_eq!(t.series_signature(), (vec![0], vec![0]));
        assert_eq!(t.derivation_algebra().dim(), 0);
    }

    #[test]
    fn heisenberg_derivations_have_dimension_six() {
        assert_eq!(heisenberg().derivation_algebra().dim(), 6);
    }

    #[test]
    fn identity_is_not_a_derivation_of_heisenberg() {
        let t = heisenberg();
        assert!(!t.is_derivation(&Matrix::identity(3)).unwrap());
        assert!(t.is_derivation(&Matrix::zero(3, 3)).unwrap());
    }

    #[test]
    fn mult_matrix_of_zero_vanishes() {
        let t = heisenberg();
        let z = vec![Scalar::zero(); 3];
        assert!(t.mult_matrix(&z, Side::Right).unwrap().is_zero());
        let r = t.mult_matrix(&unit(3, 0), Side::Right).unwrap();
        // R_{e1}(e2) = [e2, e1] = -e3
        assert_eq!(r[(2, 1)], -Scalar::one());
    }

    #[test]
    fn derivation_vector_layout() {
        let v: Vec<Scalar> = (0..4).map(Scalar::from_int).collect();
        let m = derivation_matrix(2, &v).unwrap();
        assert_eq!(m[(1, 0)], Scalar::from_int(2));
        assert!(derivation_matrix(2, &v[..3]).is_err());
    }
}
