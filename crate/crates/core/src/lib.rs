//! Exact computations with Leibniz algebras given by structure constants:
//! Gaussian-rational arithmetic, canonical subspaces, series and derivations,
//! the triangular algebras `T(n)`, their solvable extensions, and the
//! normal forms of the extensions of `T(4)`.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod extensions;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod triangular;

pub use algebra::{change_of_basis, BasisChange, Coeff, Residue, Side, StructureTable};
pub use error::{Error, Result};
pub use linalg::{kernel, rref, span, subspace_rel, Matrix, Subspace, SubspaceRelation};
pub use poly::{Monomial, Poly};
pub use scalar::Scalar;
