//! Dense complex linear algebra: operator algebra, Kronecker embeddings,
//! column-stacked vectorization, Liouvillian matrices and null spaces.

mod dense;
mod matrix;
mod sparse;
mod superop;

pub use dense::{expm, herm_eig, herm_fn, lu_solve, min_eigenvalue, HERMITIAN_TOL};
pub(crate) use dense::{lu_solve_faer, to_faer};
pub use matrix::{anticommutator, commutator, dag, dissipator, inner, kron, kron_all, norm, ComplexMatrix};
pub(crate) use matrix::{I, ONE, ZERO};
pub use sparse::SparseRows;
pub(crate) use sparse::adjoint_into;
pub use superop::{
    devectorize, liouvillian_matrix, null_space, vec_identity, vectorize, LindbladTerm, SuperOp, KERNEL_TOL,
};

pub use num_complex::Complex64 as C64;
