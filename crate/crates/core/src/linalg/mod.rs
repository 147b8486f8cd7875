//! Exact integer linear algebra: dense matrices, normal forms, kernels,
//! cokernels and exact solving over ℤ.

mod abelian;
mod matrix;
mod normal_form;

pub use abelian::{cokernel, FiniteAbelianGroup};
pub use matrix::IntMatrix;
pub use normal_form::{
    column_span_basis, hnf, kernel_basis, rank, row_span_basis, snf, solve_exact, ExactSolver,
    SmithForm,
};
