//! Dense complex-matrix substrate shared by every other module.

mod norms;
mod operator;
mod spectral;

pub use norms::{fidelity, operator_norm, singular_values, trace_norm};
pub use operator::{permutation_matrix, Mat, Operator, OperatorJson, Vector, C64, I, ONE, ZERO};
pub use spectral::{
    function_of_eigensystem, herm_eigendecompose, matrix_function_on_support,
    HermitianEigensystem, MatrixFunction, Tolerance,
};
