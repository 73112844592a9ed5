use super::operator::Operator;
use super::spectral::{matrix_function_on_support, MatrixFunction, Tolerance};
use crate::error::{Error, Result};
use crate::states::DensityOperator;

pub fn singular_values(m: &Operator) -> Vec<f64> {
    m.matrix()
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Tr sqrt(M^dagger M), the sum of singular values.
pub fn trace_norm(m: &Operator) -> Result<f64> {
    m.ensure_square()?;
    Ok(singular_values(m).iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &Operator) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// F(rho, sigma) = || rho^{1/2} sigma^{1/2} ||_1
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let tol = Tolerance::default();
    let a = matrix_function_on_support(rho.op(), MatrixFunction::Sqrt, &tol)?;
    let b = matrix_function_on_support(sigma.op(), MatrixFunction::Sqrt, &tol)?;
    trace_norm(&(&a * &b))
}
