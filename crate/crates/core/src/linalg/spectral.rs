use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::operator::{Mat, Operator, Vector, C64, ZERO};
use crate::error::{Error, Result};

/// Numerical thresholds shared by every module.
///
/// `eigenvalue_cutoff` defines the support of a positive operator: eigenvalues
/// at or below it are treated as exact zeros by every pseudo-function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eigenvalue_cutoff: f64,
    pub hermiticity_tol: f64,
    pub trace_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eigenvalue_cutoff: 1e-10,
            hermiticity_tol: 1e-9,
            trace_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eigenvalue_cutoff: f64, hermiticity_tol: f64, trace_tol: f64) -> Result<Self> {
        let t = Self {
            eigenvalue_cutoff,
            hermiticity_tol,
            trace_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.eigenvalue_cutoff) && ok(self.hermiticity_tol) && ok(self.trace_tol) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "tolerances must be strictly positive: {self:?}"
            )))
        }
    }
}

/// Spectral data of a Hermitian operator, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector for `eigenvalues[i]`.
    pub eigenvectors: Mat,
    pub source_dim: usize,
    dims: Vec<usize>,
}

impl HermitianEigensystem {
    pub fn eigenvector(&self, i: usize) -> Vector {
        self.eigenvectors.column(i).into_owned()
    }

    /// Sum_i f(lambda_i) |v_i><v_i|.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> Operator {
        let d = self.source_dim;
        let mut scaled = self.eigenvectors.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for r in 0..d {
                scaled[(r, k)] *= w;
            }
        }
        let mat = scaled * self.eigenvectors.adjoint();
        Operator::square(mat, self.dims.clone()).expect("dims checked at construction")
    }

    pub fn reconstruct(&self) -> Operator {
        self.map(|l| C64::new(l, 0.0))
    }

    /// Projector onto eigenvectors with eigenvalue strictly above `cutoff`.
    pub fn support_projector(&self, cutoff: f64) -> Operator {
        self.map(|l| if l > cutoff { C64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn rank(&self, cutoff: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > cutoff).count()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Rotate each column so its first component above `1e-10` in magnitude is
/// real and positive.
pub(crate) fn fix_phases(vectors: &mut Mat) {
    for mut col in vectors.column_iter_mut() {
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-10).copied() {
            let phase = lead.conj() / lead.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// The input is symmetrized as (M + M^dagger)/2 before decomposing; a
/// deviation above `tol.hermiticity_tol` is an error.
pub fn herm_eigendecompose(m: &Operator, tol: &Tolerance) -> Result<HermitianEigensystem> {
    let d = m.ensure_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol.hermiticity_tol {
        return Err(Error::NotHermitian {
            deviation: defect,
            tol: tol.hermiticity_tol,
        });
    }
    if defect > 0.0 {
        log::trace!("symmetrizing operator with hermiticity defect {defect:.3e}");
    }
    let h = m.hermitian_part();
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = Mat::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    fix_phases(&mut eigenvectors);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
        source_dim: d,
        dims: m.row_dims().to_vec(),
    })
}

/// Scalar functions applied on the support of a positive operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixFunction {
    /// Natural logarithm.
    Log,
    Sqrt,
    Power(f64),
    /// `M^{i t}` on the support; acts as the identity on the kernel.
    ImaginaryPower(f64),
}

impl MatrixFunction {
    fn eval(self, lambda: f64, on_support: bool) -> C64 {
        match (self, on_support) {
            (MatrixFunction::ImaginaryPower(_), false) => C64::new(1.0, 0.0),
            (_, false) => ZERO,
            (MatrixFunction::Log, true) => C64::new(lambda.ln(), 0.0),
            (MatrixFunction::Sqrt, true) => C64::new(lambda.sqrt(), 0.0),
            (MatrixFunction::Power(p), true) => C64::new(lambda.powf(p), 0.0),
            (MatrixFunction::ImaginaryPower(t), true) => C64::from_polar(1.0, t * lambda.ln()),
        }
    }
}

/// Apply `f` to the eigenvalues of a positive operator that lie strictly above
/// the cutoff. Eigenvalues at or below the cutoff are exact zeros of the
/// pseudo-function (the imaginary power acts as identity there).
pub fn matrix_function_on_support(
    m: &Operator,
    f: MatrixFunction,
    tol: &Tolerance,
) -> Result<Operator> {
    let eig = herm_eigendecompose(m, tol)?;
    function_of_eigensystem(&eig, f, tol)
}

pub fn function_of_eigensystem(
    eig: &HermitianEigensystem,
    f: MatrixFunction,
    tol: &Tolerance,
) -> Result<Operator> {
    let min = eig.min_eigenvalue();
    if min < -tol.eigenvalue_cutoff {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    let cutoff = tol.eigenvalue_cutoff;
    Ok(eig.map(|l| f.eval(l, l > cutoff)))
}
