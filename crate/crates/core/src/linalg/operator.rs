use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix tagged with the tensor-factor structure of its
/// output (rows) and input (columns) spaces.
///
/// The arithmetic operators (`+`, `-`, `*`) panic on shape mismatch, as
/// nalgebra does; use [`Operator::compose`] for a checked product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct Operator {
    mat: Mat,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

fn check_dims(dims: &[usize], extent: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != extent
    {
        return Err(Error::InvalidFactorDims {
            dims: dims.to_vec(),
            extent,
        });
    }
    Ok(())
}

impl Operator {
    pub fn new(mat: Mat, row_dims: Vec<usize>, col_dims: Vec<usize>) -> Result<Self> {
        check_dims(&row_dims, mat.nrows())?;
        check_dims(&col_dims, mat.ncols())?;
        Ok(Self {
            mat,
            row_dims,
            col_dims,
        })
    }

    /// Square operator with the same factor structure on both sides.
    pub fn square(mat: Mat, dims: Vec<usize>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Self::new(mat, dims.clone(), dims)
    }

    /// Untagged operator: a single factor on each side.
    pub fn from_matrix(mat: Mat) -> Self {
        let (r, c) = mat.shape();
        assert!(r > 0 && c > 0, "empty operator");
        Self {
            mat,
            row_dims: vec![r],
            col_dims: vec![c],
        }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_matrix(Mat::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_matrix(Mat::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn identity(dims: &[usize]) -> Self {
        let d = dims.iter().product();
        Self {
            mat: Mat::identity(d, d),
            row_dims: dims.to_vec(),
            col_dims: dims.to_vec(),
        }
    }

    pub fn zeros(row_dims: &[usize], col_dims: &[usize]) -> Self {
        let r = row_dims.iter().product();
        let c = col_dims.iter().product();
        Self {
            mat: Mat::zeros(r, c),
            row_dims: row_dims.to_vec(),
            col_dims: col_dims.to_vec(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_matrix(Mat::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// |ket><bra|
    pub fn outer(ket: &Vector, bra: &Vector) -> Self {
        Self::from_matrix(ket * bra.adjoint())
    }

    /// |i><j| on a `dim`-dimensional space.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut mat = Mat::zeros(dim, dim);
        mat[(i, j)] = ONE;
        Self::from_matrix(mat)
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real_rows(&[&[h, h], &[h, -h]])
    }

    /// Retag the factor structure. Fails unless products match the shape.
    pub fn with_dims(mut self, row_dims: Vec<usize>, col_dims: Vec<usize>) -> Result<Self> {
        check_dims(&row_dims, self.mat.nrows())?;
        check_dims(&col_dims, self.mat.ncols())?;
        self.row_dims = row_dims;
        self.col_dims = col_dims;
        Ok(self)
    }

    pub fn with_square_dims(self, dims: Vec<usize>) -> Result<Self> {
        self.with_dims(dims.clone(), dims)
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn into_matrix(self) -> Mat {
        self.mat
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.mat.nrows() == self.mat.ncols()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            mat: self.mat.map(|z| z.conj()),
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            mat: &self.mat * factor,
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Checked product `self * other`.
    pub fn compose(&self, other: &Operator) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                got: other.rows(),
            });
        }
        Ok(Self {
            mat: &self.mat * &other.mat,
            row_dims: self.row_dims.clone(),
            col_dims: other.col_dims.clone(),
        })
    }

    /// `self * x * self^dagger`
    pub fn conjugate(&self, x: &Operator) -> Self {
        let mat = &self.mat * &x.mat * self.mat.adjoint();
        Self {
            mat,
            row_dims: self.row_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    /// Tensor product; factor lists are concatenated.
    pub fn kron(&self, other: &Operator) -> Self {
        let mut row_dims = self.row_dims.clone();
        row_dims.extend_from_slice(&other.row_dims);
        let mut col_dims = self.col_dims.clone();
        col_dims.extend_from_slice(&other.col_dims);
        Self {
            mat: self.mat.kronecker(&other.mat),
            row_dims,
            col_dims,
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Hilbert-Schmidt inner product Tr(self^dagger other).
    pub fn inner(&self, other: &Operator) -> C64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `M - M^dagger`, an upper bound on its operator norm.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// (M + M^dagger) / 2
    pub fn hermitian_part(&self) -> Self {
        Self {
            mat: (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0),
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.mat * v
    }

    /// Partial trace over every factor not listed in `keep`.
    ///
    /// Requires a square operator with identical row and column factor
    /// structure. `keep` is a set of factor indices; the kept factors retain
    /// their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        self.ensure_square()?;
        if self.row_dims != self.col_dims {
            return Err(Error::InvalidFactors(format!(
                "row factors {:?} differ from column factors {:?}",
                self.row_dims, self.col_dims
            )));
        }
        let dims = &self.row_dims;
        let n = dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidFactors("keep set is empty".into()));
        }
        let mut kept = vec![false; n];
        for &k in keep {
            if k >= n {
                return Err(Error::InvalidFactors(format!(
                    "factor index {k} out of range for {n} factors"
                )));
            }
            kept[k] = true;
        }
        if kept.iter().all(|&k| k) {
            return Ok(self.clone());
        }
        let kept_dims: Vec<usize> = (0..n).filter(|&i| kept[i]).map(|i| dims[i]).collect();
        let traced_dims: Vec<usize> = (0..n).filter(|&i| !kept[i]).map(|i| dims[i]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        // full index of (kept multi-index, traced multi-index)
        let strides = strides(dims);
        let kept_axes: Vec<usize> = (0..n).filter(|&i| kept[i]).collect();
        let traced_axes: Vec<usize> = (0..n).filter(|&i| !kept[i]).collect();
        let offsets = |axes: &[usize], sub_dims: &[usize], flat: usize| -> usize {
            let mut rem = flat;
            let mut off = 0;
            for (pos, &axis) in axes.iter().enumerate().rev() {
                let d = sub_dims[pos];
                off += (rem % d) * strides[axis];
                rem /= d;
            }
            off
        };
        let kept_off: Vec<usize> = (0..dk)
            .map(|k| offsets(&kept_axes, &kept_dims, k))
            .collect();
        let traced_off: Vec<usize> = (0..dt)
            .map(|t| offsets(&traced_axes, &traced_dims, t))
            .collect();

        let mat = Mat::from_fn(dk, dk, |i, j| {
            traced_off
                .iter()
                .map(|&mu| self.mat[(kept_off[i] + mu, kept_off[j] + mu)])
                .sum()
        });
        Self::square(mat, kept_dims)
    }

    /// Reorder tensor factors: output factor `k` is input factor `perm[k]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Self> {
        self.ensure_square()?;
        if self.row_dims != self.col_dims {
            return Err(Error::InvalidFactors("asymmetric factor structure".into()));
        }
        let p = permutation_matrix(&self.row_dims, perm)?;
        let new_dims: Vec<usize> = perm.iter().map(|&k| self.row_dims[k]).collect();
        let mat = &p * &self.mat * p.transpose();
        Self::square(mat, new_dims)
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Permutation matrix P with P |x_0 ... x_{n-1}> = |x_perm[0] ... x_perm[n-1]>.
pub fn permutation_matrix(dims: &[usize], perm: &[usize]) -> Result<Mat> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::InvalidFactors(format!(
            "{perm:?} is not a permutation of {n} factors"
        )));
    }
    let d: usize = dims.iter().product();
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let new_strides = strides(&new_dims);
    let mut p = Mat::zeros(d, d);
    for idx in 0..d {
        let mut new_idx = 0;
        for (pos, &axis) in perm.iter().enumerate() {
            let digit = (idx / old_strides[axis]) % dims[axis];
            new_idx += digit * new_strides[pos];
        }
        p[(new_idx, idx)] = ONE;
    }
    Ok(p)
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: rhs.col_dims.clone(),
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

/// Wire form: `{re, im, row_dims, col_dims}` with row-major nested arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub row_dims: Vec<usize>,
    pub col_dims: Vec<usize>,
}

impl From<Operator> for OperatorJson {
    fn from(op: Operator) -> Self {
        let (r, c) = op.mat.shape();
        let re = (0..r)
            .map(|i| (0..c).map(|j| op.mat[(i, j)].re).collect())
            .collect();
        let im = (0..r)
            .map(|i| (0..c).map(|j| op.mat[(i, j)].im).collect())
            .collect();
        OperatorJson {
            re,
            im,
            row_dims: op.row_dims,
            col_dims: op.col_dims,
        }
    }
}

impl TryFrom<OperatorJson> for Operator {
    type Error = Error;

    fn try_from(json: OperatorJson) -> Result<Self> {
        let r = json.re.len();
        let c = json.re.first().map_or(0, Vec::len);
        let ragged = json.im.len() != r
            || json.re.iter().any(|row| row.len() != c)
            || json.im.iter().any(|row| row.len() != c);
        if r == 0 || c == 0 || ragged {
            return Err(Error::Serialization(
                "re/im must be non-empty rectangular arrays of equal shape".into(),
            ));
        }
        let mat = Mat::from_fn(r, c, |i, j| C64::new(json.re[i][j], json.im[i][j]));
        Operator::new(mat, json.row_dims, json.col_dims)
    }
}
