//! Certified quantum states on multipartite spaces.
//!
//! A [`DensityOperator`] can only be obtained through validation, so every
//! downstream operation may assume the density-operator axioms hold within
//! tolerance. Factors are addressed by index into the ordered dimension list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    herm_eigendecompose, permutation_matrix, HermitianEigensystem, Mat, Operator, OperatorJson,
    Tolerance, Vector, C64, ONE, ZERO,
};

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: Operator,
}

/// Validate `op` against the density-operator axioms.
///
/// Violations are reported separately: [`Error::NotHermitian`],
/// [`Error::NotPositive`] and [`Error::TraceViolation`], each carrying the size
/// of the violation.
pub fn make_density(op: Operator, tol: &Tolerance) -> Result<DensityOperator> {
    if op.row_dims() != op.col_dims() {
        return Err(Error::InvalidFactors(format!(
            "density operator needs matching factors, got {:?} / {:?}",
            op.row_dims(),
            op.col_dims()
        )));
    }
    let eig = herm_eigendecompose(&op, tol)?;
    let min = eig.min_eigenvalue();
    if min < -tol.eigenvalue_cutoff {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    let trace = op.trace().re;
    let violation = (trace - 1.0).abs();
    if violation > tol.trace_tol {
        return Err(Error::TraceViolation { trace, violation });
    }
    Ok(DensityOperator {
        op: op.hermitian_part(),
    })
}

impl DensityOperator {
    pub fn new(op: Operator) -> Result<Self> {
        make_density(op, &Tolerance::default())
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        Self {
            op: Operator::identity(dims).scale_real(1.0 / d as f64),
        }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(Operator::diag(probabilities))
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_op(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn dims(&self) -> &[usize] {
        self.op.row_dims()
    }

    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        Ok(Self {
            op: self.op.with_square_dims(dims)?,
        })
    }

    pub fn eigensystem(&self) -> HermitianEigensystem {
        herm_eigendecompose(&self.op, &Tolerance::default()).expect("certified Hermitian")
    }

    pub fn spectrum(&self) -> Vec<f64> {
        self.eigensystem().eigenvalues
    }

    pub fn purity(&self) -> f64 {
        self.op.inner(&self.op).re
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.eigensystem().rank(tol.eigenvalue_cutoff)
    }

    /// Tensor product; factor lists are concatenated.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            op: self.op.kron(&other.op),
        }
    }

    /// Reduced state on the factors listed in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let reduced = self.op.partial_trace(keep)?;
        make_density(reduced, &Tolerance::default())
    }

    pub fn permute_factors(&self, perm: &[usize]) -> Result<DensityOperator> {
        Ok(DensityOperator {
            op: self.op.permute_factors(perm)?,
        })
    }

    /// Tr(rho X)
    pub fn expectation(&self, x: &Operator) -> C64 {
        (&self.op * x).trace()
    }

    /// U rho U^dagger, re-certified.
    pub fn conjugate_by(&self, u: &Operator) -> Result<DensityOperator> {
        let out = u.conjugate(&self.op).with_square_dims(u.row_dims().to_vec())?;
        make_density(out, &Tolerance::default())
    }
}

/// Normalized state vector tagged with its factor structure.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vector,
    factor_dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vector, factor_dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(amplitudes, factor_dims, &Tolerance::default())
    }

    pub fn with_tolerance(
        amplitudes: Vector,
        factor_dims: Vec<usize>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let d: usize = factor_dims.iter().product();
        if factor_dims.is_empty() || factor_dims.contains(&0) || d != amplitudes.len() {
            return Err(Error::InvalidFactorDims {
                dims: factor_dims,
                extent: amplitudes.len(),
            });
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > tol.trace_tol {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            amplitudes,
            factor_dims,
        })
    }

    pub fn from_amplitudes(amplitudes: &[C64], factor_dims: Vec<usize>) -> Result<Self> {
        Self::new(Vector::from_column_slice(amplitudes), factor_dims)
    }

    /// Computational basis state with flat index `index`.
    pub fn basis(factor_dims: &[usize], index: usize) -> Result<Self> {
        let d: usize = factor_dims.iter().product();
        if index >= d {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut v = Vector::zeros(d);
        v[index] = ONE;
        Self::new(v, factor_dims.to_vec())
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(v: Vector, factor_dims: Vec<usize>) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm_sq: 0.0 });
        }
        Self::new(v / C64::new(n, 0.0), factor_dims)
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// <self|other>
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        PureState {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            factor_dims: dims,
        }
    }

    pub fn projector(&self) -> Operator {
        Operator::outer(&self.amplitudes, &self.amplitudes)
            .with_square_dims(self.factor_dims.clone())
            .expect("dims validated")
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            op: self.projector().hermitian_part(),
        }
    }

    pub fn permute_factors(&self, perm: &[usize]) -> Result<PureState> {
        let p = permutation_matrix(&self.factor_dims, perm)?;
        let dims = perm.iter().map(|&k| self.factor_dims[k]).collect();
        Ok(PureState {
            amplitudes: p * &self.amplitudes,
            factor_dims: dims,
        })
    }
}

/// psi = sum_j c_j |phi_j>_A |chi_j>_B with c_j > 0 descending.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    /// Columns are the |phi_j> on the A side.
    pub left_vectors: Mat,
    /// Columns are the |chi_j> on the B side.
    pub right_vectors: Mat,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Reassemble the state with A factors first, then B factors.
    pub fn reconstruct(&self) -> Vector {
        let da = self.left_vectors.nrows();
        let db = self.right_vectors.nrows();
        let mut v = Vector::zeros(da * db);
        for (j, &c) in self.coefficients.iter().enumerate() {
            let term = self
                .left_vectors
                .column(j)
                .kronecker(&self.right_vectors.column(j));
            v += term * C64::new(c, 0.0);
        }
        v
    }
}

/// Schmidt decomposition across the cut `A = left`, `B = complement`.
pub fn schmidt(psi: &PureState, left: &[usize]) -> Result<SchmidtDecomposition> {
    let n = psi.factor_dims.len();
    if n < 2 {
        return Err(Error::InvalidFactors(
            "Schmidt decomposition needs at least two factors".into(),
        ));
    }
    if left.is_empty() || left.len() >= n || left.iter().any(|&k| k >= n) {
        return Err(Error::InvalidFactors(format!(
            "invalid bipartition {left:?} of {n} factors"
        )));
    }
    let mut perm: Vec<usize> = left.to_vec();
    perm.extend((0..n).filter(|k| !left.contains(k)));
    let reordered = psi.permute_factors(&perm)?;
    let left_dims: Vec<usize> = left.iter().map(|&k| psi.factor_dims[k]).collect();
    let right_dims: Vec<usize> = perm[left.len()..]
        .iter()
        .map(|&k| psi.factor_dims[k])
        .collect();
    let da: usize = left_dims.iter().product();
    let db: usize = right_dims.iter().product();
    let c = Mat::from_fn(da, db, |i, mu| reordered.amplitudes[i * db + mu]);
    let svd = c.svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let cutoff = Tolerance::default().eigenvalue_cutoff;
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&k| svd.singular_values[k] > cutoff)
        .collect();
    let coefficients = kept.iter().map(|&k| svd.singular_values[k]).collect();
    let left_vectors = Mat::from_fn(da, kept.len(), |i, j| u[(i, kept[j])]);
    let right_vectors = Mat::from_fn(db, kept.len(), |mu, j| v_t[(kept[j], mu)]);
    Ok(SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
        left_dims,
        right_dims,
    })
}

/// Sum_i |i>|i> on `d ⊗ d`, optionally scaled by 1/sqrt(d).
pub fn max_entangled(d: usize, normalize: bool) -> Result<Vector> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let amp = if normalize {
        C64::new(1.0 / (d as f64).sqrt(), 0.0)
    } else {
        ONE
    };
    let mut v = Vector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    Ok(v)
}

/// Normalized maximally entangled state as a [`PureState`].
pub fn max_entangled_state(d: usize) -> Result<PureState> {
    PureState::new(max_entangled(d, true)?, vec![d, d])
}

/// Pure state on `dims(rho) ⊗ rank(rho)` whose ancilla marginal is `rho`.
pub fn purify(rho: &DensityOperator) -> PureState {
    let tol = Tolerance::default();
    let eig = rho.eigensystem();
    let rank = eig.rank(tol.eigenvalue_cutoff).max(1);
    let d = rho.dim();
    let mut v = Vector::from_element(d * rank, ZERO);
    for k in 0..rank {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        for i in 0..d {
            v[i * rank + k] = eig.eigenvectors[(i, k)] * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(rank);
    PureState::normalized(v, dims).expect("weights sum to the trace")
}

/// File form of a state: the operator schema plus a `kind` tag. Pure states
/// are stored as a single column.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateJson {
    Density(OperatorJson),
    Pure(OperatorJson),
}

impl From<&DensityOperator> for StateJson {
    fn from(rho: &DensityOperator) -> Self {
        StateJson::Density(rho.op.clone().into())
    }
}

impl From<&PureState> for StateJson {
    fn from(psi: &PureState) -> Self {
        let col = Operator::new(
            Mat::from_column_slice(psi.dim(), 1, psi.amplitudes.as_slice()),
            psi.factor_dims.clone(),
            vec![1],
        )
        .expect("dims validated");
        StateJson::Pure(col.into())
    }
}

impl StateJson {
    /// Load as a density operator (pure states become projectors).
    pub fn into_density(self) -> Result<DensityOperator> {
        match self {
            StateJson::Density(json) => DensityOperator::new(Operator::try_from(json)?),
            StateJson::Pure(json) => {
                let op = Operator::try_from(json)?;
                if op.cols() != 1 {
                    return Err(Error::Serialization("pure state must be one column".into()));
                }
                let v = op.matrix().column(0).into_owned();
                Ok(PureState::new(v, op.row_dims().to_vec())?.density())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;
    use crate::random::{random_density, random_pure, seeded_rng};

    fn close(a: &Operator, b: &Operator) -> f64 {
        operator_norm(&(a - b))
    }

    #[test]
    fn make_density_certifies_and_reports() {
        let tol = Tolerance::default();
        let mixed = make_density(Operator::identity(&[2]).scale_real(0.5), &tol).unwrap();
        assert_eq!(mixed.spectrum(), vec![0.5, 0.5]);
        assert!(make_density(Operator::diag(&[1.0, 0.0]), &tol).is_ok());
        match make_density(Operator::diag(&[0.6, 0.6]), &tol) {
            Err(Error::TraceViolation { violation, .. }) => {
                assert!((violation - 0.2).abs() < 1e-12)
            }
            other => panic!("expected trace violation, got {other:?}"),
        }
        assert!(matches!(
            make_density(Operator::diag(&[1.5, -0.5]), &tol),
            Err(Error::NotPositive { .. })
        ));
        let skew = Operator::from_real_rows(&[&[0.5, 0.3], &[0.0, 0.5]]);
        assert!(matches!(
            make_density(skew, &tol),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn tensor_of_basis_and_mixed_states() {
        let half = DensityOperator::maximally_mixed(&[2]);
        let both = half.tensor(&half);
        assert_eq!(both.dims(), &[2, 2]);
        assert!(close(both.op(), DensityOperator::maximally_mixed(&[2, 2]).op()) < 1e-15);

        let zero = PureState::basis(&[2], 0).unwrap();
        let one = PureState::basis(&[2], 1).unwrap();
        let prod = zero.density().tensor(&one.density());
        let expected = PureState::basis(&[2, 2], 1).unwrap().density();
        assert!(close(prod.op(), expected.op()) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(3, 2, 2).unwrap();
        let ab = a.tensor(&b);
        assert!(close(ab.partial_trace(&[0]).unwrap().op(), a.op()) < 1e-14);
        assert!(close(ab.partial_trace(&[1]).unwrap().op(), b.op()) < 1e-14);

        let bell = max_entangled_state(2).unwrap().density();
        for keep in [0, 1] {
            let reduced = bell.partial_trace(&[keep]).unwrap();
            assert!(close(reduced.op(), DensityOperator::maximally_mixed(&[2]).op()) < 1e-15);
        }
    }

    #[test]
    fn schmidt_examples() {
        let plus = PureState::normalized(Vector::from_element(2, ONE), vec![2]).unwrap();
        let prod = PureState::basis(&[2], 0).unwrap().tensor(&plus);
        let s = schmidt(&prod, &[0]).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        let bell = max_entangled_state(2).unwrap();
        let s = schmidt(&bell, &[0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.rank(), 2);
        for c in &s.coefficients {
            assert!((c - h).abs() < 1e-12);
        }
        assert!(schmidt(&PureState::basis(&[4], 0).unwrap(), &[0]).is_err());
    }

    #[test]
    fn schmidt_reconstructs_and_matches_reduced_spectra() {
        let psi = random_pure(&[3, 4], &mut seeded_rng(11));
        let s = schmidt(&psi, &[0]).unwrap();
        assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-9);
        let rho_a = psi.density().partial_trace(&[0]).unwrap().spectrum();
        let rho_b = psi.density().partial_trace(&[1]).unwrap().spectrum();
        for (j, c) in s.coefficients.iter().enumerate() {
            assert!((c * c - rho_a[j]).abs() < 1e-9);
            assert!((c * c - rho_b[j]).abs() < 1e-9);
        }
        let sq: f64 = s.coefficients.iter().map(|c| c * c).sum();
        assert!((sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_across_non_contiguous_cut() {
        let psi = random_pure(&[2, 3, 2], &mut seeded_rng(4));
        let s = schmidt(&psi, &[0, 2]).unwrap();
        let reordered = psi.permute_factors(&[0, 2, 1]).unwrap();
        assert!((s.reconstruct() - reordered.amplitudes()).norm() < 1e-9);
    }

    #[test]
    fn max_entangled_variants() {
        let g1 = max_entangled(1, false).unwrap();
        assert_eq!(g1.as_slice(), &[ONE]);
        let bell = max_entangled(2, true).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell[0].re - h).abs() < 1e-15 && (bell[3].re - h).abs() < 1e-15);
        for d in 1..6 {
            let g = max_entangled(d, false).unwrap();
            assert!((g.dotc(&g).re - d as f64).abs() < 1e-15);
        }
        assert!(max_entangled(0, true).is_err());
    }

    #[test]
    fn purification_round_trips() {
        let pure = PureState::basis(&[3], 1).unwrap();
        let p = purify(&pure.density());
        assert_eq!(p.factor_dims(), &[3, 1]);

        let mixed = DensityOperator::maximally_mixed(&[2]);
        let p = purify(&mixed);
        assert_eq!(p.factor_dims(), &[2, 2]);
        let back = p.density().partial_trace(&[0]).unwrap();
        assert!(close(back.op(), mixed.op()) < 1e-9);

        let rho = random_density(4, 3, 5).unwrap();
        let p = purify(&rho);
        assert_eq!(p.factor_dims(), &[4, 3]);
        let back = p.density().partial_trace(&[0]).unwrap();
        assert!(close(back.op(), rho.op()) < 1e-9);
    }

    #[test]
    fn rank_one_random_density_is_pure() {
        let rho = random_density(4, 1, 12).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_json_round_trip() {
        let rho = random_density(2, 2, 6).unwrap();
        let text = serde_json::to_string(&StateJson::from(&rho)).unwrap();
        assert!(text.contains("\"kind\":\"density\""));
        let back: StateJson = serde_json::from_str(&text).unwrap();
        assert!(close(back.into_density().unwrap().op(), rho.op()) < 1e-15);

        let psi = max_entangled_state(2).unwrap();
        let text = serde_json::to_string(&StateJson::from(&psi)).unwrap();
        assert!(text.contains("\"kind\":\"pure\""));
        let back: StateJson = serde_json::from_str(&text).unwrap();
        assert!(close(back.into_density().unwrap().op(), psi.density().op()) < 1e-15);
    }
}
