//! Completely positive maps in Kraus, Choi and isometric form.
//!
//! The Choi operator uses the reference system as the first factor:
//! `C = sum_ij |i><j| ⊗ N(|i><j|)`, so that Kraus operators read off an
//! eigenvector `phi` as `M[b, i] = phi[i * d_out + b]`.

use serde::{Deserialize, Serialize};

use crate::entropy::{relative_entropy, EntropyConfig, InequalityReport};
use crate::error::{Error, Result};
use crate::linalg::{
    herm_eigendecompose, operator_norm, trace_norm, Mat, Operator, OperatorJson, Tolerance, C64,
    ZERO,
};
use crate::states::DensityOperator;

/// Completeness tolerance for trace preservation.
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// A completely positive map `X -> sum_l K_l X K_l^dagger`, not necessarily
/// trace preserving.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct KrausMap {
    kraus: Vec<Operator>,
    in_dim: usize,
    out_dim: usize,
}

/// Wire form of a Kraus list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub kraus: Vec<OperatorJson>,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl From<KrausMap> for ChannelJson {
    fn from(map: KrausMap) -> Self {
        ChannelJson {
            kraus: map.kraus.into_iter().map(OperatorJson::from).collect(),
            in_dim: map.in_dim,
            out_dim: map.out_dim,
        }
    }
}

impl TryFrom<ChannelJson> for KrausMap {
    type Error = Error;
    fn try_from(json: ChannelJson) -> Result<Self> {
        let kraus = json
            .kraus
            .into_iter()
            .map(Operator::try_from)
            .collect::<Result<Vec<_>>>()?;
        KrausMap::new(kraus, json.in_dim, json.out_dim)
    }
}

impl KrausMap {
    pub fn new(kraus: Vec<Operator>, in_dim: usize, out_dim: usize) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus list".into()));
        }
        for k in &kraus {
            if k.rows() != out_dim {
                return Err(Error::DimensionMismatch {
                    expected: out_dim,
                    got: k.rows(),
                });
            }
            if k.cols() != in_dim {
                return Err(Error::DimensionMismatch {
                    expected: in_dim,
                    got: k.cols(),
                });
            }
        }
        Ok(Self {
            kraus,
            in_dim,
            out_dim,
        })
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    fn out_factors(&self) -> Vec<usize> {
        self.kraus[0].row_dims().to_vec()
    }

    /// Apply to an arbitrary (not necessarily Hermitian) square operator.
    pub fn apply_op(&self, x: &Operator) -> Result<Operator> {
        let d = x.ensure_square()?;
        if d != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                got: d,
            });
        }
        let mut acc = Mat::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            acc += k.matrix() * x.matrix() * k.matrix().adjoint();
        }
        Operator::square(acc, self.out_factors())
    }

    /// `sum_l K_l^dagger K_l`
    pub fn completeness(&self) -> Operator {
        let mut acc = Mat::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            acc += k.matrix().adjoint() * k.matrix();
        }
        Operator::from_matrix(acc)
    }

    /// `|| sum_l K_l^dagger K_l - I ||_op`
    pub fn completeness_residual(&self) -> f64 {
        operator_norm(&(&self.completeness() - &Operator::identity(&[self.in_dim])))
    }

    /// Choi operator with factors `[in_dim, out_dim]`.
    pub fn choi(&self) -> Operator {
        let n = self.in_dim * self.out_dim;
        let mut acc = Mat::zeros(n, n);
        for k in &self.kraus {
            let v = vectorize(k);
            acc += &v * v.adjoint();
        }
        Operator::square(acc, vec![self.in_dim, self.out_dim]).expect("dims match")
    }

    /// Heisenberg-picture map `Y -> sum_l K_l^dagger Y K_l`.
    pub fn adjoint(&self) -> KrausMap {
        KrausMap {
            kraus: self.kraus.iter().map(Operator::dagger).collect(),
            in_dim: self.out_dim,
            out_dim: self.in_dim,
        }
    }

    /// `next ∘ self`, with products `N_j M_l`.
    pub fn then(&self, next: &KrausMap) -> Result<KrausMap> {
        if self.out_dim != next.in_dim {
            return Err(Error::DimensionMismatch {
                expected: next.in_dim,
                got: self.out_dim,
            });
        }
        let mut kraus = Vec::with_capacity(self.len() * next.len());
        for n in &next.kraus {
            for m in &self.kraus {
                kraus.push(n.compose(m)?);
            }
        }
        KrausMap::new(kraus, self.in_dim, next.out_dim)
    }

    /// Equivalent Kraus set with at most `in_dim * out_dim` elements.
    pub fn canonicalize(&self, tol: &Tolerance) -> Result<KrausMap> {
        let mut map = canonical_kraus(&self.choi(), self.in_dim, self.out_dim, tol)?;
        let factors = self.out_factors();
        for k in &mut map.kraus {
            *k = k.clone().with_dims(factors.clone(), vec![self.in_dim])?;
        }
        Ok(map)
    }

    pub fn into_channel(self) -> Result<KrausChannel> {
        KrausChannel::from_map(self)
    }
}

/// vec(K) with index `i * d_out + b` holding `K[b, i]`.
fn vectorize(k: &Operator) -> crate::linalg::Vector {
    let (rows, cols) = (k.rows(), k.cols());
    crate::linalg::Vector::from_fn(rows * cols, |idx, _| k.get(idx % rows, idx / rows))
}

/// Kraus operators from the eigenvectors of a positive Choi operator with
/// eigenvalue above the cutoff.
pub fn canonical_kraus(
    choi: &Operator,
    in_dim: usize,
    out_dim: usize,
    tol: &Tolerance,
) -> Result<KrausMap> {
    let n = choi.ensure_square()?;
    if n != in_dim * out_dim {
        return Err(Error::DimensionMismatch {
            expected: in_dim * out_dim,
            got: n,
        });
    }
    let eig = herm_eigendecompose(choi, tol)?;
    let min = eig.min_eigenvalue();
    if min < -tol.hermiticity_tol {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: min,
        });
    }
    let mut kraus = Vec::new();
    for (l, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= tol.eigenvalue_cutoff {
            break;
        }
        let w = C64::new(lam.sqrt(), 0.0);
        let k = Mat::from_fn(out_dim, in_dim, |b, i| {
            eig.eigenvectors[(i * out_dim + b, l)] * w
        });
        kraus.push(Operator::from_matrix(k));
    }
    if kraus.is_empty() {
        kraus.push(Operator::zeros(&[out_dim], &[in_dim]));
    }
    KrausMap::new(kraus, in_dim, out_dim)
}

/// A certified channel: completeness residual at most `1e-8`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct KrausChannel {
    map: KrausMap,
}

impl From<KrausChannel> for ChannelJson {
    fn from(ch: KrausChannel) -> Self {
        ch.map.into()
    }
}

impl TryFrom<ChannelJson> for KrausChannel {
    type Error = Error;
    fn try_from(json: ChannelJson) -> Result<Self> {
        KrausChannel::from_map(KrausMap::try_from(json)?)
    }
}

impl KrausChannel {
    pub fn new(kraus: Vec<Operator>, in_dim: usize, out_dim: usize) -> Result<Self> {
        Self::from_map(KrausMap::new(kraus, in_dim, out_dim)?)
    }

    pub fn from_map(map: KrausMap) -> Result<Self> {
        let residual = map.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { map })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            map: KrausMap::new(vec![Operator::identity(&[d])], d, d).expect("square"),
        }
    }

    /// `rho -> U rho U^dagger`
    pub fn unitary(u: &Operator) -> Result<Self> {
        let d = u.ensure_square()?;
        let residual = operator_norm(&(&(&u.dagger() * u) - &Operator::identity(&[d])));
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Self::new(vec![Operator::from_matrix(u.matrix().clone())], d, d)
    }

    /// Qubit depolarizing channel `rho -> (1-p) rho + p I/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
        }
        let paulis = [
            Operator::pauli_x(),
            Operator::pauli_y(),
            Operator::pauli_z(),
        ];
        let mut kraus = vec![Operator::identity(&[2]).scale_real((1.0 - 0.75 * p).sqrt())];
        kraus.extend(paulis.iter().map(|s| s.scale_real((p / 4.0).sqrt())));
        Self::new(kraus, 2, 2)
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} outside [0, 1]")));
        }
        let k0 = Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]]);
        let k1 = Operator::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]);
        Self::new(vec![k0, k1], 2, 2)
    }

    /// Trace out every factor of a multipartite input except `keep`.
    pub fn partial_trace(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let d: usize = dims.iter().product();
        let kept: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let d_env: usize = traced.iter().map(|&k| dims[k]).product();
        let d_out: usize = kept.iter().product();
        let mut perm: Vec<usize> = keep.to_vec();
        perm.extend_from_slice(&traced);
        let p = crate::linalg::permutation_matrix(dims, &perm)?;
        let kraus = (0..d_env)
            .map(|e| {
                let m = Mat::from_fn(d_out, d, |o, i| p[(o * d_env + e, i)]);
                Operator::new(m, kept.clone(), vec![d])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kraus, d, d_out)
    }

    pub fn map(&self) -> &KrausMap {
        &self.map
    }

    pub fn into_map(self) -> KrausMap {
        self.map
    }

    pub fn kraus(&self) -> &[Operator] {
        self.map.kraus()
    }

    pub fn in_dim(&self) -> usize {
        self.map.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.map.out_dim
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.map.apply_op(rho.op())?)
    }

    pub fn apply_op(&self, x: &Operator) -> Result<Operator> {
        self.map.apply_op(x)
    }

    pub fn choi(&self) -> ChoiOperator {
        ChoiOperator {
            op: self.map.choi(),
            in_dim: self.in_dim(),
            out_dim: self.out_dim(),
        }
    }

    pub fn adjoint(&self) -> KrausMap {
        self.map.adjoint()
    }

    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        compose(next, self)
    }
}

/// Choi operator of a channel; positive with `Tr_out C = I_in`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiOperator {
    op: Operator,
    in_dim: usize,
    out_dim: usize,
}

impl ChoiOperator {
    pub fn new(op: Operator, in_dim: usize, out_dim: usize, tol: &Tolerance) -> Result<Self> {
        let n = op.ensure_square()?;
        if n != in_dim * out_dim {
            return Err(Error::DimensionMismatch {
                expected: in_dim * out_dim,
                got: n,
            });
        }
        let op = op.with_square_dims(vec![in_dim, out_dim])?;
        let eig = herm_eigendecompose(&op, tol)?;
        let min = eig.min_eigenvalue();
        if min < -tol.hermiticity_tol {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: min,
            });
        }
        let marginal = op.partial_trace(&[0])?;
        let residual = operator_norm(&(&marginal - &Operator::identity(&[in_dim])));
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self {
            op: op.hermitian_part(),
            in_dim,
            out_dim,
        })
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `N(X) = Tr_in[(X^T ⊗ I) C]`
    pub fn apply_op(&self, x: &Operator) -> Result<Operator> {
        let d = x.ensure_square()?;
        if d != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                got: d,
            });
        }
        let (din, dout) = (self.in_dim, self.out_dim);
        let c = self.op.matrix();
        let out = Mat::from_fn(dout, dout, |b, bp| {
            let mut acc = ZERO;
            for i in 0..din {
                for j in 0..din {
                    acc += x.get(i, j) * c[(i * dout + b, j * dout + bp)];
                }
            }
            acc
        });
        Ok(Operator::from_matrix(out))
    }
}

pub fn choi_of(ch: &KrausChannel) -> ChoiOperator {
    ch.choi()
}

/// Choi operator of an arbitrary linear map given as a closure.
pub fn choi_of_linear_map(
    in_dim: usize,
    out_dim: usize,
    f: impl Fn(&Operator) -> Result<Operator>,
) -> Result<Operator> {
    let n = in_dim * out_dim;
    let mut acc = Mat::zeros(n, n);
    for i in 0..in_dim {
        for j in 0..in_dim {
            let image = f(&Operator::unit(in_dim, i, j))?;
            if image.rows() != out_dim || image.cols() != out_dim {
                return Err(Error::DimensionMismatch {
                    expected: out_dim,
                    got: image.rows(),
                });
            }
            for b in 0..out_dim {
                for bp in 0..out_dim {
                    acc[(i * out_dim + b, j * out_dim + bp)] = image.get(b, bp);
                }
            }
        }
    }
    Operator::square(acc, vec![in_dim, out_dim])
}

/// Transpose in the computational basis: positive, not completely positive.
pub fn transpose_map(x: &Operator) -> Result<Operator> {
    Ok(x.transpose())
}

/// Kraus form from the spectral decomposition of a validated Choi operator.
pub fn kraus_from_choi(choi: &ChoiOperator, tol: &Tolerance) -> Result<KrausChannel> {
    canonical_kraus(&choi.op, choi.in_dim, choi.out_dim, tol)?.into_channel()
}

/// Certificate for a candidate Kraus list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CptpCertificate {
    pub completeness_residual: f64,
    pub choi_min_eigenvalue: f64,
    pub trace_preserving: bool,
    pub completely_positive: bool,
    pub passed: bool,
}

pub fn verify_cptp(map: &KrausMap) -> Result<CptpCertificate> {
    let residual = map.completeness_residual();
    let eig = herm_eigendecompose(&map.choi(), &Tolerance::default())?;
    let min = eig.min_eigenvalue();
    let tp = residual <= COMPLETENESS_TOL;
    let cp = min >= -1e-9;
    Ok(CptpCertificate {
        completeness_residual: residual,
        choi_min_eigenvalue: min,
        trace_preserving: tp,
        completely_positive: cp,
        passed: tp && cp,
    })
}

/// Stinespring isometry `V = sum_j M_j ⊗ |e_j>` with factors `[out, env]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometricDilation {
    v: Operator,
    in_dim: usize,
    out_dim: usize,
    env_dim: usize,
}

pub fn dilate(ch: &KrausChannel) -> IsometricDilation {
    let (din, dout, k) = (ch.in_dim(), ch.out_dim(), ch.kraus().len());
    let mat = Mat::from_fn(dout * k, din, |row, a| ch.kraus()[row % k].get(row / k, a));
    IsometricDilation {
        v: Operator::new(mat, vec![dout, k], vec![din]).expect("dims match"),
        in_dim: din,
        out_dim: dout,
        env_dim: k,
    }
}

impl IsometricDilation {
    /// Wrap an isometry `in -> out ⊗ env`.
    pub fn from_isometry(v: Operator, out_dim: usize, env_dim: usize) -> Result<Self> {
        let cols = v.cols();
        let v = v.with_dims(vec![out_dim, env_dim], vec![cols])?;
        let d = v.cols();
        let residual = operator_norm(&(&(&v.dagger() * &v) - &Operator::identity(&[d])));
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotIsometry { residual });
        }
        Ok(Self {
            v,
            in_dim: d,
            out_dim,
            env_dim,
        })
    }

    pub fn isometry(&self) -> &Operator {
        &self.v
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// `|| V^dagger V - I ||_op`
    pub fn isometry_residual(&self) -> f64 {
        operator_norm(&(&(&self.v.dagger() * &self.v) - &Operator::identity(&[self.in_dim])))
    }

    /// `V V^dagger`, a projector on `out ⊗ env`.
    pub fn range_projector(&self) -> Operator {
        &self.v * &self.v.dagger()
    }

    /// `|| P^2 - P ||_op` for `P = V V^dagger`.
    pub fn idempotency_residual(&self) -> f64 {
        let p = self.range_projector();
        operator_norm(&(&(&p * &p) - &p))
    }

    /// `Tr_env[V X V^dagger]`
    pub fn apply_op(&self, x: &Operator) -> Result<Operator> {
        self.v.compose(x)?.compose(&self.v.dagger())?.partial_trace(&[0])
    }

    /// `Tr_out[V X V^dagger]`
    pub fn complementary_op(&self, x: &Operator) -> Result<Operator> {
        self.v.compose(x)?.compose(&self.v.dagger())?.partial_trace(&[1])
    }

    /// Kraus operators `(I ⊗ <e_j|) V`.
    pub fn channel(&self) -> Result<KrausChannel> {
        let k = self.env_dim;
        let kraus = (0..k)
            .map(|j| {
                Operator::from_matrix(Mat::from_fn(self.out_dim, self.in_dim, |b, a| {
                    self.v.get(b * k + j, a)
                }))
            })
            .collect();
        KrausChannel::new(kraus, self.in_dim, self.out_dim)
    }
}

/// `N_j = sum_i W_ij M_i` for a unitary `W`; the channel is unchanged.
pub fn rotate_kraus(ch: &KrausChannel, w: &Operator) -> Result<KrausChannel> {
    let k = ch.kraus().len();
    let n = w.ensure_square()?;
    if n != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: n,
        });
    }
    let residual = operator_norm(&(&(&w.dagger() * w) - &Operator::identity(&[k])));
    if residual > COMPLETENESS_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let rotated = (0..k)
        .map(|j| {
            let mut acc = Mat::zeros(ch.out_dim(), ch.in_dim());
            for (i, m) in ch.kraus().iter().enumerate() {
                acc += m.matrix() * w.get(i, j);
            }
            Operator::from_matrix(acc)
        })
        .collect();
    KrausChannel::new(rotated, ch.in_dim(), ch.out_dim())
}

pub fn adjoint(ch: &KrausChannel) -> KrausMap {
    ch.adjoint()
}

/// `second ∘ first`, canonicalized through the Choi operator when the
/// product list exceeds `d_in * d_out` elements.
pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
    let product = first.map.then(&second.map)?;
    let product = if product.len() > product.in_dim * product.out_dim {
        product.canonicalize(&Tolerance::default())?
    } else {
        product
    };
    product.into_channel()
}

/// `rho -> U(rho) rho U(rho)^dagger` with `U = exp(i pi Tr[X rho] X)`.
///
/// Each output is a valid state, yet the assignment is not linear in rho.
pub fn nonlinear_counterexample(rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let x = Operator::pauli_x();
    let t = rho.expectation(&x).re;
    let theta = std::f64::consts::PI * t;
    let u = &Operator::identity(&[2]).scale_real(theta.cos()) + &x.scale(C64::new(0.0, theta.sin()));
    DensityOperator::new(u.conjugate(rho.op()))
}

/// `|| E(p a + (1-p) b) - p E(a) - (1-p) E(b) ||_1` for a state map `E`.
pub fn linearity_defect(
    map: impl Fn(&DensityOperator) -> Result<DensityOperator>,
    a: &DensityOperator,
    b: &DensityOperator,
    p: f64,
) -> Result<f64> {
    let mix = DensityOperator::new(&a.op().scale_real(p) + &b.op().scale_real(1.0 - p))?;
    let lhs = map(&mix)?;
    let rhs = &map(a)?.op().scale_real(p) + &map(b)?.op().scale_real(1.0 - p);
    trace_norm(&(lhs.op() - &rhs))
}

/// `D(N(rho) || N(sigma)) <= D(rho || sigma)`
pub fn monotonicity_audit(
    ch: &KrausChannel,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<InequalityReport> {
    let before = relative_entropy(rho, sigma, cfg)?;
    let after = relative_entropy(&ch.apply(rho)?, &ch.apply(sigma)?, cfg)?;
    Ok(InequalityReport::at_most(
        "relative_entropy_monotonicity",
        after,
        before,
    ))
}

/// Eigenvalue `-1` of the transpose Choi operator (the swap) as a witness.
pub fn transpose_witness(d: usize) -> Result<f64> {
    let c = choi_of_linear_map(d, d, transpose_map)?;
    Ok(herm_eigendecompose(&c, &Tolerance::default())?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_density, random_unitary, seeded_rng};
    use crate::linalg::ONE;
    use crate::states::PureState;

    fn op_close(a: &Operator, b: &Operator) -> f64 {
        operator_norm(&(a - b))
    }

    #[test]
    fn identity_choi_is_unnormalized_bell_projector() {
        let c = KrausChannel::identity(2).choi();
        let expected = Operator::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ]);
        assert!(op_close(c.op(), &expected) < 1e-15);
    }

    #[test]
    fn transpose_choi_is_swap_with_negative_eigenvalue() {
        let c = choi_of_linear_map(2, 2, transpose_map).unwrap();
        let swap = Operator::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(op_close(&c, &swap) < 1e-15);
        assert!((transpose_witness(2).unwrap() + 1.0).abs() < 1e-12);
        assert!(matches!(
            ChoiOperator::new(c, 2, 2, &Tolerance::default()),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn duplicated_identity_fails_certificate() {
        let map = KrausMap::new(
            vec![Operator::identity(&[2]), Operator::identity(&[2])],
            2,
            2,
        )
        .unwrap();
        let cert = verify_cptp(&map).unwrap();
        assert!(!cert.passed && !cert.trace_preserving && cert.completely_positive);
        assert!((cert.completeness_residual - 1.0).abs() < 1e-12);
        assert!(matches!(
            map.into_channel(),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn choi_kraus_roundtrip_matches_on_states() {
        let tol = Tolerance::default();
        let mut rng = seeded_rng(12);
        for (din, dout, k) in [(2, 2, 3), (3, 2, 2), (2, 4, 5)] {
            let ch = random_channel(din, dout, k, &mut rng);
            let back = kraus_from_choi(&ch.choi(), &tol).unwrap();
            assert!(back.kraus().len() <= din * dout);
            let rho = random_density(din, din, 3).unwrap();
            let a = ch.apply(&rho).unwrap();
            let b = back.apply(&rho).unwrap();
            assert!(trace_norm(&(a.op() - b.op())).unwrap() < 1e-9);
            let via_choi = ch.choi().apply_op(rho.op()).unwrap();
            assert!(op_close(&via_choi, a.op()) < 1e-12);
        }
    }

    #[test]
    fn dilation_is_isometric_and_reproduces_channel() {
        let mut rng = seeded_rng(31);
        let ch = random_channel(3, 2, 4, &mut rng);
        let dil = dilate(&ch);
        assert!(dil.isometry_residual() < 1e-10);
        assert!(dil.idempotency_residual() < 1e-10);
        let rho = random_density(3, 2, 4).unwrap();
        let direct = ch.apply(&rho).unwrap();
        let via = dil.apply_op(rho.op()).unwrap();
        assert!(trace_norm(&(direct.op() - &via)).unwrap() < 1e-10);
        let back = dil.channel().unwrap();
        assert_eq!(back.kraus().len(), 4);
    }

    #[test]
    fn unitary_mixing_preserves_channel() {
        let mut rng = seeded_rng(5);
        let ch = random_channel(2, 3, 3, &mut rng);
        let w = random_unitary(3, &mut rng);
        let rotated = rotate_kraus(&ch, &w).unwrap();
        assert!(op_close(ch.choi().op(), rotated.choi().op()) < 1e-10);
        let bad = Operator::diag(&[1.0, 2.0, 1.0]);
        assert!(matches!(rotate_kraus(&ch, &bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn adjoint_duality() {
        let mut rng = seeded_rng(8);
        let ch = random_channel(3, 2, 3, &mut rng);
        let rho = random_density(3, 3, 1).unwrap();
        let y = crate::random::random_hermitian(2, &mut rng);
        let lhs = ch.apply(&rho).unwrap().expectation(&y);
        let rhs = rho.expectation(&ch.adjoint().apply_op(&y).unwrap());
        assert!((lhs - rhs).norm() < 1e-12);
        let unital = ch.adjoint().apply_op(&Operator::identity(&[2])).unwrap();
        assert!(op_close(&unital, &Operator::identity(&[3])) < 1e-10);
    }

    #[test]
    fn composition_is_canonicalized() {
        let mut rng = seeded_rng(9);
        let a = random_channel(2, 2, 4, &mut rng);
        let b = random_channel(2, 2, 4, &mut rng);
        let ab = compose(&b, &a).unwrap();
        assert!(ab.kraus().len() <= 4);
        let rho = random_density(2, 2, 6).unwrap();
        let seq = b.apply(&a.apply(&rho).unwrap()).unwrap();
        assert!(trace_norm(&(seq.op() - ab.apply(&rho).unwrap().op())).unwrap() < 1e-10);
    }

    #[test]
    fn partial_trace_channel() {
        let ch = KrausChannel::partial_trace(&[2, 3], &[1]).unwrap();
        let rho = random_density(6, 4, 2).unwrap().with_dims(vec![2, 3]).unwrap();
        let direct = rho.partial_trace(&[1]).unwrap();
        let via = ch.apply_op(rho.op()).unwrap();
        assert!(op_close(direct.op(), &via) < 1e-12);
    }

    #[test]
    fn nonlinear_map_is_state_valued_but_not_linear() {
        let zero = PureState::basis(&[2], 0).unwrap().density();
        let one = PureState::basis(&[2], 1).unwrap().density();
        let plus = PureState::normalized(
            crate::linalg::Vector::from_element(2, ONE),
            vec![2],
        )
        .unwrap()
        .density();
        let rho2 = DensityOperator::new(&zero.op().scale_real(0.5) + &plus.op().scale_real(0.5))
            .unwrap();
        let image = nonlinear_counterexample(&rho2).unwrap();
        let expected = Operator::pauli_x().conjugate(rho2.op());
        assert!(op_close(image.op(), &expected) < 1e-12);

        // the diagonal decomposition of I/2 happens to be consistent
        let d1 = linearity_defect(nonlinear_counterexample, &zero, &one, 0.5).unwrap();
        assert!(d1 < 1e-12);
        let d2 = linearity_defect(nonlinear_counterexample, &zero, &plus, 0.5).unwrap();
        assert!((d2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channel_json_roundtrip() {
        let ch = KrausChannel::amplitude_damping(0.3).unwrap();
        let text = serde_json::to_string(&ch).unwrap();
        let back: KrausChannel = serde_json::from_str(&text).unwrap();
        assert_eq!(ch, back);
        let bad = r#"{"kraus":[{"re":[[1,0],[0,1]],"im":[[0,0],[0,0]],"row_dims":[2],"col_dims":[2]},{"re":[[1,0],[0,1]],"im":[[0,0],[0,0]],"row_dims":[2],"col_dims":[2]}],"in_dim":2,"out_dim":2}"#;
        assert!(serde_json::from_str::<KrausChannel>(bad).is_err());
        assert!(serde_json::from_str::<KrausMap>(bad).is_ok());
    }

    #[test]
    fn standard_channels_are_cptp() {
        for ch in [
            KrausChannel::depolarizing(0.4).unwrap(),
            KrausChannel::amplitude_damping(0.7).unwrap(),
        ] {
            assert!(verify_cptp(ch.map()).unwrap().passed);
        }
    }
}
