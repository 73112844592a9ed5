//! Reversing channels: the Petz map and the rotated (universal) recovery map.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{KrausChannel, KrausMap};
use crate::entropy::{relative_entropy, EntropyConfig};
use crate::error::{Error, Result};
use crate::linalg::{
    fidelity, herm_eigendecompose, operator_norm, trace_norm, HermitianEigensystem, Mat, Operator,
    Tolerance, Vector, C64, ZERO,
};
use crate::random::{random_density_with, random_pure, seeded_rng};
use crate::states::DensityOperator;

/// Largest in/out dimension for which the universal recovery map is
/// assembled as an explicit Kraus channel.
pub const MATERIALIZE_MAX_DIM: usize = 8;

/// `beta_0(t) = (pi/2) / (cosh(pi t) + 1)`, a probability density on the real line.
pub fn beta0(t: f64) -> f64 {
    0.5 * PI / ((PI * t).cosh() + 1.0)
}

/// `int_{-T}^{T} beta_0 = tanh(pi T / 2)`
pub fn beta0_mass(truncation: f64) -> f64 {
    (0.5 * PI * truncation).tanh()
}

/// Composite Gauss-Legendre rule on `[-T, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub truncation: f64,
    edges: Vec<f64>,
    order: usize,
}

impl Default for QuadratureGrid {
    /// T = 12, panels `[-12, -2], [-2, 2], [2, 12]` of 43 nodes each (129 in total).
    fn default() -> Self {
        Self::new(12.0, 43).expect("valid default grid")
    }
}

impl QuadratureGrid {
    /// Three panels `[-T, -c], [-c, c], [c, T]` with `c = min(2, T/3)`.
    pub fn new(truncation: f64, order: usize) -> Result<Self> {
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid needs T > 0, got {truncation}"
            )));
        }
        let c = (truncation / 3.0).min(2.0);
        Self::composite(&[-truncation, -c, c, truncation], order)
    }

    /// Gauss-Legendre rule of `order` nodes on each interval between
    /// consecutive `edges`, which must be increasing and symmetric.
    pub fn composite(edges: &[f64], order: usize) -> Result<Self> {
        if edges.len() < 2 || edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidArgument(format!(
                "panel edges must be increasing: {edges:?}"
            )));
        }
        let rule = GaussLegendre::new(order)
            .map_err(|e| Error::InvalidArgument(format!("Gauss-Legendre order {order}: {e}")))?;
        let mut pairs = Vec::with_capacity((edges.len() - 1) * order);
        for w in edges.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for &(x, wt) in rule.as_node_weight_pairs() {
                pairs.push((mid + half * x, half * wt));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let grid = Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            truncation: edges[edges.len() - 1],
            edges: edges.to_vec(),
            order,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Same panels with twice the nodes per panel.
    pub fn refined(&self) -> Result<Self> {
        Self::composite(&self.edges, 2 * self.order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_k w_k beta_0(t_k)`
    pub fn mass(&self) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * beta0(t))
            .sum()
    }

    /// `1 - tanh(pi T / 2)`
    pub fn tail_mass(&self) -> f64 {
        1.0 - beta0_mass(self.truncation)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let symmetric = (0..n).all(|k| (self.nodes[k] + self.nodes[n - 1 - k]).abs() < 1e-12);
        if !symmetric {
            return Err(Error::InvalidArgument("grid nodes are not symmetric".into()));
        }
        let mass = self.mass();
        if mass < 1.0 - 1e-6 {
            return Err(Error::QuadratureMass { mass });
        }
        Ok(())
    }

    /// `(t_k, w_k beta_0(t_k))`
    pub fn weighted(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| (t, w * beta0(t)))
    }
}

/// Kraus operators `sqrt(s_k) |k><q_j|` sending the kernel of N(sigma) to sigma.
fn kernel_completion(
    sigma: &HermitianEigensystem,
    out: &HermitianEigensystem,
    cutoff: f64,
) -> Vec<Operator> {
    let mut kraus = Vec::new();
    for (j, &mu) in out.eigenvalues.iter().enumerate() {
        if mu > cutoff {
            continue;
        }
        let q = out.eigenvector(j);
        for (k, &s) in sigma.eigenvalues.iter().enumerate() {
            if s <= cutoff {
                continue;
            }
            let v = sigma.eigenvector(k) * C64::new(s.sqrt(), 0.0);
            kraus.push(Operator::outer(&v, &q));
        }
    }
    kraus
}

fn check_support(out: &HermitianEigensystem, x: &Operator, cutoff: f64) -> Result<()> {
    for (j, &mu) in out.eigenvalues.iter().enumerate() {
        if mu <= cutoff {
            let q = out.eigenvector(j);
            let weight = q.dotc(&(x.matrix() * &q)).re;
            if weight > cutoff {
                return Err(Error::SupportViolation { index: j, weight });
            }
        }
    }
    Ok(())
}

fn finish_channel(kraus: Vec<Operator>, in_dim: usize, out_dim: usize) -> Result<KrausChannel> {
    let map = KrausMap::new(kraus, in_dim, out_dim)?;
    let map = if map.len() > in_dim * out_dim {
        map.canonicalize(&Tolerance::default())?
    } else {
        map
    };
    map.into_channel()
}

/// `P(X) = sigma^{1/2} N^dagger[N(sigma)^{-1/2} X N(sigma)^{-1/2}] sigma^{1/2}`
#[derive(Clone, Debug)]
pub struct PetzMap {
    sigma: DensityOperator,
    forward: KrausChannel,
    sigma_sqrt: Operator,
    out_inv_sqrt: Operator,
    out_eig: HermitianEigensystem,
    raw: KrausMap,
    channel: KrausChannel,
    tol: Tolerance,
}

pub fn petz_map(sigma: &DensityOperator, ch: &KrausChannel) -> Result<PetzMap> {
    if sigma.dim() != ch.in_dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.in_dim(),
            got: sigma.dim(),
        });
    }
    let tol = Tolerance::default();
    let cutoff = tol.eigenvalue_cutoff;
    let sigma_eig = sigma.eigensystem();
    let sigma_sqrt = sigma_eig.map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let out = ch.apply_op(sigma.op())?;
    let out_eig = herm_eigendecompose(&out, &tol)?;
    let out_inv_sqrt = out_eig.map(|l| {
        if l > cutoff {
            C64::new(l.powf(-0.5), 0.0)
        } else {
            ZERO
        }
    });
    let raw_kraus: Vec<Operator> = ch
        .kraus()
        .iter()
        .map(|m| {
            Operator::from_matrix(
                sigma_sqrt.matrix() * m.matrix().adjoint() * out_inv_sqrt.matrix(),
            )
        })
        .collect();
    let raw = KrausMap::new(raw_kraus.clone(), ch.out_dim(), ch.in_dim())?;
    let mut full = raw_kraus;
    full.extend(kernel_completion(&sigma_eig, &out_eig, cutoff));
    let channel = finish_channel(full, ch.out_dim(), ch.in_dim())?;
    Ok(PetzMap {
        sigma: sigma.clone(),
        forward: ch.clone(),
        sigma_sqrt,
        out_inv_sqrt,
        out_eig,
        raw,
        channel,
        tol,
    })
}

impl PetzMap {
    pub fn sigma(&self) -> &DensityOperator {
        &self.sigma
    }

    pub fn forward(&self) -> &KrausChannel {
        &self.forward
    }

    pub fn sigma_sqrt(&self) -> &Operator {
        &self.sigma_sqrt
    }

    pub fn out_inv_sqrt(&self) -> &Operator {
        &self.out_inv_sqrt
    }

    /// Kraus operators `sigma^{1/2} M_l^dagger N(sigma)^{-1/2}` alone.
    pub fn raw_map(&self) -> &KrausMap {
        &self.raw
    }

    /// The Petz map completed on the kernel of N(sigma), as a channel.
    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// Projector onto supp N(sigma).
    pub fn output_support(&self) -> Operator {
        self.out_eig.support_projector(self.tol.eigenvalue_cutoff)
    }

    /// `|| Pi (sum K^dagger K) Pi - Pi ||_op` on supp N(sigma) for the raw Kraus set.
    pub fn completeness_residual_on_support(&self) -> f64 {
        let pi = self.output_support();
        let c = self.raw.completeness();
        operator_norm(&(&(&(&pi * &c) * &pi) - &pi))
    }

    /// Apply to a state on the output space, checking supp X ⊆ supp N(sigma).
    pub fn apply(&self, x: &DensityOperator) -> Result<DensityOperator> {
        check_support(&self.out_eig, x.op(), self.tol.eigenvalue_cutoff)?;
        let y = self.raw.apply_op(x.op())?;
        DensityOperator::new(y.with_square_dims(self.sigma.dims().to_vec())?)
    }
}

/// The rotated Petz map averaged against `beta_0`.
#[derive(Clone, Debug)]
pub struct UniversalRecovery {
    in_dim: usize,
    out_dims: Vec<usize>,
    terms: Vec<Operator>,
    out_eig: HermitianEigensystem,
    materialized: Option<KrausChannel>,
    grid: QuadratureGrid,
}

pub fn universal_recovery(
    sigma: &DensityOperator,
    ch: &KrausChannel,
    grid: &QuadratureGrid,
) -> Result<UniversalRecovery> {
    grid.validate()?;
    if sigma.dim() != ch.in_dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.in_dim(),
            got: sigma.dim(),
        });
    }
    let tol = Tolerance::default();
    let cutoff = tol.eigenvalue_cutoff;
    let sigma_eig = sigma.eigensystem();
    let out_eig = herm_eigendecompose(&ch.apply_op(sigma.op())?, &tol)?;
    let adjoints: Vec<Mat> = ch.kraus().iter().map(|m| m.matrix().adjoint()).collect();

    let nodes: Vec<(f64, f64)> = grid.weighted().collect();
    let per_node: Vec<Vec<Operator>> = nodes
        .par_iter()
        .map(|&(t, weight)| {
            let left = sigma_eig.map(|l| {
                if l > cutoff {
                    C64::from_polar(l.sqrt(), -0.5 * t * l.ln())
                } else {
                    ZERO
                }
            });
            let right = out_eig.map(|l| {
                if l > cutoff {
                    C64::from_polar(l.powf(-0.5), 0.5 * t * l.ln())
                } else {
                    ZERO
                }
            });
            let scale = C64::new(weight.sqrt(), 0.0);
            adjoints
                .iter()
                .map(|mdag| {
                    Operator::from_matrix(left.matrix() * mdag * right.matrix() * scale)
                })
                .collect()
        })
        .collect();
    let mut terms: Vec<Operator> = per_node.into_iter().flatten().collect();
    terms.extend(kernel_completion(&sigma_eig, &out_eig, cutoff));

    let (din, dout) = (ch.out_dim(), ch.in_dim());
    let materialized = if din <= MATERIALIZE_MAX_DIM && dout <= MATERIALIZE_MAX_DIM {
        let map = KrausMap::new(terms.clone(), din, dout)?.canonicalize(&tol)?;
        let residual = map.completeness_residual();
        if residual > grid.tail_mass() + 1e-8 {
            return Err(Error::QuadratureMass {
                mass: 1.0 - residual,
            });
        }
        let kraus = map.kraus().to_vec();
        Some(KrausChannel::new(kraus, din, dout)?)
    } else {
        None
    };
    Ok(UniversalRecovery {
        in_dim: din,
        out_dims: sigma.dims().to_vec(),
        terms,
        out_eig,
        materialized,
        grid: grid.clone(),
    })
}

impl UniversalRecovery {
    pub fn channel(&self) -> Option<&KrausChannel> {
        self.materialized.as_ref()
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    fn sum_terms(&self, f: impl Fn(&Operator) -> Mat + Sync + Send) -> Mat {
        let parts: Vec<Mat> = self.terms.par_iter().map(f).collect();
        let mut iter = parts.into_iter();
        let mut acc = iter.next().expect("at least one term");
        for p in iter {
            acc += p;
        }
        acc
    }

    pub fn apply_op(&self, x: &Operator) -> Result<Operator> {
        let d = x.ensure_square()?;
        if d != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                got: d,
            });
        }
        let y = match &self.materialized {
            Some(ch) => ch.apply_op(x)?.into_matrix(),
            None => self.sum_terms(|k| k.matrix() * x.matrix() * k.matrix().adjoint()),
        };
        Operator::square(y, self.out_dims.clone())
    }

    pub fn apply(&self, x: &DensityOperator) -> Result<DensityOperator> {
        check_support(&self.out_eig, x.op(), Tolerance::default().eigenvalue_cutoff)?;
        DensityOperator::new(self.apply_op(x.op())?)
    }

    /// Heisenberg picture `R^dagger[phi]`.
    pub fn adjoint_apply(&self, phi: &Operator) -> Result<Operator> {
        let d: usize = self.out_dims.iter().product();
        if phi.rows() != d || phi.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: phi.rows(),
            });
        }
        let y = match &self.materialized {
            Some(ch) => ch.adjoint().apply_op(phi)?.into_matrix(),
            None => self.sum_terms(|k| k.matrix().adjoint() * phi.matrix() * k.matrix()),
        };
        Ok(Operator::from_matrix(y))
    }
}

/// `D(rho||sigma) - D(N(rho)||N(sigma))`
pub fn recoverability_gap(
    ch: &KrausChannel,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<f64> {
    let before = relative_entropy(rho, sigma, cfg)?;
    let after = relative_entropy(&ch.apply(rho)?, &ch.apply(sigma)?, cfg)?;
    Ok(before - after)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub nodes: usize,
    #[serde(rename = "T")]
    pub truncation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub gap: f64,
    #[serde(rename = "fidelity")]
    pub recovery_fidelity: f64,
    /// `gap + 2 log F`
    pub bound_slack: f64,
    #[serde(rename = "l1_residual")]
    pub trace_distance_residual: f64,
    /// `2 sqrt(gap) - ||rho - R(N(rho))||_1`
    pub fvdg_slack: f64,
    pub grid: GridSummary,
}

impl RecoveryReport {
    /// Tolerance for the fidelity bound: `1e-6` plus the grid tail mass.
    pub fn tolerance(&self) -> f64 {
        1e-6 + (1.0 - beta0_mass(self.grid.truncation))
    }

    pub fn passed(&self) -> bool {
        self.bound_slack >= -self.tolerance() && self.fvdg_slack >= -self.tolerance()
    }
}

pub fn recovery_report(
    ch: &KrausChannel,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    grid: &QuadratureGrid,
    cfg: &EntropyConfig,
) -> Result<RecoveryReport> {
    let recovery = universal_recovery(sigma, ch, grid)?;
    report_with(&recovery, ch, rho, sigma, cfg)
}

/// Report against a prebuilt recovery map.
pub fn report_with(
    recovery: &UniversalRecovery,
    ch: &KrausChannel,
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<RecoveryReport> {
    let gap = recoverability_gap(ch, rho, sigma, cfg)?;
    let recovered = recovery.apply(&ch.apply(rho)?)?;
    let f = fidelity(rho, &recovered)?.min(1.0);
    let residual = trace_norm(&(rho.op() - recovered.op()))?;
    Ok(RecoveryReport {
        gap,
        recovery_fidelity: f,
        bound_slack: gap + 2.0 * cfg.log_base.log(f),
        trace_distance_residual: residual,
        fvdg_slack: 2.0 * gap.max(0.0).sqrt() - residual,
        grid: GridSummary {
            nodes: recovery.grid.len(),
            truncation: recovery.grid.truncation,
        },
    })
}

/// The erasure construction: a code space embedded in `A ⊗ Abar` with the
/// logical information in the first factor of `A = (H1 ⊗ H2) ⊕ H3`.
#[derive(Clone, Debug)]
pub struct ErasureExample {
    pub channel: KrausChannel,
    /// `V : code -> A ⊗ Abar`, factors `[d_A, d_abar]`.
    pub isometry: Operator,
    pub chi: Vector,
    pub sigma: DensityOperator,
    pub petz: PetzMap,
    pub report: ErasureReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErasureReport {
    /// Max over a tomographically complete set of code states of `||rho - P(N(rho))||_1`.
    pub max_residual: f64,
    /// `Tr chi_2` after tracing `Abar` out of `|chi><chi|`.
    pub chi_trace: f64,
    /// Max recoverability gap over random code-state pairs.
    pub max_gap: f64,
    pub code_states: usize,
}

/// Tomographically complete code states: `|a>`, `(|a>+|b>)/√2`, `(|a>+i|b>)/√2`.
pub fn tomographic_states(d: usize) -> Vec<DensityOperator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for a in 0..d {
        out.push(DensityOperator::new(Operator::unit(d, a, a)).expect("basis projector"));
        for b in (a + 1)..d {
            for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut v = Vector::zeros(d);
                v[a] = C64::new(s, 0.0);
                v[b] = phase * s;
                out.push(DensityOperator::new(Operator::outer(&v, &v)).expect("unit vector"));
            }
        }
    }
    out
}

pub fn erasure_example(
    d_code: usize,
    d1: usize,
    d2: usize,
    d3: usize,
    d_abar: usize,
    sigma_spectrum: &[f64],
    seed: u64,
) -> Result<ErasureExample> {
    if d1 != d_code || d_code == 0 {
        return Err(Error::InvalidArgument(format!(
            "d1 = {d1} must equal d_code = {d_code} > 0"
        )));
    }
    if d2 == 0 || d_abar == 0 {
        return Err(Error::InvalidArgument("d2 and d_abar must be positive".into()));
    }
    if sigma_spectrum.len() != d_code || sigma_spectrum.iter().any(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma spectrum must have {d_code} strictly positive entries"
        )));
    }
    let total: f64 = sigma_spectrum.iter().sum();
    let sigma = DensityOperator::diagonal(
        &sigma_spectrum.iter().map(|s| s / total).collect::<Vec<_>>(),
    )?;

    let mut rng = seeded_rng(seed);
    let chi = random_pure(&[d2, d_abar], &mut rng).amplitudes().clone();
    let d_a = d1 * d2 + d3;
    let v = Mat::from_fn(d_a * d_abar, d_code, |row, a| {
        let (big_a, e) = (row / d_abar, row % d_abar);
        if big_a < d1 * d2 && big_a / d2 == a {
            chi[(big_a % d2) * d_abar + e]
        } else {
            ZERO
        }
    });
    let isometry = Operator::new(v, vec![d_a, d_abar], vec![d_code])?;
    let kraus = (0..d_abar)
        .map(|e| {
            Operator::from_matrix(Mat::from_fn(d_a, d_code, |b, a| {
                isometry.get(b * d_abar + e, a)
            }))
        })
        .collect();
    let channel = KrausChannel::new(kraus, d_code, d_a)?;
    let petz = petz_map(&sigma, &channel)?;

    let chi_op = Operator::outer(&chi, &chi).with_square_dims(vec![d2, d_abar])?;
    let chi_trace = chi_op.partial_trace(&[0])?.trace().re;

    let states = tomographic_states(d_code);
    let mut max_residual: f64 = 0.0;
    for rho in &states {
        let back = petz.apply(&channel.apply(rho)?)?;
        max_residual = max_residual.max(trace_norm(&(rho.op() - back.op()))?);
    }
    let cfg = EntropyConfig::default();
    let mut max_gap: f64 = 0.0;
    for _ in 0..10 {
        let rho = random_density_with(d_code, d_code, &mut rng)?;
        let sig = random_density_with(d_code, d_code, &mut rng)?;
        max_gap = max_gap.max(recoverability_gap(&channel, &rho, &sig, &cfg)?.abs());
    }
    Ok(ErasureExample {
        channel,
        isometry,
        chi,
        sigma,
        petz,
        report: ErasureReport {
            max_residual,
            chi_trace,
            max_gap,
            code_states: states.len(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_density, random_unitary};

    #[test]
    fn beta0_integrates_to_one() {
        let grid = QuadratureGrid::default();
        assert_eq!(grid.len(), 129);
        assert!((grid.mass() - beta0_mass(12.0)).abs() < 1e-12);
        assert!((grid.mass() - 1.0).abs() < 1e-6);
        assert!(grid.tail_mass() < 1e-8);
        let fine = grid.refined().unwrap();
        assert_eq!(fine.len(), 258);
        assert!((fine.mass() - grid.mass()).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(matches!(
            QuadratureGrid::new(1.0, 8),
            Err(Error::QuadratureMass { .. })
        ));
    }

    #[test]
    fn petz_inverts_unitary() {
        let mut rng = seeded_rng(3);
        let u = random_unitary(3, &mut rng);
        let ch = KrausChannel::unitary(&u).unwrap();
        let sigma = random_density(3, 3, 4).unwrap();
        let p = petz_map(&sigma, &ch).unwrap();
        for seed in 0..5 {
            let rho = random_density(3, 2, seed).unwrap();
            let back = p.apply(&ch.apply(&rho).unwrap()).unwrap();
            assert!(trace_norm(&(rho.op() - back.op())).unwrap() < 1e-9);
        }
    }

    #[test]
    fn petz_fixes_reference() {
        let mut rng = seeded_rng(13);
        let ch = random_channel(3, 2, 2, &mut rng);
        let sigma = random_density_with(3, 3, &mut rng).unwrap();
        let p = petz_map(&sigma, &ch).unwrap();
        let back = p.apply(&ch.apply(&sigma).unwrap()).unwrap();
        assert!(operator_norm(&(sigma.op() - back.op())) < 1e-8);
        assert!(p.completeness_residual_on_support() < 1e-8);
        assert!(p.channel().map().completeness_residual() < 1e-8);
    }

    #[test]
    fn petz_support_violation() {
        let ch = KrausChannel::new(
            vec![Operator::from_real_rows(&[&[1.0], &[0.0]])],
            1,
            2,
        )
        .unwrap();
        let sigma = DensityOperator::maximally_mixed(&[1]);
        let p = petz_map(&sigma, &ch).unwrap();
        let one = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        assert!(matches!(p.apply(&one), Err(Error::SupportViolation { .. })));
        assert!(p.channel().map().completeness_residual() < 1e-12);
    }

    #[test]
    fn universal_recovery_inverts_unitary() {
        let mut rng = seeded_rng(21);
        let u = random_unitary(2, &mut rng);
        let ch = KrausChannel::unitary(&u).unwrap();
        let sigma = random_density(2, 2, 1).unwrap();
        let r = universal_recovery(&sigma, &ch, &QuadratureGrid::default()).unwrap();
        let rho = random_density(2, 2, 2).unwrap();
        let back = r.apply(&ch.apply(&rho).unwrap()).unwrap();
        assert!(trace_norm(&(rho.op() - back.op())).unwrap() < 1e-6);
    }

    #[test]
    fn universal_bound_on_random_qubit_channel() {
        let mut rng = seeded_rng(17);
        let ch = random_channel(2, 2, 2, &mut rng);
        let sigma = DensityOperator::maximally_mixed(&[2]);
        let rho = random_density_with(2, 2, &mut rng).unwrap();
        let report =
            recovery_report(&ch, &rho, &sigma, &QuadratureGrid::default(), &EntropyConfig::default())
                .unwrap();
        assert!(report.bound_slack >= -1e-6, "{report:?}");
        assert!(report.passed());
    }

    #[test]
    fn lossy_partial_trace() {
        let ch = KrausChannel::partial_trace(&[2, 2], &[0]).unwrap();
        let rho = DensityOperator::diagonal(&[0.7, 0.1, 0.1, 0.1]).unwrap();
        let sigma = DensityOperator::diagonal(&[0.1, 0.6, 0.2, 0.1]).unwrap();
        let report =
            recovery_report(&ch, &rho, &sigma, &QuadratureGrid::default(), &EntropyConfig::default())
                .unwrap();
        assert!(report.gap > 1e-3);
        assert!(report.recovery_fidelity < 1.0 - 1e-6);
        assert!(report.passed());
    }

    #[test]
    fn erasure_example_recovers_exactly() {
        let ex = erasure_example(2, 2, 2, 0, 2, &[0.7, 0.3], 5).unwrap();
        assert!(ex.report.max_residual <= 1e-8, "{:?}", ex.report);
        assert!((ex.report.chi_trace - 1.0).abs() < 1e-12);
        assert!(ex.report.max_gap <= 1e-8);

        let with_h3 = erasure_example(2, 2, 3, 2, 3, &[0.5, 0.5], 6).unwrap();
        assert!(with_h3.report.max_residual <= 1e-8);

        assert!(erasure_example(2, 3, 2, 0, 2, &[0.5, 0.5], 0).is_err());
        assert!(erasure_example(2, 2, 2, 0, 2, &[1.0, 0.0], 0).is_err());
    }

    #[test]
    fn json_shape() {
        let report = RecoveryReport {
            gap: 0.1,
            recovery_fidelity: 0.9,
            bound_slack: 0.0,
            trace_distance_residual: 0.2,
            fvdg_slack: 0.3,
            grid: GridSummary {
                nodes: 129,
                truncation: 12.0,
            },
        };
        let v = serde_json::to_value(&report).unwrap();
        for key in ["gap", "fidelity", "bound_slack", "l1_residual"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["grid"]["nodes"], 129);
        assert_eq!(v["grid"]["T"], 12.0);
    }
}
