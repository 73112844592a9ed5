//! A desk-scale code embedding `J : a ⊗ ā -> A ⊗ Ā`, its wedge channel, and
//! operator reconstruction through the universal recovery map.
//!
//! The relative-entropy mismatch ε between bulk and boundary is measured on
//! probe states in bits, so that `δ1 = 2√ε` and `δ2 = √(2 ln 2 · ε)`.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{KrausChannel, KrausMap};
use crate::entropy::{relative_entropy, EntropyConfig};
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, trace_norm, Mat, Operator, Tolerance, C64, ZERO};
use crate::random::{random_density_with, random_isometry, random_unitary, seeded_rng, substream};
use crate::recovery::{universal_recovery, QuadratureGrid, UniversalRecovery};
use crate::states::DensityOperator;

/// Slack allowed on every inequality of the bound chain.
pub const CHAIN_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoloDims {
    pub a: usize,
    pub abar: usize,
    pub big_a: usize,
    pub big_abar: usize,
}

impl Default for HoloDims {
    fn default() -> Self {
        Self {
            a: 2,
            abar: 2,
            big_a: 4,
            big_abar: 4,
        }
    }
}

impl HoloDims {
    pub fn from_slice(dims: &[usize]) -> Result<Self> {
        match dims {
            &[a, abar, big_a, big_abar] => Ok(Self {
                a,
                abar,
                big_a,
                big_abar,
            }),
            _ => Err(Error::InvalidArgument(format!(
                "expected four dims d_a,d_abar,d_A,d_Abar; got {dims:?}"
            ))),
        }
    }

    pub fn code_dim(&self) -> usize {
        self.a * self.abar
    }

    pub fn boundary_dim(&self) -> usize {
        self.big_a * self.big_abar
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    ProductWedge,
    RandomIsometry,
}

impl std::str::FromStr for EmbeddingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" | "product_wedge" | "product-wedge" => Ok(Self::ProductWedge),
            "random" | "random_isometry" | "random-isometry" => Ok(Self::RandomIsometry),
            other => Err(Error::InvalidArgument(format!("unknown embedding kind {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CodeEmbedding {
    /// Factors `[d_A, d_Abar]` by `[d_a, d_abar]`.
    pub j: Operator,
    pub dims: HoloDims,
    pub kind: EmbeddingKind,
    pub sigma_abar: DensityOperator,
    pub sigma_a: DensityOperator,
}

pub fn build_embedding(kind: EmbeddingKind, dims: HoloDims, seed: u64) -> Result<CodeEmbedding> {
    let HoloDims {
        a,
        abar,
        big_a,
        big_abar,
    } = dims;
    if [a, abar, big_a, big_abar].contains(&0) {
        return Err(Error::InvalidArgument("dims must be positive".into()));
    }
    if dims.code_dim() > dims.boundary_dim() {
        return Err(Error::InvalidArgument(format!(
            "code dimension {} exceeds boundary dimension {}",
            dims.code_dim(),
            dims.boundary_dim()
        )));
    }
    let mut rng = seeded_rng(seed);
    let j = match kind {
        EmbeddingKind::RandomIsometry => random_isometry(dims.boundary_dim(), dims.code_dim(), &mut rng)
            .into_matrix(),
        EmbeddingKind::ProductWedge => {
            // A = (H1 ⊗ H2) ⊕ H3 with H1 ≅ a; ā is encoded in H2 ⊗ Ā orthogonally.
            let d2 = big_a / a;
            if d2 == 0 || big_abar < d2 * abar {
                return Err(Error::InvalidArgument(format!(
                    "product wedge needs d_A >= d_a and d_Abar >= (d_A / d_a) * d_abar, got {dims:?}"
                )));
            }
            let weights = random_density_with(d2, d2, &mut rng)?.spectrum();
            let u2 = random_unitary(d2, &mut rng);
            let ubar = random_unitary(big_abar, &mut rng);
            // chi[abar_index][(m, e)] for |chi_ā> in H2 ⊗ Ā
            let chi = |ab: usize, m: usize, e: usize| -> C64 {
                (0..d2)
                    .map(|k| {
                        u2.get(m, k) * ubar.get(e, k * abar + ab) * C64::new(weights[k].sqrt(), 0.0)
                    })
                    .sum()
            };
            Mat::from_fn(dims.boundary_dim(), dims.code_dim(), |row, col| {
                let (big, e) = (row / big_abar, row % big_abar);
                let (x, ab) = (col / abar, col % abar);
                if big < a * d2 && big / d2 == x {
                    chi(ab, big % d2, e)
                } else {
                    ZERO
                }
            })
        }
    };
    let j = Operator::new(j, vec![big_a, big_abar], vec![a, abar])?;
    let residual = operator_norm(&(&(&j.dagger() * &j) - &Operator::identity(&[a, abar])));
    if residual > 1e-8 {
        return Err(Error::NotIsometry { residual });
    }
    let sigma_a = random_density_with(a, a, &mut rng)?;
    let sigma_abar = random_density_with(abar, abar, &mut rng)?;
    Ok(CodeEmbedding {
        j,
        dims,
        kind,
        sigma_abar,
        sigma_a,
    })
}

impl CodeEmbedding {
    /// `(J rho J^dagger)_A` for a code state on `a ⊗ ā`.
    pub fn boundary_state(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dims.code_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.code_dim(),
                got: rho.dim(),
            });
        }
        let full = self.j.conjugate(rho.op());
        DensityOperator::new(full.partial_trace(&[0])?)
    }

    /// Code state on `a ⊗ ā` with the factor structure set.
    pub fn code_state(&self, rho: DensityOperator) -> Result<DensityOperator> {
        rho.with_dims(vec![self.dims.a, self.dims.abar])
    }

    /// `rho_a ⊗ sigma_abar`
    pub fn with_reference(&self, rho_a: &DensityOperator) -> DensityOperator {
        rho_a.tensor(&self.sigma_abar)
    }

    pub fn reference_state(&self) -> DensityOperator {
        self.with_reference(&self.sigma_a)
    }

    pub fn isometry_residual(&self) -> f64 {
        let id = Operator::identity(&[self.dims.a, self.dims.abar]);
        operator_norm(&(&(&self.j.dagger() * &self.j) - &id))
    }
}

/// `N(rho_a) = Tr_Ā[J (rho_a ⊗ sigma_abar) J^dagger]`, with `Ā` and the
/// purification of `sigma_abar` as the environment.
pub fn wedge_channel(emb: &CodeEmbedding) -> Result<KrausChannel> {
    let HoloDims {
        a,
        abar,
        big_a,
        big_abar,
    } = emb.dims;
    let eig = emb.sigma_abar.eigensystem();
    let mut kraus = Vec::new();
    for (k, &s) in eig.eigenvalues.iter().enumerate() {
        if s <= Tolerance::default().eigenvalue_cutoff {
            continue;
        }
        let w = C64::new(s.sqrt(), 0.0);
        for e in 0..big_abar {
            let m = Mat::from_fn(big_a, a, |row, x| {
                (0..abar)
                    .map(|ab| emb.j.get(row * big_abar + e, x * abar + ab) * eig.eigenvectors[(ab, k)])
                    .sum::<C64>()
                    * w
            });
            kraus.push(Operator::from_matrix(m));
        }
    }
    let map = KrausMap::new(kraus, a, big_a)?;
    let map = if map.len() > a * big_a {
        map.canonicalize(&Tolerance::default())?
    } else {
        map
    };
    map.into_channel()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    /// Max over pairs of `|D(rho_A||sigma_A) - D(rho_a||sigma_a)|`, in bits.
    pub epsilon: f64,
    /// Signed boundary-minus-bulk gap per pair.
    pub gaps: Vec<f64>,
}

/// Measure ε over pairs of code states on `a ⊗ ā`.
pub fn measure_epsilon(
    emb: &CodeEmbedding,
    pairs: &[(DensityOperator, DensityOperator)],
) -> Result<EpsilonReport> {
    let cfg = EntropyConfig::bits();
    let gaps = pairs
        .par_iter()
        .map(|(rho, sigma)| {
            let rho = emb.code_state(rho.clone())?;
            let sigma = emb.code_state(sigma.clone())?;
            let boundary =
                relative_entropy(&emb.boundary_state(&rho)?, &emb.boundary_state(&sigma)?, &cfg)?;
            let bulk = relative_entropy(&rho.partial_trace(&[0])?, &sigma.partial_trace(&[0])?, &cfg)?;
            Ok(boundary - bulk)
        })
        .collect::<Result<Vec<f64>>>()?;
    let epsilon = gaps.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    Ok(EpsilonReport { epsilon, gaps })
}

/// Random full-rank code states on `a ⊗ ā`, one substream per probe.
pub fn default_probes(emb: &CodeEmbedding, count: usize, seed: u64) -> Result<Vec<DensityOperator>> {
    let d = emb.dims.code_dim();
    (0..count as u64)
        .map(|k| emb.code_state(random_density_with(d, d, &mut substream(seed, k))?))
        .collect()
}

/// Pairs needed by the bound chain: `(rho_a ⊗ σ̄, σ_a ⊗ σ̄)` and
/// `(rho_a ⊗ σ̄, rho)` for every probe, plus `(rho, σ_a ⊗ σ̄)`.
pub fn chain_pairs(
    emb: &CodeEmbedding,
    probes: &[DensityOperator],
) -> Result<Vec<(DensityOperator, DensityOperator)>> {
    let reference = emb.reference_state();
    let mut pairs = Vec::with_capacity(3 * probes.len());
    for rho in probes {
        let lifted = emb.with_reference(&rho.partial_trace(&[0])?);
        pairs.push((lifted.clone(), reference.clone()));
        pairs.push((lifted, rho.clone()));
        pairs.push((rho.clone(), reference.clone()));
    }
    Ok(pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta: f64,
}

impl Deltas {
    /// `δ1 = 2√ε`, `δ2 = √(2 ln 2 · ε)` with ε in bits.
    pub fn from_epsilon(epsilon: f64) -> Self {
        let delta1 = 2.0 * epsilon.sqrt();
        let delta2 = (2.0 * LN_2 * epsilon).sqrt();
        Self {
            epsilon,
            delta1,
            delta2,
            delta: delta1 + delta2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorCheck {
    pub label: String,
    /// `|Tr[O_A rho_A] - Tr[phi_a rho_a]|`
    pub lhs: f64,
    /// `δ ||phi_a||`
    pub rhs: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    #[serde(rename = "epsilon_measured")]
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta: f64,
    pub per_operator: Vec<OperatorCheck>,
}

impl ReconstructionReport {
    pub fn passed(&self) -> bool {
        self.per_operator.iter().all(|c| c.passed)
    }
}

/// Everything shared by reconstruction and the chain audit.
pub struct WedgeSetup {
    pub channel: KrausChannel,
    pub recovery: UniversalRecovery,
    pub deltas: Deltas,
    pub epsilon: EpsilonReport,
}

pub fn prepare(emb: &CodeEmbedding, probes: &[DensityOperator], grid: &QuadratureGrid) -> Result<WedgeSetup> {
    let channel = wedge_channel(emb)?;
    let recovery = universal_recovery(&emb.sigma_a, &channel, grid)?;
    let epsilon = measure_epsilon(emb, &chain_pairs(emb, probes)?)?;
    Ok(WedgeSetup {
        channel,
        recovery,
        deltas: Deltas::from_epsilon(epsilon.epsilon),
        epsilon,
    })
}

/// `O_A = R^dagger[phi_a]` with the expectation-value check on every probe.
pub fn reconstruct(
    emb: &CodeEmbedding,
    phi_a: &Operator,
    grid: &QuadratureGrid,
    probes: &[DensityOperator],
) -> Result<(Operator, ReconstructionReport)> {
    let setup = prepare(emb, probes, grid)?;
    reconstruct_with(emb, &setup, phi_a, probes)
}

pub fn reconstruct_with(
    emb: &CodeEmbedding,
    setup: &WedgeSetup,
    phi_a: &Operator,
    probes: &[DensityOperator],
) -> Result<(Operator, ReconstructionReport)> {
    if phi_a.rows() != emb.dims.a || phi_a.cols() != emb.dims.a {
        return Err(Error::DimensionMismatch {
            expected: emb.dims.a,
            got: phi_a.rows(),
        });
    }
    let o_a = setup.recovery.adjoint_apply(phi_a)?;
    let norm = operator_norm(phi_a);
    let d = setup.deltas;
    let per_operator = probes
        .par_iter()
        .enumerate()
        .map(|(k, rho)| {
            let boundary = emb.boundary_state(rho)?;
            let bulk = rho.partial_trace(&[0])?;
            let lhs = (boundary.expectation(&o_a) - bulk.expectation(phi_a)).norm();
            let rhs = d.delta * norm;
            Ok(OperatorCheck {
                label: format!("probe {k}"),
                lhs,
                rhs,
                passed: lhs <= rhs + CHAIN_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        o_a,
        ReconstructionReport {
            epsilon: d.epsilon,
            delta1: d.delta1,
            delta2: d.delta2,
            delta: d.delta,
            per_operator,
        },
    ))
}

/// The three trace-distance steps for one probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeChain {
    /// `||rho_a - R(N(rho_a))||_1`, bounded by δ1.
    pub step1: f64,
    /// `||N(rho_a) - (J rho J^dagger)_A||_1`, bounded by δ2.
    pub step2: f64,
    /// `||R(N(rho_a)) - R(rho_A)||_1`, bounded by `step2` (data processing).
    pub data_processing: f64,
    /// `||rho_a - R(rho_A)||_1`, bounded by `step1 + data_processing` and δ.
    pub final_residual: f64,
    /// `|Tr[phi_a Δ]|` and `||Δ||_1 ||phi_a||` for `Δ = R(rho_A) - rho_a`.
    pub holder_lhs: f64,
    pub holder_rhs: f64,
    /// `||N(rho_a) - N(sigma_a)||_1 <= ||rho_a - sigma_a||_1`
    pub wedge_contraction: (f64, f64),
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub deltas: Deltas,
    pub probes: Vec<ProbeChain>,
    pub passed: bool,
}

pub fn bound_chain_audit(
    emb: &CodeEmbedding,
    probes: &[DensityOperator],
    grid: &QuadratureGrid,
    phi_a: &Operator,
) -> Result<ChainReport> {
    let setup = prepare(emb, probes, grid)?;
    chain_with(emb, &setup, probes, phi_a)
}

pub fn chain_with(
    emb: &CodeEmbedding,
    setup: &WedgeSetup,
    probes: &[DensityOperator],
    phi_a: &Operator,
) -> Result<ChainReport> {
    let d = setup.deltas;
    let phi_norm = operator_norm(phi_a);
    let sigma_out = setup.channel.apply(&emb.sigma_a)?;
    let rows = probes
        .par_iter()
        .map(|rho| {
            let rho_a = rho.partial_trace(&[0])?;
            let rho_boundary = emb.boundary_state(rho)?;
            let n_rho = setup.channel.apply(&rho_a)?;
            let rn_rho = setup.recovery.apply(&n_rho)?;
            let r_boundary = setup.recovery.apply(&rho_boundary)?;
            let step1 = trace_norm(&(rho_a.op() - rn_rho.op()))?;
            let step2 = trace_norm(&(n_rho.op() - rho_boundary.op()))?;
            let data_processing = trace_norm(&(rn_rho.op() - r_boundary.op()))?;
            let delta_op = r_boundary.op() - rho_a.op();
            let final_residual = trace_norm(&delta_op)?;
            let holder_lhs = Operator::from_matrix(phi_a.matrix() * delta_op.matrix()).trace().norm();
            let holder_rhs = final_residual * phi_norm;
            let contraction = (
                trace_norm(&(n_rho.op() - sigma_out.op()))?,
                trace_norm(&(rho_a.op() - emb.sigma_a.op()))?,
            );
            let passed = step1 <= d.delta1 + CHAIN_TOL
                && step2 <= d.delta2 + CHAIN_TOL
                && data_processing <= step2 + 1e-9
                && final_residual <= step1 + data_processing + 1e-9
                && final_residual <= d.delta + CHAIN_TOL
                && holder_lhs <= holder_rhs + 1e-9
                && contraction.0 <= contraction.1 + 1e-9;
            Ok(ProbeChain {
                step1,
                step2,
                data_processing,
                final_residual,
                holder_lhs,
                holder_rhs,
                wedge_contraction: contraction,
                passed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(ChainReport {
        deltas: d,
        probes: rows,
        passed,
    })
}
