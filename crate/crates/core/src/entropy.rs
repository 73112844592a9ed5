//! Entropic functionals and inequality audits.
//!
//! Every quantity is computed from one eigenvalue pipeline in nats and
//! converted at the end, so bits are exactly nats / ln 2.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eigendecompose, trace_norm, Operator, Tolerance};
use crate::states::DensityOperator;

/// Slack below which an inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    /// Convert a value measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / LN_2,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        self.from_nats(x.ln())
    }

    /// Constant c in D >= c ||rho - sigma||_1^2.
    pub fn pinsker_constant(self) -> f64 {
        match self {
            LogBase::Nats => 0.5,
            LogBase::Bits => 1.0 / (2.0 * LN_2),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" => Ok(LogBase::Nats),
            "bits" => Ok(LogBase::Bits),
            other => Err(Error::InvalidArgument(format!("unknown log base {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EntropyConfig {
    pub log_base: LogBase,
    pub tol: Tolerance,
}

impl EntropyConfig {
    pub fn bits() -> Self {
        Self {
            log_base: LogBase::Bits,
            ..Self::default()
        }
    }
}

/// One audited comparison. `passed` iff `slack >= -1e-9`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            passed: slack >= -SLACK_TOL,
            seed: None,
        }
    }

    /// `lhs <= rhs`
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, rhs - lhs)
    }

    /// `lhs == rhs`, slack is `-|lhs - rhs|`.
    pub fn equality(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, -(lhs - rhs).abs())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn entropy_nats(rho: &DensityOperator, tol: &Tolerance) -> f64 {
    rho.spectrum()
        .into_iter()
        .filter(|&p| p > tol.eigenvalue_cutoff)
        .map(|p| -p * p.ln())
        .sum()
}

/// S(rho) = -Tr rho log rho, with 0 log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityOperator, cfg: &EntropyConfig) -> f64 {
    cfg.log_base.from_nats(entropy_nats(rho, &cfg.tol))
}

/// Entropy of the reduced state on `keep`.
pub fn marginal_entropy(rho: &DensityOperator, keep: &[usize], cfg: &EntropyConfig) -> Result<f64> {
    Ok(von_neumann_entropy(&rho.partial_trace(keep)?, cfg))
}

fn relative_entropy_nats(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    tol: &Tolerance,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            got: rho.dim(),
        });
    }
    let sig = herm_eigendecompose(sigma.op(), tol)?;
    let mut cross = 0.0;
    for (k, &s) in sig.eigenvalues.iter().enumerate() {
        let v = sig.eigenvector(k);
        let weight = v.dotc(&(rho.op().matrix() * &v)).re;
        if s <= tol.eigenvalue_cutoff {
            if weight > tol.eigenvalue_cutoff {
                return Err(Error::SupportViolation { index: k, weight });
            }
        } else {
            cross += weight * s.ln();
        }
    }
    Ok(-entropy_nats(rho, tol) - cross)
}

/// D(rho || sigma) = Tr rho log rho - Tr rho log sigma.
///
/// Fails with [`Error::SupportViolation`] when a kernel eigenvector of sigma
/// carries weight under rho.
pub fn relative_entropy(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<f64> {
    Ok(cfg
        .log_base
        .from_nats(relative_entropy_nats(rho, sigma, &cfg.tol)?))
}

/// Optimal two-outcome discrimination of a pair of states.
#[derive(Clone, Debug)]
pub struct TraceDistanceReport {
    /// 1/2 sum |lambda_i| over the spectrum of rho - sigma.
    pub distance: f64,
    /// Projectors onto the positive and the non-positive eigenspaces of rho - sigma.
    pub optimal_projectors: Vec<Operator>,
    /// Rank-one eigenprojectors of rho - sigma (a complete orthogonal measurement).
    pub eigenbasis_projectors: Vec<Operator>,
    /// Classical L1 distance induced by `optimal_projectors`.
    pub measured_distance: f64,
}

/// d(p, q) = 1/2 sum_a |Tr rho E_a - Tr sigma E_a|
pub fn classical_distance(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    projectors: &[Operator],
) -> f64 {
    0.5 * projectors
        .iter()
        .map(|e| (rho.expectation(e) - sigma.expectation(e)).re.abs())
        .sum::<f64>()
}

pub fn trace_distance_report(
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<TraceDistanceReport> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let diff = rho.op() - sigma.op();
    let eig = herm_eigendecompose(&diff, &Tolerance::default())?;
    let distance = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    let d = rho.dim();
    let dims = rho.dims().to_vec();
    let positive = eig.map(|l| crate::linalg::C64::new(if l > 0.0 { 1.0 } else { 0.0 }, 0.0));
    let rest = &Operator::identity(&dims) - &positive;
    let eigenbasis_projectors = (0..d)
        .map(|k| {
            let v = eig.eigenvector(k);
            Operator::outer(&v, &v)
                .with_square_dims(dims.clone())
                .expect("dims from state")
        })
        .collect();
    let optimal_projectors = vec![positive, rest];
    let measured_distance = classical_distance(rho, sigma, &optimal_projectors);
    Ok(TraceDistanceReport {
        distance,
        optimal_projectors,
        eigenbasis_projectors,
        measured_distance,
    })
}

/// 1/2 ||rho - sigma||_1
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(0.5 * trace_norm(&(rho.op() - sigma.op()))?)
}

/// D(rho||sigma) >= c ||rho - sigma||_1^2 with c = 1/2 (nats) or 1/(2 ln 2) (bits).
pub fn pinsker_audit(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<InequalityReport> {
    let d = relative_entropy(rho, sigma, cfg)?;
    let l1 = trace_norm(&(rho.op() - sigma.op()))?;
    Ok(InequalityReport::at_most(
        "pinsker",
        cfg.log_base.pinsker_constant() * l1 * l1,
        d,
    ))
}

/// Subadditivity, Araki-Lieb and strong subadditivity on a three-factor state.
pub fn inequality_suite(
    rho_abc: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<Vec<InequalityReport>> {
    if rho_abc.dims().len() != 3 {
        return Err(Error::InvalidFactors(format!(
            "expected 3 factors, got {:?}",
            rho_abc.dims()
        )));
    }
    let s = |keep: &[usize]| marginal_entropy(rho_abc, keep, cfg);
    let (a, b, c) = (s(&[0])?, s(&[1])?, s(&[2])?);
    let (ab, bc, ac) = (s(&[0, 1])?, s(&[1, 2])?, s(&[0, 2])?);
    let abc = von_neumann_entropy(rho_abc, cfg);
    Ok(vec![
        InequalityReport::at_most("subadditivity(A:B)", ab, a + b),
        InequalityReport::at_most("subadditivity(B:C)", bc, b + c),
        InequalityReport::at_most("subadditivity(A:C)", ac, a + c),
        InequalityReport::at_most("araki_lieb(A:B)", (a - b).abs(), ab),
        InequalityReport::at_most("araki_lieb(B:C)", (b - c).abs(), bc),
        InequalityReport::at_most("araki_lieb(A:C)", (a - c).abs(), ac),
        InequalityReport::at_most("strong_subadditivity", abc + b, ab + bc),
    ])
}

/// D(rho ⊗ chi || sigma ⊗ tau) = D(rho||sigma) + D(chi||tau) for full-rank
/// sigma and tau.
pub fn additivity_check(
    rho_a: &DensityOperator,
    chi_b: &DensityOperator,
    sigma_a: &DensityOperator,
    tau_b: &DensityOperator,
    cfg: &EntropyConfig,
) -> Result<InequalityReport> {
    for reference in [sigma_a, tau_b] {
        let min = reference.eigensystem().min_eigenvalue();
        if min <= cfg.tol.eigenvalue_cutoff {
            return Err(Error::RankDeficient { eigenvalue: min });
        }
    }
    let joint = relative_entropy(&rho_a.tensor(chi_b), &sigma_a.tensor(tau_b), cfg)?;
    let split = relative_entropy(rho_a, sigma_a, cfg)? + relative_entropy(chi_b, tau_b, cfg)?;
    Ok(InequalityReport::equality("relative_entropy_additivity", joint, split))
}

/// Entropies fed to the black-hole information audit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmpssEntropies {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub s_r: f64,
    pub s_br: f64,
    pub s_abr: f64,
}

impl AmpssEntropies {
    /// Numbers chosen to satisfy (i), (ii) and (iii) at once: a maximally
    /// entangled qubit pair and radiation that purifies B.
    pub fn hand_input() -> Self {
        Self {
            s_a: 1.0,
            s_b: 1.0,
            s_ab: 0.0,
            s_r: 5.0,
            s_br: 4.0,
            s_abr: 5.0,
        }
    }

    /// Entropies of a state on A ⊗ B ⊗ R (factors 0, 1, 2).
    pub fn from_state(rho_abr: &DensityOperator, cfg: &EntropyConfig) -> Result<Self> {
        if rho_abr.dims().len() != 3 {
            return Err(Error::InvalidFactors(format!(
                "expected factors A, B, R; got {:?}",
                rho_abr.dims()
            )));
        }
        let s = |keep: &[usize]| marginal_entropy(rho_abr, keep, cfg);
        Ok(Self {
            s_a: s(&[0])?,
            s_b: s(&[1])?,
            s_ab: s(&[0, 1])?,
            s_r: s(&[2])?,
            s_br: s(&[1, 2])?,
            s_abr: von_neumann_entropy(rho_abr, cfg),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub relation: String,
    pub expression: String,
    pub value: f64,
    pub justification: String,
    /// Whether the relation to the previous line holds for the supplied numbers.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmpssReport {
    pub entropies: AmpssEntropies,
    /// (i) S(A) = S(B) != 0 and S(AB) = 0
    pub pure_entangled_pair: bool,
    /// (ii) S(ABR) = S(R)
    pub pair_decoupled: bool,
    /// (iii) S(BR) < S(R), strict by at least the slack tolerance
    pub radiation_purified: bool,
    /// (iv) S(AB) + S(BR) >= S(ABR) + S(B)
    pub strong_subadditivity: bool,
    /// Conditions that sit within tolerance of their boundary.
    pub marginal: Vec<String>,
    /// Subsets of {i, ii, iii, iv} satisfied together by these numbers.
    pub satisfied_subsets: Vec<String>,
    pub chain: Vec<ChainStep>,
    /// (i), (ii), (iii) hold together, so the chain forces S(R) + S(B) < S(R).
    pub contradiction: bool,
}

/// Replay the four-line entropy chain on supplied numbers.
pub fn ampss_audit(e: &AmpssEntropies) -> AmpssReport {
    let tol = SLACK_TOL;
    let mut marginal = Vec::new();
    let zero_ab = e.s_ab.abs() <= tol;
    let equal_ab = (e.s_a - e.s_b).abs() <= tol;
    let nonzero_b = e.s_b > tol;
    let cond_i = equal_ab && nonzero_b && zero_ab;
    let cond_ii = (e.s_abr - e.s_r).abs() <= tol;
    let gap_iii = e.s_br - e.s_r;
    let cond_iii = gap_iii <= -tol;
    if gap_iii.abs() < tol {
        marginal.push("(iii) S(BR) = S(R) within tolerance".to_string());
    }
    let ssa_slack = e.s_ab + e.s_br - e.s_abr - e.s_b;
    let cond_iv = ssa_slack >= -tol;
    if ssa_slack.abs() < tol {
        marginal.push("(iv) saturated".to_string());
    }

    let conds = [cond_i, cond_ii, cond_iii, cond_iv];
    let labels = ["i", "ii", "iii", "iv"];
    let mut satisfied_subsets = Vec::new();
    for mask in 1u8..16 {
        if (0..4).all(|k| mask & (1 << k) == 0 || conds[k]) {
            let names: Vec<&str> = (0..4)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| labels[k])
                .collect();
            satisfied_subsets.push(format!("{{{}}}", names.join(",")));
        }
    }

    let start = e.s_r + e.s_b;
    let l1 = e.s_abr + e.s_b;
    let l2 = e.s_ab + e.s_br;
    let l3 = e.s_ab + e.s_r;
    let l4 = e.s_r;
    let chain = vec![
        ChainStep {
            relation: "".into(),
            expression: "S(R) + S(B)".into(),
            value: start,
            justification: "".into(),
            holds: true,
        },
        ChainStep {
            relation: "=".into(),
            expression: "S(ABR) + S(B)".into(),
            value: l1,
            justification: "using (ii)".into(),
            holds: (start - l1).abs() <= tol,
        },
        ChainStep {
            relation: "<=".into(),
            expression: "S(AB) + S(BR)".into(),
            value: l2,
            justification: "using (iv)".into(),
            holds: l1 <= l2 + tol,
        },
        ChainStep {
            relation: "<".into(),
            expression: "S(AB) + S(R)".into(),
            value: l3,
            justification: "using (iii)".into(),
            holds: l2 <= l3 - tol,
        },
        ChainStep {
            relation: "=".into(),
            expression: "S(R)".into(),
            value: l4,
            justification: "using (i)".into(),
            holds: (l3 - l4).abs() <= tol,
        },
    ];

    AmpssReport {
        entropies: *e,
        pure_entangled_pair: cond_i,
        pair_decoupled: cond_ii,
        radiation_purified: cond_iii,
        strong_subadditivity: cond_iv,
        marginal,
        satisfied_subsets,
        chain,
        contradiction: cond_i && cond_ii && cond_iii,
    }
}
