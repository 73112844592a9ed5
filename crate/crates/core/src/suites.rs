//! Seeded fuzz drivers. Trial `t` draws everything from `substream(seed, t)`,
//! trials run in parallel, and results come back sorted by trial index.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    choi_of, dilate, kraus_from_choi, monotonicity_audit, rotate_kraus,
};
use crate::entropy::{
    additivity_check, inequality_suite, pinsker_audit, EntropyConfig, InequalityReport,
};
use crate::error::Result;
use crate::linalg::{operator_norm, trace_norm, Tolerance};
use crate::random::{
    random_channel, random_density_with, random_multipartite, random_unitary, substream,
};
use crate::recovery::{report_with, universal_recovery, QuadratureGrid, RecoveryReport};

/// Inequality suite, Pinsker and additivity on random states over `dims`.
///
/// Each report's `seed` field carries the trial index of its substream.
pub fn entropy_fuzz(
    dims: &[usize],
    trials: usize,
    seed: u64,
    cfg: &EntropyConfig,
) -> Result<Vec<InequalityReport>> {
    let d: usize = dims.iter().product();
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let rank = rng.gen_range(1..=d);
            let rho = random_multipartite(dims, rank, &mut rng)?;
            let mut out = if dims.len() == 3 {
                inequality_suite(&rho, cfg)?
            } else {
                Vec::new()
            };
            let sigma = random_density_with(d, d, &mut rng)?.with_dims(dims.to_vec())?;
            out.push(pinsker_audit(&rho, &sigma, cfg)?);
            let (da, db) = (dims[0], d / dims[0]);
            let rho_a = random_density_with(da, rng.gen_range(1..=da), &mut rng)?;
            let chi_b = random_density_with(db, rng.gen_range(1..=db), &mut rng)?;
            let sigma_a = random_density_with(da, da, &mut rng)?;
            let tau_b = random_density_with(db, db, &mut rng)?;
            out.push(additivity_check(&rho_a, &chi_b, &sigma_a, &tau_b, cfg)?);
            Ok(out.into_iter().map(|r| r.with_seed(t)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Random channels `d_in -> d_out` with `d_in, d_out <= max_dim`, random
/// state, full-rank reference.
pub fn monotonicity_fuzz(
    trials: usize,
    max_dim: usize,
    seed: u64,
    cfg: &EntropyConfig,
) -> Result<Vec<InequalityReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let din = rng.gen_range(2..=max_dim);
            let dout = rng.gen_range(2..=max_dim);
            let k = rng.gen_range(din.div_ceil(dout)..=din * dout);
            let ch = random_channel(din, dout, k, &mut rng);
            let rho = random_density_with(din, rng.gen_range(1..=din), &mut rng)?;
            let sigma = random_density_with(din, din, &mut rng)?;
            Ok(monotonicity_audit(&ch, &rho, &sigma, cfg)?.with_seed(t))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiRoundtrip {
    pub trial: u64,
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus_in: usize,
    pub kraus_out: usize,
    pub choi_distance: f64,
    pub passed: bool,
}

pub fn choi_roundtrip_fuzz(trials: usize, max_dim: usize, seed: u64) -> Result<Vec<ChoiRoundtrip>> {
    let tol = Tolerance::default();
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let din = rng.gen_range(1..=max_dim);
            let dout = rng.gen_range(1..=max_dim);
            let k = rng.gen_range(din.div_ceil(dout)..=din * dout + 2);
            let ch = random_channel(din, dout, k, &mut rng);
            let choi = choi_of(&ch);
            let back = kraus_from_choi(&choi, &tol)?;
            let choi_distance = operator_norm(&(choi.op() - choi_of(&back).op()));
            let kraus_out = back.kraus().len();
            Ok(ChoiRoundtrip {
                trial: t,
                in_dim: din,
                out_dim: dout,
                kraus_in: k,
                kraus_out,
                choi_distance,
                passed: choi_distance <= 1e-8 && kraus_out <= din * dout,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationCheck {
    pub trial: u64,
    pub isometry_residual: f64,
    /// `||Tr_E[V rho V^dagger] - N(rho)||_1` on a random state.
    pub roundtrip: f64,
    /// Choi distance after rotating the Kraus list by a random unitary.
    pub rotation_invariance: f64,
    pub passed: bool,
}

pub fn dilation_fuzz(trials: usize, max_dim: usize, seed: u64) -> Result<Vec<DilationCheck>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let din = rng.gen_range(1..=max_dim);
            let dout = rng.gen_range(1..=max_dim);
            let k = rng.gen_range(din.div_ceil(dout)..=din * dout);
            let ch = random_channel(din, dout, k, &mut rng);
            let dil = dilate(&ch);
            let rho = random_density_with(din, din, &mut rng)?;
            let roundtrip = trace_norm(&(&dil.apply_op(rho.op())? - &ch.apply_op(rho.op())?))?;
            let w = random_unitary(k, &mut rng);
            let rotated = rotate_kraus(&ch, &w)?;
            let rotation_invariance = operator_norm(&(choi_of(&ch).op() - choi_of(&rotated).op()));
            let isometry_residual = dil.isometry_residual();
            Ok(DilationCheck {
                trial: t,
                isometry_residual,
                roundtrip,
                rotation_invariance,
                passed: isometry_residual <= 1e-9 && roundtrip <= 1e-9 && rotation_invariance <= 1e-9,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryTrial {
    pub trial: u64,
    pub in_dim: usize,
    pub out_dim: usize,
    pub report: RecoveryReport,
    /// Trace-norm change of `R(N(rho))` when the node count doubles.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub refinement_shift: Option<f64>,
}

impl RecoveryTrial {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.refinement_shift.is_none_or(|s| s <= 1e-6)
    }
}

/// Universal-recovery bound on random `(channel, rho, sigma)`. When `refine`
/// is set each trial also rebuilds the map on the doubled grid and records
/// the trace-norm shift of `R(N(rho))`.
pub fn recovery_fuzz(
    trials: usize,
    max_dim: usize,
    seed: u64,
    grid: &QuadratureGrid,
    refine: bool,
    cfg: &EntropyConfig,
) -> Result<Vec<RecoveryTrial>> {
    let fine = if refine { Some(grid.refined()?) } else { None };
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t);
            let din = rng.gen_range(2..=max_dim);
            let dout = rng.gen_range(2..=max_dim);
            let k = rng.gen_range(din.div_ceil(dout)..=din * dout);
            let ch = random_channel(din, dout, k, &mut rng);
            let rho = random_density_with(din, rng.gen_range(1..=din), &mut rng)?;
            let sigma = random_density_with(din, din, &mut rng)?;
            let recovery = universal_recovery(&sigma, &ch, grid)?;
            let report = report_with(&recovery, &ch, &rho, &sigma, cfg)?;
            let refinement_shift = match &fine {
                Some(fine) => {
                    let out = ch.apply(&rho)?;
                    let a = recovery.apply(&out)?;
                    let b = universal_recovery(&sigma, &ch, fine)?.apply(&out)?;
                    Some(trace_norm(&(a.op() - b.op()))?)
                }
                None => None,
            };
            Ok(RecoveryTrial {
                trial: t,
                in_dim: din,
                out_dim: dout,
                report,
                refinement_shift,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzzers_are_deterministic() {
        let cfg = EntropyConfig::default();
        let a = entropy_fuzz(&[2, 2, 2], 5, 3, &cfg).unwrap();
        let b = entropy_fuzz(&[2, 2, 2], 5, 3, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5 * 9);
        assert!(a.iter().all(|r| r.passed));
        assert_eq!(a.last().unwrap().seed, Some(4));
    }

    #[test]
    fn small_runs_pass() {
        let cfg = EntropyConfig::default();
        assert!(monotonicity_fuzz(10, 3, 1, &cfg).unwrap().iter().all(|r| r.passed));
        assert!(choi_roundtrip_fuzz(10, 4, 1).unwrap().iter().all(|r| r.passed));
        assert!(dilation_fuzz(10, 4, 1).unwrap().iter().all(|r| r.passed));
        let grid = QuadratureGrid::default();
        let rec = recovery_fuzz(4, 3, 1, &grid, true, &cfg).unwrap();
        assert!(rec.iter().all(|r| r.passed()), "{rec:?}");
    }
}
