//! Seeded sampling of states, unitaries, isometries and channels.
//!
//! All randomness flows from explicit seeds. Parallel trials derive their
//! generator from `(seed, trial)` through [`substream`], so results do not
//! depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Operator, Vector, C64};
use crate::states::{DensityOperator, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for one trial of a seeded run.
pub fn substream(seed: u64, trial: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Uniformly distributed pure state on the given factors.
pub fn random_pure<R: Rng + ?Sized>(factor_dims: &[usize], rng: &mut R) -> PureState {
    let d: usize = factor_dims.iter().product();
    let v = Vector::from_fn(d, |_, _| complex_normal(rng));
    let norm = v.norm();
    PureState::new(v / C64::new(norm, 0.0), factor_dims.to_vec())
        .expect("normalized by construction")
}

/// Partial trace of a uniform pure state on `dim ⊗ rank` over the ancilla.
pub fn random_density_with<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} must lie in 1..={dim}"
        )));
    }
    let psi = random_pure(&[dim, rank], rng);
    psi.density().partial_trace(&[0])
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_density_with(dim, rank, &mut seeded_rng(seed))
}

/// Random state on several factors (rank `rank` over the joint space).
pub fn random_multipartite<R: Rng + ?Sized>(
    dims: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d: usize = dims.iter().product();
    let rho = random_density_with(d, rank, rng)?;
    rho.with_dims(dims.to_vec())
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase of R's
/// diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator {
    random_isometry(d, d, rng)
}

/// Uniformly random isometry `cols -> rows` (rows >= cols).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Operator {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = ginibre(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..cols {
        let diag = r[(k, k)];
        let n = diag.norm();
        let phase = if n > 0.0 { diag / n } else { C64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, k)] *= phase;
        }
    }
    Operator::from_matrix(q)
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator {
    let g = Operator::from_matrix(ginibre(d, d, rng));
    g.hermitian_part()
}

/// Random channel from a random isometric dilation with `kraus_count`
/// environment levels.
pub fn random_channel<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    kraus_count: usize,
    rng: &mut R,
) -> KrausChannel {
    let v = random_isometry(out_dim * kraus_count, in_dim, rng);
    let kraus = (0..kraus_count)
        .map(|j| {
            Operator::from_matrix(Mat::from_fn(out_dim, in_dim, |b, a| {
                v.get(b * kraus_count + j, a)
            }))
        })
        .collect();
    KrausChannel::new(kraus, in_dim, out_dim).expect("dilation blocks are complete")
}
