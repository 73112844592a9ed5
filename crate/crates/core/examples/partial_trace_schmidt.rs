//! Partial traces, Schmidt decompositions and purification on a random
//! three-qutrit-qubit state.
//!
//! ```bash
//! cargo run --example partial_trace_schmidt
//! ```

use chanlab::entropy::{marginal_entropy, EntropyConfig};
use chanlab::random::{random_density_with, random_pure, seeded_rng};
use chanlab::states::{purify, schmidt};

fn main() -> chanlab::Result<()> {
    let mut rng = seeded_rng(11);
    let psi = random_pure(&[3, 2, 2], &mut rng);

    let cut = schmidt(&psi, &[0])?;
    let rebuilt = cut.reconstruct();
    let reordered_err = (&rebuilt - psi.amplitudes()).norm();
    println!("Schmidt rank across A|BC: {}", cut.rank());
    println!("coefficients: {:.6?}", cut.coefficients);
    println!("reconstruction error: {reordered_err:.3e}");

    // Both sides of a pure bipartition share their spectrum, hence their entropy.
    let rho = psi.density();
    let cfg = EntropyConfig::bits();
    let s_a = marginal_entropy(&rho, &[0], &cfg)?;
    let s_bc = marginal_entropy(&rho, &[1, 2], &cfg)?;
    println!("S(A) = {s_a:.12} bits, S(BC) = {s_bc:.12} bits");

    let mixed = random_density_with(4, 2, &mut rng)?;
    let pure = purify(&mixed);
    let back = pure.density().partial_trace(&[0])?;
    let err = (back.op() - mixed.op()).max_abs();
    println!("purification of a rank-2 qubit pair: {:?}, partial-trace error {err:.3e}", pure.factor_dims());
    Ok(())
}
