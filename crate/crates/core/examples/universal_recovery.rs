//! The rotated-Petz universal recovery map and the fidelity bound
//! `D(rho||sigma) - D(N(rho)||N(sigma)) >= -2 log F(rho, R(N(rho)))`.

use chanlab::entropy::EntropyConfig;
use chanlab::random::{random_channel, random_density_with, seeded_rng};
use chanlab::recovery::{recovery_report, QuadratureGrid};
use chanlab::suites::recovery_fuzz;

fn main() -> chanlab::Result<()> {
    let grid = QuadratureGrid::default();
    println!(
        "grid: {} nodes on [-{T}, {T}], |sum w beta0 - 1| = {:.3e}",
        grid.len(),
        (grid.mass() - 1.0).abs(),
        T = grid.truncation
    );

    let mut rng = seeded_rng(17);
    let ch = random_channel(3, 2, 2, &mut rng);
    let rho = random_density_with(3, 2, &mut rng)?;
    let sigma = random_density_with(3, 3, &mut rng)?;
    let report = recovery_report(&ch, &rho, &sigma, &grid, &EntropyConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));

    let trials = recovery_fuzz(200, 3, 5, &grid, true, &EntropyConfig::default())?;
    let min_slack = trials.iter().map(|t| t.report.bound_slack).fold(f64::INFINITY, f64::min);
    let shift = trials.iter().filter_map(|t| t.refinement_shift).fold(0.0, f64::max);
    println!("200 triples: min bound slack {min_slack:.3e}, max shift on doubled grid {shift:.3e}");
    Ok(())
}
