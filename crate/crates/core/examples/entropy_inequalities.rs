//! Fuzz the von Neumann entropy inequalities on random three-qubit states.

use chanlab::entropy::{inequality_suite, trace_distance_report, EntropyConfig, LogBase};
use chanlab::random::{random_density, random_multipartite, seeded_rng};
use chanlab::suites::entropy_fuzz;

fn main() -> chanlab::Result<()> {
    let cfg = EntropyConfig {
        log_base: LogBase::Bits,
        ..Default::default()
    };

    let rho = random_multipartite(&[2, 2, 2], 3, &mut seeded_rng(5))?;
    for r in inequality_suite(&rho, &cfg)? {
        println!("{:<24} lhs {:>8.5}  rhs {:>8.5}  slack {:>9.2e}", r.name, r.lhs, r.rhs, r.slack);
    }

    let reports = entropy_fuzz(&[2, 2, 2], 2000, 1, &cfg)?;
    let worst = reports
        .iter()
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
        .expect("non-empty");
    let violations = reports.iter().filter(|r| !r.passed).count();
    println!(
        "\n{} checks over 2000 states, {violations} violations; tightest was {} at {:.2e}",
        reports.len(),
        worst.name,
        worst.slack
    );

    let a = random_density(4, 4, 1)?;
    let b = random_density(4, 2, 2)?;
    let td = trace_distance_report(&a, &b)?;
    println!(
        "trace distance {:.12}, optimal two-outcome measurement reaches {:.12}",
        td.distance, td.measured_distance
    );
    Ok(())
}
