//! The black-hole information chain: three assumptions about a pair (A, B)
//! and the radiation R, plus strong subadditivity, force S(R) + S(B) < S(R).
//!
//! No actual state satisfies all three assumptions, which the second half
//! checks by sampling.

use chanlab::entropy::{ampss_audit, AmpssEntropies, EntropyConfig};
use chanlab::random::{random_multipartite, substream};
use rand::Rng;

fn main() -> chanlab::Result<()> {
    let hand = ampss_audit(&AmpssEntropies::hand_input());
    for step in &hand.chain {
        println!(
            "{:>3} {:<15} = {:>5.2}   {}",
            step.relation, step.expression, step.value, step.justification
        );
    }
    println!("contradiction: {}\n", hand.contradiction);

    let cfg = EntropyConfig::default();
    let mut joint = 0;
    let mut ssa_failures = 0;
    for trial in 0..500 {
        let mut rng = substream(2024, trial);
        let rank = rng.gen_range(1..=8);
        let rho = random_multipartite(&[2, 2, 2], rank, &mut rng)?;
        let report = ampss_audit(&AmpssEntropies::from_state(&rho, &cfg)?);
        joint += report.contradiction as usize;
        ssa_failures += (!report.strong_subadditivity) as usize;
    }
    println!("sampled 500 states: (i)+(ii)+(iii) held on {joint}, SSA failed on {ssa_failures}");
    Ok(())
}
