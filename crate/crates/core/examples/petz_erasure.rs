//! Exact recovery with the Petz map when the erased region carries no
//! logical information.

use chanlab::linalg::trace_norm;
use chanlab::random::{random_density_with, substream};
use chanlab::recovery::erasure_example;

fn main() -> chanlab::Result<()> {
    let ex = erasure_example(2, 2, 2, 0, 2, &[0.7, 0.3], 42)?;
    println!("{:#?}", ex.report);

    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let rho = random_density_with(2, 2, &mut substream(42, k))?;
        let back = ex.petz.apply(&ex.channel.apply(&rho)?)?;
        worst = worst.max(trace_norm(&(rho.op() - back.op()))?);
    }
    println!("20 random code states: max ||rho - P(N(rho))||_1 = {worst:.3e}");
    println!(
        "Petz completeness on the support of N(sigma): {:.3e}",
        ex.petz.completeness_residual_on_support()
    );
    Ok(())
}
