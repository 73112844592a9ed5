//! Two maps that send states to states yet are not channels.
//!
//! The transpose is positive but not completely positive: its Choi operator
//! is the swap, with eigenvalue -1. The map
//! `rho -> U(rho) rho U(rho)^dagger` with `U = exp(i pi Tr[X rho] X)` is
//! not even linear.

use chanlab::channels::{linearity_defect, nonlinear_counterexample, transpose_witness};
use chanlab::linalg::{Operator, C64};
use chanlab::states::DensityOperator;

fn main() -> chanlab::Result<()> {
    for d in 2..=4 {
        println!("d = {d}: transpose Choi minimum eigenvalue {:+.12}", transpose_witness(d)?);
    }

    let zero = DensityOperator::diagonal(&[1.0, 0.0])?;
    let one = DensityOperator::diagonal(&[0.0, 1.0])?;
    let plus = {
        let h = C64::new(0.5, 0.0);
        DensityOperator::new(Operator::from_rows(&[vec![h, h], vec![h, h]]))?
    };

    let rho1 = DensityOperator::maximally_mixed(&[2]);
    let out1 = nonlinear_counterexample(&rho1)?;
    println!("\nE(rho1) = rho1: error {:.3e}", (out1.op() - rho1.op()).max_abs());

    let rho2 = DensityOperator::new(&zero.op().scale_real(0.5) + &plus.op().scale_real(0.5))?;
    let out2 = nonlinear_counterexample(&rho2)?;
    let flipped = Operator::pauli_x().conjugate(rho2.op());
    println!("E(rho2) = X rho2 X: error {:.3e}", (out2.op() - &flipped).max_abs());

    println!(
        "linearity defect on |0>,|1> mixture: {:.3e}",
        linearity_defect(nonlinear_counterexample, &zero, &one, 0.5)?
    );
    println!(
        "linearity defect on |0>,|+> mixture: {:.3e}",
        linearity_defect(nonlinear_counterexample, &zero, &plus, 0.5)?
    );
    Ok(())
}
