//! Every single-qubit Pauli error on the Shor code, decoded from its
//! syndrome and read out both directly and through ancilla circuits.

use chanlab::qec::{
    circuit_readout, encode, random_logical, shor_code, single_qubit_errors, sweep, three_qubit_code,
};

fn main() -> chanlab::Result<()> {
    let code = shor_code();
    let logical = random_logical(4);
    let psi = encode(&code, logical.0, logical.1)?;

    println!("{:<6} {:<10} {:<12} fidelity", "error", "syndrome", "correction");
    let mut circuit_agrees = 0;
    for (row, error) in sweep(&code, logical)?.iter().zip(single_qubit_errors(code.n)) {
        let syn: String = row.syndrome.iter().map(|b| if *b > 0 { '+' } else { '-' }).collect();
        println!("{:<6} {:<10} {:<12} {:.12}", row.error, syn, row.correction, row.fidelity);
        let circuit = circuit_readout(&code, &error.apply(&psi)?)?;
        circuit_agrees += circuit.is_some_and(|c| c.bits == row.syndrome) as usize;
    }
    println!("ancilla circuits agree with direct readout on {circuit_agrees}/27 errors");

    // The three-qubit code catches bit flips only; a phase flip on any qubit
    // acts as a logical operator.
    let three = three_qubit_code();
    for row in sweep(&three, logical)? {
        if row.error.starts_with('Z') {
            println!("three-qubit code, {}: preserved = {}, acts as logical {}", row.error, row.logical_preserved, row.effective_logical);
        }
    }
    Ok(())
}
