//! The modular incrementer as a ladder of multi-controlled X gates, its
//! action on basis states and its OpenQASM text.

use qbe::circuit::{add1_circuit, emit_qasm};
use qbe::sim::{apply_circuit, Statevector};

fn main() -> qbe::Result<()> {
    let n = 3;
    let circuit = add1_circuit(n);
    println!("{circuit}");
    for i in 0..1 << n {
        let out = apply_circuit(&circuit, Statevector::basis(n, i))?;
        let j = out.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap();
        println!("|{i}> -> |{j}>");
    }
    print!("{}", emit_qasm(&circuit));
    Ok(())
}
