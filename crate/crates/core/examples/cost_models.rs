//! Ancilla, Toffoli-depth and Toffoli-count models for the primitives, and
//! the end-to-end complexity comparison.

use qbe::resources::{complexity_table, cost_table, ComplexityInputs};

fn main() -> qbe::Result<()> {
    for n in [8, 16, 32] {
        println!("n = {n} (log2 values)");
        print!("{}", cost_table(n).render());
        println!();
    }
    let inputs = [
        ComplexityInputs::Direct { kappa: 1e4, points: 1024.0, d: 3.0, epsilon: 1e-6 },
        ComplexityInputs::Discretization { d: 3.0, alpha: 0.5, delta: 1e-3, epsilon: 1e-6 },
    ];
    for input in inputs {
        println!("{input:?}");
        for row in complexity_table(input)? {
            println!("  {:<40} {:<40} {:.3e}", row.method, row.formula, row.estimate);
        }
    }
    Ok(())
}
