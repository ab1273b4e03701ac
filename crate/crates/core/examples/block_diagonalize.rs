//! Split each stencil into signed, permutation-conjugated Pauli-block
//! terms and rebuild it from them.

use qbe::blockdiag::{decompose, reconstruct};
use qbe::fdm::{build_matrix, BoundaryCondition, Grid, Variant};

fn main() -> qbe::Result<()> {
    for variant in Variant::ALL {
        let bc = BoundaryCondition::homogeneous(variant);
        let grid = Grid::new(3, 1, &bc)?;
        let dec = decompose(&bc, &grid)?;
        println!("{variant}: {} terms", dec.terms.len());
        for t in &dec.terms {
            println!("  c = {}  {:?}  chi = {:+}  diag = {:?}", t.c, t.pauli, t.chi, t.diag);
        }
        let rebuilt = reconstruct(&dec)?;
        let err = rebuilt.entries.max_abs_diff(&build_matrix(&bc, &grid)?.entries);
        println!("  reconstruction error {err:e}");
    }

    let bc = BoundaryCondition::robin_from_diagonals(0.25, 1.75, 1.0 / 8.0);
    let dec = decompose(&bc, &Grid::new(3, 1, &bc)?)?;
    println!("{}", serde_json::to_string_pretty(&dec)?);
    Ok(())
}
