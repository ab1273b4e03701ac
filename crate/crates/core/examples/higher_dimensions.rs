//! Two- and three-dimensional encodings with the shared and flagged
//! ancilla schemes.

use qbe::encoder::{encode_ndim, Form, Scheme};
use qbe::fdm::{build_matrix_ndim, BoundaryCondition, Grid, Variant};
use qbe::sim::{extract_block, verify};

fn main() -> qbe::Result<()> {
    for variant in [Variant::Periodic, Variant::Dirichlet] {
        let bc = BoundaryCondition::homogeneous(variant);
        for d in [2, 3] {
            let grid = Grid::new(2, d, &bc)?;
            let target = build_matrix_ndim(&bc, &grid)?;
            let mut blocks = Vec::new();
            for scheme in Scheme::ALL {
                let be = encode_ndim(&bc, &grid, scheme, Form::Simplified)?;
                let r = verify(&be, &target, 1e-10)?;
                println!(
                    "{variant} d={d} {scheme:<7}: {:>2} qubits, eta = {:>3}, error {:.1e}",
                    be.circuit.qubit_count(),
                    be.eta,
                    r.max_abs_error
                );
                blocks.push(extract_block(&be)?);
            }
            println!("  schemes differ by {:e}", blocks[0].max_abs_diff(&blocks[1]));
        }
    }
    Ok(())
}
