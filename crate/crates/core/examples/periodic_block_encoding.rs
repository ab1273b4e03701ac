//! Block-encode the periodic stencil in both forms and verify each by
//! simulation.

use qbe::encoder::{encode, Form};
use qbe::fdm::{build_matrix, BoundaryCondition, Grid};
use qbe::sim::{extract_block, verify};

fn main() -> qbe::Result<()> {
    let bc = BoundaryCondition::Periodic;
    let grid = Grid::new(3, 1, &bc)?;
    let target = build_matrix(&bc, &grid)?;
    for form in Form::ALL {
        let be = encode(&bc, &grid, form)?;
        println!("{form}: {} ancillas, eta = {}, {} gates", be.ancillas, be.eta, be.circuit.len());
        println!("{}", be.circuit);
        let report = verify(&be, &target, 1e-10)?;
        println!("eta_fit = {}, max error = {:e}, passed = {}\n", report.eta_fit, report.max_abs_error, report.passed);
    }

    // The first row of eta times the block is the first row of the stencil.
    let be = encode(&bc, &grid, Form::Simplified)?;
    let block = extract_block(&be)?;
    let row: Vec<f64> = (0..grid.points()).map(|j| be.eta * block[(0, j)].re).collect();
    println!("row 0: {row:?}");
    Ok(())
}
