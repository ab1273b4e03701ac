//! Assemble the four one-dimensional stencils and a two-dimensional
//! Kronecker sum, and print them.

use qbe::fdm::{build_matrix, build_matrix_ndim, BoundaryCondition, Grid, Variant};

fn main() -> qbe::Result<()> {
    for variant in Variant::ALL {
        let bc = BoundaryCondition::homogeneous(variant);
        let grid = Grid::new(3, 1, &bc)?;
        let m = build_matrix(&bc, &grid)?;
        println!("{variant}, N = {}, h = {:.4}:\n{}", grid.points(), grid.h, m.entries);
    }

    // A Robin condition with boundary entries C = 0.5 and D = 1.5.
    let bc = BoundaryCondition::robin_from_diagonals(0.5, 1.5, 1.0 / 8.0);
    let grid = Grid::new(3, 1, &bc)?;
    println!("robin, C = 0.5, D = 1.5:\n{}", build_matrix(&bc, &grid)?.entries);

    let bc = BoundaryCondition::Periodic;
    let grid = Grid::new(2, 2, &bc)?;
    let m = build_matrix_ndim(&bc, &grid)?;
    println!("periodic, d = 2, {} unknowns:\n{}", grid.size(), m.entries);
    Ok(())
}
