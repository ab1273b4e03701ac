//! Robin block encodings across boundary entries: rotation angles and the
//! verification result for each pair `(C, D)`.

use qbe::encoder::{encode, robin_angles, Form};
use qbe::fdm::{build_matrix, BoundaryCondition, Grid, RobinParams};
use qbe::sim::verify;

fn main() -> qbe::Result<()> {
    let h = 1.0 / 16.0;
    for (c, d) in [(1.0, 1.0), (0.0, 1.9), (0.5, 1.5), (1.75, 0.25)] {
        let bc = BoundaryCondition::robin_from_diagonals(c, d, h);
        let grid = Grid::new(4, 1, &bc)?;
        let target = build_matrix(&bc, &grid)?;
        let (theta, phi) = robin_angles(c);
        print!("C = {c:<5} D = {d:<5} theta_C = {theta:.4} phi_C = {phi:.4}");
        for form in Form::ALL {
            let r = verify(&encode(&bc, &grid, form)?, &target, 1e-10)?;
            print!("  {form}: {:.1e}", r.max_abs_error);
        }
        println!();
    }

    // From physical coefficients a u + b u' at each end.
    let bc = BoundaryCondition::Robin(RobinParams { a: -2.0, b: 1.0, c: 3.0, d: 1.0, left_value: 0.0, right_value: 0.0 });
    let grid = Grid::new(4, 1, &bc)?;
    let (ce, de) = bc.robin_diagonals(&grid)?.unwrap();
    println!("a = -2, b = 1, c = 3, d = 1 gives C = {ce}, D = {de}");
    Ok(())
}
