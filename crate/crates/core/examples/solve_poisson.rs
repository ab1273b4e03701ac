//! Classical solve of manufactured problems with conjugate gradient and a
//! grid-refinement study.

use std::f64::consts::PI;

use qbe::fdm::{build_matrix, build_rhs, BoundaryCondition, Grid, Variant};
use qbe::solver::{cg_solve, convergence_study};

fn main() -> qbe::Result<()> {
    // u = sin(πx) on the Dirichlet grid; boundary data from u itself.
    let rows = convergence_study(
        Variant::Dirichlet,
        |g: &Grid| BoundaryCondition::Dirichlet { left: 0.0, right: (PI * (g.points() + 1) as f64 * g.h).sin() },
        |x| PI * PI * (PI * x).sin(),
        |x| (PI * x).sin(),
        4..=8,
    )?;
    println!("{:>5} {:>12} {:>8} {:>6}", "N", "max error", "ratio", "iters");
    for r in &rows {
        println!("{:>5} {:>12.3e} {:>8} {:>6}", r.points, r.max_error, r.ratio.map_or("-".into(), |x| format!("{x:.3}")), r.iterations);
    }

    // Periodic problems are singular; the solver works on zero-mean vectors.
    let bc = BoundaryCondition::Periodic;
    let grid = Grid::new(6, 1, &bc)?;
    let f: Vec<f64> = grid.nodes(Variant::Periodic).iter().map(|x| 4.0 * PI * PI * (2.0 * PI * x).cos()).collect();
    let sol = cg_solve(&build_matrix(&bc, &grid)?, &build_rhs(&bc, &grid, &f)?, 1e-12, 1000)?;
    println!(
        "periodic N = {}: {} iterations, relative residual {:.1e}, projected = {}",
        grid.points(),
        sol.iterations,
        sol.relative_residual(),
        sol.projected
    );
    Ok(())
}
