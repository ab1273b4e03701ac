//! Conjugate-gradient solve of the assembled systems and grid-refinement
//! studies.
//!
//! Periodic and Neumann matrices annihilate the constant vector. For those
//! the right-hand side is projected onto the zero-mean subspace and the
//! zero-mean solution is returned.

use std::io::Write;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::fdm::{build_matrix, build_rhs, BoundaryCondition, Grid, StencilMatrix, Variant};
use crate::{Error, Result};

/// Iterations between re-projections onto the zero-mean subspace.
const REPROJECT_EVERY: usize = 50;
/// Relative residual used by the convergence study, well below the
/// discretization error at every size it is run on.
const STUDY_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `‖A x − b‖₂` against the (projected) right-hand side.
    pub residual_norm: f64,
    /// `‖b‖₂` of the (projected) right-hand side.
    pub rhs_norm: f64,
    /// The right-hand side was projected to zero mean.
    pub projected: bool,
    pub converged: bool,
}

impl SolveResult {
    pub fn relative_residual(&self) -> f64 {
        if self.rhs_norm > 0.0 {
            self.residual_norm / self.rhs_norm
        } else {
            self.residual_norm
        }
    }
}

/// Compressed sparse rows, built once from the dense stencil.
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn from_dense(m: &StencilMatrix) -> Self {
        let n = m.size();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        row_ptr.push(0);
        for i in 0..n {
            for (j, &v) in m.entries.row(i).iter().enumerate() {
                if v != 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { row_ptr, cols, vals }
    }

    fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            *yi = self.cols[range.clone()].iter().zip(&self.vals[range]).map(|(&j, v)| v * x[j]).sum();
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

/// Plain conjugate gradient from `x = 0`, stopping when
/// `‖A x − b‖ ≤ tol · ‖b‖`. On failure the best iterate is returned inside
/// [`Error::MaxIterExceeded`].
pub fn cg_solve(matrix: &StencilMatrix, rhs: &[f64], tol: f64, max_iter: usize) -> Result<SolveResult> {
    let n = matrix.size();
    if rhs.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: rhs.len() });
    }
    let a = Csr::from_dense(matrix);
    let projected = matrix.has_constant_null_space();
    let mut b = rhs.to_vec();
    if projected {
        remove_mean(&mut b);
    }
    let rhs_norm = dot(&b, &b).sqrt();
    let mut x = vec![0.0; n];
    if rhs_norm == 0.0 {
        return Ok(SolveResult { solution: x, iterations: 0, residual_norm: 0.0, rhs_norm, projected, converged: true });
    }

    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut restarted = false;
    let mut iterations = 0;
    loop {
        if iterations >= max_iter {
            break;
        }
        if rr.sqrt() <= tol * rhs_norm {
            // The recurrence drifts from the true residual; restart from it
            // once, and stop if that already meets the tolerance.
            a.mul_into(&x, &mut ap);
            r.iter_mut().zip(ap.iter().zip(&b)).for_each(|(ri, (y, bi))| *ri = bi - y);
            if projected {
                remove_mean(&mut r);
            }
            let true_rr = dot(&r, &r);
            if true_rr.sqrt() <= tol * rhs_norm || restarted {
                break;
            }
            restarted = true;
            p.copy_from_slice(&r);
            rr = true_rr;
        }
        a.mul_into(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        iterations += 1;
        if projected && iterations % REPROJECT_EVERY == 0 {
            remove_mean(&mut x);
            remove_mean(&mut r);
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
        rr = rr_next;
    }
    if projected {
        remove_mean(&mut x);
    }
    // True residual, not the recurrence.
    a.mul_into(&x, &mut ap);
    let residual_norm = ap.iter().zip(&b).map(|(y, bi)| (y - bi).powi(2)).sum::<f64>().sqrt();
    let converged = residual_norm <= tol * rhs_norm;
    let result = SolveResult { solution: x, iterations, residual_norm, rhs_norm, projected, converged };
    if converged {
        Ok(result)
    } else {
        Err(Error::MaxIterExceeded { best: Box::new(result) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub points: usize,
    pub h: f64,
    pub max_error: f64,
    /// Error at the previous (coarser) grid divided by this one.
    pub ratio: Option<f64>,
    pub iterations: usize,
}

/// Discretization error of the classical solve over a range of grid sizes.
///
/// `bc_for` supplies the boundary data for each grid, which lets Dirichlet
/// values be taken from the exact solution at the actual boundary nodes.
/// The error is the maximum nodal error; for Neumann the two boundary rows
/// are excluded. Singular variants are compared after removing the mean.
pub fn convergence_study(
    variant: Variant,
    bc_for: impl Fn(&Grid) -> BoundaryCondition,
    f: impl Fn(f64) -> f64,
    u_exact: impl Fn(f64) -> f64,
    n_range: RangeInclusive<u32>,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for n in n_range {
        let grid = Grid::new(n, 1, &BoundaryCondition::homogeneous(variant))?;
        let bc = bc_for(&grid);
        if bc.variant() != variant {
            return Err(Error::UnsupportedVariant(format!("expected {variant}, got {}", bc.variant())));
        }
        let nodes = grid.nodes(variant);
        let samples: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let matrix = build_matrix(&bc, &grid)?;
        let rhs = build_rhs(&bc, &grid, &samples)?;
        let result = cg_solve(&matrix, &rhs, STUDY_TOL, 20 * grid.points())?;
        let mut exact: Vec<f64> = nodes.iter().map(|&x| u_exact(x)).collect();
        if result.projected {
            remove_mean(&mut exact);
        }
        let range = if variant == Variant::Neumann { 1..nodes.len() - 1 } else { 0..nodes.len() };
        let max_error = range.map(|i| (result.solution[i] - exact[i]).abs()).fold(0.0, f64::max);
        let ratio = rows.last().map(|prev| prev.max_error / max_error);
        rows.push(ConvergenceRow { points: grid.points(), h: grid.h, max_error, ratio, iterations: result.iterations });
    }
    Ok(rows)
}

/// Writes `(x, u)` pairs as CSV.
pub fn write_solution_csv<W: Write>(nodes: &[f64], solution: &[f64], out: W) -> Result<()> {
    if nodes.len() != solution.len() {
        return Err(Error::LengthMismatch { expected: nodes.len(), found: solution.len() });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "u"])?;
    for (x, u) in nodes.iter().zip(solution) {
        w.write_record([x.to_string(), u.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
