//! Library output checked against the reference implementations in
//! `common`.

mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use qbe::blockdiag::decompose;
use qbe::circuit::{add1_circuit, emit_qasm};
use qbe::encoder::{encode, encode_ndim, encode_term, Form, Scheme};
use qbe::fdm::{build_matrix, build_matrix_ndim, build_rhs, BoundaryCondition, Grid, RobinParams, Variant};
use qbe::qasm::parse_qasm;
use qbe::sim::{apply_circuit, extract_block, extract_circuit_block, verify, Statevector};
use qbe::solver::cg_solve;
use qbe::Error;

fn robin(a: f64, b: f64, c: f64, d: f64) -> BoundaryCondition {
    BoundaryCondition::Robin(RobinParams { a, b, c, d, left_value: 0.0, right_value: 0.0 })
}

#[test]
fn one_dimensional_matrices_match_entrywise_oracle() {
    for variant in Variant::ALL {
        let bc = BoundaryCondition::homogeneous(variant);
        for n in 2..=6 {
            let grid = Grid::new(n, 1, &bc).unwrap();
            let got = build_matrix(&bc, &grid).unwrap().entries.to_rows();
            assert_eq!(got, common::stencil(variant, grid.points(), 1.0, 1.0), "{variant} n={n}");
        }
    }
}

#[test]
fn robin_corner_entries() {
    let bc = robin(-2.0, 1.0, 3.0, 1.0);
    let grid = Grid::new(3, 1, &bc).unwrap();
    let m = build_matrix(&bc, &grid).unwrap();
    let h = 1.0 / 8.0;
    let want = common::stencil(Variant::Robin, 8, 1.0 - 2.0 * h, 1.0 + 3.0 * h);
    assert!(common::max_diff(&m.entries.to_rows(), &want) < 1e-15);
}

#[test]
fn multi_dimensional_matrices_match_grid_walk() {
    for variant in [Variant::Periodic, Variant::Dirichlet, Variant::Neumann] {
        let bc = BoundaryCondition::homogeneous(variant);
        for (n, d) in [(2, 2), (3, 2), (2, 3)] {
            let grid = Grid::new(n, d, &bc).unwrap();
            let got = build_matrix_ndim(&bc, &grid).unwrap().entries.to_rows();
            assert_eq!(got, common::stencil_nd(variant, grid.points(), d), "{variant} n={n} d={d}");
        }
    }
}

#[test]
fn ndim_size_cap_is_enforced() {
    let bc = BoundaryCondition::Periodic;
    let grid = Grid::new(5, 3, &bc).unwrap();
    assert!(matches!(build_matrix_ndim(&bc, &grid), Err(Error::SizeCapExceeded { .. })));
}

/// Dense Cholesky; `None` when a pivot is not strictly positive.
fn cholesky_pivots(m: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let s: f64 = (0..j).map(|k| l[j][k] * l[j][k]).sum();
        let pivot = m[j][j] - s;
        if pivot <= 1e-12 {
            return None;
        }
        l[j][j] = pivot.sqrt();
        pivots.push(pivot);
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            l[i][j] = (m[i][j] - s) / l[j][j];
        }
    }
    Some(pivots)
}

fn shifted(m: &[Vec<f64>], eps: f64) -> Vec<Vec<f64>> {
    let mut out = m.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += eps;
    }
    out
}

#[test]
fn dirichlet_is_positive_definite() {
    let bc = BoundaryCondition::homogeneous(Variant::Dirichlet);
    for n in 2..=6 {
        let m = build_matrix(&bc, &Grid::new(n, 1, &bc).unwrap()).unwrap().entries.to_rows();
        assert!(cholesky_pivots(&m).is_some(), "n={n}");
    }
}

#[test]
fn singular_variants_are_semidefinite_with_constant_kernel() {
    for variant in [Variant::Periodic, Variant::Neumann] {
        let bc = BoundaryCondition::homogeneous(variant);
        for n in 2..=6 {
            let m = build_matrix(&bc, &Grid::new(n, 1, &bc).unwrap()).unwrap();
            assert!(m.has_constant_null_space());
            assert!(m.mul_vec(&vec![1.0; m.size()]).iter().all(|v| *v == 0.0));
            assert!(cholesky_pivots(&m.entries.to_rows()).is_none());
            assert!(cholesky_pivots(&shifted(&m.entries.to_rows(), 1e-6)).is_some(), "{variant} n={n}");
        }
    }
}

#[test]
fn robin_definiteness_follows_corner_entries() {
    let h = 1.0 / 16.0;
    for (c, d) in [(1.0, 1.0), (1.5, 1.2), (1.9, 1.0)] {
        let bc = BoundaryCondition::robin_from_diagonals(c, d, h);
        let m = build_matrix(&bc, &Grid::new(4, 1, &bc).unwrap()).unwrap().entries.to_rows();
        assert!(cholesky_pivots(&shifted(&m, 1e-9)).is_some(), "C={c} D={d}");
    }
    // A corner below 1 pushes the smallest eigenvalue below zero.
    let bc = BoundaryCondition::robin_from_diagonals(0.5, 1.0, h);
    let m = build_matrix(&bc, &Grid::new(4, 1, &bc).unwrap()).unwrap().entries.to_rows();
    assert!(cholesky_pivots(&m).is_none());
}

#[test]
fn simulator_matches_gate_by_gate_oracle() {
    let cases = [
        (BoundaryCondition::Periodic, 3),
        (BoundaryCondition::homogeneous(Variant::Neumann), 3),
        (robin(-2.0, 1.0, 3.0, 1.0), 2),
    ];
    for (bc, n) in cases {
        let grid = Grid::new(n, 1, &bc).unwrap();
        for form in Form::ALL {
            let be = encode(&bc, &grid, form).unwrap();
            let fast = extract_block(&be).unwrap();
            let slow = common::block(&be.circuit, be.target_size);
            for (i, row) in slow.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((fast[(i, j)] - v).norm() < 1e-13, "{} {form} ({i},{j})", bc.variant());
                }
            }
        }
    }
}

#[test]
fn statevector_application_matches_oracle_on_superposition() {
    let bc = BoundaryCondition::homogeneous(Variant::Dirichlet);
    let be = encode(&bc, &Grid::new(3, 1, &bc).unwrap(), Form::Lcu).unwrap();
    let q = be.circuit.qubit_count();
    let amps: Vec<Complex64> =
        (0..1usize << q).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
    let fast = apply_circuit(&be.circuit, Statevector::from_amplitudes(amps.clone()).unwrap()).unwrap();
    let slow = common::run(&be.circuit, &amps);
    for (a, b) in fast.amplitudes().iter().zip(&slow) {
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn single_terms_encode_their_matrix() {
    let bc = robin(-2.0, 1.0, 3.0, 1.0);
    let grid = Grid::new(3, 1, &bc).unwrap();
    let dec = decompose(&bc, &grid).unwrap();
    for term in &dec.terms {
        let circuit = encode_term(term, 3).unwrap();
        let block = extract_circuit_block(&circuit, 8).unwrap();
        // P_c (D ⊗ σ) P_c† built by hand.
        let mut dense = vec![vec![0.0; 8]; 8];
        let sigma = term.pauli.real_matrix().unwrap();
        for (k, &alpha) in term.diag.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    dense[2 * k + r][2 * k + c] = alpha * sigma[r][c];
                }
            }
        }
        if term.c == 1 {
            let p = common::shift(8);
            let mut conj = vec![vec![0.0; 8]; 8];
            for i in 0..8 {
                for j in 0..8 {
                    conj[i][j] = (0..8).flat_map(|k| (0..8).map(move |l| (k, l))).map(|(k, l)| p[i][k] * dense[k][l] * p[j][l]).sum();
                }
            }
            dense = conj;
        }
        for i in 0..8 {
            for j in 0..8 {
                assert!((block[(i, j)].re - dense[i][j]).abs() < 1e-12 && block[(i, j)].im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn qasm_round_trip_preserves_blocks() {
    let cases = [
        (BoundaryCondition::Periodic, Scheme::Shared, 1),
        (BoundaryCondition::homogeneous(Variant::Dirichlet), Scheme::Flagged, 2),
        (robin(-2.0, 1.0, 3.0, 1.0), Scheme::Shared, 1),
    ];
    for (bc, scheme, d) in cases {
        let grid = Grid::new(2, d, &bc).unwrap();
        for form in Form::ALL {
            let be = encode_ndim(&bc, &grid, scheme, form).unwrap();
            let text = emit_qasm(&be.circuit);
            let parsed = parse_qasm(&text).unwrap().into_circuit(be.circuit.layout().clone()).unwrap();
            let original = extract_block(&be).unwrap();
            let reread = extract_circuit_block(&parsed, be.target_size).unwrap();
            assert!(original.max_abs_diff(&reread) < 1e-12, "{} d={d} {form}", bc.variant());
        }
    }
}

#[test]
fn add1_qasm_is_the_shift_after_parsing() {
    let text = emit_qasm(&add1_circuit(3));
    let parsed = parse_qasm(&text).unwrap();
    assert_eq!(parsed.qubit_count, 3);
    let c = parsed.into_circuit(qbe::circuit::Layout::system(3)).unwrap();
    let block = extract_circuit_block(&c, 8).unwrap();
    let shift = common::shift(8);
    for i in 0..8 {
        for j in 0..8 {
            assert_eq!(block[(i, j)], Complex64::new(shift[i][j], 0.0));
        }
    }
}

#[test]
fn verification_rejects_a_corrupted_circuit() {
    let bc = BoundaryCondition::homogeneous(Variant::Neumann);
    let grid = Grid::new(3, 1, &bc).unwrap();
    let target = build_matrix(&bc, &grid).unwrap();
    let mut be = encode(&bc, &grid, Form::Simplified).unwrap();
    assert!(verify(&be, &target, 1e-10).unwrap().passed);
    be.circuit = be.circuit.without_gate(be.circuit.len() / 2);
    assert!(!verify(&be, &target, 1e-10).unwrap().passed);
}

#[test]
fn dirichlet_sine_at_conventional_spacing() {
    // N = 64 unknowns on [0, 1] with spacing 1/(N+1) and homogeneous data.
    let bc = BoundaryCondition::homogeneous(Variant::Dirichlet);
    let grid = Grid::new(6, 1, &bc).unwrap().with_spacing(1.0 / 65.0);
    let nodes = grid.nodes(Variant::Dirichlet);
    let f: Vec<f64> = nodes.iter().map(|x| PI * PI * (PI * x).sin()).collect();
    let sol = cg_solve(&build_matrix(&bc, &grid).unwrap(), &build_rhs(&bc, &grid, &f).unwrap(), 1e-12, 1000).unwrap();
    let err = nodes.iter().zip(&sol.solution).map(|(x, u)| ((PI * x).sin() - u).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-3, "max error {err}");
}

#[test]
fn dirichlet_linear_solution_is_exact() {
    // Second differences of a linear function vanish, so only the boundary
    // data drives the solve.
    let grid = Grid::new(4, 1, &BoundaryCondition::homogeneous(Variant::Dirichlet)).unwrap();
    let u = |x: f64| 2.0 - 3.0 * x;
    let bc = BoundaryCondition::Dirichlet { left: u(0.0), right: u((grid.points() + 1) as f64 * grid.h) };
    let nodes = grid.nodes(Variant::Dirichlet);
    let rhs = build_rhs(&bc, &grid, &vec![0.0; nodes.len()]).unwrap();
    let sol = cg_solve(&build_matrix(&bc, &grid).unwrap(), &rhs, 1e-14, 1000).unwrap();
    for (x, v) in nodes.iter().zip(&sol.solution) {
        assert!((u(*x) - v).abs() < 1e-12);
    }
}

#[test]
fn zero_data_gives_zero_solution() {
    let bc = BoundaryCondition::homogeneous(Variant::Dirichlet);
    let grid = Grid::new(4, 1, &bc).unwrap();
    let sol = cg_solve(&build_matrix(&bc, &grid).unwrap(), &[0.0; 16], 1e-12, 100).unwrap();
    assert!(sol.solution.iter().all(|v| *v == 0.0));
}

#[test]
fn cg_iterations_grow_about_linearly() {
    let bc = BoundaryCondition::homogeneous(Variant::Dirichlet);
    let mut counts = Vec::new();
    for n in 4..=7 {
        let grid = Grid::new(n, 1, &bc).unwrap();
        let f: Vec<f64> = grid.nodes(Variant::Dirichlet).iter().map(|x| (PI * x).sin() + x * x).collect();
        let sol = cg_solve(&build_matrix(&bc, &grid).unwrap(), &build_rhs(&bc, &grid, &f).unwrap(), 1e-10, 10_000).unwrap();
        counts.push(sol.iterations as f64);
    }
    // Least-squares slope of log(iterations) against log(N).
    let xs: Vec<f64> = (4..=7).map(|n| n as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|c| c.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((0.5..=2.0).contains(&slope), "slope {slope}, counts {counts:?}");
}
