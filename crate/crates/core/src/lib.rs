//! Block-encoding circuits for finite-difference Poisson matrices.
//!
//! The crate assembles the three-point stencil matrices for periodic,
//! Dirichlet, Neumann and Robin boundary-value problems, splits each one into
//! a signed sum of permutation-conjugated Pauli-block-diagonal terms, and turns
//! that split into a gate-level linear-combination-of-unitaries circuit whose
//! depth is set by a modulo-2ⁿ incrementer and a handful of multi-controlled
//! Pauli gates.
//!
//! Everything is checked by simulation: [`sim::extract_block`] runs the circuit
//! column by column and reads off the ancilla-zero block, which must equal the
//! stencil matrix divided by the subnormalization.
//!
//! ```
//! use qbe::prelude::*;
//!
//! let bc = BoundaryCondition::Periodic;
//! let grid = Grid::new(3, 1, &bc).unwrap();
//! let target = build_matrix(&bc, &grid).unwrap();
//! let be = encode(&bc, &grid, Form::Simplified).unwrap();
//! let report = verify(&be, &target, 1e-10).unwrap();
//! assert!(report.passed);
//! assert!((report.eta_fit - 4.0).abs() < 1e-10);
//! ```

pub mod blockdiag;
pub mod circuit;
pub mod cli;
pub mod encoder;
mod error;
pub mod fdm;
pub mod matrix;
pub mod qasm;
pub mod resources;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::blockdiag::{decompose, reconstruct, BlockDiagTerm, Decomposition, Pauli};
    pub use crate::circuit::{add1_circuit, Circuit, Control, Gate};
    pub use crate::encoder::{encode, encode_ndim, BlockEncoding, Form, Scheme};
    pub use crate::fdm::{build_matrix, build_matrix_ndim, build_rhs, BoundaryCondition, Grid, StencilMatrix};
    pub use crate::resources::{count_resources, ResourceReport};
    pub use crate::sim::{apply_circuit, extract_block, verify, Statevector, VerificationReport};
    pub use crate::solver::{cg_solve, SolveResult};
    pub use crate::{Error, Result};
}
