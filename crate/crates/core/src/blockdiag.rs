//! Block-diagonalization of the stencil matrices.
//!
//! Each matrix is written as `Σ_c Σ_σ χ_σ · P_c (diag(α) ⊗ σ) P_c†` where
//! `P_c` is the cyclic shift by `c ∈ {0, 1}` and `σ` a Pauli matrix acting on
//! the least significant index bit. Pairing `(2i, 2i+1)` gives the blocks of
//! `c = 0`; pairing `(2i+1, 2i+2 mod N)` gives the blocks of `c = 1`.

use serde::{Deserialize, Serialize};

use crate::fdm::{BoundaryCondition, Grid, StencilMatrix, Variant};
use crate::matrix::RealMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Real 2×2 matrix, or `None` for `Y` which is imaginary.
    pub fn real_matrix(self) -> Option<[[f64; 2]; 2]> {
        match self {
            Pauli::I => Some([[1.0, 0.0], [0.0, 1.0]]),
            Pauli::X => Some([[0.0, 1.0], [1.0, 0.0]]),
            Pauli::Z => Some([[1.0, 0.0], [0.0, -1.0]]),
            Pauli::Y => None,
        }
    }
}

/// One `χ · P_c (diag ⊗ σ) P_c†` term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDiagTerm {
    /// Permutation shift, 0 or 1.
    pub c: u8,
    pub pauli: Pauli,
    pub chi: f64,
    /// `α_0 … α_{N/2-1}`.
    pub diag: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub size: usize,
    pub terms: Vec<BlockDiagTerm>,
}

/// Decomposition of the d-dimensional Kronecker sum: the 1-D terms act on
/// each axis in turn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NdimDecomposition {
    pub base: Decomposition,
    pub dims: usize,
}

fn sign(pauli: Pauli) -> f64 {
    if pauli == Pauli::X {
        -1.0
    } else {
        1.0
    }
}

/// Decomposes the one-dimensional stencil for `bc` on `grid`.
pub fn decompose(bc: &BoundaryCondition, grid: &Grid) -> Result<Decomposition> {
    let size = grid.points();
    if size < 4 || !size.is_power_of_two() {
        return Err(Error::NonPowerOfTwoSize(size));
    }
    let half = size / 2;
    let ones = vec![1.0; half];
    let ones_but_last = |last: f64| {
        let mut v = vec![1.0; half];
        v[half - 1] = last;
        v
    };
    let zeros_but_last = |last: f64| {
        let mut v = vec![0.0; half];
        v[half - 1] = last;
        v
    };
    let term = |c: u8, pauli: Pauli, diag: Vec<f64>| BlockDiagTerm { c, pauli, chi: sign(pauli), diag };

    let terms = match bc.variant() {
        Variant::Periodic => vec![
            term(0, Pauli::I, ones.clone()),
            term(0, Pauli::X, ones.clone()),
            term(1, Pauli::I, ones.clone()),
            term(1, Pauli::X, ones),
        ],
        Variant::Dirichlet => vec![
            term(0, Pauli::I, ones.clone()),
            term(0, Pauli::X, ones.clone()),
            term(1, Pauli::I, ones),
            term(1, Pauli::X, ones_but_last(0.0)),
        ],
        Variant::Neumann => vec![
            term(0, Pauli::I, ones.clone()),
            term(0, Pauli::X, ones),
            term(1, Pauli::I, ones_but_last(0.0)),
            term(1, Pauli::X, ones_but_last(0.0)),
        ],
        Variant::Robin => {
            let (c_entry, d_entry) = bc.robin_diagonals(grid)?.expect("robin");
            vec![
                term(0, Pauli::I, ones_but_last(d_entry / 2.0)),
                term(0, Pauli::Z, zeros_but_last(1.0 - d_entry / 2.0)),
                term(0, Pauli::X, ones),
                term(1, Pauli::I, ones_but_last(c_entry / 2.0)),
                term(1, Pauli::Z, zeros_but_last(1.0 - c_entry / 2.0)),
                term(1, Pauli::X, ones_but_last(0.0)),
            ]
        }
    };
    Ok(Decomposition { variant: bc.variant(), size, terms })
}

pub fn decompose_ndim(bc: &BoundaryCondition, grid: &Grid) -> Result<NdimDecomposition> {
    Ok(NdimDecomposition { base: decompose(bc, grid)?, dims: grid.dims })
}

/// `P_c = Σ_i |i + c mod N⟩⟨i|`.
pub fn permutation_matrix(c: u8, size: usize) -> RealMatrix {
    let mut p = RealMatrix::zeros(size, size);
    for i in 0..size {
        p[((i + c as usize) % size, i)] = 1.0;
    }
    p
}

fn is_integral(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() < (1u64 << 52) as f64
}

/// Evaluates the sum of terms. Integer-valued decompositions are summed in
/// `i64` so the result is exact; anything else is summed in `f64`.
pub fn reconstruct(dec: &Decomposition) -> Result<StencilMatrix> {
    let size = dec.size;
    let mut blocks = Vec::with_capacity(dec.terms.len());
    for t in &dec.terms {
        let sigma = t
            .pauli
            .real_matrix()
            .ok_or_else(|| Error::UnsupportedVariant("Pauli Y term has no real reconstruction".into()))?;
        if t.diag.len() * 2 != size {
            return Err(Error::LengthMismatch { expected: size / 2, found: t.diag.len() });
        }
        blocks.push((t, sigma));
    }
    let exact = dec.terms.iter().all(|t| is_integral(t.chi) && t.diag.iter().all(|&v| is_integral(v)));

    // Entry (2i + r, 2i + s) of diag ⊗ σ lands on ((2i + r + c) mod N, (2i + s + c) mod N).
    let mut entries = RealMatrix::zeros(size, size);
    if exact {
        let mut acc = vec![0i64; size * size];
        for (t, sigma) in &blocks {
            for (i, &alpha) in t.diag.iter().enumerate() {
                for r in 0..2 {
                    for s in 0..2 {
                        let v = t.chi as i64 * alpha as i64 * sigma[r][s] as i64;
                        if v != 0 {
                            let row = (2 * i + r + t.c as usize) % size;
                            let col = (2 * i + s + t.c as usize) % size;
                            acc[row * size + col] += v;
                        }
                    }
                }
            }
        }
        for row in 0..size {
            for col in 0..size {
                entries[(row, col)] = acc[row * size + col] as f64;
            }
        }
    } else {
        for (t, sigma) in &blocks {
            for (i, &alpha) in t.diag.iter().enumerate() {
                for r in 0..2 {
                    for s in 0..2 {
                        let row = (2 * i + r + t.c as usize) % size;
                        let col = (2 * i + s + t.c as usize) % size;
                        entries[(row, col)] += t.chi * alpha * sigma[r][s];
                    }
                }
            }
        }
    }
    Ok(StencilMatrix { variant: dec.variant, dims: 1, h: f64::NAN, entries })
}

/// Coefficients of `I`, `X` and `Z` for a real symmetric 2×2 block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliBlock {
    pub i: f64,
    pub x: f64,
    pub z: f64,
}

impl PauliBlock {
    /// Nonzero `(coefficient, Pauli)` pairs.
    pub fn terms(&self) -> Vec<(f64, Pauli)> {
        [(self.i, Pauli::I), (self.x, Pauli::X), (self.z, Pauli::Z)]
            .into_iter()
            .filter(|(c, _)| *c != 0.0)
            .collect()
    }

    pub fn to_block(&self) -> [[f64; 2]; 2] {
        [[self.i + self.z, self.x], [self.x, self.i - self.z]]
    }
}

pub fn pauli_block_decompose_2x2(block: [[f64; 2]; 2]) -> PauliBlock {
    PauliBlock {
        i: (block[0][0] + block[1][1]) / 2.0,
        x: (block[0][1] + block[1][0]) / 2.0,
        z: (block[0][0] - block[1][1]) / 2.0,
    }
}
