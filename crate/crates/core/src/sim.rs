//! Dense statevector simulation and block extraction.
//!
//! Circuits are lowered to a flat list of controlled single-qubit operations
//! on bit masks. Only index pairs whose control bits match are visited, so a
//! gate with `k` controls costs `2^(q-k-1)` updates.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Polarity};
use crate::encoder::{BlockEncoding, Form};
use crate::fdm::{StencilMatrix, Variant};
use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Default simulation cap in qubits.
pub const DEFAULT_QUBIT_CAP: usize = 24;
/// Largest circuit whose full unitary is built for the unitarity check.
pub const UNITARITY_QUBIT_LIMIT: usize = 10;

/// Cap from `QBE_SIM_QUBIT_CAP`, falling back to [`DEFAULT_QUBIT_CAP`].
pub fn qubit_cap() -> usize {
    std::env::var("QBE_SIM_QUBIT_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_QUBIT_CAP)
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|index⟩` on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn zero(qubits: usize) -> Self {
        Self::basis(qubits, 0)
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::LengthMismatch {
                expected: amplitudes.len().next_power_of_two(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Copy, Debug)]
enum Kernel {
    X,
    Z,
    Dense([[Complex64; 2]; 2]),
}

#[derive(Clone, Copy, Debug)]
struct Op {
    ctrl_mask: usize,
    ctrl_value: usize,
    target: usize,
    kernel: Kernel,
}

/// Lowers a circuit to mask-level operations.
fn compile(circuit: &Circuit) -> Vec<Op> {
    let q = circuit.qubit_count();
    let bit = |qubit: usize| 1usize << (q - 1 - qubit);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    circuit
        .gates()
        .iter()
        .flat_map(Gate::expand)
        .map(|g| {
            let (mut ctrl_mask, mut ctrl_value) = (0, 0);
            for c in g.controls() {
                ctrl_mask |= bit(c.qubit);
                if c.polarity == Polarity::Closed {
                    ctrl_value |= bit(c.qubit);
                }
            }
            let (target, kernel) = match *g.base() {
                Gate::X(t) => (t, Kernel::X),
                Gate::Z(t) => (t, Kernel::Z),
                Gate::H(t) => {
                    let h = Complex64::new(s, 0.0);
                    (t, Kernel::Dense([[h, h], [h, -h]]))
                }
                Gate::Y(t) => (t, Kernel::Dense([[ZERO, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), ZERO]])),
                Gate::Ry(t, theta) => {
                    let (sn, cs) = (theta / 2.0).sin_cos();
                    let (c, sn) = (Complex64::new(cs, 0.0), Complex64::new(sn, 0.0));
                    (t, Kernel::Dense([[c, -sn], [sn, c]]))
                }
                ref other => unreachable!("expanded gate with base {other}"),
            };
            Op { ctrl_mask, ctrl_value, target: bit(target), kernel }
        })
        .collect()
}

fn apply_ops(ops: &[Op], amps: &mut [Complex64]) {
    let full = amps.len() - 1;
    for op in ops {
        let free = full & !(op.ctrl_mask | op.target);
        // Enumerate every subset of the free bits.
        let mut s = 0usize;
        loop {
            let i0 = s | op.ctrl_value;
            let i1 = i0 | op.target;
            match op.kernel {
                Kernel::X => amps.swap(i0, i1),
                Kernel::Z => amps[i1] = -amps[i1],
                Kernel::Dense(m) => {
                    let (a, b) = (amps[i0], amps[i1]);
                    amps[i0] = m[0][0] * a + m[0][1] * b;
                    amps[i1] = m[1][0] * a + m[1][1] * b;
                }
            }
            s = s.wrapping_sub(free) & free;
            if s == 0 {
                break;
            }
        }
    }
}

/// Applies every gate of `circuit` in order.
pub fn apply_circuit(circuit: &Circuit, psi: Statevector) -> Result<Statevector> {
    let expected = 1usize << circuit.qubit_count();
    if psi.amplitudes.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: psi.amplitudes.len() });
    }
    let mut amps = psi.amplitudes;
    apply_ops(&compile(circuit), &mut amps);
    Ok(Statevector { amplitudes: amps })
}

/// The top-left `size × size` block of the circuit unitary: column `j` is the
/// ancilla-zero part of `U |0…0⟩|j⟩`. Ancillas must precede the system
/// register, which holds the least significant qubits.
pub fn extract_circuit_block(circuit: &Circuit, size: usize) -> Result<ComplexMatrix> {
    if size > 1usize << circuit.qubit_count() {
        return Err(Error::DimensionMismatch { expected: 1 << circuit.qubit_count(), found: size });
    }
    Ok(ComplexMatrix::from_columns(size, &columns(circuit, size, size)?))
}

/// First `count` columns of the unitary, each truncated to `keep` rows.
fn columns(circuit: &Circuit, count: usize, keep: usize) -> Result<Vec<Vec<Complex64>>> {
    let q = circuit.qubit_count();
    let cap = qubit_cap();
    if q > cap {
        return Err(Error::SizeCapExceeded { size: q, cap });
    }
    let ops = compile(circuit);
    Ok((0..count)
        .into_par_iter()
        .map(|j| {
            let mut amps = vec![ZERO; 1 << q];
            amps[j] = ONE;
            apply_ops(&ops, &mut amps);
            amps.truncate(keep);
            amps
        })
        .collect())
}

/// `Π U Π†` for a block encoding, without the `η` factor.
pub fn extract_block(be: &BlockEncoding) -> Result<ComplexMatrix> {
    extract_circuit_block(&be.circuit, be.target_size)
}

/// Full `2^q × 2^q` unitary. Capped at 14 qubits.
pub fn full_unitary(circuit: &Circuit) -> Result<ComplexMatrix> {
    let q = circuit.qubit_count();
    if q > 14 {
        return Err(Error::SizeCapExceeded { size: q, cap: 14 });
    }
    extract_circuit_block(circuit, 1 << q)
}

/// `max |U†U − I|`. Capped at 14 qubits.
pub fn unitarity_error(circuit: &Circuit) -> Result<f64> {
    let q = circuit.qubit_count();
    if q > 14 {
        return Err(Error::SizeCapExceeded { size: q, cap: 14 });
    }
    let dim = 1usize << q;
    let cols = columns(circuit, dim, dim)?;
    let worst = (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut w = 0.0f64;
            for j in i..dim {
                let acc: Complex64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let expected = if i == j { ONE } else { ZERO };
                w = w.max((acc - expected).norm());
            }
            w
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub size: usize,
    pub d: usize,
    pub form: Form,
    pub eta_fit: f64,
    pub eta_declared: f64,
    pub max_abs_error: f64,
    /// `None` when the circuit is too wide for a full-unitary check.
    pub unitarity_error: Option<f64>,
    pub passed: bool,
}

/// Fits `η` by least squares and compares `η · block` with the target.
/// `passed` is true exactly when the largest entrywise error is at most `tol`.
pub fn verify(be: &BlockEncoding, target: &StencilMatrix, tol: f64) -> Result<VerificationReport> {
    if target.size() != be.target_size {
        return Err(Error::DimensionMismatch { expected: be.target_size, found: target.size() });
    }
    let block = extract_block(be)?;
    let (eta_fit, max_abs_error) = fit_eta(&block, target);
    let unitarity_error = if be.circuit.qubit_count() <= UNITARITY_QUBIT_LIMIT {
        Some(unitarity_error(&be.circuit)?)
    } else {
        None
    };
    Ok(VerificationReport {
        variant: be.variant,
        size: be.points(),
        d: be.dims,
        form: be.form,
        eta_fit,
        eta_declared: be.eta,
        max_abs_error,
        unitarity_error,
        passed: max_abs_error <= tol,
    })
}

/// Least-squares `η` with `η · block ≈ target`, and the resulting max error.
pub fn fit_eta(block: &ComplexMatrix, target: &StencilMatrix) -> (f64, f64) {
    let n = target.size();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let b = block[(i, j)];
            num += b.re * target.get(i, j);
            den += b.norm_sqr();
        }
    }
    let eta = if den > 0.0 { num / den } else { 0.0 };
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((block[(i, j)] * eta - target.get(i, j)).norm());
        }
    }
    (eta, worst)
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    variant: &'a str,
    #[serde(rename = "N")]
    size: usize,
    d: usize,
    form: &'a str,
    eta_fit: f64,
    max_abs_error: f64,
    passed: bool,
}

/// CSV summary with one row per report.
pub fn write_csv_summary<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(SummaryRow {
            variant: r.variant.name(),
            size: r.size,
            d: r.d,
            form: r.form.name(),
            eta_fit: r.eta_fit,
            max_abs_error: r.max_abs_error,
            passed: r.passed,
        })?;
    }
    w.flush()?;
    Ok(())
}
