//! Reference implementations used only by the tests. They are written from
//! the definitions directly and share no code with the library beyond its
//! data types.

#![allow(dead_code)]

use num_complex::Complex64;
use qbe::circuit::{Circuit, Gate, Polarity};
use qbe::fdm::Variant;

/// Entry-by-entry three-point stencil. `c_entry`/`d_entry` are only used
/// for Robin.
pub fn stencil(variant: Variant, points: usize, c_entry: f64, d_entry: f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; points]; points];
    for i in 0..points {
        for j in 0..points {
            let wrap = i.abs_diff(j) == points - 1;
            m[i][j] = if i == j {
                match (variant, i) {
                    (Variant::Neumann, 0) => 1.0,
                    (Variant::Neumann, k) if k == points - 1 => 1.0,
                    (Variant::Robin, 0) => c_entry,
                    (Variant::Robin, k) if k == points - 1 => d_entry,
                    _ => 2.0,
                }
            } else if i.abs_diff(j) == 1 || (variant == Variant::Periodic && wrap) {
                -1.0
            } else {
                0.0
            };
        }
    }
    m
}

/// `(2d+1)`-point stencil assembled by walking the grid: every unknown
/// couples to its axis neighbours, with wraparound for periodic.
pub fn stencil_nd(variant: Variant, points: usize, dims: usize) -> Vec<Vec<f64>> {
    let size = points.pow(dims as u32);
    let one_d = stencil(variant, points, 1.0, 1.0);
    let mut m = vec![vec![0.0; size]; size];
    for row in 0..size {
        // Coordinates, first axis most significant.
        let coords: Vec<usize> = (0..dims).map(|k| (row / points.pow((dims - 1 - k) as u32)) % points).collect();
        for k in 0..dims {
            m[row][row] += one_d[coords[k]][coords[k]];
            for (delta, _) in [(-1i64, ()), (1, ())] {
                let raw = coords[k] as i64 + delta;
                let neighbour = if variant == Variant::Periodic {
                    Some(raw.rem_euclid(points as i64) as usize)
                } else if (0..points as i64).contains(&raw) {
                    Some(raw as usize)
                } else {
                    None
                };
                if let Some(nb) = neighbour {
                    let mut c = coords.clone();
                    c[k] = nb;
                    let col = c.iter().fold(0, |acc, &x| acc * points + x);
                    m[row][col] -= 1.0;
                }
            }
        }
    }
    m
}

/// `|i⟩ ↦ |i + 1 mod N⟩`.
pub fn shift(points: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; points]; points];
    for j in 0..points {
        m[(j + 1) % points][j] = 1.0;
    }
    m
}

fn bit_of(index: usize, qubit: usize, q: usize) -> usize {
    (index >> (q - 1 - qubit)) & 1
}

fn single_qubit_matrix(g: &Gate) -> [[Complex64; 2]; 2] {
    let c = |re: f64| Complex64::new(re, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match *g {
        Gate::H(_) => [[c(s), c(s)], [c(s), c(-s)]],
        Gate::X(_) => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
        Gate::Y(_) => [[c(0.0), Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), c(0.0)]],
        Gate::Z(_) => [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
        Gate::Ry(_, t) => [[c((t / 2.0).cos()), c(-(t / 2.0).sin())], [c((t / 2.0).sin()), c((t / 2.0).cos())]],
        _ => unreachable!(),
    }
}

/// Applies one gate by definition: read the control bits of each basis
/// state, and either add the single-qubit matrix column or increment the
/// register value arithmetically.
pub fn apply_gate(g: &Gate, q: usize, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (i, &amp) in v.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let fires = g.controls().iter().all(|c| {
            let b = bit_of(i, c.qubit, q);
            (c.polarity == Polarity::Closed) == (b == 1)
        });
        if !fires {
            out[i] += amp;
            continue;
        }
        match g.base() {
            Gate::Add1(r) | Gate::Add1Dag(r) => {
                let value = r.iter().fold(0usize, |acc, &qb| (acc << 1) | bit_of(i, qb, q));
                let modulus = 1usize << r.len();
                let next = if matches!(g.base(), Gate::Add1(_)) { (value + 1) % modulus } else { (value + modulus - 1) % modulus };
                let mut j = i;
                for (pos, &qb) in r.iter().enumerate() {
                    let mask = 1usize << (q - 1 - qb);
                    let bit = (next >> (r.len() - 1 - pos)) & 1;
                    j = if bit == 1 { j | mask } else { j & !mask };
                }
                out[j] += amp;
            }
            base => {
                let t = base.targets()[0];
                let m = single_qubit_matrix(base);
                let b = bit_of(i, t, q);
                let mask = 1usize << (q - 1 - t);
                let (i0, i1) = (i & !mask, i | mask);
                out[i0] += m[0][b] * amp;
                out[i1] += m[1][b] * amp;
            }
        }
    }
    out
}

pub fn run(circuit: &Circuit, v: &[Complex64]) -> Vec<Complex64> {
    circuit.gates().iter().fold(v.to_vec(), |acc, g| apply_gate(g, circuit.qubit_count(), &acc))
}

/// Top-left `size × size` block of the circuit unitary, column by column.
pub fn block(circuit: &Circuit, size: usize) -> Vec<Vec<Complex64>> {
    let q = circuit.qubit_count();
    let mut cols = Vec::with_capacity(size);
    for j in 0..size {
        let mut e = vec![Complex64::new(0.0, 0.0); 1 << q];
        e[j] = Complex64::new(1.0, 0.0);
        cols.push(run(circuit, &e)[..size].to_vec());
    }
    // Transpose to row-major.
    (0..size).map(|i| (0..size).map(|j| cols[j][i]).collect()).collect()
}

pub fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
