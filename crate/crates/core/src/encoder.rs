//! Block-encoding synthesis.
//!
//! Two forms are produced for every boundary condition:
//!
//! * [`Form::Lcu`] is generated from the [`Decomposition`]: a select register
//!   in uniform superposition picks one term, each term is applied under the
//!   matching select pattern, and negative coefficients become a phase on that
//!   pattern. Zero terms pad the count to a power of two.
//! * [`Form::Simplified`] is the hand-reduced gate sequence for each variant,
//!   which shares gates between terms and needs far fewer controls.
//!
//! Qubit layout is `[select][inner ancillas][system]` so the projector onto
//! the all-zero ancilla state selects the first `N` basis states.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blockdiag::{decompose, BlockDiagTerm, Decomposition, Pauli};
use crate::circuit::{Circuit, Control, Gate, Layout, RegisterKind};
use crate::fdm::{BoundaryCondition, Grid, Variant};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Lcu,
    Simplified,
}

impl Form {
    pub const ALL: [Form; 2] = [Form::Lcu, Form::Simplified];

    pub fn name(self) -> &'static str {
        match self {
            Form::Lcu => "lcu",
            Form::Simplified => "simplified",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lcu" => Ok(Form::Lcu),
            "simplified" | "simple" => Ok(Form::Simplified),
            other => Err(Error::UnsupportedVariant(format!("form '{other}'"))),
        }
    }
}

/// How the per-dimension encodings are combined for `d ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// One set of inner ancillas reused by every dimension.
    Shared,
    /// A flag qubit and a private ancilla set per dimension.
    Flagged,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Shared, Scheme::Flagged];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Shared => "shared",
            Scheme::Flagged => "flagged",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shared" => Ok(Scheme::Shared),
            "flagged" => Ok(Scheme::Flagged),
            other => Err(Error::UnsupportedVariant(format!("scheme '{other}'"))),
        }
    }
}

/// A circuit `U` with `η · Π U Π† = L`, where `Π` projects the ancillas on
/// `|0…0⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncoding {
    pub circuit: Circuit,
    /// Ancilla count `m`.
    pub ancillas: usize,
    /// Subnormalization `η`.
    pub eta: f64,
    /// `N^d`.
    pub target_size: usize,
    pub variant: Variant,
    pub form: Form,
    pub dims: usize,
    /// Set for `d ≥ 2`.
    pub scheme: Option<Scheme>,
}

impl BlockEncoding {
    /// Points per dimension.
    pub fn points(&self) -> usize {
        let n = self.circuit.layout().system_range().len() / self.dims;
        1 << n
    }

    pub fn manifest(&self, qasm_file: impl Into<String>) -> Manifest {
        Manifest {
            variant: self.variant,
            size: self.points(),
            d: self.dims,
            m: self.ancillas,
            eta: self.eta,
            form: self.form,
            scheme: self.scheme,
            qasm_file: qasm_file.into(),
        }
    }
}

/// Sidecar written next to an exported circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub size: usize,
    pub d: usize,
    pub m: usize,
    pub eta: f64,
    pub form: Form,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    pub qasm_file: String,
}

/// Diagonal patterns that have a one-ancilla encoding.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Ones,
    /// `(1, …, 1, v)`.
    OnesButLast(f64),
    /// `(0, …, 0, x)`.
    ZerosButLast(f64),
}

fn classify(diag: &[f64]) -> Result<Shape> {
    let (&last, rest) = diag.split_last().ok_or_else(|| Error::UnsupportedDiagonal(Vec::new()))?;
    let unsupported = || Error::UnsupportedDiagonal(diag.to_vec());
    if !(-1.0..=1.0).contains(&last) {
        return Err(unsupported());
    }
    if rest.iter().all(|&v| v == 1.0) {
        Ok(if last == 1.0 { Shape::Ones } else { Shape::OnesButLast(last) })
    } else if rest.iter().all(|&v| v == 0.0) {
        Ok(Shape::ZerosButLast(last))
    } else {
        Err(unsupported())
    }
}

/// `Ry` angle whose `⟨0|Ry|0⟩` is `w`.
fn weight_angle(w: f64) -> f64 {
    2.0 * w.acos()
}

/// Angle `θ` with `cos θ = v`, split as `Ry(θ)` before and `Ry(−θ)` after a
/// phase flip.
fn diag_angle(v: f64) -> f64 {
    2.0 * ((1.0 + v) / 2.0).sqrt().acos()
}

/// Gates of one term, uncontrolled, acting on the inner ancilla `a`, the
/// weight ancilla `p` and the system register.
fn term_gates(term: &BlockDiagTerm, shape: Shape, a: Option<usize>, p: Option<usize>, sys: &[usize]) -> Result<Vec<Gate>> {
    let (top, lsb) = (&sys[..sys.len() - 1], sys[sys.len() - 1]);
    let need = |q: Option<usize>| q.ok_or_else(|| Error::UnsupportedDiagonal(term.diag.clone()));
    let flip_on_top = |a: usize| {
        let mut qs = vec![a];
        qs.extend_from_slice(top);
        Gate::mcz(&qs)
    };
    let mut body = Vec::new();
    match shape {
        Shape::Ones => {}
        Shape::OnesButLast(v) => {
            let a = need(a)?;
            if v == 0.0 {
                body.extend([Gate::H(a), flip_on_top(a), Gate::H(a)]);
            } else {
                let theta = diag_angle(v);
                body.extend([Gate::Ry(a, theta), flip_on_top(a), Gate::Ry(a, -theta)]);
            }
        }
        Shape::ZerosButLast(x) => {
            let a = need(a)?;
            body.extend([Gate::H(a), Gate::Z(a), flip_on_top(a), Gate::H(a)]);
            if x != 1.0 {
                body.push(Gate::Ry(need(p)?, weight_angle(x)));
            }
        }
    }
    match term.pauli {
        Pauli::I => {}
        Pauli::X => body.push(Gate::X(lsb)),
        Pauli::Y => body.push(Gate::Y(lsb)),
        Pauli::Z => body.push(Gate::Z(lsb)),
    }
    if term.c == 1 {
        body.insert(0, Gate::Add1Dag(sys.to_vec()));
        body.push(Gate::Add1(sys.to_vec()));
    }
    Ok(body)
}

/// Circuit for a single term without its sign: layout
/// `[inner ancillas][system n]`, block `P_c (diag ⊗ σ) P_c†`.
pub fn encode_term(term: &BlockDiagTerm, n: usize) -> Result<Circuit> {
    let shape = classify(&term.diag)?;
    let inner = match shape {
        Shape::Ones => 0,
        Shape::OnesButLast(_) => 1,
        Shape::ZerosButLast(x) => 1 + usize::from(x != 1.0),
    };
    let layout = Layout::new().with(RegisterKind::Inner, inner).with(RegisterKind::System, n);
    let sys = layout.qubits(RegisterKind::System);
    let (a, p) = ((inner > 0).then_some(0), (inner > 1).then_some(1));
    Circuit::from_gates(layout, term_gates(term, shape, a, p, &sys)?)
}

/// One ancilla flipped to `|1⟩`, so the projected block vanishes.
pub fn zero_block_encoding(n: usize) -> Circuit {
    let layout = Layout::new().with(RegisterKind::Inner, 1).with(RegisterKind::System, n);
    Circuit::from_gates(layout, [Gate::X(0)]).expect("single gate")
}

fn ceil_log2(k: usize) -> usize {
    k.next_power_of_two().trailing_zeros() as usize
}

/// Phase −1 on the select state `value`.
fn select_phase(sel: &[usize], value: usize) -> Vec<Gate> {
    let (&last, rest) = sel.split_last().expect("non-empty select register");
    let controls = Control::pattern(rest, value >> 1);
    let z = Gate::controlled(controls, Gate::Z(last)).expect("distinct select qubits");
    if value & 1 == 1 {
        vec![z]
    } else {
        vec![Gate::X(last), z, Gate::X(last)]
    }
}

/// Canonical LCU circuit for a decomposition on `n` system qubits.
pub fn lcu_from_decomposition(dec: &Decomposition, n: usize) -> Result<(Circuit, f64)> {
    let shapes = dec.terms.iter().map(|t| classify(&t.diag)).collect::<Result<Vec<_>>>()?;
    if let Some(t) = dec.terms.iter().find(|t| t.chi.abs() != 1.0) {
        return Err(Error::UnsupportedDiagonal(vec![t.chi]));
    }
    let k = ceil_log2(dec.terms.len()).max(1);
    let padded = 1usize << k;
    let needs_inner = padded > dec.terms.len() || shapes.iter().any(|s| *s != Shape::Ones);
    let needs_weight = shapes.iter().any(|s| matches!(s, Shape::ZerosButLast(_)));
    let layout = Layout::new()
        .with(RegisterKind::Lcu, k)
        .with(RegisterKind::Inner, usize::from(needs_inner) + usize::from(needs_weight))
        .with(RegisterKind::System, n);
    let sel = layout.qubits(RegisterKind::Lcu);
    let inner = layout.qubits(RegisterKind::Inner);
    let a = inner.first().copied().filter(|_| needs_inner);
    let p = inner.last().copied().filter(|_| needs_weight);
    let sys = layout.qubits(RegisterKind::System);

    let mut circuit = Circuit::new(layout);
    circuit.extend(sel.iter().map(|&q| Gate::H(q)))?;
    for (j, (term, &shape)) in dec.terms.iter().zip(&shapes).enumerate() {
        let controls = Control::pattern(&sel, j);
        for g in term_gates(term, shape, a, p, &sys)? {
            circuit.push(Gate::controlled(controls.clone(), g)?)?;
        }
        if term.chi < 0.0 {
            circuit.extend(select_phase(&sel, j))?;
        }
    }
    for j in dec.terms.len()..padded {
        let a = a.expect("padding allocates an inner ancilla");
        circuit.push(Gate::controlled(Control::pattern(&sel, j), Gate::X(a))?)?;
    }
    circuit.extend(sel.iter().map(|&q| Gate::H(q)))?;
    Ok((circuit, padded as f64))
}

fn with_top(qs: &[usize], top: &[usize]) -> Vec<usize> {
    let mut v = qs.to_vec();
    v.extend_from_slice(top);
    v
}

fn periodic_simplified(n: usize) -> Result<Circuit> {
    let layout = Layout::new().with(RegisterKind::Lcu, 2).with(RegisterKind::System, n);
    let sys = layout.qubits(RegisterKind::System);
    let (a0, a1, lsb) = (0, 1, sys[n - 1]);
    Circuit::from_gates(
        layout,
        [
            Gate::H(a0),
            Gate::H(a1),
            Gate::X(a0),
            Gate::mcx(&[a0, a1], lsb),
            Gate::X(a0),
            Gate::Z(a1),
            Gate::Add1Dag(sys.clone()),
            Gate::mcx(&[a0, a1], lsb),
            Gate::H(a0),
            Gate::H(a1),
            Gate::Add1(sys),
        ],
    )
}

/// Dirichlet and Neumann differ only in which select qubits gate the
/// boundary flip on the shifted terms.
fn dirichlet_neumann_simplified(n: usize, neumann: bool) -> Result<Circuit> {
    let layout = Layout::new().with(RegisterKind::Lcu, 2).with(RegisterKind::Inner, 1).with(RegisterKind::System, n);
    let sys = layout.qubits(RegisterKind::System);
    let (a0, a1, a2) = (0, 1, 2);
    let (top, lsb) = (&sys[..n - 1], sys[n - 1]);
    let flip = if neumann { with_top(&[a0, a2], top) } else { with_top(&[a0, a1, a2], top) };
    Circuit::from_gates(
        layout,
        [
            Gate::H(a0),
            Gate::H(a1),
            Gate::H(a2),
            Gate::X(a0),
            Gate::mcx(&[a0, a1], lsb),
            Gate::X(a0),
            Gate::Z(a1),
            Gate::Add1Dag(sys.clone()),
            Gate::mcz(&flip),
            Gate::mcx(&[a0, a1], lsb),
            Gate::H(a0),
            Gate::H(a1),
            Gate::H(a2),
            Gate::Add1(sys.clone()),
        ],
    )
}

/// Robin rotation angles `(θ, φ)` for a boundary entry `x ∈ {C, D}`:
/// `cos²(θ/2) = (1 + x/2)/2` and `cos(φ/2) = 1 − x/2`.
pub fn robin_angles(x: f64) -> (f64, f64) {
    (diag_angle(x / 2.0), weight_angle(1.0 - x / 2.0))
}

fn robin_simplified(n: usize, c_entry: f64, d_entry: f64) -> Result<Circuit> {
    let layout = Layout::new().with(RegisterKind::Lcu, 3).with(RegisterKind::Inner, 2).with(RegisterKind::System, n);
    let sys = layout.qubits(RegisterKind::System);
    let (s0, s1, s2, a, p) = (0, 1, 2, 3, 4);
    let (top, lsb) = (&sys[..n - 1], sys[n - 1]);
    let (theta_d, phi_d) = robin_angles(d_entry);
    let (theta_c, phi_c) = robin_angles(c_entry);
    let all = [s0, s1, s2];
    // Controlled Ry(φ) on the weight ancilla from two Toffoli-type flips.
    let weight = |phi: f64| [Gate::mcx(&all, p), Gate::Ry(p, -phi / 2.0), Gate::mcx(&all, p), Gate::Ry(p, phi / 2.0)];

    let mut g = vec![Gate::H(s0), Gate::H(s1), Gate::H(s2)];
    // Unshifted terms.
    g.extend([Gate::X(s0), Gate::X(s1), Gate::X(s2), Gate::Ry(a, theta_d)]);
    g.push(Gate::mcz(&with_top(&[s0, s1, s2, a], top)));
    g.extend([Gate::X(s2), Gate::Ry(a, -theta_d), Gate::H(a)]);
    g.push(Gate::mcz(&[s1, s2, a]));
    g.push(Gate::mcz(&with_top(&[s0, s1, s2, a], top)));
    g.push(Gate::mcz(&[s0, s1, s2, lsb]));
    g.extend(weight(phi_d));
    g.push(Gate::X(s1));
    g.push(Gate::mcz(&[s1, s2]));
    g.push(Gate::mcx(&all, lsb));
    // Shifted terms.
    g.extend([Gate::X(s0), Gate::X(s1), Gate::Add1Dag(sys.clone())]);
    g.push(Gate::mcz(&with_top(&[s0, s2, a], top)));
    g.push(Gate::mcz(&[s0, s1, s2, lsb]));
    g.extend(weight(phi_c));
    g.extend([Gate::H(a), Gate::X(s1)]);
    g.push(Gate::mcx(&all, lsb));
    g.extend([Gate::X(s1), Gate::X(s2), Gate::Ry(a, theta_c)]);
    g.push(Gate::mcz(&with_top(&[s0, s1, s2, a], top)));
    g.extend([Gate::X(s1), Gate::Ry(a, -theta_c), Gate::Add1(sys.clone())]);
    g.push(Gate::mcx(&[s1, s2], a));
    g.push(Gate::X(s2));
    g.extend([Gate::H(s0), Gate::H(s1), Gate::H(s2)]);
    Circuit::from_gates(layout, g)
}

fn simplified(dec: &Decomposition, bc: &BoundaryCondition, grid: &Grid) -> Result<(Circuit, f64)> {
    let n = grid.n as usize;
    match dec.variant {
        Variant::Periodic => Ok((periodic_simplified(n)?, 4.0)),
        Variant::Dirichlet => Ok((dirichlet_neumann_simplified(n, false)?, 4.0)),
        Variant::Neumann => Ok((dirichlet_neumann_simplified(n, true)?, 4.0)),
        Variant::Robin => {
            let (c, d) = bc.robin_diagonals(grid)?.expect("robin");
            Ok((robin_simplified(n, c, d)?, 8.0))
        }
    }
}

/// Block encoding of the one-dimensional stencil for `bc`.
pub fn encode(bc: &BoundaryCondition, grid: &Grid, form: Form) -> Result<BlockEncoding> {
    if grid.dims != 1 {
        return Err(Error::DomainError(format!("encode is one-dimensional, got d = {}; use encode_ndim", grid.dims)));
    }
    let dec = decompose(bc, grid)?;
    let (circuit, eta) = match form {
        Form::Lcu => lcu_from_decomposition(&dec, grid.n as usize)?,
        Form::Simplified => simplified(&dec, bc, grid)?,
    };
    Ok(BlockEncoding {
        ancillas: circuit.layout().ancillas(),
        circuit,
        eta,
        target_size: grid.points(),
        variant: bc.variant(),
        form,
        dims: 1,
        scheme: None,
    })
}

/// Block encoding of the `d`-dimensional Kronecker sum: an outer select
/// register of `⌈log₂ d⌉` qubits chooses the axis the one-dimensional
/// encoding acts on. `η = η₁ · 2^⌈log₂ d⌉`. Delegates to [`encode`] for
/// `d = 1`.
pub fn encode_ndim(bc: &BoundaryCondition, grid: &Grid, scheme: Scheme, form: Form) -> Result<BlockEncoding> {
    let d = grid.dims;
    let line = Grid { dims: 1, ..*grid };
    let base = encode(bc, &line, form)?;
    if d == 1 {
        return Ok(base);
    }
    let n = grid.n as usize;
    let m1 = base.ancillas;
    let k = ceil_log2(d);
    let layout = match scheme {
        Scheme::Shared => Layout::new().with(RegisterKind::Lcu, k).with(RegisterKind::Inner, m1),
        Scheme::Flagged => {
            Layout::new().with(RegisterKind::Lcu, k).with(RegisterKind::Flags, d).with(RegisterKind::Inner, d * m1)
        }
    }
    .with(RegisterKind::System, d * n);
    let total = layout.total();
    if total >= usize::BITS as usize {
        return Err(Error::SizeCapExceeded { size: total, cap: usize::BITS as usize - 1 });
    }
    let sel = layout.qubits(RegisterKind::Lcu);
    let flags = layout.qubits(RegisterKind::Flags);
    let inner0 = layout.range(RegisterKind::Inner).start;
    let sys0 = layout.system_range().start;

    let mut circuit = Circuit::new(layout);
    circuit.extend(sel.iter().map(|&q| Gate::H(q)))?;
    for j in 0..d {
        let ancilla_base = match scheme {
            Scheme::Shared => inner0,
            Scheme::Flagged => inner0 + j * m1,
        };
        let map = |q: usize| if q < m1 { ancilla_base + q } else { sys0 + j * n + (q - m1) };
        let pattern = Control::pattern(&sel, j);
        match scheme {
            Scheme::Shared => {
                for g in base.circuit.gates() {
                    circuit.push(Gate::controlled(pattern.clone(), g.map_qubits(&map))?)?;
                }
            }
            Scheme::Flagged => {
                let flag = flags[j];
                circuit.push(Gate::controlled(pattern.clone(), Gate::X(flag))?)?;
                for g in base.circuit.gates() {
                    circuit.push(Gate::controlled(vec![Control::on(flag)], g.map_qubits(&map))?)?;
                }
                circuit.push(Gate::controlled(pattern, Gate::X(flag))?)?;
            }
        }
    }
    // Zero terms for the unused select values.
    let spoiler = match scheme {
        Scheme::Shared => inner0,
        Scheme::Flagged => flags[0],
    };
    for j in d..1 << k {
        circuit.push(Gate::controlled(Control::pattern(&sel, j), Gate::X(spoiler))?)?;
    }
    circuit.extend(sel.iter().map(|&q| Gate::H(q)))?;

    Ok(BlockEncoding {
        ancillas: circuit.layout().ancillas(),
        circuit,
        eta: base.eta * (1 << k) as f64,
        target_size: grid.size(),
        variant: bc.variant(),
        form,
        dims: d,
        scheme: Some(scheme),
    })
}
