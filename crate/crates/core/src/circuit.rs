//! Gate-level circuit representation.
//!
//! Qubits are big-endian: qubit 0 of a register is its most significant bit,
//! so the basis state `|i⟩` of an `n`-qubit register is the integer `i`.
//! Multi-controlled gates and the incrementer are kept as single nodes; they
//! are only expanded for simulation and export.

use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Fires on `|0⟩`.
    Open,
    /// Fires on `|1⟩`.
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Closed }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Open }
    }

    /// Controls that fire when `qubits`, read big-endian, hold `value`.
    pub fn pattern(qubits: &[usize], value: usize) -> Vec<Control> {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .map(|(b, &q)| if (value >> (k - 1 - b)) & 1 == 1 { Control::on(q) } else { Control::off(q) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    /// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    Ry(usize, f64),
    /// `|i⟩ ↦ |i + 1 mod 2ⁿ⟩` on the listed qubits, most significant first.
    Add1(Vec<usize>),
    Add1Dag(Vec<usize>),
    Controlled { controls: Vec<Control>, base: Box<Gate> },
}

impl Gate {
    /// Attaches controls to `base`, merging with any controls it already has.
    pub fn controlled(controls: Vec<Control>, base: Gate) -> Result<Gate> {
        let gate = match base {
            Gate::Controlled { controls: inner, base } => {
                let mut all = controls;
                all.extend(inner);
                Gate::Controlled { controls: all, base }
            }
            base if controls.is_empty() => return Ok(base),
            base => Gate::Controlled { controls, base: Box::new(base) },
        };
        gate.validate()?;
        Ok(gate)
    }

    /// Multi-controlled X; all controls closed.
    pub fn mcx(controls: &[usize], target: usize) -> Gate {
        Gate::Controlled { controls: controls.iter().map(|&q| Control::on(q)).collect(), base: Box::new(Gate::X(target)) }
    }

    /// Phase −1 on the all-ones state of `qubits`. Symmetric in its
    /// qubits; stored as Z on the last one controlled by the rest.
    pub fn mcz(qubits: &[usize]) -> Gate {
        let (&target, controls) = qubits.split_last().expect("mcz needs at least one qubit");
        if controls.is_empty() {
            return Gate::Z(target);
        }
        Gate::Controlled { controls: controls.iter().map(|&q| Control::on(q)).collect(), base: Box::new(Gate::Z(target)) }
    }

    /// Qubits the base operation acts on.
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::Ry(q, _) => vec![*q],
            Gate::Add1(r) | Gate::Add1Dag(r) => r.clone(),
            Gate::Controlled { base, .. } => base.targets(),
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Controlled { controls, .. } => controls,
            _ => &[],
        }
    }

    /// The gate with its controls stripped.
    pub fn base(&self) -> &Gate {
        match self {
            Gate::Controlled { base, .. } => base,
            g => g,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self.controls().iter().map(|c| c.qubit).collect();
        qs.extend(self.targets());
        qs
    }

    fn validate(&self) -> Result<()> {
        if let Gate::Add1(r) | Gate::Add1Dag(r) = self.base() {
            if r.is_empty() {
                return Err(Error::InvalidCircuit("incrementer on an empty register".into()));
            }
        }
        let mut qs = self.qubits();
        qs.sort_unstable();
        if qs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCircuit(format!("gate {self} repeats a qubit")));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Ry(q, t) => Gate::Ry(*q, -t),
            Gate::Add1(r) => Gate::Add1Dag(r.clone()),
            Gate::Add1Dag(r) => Gate::Add1(r.clone()),
            Gate::Controlled { controls, base } => Gate::Controlled { controls: controls.clone(), base: Box::new(base.adjoint()) },
            g => g.clone(),
        }
    }

    pub fn map_qubits(&self, f: &impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Y(q) => Gate::Y(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Ry(q, t) => Gate::Ry(f(*q), *t),
            Gate::Add1(r) => Gate::Add1(r.iter().map(|&q| f(q)).collect()),
            Gate::Add1Dag(r) => Gate::Add1Dag(r.iter().map(|&q| f(q)).collect()),
            Gate::Controlled { controls, base } => Gate::Controlled {
                controls: controls.iter().map(|c| Control { qubit: f(c.qubit), polarity: c.polarity }).collect(),
                base: Box::new(base.map_qubits(f)),
            },
        }
    }

    /// Replaces incrementers by their multi-controlled-X ladders; every
    /// returned gate has a single-qubit base.
    pub fn expand(&self) -> Vec<Gate> {
        let (controls, base) = (self.controls(), self.base());
        let ladder = match base {
            Gate::Add1(r) => add1_ladder(r),
            Gate::Add1Dag(r) => {
                let mut l = add1_ladder(r);
                l.reverse();
                l
            }
            _ => return vec![self.clone()],
        };
        ladder
            .into_iter()
            .map(|g| match g {
                Gate::Controlled { controls: inner, base } => {
                    let mut all = controls.to_vec();
                    all.extend(inner);
                    Gate::Controlled { controls: all, base }
                }
                g if controls.is_empty() => g,
                g => Gate::Controlled { controls: controls.to_vec(), base: Box::new(g) },
            })
            .collect()
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H({q})"),
            Gate::X(q) => write!(f, "X({q})"),
            Gate::Y(q) => write!(f, "Y({q})"),
            Gate::Z(q) => write!(f, "Z({q})"),
            Gate::Ry(q, t) => write!(f, "Ry({q}, {t:.6})"),
            Gate::Add1(r) => write!(f, "ADD1{r:?}"),
            Gate::Add1Dag(r) => write!(f, "ADD1†{r:?}"),
            Gate::Controlled { controls, base } => {
                let cs: Vec<String> = controls
                    .iter()
                    .map(|c| match c.polarity {
                        Polarity::Closed => format!("{}", c.qubit),
                        Polarity::Open => format!("!{}", c.qubit),
                    })
                    .collect();
                write!(f, "C[{}]·{base}", cs.join(","))
            }
        }
    }
}

/// The incrementer as a ladder: for each bit from the most significant down
/// to the second least significant, flip it when every less significant bit
/// is 1; then flip the least significant bit.
fn add1_ladder(register: &[usize]) -> Vec<Gate> {
    let n = register.len();
    let mut gates = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        gates.push(Gate::mcx(&register[k + 1..], register[k]));
    }
    if let Some(&lsb) = register.last() {
        gates.push(Gate::X(lsb));
    }
    gates
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegisterKind {
    /// LCU select register.
    Lcu,
    /// Ancillas used inside individual terms.
    Inner,
    /// Per-dimension flags of the flagged higher-dimensional scheme.
    Flags,
    System,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub kind: RegisterKind,
    pub start: usize,
    pub len: usize,
}

/// Contiguous named registers; ancilla registers come first so that the
/// system register holds the least significant qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    registers: Vec<Register>,
}

impl Layout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a register. Empty registers are skipped.
    pub fn with(mut self, kind: RegisterKind, len: usize) -> Self {
        if len > 0 {
            let start = self.total();
            self.registers.push(Register { kind, start, len });
        }
        self
    }

    /// A single system register.
    pub fn system(n: usize) -> Self {
        Self::new().with(RegisterKind::System, n)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total(&self) -> usize {
        self.registers.last().map_or(0, |r| r.start + r.len)
    }

    /// Range of the first register of `kind`, empty when absent.
    pub fn range(&self, kind: RegisterKind) -> Range<usize> {
        self.registers.iter().find(|r| r.kind == kind).map_or(0..0, |r| r.start..r.start + r.len)
    }

    pub fn qubits(&self, kind: RegisterKind) -> Vec<usize> {
        self.range(kind).collect()
    }

    pub fn system_range(&self) -> Range<usize> {
        self.range(RegisterKind::System)
    }

    pub fn ancillas(&self) -> usize {
        self.total() - self.system_range().len()
    }

    pub fn is_system(&self, qubit: usize) -> bool {
        self.system_range().contains(&qubit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    qubit_count: usize,
    layout: Layout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: Layout) -> Self {
        Self { qubit_count: layout.total(), layout, gates: Vec::new() }
    }

    pub fn from_gates(layout: Layout, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(layout);
        c.extend(gates)?;
        Ok(c)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate()?;
        if let Some(q) = gate.qubits().into_iter().find(|&q| q >= self.qubit_count) {
            return Err(Error::InvalidCircuit(format!("gate {gate} uses qubit {q} of {}", self.qubit_count)));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Reversed order, each gate inverted.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Every gate conditioned on `controls`.
    pub fn controlled(&self, controls: &[Control]) -> Result<Circuit> {
        let mut out = Circuit::new(self.layout.clone());
        for g in &self.gates {
            out.push(Gate::controlled(controls.to_vec(), g.clone())?)?;
        }
        Ok(out)
    }

    /// Relabels qubits onto a new layout.
    pub fn map_qubits(&self, layout: Layout, f: impl Fn(usize) -> usize) -> Result<Circuit> {
        Circuit::from_gates(layout, self.gates.iter().map(|g| g.map_qubits(&f)))
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::InvalidCircuit(format!(
                "cannot compose circuits on {} and {} qubits",
                self.qubit_count, other.qubit_count
            )));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Copy with gate `index` removed.
    pub fn without_gate(&self, index: usize) -> Circuit {
        let mut out = self.clone();
        out.gates.remove(index);
        out
    }

    /// Copy with every incrementer replaced by its ladder.
    pub fn expanded(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            layout: self.layout.clone(),
            gates: self.gates.iter().flat_map(Gate::expand).collect(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit on {} qubits", self.qubit_count)?;
        for r in self.layout.registers() {
            writeln!(f, "  {:?}: q[{}..{}]", r.kind, r.start, r.start + r.len)?;
        }
        for (i, g) in self.gates.iter().enumerate() {
            writeln!(f, "  {i:>3}: {g}")?;
        }
        Ok(())
    }
}

/// The `n`-qubit incrementer written out as its gate ladder.
pub fn add1_circuit(n: usize) -> Circuit {
    let register: Vec<usize> = (0..n).collect();
    Circuit::from_gates(Layout::system(n), add1_ladder(&register)).expect("ladder is well formed")
}

/// OpenQASM 3 text. Incrementers are expanded, open controls are wrapped in
/// X gates and angles are printed in shortest round-trip form.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let _ = writeln!(out, "qubit[{}] q;", circuit.qubit_count());
    for gate in circuit.gates().iter().flat_map(Gate::expand) {
        let open: Vec<usize> =
            gate.controls().iter().filter(|c| c.polarity == Polarity::Open).map(|c| c.qubit).collect();
        for q in &open {
            let _ = writeln!(out, "x q[{q}];");
        }
        let name = match gate.base() {
            Gate::H(_) => "h".to_string(),
            Gate::X(_) => "x".to_string(),
            Gate::Y(_) => "y".to_string(),
            Gate::Z(_) => "z".to_string(),
            Gate::Ry(_, t) => format!("ry({t})"),
            other => unreachable!("expanded gate with base {other}"),
        };
        let modifier = match gate.controls().len() {
            0 => String::new(),
            1 => "ctrl @ ".to_string(),
            k => format!("ctrl({k}) @ "),
        };
        let args: Vec<String> = gate.qubits().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, "{modifier}{name} {};", args.join(", "));
        for q in open.iter().rev() {
            let _ = writeln!(out, "x q[{q}];");
        }
    }
    out
}
