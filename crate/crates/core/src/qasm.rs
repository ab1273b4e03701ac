//! Reader for the OpenQASM 3 subset written by [`crate::circuit::emit_qasm`]:
//! one `qubit[Q] q;` register, the gates `h x y z ry(θ)`, and `ctrl @` /
//! `ctrl(k) @` modifiers.

use crate::circuit::{Circuit, Control, Gate, Layout};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedQasm {
    pub qubit_count: usize,
    pub gates: Vec<Gate>,
}

impl ParsedQasm {
    /// Attaches a layout, which must cover exactly the declared qubits.
    pub fn into_circuit(self, layout: Layout) -> Result<Circuit> {
        if layout.total() != self.qubit_count {
            return Err(Error::DimensionMismatch { expected: layout.total(), found: self.qubit_count });
        }
        Circuit::from_gates(layout, self.gates)
    }
}

pub fn parse_qasm(text: &str) -> Result<ParsedQasm> {
    let mut qubit_count = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: &str| Error::QasmParse { line: line_no, message: message.to_string() };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line.strip_suffix(';').ok_or_else(|| err("missing ';'"))?.trim();
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let (count, name) = rest.split_once(']').ok_or_else(|| err("malformed register"))?;
            if name.trim() != "q" {
                return Err(err("register must be named q"));
            }
            qubit_count = Some(count.trim().parse::<usize>().map_err(|_| err("bad register size"))?);
            continue;
        }
        let count = qubit_count.ok_or_else(|| err("gate before register declaration"))?;
        let gate = parse_gate(stmt).map_err(|m| err(&m))?;
        if gate.qubits().iter().any(|&q| q >= count) {
            return Err(err("qubit index out of range"));
        }
        gates.push(gate);
    }
    let qubit_count = qubit_count.ok_or(Error::QasmParse { line: 0, message: "no qubit register".into() })?;
    Ok(ParsedQasm { qubit_count, gates })
}

fn parse_gate(stmt: &str) -> std::result::Result<Gate, String> {
    let mut rest = stmt;
    let mut n_controls = 0usize;
    while let Some(after) = rest.strip_prefix("ctrl") {
        let after = after.trim_start();
        let (k, after) = match after.strip_prefix('(') {
            Some(inner) => {
                let (k, tail) = inner.split_once(')').ok_or("unclosed ctrl(")?;
                (k.trim().parse::<usize>().map_err(|_| "bad ctrl count")?, tail)
            }
            None => (1, after),
        };
        rest = after.trim_start().strip_prefix('@').ok_or("expected '@' after ctrl")?.trim_start();
        n_controls += k;
    }
    let (head, args) = match rest.find(" q[") {
        Some(i) => (&rest[..i], &rest[i + 1..]),
        None => return Err("missing operands".into()),
    };
    let qubits = args
        .split(',')
        .map(|a| {
            a.trim()
                .strip_prefix("q[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| format!("bad operand '{}'", a.trim()))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if qubits.len() != n_controls + 1 {
        return Err(format!("expected {} operands, got {}", n_controls + 1, qubits.len()));
    }
    let target = qubits[n_controls];
    let base = match head.trim() {
        "h" => Gate::H(target),
        "x" => Gate::X(target),
        "y" => Gate::Y(target),
        "z" => Gate::Z(target),
        other => {
            let angle = other
                .strip_prefix("ry(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| format!("unknown gate '{other}'"))?;
            Gate::Ry(target, angle.trim().parse::<f64>().map_err(|_| format!("bad angle '{angle}'"))?)
        }
    };
    let controls = qubits[..n_controls].iter().map(|&q| Control::on(q)).collect();
    Gate::controlled(controls, base).map_err(|e| e.to_string())
}
