//! Gate accounting and cost formulas.
//!
//! [`count_resources`] sorts the gates of a circuit into seven classes:
//! Hadamards, bare Paulis, rotations, multi-controlled gates whose controls
//! stay in the ancilla registers (constant size), multi-controlled gates with
//! at least one control in the system register (size growing with `n`), and
//! incrementers. A controlled incrementer counts as an incrementer; a
//! controlled rotation counts as a controlled gate.
//!
//! [`CostModel`] and [`complexity_table`] evaluate the published asymptotic
//! formulas for implementing the large gates and for solving the full
//! problem. All logarithms are base 2.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::encoder::BlockEncoding;
use crate::fdm::Variant;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResourceReport {
    pub ancillae: usize,
    pub h_count: usize,
    pub pauli_count: usize,
    pub rotation_count: usize,
    pub small_controlled_count: usize,
    pub large_controlled_count: usize,
    pub add1_count: usize,
}

impl ResourceReport {
    pub const FIELDS: [&'static str; 7] = ["ancillae", "H", "sigma", "R", "C^O(1)", "C^O(n)", "ADD1"];

    pub fn values(&self) -> [usize; 7] {
        [
            self.ancillae,
            self.h_count,
            self.pauli_count,
            self.rotation_count,
            self.small_controlled_count,
            self.large_controlled_count,
            self.add1_count,
        ]
    }

    /// Fields that differ, as `(name, self, other)`.
    pub fn mismatches(&self, other: &ResourceReport) -> Vec<(&'static str, usize, usize)> {
        Self::FIELDS
            .iter()
            .zip(self.values().into_iter().zip(other.values()))
            .filter(|(_, (a, b))| a != b)
            .map(|(name, (a, b))| (*name, a, b))
            .collect()
    }
}

/// Published counts for the simplified one-dimensional circuits.
pub fn reference_counts(variant: Variant) -> ResourceReport {
    let r = |ancillae, h_count, pauli_count, rotation_count, small, large, add1_count| ResourceReport {
        ancillae,
        h_count,
        pauli_count,
        rotation_count,
        small_controlled_count: small,
        large_controlled_count: large,
        add1_count,
    };
    match variant {
        Variant::Periodic => r(2, 4, 3, 0, 2, 0, 2),
        Variant::Dirichlet | Variant::Neumann => r(3, 6, 3, 0, 2, 1, 2),
        Variant::Robin => r(5, 8, 12, 8, 11, 4, 2),
    }
}

pub fn count_circuit(circuit: &Circuit) -> ResourceReport {
    let layout = circuit.layout();
    let mut r = ResourceReport { ancillae: layout.ancillas(), ..Default::default() };
    for g in circuit.gates() {
        match g {
            Gate::H(_) => r.h_count += 1,
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) => r.pauli_count += 1,
            Gate::Ry(..) => r.rotation_count += 1,
            Gate::Add1(_) | Gate::Add1Dag(_) => r.add1_count += 1,
            Gate::Controlled { controls, base } => match **base {
                Gate::Add1(_) | Gate::Add1Dag(_) => r.add1_count += 1,
                _ if controls.iter().any(|c| layout.is_system(c.qubit)) => r.large_controlled_count += 1,
                _ => r.small_controlled_count += 1,
            },
        }
    }
    r
}

pub fn count_resources(be: &BlockEncoding) -> ResourceReport {
    count_circuit(&be.circuit)
}

/// Which primitive a cost model implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Primitive {
    /// `C^{O(n)}σ`.
    MultiControlled,
    /// The incrementer.
    Add1,
}

/// One row of the published implementation-cost table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostModel {
    LadderMultiControlled,
    GidneyMultiControlled,
    LadderAdd1,
    Draper2004,
    Takahashi2008,
    Takahashi2009,
    Wang2023Higher,
    Wang2023Reducing,
    Wang2024Count,
    Wang2024Depth,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub ancillae: f64,
    pub toffoli_depth: f64,
    pub toffoli_count: f64,
    /// True when the numbers are leading-order terms of an asymptotic
    /// formula rather than exact counts.
    pub asymptotic: bool,
}

impl CostModel {
    pub const ALL: [CostModel; 10] = [
        CostModel::LadderMultiControlled,
        CostModel::GidneyMultiControlled,
        CostModel::LadderAdd1,
        CostModel::Draper2004,
        CostModel::Takahashi2008,
        CostModel::Takahashi2009,
        CostModel::Wang2023Higher,
        CostModel::Wang2023Reducing,
        CostModel::Wang2024Count,
        CostModel::Wang2024Depth,
    ];

    pub fn primitive(self) -> Primitive {
        match self {
            CostModel::LadderMultiControlled | CostModel::GidneyMultiControlled => Primitive::MultiControlled,
            _ => Primitive::Add1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CostModel::LadderMultiControlled => "borrowed-qubit ladder (C^O(n))",
            CostModel::GidneyMultiControlled => "Gidney 2018 (C^O(n))",
            CostModel::LadderAdd1 => "borrowed-qubit ladder (ADD1)",
            CostModel::Draper2004 => "Draper et al. 2004",
            CostModel::Takahashi2008 => "Takahashi et al. 2008",
            CostModel::Takahashi2009 => "Takahashi et al. 2009",
            CostModel::Wang2023Higher => "Wang et al. 2023a",
            CostModel::Wang2023Reducing => "Wang et al. 2023b",
            CostModel::Wang2024Count => "Wang et al. 2024 (count-optimal)",
            CostModel::Wang2024Depth => "Wang et al. 2024 (depth-optimal)",
        }
    }

    /// The formulas as published: `(ancillae, depth, count)`.
    pub fn formulas(self) -> [&'static str; 3] {
        match self {
            CostModel::LadderMultiControlled | CostModel::LadderAdd1 => ["0", "O(n)", "O(n)"],
            CostModel::GidneyMultiControlled => ["O(n)", "O(log n)", "O(n)"],
            CostModel::Draper2004 => ["2n - 2log n", "2log n + 1", "5n - 6log n - 3"],
            CostModel::Takahashi2008 => ["3n/log n + n", "30log n", "28n"],
            CostModel::Takahashi2009 => ["3n/log n + n", "18log n", "7n"],
            CostModel::Wang2023Higher => ["6n - log n + O(1)", "4log n + O(1)", "8n - 3log n + O(1)"],
            CostModel::Wang2023Reducing => ["12n - 6log n + O(1)", "4log n + O(1)", "13n - 6log n + O(1)"],
            CostModel::Wang2024Count => ["n log n + n + log n + 2", "2log n + 1", "1.5n log n - n - 6log n"],
            CostModel::Wang2024Depth => ["n log n + n + log n + 2", "log n + 1", "0.5n log n"],
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Evaluates a cost model at `n` qubits. Only the logarithmic-depth adder
/// of Draper et al. has exact formulas; every other row is reduced to its
/// leading term and flagged asymptotic, since the lower-order terms are
/// either unspecified or only valid for large `n` (the count-optimal 2024
/// formula is negative below `n = 4`).
pub fn evaluate_cost(model: CostModel, n: u32) -> CostEstimate {
    let nf = f64::from(n.max(2));
    let lg = nf.log2();
    let est = |ancillae, toffoli_depth, toffoli_count| CostEstimate {
        ancillae,
        toffoli_depth,
        toffoli_count,
        asymptotic: model != CostModel::Draper2004,
    };
    match model {
        CostModel::LadderMultiControlled | CostModel::LadderAdd1 => est(0.0, nf, nf),
        CostModel::GidneyMultiControlled => est(nf, lg, nf),
        CostModel::Draper2004 => est(2.0 * nf - 2.0 * lg, 2.0 * lg + 1.0, 5.0 * nf - 6.0 * lg - 3.0),
        CostModel::Takahashi2008 => est(nf, 30.0 * lg, 28.0 * nf),
        CostModel::Takahashi2009 => est(nf, 18.0 * lg, 7.0 * nf),
        CostModel::Wang2023Higher => est(6.0 * nf, 4.0 * lg, 8.0 * nf),
        CostModel::Wang2023Reducing => est(12.0 * nf, 4.0 * lg, 13.0 * nf),
        CostModel::Wang2024Count => est(nf * lg, 2.0 * lg, 1.5 * nf * lg),
        CostModel::Wang2024Depth => est(nf * lg, lg, 0.5 * nf * lg),
    }
}

/// Arguments of the end-to-end complexity comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ComplexityInputs {
    /// Condition number, points per dimension, dimensions, solver error.
    Direct { kappa: f64, points: f64, d: f64, epsilon: f64 },
    /// Dimensions, approximation order, discretization error, solver error.
    Discretization { d: f64, alpha: f64, delta: f64, epsilon: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub method: String,
    pub formula: String,
    /// Leading-order value with all constants set to 1.
    pub estimate: f64,
}

/// Leading-order time complexity of classical CG, generic quantum
/// encodings and the two block-diagonal encodings. The unspecified
/// polynomial of the generic quantum row is taken as the product of its
/// arguments.
pub fn complexity_table(inputs: ComplexityInputs) -> Result<Vec<ComplexityRow>> {
    let row = |method: &str, formula: &str, estimate: f64| ComplexityRow {
        method: method.to_string(),
        formula: formula.to_string(),
        estimate,
    };
    match inputs {
        ComplexityInputs::Direct { kappa, points, d, epsilon } => {
            positive(&[("kappa", kappa), ("N", points), ("d", d), ("epsilon", epsilon)])?;
            if points <= 2.0 || epsilon >= 1.0 {
                return Err(Error::DomainError("need N > 2 and epsilon < 1".into()));
            }
            let le = (1.0 / epsilon).log2();
            let ln = points.log2();
            let lln = ln.log2();
            Ok(vec![
                row("classical CG", "sqrt(kappa) d N^d log(1/eps)", kappa.sqrt() * d * points.powf(d) * le),
                row("quantum, generic encoding", "kappa poly(d, log N) log(1/eps)", kappa * d * ln * le),
                row("block-diagonal, shared", "kappa d log(log N) log(1/eps)", kappa * d * lln * le),
                row(
                    "block-diagonal, flagged",
                    "kappa log(log N) log(1/eps) + kappa d log(1/eps)",
                    kappa * lln * le + kappa * d * le,
                ),
            ])
        }
        ComplexityInputs::Discretization { d, alpha, delta, epsilon } => {
            positive(&[("d", d), ("alpha", alpha), ("delta", delta), ("epsilon", epsilon)])?;
            if delta >= 1.0 || epsilon >= 1.0 {
                return Err(Error::DomainError("need delta < 1 and epsilon < 1".into()));
            }
            let le = (1.0 / epsilon).log2();
            let ld = (1.0 / delta).log2();
            let inner = (alpha * d * ld).log2();
            Ok(vec![
                row("classical CG", "d^1.5 (1/delta)^(alpha d) log(1/eps)", d.powf(1.5) * (1.0 / delta).powf(alpha * d) * le),
                row("quantum, generic encoding", "d poly(alpha d, log(1/delta)) log(1/eps)", d * alpha * d * ld * le),
                row("block-diagonal, shared", "d^2 log(alpha d log(1/delta)) log(1/eps)", d * d * inner * le),
                row(
                    "block-diagonal, flagged",
                    "d log(alpha d log(1/delta)) log(1/eps) + d^2 log(1/eps)",
                    d * inner * le + d * d * le,
                ),
            ])
        }
    }
}

fn positive(args: &[(&str, f64)]) -> Result<()> {
    for (name, v) in args {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::DomainError(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// Plain table with text, CSV and JSON renderings.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows as JSON objects keyed by header.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    self.headers.iter().cloned().zip(row.iter().map(|c| serde_json::Value::String(c.clone()))).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Cost table for all models at `n`.
pub fn cost_table(n: u32) -> Table {
    let mut t = Table::new(["primitive", "implementation", "ancillae", "toffoli depth", "toffoli count", "asymptotic", "published"]);
    for m in CostModel::ALL {
        let e = evaluate_cost(m, n);
        let prim = match m.primitive() {
            Primitive::MultiControlled => "C^O(n)",
            Primitive::Add1 => "ADD1",
        };
        let [a, d, c] = m.formulas();
        t.push([
            prim.to_string(),
            m.label().to_string(),
            format!("{:.2}", e.ancillae),
            format!("{:.2}", e.toffoli_depth),
            format!("{:.2}", e.toffoli_count),
            e.asymptotic.to_string(),
            format!("{a} | {d} | {c}"),
        ]);
    }
    t
}
