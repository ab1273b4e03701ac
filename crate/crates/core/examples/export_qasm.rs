//! Write a circuit as OpenQASM 3 with its JSON manifest, read it back and
//! check the block survives.

use qbe::circuit::emit_qasm;
use qbe::encoder::{encode, Form};
use qbe::fdm::{BoundaryCondition, Grid, Variant};
use qbe::qasm::parse_qasm;
use qbe::sim::{extract_block, extract_circuit_block};

fn main() -> qbe::Result<()> {
    let bc = BoundaryCondition::homogeneous(Variant::Neumann);
    let grid = Grid::new(3, 1, &bc)?;
    let be = encode(&bc, &grid, Form::Simplified)?;

    let dir = std::env::temp_dir().join("qbe-export");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("neumann.qasm");
    let text = emit_qasm(&be.circuit);
    std::fs::write(&path, &text)?;
    std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&be.manifest("neumann.qasm"))?)?;
    println!("wrote {} ({} lines)", path.display(), text.lines().count());

    let parsed = parse_qasm(&std::fs::read_to_string(&path)?)?.into_circuit(be.circuit.layout().clone())?;
    let diff = extract_block(&be)?.max_abs_diff(&extract_circuit_block(&parsed, be.target_size)?);
    println!("round-trip block difference {diff:e}");
    Ok(())
}
