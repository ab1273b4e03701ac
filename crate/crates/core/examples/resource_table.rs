//! Gate counts of the simplified circuits next to the published numbers.

use qbe::encoder::{encode, Form};
use qbe::fdm::{BoundaryCondition, Grid, Variant};
use qbe::resources::{count_resources, reference_counts, ResourceReport, Table};

fn main() -> qbe::Result<()> {
    let mut headers = vec!["variant".to_string()];
    headers.extend(ResourceReport::FIELDS.iter().map(|f| f.to_string()));
    headers.push("matches".into());
    let mut table = Table::new(headers);
    for variant in Variant::ALL {
        let bc = BoundaryCondition::homogeneous(variant);
        let be = encode(&bc, &Grid::new(5, 1, &bc)?, Form::Simplified)?;
        let counts = count_resources(&be);
        let mut row = vec![variant.to_string()];
        row.extend(counts.values().iter().map(|v| v.to_string()));
        row.push(counts.mismatches(&reference_counts(variant)).is_empty().to_string());
        table.push(row);
    }
    print!("{}", table.render());
    Ok(())
}
