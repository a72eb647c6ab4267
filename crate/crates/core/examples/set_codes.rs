//! Enumerate small set codes and compare `e` with collapse membership.

use nfu_core::setcode::{collapse, decode_ordinal, e_rel, ordinal_code, valid_graphs_on};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphs: Vec<_> = (1..=3).flat_map(valid_graphs_on).collect();
    println!("{} valid codes on at most 3 nodes", graphs.len());
    for g in &graphs {
        println!("  {}", collapse(g)?);
    }
    let two = ordinal_code(2)?;
    let three = ordinal_code(3)?;
    println!("2 e 3: {}", e_rel(&two, &three)?);
    println!("3 decodes to {:?}", decode_ordinal(&three)?);
    Ok(())
}
