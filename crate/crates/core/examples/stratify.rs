//! Stratify a few formulas and build one comprehension instance.

use nfu_core::formulae::{comprehension_axiom, parse_formula, stratify};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for src in [
        "exists y. (x in y and y in z)",
        "x in x",
        "forall y. (y in x <-> y = y)",
    ] {
        let phi = parse_formula(src)?;
        match stratify(&phi) {
            Ok(s) => println!("{src}\n  stratified: {:?}", s.assignment),
            Err(f) => println!(
                "{src}\n  not stratified, cycle offset sum {}",
                f.offset_sum()
            ),
        }
    }
    let phi = parse_formula("v0 in p")?;
    println!("{}", comprehension_axiom(&phi, &["p".to_string()])?);
    Ok(())
}
