//! Build the Q-model over V_3 and audit it.

use std::collections::BTreeMap;

use nfu_core::formulae::parse_formula;
use nfu_core::qmodel::{
    audit_comprehension, audit_extensionality, audit_pairing, build_q, v3_identity,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = build_q(&v3_identity())?;
    println!("{}", serde_json::to_string_pretty(&q.summary())?);
    println!("extensionality: {}", audit_extensionality(&q).pass);
    println!("pairing: {}", audit_pairing(&q).pass);
    let phi = parse_formula("v0 = v0")?;
    println!(
        "witness for v0 = v0: {:?}",
        audit_comprehension(&q, &phi, &BTreeMap::new())?
    );
    Ok(())
}
