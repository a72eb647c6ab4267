//! Compare supported functions, find a minimal support and code a subset.

use std::collections::BTreeMap;

use nfu_core::ramsey::{LevelSequence, Truncation};
use nfu_core::termmodel::{
    code_subset, coding_frame, diagonal, equiv, min_block_support, shift_k, SupportedFunction,
    Target,
};

const K: usize = 8;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let elements: Vec<String> = (0..K).map(|n| n.to_string()).collect();
    let j: BTreeMap<String, String> = elements.iter().map(|e| (e.clone(), e.clone())).collect();
    let target = Target {
        elements,
        relations: BTreeMap::new(),
        j: Some(j),
    };
    let levels = LevelSequence::trivial(K);
    let trunc = Truncation::default();

    // Declared on three coordinates, reads only the middle one.
    let f = SupportedFunction::from_fn(vec![-1, 0, 1], K, |x| x[1].to_string());
    let report = min_block_support(&f, &target, &levels, (-1, 1), trunc)?;
    println!("minimal support: {:?}", report.minimal);
    println!(
        "f ~ shift(f): {:?}",
        equiv(&f, &shift_k(&f), &target, &levels, trunc)?.truth
    );
    println!(
        "diag(3) ~ shift(diag(3)): {:?}",
        equiv(
            &diagonal("3"),
            &shift_k(&diagonal("3")),
            &target,
            &levels,
            trunc
        )?
        .truth
    );

    let frame = coding_frame(K, &[1, 4]);
    let subset = ["o1".to_string(), "o4".to_string()];
    let h = code_subset(&frame, &subset, K)?;
    println!("code for {{o1,o4}}: {:?}", h.table.get("1"));
    Ok(())
}
