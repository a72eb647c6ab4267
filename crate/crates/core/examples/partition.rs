//! Find and verify a partition certificate for a threshold coloring.

use nfu_core::ramsey::{
    nu_measure, partition_find, verify_partition, Coloring, LevelSequence, Truncation,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let levels = LevelSequence::trivial(8);
    let col = Coloring::from_fn(8, 2, 2, |t| usize::from(t[1] >= 4))?;
    match partition_find(&col, &levels, Truncation::default())?.cert() {
        Some(c) => {
            println!("certified: m={} g={:?} eta={}", c.m, c.g, c.eta);
            println!("verifies: {}", verify_partition(&col, c, &levels)?.holds());
        }
        None => println!("insufficient at this scale"),
    }
    println!(
        "nu of {{4..7}}: {:?}",
        nu_measure(&[4, 5, 6, 7], &levels, 2).value
    );
    Ok(())
}
