//! Take the direct limit of a random chain and compare it with the oracle.

use nfu_core::amodels::random::{random_diagram, Extension};
use nfu_core::amodels::{cocone_violations, direct_limit, find_isomorphism, oracle_limit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = random_diagram(&mut rng, Extension::Rich, 4, 8);
    let direct = direct_limit(&d)?;
    let oracle = oracle_limit(&d)?;
    println!(
        "{} stages, merged groups: {:?}",
        d.stages.len(),
        direct.merged
    );
    println!(
        "isomorphic to oracle: {}",
        find_isomorphism(&direct.model, &oracle.model)?.is_some()
    );
    println!(
        "cocone violations: {}",
        cocone_violations(&d, &direct)?.len()
    );
    Ok(())
}
