//! Run the basic module on the small K = 4 family and print the tree.

use nfu_core::ramsey::{basic_module, ColoringFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut fam = ColoringFamily::constant(4);
    fam.tables[0] = vec![0, 1, 0, 1];
    let out = basic_module(&[0, 1, 2, 3], &fam)?;
    print!("{}", out.tree.render());
    println!("B' = {:?}", out.b_prime);
    Ok(())
}
