//! Prints the chart document of a catalog entry.
//!
//!     cargo run --example export_catalog -- fubini_study:4 > fs.json

use hermitian_lab::Space;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "sphere:1".into());
    let space: Space = arg.parse()?;
    print!("{}", space.document().to_json()?);
    println!();
    Ok(())
}
