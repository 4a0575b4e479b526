//! Builds a ring from a spec string and prints its ideals, units and
//! automorphisms.
//!
//!     cargo run --example ring_explorer -- dual:3^2

use monoidal::{build_ring, RingSpec};

fn main() -> monoidal::Result<()> {
    let spec: RingSpec = std::env::args().nth(1).unwrap_or_else(|| "dual:2^2".into()).parse()?;
    let ring = build_ring(&spec)?;
    println!(
        "{} has order {} and characteristic {}",
        ring.spec_string(),
        ring.order(),
        ring.characteristic()
    );
    println!("field: {}, units: {}", ring.is_field(), ring.units().len());
    println!("automorphisms: {}", ring.automorphism_count());
    for (i, ideal) in ring.ideals().iter().enumerate() {
        let tag = if ring.is_maximal_ideal(i) { " maximal" } else { "" };
        println!("  ideal {i}: size {} {:?}{tag}", ideal.elements.len(), ideal.shape);
    }
    let x = ring.order() - 1;
    println!("{x} * {x} = {}, {x} + 1 = {}", ring.mul(x, x), ring.add(x, ring.one()));
    Ok(())
}
