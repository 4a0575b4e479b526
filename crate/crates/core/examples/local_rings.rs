//! On a finite local ring that is not a field, the maximal ideal covers
//! every extended submonoid with M̂ = M once the top group is Sym(R).

use monoidal::local::local_certificates;
use monoidal::network::DEFAULT_ENUMERATION_ORDER;
use monoidal::{build_ring, RingSpec};

fn main() -> monoidal::Result<()> {
    for spec in ["mod:4", "mod:8", "mod:9", "mod:27", "dual:2^2", "dual:3^1", "dual:2^3"] {
        let ring = build_ring(&spec.parse::<RingSpec>()?)?;
        let r = local_certificates(&ring, DEFAULT_ENUMERATION_ORDER)?;
        println!("{spec:>9}: {:>4} monoids, all certified {}", r.monoids, r.holds());
    }
    Ok(())
}
