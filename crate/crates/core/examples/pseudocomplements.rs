//! Pseudocomplements on 𝔽₂ⁿ: the recursive construction, the exhaustive
//! search, and the rare point read off the quadratic ideal.

use monoidal::family::{phi, SetFamily};
use monoidal::pseudo::{brute_force_pseudocomplement, pseudocomplement_to_element, quadratic_ideal, solve_recursive};
use monoidal::{build_ring, RingSpec};

fn main() -> monoidal::Result<()> {
    let family = SetFamily::parse("n=3\n-\n0\n0,1\n0,2\n0,1,2\n")?;
    let ring = build_ring(&RingSpec::product(2, 3))?;
    let m = phi(&family)?;
    println!("family {family} becomes the monoid {:?}", m.to_u32_vec());

    let t = solve_recursive(&ring, &m)?;
    let v = quadratic_ideal(&ring, &t)?;
    println!(
        "recursive: orbits {:?}, quadratic ideal {:?}, proper {}",
        t.orbits(),
        v.quadratic_ideal,
        v.proper
    );

    let e = pseudocomplement_to_element(&ring, &t)?;
    println!(
        "point {} lies in {} of {} members",
        e.element, e.frequency, e.family_size
    );

    match brute_force_pseudocomplement(&ring, &m)? {
        Some(b) => println!("exhaustive search: orbits {:?}", b.orbits()),
        None => println!("exhaustive search found nothing"),
    }
    Ok(())
}
