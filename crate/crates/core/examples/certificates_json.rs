//! Emits a covering certificate as JSON, reads it back and re-validates it
//! from scratch.

use monoidal::elemset::ElemSet;
use monoidal::network::{CoveringCertificate, Multiaction};
use monoidal::{build_ring, RingSpec};

fn main() -> monoidal::Result<()> {
    let ring = build_ring(&RingSpec::product(2, 3))?;
    let ma = Multiaction::symmetric(&ring);
    let m = ElemSet::from_elems(ring.order(), [0, 1, 3, 7]);
    let search = ma.find_covering_ideal(&m)?;
    let cert = search.certificate().expect("every submonoid of 𝔽₂³ is covered");
    let text = serde_json::to_string_pretty(cert)?;
    println!("{text}");

    let back: CoveringCertificate = serde_json::from_str(&text)?;
    back.revalidate()?;
    println!(
        "re-validated: ideal {:?}, M̂ {:?}, {} lifts",
        back.ideal.to_u32_vec(),
        back.m_hat.to_u32_vec(),
        back.lifts.len()
    );
    Ok(())
}
