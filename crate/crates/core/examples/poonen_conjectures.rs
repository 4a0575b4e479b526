//! Sweeps two open statements about covering ideals over 𝔽₂ⁿ for n ≤ 4.
//! A counterexample would be a result, so it is printed rather than
//! treated as an error.

use monoidal::conjectures::{check_proper_associated, check_unique_maximal};

fn main() -> monoidal::Result<()> {
    let nmax = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for n in 2..=nmax {
        let r = check_proper_associated(n)?;
        println!(
            "n={n} proper association: {} monoids, {} subrings, {} certified, {} counterexamples",
            r.monoids,
            r.subrings_skipped,
            r.certified,
            r.counterexamples.len()
        );
        let r = check_unique_maximal(n)?;
        for (name, o) in [
            ("maximal", &r.maximal),
            ("overall", &r.overall),
            ("literal", &r.literal),
        ] {
            println!(
                "n={n} unique covering, {name} reading: {} in scope, {} counterexamples",
                o.premise,
                o.counterexamples.len()
            );
        }
        if let Some(c) = r.literal.counterexamples.first() {
            println!("  first literal counterexample:\n{}  {}", c.family, c.detail);
        }
    }
    Ok(())
}
