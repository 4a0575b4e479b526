//! Network verdicts for a handful of rings and multiactions, with the
//! obstruction behind each failure.

use monoidal::network::{is_monoidal_network, Multiaction, MultiactionKind, NetworkOptions};
use monoidal::{build_ring, RingSpec};

fn main() -> monoidal::Result<()> {
    let cases = [
        ("product:2^3", MultiactionKind::Symmetric),
        ("product:3^2", MultiactionKind::Symmetric),
        ("product:3^3", MultiactionKind::Symmetric),
        ("dual:2^2", MultiactionKind::Automorphic),
        ("dual:3^2", MultiactionKind::Automorphic),
        ("mod:12", MultiactionKind::Automorphic),
    ];
    for (spec, kind) in cases {
        let ring = build_ring(&spec.parse::<RingSpec>()?)?;
        let ma = Multiaction::of_kind(&ring, kind)?;
        let report = is_monoidal_network(&ma, &NetworkOptions::default())?;
        println!(
            "{spec:>12} {kind:?}: {} ({} monoids)",
            report.verdict, report.monoid_count
        );
        if let Some(f) = report.failures().next() {
            let why = f.search.obstructions.first().map(|o| format!("{:?}", o.reason));
            println!("{:>14}first failure {:?}: {}", "", f.monoid, why.unwrap_or_default());
        };
    }
    Ok(())
}
