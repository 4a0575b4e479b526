//! The automorphic multiaction on R_{n,p} = 𝔽_{pⁿ}[ε]/(ε²) is a monoidal
//! network exactly when n ≤ 3. Prints the table for p ∈ {2, 3, 5, 7}.

use monoidal::semilinear::dual_table;

fn main() -> monoidal::Result<()> {
    println!(
        "{:>2} {:>2} {:>6} {:>10} {:<10} endgame",
        "p", "n", "holds", "full ring", "basis"
    );
    for p in [2, 3, 5, 7] {
        for row in dual_table(p, 4)? {
            let full = row.full_ring.map_or("-".into(), |v| v.to_string());
            let basis = row
                .counterexample_basis
                .as_ref()
                .map_or("-".into(), |b| format!("{b:?}"));
            let endgame = row
                .endgame
                .as_ref()
                .map_or("-".into(), |e| format!("confirms {}", e.confirms()));
            println!(
                "{:>2} {:>2} {:>6} {:>10} {:<10} {endgame}",
                row.p, row.n, row.holds, full, basis
            );
        }
    }
    Ok(())
}
