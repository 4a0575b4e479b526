//! Which primes survive φ(p²+1) ≤ 4(p+1), and the analytic tail f(p) < 1.

use monoidal::gf::poly;
use monoidal::semilinear::{field, mobius_condition, phi_bound_scan, rosser_f, WITNESS_QUARTIC};

fn main() -> monoidal::Result<()> {
    let scan = phi_bound_scan(10_000)?;
    println!("survivors of the loose bound: {:?}", scan.loose_survivors);
    println!("survivors of the strict bound: {:?}", scan.survivors);
    println!("f(p) < 1 for 23 ≤ p ≤ 10000: {}", scan.f_below_one);
    for x in [22.0, 23.0, 1009.0] {
        println!("f({x}) = {:.12}", rosser_f(x));
    }

    // The quartic witnesses behind p = 3 and p = 5.
    for p in [3, 5] {
        let f = field(p, 4)?;
        let root = (0..f.order()).find(|&x| f.eval_poly(&WITNESS_QUARTIC, x) == 0);
        println!(
            "p={p}: quartic irreducible {}, root {root:?}, Möbius tuple {:?}",
            poly::is_irreducible(&WITNESS_QUARTIC, p),
            root.and_then(|r| mobius_condition(&f, r))
        );
    }
    Ok(())
}
