//! Every intersection-closed family on n points has a point lying in at
//! most half of its members. Checks this for n ≤ 4 by frequency count and
//! by the pseudocomplement route, and shows the reduction on one family.

use monoidal::family::{enumerate_family_codes, find_rare_element, reduce_to_half, SetFamily};
use monoidal::report::{run, Command, RunConfig};

fn main() -> monoidal::Result<()> {
    for n in 1..=4 {
        println!("n={n}: {} families", enumerate_family_codes(n, 4)?.len());
    }
    let mut config = RunConfig::new(Command::Ucsc { n: 4 });
    config.jobs = std::thread::available_parallelism().map_or(1, |j| j.get());
    print!("{}", run(&config)?.to_human());

    let family = SetFamily::parse("n=3\n-\n0\n1\n0,1\n0,1,2\n")?;
    let cert = find_rare_element(&family)?;
    let reduced = reduce_to_half(&family, cert.element)?;
    println!(
        "{family}: point {} in {} of {}",
        cert.element, cert.frequency, cert.family_size
    );
    println!("reduced to {} after removing {:?}", reduced.reduced, reduced.removed);
    Ok(())
}
