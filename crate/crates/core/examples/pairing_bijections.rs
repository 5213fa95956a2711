//! Cantor pairing and the canonical bijections onto decidable domains.

use omega_degrees::{pair, unpair, ComputableDomain, OmegaSet, Result};

fn main() -> Result<()> {
    let z = pair(3, 4)?;
    println!("<3,4> = {z}, unpair({z}) = {:?}", unpair(z));

    let evens = OmegaSet::evens();
    let domains = [
        ComputableDomain::full(),
        ComputableDomain::pyramid(),
        ComputableDomain::calibrated(&evens)?,
        ComputableDomain::bounded_calibrated(&evens)?,
    ];
    for d in &domains {
        let first: Vec<String> = (0..8)
            .map(|n| d.sigma(n).map(|c| format!("{:?}", unpair(c))))
            .collect::<Result<_>>()?;
        let far = d.sigma(10_000)?;
        println!("{:<16} {}", d.descriptor(), first.join(" "));
        println!(
            "{:<16} sigma(10000) = {far}, rank back = {}",
            "",
            d.sigma_inv(far)?
        );
    }

    // Codes outside the domain have no rank.
    let e = &domains[3];
    println!(
        "rank of <1,1> in {}: {:?}",
        e.descriptor(),
        e.sigma_inv(pair(1, 1)?)
    );
    Ok(())
}
