//! Pullbacks of a random set along calibrated domains, with both witnesses.

use omega_degrees::constructions::{
    bounded_calibrated_domain, calibrated_domain, pullback, pullback_witness_q, pullback_witness_r,
    pyramid_domain,
};
use omega_degrees::reductions::{
    check_injectivity, check_membership_preservation, preimage_counts,
};
use omega_degrees::{parse_set_spec, OmegaSet, Result};

const N: u64 = 10_000;

fn main() -> Result<()> {
    let a = OmegaSet::seeded_random(5);
    let s = parse_set_spec("column:k=1")?;
    for d in [
        calibrated_domain(&s)?,
        bounded_calibrated_domain(&s)?,
        pyramid_domain(),
    ] {
        let b = pullback(&d, &a);
        let q = pullback_witness_q(&d, &a);
        let r = pullback_witness_r(&d, &a);
        let counts = preimage_counts(&q, N, 6)?;
        println!("{}", b.descriptor());
        println!(
            "  q: {} ({:?}), fibres over 0..6 = {counts:?}",
            q.class(),
            check_membership_preservation(&q, &b, &a, N)?.status
        );
        println!(
            "  r: {} ({:?}, injective {:?})",
            r.class(),
            check_membership_preservation(&r, &a, &b, N)?.status,
            check_injectivity(&r, N)?.status
        );
        let profile: Vec<String> = (0..6)
            .map(|x| d.profile(x).map(|m| format!("{m:?}")))
            .collect::<Result<_>>()?;
        println!("  profile 0..6: {}", profile.join(", "));
    }
    Ok(())
}
