//! The block pigeonhole dichotomy behind the strict chain, swept over candidates.

use omega_degrees::rigidity::{chain_autoreductions, generate_candidates, pigeonhole_audit};
use omega_degrees::Result;

fn main() -> Result<()> {
    let k = 2;
    let candidates = generate_candidates(
        "affine:amax=2,bmax=1+adversary:k=2+inj:seed=3,range=5000",
        0,
    )?;
    for h in &candidates {
        let (mut deviations, mut collisions) = (0, 0);
        let mut first = None;
        for y in 0..1000 {
            let out = pigeonhole_audit(h, k, y)?;
            assert!(out.recheck(h)?);
            if out.is_collision() {
                collisions += 1;
            } else {
                deviations += 1;
            }
            first.get_or_insert(out.result);
        }
        println!(
            "{:<28} deviations {deviations:>4}  collisions {collisions:>4}  y=0: {:?}",
            h.name(),
            first.unwrap()
        );
    }

    // The extracted f_j of the seeker are all the identity, so it must collide.
    let seeker = &candidates[candidates.len() - 2];
    for f in chain_autoreductions(seeker, k)? {
        let moved = (0..1000)
            .filter(|&y| !f.apply(y).is_ok_and(|v| v == y))
            .count();
        println!("{}: moves {moved} of 1000 points", f.name());
    }
    Ok(())
}
