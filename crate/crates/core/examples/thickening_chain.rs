//! Thickenings and the one-one chain A_(1) -> A_(2) -> ... with window checks.

use omega_degrees::constructions::{
    chain_embedding, chain_witness, thicken, thicken_witness_down, thicken_witness_up,
};
use omega_degrees::reductions::{
    check_injectivity, check_membership_preservation, preimage_counts,
};
use omega_degrees::sets::bit_string;
use omega_degrees::{OmegaSet, Result};

const N: u64 = 10_000;

fn main() -> Result<()> {
    let a = OmegaSet::seeded_random(42);
    println!("A        {}", bit_string(&a.prefix(24)?));
    for k in 1..=3 {
        println!("A_({k})     {}", bit_string(&thicken(&a, k)?.prefix(24)?));
    }

    for k in 1..=4 {
        let ak = thicken(&a, k)?;
        let down = thicken_witness_down(&a, k)?;
        let up = thicken_witness_up(&a, k)?;
        let fibres = preimage_counts(&down, N, N / k)?;
        println!(
            "k={k}: down {:?} (fibres all {k}: {}), up {:?}",
            check_membership_preservation(&down, &ak, &a, N)?.status,
            fibres.iter().all(|&c| c == k),
            check_membership_preservation(&up, &a, &ak, N)?.status,
        );

        let p = chain_witness(&a, k)?;
        let next = thicken(&a, k + 1)?;
        println!(
            "      chain {} -> {}: membership {:?}, injective {:?}",
            p.source(),
            p.target(),
            check_membership_preservation(&p, &ak, &next, N)?.status,
            check_injectivity(&p, N)?.status,
        );
    }

    let images: Vec<u64> = (0..9)
        .map(|x| chain_embedding(3, x))
        .collect::<Result<_>>()?;
    println!("p_3 on 0..9: {images:?}");
    Ok(())
}
