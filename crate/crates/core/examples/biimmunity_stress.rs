//! Column image statistics for random sets under several column maps.

use omega_degrees::rigidity::{column_image_audit, preservation_rate, CandidateMap};
use omega_degrees::{OmegaSet, Result};

fn main() -> Result<()> {
    let a = OmegaSet::seeded_random(3);
    let maps = [
        CandidateMap::identity(),
        CandidateMap::constant(0),
        CandidateMap::column_shuffle(11),
        CandidateMap::projection(),
    ];
    for h in &maps {
        let stats: Vec<_> = (0..50)
            .map(|x| column_image_audit(h, &a, x, 100))
            .collect::<Result<_>>()?;
        let one_sided = stats
            .iter()
            .filter(|s| s.projected_agreement() == 1.0)
            .count();
        let worst = stats.iter().map(|s| s.max_multiplicity).max().unwrap_or(0);
        println!(
            "{:<18} one-sided columns {one_sided:>2}/50, max fibre {worst}",
            h.name()
        );
    }

    println!();
    for seed in 1..=3 {
        let a = OmegaSet::seeded_random(seed);
        let rates: Vec<String> = [(1, 1), (2, 0), (3, 1), (-1, 3)]
            .iter()
            .map(|&(m, b)| {
                preservation_rate(&CandidateMap::affine(m, b), &a, 10_000)
                    .map(|r| format!("{m}x+{b}: {:.3}", r.as_f64()))
            })
            .collect::<Result<_>>()?;
        println!("seed {seed}: {}", rates.join("  "));
    }
    Ok(())
}
