//! Exhaustive ground truth on universes of at most four points.

use omega_degrees::oracle::{
    classify_table, composition_rule_check, mask_from_str, monotonicity_check,
    pigeonhole_fact_check, reduces_exhaustive, FiniteUniverse,
};
use omega_degrees::{ReductionClass, Result};

fn main() -> Result<()> {
    for n in 2..=4 {
        let v = composition_rule_check(n)?;
        println!("compose n={n}: {:?} over {} pairs", v.status, v.window);
    }
    for k in 1..=4 {
        let v = pigeonhole_fact_check(k, k + 1)?;
        println!("pigeonhole k={k}: {:?} over {} maps", v.status, v.window);
    }
    println!("monotonicity n=3: {:?}", monotonicity_check(3)?.status);

    let injective = FiniteUniverse::new(3)?
        .tables()
        .filter(|t| classify_table(t).injective)
        .count();
    println!("injective tables on 3 points: {injective}");

    let (a, b) = (mask_from_str("1100")?, mask_from_str("0011")?);
    for class in [ReductionClass::OneOne, ReductionClass::ManyOne] {
        println!(
            "1100 -> 0011 ({class}): {:?}",
            reduces_exhaustive(a, b, class, 4)?
        );
    }
    let full = mask_from_str("1111")?;
    println!(
        "1111 -> 0000: {:?}",
        reduces_exhaustive(full, 0, ReductionClass::ManyOne, 4)?
    );
    Ok(())
}
