//! Probing one-one reductions between pullbacks over two disjoint columns.

use omega_degrees::constructions::disjoint_family;
use omega_degrees::rigidity::{
    bounded_collision_audit, generate_candidates, AuditResult, CandidateMap,
};
use omega_degrees::{ComputableDomain, Error, Result};

fn main() -> Result<()> {
    let (s, t) = (disjoint_family(0), disjoint_family(1));
    let (from, to) = (
        ComputableDomain::bounded_calibrated(&t)?,
        ComputableDomain::bounded_calibrated(&s)?,
    );
    let xs: Vec<u64> = (0..1000)
        .filter(|&x| t.member(x).unwrap_or(false))
        .collect();
    println!("{} audit points in T below 1000", xs.len());

    for h in generate_candidates(
        "identity+affine:amin=2,amax=2,bmax=0+adversary:k=3+inj:seed=8,range=2000",
        0,
    )? {
        let f = CandidateMap::induced(&h, &from, &to);
        let (mut dev, mut col) = (0, 0);
        for &x in &xs {
            let out = bounded_collision_audit(&f, &s, &t, x)?;
            assert!(out.recheck(&f)?);
            match out.result {
                AuditResult::Deviation { .. } => dev += 1,
                AuditResult::Collision { .. } => col += 1,
                AuditResult::BudgetExhausted(_) => unreachable!(),
            }
        }
        println!("{:<24} deviations {dev:>3}  collisions {col:>3}", h.name());
    }

    // Maps that leave the target domain are rejected, not audited.
    match bounded_collision_audit(&CandidateMap::identity(), &s, &t, xs[1]) {
        Err(e @ Error::RangeViolation { .. }) => println!("identity on raw codes: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
