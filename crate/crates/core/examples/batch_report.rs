//! Building reports programmatically and replaying their witnesses.

use omega_degrees::cli::{audit_pigeonhole, run_oracle, verify_chain, OracleCheck};
use omega_degrees::rigidity::{generate_candidates, AuditOutcome};
use omega_degrees::Result;

fn main() -> Result<()> {
    let chain = verify_chain("primes", 2, 2000);
    println!(
        "verify-chain: exit {}, {} checks",
        chain.exit_code,
        chain.verdicts.len()
    );

    let generator = "adversary:kmax=3+affine:amax=2,bmax=1";
    let audit = audit_pigeonhole(generator, 3, 200);
    println!(
        "audit-pigeonhole summary: {}",
        serde_json::to_string(&audit.summary).unwrap()
    );
    let candidates = generate_candidates(generator, 0)?;
    for (entry, h) in audit.verdicts.iter().zip(&candidates) {
        let outcome: AuditOutcome =
            serde_json::from_value(entry.witness["outcome"].clone()).unwrap();
        println!(
            "  {:<20} {:<10} replays: {}",
            entry.name,
            entry.status.as_str(),
            outcome.recheck(h)?
        );
    }

    let oracle = run_oracle(5, OracleCheck::Compose, None, None, None, "one-one");
    println!("oracle n=5: exit {}", oracle.exit_code);
    print!(
        "{}",
        run_oracle(3, OracleCheck::Pigeonhole, None, None, None, "one-one").to_json()
    );
    Ok(())
}
