//! Acceptance gate. Each test prints one `criterion N: PASS|FAIL` line with
//! its measured runtime and fails if either the property or the time limit
//! does not hold.

use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use omega_degrees::constructions::{
    chain_embedding, pullback, pullback_witness_q, pullback_witness_r, thicken,
    thicken_witness_down, thicken_witness_up,
};
use omega_degrees::domain::Multiplicity;
use omega_degrees::oracle::{composition_rule_check, monotonicity_check, pigeonhole_fact_check};
use omega_degrees::reductions::{
    check_injectivity, check_membership_preservation, preimage_counts,
};
use omega_degrees::rigidity::{
    bounded_collision_audit, generate_candidates, pigeonhole_audit, preservation_rate,
    pyramid_autoreduction, AuditResult, CandidateMap, PyramidStep,
};
use omega_degrees::{pair, parse_set_spec, unpair, ComputableDomain, Error, OmegaSet, Result};

// Timings are only meaningful when criteria do not share the CPU.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u32, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let (ok, detail) = match outcome {
        Ok(detail) => (in_time, detail),
        Err(detail) => (false, detail),
    };
    // Written to the raw handle so the line survives test output capture.
    let line = format!(
        "criterion {id}: {} ({detail}; {:.3}s of {:.0}s allowed)\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}, runtime {elapsed:?}");
}

fn fail(e: Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const N: u64 = 10_000;

#[test]
fn criterion_01_thickening_equivalence() {
    criterion(1, Duration::from_secs(5), || {
        let mut specs: Vec<String> = (1..=5).map(|s| format!("random:seed={s}")).collect();
        specs.extend(["evens".into(), "primes".into()]);
        let mut checks = 0;
        for spec in &specs {
            let a = parse_set_spec(spec).map_err(fail)?;
            for k in 1..=6 {
                let ak = thicken(&a, k).map_err(fail)?;
                let down = thicken_witness_down(&a, k).map_err(fail)?;
                let up = thicken_witness_up(&a, k).map_err(fail)?;
                let v = check_membership_preservation(&down, &ak, &a, N).map_err(fail)?;
                ensure(v.is_evidence(), || format!("{spec} k={k} down: {v:?}"))?;
                let v = check_membership_preservation(&up, &a, &ak, N).map_err(fail)?;
                ensure(v.is_evidence(), || format!("{spec} k={k} up: {v:?}"))?;
                let counts = preimage_counts(&down, N, N / k).map_err(fail)?;
                ensure(counts.iter().all(|&c| c == k), || {
                    format!("{spec} k={k}: down fibre sizes differ from k")
                })?;
                checks += 3;
            }
        }
        Ok(format!("{checks} window checks, zero violations"))
    });
}

#[test]
fn criterion_02_chain_embedding() {
    criterion(2, Duration::from_secs(1), || {
        for k in 1..=6u64 {
            let mut previous = None;
            for x in 0..N {
                let p = chain_embedding(k, x).map_err(fail)?;
                ensure(previous.is_none_or(|q| q < p), || {
                    format!("k={k}: not increasing at x={x}")
                })?;
                ensure(p / (k + 1) == x / k, || {
                    format!("k={k}: block mismatch at x={x}")
                })?;
                previous = Some(p);
            }
        }
        Ok(format!("6 x {N} points, zero exceptions"))
    });
}

#[test]
fn criterion_03_pigeonhole_dichotomy() {
    criterion(3, Duration::from_secs(30), || {
        let candidates = generate_candidates(
            "affine:amin=1,amax=30,bmin=0,bmax=29+inj:seed=0,range=10000,count=100+adversary:kmax=5",
            0,
        )
        .map_err(fail)?;
        ensure(candidates.len() >= 1000, || {
            format!("only {} candidates", candidates.len())
        })?;
        let (mut audits, mut collisions, mut unverified) = (0u64, 0u64, 0u64);
        for h in &candidates {
            for k in 1..=5 {
                for y in 0..1000 {
                    let out = pigeonhole_audit(h, k, y).map_err(fail)?;
                    // Clean outcomes are unrepresentable; every result must be one branch.
                    ensure(out.is_deviation() || out.is_collision(), || {
                        format!("{} k={k} y={y}: clean outcome", h.name())
                    })?;
                    audits += 1;
                    collisions += u64::from(out.is_collision());
                    unverified += u64::from(!out.recheck(h).map_err(fail)?);
                }
            }
        }
        ensure(unverified == 0, || {
            format!("{unverified} witnesses failed to re-verify")
        })?;
        Ok(format!(
            "{} candidates, {audits} audits, {collisions} collisions, 0 clean, all witnesses re-verified",
            candidates.len()
        ))
    });
}

/// Window preimage count of `x` under `q`, computed from pairing alone:
/// the column codes of `x` in the domain that do not exceed `sigma(n - 1)`.
fn expected_fibre(d: &ComputableDomain, x: u64, last: u64) -> Result<u64> {
    let width = match d.profile(x)? {
        Multiplicity::Finite(m) => m,
        Multiplicity::Infinite => u64::MAX,
    };
    let mut count = 0;
    let mut i = 0;
    while i < width && pair(x, i)? <= last {
        if d.contains_pair(x, i)? {
            count += 1;
        }
        i += 1;
    }
    Ok(count)
}

#[test]
fn criterion_04_calibrated_equivalences() {
    criterion(4, Duration::from_secs(10), || {
        let mut base_sets = vec![OmegaSet::evens()];
        base_sets.extend((0..=3).map(OmegaSet::column));
        let mut domains = vec![ComputableDomain::pyramid()];
        for s in &base_sets {
            domains.push(ComputableDomain::calibrated(s).map_err(fail)?);
            domains.push(ComputableDomain::bounded_calibrated(s).map_err(fail)?);
        }
        let a = OmegaSet::seeded_random(4);
        let mut fibres_checked = 0u64;
        for d in &domains {
            let name = d.descriptor();
            let b = pullback(d, &a);
            let q = pullback_witness_q(d, &a);
            let r = pullback_witness_r(d, &a);
            let v = check_membership_preservation(&q, &b, &a, N).map_err(fail)?;
            ensure(v.is_evidence(), || format!("{name} q: {v:?}"))?;
            let v = check_membership_preservation(&r, &a, &b, N).map_err(fail)?;
            ensure(v.is_evidence(), || format!("{name} r: {v:?}"))?;
            let v = check_injectivity(&r, N).map_err(fail)?;
            ensure(v.is_evidence(), || format!("{name} r injectivity: {v:?}"))?;

            let last = d.sigma(N - 1).map_err(fail)?;
            let counts = preimage_counts(&q, N, N).map_err(fail)?;
            for (x, &count) in counts.iter().enumerate() {
                let x = x as u64;
                let expected = expected_fibre(d, x, last).map_err(fail)?;
                ensure(count == expected, || {
                    format!("{name}: fibre of {x} is {count}, expected {expected}")
                })?;
                // Fully covered finite columns match the profile exactly.
                if let Multiplicity::Finite(m) = d.profile(x).map_err(fail)? {
                    let top = (0..m)
                        .rev()
                        .find(|&i| d.contains_pair(x, i).unwrap_or(false));
                    if top.is_some_and(|i| pair(x, i).is_ok_and(|c| c <= last)) {
                        ensure(count == m, || {
                            format!("{name}: covered fibre of {x} is {count} != {m}")
                        })?;
                        let want = match d.kind() {
                            omega_degrees::DomainKind::Pyramid => x + 1,
                            omega_degrees::DomainKind::BoundedCalibrated(s) => {
                                1 + u64::from(s.member(x).map_err(fail)?)
                            }
                            _ => 1,
                        };
                        ensure(m == want, || {
                            format!("{name}: profile of {x} is {m}, expected {want}")
                        })?;
                        fibres_checked += 1;
                    }
                }
            }
        }
        Ok(format!(
            "{} domains, {fibres_checked} fully covered fibres exact",
            domains.len()
        ))
    });
}

type Lift = Box<dyn Fn(&ComputableDomain, &ComputableDomain) -> CandidateMap>;

fn collision_corpus() -> Result<Vec<(String, Lift)>> {
    let mut corpus: Vec<(String, Lift)> = Vec::new();
    let index_maps = generate_candidates(
        "identity+affine:amin=0,amax=4,bmin=0,bmax=4+inj:seed=0,range=10000,count=20+adversary:kmax=5+shuffle:seed=3+projection",
        0,
    )?;
    for h in index_maps {
        corpus.push((
            format!("induced {}", h.name()),
            Box::new(move |from, to| CandidateMap::induced(&h, from, to)),
        ));
    }
    for h in generate_candidates(
        "identity+collapse+projection+shuffle:seed=1+const:value=0",
        0,
    )? {
        corpus.push((
            format!("direct {}", h.name()),
            Box::new(move |_, _| h.clone()),
        ));
    }
    Ok(corpus)
}

#[test]
fn criterion_05_bounded_collision_dichotomy() {
    criterion(5, Duration::from_secs(10), || {
        let pairs = [
            (OmegaSet::column(0), OmegaSet::column(1)),
            (OmegaSet::column(1), OmegaSet::column(0)),
            (OmegaSet::column(2), OmegaSet::column(3)),
            (OmegaSet::evens(), OmegaSet::odds()),
        ];
        let corpus = collision_corpus().map_err(fail)?;
        let (mut respecting, mut excluded, mut audits, mut collisions) = (0, 0, 0u64, 0u64);
        for (s, t) in &pairs {
            let from = ComputableDomain::bounded_calibrated(t).map_err(fail)?;
            let to = ComputableDomain::bounded_calibrated(s).map_err(fail)?;
            let xs: Vec<u64> = (0..1000)
                .filter(|&x| t.member(x).unwrap_or(false) && !s.member(x).unwrap_or(true))
                .collect();
            for (name, lift) in &corpus {
                let f = lift(&from, &to);
                let mut outcomes = Vec::with_capacity(xs.len());
                let mut violated = false;
                for &x in &xs {
                    match bounded_collision_audit(&f, s, t, x) {
                        Ok(out) => outcomes.push(out),
                        Err(Error::RangeViolation { .. }) => {
                            violated = true;
                            break;
                        }
                        Err(e) => return Err(fail(e)),
                    }
                }
                if violated {
                    excluded += 1;
                    continue;
                }
                respecting += 1;
                for out in outcomes {
                    ensure(
                        !matches!(out.result, AuditResult::BudgetExhausted(_)),
                        || format!("{name}: clean outcome {out:?}"),
                    )?;
                    ensure(out.recheck(&f).map_err(fail)?, || {
                        format!("{name}: {out:?} does not re-verify")
                    })?;
                    audits += 1;
                    collisions += u64::from(out.is_collision());
                }
            }
        }
        ensure(respecting > 0 && collisions > 0, || {
            "corpus exercised no collisions".into()
        })?;
        Ok(format!(
            "{respecting} range-respecting runs ({excluded} excluded), {audits} audits, {collisions} collisions, zero exceptions"
        ))
    });
}

#[test]
fn criterion_06_pyramid_dichotomy() {
    criterion(6, Duration::from_secs(10), || {
        let pyramid = ComputableDomain::pyramid();
        let mut corpus: Vec<CandidateMap> = generate_candidates(
            "affine:amax=3,bmax=2+inj:seed=0,range=10000,count=10+adversary:kmax=5+shuffle:seed=0",
            0,
        )
        .map_err(fail)?
        .iter()
        .map(|h| CandidateMap::induced_from(h, &pyramid))
        .collect();
        corpus.extend(
            generate_candidates("projection+collapse+shuffle:seed=4+identity", 0).map_err(fail)?,
        );
        let (mut moved, mut refuted) = (0u64, 0u64);
        for f in &corpus {
            for c in 1..=4 {
                let g = pyramid_autoreduction(f, c).map_err(fail)?;
                for x in c..1000 {
                    match g.apply(x).map_err(fail)? {
                        PyramidStep::Moved { value, .. } => {
                            ensure(value != x, || {
                                format!("{}: moved to itself at {x}", f.name())
                            })?;
                            moved += 1;
                        }
                        PyramidStep::BoundRefuted { x: at, column } => {
                            ensure(at == x && column.len() as u64 == x + 1, || {
                                format!("{}: bad bound witness at {x}", f.name())
                            })?;
                            for &z in &column {
                                ensure(unpair(z).0 == x && f.apply(z).map_err(fail)? == x, || {
                                    format!("{}: column member {z} does not map to {x}", f.name())
                                })?;
                            }
                            refuted += 1;
                        }
                        PyramidStep::Fixed { .. } => {
                            return Err(format!("{}: fixed point {x} >= c = {c}", f.name()))
                        }
                    }
                }
            }
        }
        Ok(format!(
            "{} candidates, {moved} deviations, {refuted} bound refutations",
            corpus.len()
        ))
    });
}

#[test]
fn criterion_07_finite_oracle() {
    criterion(7, Duration::from_secs(5), || {
        for (n, pairs) in [(2, 16), (3, 729), (4, 65_536)] {
            let v = composition_rule_check(n).map_err(fail)?;
            ensure(v.is_evidence() && v.window == pairs, || {
                format!("compose n={n}: {v:?}")
            })?;
        }
        for k in 1..=4 {
            let v = pigeonhole_fact_check(k, k + 1).map_err(fail)?;
            ensure(v.is_evidence() && v.window == k.pow(k as u32 + 1), || {
                format!("pigeonhole k={k}: {v:?}")
            })?;
        }
        let v = monotonicity_check(3).map_err(fail)?;
        ensure(v.is_evidence() && v.window == 64, || {
            format!("monotonicity: {v:?}")
        })?;
        Ok("compose n=2..4, pigeonhole k=1..4, monotonicity over 64 subset pairs".into())
    });
}

#[test]
fn criterion_08_bijections() {
    criterion(8, Duration::from_secs(2), || {
        for x in 0..500 {
            for y in 0..500 {
                let z = pair(x, y).map_err(fail)?;
                ensure(unpair(z) == (x, y), || format!("unpair(pair({x},{y}))"))?;
            }
        }
        for z in 0..100_000 {
            let (x, y) = unpair(z);
            ensure(pair(x, y).map_err(fail)? == z, || {
                format!("pair(unpair({z}))")
            })?;
        }
        let evens = OmegaSet::evens();
        let domains = [
            ComputableDomain::full(),
            ComputableDomain::pyramid(),
            ComputableDomain::calibrated(&evens).map_err(fail)?,
            ComputableDomain::bounded_calibrated(&evens).map_err(fail)?,
        ];
        for d in &domains {
            let mut next_code = 0;
            for n in 0..N {
                let code = d.sigma(n).map_err(fail)?;
                ensure(d.sigma_inv(code).map_err(fail)? == n, || {
                    format!("{}: rank(select({n}))", d.descriptor())
                })?;
                // select(n) is the least domain code above select(n - 1).
                while !d.contains(next_code).map_err(fail)? {
                    next_code += 1;
                }
                ensure(code == next_code, || {
                    format!(
                        "{}: select({n}) = {code}, scan gives {next_code}",
                        d.descriptor()
                    )
                })?;
                next_code += 1;
            }
        }
        Ok(format!("250000 pairs, 100000 codes, 4 domains to n = {N}"))
    });
}

#[test]
fn criterion_09_statistical_rigidity() {
    criterion(9, Duration::from_secs(5), || {
        const BOUND: f64 = 0.95;
        let mut worst = (0.0f64, String::new());
        let mut over = Vec::new();
        for seed in 1..=10 {
            let a = OmegaSet::seeded_random(seed);
            for m in -3..=3i64 {
                for b in 0..=3i64 {
                    if (m, b) == (1, 0) {
                        continue;
                    }
                    let rate = preservation_rate(&CandidateMap::affine(m, b), &a, N)
                        .map_err(fail)?
                        .as_f64();
                    let label = format!("seed={seed} a={m} b={b}");
                    if rate >= BOUND {
                        over.push(format!("{label}: {rate:.4}"));
                    }
                    if rate > worst.0 {
                        worst = (rate, label);
                    }
                }
            }
        }
        ensure(over.is_empty(), || {
            format!("rates at or above {BOUND}: {}", over.join(", "))
        })?;
        Ok(format!(
            "270 maps below {BOUND}; highest {:.4} at {}",
            worst.0, worst.1
        ))
    });
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_omega-degrees"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_10_report_determinism() {
    criterion(10, Duration::from_secs(360), || {
        let commands: [&[&str]; 6] = [
            &[
                "verify-chain",
                "--set",
                "random:seed=42",
                "--kmax",
                "4",
                "--window",
                "10000",
            ],
            &[
                "audit-pigeonhole",
                "--generator",
                "affine:amax=3,bmax=2+adversary:k=2",
                "--k",
                "2",
                "--window",
                "1000",
            ],
            &[
                "probe-incomparability",
                "--set",
                "random:seed=9",
                "--j",
                "0",
                "--l",
                "1",
                "--mode",
                "one-one",
                "--generator",
                "adversary:kmax=3+affine:amax=2,bmax=1",
            ],
            &[
                "probe-incomparability",
                "--set",
                "random:seed=9",
                "--j",
                "0",
                "--l",
                "1",
                "--mode",
                "fin",
                "--generator",
                "identity",
                "--lift",
                "direct",
            ],
            &["stress-biimmunity", "--set", "random:seed=3", "--seed", "5"],
            &["oracle", "--n", "4", "--check", "compose"],
        ];
        let mut slowest = Duration::ZERO;
        for args in commands {
            let mut outputs = Vec::new();
            for _ in 0..2 {
                let start = Instant::now();
                let out = run_cli(args);
                let took = start.elapsed();
                slowest = slowest.max(took);
                ensure(took < Duration::from_secs(30), || {
                    format!("{} took {took:?}", args[0])
                })?;
                ensure(out.status.code() == Some(0), || {
                    format!("{}: exit {:?}", args[0], out.status.code())
                })?;
                outputs.push(out.stdout);
            }
            ensure(outputs[0] == outputs[1] && !outputs[0].is_empty(), || {
                format!("{}: outputs differ between runs", args[0])
            })?;
        }
        Ok(format!(
            "6 commands byte-identical across runs; slowest run {:.3}s",
            slowest.as_secs_f64()
        ))
    });
}
