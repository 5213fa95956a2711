//! Batch commands behind the `omega-degrees` binary.
//!
//! Every command builds a [`Report`]. Errors never escape as panics: they
//! become a report with a single `error` entry and exit code 1.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{
    chain_witness, disjoint_family, thicken, thicken_witness_down, thicken_witness_up,
};
use crate::domain::ComputableDomain;
use crate::error::{Error, Result};
use crate::oracle;
use crate::pairing;
use crate::reductions::{
    check_injectivity, check_membership_preservation, check_preimage_bound, Reduction,
    ReductionClass,
};
use crate::report::{csv_field, Entry, EntryStatus, Report, EXIT_ERROR};
use crate::rigidity::{
    bounded_collision_audit, calibrated_autoreduction, column_image_audit, generate_candidates,
    pigeonhole_audit, AuditOutcome, AuditResult, CandidateMap,
};
use crate::sets::OmegaSet;
use crate::spec::parse_set_spec;

/// `range=` used by `inj` generators when the spec leaves it out.
pub const DEFAULT_INJECTION_RANGE: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// Calibrated domains; audits finite-one candidates.
    Fin,
    /// Bounded calibrated domains; audits one-one candidates.
    OneOne,
}

/// How a candidate on indices acts on domain codes during a probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lift {
    /// `z -> sigma_to(h(sigma_from^-1(z)))`; always range-respecting.
    Induced,
    /// The candidate is applied to codes unchanged.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCheck {
    Compose,
    Pigeonhole,
    Reduces,
    Monotonicity,
}

#[derive(Debug, Parser)]
#[command(
    name = "omega-degrees",
    version,
    about = "Window checks and rigidity audits over decidable sets"
)]
pub struct Cli {
    /// Window size; each command has its own default.
    #[arg(long, global = true)]
    pub window: Option<u64>,
    /// Seed for default random sets and shuffles.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path, or `stdout`.
    #[arg(long, global = true, default_value = "stdout")]
    pub out: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check thickening and chain witnesses for k = 1..kmax (window default 10000).
    VerifyChain {
        /// Set spec; defaults to `random:seed=<seed>`.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        kmax: u64,
    },
    /// Sweep the block pigeonhole dichotomy over y < window (default 1000).
    AuditPigeonhole {
        #[arg(long, default_value = "affine:amax=3,bmax=2")]
        generator: String,
        #[arg(long)]
        k: u64,
    },
    /// Audit candidates between pullbacks over two disjoint columns (window default 1000).
    ProbeIncomparability {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, value_enum)]
        mode: ProbeMode,
        #[arg(long, default_value = "identity")]
        generator: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Lift::Induced)]
        lift: Lift,
    },
    /// Column image statistics; the window is the column width (default 100).
    StressBiimmunity {
        #[arg(long)]
        set: Option<String>,
        /// Half-open range `a..b` of first coordinates.
        #[arg(long, default_value = "0..100")]
        xs: String,
        /// Defaults to `identity+const:value=0+shuffle:seed=<seed>`.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Exhaustive checks on the universe {0..n}, n <= 4.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        check: OracleCheck,
        /// Pigeonhole slots; defaults to n - 1.
        #[arg(long)]
        k: Option<u64>,
        /// Source mask for `reduces`, e.g. `1100`.
        #[arg(long)]
        a: Option<String>,
        /// Target mask for `reduces`.
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value = "one-one")]
        class: String,
    },
}

/// Parses arguments, runs the command, writes its output and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    let report = execute(&cli);
    let text = match (cli.format, &cli.command) {
        (Format::Csv, Command::Oracle { n, check, k, .. }) if report.exit_code != EXIT_ERROR => {
            match oracle_csv(*n, *check, *k) {
                Ok(csv) => csv,
                Err(e) => report.to_csv() + &format!("# {e}\n"),
            }
        }
        (Format::Csv, _) => report.to_csv(),
        (Format::Json, _) => report.to_json(),
    };
    if let Err(e) = emit(&cli.out, &text) {
        eprintln!("error: {e}");
        return EXIT_ERROR;
    }
    if report.exit_code == EXIT_ERROR {
        if let Some(message) = report
            .verdicts
            .first()
            .and_then(|v| v.witness.get("message"))
        {
            eprintln!("error: {}", message.as_str().unwrap_or_default());
        }
    }
    report.exit_code
}

fn emit(out: &str, text: &str) -> std::io::Result<()> {
    if out == "stdout" || out == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())
    } else {
        std::fs::write(out, text)
    }
}

pub fn execute(cli: &Cli) -> Report {
    let default_set = || format!("random:seed={}", cli.seed);
    match &cli.command {
        Command::VerifyChain { set, kmax } => verify_chain(
            &set.clone().unwrap_or_else(default_set),
            *kmax,
            cli.window.unwrap_or(10_000),
        ),
        Command::AuditPigeonhole { generator, k } => {
            audit_pigeonhole(generator, *k, cli.window.unwrap_or(1000))
        }
        Command::ProbeIncomparability {
            set,
            j,
            l,
            mode,
            generator,
            budget,
            lift,
        } => probe_incomparability(&ProbeParams {
            set: set.clone().unwrap_or_else(default_set),
            j: *j,
            l: *l,
            mode: *mode,
            generator: generator.clone(),
            window: cli.window.unwrap_or(1000),
            budget: *budget,
            lift: *lift,
        }),
        Command::StressBiimmunity { set, xs, generator } => stress_biimmunity(
            &set.clone().unwrap_or_else(default_set),
            xs,
            cli.window.unwrap_or(100),
            &generator
                .clone()
                .unwrap_or_else(|| format!("identity+const:value=0+shuffle:seed={}", cli.seed)),
        ),
        Command::Oracle {
            n,
            check,
            k,
            a,
            b,
            class,
        } => run_oracle(*n, *check, *k, a.as_deref(), b.as_deref(), class),
    }
}

fn conclude(base: Report, body: impl FnOnce(&mut Report) -> Result<()>) -> Report {
    let mut report = base.clone();
    match body(&mut report) {
        Ok(()) => report.finish(),
        Err(e) => base.failed(&e),
    }
}

fn push_witness_checks(
    report: &mut Report,
    label: &str,
    r: &Reduction,
    source: &OmegaSet,
    target: &OmegaSet,
    n: u64,
) -> Result<()> {
    report.push(Entry::from_verdict(
        format!("{label}/membership"),
        &check_membership_preservation(r, source, target, n)?,
    ));
    if r.class().refines(ReductionClass::OneOne) {
        report.push(Entry::from_verdict(
            format!("{label}/injectivity"),
            &check_injectivity(r, n)?,
        ));
    }
    if let Some(c) = r.class().bound() {
        report.push(Entry::from_verdict(
            format!("{label}/preimage-bound"),
            &check_preimage_bound(r, c, n, n)?,
        ));
    }
    Ok(())
}

/// Thickening witnesses in both directions and the chain embedding
/// `A_(k) -> A_(k+1)` for `k = 1..=kmax`, all checked below `window`.
pub fn verify_chain(set: &str, kmax: u64, window: u64) -> Report {
    let base = Report::new("verify-chain")
        .param("set", set)
        .param("kmax", kmax)
        .param("window", window);
    conclude(base, |report| {
        if kmax == 0 {
            return Err(Error::Usage("kmax must be >= 1".into()));
        }
        let a = parse_set_spec(set)?;
        for k in 1..=kmax {
            let (ak, next) = (thicken(&a, k)?, thicken(&a, k + 1)?);
            let prefix = format!("k={k}");
            push_witness_checks(
                report,
                &format!("{prefix}/down"),
                &thicken_witness_down(&a, k)?,
                &ak,
                &a,
                window,
            )?;
            push_witness_checks(
                report,
                &format!("{prefix}/up"),
                &thicken_witness_up(&a, k)?,
                &a,
                &ak,
                window,
            )?;
            push_witness_checks(
                report,
                &format!("{prefix}/chain"),
                &chain_witness(&a, k)?,
                &ak,
                &next,
                window,
            )?;
        }
        let refuted = report
            .verdicts
            .iter()
            .filter(|e| e.status == EntryStatus::Refuted)
            .count();
        report.tally("checks", report.verdicts.len());
        report.tally("refuted", refuted);
        Ok(())
    })
}

#[derive(Default)]
struct Tally {
    deviations: u64,
    collisions: u64,
    exhausted: u64,
    range_violations: u64,
    representative: Option<AuditOutcome>,
    first_exhausted: Option<AuditOutcome>,
    first_range_violation: Option<String>,
    failed_recheck: Option<AuditOutcome>,
}

impl Tally {
    fn record(&mut self, outcome: AuditOutcome, candidate: &CandidateMap) -> Result<()> {
        if !outcome.recheck(candidate)? {
            self.failed_recheck.get_or_insert(outcome);
            return Ok(());
        }
        match outcome.result {
            AuditResult::Deviation { .. } => self.deviations += 1,
            AuditResult::Collision { .. } => self.collisions += 1,
            AuditResult::BudgetExhausted(_) => {
                self.exhausted += 1;
                self.first_exhausted.get_or_insert(outcome);
                return Ok(());
            }
        }
        // Collisions are rarer evidence, so they take precedence.
        let replace = match &self.representative {
            None => true,
            Some(r) => !r.is_collision() && outcome.is_collision(),
        };
        if replace {
            self.representative = Some(outcome);
        }
        Ok(())
    }

    fn into_entry(self, name: String, window: u64) -> Entry {
        let counts = json!({
            "deviations": self.deviations,
            "collisions": self.collisions,
            "budget_exhausted": self.exhausted,
            "range_violations": self.range_violations,
        });
        let with = |outcome: &AuditOutcome, key: &str| {
            let mut w = counts.clone();
            w[key] = serde_json::to_value(outcome).expect("outcome serializes");
            w
        };
        if let Some(bad) = &self.failed_recheck {
            return Entry::new(name, EntryStatus::Refuted, window)
                .claimed()
                .with_witness(with(bad, "failed_recheck"));
        }
        if let Some(o) = &self.representative {
            return Entry::new(name, (&o.result).into(), window).with_witness(with(o, "outcome"));
        }
        if let Some(o) = &self.first_exhausted {
            return Entry::new(name, EntryStatus::BudgetExhausted, window)
                .with_witness(with(o, "outcome"));
        }
        let mut w = counts;
        w["range_violation"] = json!(self.first_range_violation);
        Entry::new(name, EntryStatus::Error, window).with_witness(w)
    }
}

/// Runs the block pigeonhole audit for every generated candidate and every
/// `y < ys`. Deviations and collisions are the expected outcomes; a witness
/// that fails to replay is a refutation.
pub fn audit_pigeonhole(generator: &str, k: u64, ys: u64) -> Report {
    let base = Report::new("audit-pigeonhole")
        .param("generator", generator)
        .param("k", k)
        .param("window", ys);
    conclude(base, |report| {
        if k == 0 {
            return Err(Error::Usage("k must be >= 1".into()));
        }
        let candidates = generate_candidates(generator, DEFAULT_INJECTION_RANGE)?;
        let (mut deviations, mut collisions, mut failed) = (0, 0, 0);
        for h in &candidates {
            let mut tally = Tally::default();
            for y in 0..ys {
                tally.record(pigeonhole_audit(h, k, y)?, h)?;
            }
            deviations += tally.deviations;
            collisions += tally.collisions;
            failed += u64::from(tally.failed_recheck.is_some());
            report.push(tally.into_entry(h.name(), ys));
        }
        report.tally("candidates", candidates.len());
        report.tally("audits", candidates.len() as u64 * ys);
        report.tally("deviations", deviations);
        report.tally("collisions", collisions);
        report.tally("clean", 0);
        report.tally("failed_rechecks", failed);
        Ok(())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeParams {
    pub set: String,
    pub j: u64,
    pub l: u64,
    pub mode: ProbeMode,
    pub generator: String,
    pub window: u64,
    pub budget: u64,
    pub lift: Lift,
}

/// Probes reductions from the pullback of `A` over the column `S_l` to the
/// one over `S_j`. Each candidate gets the matching dichotomy audit at every
/// `x in S_l` below the window and a membership-preservation check.
pub fn probe_incomparability(p: &ProbeParams) -> Report {
    let mut base = Report::new("probe-incomparability");
    if let Ok(serde_json::Value::Object(map)) = serde_json::to_value(p) {
        base.params = map.into_iter().collect::<BTreeMap<_, _>>();
    }
    conclude(base, |report| {
        if p.j == p.l {
            return Err(Error::Usage("j and l must differ".into()));
        }
        let a = parse_set_spec(&p.set)?;
        let (s, t) = (disjoint_family(p.j), disjoint_family(p.l));
        let (from, to) = match p.mode {
            ProbeMode::Fin => (
                ComputableDomain::calibrated(&t)?,
                ComputableDomain::calibrated(&s)?,
            ),
            ProbeMode::OneOne => (
                ComputableDomain::bounded_calibrated(&t)?,
                ComputableDomain::bounded_calibrated(&s)?,
            ),
        };
        let (source, target) = (OmegaSet::pullback(&from, &a), OmegaSet::pullback(&to, &a));
        let mut columns = Vec::new();
        for x in 0..p.window {
            if t.member(x)? && !s.member(x)? {
                columns.push(x);
            }
        }
        let mut by_status: BTreeMap<&'static str, u64> = BTreeMap::new();
        for h in generate_candidates(&p.generator, DEFAULT_INJECTION_RANGE)? {
            let f = match p.lift {
                Lift::Induced => CandidateMap::induced(&h, &from, &to),
                Lift::Direct => h.clone(),
            };
            let mut tally = Tally::default();
            for &x in &columns {
                let outcome = match p.mode {
                    ProbeMode::Fin => calibrated_autoreduction(&f, &s, &t, x, p.budget),
                    ProbeMode::OneOne => bounded_collision_audit(&f, &s, &t, x),
                };
                match outcome {
                    Ok(o) => tally.record(o, &f)?,
                    Err(e @ Error::RangeViolation { .. }) => {
                        tally.range_violations += 1;
                        tally.first_range_violation.get_or_insert(e.to_string());
                    }
                    Err(e) => return Err(e),
                }
            }
            let entry = tally.into_entry(format!("{}/audit", h.name()), columns.len() as u64);
            *by_status.entry(entry.status.as_str()).or_default() += 1;
            report.push(entry);

            let h2 = h.clone();
            let r = Reduction::new(
                h.name(),
                ReductionClass::ManyOne,
                source.descriptor(),
                target.descriptor(),
                move |n| h2.apply(n),
            );
            let verdict = check_membership_preservation(&r, &source, &target, p.window)?;
            report.push(
                Entry::new(
                    format!("{}/preservation", h.name()),
                    verdict.status.into(),
                    p.window,
                )
                .with_witness(&verdict),
            );
        }
        report.tally("columns", columns.len());
        report.tally("audit_status", by_status);
        Ok(())
    })
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Usage(format!("expected a range `a..b`, got `{text}`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// First two codes of column `x` (among the first `width`) sharing an image.
fn column_collision(h: &CandidateMap, x: u64, width: u64) -> Result<Option<AuditResult>> {
    let mut seen = BTreeMap::new();
    for i in 0..width {
        let code = pairing::pair(x, i)?;
        let value = h.apply(code)?;
        if let Some(&first) = seen.get(&value) {
            return Ok(Some(AuditResult::Collision {
                first,
                second: code,
                value,
            }));
        }
        seen.insert(value, code);
    }
    Ok(None)
}

/// Column image statistics for each candidate over `x` in the range. A
/// column is flagged when its largest fibre keeps growing from width `W/2`
/// to `W`.
pub fn stress_biimmunity(set: &str, xs: &str, width: u64, generator: &str) -> Report {
    let base = Report::new("stress-biimmunity")
        .param("set", set)
        .param("xs", xs)
        .param("window", width)
        .param("generator", generator);
    conclude(base, |report| {
        let a = parse_set_spec(set)?;
        let (lo, hi) = parse_range(xs)?;
        let mut flagged_candidates = 0;
        for h in generate_candidates(generator, DEFAULT_INJECTION_RANGE)? {
            let (mut one_sided, mut raw_one_sided, mut flagged, mut in_a) =
                (0u64, 0u64, 0u64, 0u64);
            let (mut min_distinct, mut max_multiplicity) = (u64::MAX, 0);
            let mut first_flag = None;
            for x in lo..hi {
                let full = column_image_audit(&h, &a, x, width)?;
                let half = column_image_audit(&h, &a, x, width / 2)?;
                min_distinct = min_distinct.min(full.distinct);
                max_multiplicity = max_multiplicity.max(full.max_multiplicity);
                one_sided += u64::from(full.projected_same_side == full.width);
                raw_one_sided += u64::from(full.raw_same_side == full.width);
                in_a += u64::from(full.side);
                if full.max_multiplicity > half.max_multiplicity {
                    flagged += 1;
                    first_flag.get_or_insert(x);
                }
            }
            let columns = hi - lo;
            let mut witness = json!({
                "columns": columns,
                "columns_in_set": in_a,
                "min_distinct": if columns == 0 { 0 } else { min_distinct },
                "max_multiplicity": max_multiplicity,
                "one_sided_columns": one_sided,
                "raw_one_sided_columns": raw_one_sided,
                "flagged_columns": flagged,
            });
            let status = match first_flag {
                Some(x) => {
                    flagged_candidates += 1;
                    witness["collision"] = json!(column_collision(&h, x, width)?);
                    EntryStatus::Collision
                }
                None => EntryStatus::Evidence,
            };
            report.push(Entry::new(h.name(), status, width).with_witness(witness));
        }
        report.tally("flagged_candidates", flagged_candidates);
        Ok(())
    })
}

fn table_string(table: &[u8]) -> String {
    table.iter().map(|d| char::from(b'0' + d)).collect()
}

pub fn run_oracle(
    n: usize,
    check: OracleCheck,
    k: Option<u64>,
    a: Option<&str>,
    b: Option<&str>,
    class: &str,
) -> Report {
    let mut base = Report::new("oracle")
        .param("n", n)
        .param("check", check)
        .param("class", class);
    for (key, value) in [
        ("k", k.map(|k| k.to_string())),
        ("a", a.map(Into::into)),
        ("b", b.map(Into::into)),
    ] {
        if let Some(v) = value {
            base = base.param(key, v);
        }
    }
    conclude(base, |report| {
        oracle::FiniteUniverse::new(n)?;
        match check {
            OracleCheck::Compose => report.push(Entry::from_verdict(
                format!("compose(n={n})"),
                &oracle::composition_rule_check(n)?,
            )),
            OracleCheck::Pigeonhole => {
                let k = pigeonhole_k(n, k)?;
                report.push(Entry::from_verdict(
                    format!("pigeonhole(k={k})"),
                    &oracle::pigeonhole_fact_check(k, n as u64)?,
                ));
            }
            OracleCheck::Reduces => {
                let (a_text, b_text) = (required(a, "a")?, required(b, "b")?);
                if a_text.len() != n || b_text.len() != n {
                    return Err(Error::Usage(format!("masks must have exactly {n} digits")));
                }
                let class: ReductionClass = class.parse()?;
                let (am, bm) = (
                    oracle::mask_from_str(a_text)?,
                    oracle::mask_from_str(b_text)?,
                );
                let name = format!("reduces({a_text},{b_text},{class})");
                let window = oracle::FiniteUniverse::new(n)?.table_count();
                report.push(match oracle::reduces_exhaustive(am, bm, class, n)? {
                    Some(table) => Entry::new(name, EntryStatus::Evidence, window)
                        .with_witness(json!({ "table": table })),
                    None => Entry::new(name, EntryStatus::Refuted, window).with_witness(
                        json!({ "note": "no table of this class preserves membership" }),
                    ),
                });
            }
            OracleCheck::Monotonicity => report.push(Entry::from_verdict(
                format!("monotonicity(n={n})"),
                &oracle::monotonicity_check(n)?,
            )),
        }
        Ok(())
    })
}

fn required<'a>(value: Option<&'a str>, flag: &str) -> Result<&'a str> {
    value.ok_or_else(|| Error::Usage(format!("reduces needs --{flag}")))
}

fn pigeonhole_k(n: usize, k: Option<u64>) -> Result<u64> {
    match k {
        Some(k) => Ok(k),
        None if n >= 2 => Ok(n as u64 - 1),
        None => Err(Error::Usage(
            "pigeonhole needs n >= 2 or an explicit --k".into(),
        )),
    }
}

/// `table,injective,max_preimage` rows: the `k+1 -> k` maps for the
/// pigeonhole check, every table on `{0..n}` otherwise.
pub fn oracle_csv(n: usize, check: OracleCheck, k: Option<u64>) -> Result<String> {
    let universe = oracle::FiniteUniverse::new(n)?;
    let tables: Box<dyn Iterator<Item = Vec<u8>>> = match check {
        OracleCheck::Pigeonhole => {
            let k = pigeonhole_k(n, k)? as usize;
            Box::new(oracle::all_maps(k + 1, k))
        }
        _ => Box::new(universe.tables()),
    };
    let mut out = String::from("table,injective,max_preimage\n");
    for t in tables {
        let c = oracle::classify_table(&t);
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(&table_string(&t)),
            c.injective,
            c.max_preimage
        );
    }
    Ok(out)
}
