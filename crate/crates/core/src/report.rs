//! The driver behind the command-line verbs: one [`Command`] in, one
//! [`Report`] out. Reports carry verdicts, witnesses, the policies in force
//! and content hashes of every enumeration used; timing appears only in the
//! human rendering so machine output stays byte-stable.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{payload_hash, Cache, CacheKey, CacheStatus};
use crate::conjectures::{
    check_proper_associated_over, check_unique_maximal_over, monoids_from_codes, ReadingOutcome, SWEEP_CAP,
};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::family::{
    check_reduction, enumerate_family_codes, find_rare_element, phi, reduce_to_half, FamilyCode, SetFamily,
};
use crate::local::local_certificates_over;
use crate::network::{monoid_domain, network_over, MonoidDomain, Multiaction, MultiactionKind, NetworkOptions};
use crate::pseudo::{
    brute_force_pseudocomplement, pseudocomplement_to_element, quadratic_ideal, solve_family, solve_recursive,
    BRUTE_FORCE_LIMIT,
};
use crate::ring::{build_ring, Ring, RingSpec};
use crate::semilinear::{dual_table, phi_bound_scan, Endgame, PHI_SCAN_CAP, SUBSPACE_FIELD_CAP};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hard limit on exhaustive submonoid enumeration.
pub const RING_ORDER_LIMIT: u64 = crate::network::DEFAULT_ENUMERATION_ORDER as u64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verb")]
pub enum Command {
    Ucsc {
        n: u32,
    },
    NetworkCheck {
        ring: String,
        multiaction: MultiactionKind,
    },
    #[serde(rename = "conj2")]
    ProperAssociation {
        n: u32,
    },
    #[serde(rename = "conj3")]
    UniqueMaximal {
        n: u32,
    },
    #[serde(rename = "theorem2")]
    DualTable {
        p: u32,
        nmax: u32,
    },
    PhiScan {
        pmax: u64,
    },
    #[serde(rename = "prop9")]
    LocalRing {
        ring: String,
    },
    FamilyCheck {
        input: PathBuf,
    },
    PseudoSolve {
        input: PathBuf,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Ucsc { .. } => "ucsc",
            Command::NetworkCheck { .. } => "network-check",
            Command::ProperAssociation { .. } => "conj2",
            Command::UniqueMaximal { .. } => "conj3",
            Command::DualTable { .. } => "theorem2",
            Command::PhiScan { .. } => "phi-scan",
            Command::LocalRing { .. } => "prop9",
            Command::FamilyCheck { .. } => "family-check",
            Command::PseudoSolve { .. } => "pseudo-solve",
        }
    }

    /// The verb's hard size limit, in the verb's own unit.
    pub fn hard_cap(&self) -> u64 {
        match self {
            Command::Ucsc { .. } | Command::ProperAssociation { .. } | Command::UniqueMaximal { .. } => {
                SWEEP_CAP as u64
            }
            Command::NetworkCheck { .. } | Command::LocalRing { .. } => RING_ORDER_LIMIT,
            Command::DualTable { .. } => SUBSPACE_FIELD_CAP,
            Command::PhiScan { .. } => PHI_SCAN_CAP,
            Command::FamilyCheck { .. } | Command::PseudoSolve { .. } => crate::family::MAX_UNIVERSE as u64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Size cap in the verb's unit; clamped to [`Command::hard_cap`].
    pub cap: Option<u64>,
    pub jobs: usize,
    pub format: Format,
    pub cache: Cache,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            cap: None,
            jobs: 1,
            format: Format::Human,
            cache: Cache::disabled(),
        }
    }

    pub fn effective_cap(&self) -> u64 {
        let hard = self.command.hard_cap();
        self.cap.map_or(hard, |c| c.min(hard))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub holds: bool,
    /// `None` for purely informational verdicts.
    pub expected: Option<bool>,
}

impl Verdict {
    fn expect(claim: impl Into<String>, holds: bool, expected: bool) -> Self {
        Verdict {
            claim: claim.into(),
            holds,
            expected: Some(expected),
        }
    }

    fn info(claim: impl Into<String>, holds: bool) -> Self {
        Verdict {
            claim: claim.into(),
            holds,
            expected: None,
        }
    }

    pub fn surprising(&self) -> bool {
        self.expected.is_some_and(|e| e != self.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub key: CacheKey,
    pub count: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub artifact_version: String,
    pub verb: String,
    pub inputs: Command,
    pub cap: u64,
    pub policies: Vec<String>,
    pub verdicts: Vec<Verdict>,
    /// Noteworthy results that do not affect the exit status.
    pub findings: Vec<String>,
    pub details: Vec<String>,
    pub enumerations: Vec<EnumerationRecord>,
    pub data: Value,
    #[serde(skip)]
    pub cache_events: Vec<(String, CacheStatus)>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl PartialEq for Report {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        Report {
            artifact_version: ARTIFACT_VERSION.into(),
            verb: config.command.verb().into(),
            inputs: config.command.clone(),
            cap: config.effective_cap(),
            policies: BASE_POLICIES.iter().map(|s| s.to_string()).collect(),
            verdicts: Vec::new(),
            findings: Vec::new(),
            details: Vec::new(),
            enumerations: Vec::new(),
            data: Value::Null,
            cache_events: Vec::new(),
            elapsed: None,
        }
    }

    pub fn surprises(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.surprising())
    }

    /// 0 when every verdict is as expected, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.surprises().next().is_some() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Human => Ok(self.to_human()),
        }
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let inputs = serde_json::to_value(&self.inputs).unwrap_or(Value::Null);
        let args: Vec<String> = inputs
            .as_object()
            .into_iter()
            .flatten()
            .filter(|(k, _)| *k != "verb")
            .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
            .collect();
        let _ = writeln!(
            out,
            "monoidal {} {} {} (cap {})",
            self.artifact_version,
            self.verb,
            args.join(" "),
            self.cap
        );
        let _ = writeln!(out, "verdicts:");
        for v in &self.verdicts {
            let tag = match (v.expected, v.surprising()) {
                (_, true) => "SURPRISE",
                (Some(_), false) => "ok",
                (None, _) => "info",
            };
            let _ = writeln!(out, "  [{tag}] {} = {}", v.claim, v.holds);
        }
        if !self.findings.is_empty() {
            let _ = writeln!(out, "findings:");
            for f in &self.findings {
                let _ = writeln!(out, "  {f}");
            }
        }
        for d in &self.details {
            let _ = writeln!(out, "{d}");
        }
        for e in &self.enumerations {
            let status = self
                .cache_events
                .iter()
                .find(|(k, _)| *k == e.key.kind)
                .map_or("", |(_, s)| match s {
                    CacheStatus::Disabled => "",
                    CacheStatus::Hit => " (cache hit)",
                    CacheStatus::Miss => " (cached)",
                    CacheStatus::Recomputed => " (corrupt cache entry recomputed)",
                });
            let _ = writeln!(
                out,
                "enumeration {} {}: {} items, sha256 {}{status}",
                e.key.kind,
                e.key.params,
                e.count,
                &e.sha256[..16]
            );
        }
        if let Some(t) = self.elapsed {
            let _ = writeln!(out, "time: {t:.2?}");
        }
        let _ = writeln!(out, "exit status: {}", self.exit_code());
        out
    }

    fn record<T: Serialize>(&mut self, key: CacheKey, status: CacheStatus, items: &[T]) -> Result<()> {
        self.cache_events.push((key.kind.clone(), status));
        self.enumerations.push(EnumerationRecord {
            sha256: payload_hash(&items)?,
            count: items.len(),
            key,
        });
        Ok(())
    }
}

const BASE_POLICIES: &[&str] = &[
    "ideals ordered by (size, elements); covering search tries maximal ideals first, then ascending size",
    "associated-set candidates: (M∖I) ∪ (fixed ∩ M), then M, then the reduction candidate, then every (M∖I) ∪ J by mask",
    "symmetric stabilizers generated by adjacent transpositions of the image; group stabilizers by greedy generators",
    "symmetric lifts pair fibers in index order and fix everything off M̂",
    "recursive pseudocomplements choose the fiber with the least element and extend the quotient map by the identity",
    "scaling factors and Möbius tuples are the least by index and lexicographic order",
];

fn check_n(n: u32, cap: u64, what: &str) -> Result<()> {
    if n == 0 || n as u64 > cap {
        return Err(Error::CapExceeded {
            what: format!("{what} universe {n}"),
            cap,
        });
    }
    Ok(())
}

fn ring_from(spec: &str, cap: u64) -> Result<Ring> {
    let spec: RingSpec = spec.parse()?;
    let ring = build_ring(&spec)?;
    let _ = cap;
    Ok(ring)
}

fn families(config: &RunConfig, report: &mut Report, n: u32) -> Result<Vec<FamilyCode>> {
    let cap = config.effective_cap();
    let key = CacheKey::new("families", format!("n={n}"), cap);
    let (codes, status) = config
        .cache
        .get_or_compute(&key, || enumerate_family_codes(n, cap as u32))?;
    report.record(key, status, &codes)?;
    Ok(codes)
}

fn submonoids(
    config: &RunConfig,
    report: &mut Report,
    ma: &Multiaction,
    opts: &NetworkOptions,
) -> Result<(MonoidDomain, Vec<ElemSet>)> {
    let ring = ma.ring();
    let reduced = opts.reduce && ma.kind() == MultiactionKind::Automorphic && crate::network::has_unit_reduction(ring);
    let kind = if reduced { "unit-subgroups" } else { "submonoids" };
    let key = CacheKey::new(kind, ring.spec_string(), opts.order_cap as u64);
    let (lists, status) = config.cache.get_or_compute(&key, || {
        let (_, ms) = monoid_domain(ma, opts)?;
        Ok(ms.iter().map(ElemSet::to_u32_vec).collect::<Vec<_>>())
    })?;
    report.record(key, status, &lists)?;
    let domain = if reduced {
        MonoidDomain::UnitSubgroups
    } else {
        MonoidDomain::Exhaustive
    };
    let sets = lists
        .into_iter()
        .map(|l| ElemSet::from_elems(ring.order(), l.into_iter().map(|x| x as usize)))
        .collect();
    Ok((domain, sets))
}

fn read_family(path: &PathBuf) -> Result<SetFamily> {
    let family = SetFamily::parse(&std::fs::read_to_string(path)?)?;
    family.check_intersection_closed()?;
    if !family.contains_empty() || !family.contains_union() {
        return Err(Error::MissingTopOrBottom);
    }
    Ok(family)
}

/// Runs one command on a pool of `config.jobs` workers.
pub fn run(config: &RunConfig) -> Result<Report> {
    if config.jobs == 0 {
        return Err(Error::PreconditionViolated("worker count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::PreconditionViolated(e.to_string()))?;
    let start = Instant::now();
    let mut report = pool.install(|| dispatch(config))?;
    report.elapsed = Some(start.elapsed());
    Ok(report)
}

fn dispatch(config: &RunConfig) -> Result<Report> {
    let mut report = Report::new(config);
    let cap = config.effective_cap();
    match &config.command {
        Command::Ucsc { n } => ucsc(config, &mut report, *n)?,
        Command::NetworkCheck { ring, multiaction } => {
            let ring = ring_from(ring, cap)?;
            let ma = Multiaction::of_kind(&ring, *multiaction)?;
            let opts = NetworkOptions {
                order_cap: cap as usize,
                ..NetworkOptions::default()
            };
            let (domain, monoids) = submonoids(config, &mut report, &ma, &opts)?;
            let net = network_over(&ma, domain, &monoids)?;
            report.policies.push(format!("ring {}", ring.spec_string()));
            report.verdicts.push(Verdict::info(
                format!(
                    "{:?} multiaction on {} is a monoidal network",
                    net.multiaction, net.ring
                ),
                net.verdict,
            ));
            if net.inconclusive > 0 {
                report.findings.push(format!(
                    "{} monoids were inconclusive (candidate cap)",
                    net.inconclusive
                ));
            }
            for f in net.failures() {
                let why = f
                    .search
                    .obstructions
                    .first()
                    .map_or("no candidate".to_string(), |o| format!("{:?}", o.reason));
                report.details.push(format!("  uncovered monoid {:?}: {why}", f.monoid));
            }
            report.details.push(format!(
                "{} monoids ({:?} domain), {} certified",
                net.monoid_count,
                net.domain,
                net.certificates().count()
            ));
            report.data = serde_json::to_value(&net)?;
        }
        Command::ProperAssociation { n } => {
            check_n(*n, cap, "sweep")?;
            let codes = families(config, &mut report, *n)?;
            let r = check_proper_associated_over(*n, &monoids_from_codes(*n, &codes)?)?;
            report.verdicts.push(Verdict::expect(
                format!("n={n}: every non-subring submonoid has a maximal covering ideal with a strictly smaller associated submonoid"),
                r.counterexamples.is_empty(),
                true,
            ));
            report.details.push(format!(
                "{} monoids, {} subrings skipped, {} certified, {} counterexamples",
                r.monoids,
                r.subrings_skipped,
                r.certified,
                r.counterexamples.len()
            ));
            for c in &r.counterexamples {
                report
                    .details
                    .push(format!("  counterexample {:?}: {}", c.monoid, c.detail));
            }
            report.data = serde_json::to_value(&r)?;
        }
        Command::UniqueMaximal { n } => {
            check_n(*n, cap, "sweep")?;
            let codes = families(config, &mut report, *n)?;
            let r = check_unique_maximal_over(*n, &monoids_from_codes(*n, &codes)?)?;
            let line = |name: &str, o: &ReadingOutcome| {
                format!(
                    "{name}: {} monoids meet the hypothesis, {} counterexamples",
                    o.premise,
                    o.counterexamples.len()
                )
            };
            report.verdicts.push(Verdict::expect(
                format!("n={n}: one maximal covering ideal forces {{0,1}} as the only submonoid associated to a maximal covering ideal"),
                r.maximal.counterexamples.is_empty(),
                true,
            ));
            report.verdicts.push(Verdict::expect(
                format!("n={n}: one covering ideal overall forces {{0,1}} as the only covered submonoid"),
                r.overall.counterexamples.is_empty(),
                true,
            ));
            report.verdicts.push(Verdict::info(
                format!("n={n}: one maximal covering ideal forces {{0,1}} as the only submonoid covered by any ideal"),
                r.literal.counterexamples.is_empty(),
            ));
            report.details.push(line("maximal reading", &r.maximal));
            report.details.push(line("overall reading", &r.overall));
            report.details.push(line("literal reading", &r.literal));
            for c in &r.literal.counterexamples {
                report.findings.push(format!(
                    "literal reading fails at {:?} ({}): extra covered submonoids come from non-maximal ideals",
                    c.monoid, c.detail
                ));
            }
            for c in r.maximal.counterexamples.iter().chain(&r.overall.counterexamples) {
                report
                    .details
                    .push(format!("  counterexample {:?}: {}", c.monoid, c.detail));
            }
            report.data = serde_json::to_value(&r)?;
        }
        Command::DualTable { p, nmax } => {
            let q = (*p as u64).checked_pow(*nmax).unwrap_or(u64::MAX);
            if q > cap {
                return Err(Error::CapExceeded {
                    what: format!("field order {p}^{nmax}"),
                    cap,
                });
            }
            let rows = dual_table(*p, *nmax)?;
            report.details.push(format!(
                "{:>3} {:>2} {:>6} {:<22} {}",
                "p", "n", "holds", "counterexample-basis", "witness-polynomial-check"
            ));
            for r in &rows {
                report.verdicts.push(Verdict::expect(
                    format!("automorphic multiaction on R_{{{},{}}} is a monoidal network", r.n, r.p),
                    r.holds,
                    r.n <= 3,
                ));
                if r.full_ring.is_some() || r.endgame.is_some() {
                    report.verdicts.push(Verdict::expect(
                        format!("p={} n={}: independent routes agree", r.p, r.n),
                        r.full_ring.is_none_or(|v| v == r.holds) && r.endgame.as_ref().is_none_or(|e| e.confirms()),
                        true,
                    ));
                }
                let endgame = match &r.endgame {
                    None => "-".to_string(),
                    Some(Endgame::Degree { element, degree, mobius_none }) => {
                        format!("degree: element {element} of degree {degree}, no Möbius tuple {mobius_none}")
                    }
                    Some(Endgame::WitnessPolynomial { polynomial, irreducible, root, mobius_none, scaling_none }) => format!(
                        "quartic {polynomial:?} irreducible {irreducible}, root {root}, no Möbius tuple {mobius_none}, span{{1,root}} unscalable {scaling_none}"
                    ),
                    Some(Endgame::Totient { phi, bound, eliminated }) => {
                        format!("totient: φ(p²+1) = {phi} vs bound {bound}, eliminated {eliminated}")
                    }
                };
                let basis = r.counterexample_basis.as_ref().map_or("-".into(), |b| format!("{b:?}"));
                let full = r.full_ring.map_or(String::new(), |v| format!(" (full ring {v})"));
                report.details.push(format!(
                    "{:>3} {:>2} {:>6} {:<22} {endgame}{full}",
                    r.p, r.n, r.holds, basis
                ));
            }
            report
                .policies
                .push(format!("field moduli: least irreducible polynomials over 𝔽_{p}"));
            report.data = serde_json::to_value(&rows)?;
        }
        Command::PhiScan { pmax } => {
            if *pmax > cap {
                return Err(Error::CapExceeded {
                    what: "totient scan bound".into(),
                    cap,
                });
            }
            let scan = phi_bound_scan(*pmax)?;
            if *pmax >= 22 {
                report.verdicts.push(Verdict::expect(
                    "primes 3 ≤ p < 23 with φ(p²+1) ≤ 4(p+1) are exactly 3, 5, 7",
                    scan.loose_survivors == [3, 5, 7],
                    true,
                ));
                report.verdicts.push(Verdict::expect(
                    "the stricter 2(p+1) test eliminates 7 and leaves 3, 5",
                    scan.survivors == [3, 5],
                    true,
                ));
            }
            if *pmax >= 23 {
                report.verdicts.push(Verdict::expect(
                    format!("f(p) < 1 for every prime 23 ≤ p ≤ {pmax}"),
                    scan.f_below_one,
                    true,
                ));
            }
            for r in scan.rows.iter().filter(|r| r.p < 30) {
                report.details.push(format!(
                    "p={:>2} φ(p²+1)={:>4} 4(p+1)={:>3} 2(p+1)={:>4} survives={} f={:.6}",
                    r.p,
                    r.phi,
                    r.bound,
                    r.strict_bound.map_or("-".into(), |b| b.to_string()),
                    r.survives,
                    r.f
                ));
            }
            report.data = serde_json::to_value(&scan)?;
        }
        Command::LocalRing { ring } => {
            let ring = ring_from(ring, cap)?;
            crate::local::local_maximal_ideal(&ring)?;
            let ma = Multiaction::symmetric_top(&ring);
            let opts = NetworkOptions {
                order_cap: cap as usize,
                reduce: false,
                ..NetworkOptions::default()
            };
            let (_, monoids) = submonoids(config, &mut report, &ma, &opts)?;
            let r = local_certificates_over(&ring, &monoids)?;
            report.policies.push(format!("ring {}", ring.spec_string()));
            report.verdicts.push(Verdict::expect(
                format!("maximal ideal of {} covers every extended submonoid with M̂ = M", r.ring),
                r.holds(),
                true,
            ));
            report.details.push(format!(
                "{} monoids, {} certificates, {} search disagreements, {} monotonicity failures",
                r.monoids,
                r.certificates.len(),
                r.search_disagreements.len(),
                r.monotonicity_failures.len()
            ));
            report.data = serde_json::to_value(&r)?;
        }
        Command::FamilyCheck { input } => {
            let family = read_family(input)?;
            let n = family.universe_size();
            let cert = find_rare_element(&family);
            let holds = cert.is_ok();
            report.verdicts.push(Verdict::expect(
                format!("some point of {family} lies in at most half of the members"),
                holds,
                true,
            ));
            let mut data = json!({ "family": family.to_text(), "sha256": family.content_hash() });
            if let Ok(c) = &cert {
                let reduction = reduce_to_half(&family, c.element)?;
                check_reduction(&family, &reduction)?;
                report.details.push(format!(
                    "point {} lies in {} of {} members; reduced family {}",
                    crate::family::point_name(c.element),
                    c.frequency,
                    c.family_size,
                    reduction.reduced
                ));
                data["certificate"] = serde_json::to_value(c)?;
                data["reduction"] = serde_json::to_value(&reduction)?;
            }
            data["basis_sets"] = serde_json::to_value(crate::family::basis_sets(&family))?;
            data["monoid"] = serde_json::to_value(phi(&family)?.to_u32_vec())?;
            let _ = n;
            report.data = data;
        }
        Command::PseudoSolve { input } => {
            let family = read_family(input)?;
            let n = family.universe_size();
            check_n(n, SWEEP_CAP as u64, "pseudocomplement")?;
            let ring = build_ring(&RingSpec::product(2, n))?;
            let m = phi(&family)?;
            let t = solve_recursive(&ring, &m)?;
            let verdict = quadratic_ideal(&ring, &t)?;
            let element = pseudocomplement_to_element(&ring, &t)?;
            report.verdicts.push(Verdict::expect(
                "the recursive construction is a pseudocomplement",
                verdict.proper,
                true,
            ));
            if m.len() <= BRUTE_FORCE_LIMIT {
                let brute = brute_force_pseudocomplement(&ring, &m)?;
                report.verdicts.push(Verdict::expect(
                    "exhaustive search also finds a pseudocomplement",
                    brute.is_some(),
                    true,
                ));
            }
            report.details.push(format!(
                "involution pairs {:?}; quadratic ideal {:?}; point {} lies in {} of {} members",
                t.orbits(),
                verdict.quadratic_ideal,
                crate::family::point_name(element.element),
                element.frequency,
                element.family_size
            ));
            report.data = json!({
                "family": family.to_text(),
                "monoid": m.to_u32_vec(),
                "involution": t.record(),
                "quadratic_ideal": verdict.quadratic_ideal,
                "element": element,
            });
        }
    }
    Ok(report)
}

#[derive(Serialize)]
struct UcscFailure {
    family: String,
    reason: String,
}

fn ucsc(config: &RunConfig, report: &mut Report, n: u32) -> Result<()> {
    check_n(n, config.effective_cap(), "family")?;
    let codes = families(config, report, n)?;
    let ring = build_ring(&RingSpec::product(2, n))?;
    let outcomes: Vec<(bool, bool, bool)> = codes
        .par_iter()
        .map(|&c| {
            let family = crate::family::decode_family(n, c);
            let by_frequency = match find_rare_element(&family) {
                Ok(cert) => {
                    let reduction = reduce_to_half(&family, cert.element)?;
                    check_reduction(&family, &reduction)?;
                    cert.holds()
                }
                Err(Error::CounterexampleFound(_)) => false,
                Err(e) => return Err(e),
            };
            let (by_pseudo, same) = match solve_family(&ring, &family) {
                Ok(sol) => {
                    let rare = find_rare_element(&family).ok().map(|c| c.element);
                    (
                        2 * sol.element.frequency <= sol.element.family_size,
                        rare == Some(sol.element.element),
                    )
                }
                Err(Error::NoCoveringIdeal(_)) => (false, false),
                Err(e) => return Err(e),
            };
            Ok((by_frequency, by_pseudo, same))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<UcscFailure> = codes
        .iter()
        .zip(&outcomes)
        .filter(|(_, (f, p, _))| !f || !p)
        .map(|(&c, (f, p, _))| UcscFailure {
            family: crate::family::decode_family(n, c).to_text(),
            reason: format!("frequency route {f}, pseudocomplement route {p}"),
        })
        .collect();
    let frequency = outcomes.iter().filter(|o| o.0).count();
    let pseudo = outcomes.iter().filter(|o| o.1).count();
    let same = outcomes.iter().filter(|o| o.2).count();
    report.verdicts.push(Verdict::expect(
        format!("n={n}: every family has a point in at most half of its members"),
        frequency == codes.len(),
        true,
    ));
    report.verdicts.push(Verdict::expect(
        format!("n={n}: the pseudocomplement route certifies every family"),
        pseudo == codes.len(),
        true,
    ));
    report.details.push(format!(
        "{} families; {frequency} certified by frequency, {pseudo} by pseudocomplement; {same} pick the same point",
        codes.len()
    ));
    report.data = json!({
        "n": n,
        "families": codes.len(),
        "certified_by_frequency": frequency,
        "certified_by_pseudocomplement": pseudo,
        "same_point": same,
        "failures": failures,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cmd(command: Command) -> Report {
        run(&RunConfig::new(command)).unwrap()
    }

    #[test]
    fn machine_reports_round_trip_and_ignore_worker_count() {
        let mut cfg = RunConfig::new(Command::UniqueMaximal { n: 3 });
        let a = run(&cfg).unwrap();
        cfg.jobs = 4;
        let b = run(&cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = Report::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json().unwrap(), a.to_json().unwrap());
    }

    #[test]
    fn dual_table_for_three() {
        let r = run_cmd(Command::DualTable { p: 3, nmax: 4 });
        assert_eq!(r.exit_code(), 0);
        let holds: Vec<bool> = r
            .verdicts
            .iter()
            .filter(|v| v.claim.starts_with("automorphic"))
            .map(|v| v.holds)
            .collect();
        assert_eq!(holds, vec![true, true, true, false]);
        assert!(r.to_human().contains("exit status: 0"));
    }

    #[test]
    fn ucsc_small() {
        let r = run_cmd(Command::Ucsc { n: 3 });
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.data["families"], 45);
        assert_eq!(r.data["certified_by_pseudocomplement"], 45);
    }

    #[test]
    fn family_check_rejects_non_closed_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        std::fs::write(&path, "n=3\n-\n0,1\n1,2\n0,1,2\n").unwrap();
        let err = run(&RunConfig::new(Command::FamilyCheck { input: path })).unwrap_err();
        assert!(
            matches!(err, Error::NotIntersectionClosed { a: 0b011, b: 0b110 }),
            "{err}"
        );
    }

    #[test]
    fn caps_are_clamped_and_enforced() {
        let mut cfg = RunConfig::new(Command::ProperAssociation { n: 4 });
        cfg.cap = Some(1000);
        assert_eq!(cfg.effective_cap(), SWEEP_CAP as u64);
        cfg.cap = Some(3);
        assert!(matches!(run(&cfg), Err(Error::CapExceeded { .. })));
        cfg.jobs = 0;
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn cache_is_used_on_second_run() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(Command::Ucsc { n: 3 });
        cfg.cache = Cache::at(dir.path());
        let first = run(&cfg).unwrap();
        let second = run(&cfg).unwrap();
        assert_eq!(first.cache_events[0].1, CacheStatus::Miss);
        assert_eq!(second.cache_events[0].1, CacheStatus::Hit);
        assert_eq!(first.to_json().unwrap(), second.to_json().unwrap());
    }

    #[test]
    fn local_ring_and_network_check() {
        let r = run_cmd(Command::LocalRing {
            ring: "dual:2^2".into(),
        });
        assert_eq!(r.exit_code(), 0);
        let r = run_cmd(Command::NetworkCheck {
            ring: "product:3^2".into(),
            multiaction: MultiactionKind::Symmetric,
        });
        assert!(!r.verdicts[0].holds);
        assert_eq!(r.exit_code(), 0);
        assert!(matches!(
            run(&RunConfig::new(Command::LocalRing { ring: "mod:12".into() })),
            Err(Error::NotLocal)
        ));
    }
}
