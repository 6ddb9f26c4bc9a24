//! Corpus sweeps: every sequence up to a length cap in every small group,
//! plus seeded random instances, pushed through the selected checkers.
//!
//! Instances are processed in batches on a dedicated rayon pool. Each batch
//! is folded into an [`Aggregate`] whose merge only adds counters and keeps
//! the failures with the smallest instance keys, so the result does not
//! depend on scheduling or on the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::abelian_groups_up_to;
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, GroupSpec, Subgroup};
use crate::literal::Presentation;
use crate::setpartition::{
    complete_split, main_pipeline, main_verify, make_setpartition, partition_solve, partition_verify, CaseTag,
    Mode,
};
use crate::sequence::{nterm_subsums, GSequence};
use crate::verifiers::{
    check_heavy_span, check_kneser, check_pigeonhole, check_s_star, check_subsum_kneser, CheckReport, Outcome,
};

pub const AUDIT_ORDER_CAP: usize = 64;
/// Most sequences the exhaustive part may enumerate.
pub const EXHAUSTIVE_SEQUENCE_CAP: u128 = 50_000_000;
const BATCH: usize = 4096;
const KEEP_FAILURES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Checker {
    SubsumKneser,
    SStar,
    Kneser,
    Pigeonhole,
    HeavySpan,
    Split,
    Partition,
    Main,
    MainFullGroup,
}

impl Checker {
    pub const ALL: [Checker; 9] = [
        Checker::SubsumKneser,
        Checker::SStar,
        Checker::Kneser,
        Checker::Pigeonhole,
        Checker::HeavySpan,
        Checker::Split,
        Checker::Partition,
        Checker::Main,
        Checker::MainFullGroup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Checker::SubsumKneser => "subsum_kneser",
            Checker::SStar => "s_star",
            Checker::Kneser => "kneser",
            Checker::Pigeonhole => "pigeonhole",
            Checker::HeavySpan => "heavy_span",
            Checker::Split => "split",
            Checker::Partition => "partition",
            Checker::Main => "main",
            Checker::MainFullGroup => "main_full_group",
        }
    }
}

impl fmt::Display for Checker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Checker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Checker> {
        let t = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match t.as_str() {
            "main_pipeline" | "maincert" => Some(Checker::Main),
            "full_group" | "main_full" | "fullgroup" => Some(Checker::MainFullGroup),
            "sstar" => Some(Checker::SStar),
            _ => None,
        };
        alias
            .or_else(|| Checker::ALL.into_iter().find(|c| c.as_str() == t))
            .ok_or_else(|| Error::Parse(format!("unknown checker {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub max_group_order: usize,
    pub exhaustive_len_cap: usize,
    pub random_samples: u64,
    pub seed: u64,
    pub jobs: usize,
    pub checkers: Vec<Checker>,
    /// Exhaustive enumeration only covers groups up to this order
    /// (defaults to `max_group_order`).
    pub exhaustive_max_order: Option<usize>,
    pub random_support_cap: usize,
    pub random_mult_cap: u32,
}

impl Default for AuditConfig {
    fn default() -> AuditConfig {
        AuditConfig {
            max_group_order: 8,
            exhaustive_len_cap: 4,
            random_samples: 0,
            seed: 0,
            jobs: 1,
            checkers: Checker::ALL.to_vec(),
            exhaustive_max_order: None,
            random_support_cap: 8,
            random_mult_cap: 6,
        }
    }
}

/// The part of the configuration that shapes the result; `jobs` is left out.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AuditScope {
    pub max_group_order: usize,
    pub exhaustive_max_order: usize,
    pub exhaustive_len_cap: usize,
    pub random_samples: u64,
    pub seed: u64,
    pub checkers: Vec<Checker>,
    pub random_support_cap: usize,
    pub random_mult_cap: u32,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Tally {
    pub runs: u64,
    pub holds: u64,
    pub violated: u64,
    pub skipped: u64,
    pub internal_errors: u64,
    /// Finer counts: outcomes, certificate cases, skip reasons, failing steps.
    pub notes: BTreeMap<String, u64>,
}

impl Tally {
    fn note(&mut self, key: impl Into<String>) {
        *self.notes.entry(key.into()).or_insert(0) += 1;
    }

    fn merge(&mut self, other: Tally) {
        self.runs += other.runs;
        self.holds += other.holds;
        self.violated += other.violated;
        self.skipped += other.skipped;
        self.internal_errors += other.internal_errors;
        for (k, v) in other.notes {
            *self.notes.entry(k).or_insert(0) += v;
        }
    }

    pub fn count(&self, note: &str) -> u64 {
        self.notes.get(note).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub checker: Checker,
    /// `exhaustive` or `random#<index>`.
    pub origin: String,
    pub group: String,
    pub seq: String,
    pub seq_prime: String,
    pub n: usize,
    pub detail: String,
    pub replay: String,
    #[serde(skip)]
    key: (u8, u64, u64, usize, Checker),
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Aggregate {
    pub instances: u64,
    pub exhaustive_instances: u64,
    pub random_instances: u64,
    pub checkers: BTreeMap<Checker, Tally>,
    pub failures_total: u64,
    pub failures: Vec<Failure>,
}

impl Aggregate {
    fn merge(mut self, other: Aggregate) -> Aggregate {
        self.instances += other.instances;
        self.exhaustive_instances += other.exhaustive_instances;
        self.random_instances += other.random_instances;
        for (c, t) in other.checkers {
            self.checkers.entry(c).or_default().merge(t);
        }
        self.failures_total += other.failures_total;
        self.failures.extend(other.failures);
        self.trim();
        self
    }

    fn trim(&mut self) {
        if self.failures.len() > KEEP_FAILURES {
            self.failures.sort_by(|a, b| a.key.cmp(&b.key));
            self.failures.truncate(KEEP_FAILURES);
        }
    }

    fn tally(&mut self, c: Checker) -> &mut Tally {
        self.checkers.entry(c).or_default()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AuditReport {
    pub scope: AuditScope,
    pub groups: Vec<String>,
    #[serde(flatten)]
    pub totals: Aggregate,
}

impl AuditReport {
    pub fn tally(&self, c: Checker) -> Tally {
        self.totals.checkers.get(&c).cloned().unwrap_or_default()
    }

    /// No violations, internal errors or checker errors anywhere.
    pub fn clean(&self) -> bool {
        self.totals.failures_total == 0
    }

    /// Serialized aggregate; identical across runs with the same scope.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct GroupCtx {
    spec: GroupSpec,
    label: String,
    presentation: Presentation,
    /// Nontrivial proper subgroups, for the concentrated sampler.
    subgroups: Vec<Subgroup>,
}

struct Ctx<'a> {
    cfg: &'a AuditConfig,
    groups: Vec<GroupCtx>,
}

/// Number of multisets of size `1..=cap` over `q` symbols.
fn multiset_count(q: usize, cap: usize) -> u128 {
    let mut total: u128 = 0;
    // C(len + q - 1, len), built incrementally
    let mut c: u128 = 1;
    for len in 1..=cap as u128 {
        c = c * (len + q as u128 - 1) / len;
        total = total.saturating_add(c);
        if total > EXHAUSTIVE_SEQUENCE_CAP * 4 {
            break;
        }
    }
    total
}

/// Calls `f` with the multiplicity vector of every multiset of size
/// `1..=cap` over `q` symbols, in a fixed order.
fn for_each_multiset(q: usize, cap: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(pos: usize, left: usize, used: usize, mult: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if pos == mult.len() {
            if used > 0 {
                f(mult);
            }
            return;
        }
        for v in 0..=left {
            mult[pos] = v as u32;
            rec(pos + 1, left - v, used + v, mult, f);
        }
        mult[pos] = 0;
    }
    let mut mult = vec![0u32; q];
    rec(0, cap, 0, &mut mult, f);
}

pub fn run_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    if cfg.max_group_order > AUDIT_ORDER_CAP {
        return Err(Error::CapExceeded { order: cfg.max_group_order, cap: AUDIT_ORDER_CAP });
    }
    if cfg.jobs == 0 {
        return Err(Error::OutOfRange { what: "jobs", value: 0, lo: 1, hi: 1024 });
    }
    let exh_max = cfg.exhaustive_max_order.unwrap_or(cfg.max_group_order).min(cfg.max_group_order);
    let mut checkers = cfg.checkers.clone();
    checkers.sort();
    checkers.dedup();

    let specs = abelian_groups_up_to(cfg.max_group_order)?;
    let mut groups = Vec::with_capacity(specs.len());
    for spec in specs {
        let subgroups = enumerate_subgroups(&spec, AUDIT_ORDER_CAP)?
            .into_iter()
            .filter(|h| !h.is_trivial() && !h.is_full())
            .collect();
        groups.push(GroupCtx {
            label: spec.to_string(),
            presentation: Presentation::normalized(&spec),
            spec,
            subgroups,
        });
    }
    if cfg.exhaustive_len_cap > 0 {
        let total: u128 = groups
            .iter()
            .filter(|g| g.spec.order() <= exh_max)
            .map(|g| multiset_count(g.spec.order(), cfg.exhaustive_len_cap))
            .sum();
        if total > EXHAUSTIVE_SEQUENCE_CAP {
            return Err(Error::Precondition(format!(
                "exhaustive part would enumerate {total} sequences (cap {EXHAUSTIVE_SEQUENCE_CAP})"
            )));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start {} workers: {e}", cfg.jobs)))?;
    let ctx = Ctx { cfg, groups };
    let mut total = Aggregate::default();
    for &c in &checkers {
        total.tally(c);
    }
    let run_batch = |batch: &[(usize, u64, Vec<u32>)], total: Aggregate| -> Aggregate {
        let part = pool.install(|| {
            batch
                .par_iter()
                .fold(Aggregate::default, |mut agg, (gi, ordinal, mult)| {
                    exhaustive_unit(&ctx, &checkers, *gi, *ordinal, mult, &mut agg);
                    agg
                })
                .reduce(Aggregate::default, Aggregate::merge)
        });
        total.merge(part)
    };

    if cfg.exhaustive_len_cap > 0 {
        for (gi, g) in ctx.groups.iter().enumerate() {
            if g.spec.order() > exh_max {
                continue;
            }
            let mut batch: Vec<(usize, u64, Vec<u32>)> = Vec::with_capacity(BATCH);
            let mut ordinal = 0u64;
            for_each_multiset(g.spec.order(), cfg.exhaustive_len_cap, &mut |m| {
                batch.push((gi, ordinal, m.to_vec()));
                ordinal += 1;
                if batch.len() == BATCH {
                    total = run_batch(&batch, std::mem::take(&mut total));
                    batch.clear();
                }
            });
            total = run_batch(&batch, std::mem::take(&mut total));
        }
    }

    let mut start = 0u64;
    while start < cfg.random_samples {
        let end = (start + BATCH as u64).min(cfg.random_samples);
        let part = pool.install(|| {
            (start..end)
                .into_par_iter()
                .fold(Aggregate::default, |mut agg, i| {
                    random_unit(&ctx, &checkers, i, &mut agg);
                    agg
                })
                .reduce(Aggregate::default, Aggregate::merge)
        });
        total = total.merge(part);
        start = end;
    }
    total.failures.sort_by(|a, b| a.key.cmp(&b.key));

    Ok(AuditReport {
        scope: AuditScope {
            max_group_order: cfg.max_group_order,
            exhaustive_max_order: exh_max,
            exhaustive_len_cap: cfg.exhaustive_len_cap,
            random_samples: cfg.random_samples,
            seed: cfg.seed,
            checkers,
            random_support_cap: cfg.random_support_cap,
            random_mult_cap: cfg.random_mult_cap,
        },
        groups: ctx.groups.iter().map(|g| g.label.clone()).collect(),
        totals: total,
    })
}

/// `S` with every multiplicity cut down to `n`.
fn cap_height(s: &GSequence, n: usize) -> GSequence {
    let mut out = GSequence::empty(s.group());
    for (x, v) in s.distinct() {
        out.push(x, v.min(n as u32));
    }
    out
}

fn exhaustive_unit(ctx: &Ctx, checkers: &[Checker], gi: usize, ordinal: u64, mult: &[u32], agg: &mut Aggregate) {
    let g = &ctx.groups[gi];
    let s = GSequence::from_mults(&g.spec, mult.to_vec()).expect("multiplicities sized to the group");
    for n in 1..=s.len() {
        let sp = cap_height(&s, n);
        let inst = Instance { g, s: &s, sp: &sp, n, origin: "exhaustive".into(), key: (0, gi as u64, ordinal, n) };
        agg.instances += 1;
        agg.exhaustive_instances += 1;
        run_checkers(&inst, checkers, agg);
    }
}

fn random_unit(ctx: &Ctx, checkers: &[Checker], i: u64, agg: &mut Aggregate) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    rng.set_stream(i);
    let gi = rng.random_range(0..ctx.groups.len());
    let g = &ctx.groups[gi];
    let q = g.spec.order();
    let style = if g.subgroups.is_empty() { 0 } else { rng.random_range(0..3u8) };
    let (s, n) = match style {
        0 | 1 => {
            let k = rng.random_range(1..=q.min(ctx.cfg.random_support_cap.max(1)));
            let support: Vec<usize> = if style == 1 {
                // most of the support inside one coset of a random subgroup
                let h = &g.subgroups[rng.random_range(0..g.subgroups.len())];
                let coset = h.coset(rng.random_range(0..q)).to_vec();
                let k_in = rng.random_range(1..=k.min(coset.len()));
                let mut chosen: Vec<usize> =
                    sample(&mut rng, coset.len(), k_in).into_iter().map(|j| coset[j]).collect();
                let outside: Vec<usize> = (0..q).filter(|x| !coset.contains(x)).collect();
                let k_out = (k - k_in).min(outside.len());
                chosen.extend(sample(&mut rng, outside.len(), k_out).into_iter().map(|j| outside[j]));
                chosen
            } else {
                sample(&mut rng, q, k).into_vec()
            };
            let mut s = GSequence::empty(&g.spec);
            for x in support {
                s.push(x, rng.random_range(1..=ctx.cfg.random_mult_cap.max(1)));
            }
            let n = rng.random_range(1..=s.len());
            (s, n)
        }
        _ => nested_sample(g, &mut rng),
    };
    let full = cap_height(&s, n);
    let len = rng.random_range(n..=full.len());
    let mut mult = full.mults().to_vec();
    for left in (len + 1..=full.len()).rev() {
        // drop a uniformly chosen term
        let mut r = rng.random_range(0..left) as u32;
        let x = mult.iter().position(|&v| {
            if r < v {
                true
            } else {
                r -= v;
                false
            }
        });
        mult[x.expect("r is below the length")] -= 1;
    }
    let sp = GSequence::from_mults(&g.spec, mult).expect("same group");
    let inst = Instance { g, s: &s, sp: &sp, n, origin: format!("random#{i}"), key: (1, i, 0, n) };
    agg.instances += 1;
    agg.random_instances += 1;
    run_checkers(&inst, checkers, agg);
}

/// Heavy multiplicities on a coset `alpha + H2`, a few terms elsewhere in
/// `alpha + H` for `H2 <= H`, and a few outside `alpha + H`, partly in pairs
/// whose sum returns to `2 alpha + H`.
fn nested_sample(g: &GroupCtx, rng: &mut ChaCha8Rng) -> (GSequence, usize) {
    let spec = &g.spec;
    let h = &g.subgroups[rng.random_range(0..g.subgroups.len())];
    let inner: Vec<&Subgroup> = g.subgroups.iter().filter(|k| k.is_subgroup_of(h)).collect();
    let alpha = rng.random_range(0..spec.order());
    let h2 = if rng.random_bool(0.25) {
        Subgroup::trivial(spec)
    } else {
        inner[rng.random_range(0..inner.len())].clone()
    };
    let n = rng.random_range(3..=12usize);
    let mut s = GSequence::empty(spec);
    for x in h2.coset(alpha).iter() {
        if rng.random_bool(0.8) {
            s.push(x, rng.random_range(n as u32 / 2..=n as u32 + 2));
        }
    }
    let mid = h.coset(alpha).difference(&h2.coset(alpha)).to_vec();
    for _ in 0..rng.random_range(0..5) {
        if !mid.is_empty() {
            s.push(mid[rng.random_range(0..mid.len())], rng.random_range(1..=2));
        }
    }
    let hs = h.carrier().to_vec();
    let out: Vec<usize> = spec.elements().filter(|&x| !h.contains(spec.sub(x, alpha))).collect();
    for _ in 0..rng.random_range(0..4) {
        let x = out[rng.random_range(0..out.len())];
        s.push(x, 1);
        if rng.random_bool(0.7) {
            let back = spec.add(spec.add(alpha, alpha), hs[rng.random_range(0..hs.len())]);
            s.push(spec.sub(back, x), 1);
        }
    }
    if s.is_empty() {
        s.push(alpha, n as u32);
    }
    let n = n.min(s.len());
    (s, n)
}

struct Instance<'a> {
    g: &'a GroupCtx,
    s: &'a GSequence,
    sp: &'a GSequence,
    n: usize,
    origin: String,
    key: (u8, u64, u64, usize),
}

impl Instance<'_> {
    fn replay(&self, c: Checker) -> String {
        let p = &self.g.presentation;
        let (g, s, sp, n) = (&self.g.label, p.format_sequence(self.s), p.format_sequence(self.sp), self.n);
        match c {
            Checker::SubsumKneser | Checker::SStar => format!("subsum-lab subsums -g {g} -s \"{s}\" -n {n}"),
            Checker::Main => format!("subsum-lab maincert -g {g} -s \"{s}\" --sprime \"{sp}\" -n {n} --mode standard"),
            Checker::MainFullGroup => {
                format!("subsum-lab maincert -g {g} -s \"{s}\" --sprime \"{sp}\" -n {n} --mode fullgroup")
            }
            _ => format!("subsum-lab partition -g {g} -s \"{s}\" --sprime \"{sp}\" -n {n}"),
        }
    }

    fn fail(&self, agg: &mut Aggregate, c: Checker, detail: String) {
        agg.failures_total += 1;
        let p = &self.g.presentation;
        agg.failures.push(Failure {
            checker: c,
            origin: self.origin.clone(),
            group: self.g.label.clone(),
            seq: p.format_sequence(self.s),
            seq_prime: p.format_sequence(self.sp),
            n: self.n,
            detail,
            replay: self.replay(c),
            key: (self.key.0, self.key.1, self.key.2, self.key.3, c),
        });
        agg.trim();
    }

    fn error(&self, agg: &mut Aggregate, c: Checker, e: Error) {
        let t = agg.tally(c);
        if let Error::Internal { step, .. } = &e {
            t.internal_errors += 1;
            t.note(format!("internal:{step}"));
        } else {
            t.note("error");
        }
        self.fail(agg, c, e.to_string());
    }

    fn report(&self, agg: &mut Aggregate, c: Checker, r: Result<CheckReport>) {
        match r {
            Ok(r) => {
                let t = agg.tally(c);
                t.runs += 1;
                t.note(format!("outcome:{}", outcome_name(r.outcome)));
                if r.outcome == Outcome::Violated {
                    t.violated += 1;
                    self.fail(agg, c, r.violations.join("; "));
                } else {
                    t.holds += 1;
                }
            }
            Err(e) => self.error(agg, c, e),
        }
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Holds => "holds",
        Outcome::Violated => "violated",
        Outcome::Inapplicable => "inapplicable",
        Outcome::NotTriggered => "not-triggered",
    }
}

fn run_checkers(inst: &Instance, checkers: &[Checker], agg: &mut Aggregate) {
    let (s, sp, n) = (inst.s, inst.sp, inst.n);
    let height_ok = s.height() as usize <= n;
    for &c in checkers {
        match c {
            Checker::SubsumKneser | Checker::SStar => {
                if !height_ok {
                    let t = agg.tally(c);
                    t.skipped += 1;
                    t.note("skip:height");
                    continue;
                }
                let r = if c == Checker::SubsumKneser { check_subsum_kneser(s, n) } else { check_s_star(s, n) };
                inst.report(agg, c, r);
            }
            Checker::Kneser | Checker::Pigeonhole => {
                let parts = match make_setpartition(sp, n) {
                    Ok(p) => p.parts().to_vec(),
                    Err(e) => {
                        inst.error(agg, c, e);
                        continue;
                    }
                };
                let r = if c == Checker::Kneser {
                    check_kneser(&parts)
                } else {
                    check_pigeonhole(&s.support(), &parts[parts.len() - 1])
                };
                inst.report(agg, c, r);
            }
            Checker::HeavySpan => inst.report(agg, c, check_heavy_span(s, sp, n)),
            Checker::Split => {
                for k in 1..=n {
                    match complete_split(s, sp, n, k) {
                        Ok((t, tp)) => {
                            let problems = split_problems(s, sp, n, k, &t, &tp);
                            let tally = agg.tally(c);
                            tally.runs += 1;
                            if problems.is_empty() {
                                tally.holds += 1;
                            } else {
                                tally.violated += 1;
                                inst.fail(agg, c, format!("k = {k}: {}", problems.join("; ")));
                            }
                        }
                        Err(e) => inst.error(agg, c, e),
                    }
                }
            }
            Checker::Partition => match partition_solve(s, sp, n) {
                Ok(cert) => {
                    let v = partition_verify(&cert, s, sp, n);
                    let t = agg.tally(c);
                    t.runs += 1;
                    t.note(format!("case:{}", cert.case_label()));
                    if v.holds() {
                        t.holds += 1;
                    } else {
                        t.violated += 1;
                        inst.fail(agg, c, v.violations.join("; "));
                    }
                }
                Err(e) => inst.error(agg, c, e),
            },
            Checker::Main | Checker::MainFullGroup => {
                let mode = if c == Checker::Main { Mode::Standard } else { Mode::FullGroup };
                if mode == Mode::FullGroup && sp.len() + 1 < n + s.group().order() {
                    let t = agg.tally(c);
                    t.skipped += 1;
                    t.note("skip:short");
                    continue;
                }
                match main_pipeline(s, sp, n, mode) {
                    Ok(cert) => {
                        let v = main_verify(&cert, s, sp, n, mode);
                        let mut problems = v.violations.clone();
                        if mode == Mode::FullGroup && cert.case == CaseTag::I {
                            match nterm_subsums(s, n) {
                                Ok(sums) if sums.is_full() => {}
                                Ok(sums) => problems.push(format!("case i with |Σ_n(S)| = {} < |G|", sums.len())),
                                Err(e) => problems.push(e.to_string()),
                            }
                        }
                        let t = agg.tally(c);
                        t.runs += 1;
                        t.note(format!("case:{}", cert.case_label()));
                        if cert.case == CaseTag::II {
                            t.note(if cert.k == cert.h { "k_equals_h" } else { "k_below_h" });
                            if let Some(r) = cert.bounds.get("route") {
                                t.note(format!("route:{r}"));
                            }
                        }
                        if problems.is_empty() {
                            t.holds += 1;
                        } else {
                            t.violated += 1;
                            inst.fail(agg, c, problems.join("; "));
                        }
                    }
                    Err(Error::HypothesesUnmet(_)) => {
                        let t = agg.tally(c);
                        t.skipped += 1;
                        t.note("skip:hypotheses");
                    }
                    Err(e) => inst.error(agg, c, e),
                }
            }
        }
    }
}

/// The split postconditions, checked from scratch.
fn split_problems(s: &GSequence, sp: &GSequence, n: usize, k: usize, t: &GSequence, tp: &GSequence) -> Vec<String> {
    let mut out = Vec::new();
    if !t.concat(tp).divides(s) {
        out.push("T T' does not divide S".to_string());
    }
    if t.len() + tp.len() != sp.len() {
        out.push(format!("|T| + |T'| = {} != |S'| = {}", t.len() + tp.len(), sp.len()));
    }
    if t.height() as usize > k || k > t.len() {
        out.push(format!("need h(T) = {} <= k = {k} <= |T| = {}", t.height(), t.len()));
    }
    if tp.height() as usize > n - k || n - k > tp.len() {
        out.push(format!("need h(T') = {} <= n - k = {} <= |T'| = {}", tp.height(), n - k, tp.len()));
    }
    out
}
