//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every expected value below is computed here from definitions (brute-force
//! sums, stabilizers by translation, subgroups by closure) rather than taken
//! from the library.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use subsum_core::group::{make_group, GroupSpec, GroupSubset, Subgroup};
use subsum_core::literal::parse_group;
use subsum_core::search::{
    abelian_groups_up_to, gen_example, hunt_unique_expression, run_audit, two_cosets_subgroups, AuditConfig,
    AuditReport, Checker, ExampleKind, ExampleParams,
};
use subsum_core::sequence::{davenport_bruteforce, nterm_subsum_rows, GSequence};
use subsum_core::setpartition::complete_split;
use subsum_core::verifiers::{check_nfold_covering, check_nfold_structure, Outcome};

struct Line {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Line {
    Line { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Line {
    Line { ok: false, detail: detail.into() }
}

// ---- oracles ----

/// Rows `j -> Σ_j(S)` for every `j <= |S|`, by walking all count vectors.
fn brute_rows(g: &GroupSpec, mults: &[u32]) -> Vec<BTreeSet<usize>> {
    let items: Vec<(usize, u32)> = mults.iter().enumerate().filter(|(_, &v)| v > 0).map(|(x, &v)| (x, v)).collect();
    let total: usize = mults.iter().map(|&v| v as usize).sum();
    let mut rows = vec![BTreeSet::new(); total + 1];
    fn walk(g: &GroupSpec, items: &[(usize, u32)], len: usize, acc: usize, rows: &mut [BTreeSet<usize>]) {
        let Some((&(x, v), rest)) = items.split_first() else {
            rows[len].insert(acc);
            return;
        };
        let mut a = acc;
        for t in 0..=v as usize {
            walk(g, rest, len + t, a, rows);
            a = g.add(a, x);
        }
    }
    walk(g, &items, 0, 0, &mut rows);
    rows
}

fn stabilizer_of(g: &GroupSpec, a: &BTreeSet<usize>) -> BTreeSet<usize> {
    g.elements().filter(|&t| a.iter().all(|&x| a.contains(&g.add(x, t)))).collect()
}

fn closure(g: &GroupSpec, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = [g.zero()].into();
    loop {
        let next: BTreeSet<usize> =
            set.iter().flat_map(|&x| gens.iter().map(move |&y| g.add(x, y))).chain(set.iter().copied()).collect();
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// All subgroups, as closures of at most three generators (enough for rank <= 3).
fn all_subgroups(g: &GroupSpec) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let els: Vec<usize> = g.elements().collect();
    for &a in &els {
        for &b in &els[a..] {
            for &c in &els[b..] {
                out.insert(closure(g, &[a, b, c]));
            }
        }
    }
    out
}

/// The concentration clause read from its counting requirements: some `alpha`
/// and nontrivial `K <= H` for which both `H` and `K` fit.
fn clause_b(g: &GroupSpec, mults: &[u32], n: usize, sigma_len: usize, h: &BTreeSet<usize>) -> bool {
    let len: usize = mults.iter().map(|&v| v as usize).sum();
    if h.len() == 1 || h.len() == g.order() {
        return false;
    }
    let slack = len as i64 - n as i64;
    let fits = |sub: &BTreeSet<usize>, alpha: usize| {
        let outside: usize =
            g.elements().filter(|&x| !sub.contains(&g.sub(x, alpha))).map(|x| mults[x] as usize).sum();
        let (size, e) = (sub.len() as i64, outside as i64);
        (e + 1) * size <= sigma_len as i64 && e <= (g.order() / sub.len()) as i64 - 2 && (e + 1) * size <= slack
    };
    let ks: Vec<BTreeSet<usize>> =
        all_subgroups(g).into_iter().filter(|k| k.len() > 1 && k.is_subset(h)).collect();
    g.elements().any(|alpha| fits(h, alpha) && ks.iter().any(|k| fits(k, alpha)))
}

/// Calls `f` on every multiplicity vector over `order` elements with total in `1..=max_len`.
fn each_multiset(order: usize, max_len: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(i: usize, left: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if i == cur.len() {
            if cur.iter().any(|&v| v > 0) {
                f(cur);
            }
            return;
        }
        for v in 0..=left {
            cur[i] = v as u32;
            rec(i + 1, left - v, cur, f);
        }
        cur[i] = 0;
    }
    rec(0, max_len, &mut vec![0; order], f);
}

fn each_divisor(mults: &[u32], f: &mut impl FnMut(&[u32])) {
    fn rec(i: usize, top: &[u32], cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if i == top.len() {
            f(cur);
            return;
        }
        for v in 0..=top[i] {
            cur[i] = v;
            rec(i + 1, top, cur, f);
        }
    }
    rec(0, mults, &mut vec![0; mults.len()], f);
}

fn set_of(a: &GroupSubset) -> BTreeSet<usize> {
    a.iter().collect()
}

fn within(line: Line, took: Duration, limit: Duration) -> Line {
    if line.ok && took > limit {
        return fail(format!("{} (took {took:.1?}, limit {limit:?})", line.detail));
    }
    line
}

// ---- criteria ----

fn two_cosets_family() -> Line {
    let mut count = 0;
    for m in 4..=16usize {
        let g = make_group(&[m as i64]).unwrap();
        for h in two_cosets_subgroups(&g).unwrap() {
            let ex = match gen_example(ExampleKind::TwoCosets, &ExampleParams::new(&g, h.clone())) {
                Ok(ex) => ex,
                Err(e) => return fail(format!("C{m}, |H| = {}: {e}", h.order())),
            };
            let rows = brute_rows(&g, ex.s.mults());
            let sigma = &rows[ex.n];
            let stab = stabilizer_of(&g, sigma);
            let (go, ho) = (g.order(), h.order());
            if ex.s.len() != 2 * go - 4 * ho {
                return fail(format!("C{m}, |H| = {ho}: |S| = {}", ex.s.len()));
            }
            if sigma.len() != go - ho {
                return fail(format!("C{m}, |H| = {ho}: |Σ| = {}", sigma.len()));
            }
            if stab != set_of(h.carrier()) {
                return fail(format!("C{m}, |H| = {ho}: stabilizer {stab:?}"));
            }
            if clause_b(&g, ex.s.mults(), ex.n, sigma.len(), &stab) {
                return fail(format!("C{m}, |H| = {ho}: concentration clause satisfiable"));
            }
            count += 1;
        }
    }
    pass(format!("{count} instances, all identities exact"))
}

fn block_examples() -> Line {
    let cases = [
        (ExampleKind::BlockAndGenerator, "2x3x3", "(0,0,0);(1,0,0)"),
        (ExampleKind::PuncturedBlockAndGenerator, "3x3x3", "(0,0,0);(1,0,0);(2,0,0)"),
    ];
    let mut seen = Vec::new();
    for (kind, group, h) in cases {
        let p = parse_group(group).unwrap();
        let g = p.group().clone();
        let h = Subgroup::new(p.parse_set(h).unwrap()).unwrap();
        let ex = match gen_example(kind, &ExampleParams::new(&g, h.clone())) {
            Ok(ex) => ex,
            Err(e) => return fail(format!("{group}: {e}")),
        };
        let (go, ho) = (g.order(), h.order());
        let (want_len, want_sigma) = match kind {
            ExampleKind::BlockAndGenerator => {
                let ko = ex.k.as_ref().unwrap().order();
                ((go / ko - 1) * (ho + ko), go - ko + ho)
            }
            _ => (go, go - ho),
        };
        let rows = brute_rows(&g, ex.s.mults());
        let sigma = &rows[ex.n];
        if ex.s.len() != want_len || sigma.len() != want_sigma {
            return fail(format!("{group}: |S| = {}, |Σ| = {} (want {want_len}, {want_sigma})", ex.s.len(), sigma.len()));
        }
        if stabilizer_of(&g, sigma) != set_of(h.carrier()) {
            return fail(format!("{group}: stabilizer is not H"));
        }
        if clause_b(&g, ex.s.mults(), ex.n, sigma.len(), &set_of(h.carrier())) {
            return fail(format!("{group}: concentration clause satisfiable"));
        }
        seen.push(format!("{group}: |S| = {}, |Σ| = {}", ex.s.len(), sigma.len()));
    }
    pass(seen.join("; "))
}

fn audit_summary(r: &AuditReport, c: Checker) -> (bool, String) {
    let t = r.tally(c);
    let bad: Vec<_> = r.totals.failures.iter().filter(|f| f.checker == c).take(3).map(|f| f.detail.clone()).collect();
    let ok = t.violated == 0 && t.internal_errors == 0 && bad.is_empty();
    (
        ok,
        format!(
            "{}: runs {}, holds {}, skipped {}, violated {}, internal {}{}",
            c.as_str(),
            t.runs,
            t.holds,
            t.skipped,
            t.violated,
            t.internal_errors,
            if bad.is_empty() { String::new() } else { format!(", e.g. {bad:?}") }
        ),
    )
}

fn structure_sweep() -> Line {
    let mut applicable = 0u64;
    let mut templates = 0u64;
    for g in abelian_groups_up_to(9).unwrap() {
        if g.order() < 2 {
            continue;
        }
        let e = g.exponent();
        for mask in 1u32..(1 << g.order()) {
            let a = GroupSubset::from_indices(&g, (0..g.order()).filter(|i| mask >> i & 1 == 1));
            for n in [e - 1, e, e + 1] {
                if n == 0 {
                    continue;
                }
                for r in [check_nfold_structure(&a, n).unwrap(), check_nfold_covering(&a, n).unwrap()] {
                    match r.outcome {
                        Outcome::Violated => {
                            return fail(format!("{g} A = {:?} n = {n} {}: {:?}", a.to_vec(), r.name, r.violations))
                        }
                        Outcome::Holds => {
                            applicable += 1;
                            if r.detail.contains('/') {
                                templates += 1;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    // C3 x C3, A = {(0,0), (1,0), (0,1)}, n = 3
    let p = parse_group("3x3").unwrap();
    let a = p.parse_set("(0,0);(1,0);(0,1)").unwrap();
    let r = check_nfold_structure(&a, 3).unwrap();
    let na = brute_nfold(&a, 3);
    if r.outcome != Outcome::Holds || r.lhs != 8 || na != 8 || r.detail != "exp/punctured-subgroup" {
        return fail(format!("3x3 worked instance: {:?} lhs {} brute {na} {}", r.outcome, r.lhs, r.detail));
    }

    // C2 x C4, A = {(0,0), (1,0), (0,1)}, n = 3
    let p = parse_group("2x4").unwrap();
    let a = p.parse_set("(0,0);(1,0);(0,1)").unwrap();
    let r = check_nfold_structure(&a, 3).unwrap();
    let na = brute_nfold(&a, 3);
    let (h0, k) = (r.witnesses.get("H0").map_or(0, Vec::len), r.witnesses.get("K").map_or(0, Vec::len));
    let g_order = a.group().order();
    if r.outcome != Outcome::Holds || na != 7 || r.lhs != 7 || r.detail != "exp-1/staircase" || g_order - h0 + k != 7 {
        return fail(format!("2x4 worked instance: {:?} lhs {} brute {na} {} |H0| {h0} |K| {k}", r.outcome, r.lhs, r.detail));
    }
    pass(format!("{applicable} applicable checks, {templates} settled by a template, no fall-through; |3A| = 8 and 7 reproduced"))
}

fn brute_nfold(a: &GroupSubset, n: usize) -> usize {
    let g = a.group();
    let mut cur: BTreeSet<usize> = [g.zero()].into();
    for _ in 0..n {
        cur = cur.iter().flat_map(|&x| a.iter().map(move |y| g.add(x, y))).collect();
    }
    cur.len()
}

fn split_postconditions() -> Line {
    let mut checked = 0u64;
    for g in abelian_groups_up_to(8).unwrap() {
        let mut bad: Option<String> = None;
        each_multiset(g.order(), 8, &mut |m| {
            if bad.is_some() {
                return;
            }
            let s = GSequence::from_mults(&g, m.to_vec()).unwrap();
            each_divisor(m, &mut |d| {
                if bad.is_some() {
                    return;
                }
                let len: usize = d.iter().map(|&v| v as usize).sum();
                let height = d.iter().copied().max().unwrap_or(0) as usize;
                if len == 0 {
                    return;
                }
                let sp = GSequence::from_mults(&g, d.to_vec()).unwrap();
                for n in height.max(1)..=len {
                    for k in 1..=n {
                        checked += 1;
                        let (t, tp) = match complete_split(&s, &sp, n, k) {
                            Ok(x) => x,
                            Err(e) => {
                                bad = Some(format!("{g} S = {m:?} S' = {d:?} n = {n} k = {k}: {e}"));
                                return;
                            }
                        };
                        let both = t.concat(&tp);
                        let ok = both.divides(&s)
                            && t.len() + tp.len() == len
                            && t.height() as usize <= k
                            && k <= t.len()
                            && tp.height() as usize <= n - k
                            && n - k <= tp.len();
                        if !ok {
                            bad = Some(format!(
                                "{g} S = {m:?} S' = {d:?} n = {n} k = {k}: T = {:?} T' = {:?}",
                                t.mults(),
                                tp.mults()
                            ));
                            return;
                        }
                    }
                }
            });
        });
        if let Some(b) = bad {
            return fail(b);
        }
    }
    pass(format!("{checked} (S, S', n, k) splits checked"))
}

fn dp_matches_brute_force() -> Line {
    let mut seqs = 0u64;
    for g in abelian_groups_up_to(12).unwrap() {
        let mut bad: Option<String> = None;
        each_multiset(g.order(), 12, &mut |m| {
            if bad.is_some() {
                return;
            }
            let s = GSequence::from_mults(&g, m.to_vec()).unwrap();
            let rows = nterm_subsum_rows(&s, s.len()).unwrap();
            let want = brute_rows(&g, m);
            for (j, (got, want)) in rows.iter().zip(&want).enumerate() {
                if set_of(got) != *want {
                    bad = Some(format!("{g} S = {m:?} n = {j}"));
                    return;
                }
            }
            seqs += 1;
        });
        if let Some(b) = bad {
            return fail(b);
        }
    }
    pass(format!("{seqs} sequences, every row equal"))
}

fn davenport() -> Line {
    let mut seen = Vec::new();
    let mut groups: Vec<(Vec<i64>, usize)> = (1..=8).map(|m| (vec![m], m as usize)).collect();
    groups.push((vec![2, 2], 3));
    for (f, want) in groups {
        let g = make_group(&f).unwrap();
        let d = davenport_bruteforce(&g, 16).unwrap();
        // the witness must be zero-sum free and one term short of D
        let w = &d.witness;
        let zero_free = (1u32..(1 << w.len())).all(|mask| {
            let sum = (0..w.len()).filter(|i| mask >> i & 1 == 1).fold(g.zero(), |acc, i| g.add(acc, w[i]));
            sum != g.zero()
        });
        let sandwich = g.d_star() + 1 <= d.value && d.value <= g.order();
        if d.value != want || !zero_free || w.len() + 1 != d.value || !sandwich {
            return fail(format!("{g}: D = {} (want {want}), witness {w:?}", d.value));
        }
        seen.push(format!("{g}:{}", d.value));
    }
    pass(seen.join(" "))
}

fn determinism() -> Line {
    let cfg = AuditConfig { max_group_order: 12, exhaustive_len_cap: 4, random_samples: 2000, seed: 11, ..AuditConfig::default() };
    let runs: Vec<String> = [1, 4, 1]
        .into_iter()
        .map(|jobs| run_audit(&AuditConfig { jobs, ..cfg.clone() }).unwrap().to_json())
        .collect();
    if runs[0] == runs[1] && runs[1] == runs[2] {
        pass(format!("jobs 1, 4, 1: identical ({} bytes)", runs[0].len()))
    } else {
        fail("aggregates differ between runs")
    }
}

fn hunt() -> Line {
    let mut hits = 0;
    let mut runs = 0;
    for g in abelian_groups_up_to(8).unwrap() {
        for n in 1..=3 {
            let r = match hunt_unique_expression(&g, n) {
                Ok(r) => r,
                Err(e) => return fail(format!("{g} n = {n}: {e}")),
            };
            let well_formed = r.exhaustive
                && r.n == n
                && r.group == g.factors()
                && r.evaluated <= r.tuples_examined
                && r.aperiodic <= r.evaluated
                && r.hit_count <= r.aperiodic
                && r.hits.len() as u64 <= r.hit_count
                && r.found() == (r.hit_count > 0)
                && serde_json::to_string(&r).is_ok();
            if !well_formed {
                return fail(format!("{g} n = {n}: malformed report {r:?}"));
            }
            runs += 1;
            hits += r.hit_count;
        }
    }
    pass(format!("{runs} exhaustive hunts, {hits} hits reported (no outcome asserted)"))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |id: usize, name: &str, line: Line, took: Duration| {
        all_ok &= line.ok;
        println!("{} {id:>2} {name} [{took:.2?}]: {}", if line.ok { "PASS" } else { "FAIL" }, line.detail);
    };
    let secs = Duration::from_secs;

    let t = Instant::now();
    let l = two_cosets_family();
    report(1, "two-cosets family", within(l, t.elapsed(), secs(1)), t.elapsed());

    let t = Instant::now();
    let l = block_examples();
    report(2, "block examples", within(l, t.elapsed(), secs(5)), t.elapsed());

    let t = Instant::now();
    let cfg = AuditConfig {
        max_group_order: 16,
        exhaustive_max_order: Some(10),
        exhaustive_len_cap: 10,
        random_samples: 10_000,
        seed: 1,
        checkers: vec![Checker::SubsumKneser, Checker::SStar],
        ..AuditConfig::default()
    };
    let took;
    match run_audit(&cfg) {
        Ok(r) => {
            took = t.elapsed();
            let (ok, d) = audit_summary(&r, Checker::SubsumKneser);
            let d = format!("{} instances ({} exhaustive); {d}", r.totals.instances, r.totals.exhaustive_instances);
            report(3, "subsum bound", within(if ok { pass(d) } else { fail(d) }, took, secs(300)), took);
            let (ok, d) = audit_summary(&r, Checker::SStar);
            report(4, "S* identities", if ok { pass(d) } else { fail(d) }, took);
        }
        Err(e) => {
            took = t.elapsed();
            report(3, "subsum bound", fail(e.to_string()), took);
            report(4, "S* identities", fail(e.to_string()), took);
        }
    }

    let t = Instant::now();
    let l = structure_sweep();
    report(5, "n-fold structure sweep", l, t.elapsed());

    let t = Instant::now();
    let l = split_postconditions();
    report(6, "split postconditions", l, t.elapsed());

    let t = Instant::now();
    let l = dp_matches_brute_force();
    report(7, "subsum rows vs brute force", l, t.elapsed());

    let t = Instant::now();
    let cfg = AuditConfig {
        max_group_order: 16,
        exhaustive_len_cap: 6,
        random_samples: 10_000,
        seed: 1,
        checkers: vec![Checker::Main, Checker::MainFullGroup],
        ..AuditConfig::default()
    };
    match run_audit(&cfg) {
        Ok(r) => {
            let took = t.elapsed();
            for (id, c, name) in [(8, Checker::Main, "main certificates"), (9, Checker::MainFullGroup, "full-group certificates")] {
                let (mut ok, d) = audit_summary(&r, c);
                let t = r.tally(c);
                let internal: u64 = t.notes.iter().filter(|(k, _)| k.starts_with("internal:")).map(|(_, v)| v).sum();
                ok &= internal == 0 && t.holds > 0;
                let d = format!(
                    "{} instances; {d}; case i {}, case ii {}",
                    r.totals.instances,
                    t.count("case:i"),
                    t.count("case:ii")
                );
                let line = if ok { pass(d) } else { fail(d) };
                report(id, name, if id == 8 { within(line, took, secs(1800)) } else { line }, took);
            }
        }
        Err(e) => {
            report(8, "main certificates", fail(e.to_string()), t.elapsed());
            report(9, "full-group certificates", fail(e.to_string()), t.elapsed());
        }
    }

    let t = Instant::now();
    let l = davenport();
    report(10, "Davenport constants", within(l, t.elapsed(), secs(10)), t.elapsed());

    let t = Instant::now();
    let l = determinism();
    report(11, "audit determinism", l, t.elapsed());

    let t = Instant::now();
    let l = hunt();
    report(12, "unique-expression hunt", within(l, t.elapsed(), secs(600)), t.elapsed());

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
