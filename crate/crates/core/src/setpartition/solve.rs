use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::certificate::{CaseTag, Certificate, Theorem, VerifyReport};
use super::{check_partitionable, make_setpartition, SetPartition};
use crate::error::{Error, InstanceDump, Result};
use crate::group::{GroupSpec, GroupSubset, Subgroup};
use crate::sequence::profile_from_sums;
use crate::sequence::{nterm_subsums, GSequence, SubsumProfile};

/// Search knobs for [`partition_solve_with`].
#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Largest `|S'|` for which the exhaustive search runs.
    pub exhaustive_cap: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Node limit for one exhaustive search.
    pub node_budget: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { exhaustive_cap: 12, restarts: 24, seed: 0x5eed, node_budget: 20_000_000 }
    }
}

pub(crate) fn dump(s: &GSequence, sp: Option<&GSequence>, n: usize, mode: Option<&str>) -> InstanceDump {
    InstanceDump {
        group: s.group().factors().to_vec(),
        seq: s.mults().to_vec(),
        seq_prime: sp.map(|t| t.mults().to_vec()),
        n,
        mode: mode.map(str::to_string),
    }
}

/// A setpartition `A` with `S(A) | S`, `|S(A)| = |S'|` and either
/// `|ΣA_i| >= |S'| - n + 1` (case 1) or the heavy-coset structure (case 2).
///
/// Case 1 is preferred whenever it is reachable. For `|S'|` up to the
/// exhaustive cap the question is settled by complete search.
pub fn partition_solve(s: &GSequence, sp: &GSequence, n: usize) -> Result<Certificate> {
    partition_solve_with(s, sp, n, &SolveConfig::default())
}

pub fn partition_solve_with(s: &GSequence, sp: &GSequence, n: usize, cfg: &SolveConfig) -> Result<Certificate> {
    if !sp.divides(s) {
        return Err(Error::Precondition("S' does not divide S".into()));
    }
    check_partitionable(sp, n, "S'")?;
    let sums = nterm_subsums(s, n)?;
    let prof = profile_from_sums(s, n, sp.len(), sums)?;
    let target1 = sp.len() - n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let found = |parts: Vec<GroupSubset>, case: CaseTag| finish(s, sp, n, &prof, parts, case);

    if prof.sums.len() >= target1 {
        let mut w = Work::new(s, make_setpartition(sp, n)?.parts().to_vec());
        if w.climb(target1, None) >= target1 {
            return found(w.parts, CaseTag::I);
        }
        for _ in 0..cfg.restarts {
            let mut w = Work::new(s, random_start(s, sp.len(), n, &mut rng));
            if w.climb(target1, None) >= target1 {
                return found(w.parts, CaseTag::I);
            }
        }
        if sp.len() <= cfg.exhaustive_cap {
            if let Some(parts) = exhaustive(s, sp.len(), n, None, cfg.node_budget, |p| sum_all(s.group(), p).len() >= target1) {
                return found(parts, CaseTag::I);
            }
        }
    }

    let st = Structure::new(s, &prof);
    let goal = prof.sums.len();
    for strategy in [Fill::Spread, Fill::Concentrate] {
        if let Some(parts) = st.start(s, sp.len(), n, strategy, &mut rng) {
            let mut w = Work::new(s, parts);
            if w.climb(goal, Some(&st)) >= goal && case_two_holds(s, sp, n, &prof, &w.parts) {
                return found(w.parts, CaseTag::II);
            }
        }
    }
    for _ in 0..cfg.restarts {
        if let Some(parts) = st.start(s, sp.len(), n, Fill::Random, &mut rng) {
            let mut w = Work::new(s, parts);
            if w.climb(goal, Some(&st)) >= goal && case_two_holds(s, sp, n, &prof, &w.parts) {
                return found(w.parts, CaseTag::II);
            }
        }
    }
    if sp.len() <= cfg.exhaustive_cap {
        if let Some(parts) =
            exhaustive(s, sp.len(), n, Some(&st), cfg.node_budget, |p| case_two_holds(s, sp, n, &prof, p))
        {
            return found(parts, CaseTag::II);
        }
    }
    Err(Error::internal("partition search", "no setpartition satisfies either case")
        .with_instance(dump(s, Some(sp), n, None)))
}

fn finish(
    s: &GSequence,
    sp: &GSequence,
    n: usize,
    prof: &SubsumProfile,
    parts: Vec<GroupSubset>,
    case: CaseTag,
) -> Result<Certificate> {
    let partition = SetPartition::new(s.group(), parts)?;
    let mut cert = Certificate::bare(Theorem::Partition, case, partition);
    let total = cert.partition.sum().len() as i64;
    cert.bounds.insert("sigma_n".into(), prof.sums.len() as i64);
    cert.bounds.insert("sum".into(), total);
    match case {
        CaseTag::I => {
            cert.bounds.insert("target".into(), (sp.len() - n + 1) as i64);
        }
        CaseTag::II => {
            cert.h = Some(prof.stabilizer.clone());
            cert.bounds.insert("e".into(), prof.outside as i64);
            cert.bounds.insert("heavy_cosets".into(), prof.heavy_count() as i64);
            cert.bounds.insert("rho".into(), prof.holes);
            cert.bounds.insert("part_bound".into(), part_bound(&cert.partition, &prof.stabilizer));
            cert.bounds.insert("kneser_bound".into(), prof.bound_kneser(sp.len()));
        }
    }
    let report = partition_verify(&cert, s, sp, n);
    if !report.holds() {
        return Err(Error::internal("partition search", format!("certificate fails: {:?}", report.violations))
            .with_instance(dump(s, Some(sp), n, None)));
    }
    Ok(cert)
}

/// `Σ|A_i + H| - (n-1)|H|`.
fn part_bound(p: &SetPartition, h: &Subgroup) -> i64 {
    let sat: i64 = p.parts().iter().map(|a| h.saturate(a).len() as i64).sum();
    sat - (p.len() as i64 - 1) * h.order() as i64
}

fn sum_all(g: &GroupSpec, parts: &[GroupSubset]) -> GroupSubset {
    parts.iter().fold(GroupSubset::singleton(g, 0), |acc, a| acc.sum_with(a))
}

fn underlying_of(g: &GroupSpec, parts: &[GroupSubset]) -> GSequence {
    let mut u = GSequence::empty(g);
    for a in parts {
        for x in a.iter() {
            u.push(x, 1);
        }
    }
    u
}

fn case_two_holds(s: &GSequence, sp: &GSequence, n: usize, prof: &SubsumProfile, parts: &[GroupSubset]) -> bool {
    let mut r = VerifyReport::default();
    case_two_checks(&mut r, s, sp, n, prof, parts);
    r.holds()
}

fn case_two_checks(
    r: &mut VerifyReport,
    s: &GSequence,
    sp: &GSequence,
    n: usize,
    prof: &SubsumProfile,
    parts: &[GroupSubset],
) {
    let g = s.group();
    let h = &prof.stabilizer;
    let z = &prof.heavy_preimage;
    let total = sum_all(g, parts);
    r.check(total == prof.sums, "case2.sum_equals_subsums", || {
        format!("|ΣA_i| = {} but |Σ_n(S)| = {}", total.len(), prof.sums.len())
    });
    let used = underlying_of(g, parts);
    if let Ok(rest) = used.remove_from(s) {
        r.check(rest.support().is_subset(z), "case2.unused_in_Z", || "an unused term lies outside the heavy cosets".into());
    }
    for (i, a) in parts.iter().enumerate() {
        r.check(z.is_subset(&h.saturate(a)), "case2.heavy_cover", || format!("A_{} + H misses a heavy coset", i + 1));
        let out = a.difference(z).len();
        r.check(out <= 1, "case2.outside_per_part", || format!("A_{} has {out} elements outside the heavy cosets", i + 1));
    }
    r.check(prof.holes >= 0, "case2.rho_nonneg", || format!("rho = {}", prof.holes));
    let pb = {
        let sat: i64 = parts.iter().map(|a| h.saturate(a).len() as i64).sum();
        sat - (n as i64 - 1) * h.order() as i64
    };
    r.check(total.len() as i64 >= pb, "case2.part_bound", || format!("|ΣA_i| = {} < {pb}", total.len()));
    let kb = prof.bound_kneser(sp.len());
    r.check(pb == kb, "case2.kneser_bound", || format!("Σ|A_i+H| - (n-1)|H| = {pb} but the closed form gives {kb}"));
}

/// Checks a partition-level certificate from scratch.
pub fn partition_verify(cert: &Certificate, s: &GSequence, sp: &GSequence, n: usize) -> VerifyReport {
    let mut r = VerifyReport::default();
    let g = s.group();
    r.check(sp.divides(s), "precondition", || "S' does not divide S".into());
    r.check(
        n >= 1 && sp.height() as usize <= n && n <= sp.len(),
        "precondition",
        || format!("need h(S') = {} <= n = {n} <= |S'| = {}", sp.height(), sp.len()),
    );
    if !r.holds() {
        return r;
    }
    let parts = cert.partition.parts();
    r.check(parts.len() == n, "partition.count", || format!("{} parts for n = {n}", parts.len()));
    r.check(parts.iter().all(|a| !a.is_empty()), "partition.count", || "empty part".into());
    let used = underlying_of(g, parts);
    r.check(used.divides(s), "partition.divides", || "S(A) does not divide S".into());
    r.check(used.len() == sp.len(), "partition.length", || format!("|S(A)| = {} != |S'| = {}", used.len(), sp.len()));
    let Ok(sums) = nterm_subsums(s, n) else {
        r.check(false, "precondition", || "Σ_n(S) undefined".into());
        return r;
    };
    let total = sum_all(g, parts);
    match cert.case {
        CaseTag::I => {
            r.check(total.is_subset(&sums), "case1.subsums", || "ΣA_i is not inside Σ_n(S)".into());
            let target = sp.len() as i64 - n as i64 + 1;
            r.check(total.len() as i64 >= target, "case1.bound", || format!("|ΣA_i| = {} < {target}", total.len()));
        }
        CaseTag::II => match profile_from_sums(s, n, sp.len(), sums) {
            Ok(prof) => {
                if let Some(h) = &cert.h {
                    r.check(*h == prof.stabilizer, "case2.subgroup", || "H is not the stabilizer of Σ_n(S)".into());
                }
                case_two_checks(&mut r, s, sp, n, &prof, parts);
            }
            Err(e) => r.check(false, "case2.profile", || e.to_string()),
        },
    }
    r
}

/// Local search state: the parts and the still-unused multiplicities.
struct Work<'a> {
    s: &'a GSequence,
    parts: Vec<GroupSubset>,
    avail: Vec<u32>,
}

impl<'a> Work<'a> {
    fn new(s: &'a GSequence, parts: Vec<GroupSubset>) -> Work<'a> {
        let mut avail = s.mults().to_vec();
        for a in &parts {
            for x in a.iter() {
                avail[x] -= 1;
            }
        }
        Work { s, parts, avail }
    }

    /// Takes first strictly improving moves until `|ΣA_i| >= target` or a
    /// local maximum; returns the final `|ΣA_i|`.
    fn climb(&mut self, target: usize, st: Option<&Structure>) -> usize {
        let g = self.s.group().clone();
        let n = self.parts.len();
        let ok = |a: &GroupSubset| st.is_none_or(|st| st.part_ok(a));
        loop {
            let mut pre = vec![GroupSubset::singleton(&g, 0)];
            for a in &self.parts {
                let next = pre.last().unwrap().sum_with(a);
                pre.push(next);
            }
            let cur = pre[n].len();
            if cur >= target {
                return cur;
            }
            let mut suf = vec![GroupSubset::singleton(&g, 0); n + 1];
            for i in (0..n).rev() {
                suf[i] = suf[i + 1].sum_with(&self.parts[i]);
            }
            if self.improve_pair(&pre, &suf, cur, &ok) || self.improve_replace(&pre, &suf, cur, st, &ok) {
                continue;
            }
            return cur;
        }
    }

    fn improve_pair(&mut self, pre: &[GroupSubset], suf: &[GroupSubset], cur: usize, ok: &dyn Fn(&GroupSubset) -> bool) -> bool {
        let g = self.s.group().clone();
        let n = self.parts.len();
        for i in 0..n {
            let mut mid = GroupSubset::singleton(&g, 0);
            for j in i + 1..n {
                if j > i + 1 {
                    mid = mid.sum_with(&self.parts[j - 1]);
                }
                let others = pre[i].sum_with(&mid).sum_with(&suf[j + 1]);
                let better = |a: &GroupSubset, b: &GroupSubset| ok(a) && ok(b) && a.sum_with(b).sum_with(&others).len() > cur;
                let (ai, aj) = (self.parts[i].clone(), self.parts[j].clone());
                // transfers
                for (from, to) in [(i, j), (j, i)] {
                    let (af, at) = if from == i { (&ai, &aj) } else { (&aj, &ai) };
                    if af.len() < 2 {
                        continue;
                    }
                    for x in af.iter() {
                        if at.contains(x) {
                            continue;
                        }
                        let mut nf = af.clone();
                        nf.remove(x);
                        let mut nt = at.clone();
                        nt.insert(x);
                        if better(&nf, &nt) {
                            self.parts[from] = nf;
                            self.parts[to] = nt;
                            return true;
                        }
                    }
                }
                // swaps
                for x in ai.iter() {
                    if aj.contains(x) {
                        continue;
                    }
                    for y in aj.iter() {
                        if ai.contains(y) {
                            continue;
                        }
                        let mut ni = ai.clone();
                        ni.remove(x);
                        ni.insert(y);
                        let mut nj = aj.clone();
                        nj.remove(y);
                        nj.insert(x);
                        if better(&ni, &nj) {
                            self.parts[i] = ni;
                            self.parts[j] = nj;
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn improve_replace(
        &mut self,
        pre: &[GroupSubset],
        suf: &[GroupSubset],
        cur: usize,
        st: Option<&Structure>,
        ok: &dyn Fn(&GroupSubset) -> bool,
    ) -> bool {
        let unused: Vec<usize> = (0..self.avail.len()).filter(|&y| self.avail[y] > 0).collect();
        if unused.is_empty() {
            return false;
        }
        for i in 0..self.parts.len() {
            let others = pre[i].sum_with(&suf[i + 1]);
            let a = self.parts[i].clone();
            for x in a.iter() {
                // the released term must be allowed to sit unused
                if st.is_some_and(|st| !st.z.contains(x)) {
                    continue;
                }
                for &y in &unused {
                    if a.contains(y) {
                        continue;
                    }
                    let mut na = a.clone();
                    na.remove(x);
                    na.insert(y);
                    if ok(&na) && na.sum_with(&others).len() > cur {
                        self.parts[i] = na;
                        self.avail[x] += 1;
                        self.avail[y] -= 1;
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Random length-`len` subsequence of height `<= n`, dealt round-robin.
fn random_start(s: &GSequence, len: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<GroupSubset> {
    let g = s.group();
    let mut terms: Vec<usize> = s.terms().collect();
    terms.shuffle(rng);
    let mut count = vec![0u32; g.order()];
    let mut taken = 0;
    for &x in &terms {
        if taken == len {
            break;
        }
        if (count[x] as usize) < n {
            count[x] += 1;
            taken += 1;
        }
    }
    let mut order: Vec<usize> = (0..g.order()).filter(|&x| count[x] > 0).collect();
    order.shuffle(rng);
    let mut parts = vec![GroupSubset::empty(g); n];
    let mut t = rng.random_range(0..n);
    for x in order {
        for _ in 0..count[x] {
            parts[t % n].insert(x);
            t += 1;
        }
    }
    parts
}

#[derive(Clone, Copy)]
enum Fill {
    Spread,
    Concentrate,
    Random,
}

/// The heavy-coset data that case 2 is built around.
struct Structure {
    z: GroupSubset,
    h: Subgroup,
    /// Elements of `supp(S)` in each heavy coset, ascending.
    cosets: Vec<Vec<usize>>,
    outside: Vec<usize>,
}

impl Structure {
    fn new(s: &GSequence, prof: &SubsumProfile) -> Structure {
        let q = &prof.quotient;
        let supp = s.support();
        let cosets = prof
            .heavy_cosets
            .iter()
            .map(|c| supp.iter().filter(|&x| q.project(x) == c).collect())
            .collect();
        let outside = s.terms().filter(|&x| !prof.heavy_preimage.contains(x)).collect();
        Structure { z: prof.heavy_preimage.clone(), h: prof.stabilizer.clone(), cosets, outside }
    }

    fn part_ok(&self, a: &GroupSubset) -> bool {
        a.difference(&self.z).len() <= 1 && self.z.is_subset(&self.h.saturate(a))
    }

    /// A setpartition with the case-2 shape: outside terms one per part,
    /// every part meeting every heavy coset, the rest filled from `Z`.
    fn start(&self, s: &GSequence, len: usize, n: usize, fill: Fill, rng: &mut ChaCha8Rng) -> Option<Vec<GroupSubset>> {
        let g = s.group();
        let e = self.outside.len();
        let heavy = self.cosets.len();
        if e > n || heavy * n + e > len {
            return None;
        }
        let cap = |x: usize| (s.mult(x) as usize).min(n);
        let capacity: usize = self.cosets.iter().flatten().map(|&x| cap(x)).sum();
        if capacity + e < len {
            return None;
        }
        let mut parts = vec![GroupSubset::empty(g); n];
        let mut slots: Vec<usize> = (0..n).rev().collect();
        if let Fill::Random = fill {
            slots.shuffle(rng);
        }
        for (&x, &p) in self.outside.iter().zip(&slots) {
            parts[p].insert(x);
        }
        // per coset: its copies in dealing order and a cursor
        let mut lists: Vec<Vec<usize>> = Vec::with_capacity(heavy);
        for c in &self.cosets {
            let mut elems = c.clone();
            if let Fill::Random = fill {
                elems.shuffle(rng);
            }
            lists.push(elems.iter().flat_map(|&x| std::iter::repeat_n(x, cap(x))).collect());
        }
        let offsets: Vec<usize> = (0..heavy)
            .map(|_| if let Fill::Random = fill { rng.random_range(0..n) } else { 0 })
            .collect();
        for (c, list) in lists.iter().enumerate() {
            for (t, &x) in list.iter().take(n).enumerate() {
                parts[(offsets[c] + t) % n].insert(x);
            }
        }
        let mut need = len - e - heavy * n;
        match fill {
            Fill::Spread => {
                let mut t = vec![n; heavy];
                while need > 0 {
                    let mut moved = false;
                    for c in 0..heavy {
                        if need > 0 && t[c] < lists[c].len() {
                            parts[(offsets[c] + t[c]) % n].insert(lists[c][t[c]]);
                            t[c] += 1;
                            need -= 1;
                            moved = true;
                        }
                    }
                    if !moved {
                        return None;
                    }
                }
            }
            Fill::Concentrate | Fill::Random => {
                let mut pool: Vec<usize> = lists.iter().flat_map(|l| l.iter().skip(n).copied()).collect();
                if let Fill::Concentrate = fill {
                    pool.sort_unstable();
                } else {
                    pool.shuffle(rng);
                }
                for x in pool {
                    if need == 0 {
                        break;
                    }
                    let free: Vec<usize> = (0..n).filter(|&p| !parts[p].contains(x)).collect();
                    let p = match fill {
                        Fill::Concentrate => *free.first()?,
                        _ => *free.get(rng.random_range(0..free.len().max(1)))?,
                    };
                    parts[p].insert(x);
                    need -= 1;
                }
                if need > 0 {
                    return None;
                }
            }
        }
        Some(parts)
    }
}

/// Complete search over setpartitions with `|S(A)| = len`, up to reordering
/// of parts with equal contents. With a structure, outside terms are forced
/// in and each part takes at most one of them.
fn exhaustive(
    s: &GSequence,
    len: usize,
    n: usize,
    st: Option<&Structure>,
    budget: u64,
    goal: impl Fn(&[GroupSubset]) -> bool,
) -> Option<Vec<GroupSubset>> {
    let elems: Vec<(usize, usize, usize)> = s.distinct().map(|(x, v)| (x, (v as usize).min(n), v as usize)).collect();
    let mut suffix_cap = vec![0; elems.len() + 1];
    for i in (0..elems.len()).rev() {
        suffix_cap[i] = suffix_cap[i + 1] + elems[i].1;
    }
    let mut search = Exhaustive {
        elems,
        suffix_cap,
        len,
        n,
        st,
        nodes: 0,
        budget,
        parts: vec![GroupSubset::empty(s.group()); n],
        has_outside: vec![false; n],
    };
    if search.visit(0, 0, &goal) {
        Some(search.parts)
    } else {
        None
    }
}

struct Exhaustive<'a> {
    /// `(x, min(v_x, n), v_x)`
    elems: Vec<(usize, usize, usize)>,
    suffix_cap: Vec<usize>,
    len: usize,
    n: usize,
    st: Option<&'a Structure>,
    nodes: u64,
    budget: u64,
    parts: Vec<GroupSubset>,
    has_outside: Vec<bool>,
}

impl Exhaustive<'_> {
    fn visit(&mut self, idx: usize, used: usize, goal: &dyn Fn(&[GroupSubset]) -> bool) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if idx == self.elems.len() {
            return used == self.len && self.parts.iter().all(|a| !a.is_empty()) && goal(&self.parts);
        }
        let empty = self.parts.iter().filter(|a| a.is_empty()).count();
        if used + self.suffix_cap[idx] < self.len || self.len - used < empty {
            return false;
        }
        let (x, cap, mult) = self.elems[idx];
        let outside = self.st.is_some_and(|st| !st.z.contains(x));
        let hi = cap.min(self.len - used);
        let lo = if outside { cap } else { 0 };
        // outside terms may not stay unused
        if outside && (hi < cap || cap < mult) {
            return false;
        }
        for c in (lo..=hi).rev() {
            let snapshot = self.parts.clone();
            if self.choose(idx, 0, c, &snapshot, &mut Vec::new(), used, outside, goal) {
                return true;
            }
            if self.nodes > self.budget {
                return false;
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        idx: usize,
        p: usize,
        left: usize,
        snapshot: &[GroupSubset],
        chosen: &mut Vec<usize>,
        used: usize,
        outside: bool,
        goal: &dyn Fn(&[GroupSubset]) -> bool,
    ) -> bool {
        if left == 0 {
            let x = self.elems[idx].0;
            for &q in chosen.iter() {
                self.parts[q].insert(x);
                if outside {
                    self.has_outside[q] = true;
                }
            }
            let hit = self.visit(idx + 1, used + chosen.len(), goal);
            if !hit {
                for &q in chosen.iter() {
                    self.parts[q].remove(x);
                    if outside {
                        self.has_outside[q] = false;
                    }
                }
            }
            return hit;
        }
        if self.n - p < left {
            return false;
        }
        // take p, unless an earlier identical part was skipped
        let blocked = (0..p).any(|q| snapshot[q] == snapshot[p] && !chosen.contains(&q))
            || (outside && self.has_outside[p]);
        if !blocked {
            chosen.push(p);
            if self.choose(idx, p + 1, left - 1, snapshot, chosen, used, outside, goal) {
                return true;
            }
            chosen.pop();
        }
        self.choose(idx, p + 1, left, snapshot, chosen, used, outside, goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn seq(g: &GroupSpec, items: &[(usize, u32)]) -> GSequence {
        let mut s = GSequence::empty(g);
        for &(x, v) in items {
            s.push(x, v);
        }
        s
    }

    #[test]
    fn constant_sequence_is_case_one() {
        let c5 = make_group(&[5]).unwrap();
        let s = seq(&c5, &[(0, 4)]);
        let c = partition_solve(&s, &s, 4).unwrap();
        assert_eq!(c.case, CaseTag::I);
        assert_eq!(c.partition.sum().len(), 1);
    }

    #[test]
    fn c7_reaches_bound() {
        let c7 = make_group(&[7]).unwrap();
        let s = GSequence::from_terms(&c7, [0, 1, 2, 3]);
        let c = partition_solve(&s, &s, 2).unwrap();
        assert_eq!(c.case, CaseTag::I);
        assert!(c.partition.sum().len() >= 3);
    }

    #[test]
    fn two_coset_example_is_case_two() {
        let c8 = make_group(&[8]).unwrap();
        let s = seq(&c8, &[(0, 2), (4, 2), (1, 2), (5, 2)]);
        let c = partition_solve(&s, &s, 2).unwrap();
        assert_eq!(c.case, CaseTag::II);
        assert_eq!(c.h.as_ref().unwrap().carrier().to_vec(), vec![0, 4]);
        assert_eq!(c.partition.sum().len(), 6);
        assert!(partition_verify(&c, &s, &s, 2).holds());

        // break the one-outside-element rule by moving a term
        let mut parts = c.partition.parts().to_vec();
        parts[0] = GroupSubset::from_indices(&c8, [0, 1, 4, 5, 2]);
        let bad = Certificate { partition: SetPartition::new(&c8, parts).unwrap(), ..c.clone() };
        let r = partition_verify(&bad, &s, &s, 2);
        assert!(!r.holds());
        assert!(r.has("partition.divides"));
    }

    #[test]
    fn outside_rule_violation_is_named() {
        let c8 = make_group(&[8]).unwrap();
        // H = {0,4}, heavy coset {0,4}, outside terms 1 and 5
        let s = seq(&c8, &[(0, 4), (4, 4), (1, 1), (5, 1)]);
        let n = 4;
        let c = partition_solve(&s, &s, n).unwrap();
        let prof = profile_from_sums(&s, n, s.len(), nterm_subsums(&s, n).unwrap()).unwrap();
        let mut parts = vec![GroupSubset::from_indices(&c8, [0, 4, 1, 5])];
        parts.extend(std::iter::repeat_n(GroupSubset::from_indices(&c8, [0, 4]), 3));
        let forged = Certificate {
            partition: SetPartition::new(&c8, parts).unwrap(),
            case: CaseTag::II,
            h: Some(prof.stabilizer.clone()),
            ..c
        };
        let r = partition_verify(&forged, &s, &s, n);
        assert!(prof.heavy_preimage.contains(0) && !prof.heavy_preimage.contains(1));
        assert!(r.has("case2.outside_per_part"), "{:?}", r.violations);
    }

    #[test]
    fn shorter_s_prime() {
        let c6 = make_group(&[6]).unwrap();
        let s = seq(&c6, &[(0, 4), (1, 3), (3, 2)]);
        let sp = seq(&c6, &[(0, 3), (1, 2)]);
        let c = partition_solve(&s, &sp, 3).unwrap();
        assert!(partition_verify(&c, &s, &sp, 3).holds());
        assert_eq!(c.partition.underlying().len(), 5);
    }

    #[test]
    fn preconditions() {
        let c4 = make_group(&[4]).unwrap();
        let s = seq(&c4, &[(0, 3)]);
        assert!(matches!(partition_solve(&s, &s, 2), Err(Error::Precondition(_))));
        let other = seq(&c4, &[(1, 1)]);
        assert!(matches!(partition_solve(&s, &other, 1), Err(Error::Precondition(_))));
    }

    // exhaustive and local search agree on whether case 1 is reachable
    #[test]
    fn solver_matches_complete_search_on_small_cases() {
        for f in [&[6][..], &[2, 2], &[7], &[2, 4]] {
            let g = make_group(f).unwrap();
            let order = g.order();
            let mut stack = vec![(GSequence::empty(&g), 0usize)];
            while let Some((s, lo)) = stack.pop() {
                for n in 1..=s.len() {
                    if s.height() as usize > n {
                        continue;
                    }
                    let c = partition_solve(&s, &s, n).unwrap();
                    let target = s.len() - n + 1;
                    let reachable = exhaustive(&s, s.len(), n, None, u64::MAX, |p| sum_all(&g, p).len() >= target);
                    assert_eq!(c.case == CaseTag::I, reachable.is_some(), "{s:?} n={n}");
                }
                if s.len() < 6 {
                    for x in lo..order {
                        let mut t = s.clone();
                        t.push(x, 1);
                        stack.push((t, x));
                    }
                }
            }
        }
    }
}
