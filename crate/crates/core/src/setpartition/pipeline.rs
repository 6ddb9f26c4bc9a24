use super::certificate::{CaseTag, Certificate, Theorem, VerifyReport};
use super::hypotheses::{hypothesis_check_in, Mode};
use super::solve::dump;
use super::split::{extend_split, greedy_capped};
use super::{check_partitionable, make_setpartition, partition_solve, SetPartition};
use crate::error::{Error, Result};
use crate::group::{affine_span, stabilizer, subgroup_generated, GroupSubset, Subgroup};
use crate::sequence::{nterm_subsums, profile_from_sums, GSequence};

// How a case-II certificate was closed, recorded under the "route" bound.
pub const ROUTE_PREFIX_IS_H: i64 = 0;
pub const ROUTE_GREEDY_PREFIX: i64 = 1;
pub const ROUTE_SOLVED_PREFIX: i64 = 2;
pub const ROUTE_RECURSION: i64 = 3;
pub const ROUTE_SPAN_COSET: i64 = 4;

fn internal(step: &str, detail: impl Into<String>) -> Error {
    Error::internal(step, detail)
}

/// A verified certificate for the structure statement about `(S, S', n)`.
///
/// Case I: `|Σ_n(S)| >= |ΣA_i| >= min(|G|, |S'| - n + 1)` (in full-group
/// mode, `Σ_n(S) = G`). Case II: a subgroup `K <= H = H(Σ_n(S))`, an element
/// `alpha` and a setpartition concentrated on `alpha + K`.
pub fn main_pipeline(s: &GSequence, sp: &GSequence, n: usize, mode: Mode) -> Result<Certificate> {
    let g = s.group();
    check_instance(s, sp, n, mode, g.order())?;
    let l = Subgroup::full(g);
    let h = stabilizer(&nterm_subsums(s, n)?)?;
    let report = hypothesis_check_in(&l, &h, n, mode)?;
    if !report.satisfied() {
        return Err(Error::HypothesesUnmet(format!(
            "n = {n}, G/H has invariant factors {:?} and |H| = {}",
            report.quotient.factors(),
            h.order()
        )));
    }
    let attach = |e: Error| e.with_instance(dump(s, Some(sp), n, Some(mode.as_str())));
    let cert = prove(&l, s, sp, n, mode).map_err(attach)?;
    let check = main_verify_in(&l, &cert, s, sp, n, mode);
    if !check.holds() {
        return Err(attach(internal("final verification", format!("{:?}", check.violations))));
    }
    Ok(cert)
}

fn check_instance(s: &GSequence, sp: &GSequence, n: usize, mode: Mode, order: usize) -> Result<()> {
    if !sp.divides(s) {
        return Err(Error::Precondition("S' does not divide S".into()));
    }
    check_partitionable(sp, n, "S'")?;
    if mode == Mode::FullGroup && sp.len() + 1 < n + order {
        return Err(Error::Precondition(format!(
            "full-group mode needs |S'| = {} >= n + |G| - 1 = {}",
            sp.len(),
            n + order - 1
        )));
    }
    Ok(())
}

/// The recursive construction, with `l` as the ambient group: every term of
/// `S` lies in some coset of `l`, and all conclusions are relative to `l`.
fn prove(l: &Subgroup, s: &GSequence, sp: &GSequence, n: usize, mode: Mode) -> Result<Certificate> {
    let g = s.group();
    let supp = s.support();
    let s0 = supp.min_element().ok_or_else(|| internal("span reduction", "empty sequence"))?;
    let span = affine_span(&supp)?;
    if span != *l {
        if span.is_trivial() {
            // all terms equal, so n = |S'| and ΣA_i is a single point
            let p = make_setpartition(sp, n)?;
            return Ok(case_one(p, sp, n, l));
        }
        let back = |x: usize| g.sub(0, x);
        let ts = s.translate(back(s0));
        let tsp = sp.translate(back(s0));
        let sums = nterm_subsums(&ts, n)?;
        let h = stabilizer(&sums)?;
        if !hypothesis_check_in(&span, &h, n, mode)?.satisfied() {
            return Err(internal("span reduction", "hypotheses fail inside the affine span"));
        }
        let inner = prove(&span, &ts, &tsp, n, mode)?.translate(s0);
        if inner.case == CaseTag::II {
            return Ok(inner);
        }
        let total = inner.partition.sum().len();
        if total + n > sp.len() && mode == Mode::Standard {
            return Ok(case_one(inner.partition, sp, n, l));
        }
        // ΣA_i fills the coset n*s0 + span, so everything sits in s0 + span
        let mut cert = Certificate::bare(Theorem::Main, CaseTag::II, inner.partition);
        cert.h = Some(span.clone());
        cert.k = Some(span);
        cert.alpha = Some(s0);
        cert.e_h = Some(0);
        cert.e_k = Some(0);
        cert.prefix_len = Some(n);
        cert.bounds.insert("route".into(), ROUTE_SPAN_COSET);
        return Ok(cert);
    }

    let pc = partition_solve(s, sp, n)?;
    let target = l.order().min(sp.len() - n + 1);
    if pc.partition.sum().len() >= target {
        return Ok(case_one(pc.partition, sp, n, l));
    }
    if pc.case != CaseTag::II {
        return Err(internal("partition step", "case-1 partition below the target"));
    }
    let sums = nterm_subsums(s, n)?;
    let prof = profile_from_sums(s, n, sp.len(), sums)?;
    let h = prof.stabilizer.clone();

    // a single heavy coset
    if prof.heavy_count() != 1 {
        return Err(internal("single heavy coset", format!("{} heavy cosets", prof.heavy_count())));
    }
    let z = &prof.heavy_preimage;
    let alpha = s.support().intersection(z).min_element().ok_or_else(|| internal("single heavy coset", "no term in Z"))?;
    let mut inside: Vec<GroupSubset> = Vec::new();
    let mut outside: Vec<GroupSubset> = Vec::new();
    for a in pc.partition.parts() {
        if a.is_subset(z) {
            inside.push(a.clone());
        } else {
            outside.push(a.clone());
        }
    }
    let e_h = outside.len();
    if e_h != prof.outside {
        return Err(internal("single heavy coset", format!("{e_h} parts leave Z but e = {}", prof.outside)));
    }
    let k = n - e_h;
    if k < 2 || k >= n {
        return Err(internal("prefix range", format!("k = {k} with n = {n}")));
    }
    let neg_alpha = g.sub(0, alpha);
    let parts_t: Vec<GroupSubset> = inside.iter().chain(&outside).map(|a| a.translate(neg_alpha)).collect();
    let ordered = SetPartition::new(g, inside.iter().chain(&outside).cloned().collect())?;

    let mut prefix = GroupSubset::singleton(g, 0);
    for a in &parts_t[..k] {
        prefix = prefix.sum_with(a);
    }
    if prefix == *h.carrier() {
        let mut cert = Certificate::bare(Theorem::Main, CaseTag::II, ordered);
        cert.h = Some(h.clone());
        cert.k = Some(h);
        cert.alpha = Some(alpha);
        cert.e_h = Some(e_h);
        cert.e_k = Some(e_h);
        cert.prefix_len = Some(k);
        cert.bounds.insert("route".into(), ROUTE_PREFIX_IS_H);
        return Ok(cert);
    }

    let st = s.translate(neg_alpha);
    let s_h = st.restrict(h.carrier());
    let used_t = SetPartition::new(g, parts_t.clone())?.underlying();
    let sp_h = used_t.restrict(h.carrier());
    if sp_h.len() != sp.len() - e_h {
        return Err(internal("subproblem", format!("|S'_H| = {} but |S'| - e_H = {}", sp_h.len(), sp.len() - e_h)));
    }
    let g_sub = subgroup_generated(&s_h.support());
    // the terms outside H, one per trailing part
    let extras: Vec<usize> = parts_t[k..]
        .iter()
        .map(|a| a.difference(h.carrier()).min_element().expect("outside part"))
        .collect();
    let ctx = Extend { s_h: &s_h, sp_h_len: sp_h.len(), n, k, extras: &extras, alpha, h: &h, e_h };

    let t = greedy_capped(&s_h, k as u32, sp_h.len() - (n - k));
    let b0 = make_setpartition(&t, k)?;
    if b0.sum() == *g_sub.carrier() {
        return ctx.close(&b0, &g_sub, ROUTE_GREEDY_PREFIX);
    }

    if !(5 <= k && k + 2 <= n) {
        return Err(internal("prefix range", format!("k = {k} outside [5, n-2] with n = {n}")));
    }
    let pd = partition_solve(&s_h, &t, k)?;
    if pd.partition.sum() == *g_sub.carrier() {
        return ctx.close(&pd.partition, &g_sub, ROUTE_SOLVED_PREFIX);
    }
    if pd.case != CaseTag::II || t.len() + 1 < k + g_sub.order() {
        return Err(internal("subproblem", "inner partition is neither full nor periodic with room"));
    }
    let inner_h = stabilizer(&nterm_subsums(&s_h, k)?)?;
    if k <= h.order() / inner_h.order() + 2 {
        return Err(internal(
            "recursion margin",
            format!("k = {k} but |H|/|H'| + 2 = {}", h.order() / inner_h.order() + 2),
        ));
    }
    if !hypothesis_check_in(&g_sub, &inner_h, k, mode)?.satisfied() {
        return Err(internal("recursion", "hypotheses fail for the subproblem"));
    }
    if mode == Mode::FullGroup && t.len() + 1 < k + g_sub.order() {
        return Err(internal("recursion", "subproblem too short for full-group mode"));
    }
    let sub = prove(&g_sub, &s_h, &t, k, mode)?;
    match sub.case {
        CaseTag::I => {
            if sub.partition.sum() != *g_sub.carrier() {
                return Err(internal("recursion", "inner case I does not fill the subgroup"));
            }
            let mut cert = ctx.close(&sub.partition, &g_sub, ROUTE_RECURSION)?;
            cert.bounds.insert("depth".into(), sub.bounds.get("depth").copied().unwrap_or(0) + 1);
            Ok(cert)
        }
        CaseTag::II => {
            let kk = sub.k.clone().ok_or_else(|| internal("recursion", "inner certificate has no K"))?;
            let inner_alpha = sub.alpha.ok_or_else(|| internal("recursion", "inner certificate has no alpha"))?;
            let inner_e_k = sub.e_k.ok_or_else(|| internal("recursion", "inner certificate has no e_K"))?;
            let mut cert = ctx.extend(&sub.partition, kk)?;
            let e_k = e_h + inner_e_k;
            cert.alpha = Some(g.add(alpha, inner_alpha));
            cert.e_k = Some(e_k);
            cert.prefix_len = Some(n - e_k);
            cert.bounds.insert("route".into(), ROUTE_RECURSION);
            cert.bounds.insert("depth".into(), sub.bounds.get("depth").copied().unwrap_or(0) + 1);
            Ok(cert)
        }
    }
}

fn case_one(p: SetPartition, sp: &GSequence, n: usize, l: &Subgroup) -> Certificate {
    let total = p.sum().len() as i64;
    let mut cert = Certificate::bare(Theorem::Main, CaseTag::I, p);
    cert.bounds.insert("sum".into(), total);
    cert.bounds.insert("target".into(), (l.order() as i64).min(sp.len() as i64 - n as i64 + 1));
    cert
}

/// Data for growing a `k`-setpartition of `S_H` terms into the final one.
struct Extend<'a> {
    s_h: &'a GSequence,
    sp_h_len: usize,
    n: usize,
    k: usize,
    extras: &'a [usize],
    alpha: usize,
    h: &'a Subgroup,
    e_h: usize,
}

impl Extend<'_> {
    /// `B_1, ..., B_k, B'_1 ∪ {z_1}, ...`, translated back by `alpha`.
    fn extend(&self, b: &SetPartition, kk: Subgroup) -> Result<Certificate> {
        let g = self.s_h.group();
        let t_prime = extend_split(self.s_h, self.sp_h_len, self.n, self.k, &b.underlying())?;
        let b_prime = make_setpartition(&t_prime, self.n - self.k)?;
        let mut parts: Vec<GroupSubset> = b.parts().to_vec();
        for (bj, &zj) in b_prime.parts().iter().zip(self.extras) {
            let mut c = bj.clone();
            c.insert(zj);
            parts.push(c);
        }
        let partition = SetPartition::new(g, parts.iter().map(|a| a.translate(self.alpha)).collect())?;
        let mut cert = Certificate::bare(Theorem::Main, CaseTag::II, partition);
        cert.h = Some(self.h.clone());
        cert.k = Some(kk);
        cert.alpha = Some(self.alpha);
        cert.e_h = Some(self.e_h);
        cert.e_k = Some(self.e_h);
        cert.prefix_len = Some(self.k);
        Ok(cert)
    }

    /// The prefix already fills `K = <supp S_H>`.
    fn close(&self, b: &SetPartition, g_sub: &Subgroup, route: i64) -> Result<Certificate> {
        let mut cert = self.extend(b, g_sub.clone())?;
        cert.bounds.insert("route".into(), route);
        Ok(cert)
    }
}

/// Checks a structure certificate from scratch against `(S, S', n)`.
pub fn main_verify(cert: &Certificate, s: &GSequence, sp: &GSequence, n: usize, mode: Mode) -> VerifyReport {
    main_verify_in(&Subgroup::full(s.group()), cert, s, sp, n, mode)
}

/// As [`main_verify`], relative to the ambient subgroup `l`.
pub fn main_verify_in(
    l: &Subgroup,
    cert: &Certificate,
    s: &GSequence,
    sp: &GSequence,
    n: usize,
    mode: Mode,
) -> VerifyReport {
    let mut r = VerifyReport::default();
    let g = s.group();
    r.check(check_instance(s, sp, n, mode, l.order()).is_ok(), "precondition", || {
        check_instance(s, sp, n, mode, l.order()).unwrap_err().to_string()
    });
    if !r.holds() {
        return r;
    }
    let parts = cert.partition.parts();
    let used = cert.partition.underlying();
    r.check(parts.len() == n, "partition", || format!("{} parts for n = {n}", parts.len()));
    r.check(used.divides(s), "partition", || "S(A) does not divide S".into());
    r.check(used.len() == sp.len(), "partition", || format!("|S(A)| = {} != |S'| = {}", used.len(), sp.len()));
    if !r.holds() {
        return r;
    }
    let Ok(sums) = nterm_subsums(s, n) else {
        r.check(false, "precondition", || "Σ_n(S) undefined".into());
        return r;
    };
    let total = cert.partition.sum();
    match cert.case {
        CaseTag::I => {
            r.check(total.is_subset(&sums), "(i)", || "ΣA_i is not inside Σ_n(S)".into());
            let target = (l.order() as i64).min(sp.len() as i64 - n as i64 + 1);
            r.check(total.len() as i64 >= target, "(i)", || format!("|ΣA_i| = {} < {target}", total.len()));
            if mode == Mode::FullGroup {
                let coset = l.coset(sums.min_element().unwrap_or(0));
                r.check(sums == coset && total == coset, "(i)", || "Σ_n(S) is not the whole group".into());
            }
        }
        CaseTag::II => verify_case_two(&mut r, l, cert, s, sp, n, &sums, &total),
    }
    let _ = g;
    r
}

#[allow(clippy::too_many_arguments)]
fn verify_case_two(
    r: &mut VerifyReport,
    l: &Subgroup,
    cert: &Certificate,
    s: &GSequence,
    sp: &GSequence,
    n: usize,
    sums: &GroupSubset,
    total: &GroupSubset,
) {
    let g = s.group();
    let (Some(hc), Some(k), Some(alpha), Some(e_h), Some(e_k)) = (&cert.h, &cert.k, cert.alpha, cert.e_h, cert.e_k)
    else {
        r.check(false, "fields", || "case II needs H, K, alpha, e_H and e_K".into());
        return;
    };
    let Ok(h) = stabilizer(sums) else {
        r.check(false, "fields", || "empty Σ_n(S)".into());
        return;
    };
    r.check(*hc == h, "H", || "H is not the stabilizer of Σ_n(S)".into());
    r.check(k.is_subgroup_of(&h), "K", || "K is not inside H".into());
    r.check(!k.is_trivial(), "K", || "K is trivial".into());
    r.check(h.is_subgroup_of(l) && h != *l, "H", || "H is not a proper subgroup".into());
    let ah = h.coset(alpha);
    let ak = k.coset(alpha);
    let used = cert.partition.underlying();
    let parts = cert.partition.parts();

    // (a)
    r.check(total == sums, "(ii)(a)", || format!("|ΣA_i| = {} but |Σ_n(S)| = {}", total.len(), sums.len()));
    if let Ok(rest) = used.remove_from(s) {
        r.check(rest.support().is_subset(&ak), "(ii)(a)", || "an unused term lies outside alpha + K".into());
    }

    // (b)
    let index = (l.order() / h.order()) as i64;
    for (name, sub, coset, claimed) in [("e_H", &h, &ah, e_h), ("e_K", k, &ak, e_k)] {
        let actual = s.count_outside(coset);
        r.check(actual == claimed, "(ii)(b)", || format!("{name} = {claimed} but {actual} terms lie outside"));
        let size = sub.order() as i64;
        let e = claimed as i64;
        r.check(sums.len() as i64 >= (e + 1) * size, "(ii)(b)", || {
            format!("|Σ_n(S)| = {} < ({name} + 1)|{}| = {}", sums.len(), &name[2..], (e + 1) * size)
        });
        r.check((e + 1) * size <= sp.len() as i64 - n as i64, "(ii)(b)", || {
            format!("({name} + 1) * {size} exceeds |S'| - n = {}", sp.len() as i64 - n as i64)
        });
    }
    r.check(e_h as i64 <= index - 2, "(ii)(b)", || format!("e_H = {e_h} exceeds |G/H| - 2 = {}", index - 2));

    // (c)
    let prefix = n.checked_sub(e_k);
    if let Some(pl) = cert.prefix_len {
        r.check(Some(pl) == prefix, "(ii)(c)", || format!("k = {pl} but n - e_K = {prefix:?}"));
    }
    let Some(prefix) = prefix else {
        r.check(false, "(ii)(c)", || format!("e_K = {e_k} exceeds n"));
        return;
    };
    for (i, a) in parts.iter().enumerate() {
        r.check(!a.is_disjoint(&ak), "(ii)(c)", || format!("A_{} misses alpha + K", i + 1));
        let out = a.difference(&ak).len();
        if i < prefix {
            r.check(out == 0, "(ii)(c)", || format!("A_{} has {out} elements outside alpha + K", i + 1));
        } else {
            r.check(out == 1, "(ii)(c)", || format!("A_{} has {out} elements outside alpha + K, expected 1", i + 1));
        }
    }

    // (d)
    let want = k.coset(g.mul(prefix, alpha));
    let got = cert.partition.prefix_sum(prefix);
    r.check(got == want, "(ii)(d)", || format!("the first {prefix} parts do not sum to {prefix}*alpha + K"));
}
