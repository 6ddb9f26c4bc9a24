//! Structure of small `n`-fold sumsets `nA` with `n` near `exp(G)`.
//!
//! Templates are matched by brute force: candidate subgroups come from the
//! full subgroup lattice, complements `<g>` from elements of maximal order,
//! and translates `z` from the whole group.

use super::{CheckReport, Outcome};
use crate::error::{Error, Result};
use crate::group::{
    affine_span, enumerate_subgroups, iterated_sumset, smallest_prime_divisor, stabilizer, subgroup_generated,
    GroupSpec, GroupSubset, Subgroup, DEFAULT_ORDER_CAP,
};

/// Names of the structures that may keep `|nA|` below `min(|G|, n|A|)`.
pub const TEMPLATE_KLEIN_PAIR: &str = "exp/klein-pair";
pub const TEMPLATE_PUNCTURED: &str = "exp/punctured-subgroup";
pub const TEMPLATE_SUBGROUP_PLUS_COSET: &str = "exp-1/subgroup-plus-coset";
pub const TEMPLATE_STAIRCASE: &str = "exp-1/staircase";

struct Found {
    label: &'static str,
    witnesses: Vec<(&'static str, GroupSubset)>,
}

/// For `<A>_* = G` and `n >= 3`: `|nA| >= min(|G|, n|A|)` once `n > exp(G)`;
/// for `n` in `{exp(G) - 1, exp(G)}` a smaller `nA` must match a template.
pub fn check_nfold_structure(a: &GroupSubset, n: usize) -> Result<CheckReport> {
    let g = a.group();
    let mut r = CheckReport::new("nfold_structure");
    if a.is_empty() {
        return Err(Error::Empty("set"));
    }
    if !affine_span(a)?.is_full() {
        return Ok(r.with_outcome(Outcome::Inapplicable, "affine span is not the whole group"));
    }
    if n < 3 {
        return Ok(r.with_outcome(Outcome::Inapplicable, "n < 3"));
    }
    let na = iterated_sumset(a, n)?;
    let e = g.exponent();
    r.lhs = na.len() as i64;
    r.rhs = (g.order() as i64).min((n * a.len()) as i64);
    if n > e {
        let (lhs, rhs) = (r.lhs, r.rhs);
        r.require(lhs >= rhs, || format!("|nA| = {lhs} < {rhs}"));
        return Ok(r);
    }
    if n + 1 < e {
        return Ok(r.with_outcome(Outcome::NotTriggered, "n < exp(G) - 1"));
    }
    if r.lhs >= r.rhs {
        r.detail = "bound holds".into();
        return Ok(r);
    }
    match classify(a, n, &na)? {
        Some(found) => {
            r.detail = found.label.to_string();
            for (key, set) in found.witnesses {
                r.witness(key, &set);
            }
        }
        None => {
            let (lhs, rhs) = (r.lhs, r.rhs);
            r.require(false, || format!("|nA| = {lhs} < {rhs} and no template matches"))
        }
    }
    Ok(r)
}

/// For `<A>_* = G` and `n|A| > |G|`: `nA = G` once `n >= exp(G)`; at
/// `n = exp(G) - 1` a proper `nA` forces composite exponent, a noncyclic
/// group and the staircase template.
pub fn check_nfold_covering(a: &GroupSubset, n: usize) -> Result<CheckReport> {
    let g = a.group();
    let mut r = CheckReport::new("nfold_covering");
    if a.is_empty() {
        return Err(Error::Empty("set"));
    }
    if !affine_span(a)?.is_full() {
        return Ok(r.with_outcome(Outcome::Inapplicable, "affine span is not the whole group"));
    }
    if n * a.len() <= g.order() {
        return Ok(r.with_outcome(Outcome::Inapplicable, "n|A| <= |G|"));
    }
    let na = iterated_sumset(a, n)?;
    let e = g.exponent();
    r.lhs = na.len() as i64;
    r.rhs = g.order() as i64;
    if na.is_full() {
        return Ok(r);
    }
    if n >= e {
        r.require(false, || format!("|nA| = {} < |G|", na.len()));
        return Ok(r);
    }
    if n + 1 < e {
        return Ok(r.with_outcome(Outcome::NotTriggered, "n < exp(G) - 1"));
    }
    r.require(smallest_prime_divisor(e) != Some(e), || format!("exp(G) = {e} is prime"));
    r.require(!g.is_cyclic(), || "G is cyclic".into());
    let k = stabilizer(&na)?;
    let subs = enumerate_subgroups(g, DEFAULT_ORDER_CAP)?;
    match staircase(&subs, &k, a, n, &na) {
        Some(found) => {
            r.detail = found.label.to_string();
            for (key, set) in found.witnesses {
                r.witness(key, &set);
            }
        }
        None => r.require(false, || "no staircase template matches".into()),
    }
    Ok(r)
}

/// Some `z` with `z + b = t`.
fn translate_to(b: &GroupSubset, t: &GroupSubset) -> Option<usize> {
    if b.len() != t.len() {
        return None;
    }
    let g = b.group();
    let b0 = b.min_element()?;
    t.iter().map(|y| g.sub(y, b0)).find(|&z| b.translate(z) == *t)
}

/// Elements `x` of order `exp(G)` with `G = H ⊕ <x>`.
fn complements(g: &GroupSpec, h: &Subgroup) -> Vec<usize> {
    let e = g.exponent();
    if h.order() * e != g.order() {
        return Vec::new();
    }
    g.elements()
        .filter(|&x| g.element_order(x) == e)
        .filter(|&x| {
            let c = subgroup_generated(&GroupSubset::singleton(g, x));
            c.carrier().intersection(h.carrier()).len() == 1
        })
        .collect()
}

fn classify(a: &GroupSubset, n: usize, na: &GroupSubset) -> Result<Option<Found>> {
    let g = a.group();
    let order = g.order();
    let e = g.exponent();
    let k = stabilizer(na)?;
    let ak = k.saturate(a);
    let subs = enumerate_subgroups(g, DEFAULT_ORDER_CAP)?;
    let above_k: Vec<&Subgroup> = subs.iter().filter(|h| k.is_subgroup_of(h) && **h != k).collect();
    let nal = na.len();
    if n == e {
        if a.len() * n > order || nal + k.order() != order || nal + k.order() < ak.len() * n {
            return Ok(None);
        }
        for h in &above_k {
            let comps = complements(g, h);
            let index = h.order() / k.order();
            for &x in &comps {
                if index >= 3 {
                    let t = h.carrier().difference(k.carrier()).union(&k.coset(x));
                    if let Some(z) = translate_to(&ak, &t) {
                        return Ok(Some(Found {
                            label: TEMPLATE_PUNCTURED,
                            witnesses: vec![
                                ("K", k.carrier().clone()),
                                ("H", h.carrier().clone()),
                                ("g", GroupSubset::singleton(g, x)),
                                ("z", GroupSubset::singleton(g, z)),
                            ],
                        }));
                    }
                }
                let klein = index == 4 && h.carrier().iter().all(|y| k.contains(g.add(y, y)));
                if !klein {
                    continue;
                }
                let halves: Vec<&&Subgroup> = above_k
                    .iter()
                    .filter(|m| m.order() == 2 * k.order() && m.is_subgroup_of(h))
                    .collect();
                for h1 in &halves {
                    for h2 in &halves {
                        if h1 == h2 {
                            continue;
                        }
                        let t = h1.carrier().union(&h2.coset(x));
                        if let Some(z) = translate_to(&ak, &t) {
                            return Ok(Some(Found {
                                label: TEMPLATE_KLEIN_PAIR,
                                witnesses: vec![
                                    ("K", k.carrier().clone()),
                                    ("H1", h1.carrier().clone()),
                                    ("H2", h2.carrier().clone()),
                                    ("g", GroupSubset::singleton(g, x)),
                                    ("z", GroupSubset::singleton(g, z)),
                                ],
                            }));
                        }
                    }
                }
            }
        }
        return Ok(None);
    }
    // n = exp(G) - 1: some H with G = H x C_exp and A meeting two H-cosets
    let mut split = Vec::new();
    for h in &above_k {
        if complements(g, h).is_empty() {
            continue;
        }
        let cosets: std::collections::BTreeSet<usize> =
            a.iter().map(|x| h.coset(x).min_element().expect("coset")).collect();
        if cosets.len() == 2 {
            split.push(*h);
        }
    }
    if split.is_empty() {
        return Ok(None);
    }
    for h in &split {
        if a.len() * n > order {
            break;
        }
        for z in g.elements() {
            let shifted = a.translate(z);
            let a0 = shifted.difference(h.carrier());
            if a0.is_empty() {
                continue;
            }
            let a0k = k.saturate(&a0);
            if k.saturate(&shifted) != h.carrier().union(&a0k) {
                continue;
            }
            if nal + h.order() == order + iterated_sumset(&a0k, n)?.len() {
                return Ok(Some(Found {
                    label: TEMPLATE_SUBGROUP_PLUS_COSET,
                    witnesses: vec![
                        ("K", k.carrier().clone()),
                        ("H", h.carrier().clone()),
                        ("z", GroupSubset::singleton(g, z)),
                    ],
                }));
            }
        }
    }
    Ok(staircase(&subs, &k, a, n, na))
}

/// `G = H_0 ⊕ <x_1> ⊕ ... ⊕ <x_r>` with each `x_i` of order `exp(G)`, and
/// `z + A + K` the union over `j` of `K + H_0 + ... + H_{j-1} + x_{j+1} + ... + x_r`.
fn staircase(subs: &[Subgroup], k: &Subgroup, a: &GroupSubset, n: usize, na: &GroupSubset) -> Option<Found> {
    let g = a.group();
    let order = g.order() as i64;
    let e = g.exponent();
    let ak = k.saturate(a);
    for h0 in subs.iter().filter(|h| k.is_subgroup_of(h) && *h != k) {
        let Some(r) = power_index(g.order() / h0.order(), e, g.order() % h0.order()) else {
            continue;
        };
        let p = smallest_prime_divisor(h0.exponent()).expect("nontrivial H_0") as i64;
        let er = (e as i64).pow(r as u32);
        let ei = e as i64;
        let cap = order - h0.order() as i64 + (ei - 1) * k.order() as i64;
        if (a.len() * n) as i64 > cap || cap * p * er > (p * er + ei - p - 1) * order {
            continue;
        }
        if na.len() as i64 != order - h0.order() as i64 + k.order() as i64 {
            continue;
        }
        let mut xs = Vec::new();
        if let Some((xs, z)) = extend_basis(g, h0.clone(), r, &mut xs, &|xs| {
            let t = staircase_set(k, h0, xs);
            translate_to(&ak, &t)
        }) {
            let mut witnesses = vec![("K", k.carrier().clone()), ("H0", h0.carrier().clone())];
            witnesses.push(("x", GroupSubset::from_indices(g, xs.iter().copied())));
            witnesses.push(("z", GroupSubset::singleton(g, z)));
            return Some(Found { label: TEMPLATE_STAIRCASE, witnesses });
        }
    }
    None
}

/// `r >= 1` with `e^r = q`, when `q` is an exact quotient.
fn power_index(q: usize, e: usize, rem: usize) -> Option<usize> {
    if rem != 0 || e < 2 {
        return None;
    }
    let (mut r, mut m) = (0, 1);
    while m < q {
        m *= e;
        r += 1;
    }
    (m == q && r >= 1).then_some(r)
}

/// Depth-first choice of `x_1, ..., x_r` extending `span` directly.
fn extend_basis(
    g: &GroupSpec,
    span: Subgroup,
    left: usize,
    xs: &mut Vec<usize>,
    done: &dyn Fn(&[usize]) -> Option<usize>,
) -> Option<(Vec<usize>, usize)> {
    if left == 0 {
        return done(xs).map(|z| (xs.clone(), z));
    }
    let e = g.exponent();
    for x in g.elements() {
        if g.element_order(x) != e {
            continue;
        }
        let cyc = subgroup_generated(&GroupSubset::singleton(g, x));
        if cyc.carrier().intersection(span.carrier()).len() != 1 {
            continue;
        }
        let next = crate::group::join(&span, &cyc);
        xs.push(x);
        if let Some(hit) = extend_basis(g, next, left - 1, xs, done) {
            return Some(hit);
        }
        xs.pop();
    }
    None
}

fn staircase_set(k: &Subgroup, h0: &Subgroup, xs: &[usize]) -> GroupSubset {
    let g = k.group();
    let r = xs.len();
    let mut out = GroupSubset::empty(g);
    for j in 0..=r {
        // K + H_0 + ... + H_{j-1} + x_{j+1} + ... + x_r, with H_i = <x_i>
        let mut block = k.clone();
        if j >= 1 {
            block = crate::group::join(&block, h0);
        }
        for &x in xs.iter().take(j.saturating_sub(1)) {
            block = crate::group::join(&block, &subgroup_generated(&GroupSubset::singleton(g, x)));
        }
        let shift = xs.iter().skip(j).fold(0, |acc, &x| g.add(acc, x));
        out.union_with(&block.coset(shift));
    }
    out
}
