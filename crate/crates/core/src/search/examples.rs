//! The three extremal families: sequences built from `n` copies of every
//! element of a preimage `Z = φ_H^{-1}(X)`, where `nX` is small and aperiodic
//! in `G/H`. Each one misses the sumset bound while the concentration clause
//! fails too, which is what makes the bounds on `n` sharp.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, stabilizer, subgroup_generated, GroupSpec, GroupSubset, Subgroup, DEFAULT_ORDER_CAP};
use crate::sequence::{nterm_subsums, GSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleKind {
    /// `X = {0, g}` with `G/H = <g>` cyclic, `n = |G/H| - 2`.
    TwoCosets,
    /// `X = K/H ∪ {g}` with `G/H = K/H ⊕ <g>`, `n = exp(G/H) - 1`.
    BlockAndGenerator,
    /// `X = (K/H \ {0}) ∪ {g}` with `G/H = K/H ⊕ <g>`, `n = exp(G/H)`.
    PuncturedBlockAndGenerator,
}

impl ExampleKind {
    pub const ALL: [ExampleKind; 3] =
        [ExampleKind::TwoCosets, ExampleKind::BlockAndGenerator, ExampleKind::PuncturedBlockAndGenerator];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleKind::TwoCosets => "two-cosets",
            ExampleKind::BlockAndGenerator => "block-and-generator",
            ExampleKind::PuncturedBlockAndGenerator => "punctured-block-and-generator",
        }
    }

    /// Single-letter alias used on the command line.
    pub fn letter(self) -> char {
        match self {
            ExampleKind::TwoCosets => 'a',
            ExampleKind::BlockAndGenerator => 'b',
            ExampleKind::PuncturedBlockAndGenerator => 'c',
        }
    }
}

impl fmt::Display for ExampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExampleKind> {
        let t = s.trim().to_ascii_lowercase();
        ExampleKind::ALL
            .into_iter()
            .find(|k| t == k.as_str() || t.len() == 1 && t.starts_with(k.letter()))
            .ok_or_else(|| Error::Parse(format!("unknown example kind {s:?} (expected a, b, c or a family name)")))
    }
}

/// Construction data. `k` and `g` are searched for when left out: the
/// smallest generator index first, then the first fitting `K` in subgroup
/// order.
#[derive(Clone, Debug)]
pub struct ExampleParams {
    pub group: GroupSpec,
    pub h: Subgroup,
    pub k: Option<Subgroup>,
    pub g: Option<usize>,
}

impl ExampleParams {
    pub fn new(group: &GroupSpec, h: Subgroup) -> ExampleParams {
        ExampleParams { group: group.clone(), h, k: None, g: None }
    }
}

/// Values the construction promises, each confirmed by brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub seq_len: usize,
    pub sigma_len: usize,
    pub stabilizer: Subgroup,
    pub clause_b_fails: bool,
}

#[derive(Clone, Debug)]
pub struct ExampleInstance {
    pub kind: ExampleKind,
    pub group: GroupSpec,
    pub h: Subgroup,
    pub k: Option<Subgroup>,
    pub g: usize,
    /// The preimage `Z` whose elements each appear `n` times.
    pub support: GroupSubset,
    pub s: GSequence,
    pub n: usize,
    pub expected: Expected,
    /// `Σ_n(S)` as enumerated term by term.
    pub sigma: GroupSubset,
}

fn side(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// Least `m >= 1` with `m*x` in `h`: the order of `x + H` in `G/H`.
fn order_mod(g: &GroupSpec, h: &Subgroup, x: usize) -> usize {
    let mut y = x;
    let mut m = 1;
    while !h.contains(y) {
        y = g.add(y, x);
        m += 1;
    }
    m
}

/// `K/H ⊕ <g + H> = G/H` with `<g + H>` of order `e`.
fn complements(g: &GroupSpec, h: &Subgroup, k: &Subgroup, x: usize, e: usize) -> bool {
    if !h.is_subgroup_of(k) || order_mod(g, h, x) != e || k.order() / h.order() * e != g.order() / h.order() {
        return false;
    }
    let mut cyc = h.carrier().clone();
    cyc.insert(x);
    let cyc = subgroup_generated(&cyc);
    cyc.carrier().intersection(k.carrier()) == *h.carrier()
}

pub fn gen_example(kind: ExampleKind, params: &ExampleParams) -> Result<ExampleInstance> {
    let g = &params.group;
    let h = &params.h;
    if h.group() != g {
        return Err(Error::MismatchedGroups { left: g.to_string(), right: h.group().to_string() });
    }
    if h.is_trivial() || h.is_full() {
        return Err(side("H must be nontrivial and proper"));
    }
    let q = g.order() / h.order();
    let e = g.elements().map(|x| order_mod(g, h, x)).max().unwrap_or(1);
    let cyclic_quotient = e == q;
    match kind {
        ExampleKind::TwoCosets => {
            if !cyclic_quotient {
                return Err(side("G/H must be cyclic"));
            }
            if q < 4 {
                return Err(side(format!("|G/H| = {q} must be at least 4")));
            }
        }
        ExampleKind::BlockAndGenerator => {
            if cyclic_quotient {
                return Err(side("G/H must be noncyclic"));
            }
            if e < 3 {
                return Err(side(format!("exp(G/H) = {e} must be at least 3")));
            }
        }
        ExampleKind::PuncturedBlockAndGenerator => {
            if cyclic_quotient {
                return Err(side("G/H must be noncyclic"));
            }
            if h.order() < e {
                return Err(side(format!("|H| = {} must be at least n = exp(G/H) = {e}", h.order())));
            }
            if q / e < 3 {
                return Err(side(format!("|K/H| = {} must be at least 3", q / e)));
            }
        }
    }
    let gens: Vec<usize> = match params.g {
        Some(x) if x < g.order() => vec![x],
        Some(x) => return Err(side(format!("generator index {x} is outside the group"))),
        None => g.elements().filter(|&x| order_mod(g, h, x) == e).collect(),
    };

    let (x, k) = if kind == ExampleKind::TwoCosets {
        let x = *gens.first().ok_or_else(|| side("no generator of G/H"))?;
        if order_mod(g, h, x) != q {
            return Err(side("g must generate G/H"));
        }
        (x, None)
    } else {
        let ks: Vec<Subgroup> = match &params.k {
            Some(k) => vec![k.clone()],
            None => enumerate_subgroups(g, DEFAULT_ORDER_CAP)?
                .into_iter()
                .filter(|k| h.is_subgroup_of(k) && k.order() * e == g.order())
                .collect(),
        };
        let found = gens
            .iter()
            .flat_map(|&x| ks.iter().map(move |k| (x, k)))
            .find(|(x, k)| complements(g, h, k, *x, e));
        let (x, k) = found.ok_or_else(|| side("no K and g with G/H = K/H ⊕ <g> and <g> of order exp(G/H)"))?;
        (x, Some(k.clone()))
    };

    let (support, n) = match kind {
        ExampleKind::TwoCosets => (h.carrier().union(&h.coset(x)), q - 2),
        ExampleKind::BlockAndGenerator => {
            let k = k.as_ref().expect("set above");
            (k.carrier().union(&h.coset(x)), e - 1)
        }
        ExampleKind::PuncturedBlockAndGenerator => {
            let k = k.as_ref().expect("set above");
            (k.carrier().difference(h.carrier()).union(&h.coset(x)), e)
        }
    };
    let mut s = GSequence::empty(g);
    for z in support.iter() {
        s.push(z, n as u32);
    }

    let (ho, go) = (h.order(), g.order());
    let expected = match kind {
        ExampleKind::TwoCosets => Expected {
            seq_len: 2 * go - 4 * ho,
            sigma_len: go - ho,
            stabilizer: h.clone(),
            clause_b_fails: true,
        },
        ExampleKind::BlockAndGenerator => {
            let ko = k.as_ref().map_or(0, |k| k.order());
            Expected {
                seq_len: (go / ko - 1) * (ho + ko),
                sigma_len: go - ko + ho,
                stabilizer: h.clone(),
                clause_b_fails: true,
            }
        }
        ExampleKind::PuncturedBlockAndGenerator => Expected {
            seq_len: go,
            sigma_len: go - ho,
            stabilizer: h.clone(),
            clause_b_fails: true,
        },
    };

    let sigma = brute_nterm(&s, n);
    let fast = nterm_subsums(&s, n)?;
    let stab = stabilizer(&sigma)?;
    let b_fails = !clause_b_holds(&s, &s, n, &sigma, &stab)?;
    let mismatch = |what: &str, got: String, want: String| {
        Err(Error::internal("example construction", format!("{kind}: {what} is {got}, expected {want}")))
    };
    if s.len() != expected.seq_len {
        return mismatch("|S|", s.len().to_string(), expected.seq_len.to_string());
    }
    if sigma.len() != expected.sigma_len {
        return mismatch("|Σ_n(S)|", sigma.len().to_string(), expected.sigma_len.to_string());
    }
    if fast != sigma {
        return mismatch("Σ_n(S) from the row recursion", format!("{:?}", fast.to_vec()), format!("{:?}", sigma.to_vec()));
    }
    if stab != expected.stabilizer {
        return mismatch("H(Σ_n(S))", format!("{:?}", stab.carrier().to_vec()), format!("{:?}", h.carrier().to_vec()));
    }
    if !b_fails {
        return mismatch("the concentration clause", "satisfiable".into(), "failing".into());
    }
    if sigma.len() + n >= s.len() + 1 {
        return mismatch("|Σ_n(S)| - |S| + n - 1", format!("{}", sigma.len() + n - s.len() - 1), "negative".into());
    }

    Ok(ExampleInstance { kind, group: g.clone(), h: h.clone(), k, g: x, support, s, n, expected, sigma })
}

/// Every `H` in `C_m` that the two-cosets family accepts: nontrivial, index at least 4.
pub fn two_cosets_subgroups(g: &GroupSpec) -> Result<Vec<Subgroup>> {
    if !g.is_cyclic() {
        return Ok(Vec::new());
    }
    Ok(enumerate_subgroups(g, DEFAULT_ORDER_CAP)?
        .into_iter()
        .filter(|h| !h.is_trivial() && h.index_in_group() >= 4)
        .collect())
}

/// Σ_n(S) by walking every sub-multiset with `n` terms.
fn brute_nterm(s: &GSequence, n: usize) -> GroupSubset {
    fn rec(g: &GroupSpec, items: &[(usize, u32)], left: usize, acc: usize, out: &mut GroupSubset) {
        let Some((&(x, v), rest)) = items.split_first() else {
            if left == 0 {
                out.insert(acc);
            }
            return;
        };
        let room: usize = rest.iter().map(|&(_, w)| w as usize).sum();
        let mut a = acc;
        for t in 0..=(v as usize).min(left) {
            if left - t <= room {
                rec(g, rest, left - t, a, out);
            }
            a = g.add(a, x);
        }
    }
    let g = s.group();
    let items: Vec<(usize, u32)> = s.distinct().collect();
    let mut out = GroupSubset::empty(g);
    rec(g, &items, n, 0, &mut out);
    out
}

/// Whether some `alpha` and nontrivial `K <= H` meet every counting
/// requirement of the concentration clause, with `H = H(Σ_n(S))`.
pub fn clause_b_holds(
    s: &GSequence,
    sp: &GSequence,
    n: usize,
    sigma: &GroupSubset,
    h: &Subgroup,
) -> Result<bool> {
    let g = s.group();
    if h.is_trivial() || h.is_full() {
        return Ok(false);
    }
    let slack = sp.len() as i64 - n as i64;
    let sigma_len = sigma.len() as i64;
    let fits = |sub: &Subgroup, e: usize| {
        let size = sub.order() as i64;
        let e = e as i64;
        (e + 1) * size <= sigma_len && e <= (g.order() / sub.order()) as i64 - 2 && (e + 1) * size <= slack
    };
    let ks: Vec<Subgroup> = enumerate_subgroups(g, DEFAULT_ORDER_CAP)?
        .into_iter()
        .filter(|k| !k.is_trivial() && k.is_subgroup_of(h))
        .collect();
    for alpha in g.elements() {
        if !fits(h, s.count_outside(&h.coset(alpha))) {
            continue;
        }
        if ks.iter().any(|k| fits(k, s.count_outside(&k.coset(alpha)))) {
            return Ok(true);
        }
    }
    Ok(false)
}
