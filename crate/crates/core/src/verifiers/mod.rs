//! Instance-level checkers for sumset and subsum bounds.
//!
//! Every checker recomputes both sides of its inequality from the inputs and
//! reports them, so a failing report says what went wrong on its own.

mod structure;

use std::collections::BTreeMap;

use serde::Serialize;

pub use structure::{check_nfold_covering, check_nfold_structure};

use crate::error::{Error, Result};
use crate::group::{affine_span, join, representation_counts, stabilizer, sumset, GroupSubset};
use crate::sequence::{build_s_star, nterm_subsums, subsum_profile, GSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Violated,
    /// The checker's standing assumptions fail for this input.
    Inapplicable,
    /// The hypothesis of the statement does not fire; nothing to check.
    NotTriggered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub outcome: Outcome,
    pub lhs: i64,
    pub rhs: i64,
    /// Named element lists (subgroups, translates, templates), as indices.
    pub witnesses: BTreeMap<String, Vec<usize>>,
    pub detail: String,
    pub violations: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> CheckReport {
        CheckReport {
            name,
            outcome: Outcome::Holds,
            lhs: 0,
            rhs: 0,
            witnesses: BTreeMap::new(),
            detail: String::new(),
            violations: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome != Outcome::Violated
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
            self.outcome = Outcome::Violated;
        }
    }

    fn witness(&mut self, key: &str, set: &GroupSubset) {
        self.witnesses.insert(key.to_string(), set.to_vec());
    }

    fn with_outcome(mut self, outcome: Outcome, detail: impl Into<String>) -> CheckReport {
        self.outcome = outcome;
        self.detail = detail.into();
        self
    }
}

/// `|ΣA_i| >= Σ|A_i + H| - (n-1)|H|` with `H = H(ΣA_i)`, also in the form
/// `Σ|A_i| - (n-1)|H| + ρ` where `ρ` counts the holes `(A_i + H) \ A_i`.
pub fn check_kneser(parts: &[GroupSubset]) -> Result<CheckReport> {
    let first = parts.first().ok_or(Error::Empty("summand list"))?;
    let mut total = first.clone();
    for p in &parts[1..] {
        total = sumset(&total, p)?;
    }
    if first.is_empty() {
        return Err(Error::Empty("summand"));
    }
    let h = stabilizer(&total)?;
    let n = parts.len() as i64;
    let hs = h.order() as i64;
    let saturated: i64 = parts.iter().map(|a| h.saturate(a).len() as i64).sum();
    let plain: i64 = parts.iter().map(|a| a.len() as i64).sum();
    let rho = saturated - plain;
    let bound = saturated - (n - 1) * hs;
    let alt = plain - (n - 1) * hs + rho;
    let mut r = CheckReport::new("kneser");
    r.lhs = total.len() as i64;
    r.rhs = bound;
    r.witness("H", h.carrier());
    r.detail = format!("rho = {rho}");
    r.require(r.lhs >= bound, || format!("|ΣA_i| = {} < {bound}", total.len()));
    r.require(alt == bound, || format!("hole form {alt} differs from {bound}"));
    Ok(r)
}

/// The subsum bound `|Σ_n(S)| >= (|S|-n+1) - (n-e-1)(|H|-1) + ρ`, checked
/// together with its three other closed forms and `ρ >= 0`.
pub fn check_subsum_kneser(s: &GSequence, n: usize) -> Result<CheckReport> {
    if n == 0 || s.height() as usize > n || n > s.len() {
        return Err(Error::Precondition(format!("need h(S) = {} <= n = {n} <= |S| = {}", s.height(), s.len())));
    }
    let p = subsum_profile(s, n, s.len())?;
    let ni = n as i64;
    let len = s.len() as i64;
    let hs = p.stabilizer.order() as i64;
    let e = p.outside as i64;
    let forms = [
        p.bound_kneser(s.len()),
        len - (ni - 1) * hs + e * (hs - 1) + p.holes,
        p.bound_cosets,
        p.bound_min,
    ];
    let mut r = CheckReport::new("subsum_kneser");
    r.lhs = p.sums.len() as i64;
    r.rhs = forms[0];
    r.witness("H", p.stabilizer.carrier());
    r.witness("Z", &p.heavy_preimage);
    r.detail = format!("N = {}, e = {e}, rho = {}", p.heavy_count(), p.holes);
    let lhs = r.lhs;
    r.require(lhs >= forms[0], || format!("|Σ_n(S)| = {lhs} < {}", forms[0]));
    r.require(forms.iter().all(|&f| f == forms[0]), || format!("bound forms disagree: {forms:?}"));
    r.require(p.holes >= 0, || format!("rho = {} < 0", p.holes));
    Ok(r)
}

/// The identities for `S*`: `S | S*`, `|S*| = |S| + ρ`, `Σ_n(S*) = Σ_n(S)`.
pub fn check_s_star(s: &GSequence, n: usize) -> Result<CheckReport> {
    let p = subsum_profile(s, n, s.len())?;
    let mut r = CheckReport::new("s_star");
    match build_s_star(s, &p, n) {
        Ok(star) => {
            r.lhs = star.len() as i64;
            r.rhs = s.len() as i64 + p.holes;
            r.require(s.divides(&star), || "S does not divide S*".into());
            let (lhs, rhs) = (r.lhs, r.rhs);
            r.require(lhs == rhs, || format!("|S*| = {lhs} but |S| + rho = {rhs}"));
            let star_sums = nterm_subsums(&star, n)?;
            r.require(star_sums == p.sums, || "Σ_n(S*) differs from Σ_n(S)".into());
        }
        Err(e) if e.is_internal() => r.require(false, || e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(r)
}

/// If `|A| + |B| = |G| + r` with `r >= 1`: `A + B = G` and every element has at
/// least `r` representations. Also the coset form: when `A` and `B` sit in
/// cosets of `L` with `|A| + |B| >= |L| + 1`, `A + B` is an `L`-coset.
pub fn check_pigeonhole(a: &GroupSubset, b: &GroupSubset) -> Result<CheckReport> {
    let g = a.group();
    let ab = sumset(a, b)?;
    let mut r = CheckReport::new("pigeonhole");
    let excess = a.len() as i64 + b.len() as i64 - g.order() as i64;
    let counts = representation_counts(&[a.clone(), b.clone()])?;
    let min_count = counts.iter().copied().min().unwrap_or(0) as i64;
    r.lhs = min_count;
    r.rhs = excess;
    if excess >= 1 {
        r.require(ab.is_full(), || format!("|A+B| = {} < |G|", ab.len()));
        r.require(min_count >= excess, || format!("some element has {min_count} < {excess} representations"));
    }
    let l = join(&affine_span(a)?, &affine_span(b)?);
    r.witness("L", l.carrier());
    let coset_applies = a.len() + b.len() > l.order();
    if coset_applies {
        let x0 = g.add(a.min_element().expect("nonempty"), b.min_element().expect("nonempty"));
        r.require(ab == l.coset(x0), || "A + B is not a coset of L".into());
    }
    if excess < 1 && !coset_applies {
        return Ok(r.with_outcome(Outcome::NotTriggered, "|A| + |B| too small"));
    }
    Ok(r)
}

/// For `|Σ_n(S)| < |S'| - n + 1`: the heavy preimage `Z` affinely spans either
/// `H = H(Σ_n(S))` or the affine span of `supp(S)`.
pub fn check_heavy_span(s: &GSequence, sp: &GSequence, n: usize) -> Result<CheckReport> {
    if !sp.divides(s) {
        return Err(Error::Precondition("S' does not divide S".into()));
    }
    if n == 0 || sp.height() as usize > n || n > sp.len() {
        return Err(Error::Precondition(format!(
            "need h(S') = {} <= n = {n} <= |S'| = {}",
            sp.height(),
            sp.len()
        )));
    }
    let p = subsum_profile(s, n, sp.len())?;
    let mut r = CheckReport::new("heavy_span");
    r.lhs = p.sums.len() as i64;
    r.rhs = sp.len() as i64 - n as i64 + 1;
    if r.lhs >= r.rhs {
        return Ok(r.with_outcome(Outcome::NotTriggered, "Σ_n(S) is not small"));
    }
    r.witness("H", p.stabilizer.carrier());
    r.witness("Z", &p.heavy_preimage);
    if p.heavy_preimage.is_empty() {
        r.require(false, || "no heavy coset".into());
        return Ok(r);
    }
    let span_z = affine_span(&p.heavy_preimage)?;
    let span_s = affine_span(&s.support())?;
    r.witness("span_Z", span_z.carrier());
    r.require(span_z == p.stabilizer || span_z == span_s, || {
        format!("<Z>_* has order {}, H has {}, <supp S>_* has {}", span_z.order(), p.stabilizer.order(), span_s.order())
    });
    r.detail = if span_z == p.stabilizer { "span equals H".into() } else { "span equals <supp S>_*".into() };
    Ok(r)
}
